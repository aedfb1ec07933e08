#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "dysa/prox.hpp"
#include "dysa/rng.hpp"
#include "dysa/vec.hpp"

using dysa::ConstraintSpec;
using dysa::RegularizerSpec;
using dysa::Vector;

TEST_CASE("plain gradient step when unconstrained and unregularized") {
  const Vector y = {1.0, 1.0};
  const Vector u = {2.0, 0.0};
  const Vector z = dysa::prox_step(RegularizerSpec::zero(), ConstraintSpec::all_space(), y, u, 0.5);
  CHECK(z[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(z[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("l1 prox soft-thresholds the gradient step") {
  // y - alpha*u = (2, -0.5, 0), threshold alpha*lambda = 1
  const Vector y = {3.0, 0.5, 1.0};
  const Vector u = {1.0, 1.0, 1.0};
  const Vector z =
      dysa::prox_step(RegularizerSpec::l1(1.0), ConstraintSpec::all_space(), y, u, 1.0);
  CHECK(z[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(z[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(z[2] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("squared_l2 prox shrinks toward the origin") {
  // argmin u*v + (v-y)^2/(2a) + lambda v^2 = (y - a*u)/(1 + 2*lambda*a)
  const Vector y = {3.0};
  const Vector u = {1.0};
  const Vector z =
      dysa::prox_step(RegularizerSpec::squared_l2(0.5), ConstraintSpec::all_space(), y, u, 1.0);
  CHECK(z[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("soft_threshold closed form") {
  CHECK(dysa::soft_threshold(3.0, 1.0) == 2.0);
  CHECK(dysa::soft_threshold(-3.0, 1.0) == -2.0);
  CHECK(dysa::soft_threshold(0.5, 1.0) == 0.0);
  CHECK(dysa::soft_threshold(-0.5, 1.0) == 0.0);
}

TEST_CASE("regularizer values") {
  CHECK(dysa::reg_value(RegularizerSpec::zero(), {5.0, -5.0}) == 0.0);
  CHECK(dysa::reg_value(RegularizerSpec::l1(2.0), {1.0, -3.0}) == doctest::Approx(8.0));
  CHECK(dysa::reg_value(RegularizerSpec::squared_l2(0.5), {2.0}) == doctest::Approx(2.0));
  CHECK(dysa::reg_value(RegularizerSpec::elastic_net(1.0, 1.0), {1.0, 1.0}) ==
        doctest::Approx(4.0));
}

TEST_CASE("support table") {
  const auto zero = RegularizerSpec::zero();
  const auto l1 = RegularizerSpec::l1(1.0);
  const auto sq = RegularizerSpec::squared_l2(1.0);
  const auto en = RegularizerSpec::elastic_net(1.0, 1.0);
  const auto space = ConstraintSpec::all_space();
  const auto box = ConstraintSpec::box(-1.0, 1.0);
  const auto ball = ConstraintSpec::ball(2.0);

  for (const auto& reg : {zero, l1, sq, en}) {
    CHECK(dysa::prox_supported(reg, space));
    CHECK(dysa::prox_supported(reg, box));
  }
  CHECK(dysa::prox_supported(zero, ball));
  CHECK_FALSE(dysa::prox_supported(l1, ball));
  CHECK_FALSE(dysa::prox_supported(sq, ball));
  CHECK_FALSE(dysa::prox_supported(en, ball));
}

TEST_CASE("box projection clips the gradient step") {
  const Vector y = {0.5, -0.5};
  const Vector u = {-10.0, 10.0};
  const Vector z =
      dysa::prox_step(RegularizerSpec::zero(), ConstraintSpec::box(-1.0, 1.0), y, u, 1.0);
  CHECK(z[0] == 1.0);
  CHECK(z[1] == -1.0);
}

TEST_CASE("ball projection rescales radially") {
  const Vector y = {3.0, 4.0};
  const Vector u = {0.0, 0.0};
  const Vector z =
      dysa::prox_step(RegularizerSpec::zero(), ConstraintSpec::ball(1.0), y, u, 1.0);
  CHECK(z[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(dysa::norm(z) == doctest::Approx(1.0).epsilon(1e-12));

  // interior points are untouched
  const Vector w = dysa::prox_step(RegularizerSpec::zero(), ConstraintSpec::ball(10.0),
                                   y, u, 1.0);
  CHECK(w == y);
}

TEST_CASE("ball with off-origin center") {
  const Vector y = {3.0, 0.0};
  const Vector u = {0.0, 0.0};
  const auto cons = ConstraintSpec::ball(1.0, {1.0, 0.0});
  const Vector z = dysa::prox_step(RegularizerSpec::zero(), cons, y, u, 1.0);
  CHECK(z[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cons.contains(z));
}

TEST_CASE("contains handles every constraint kind") {
  CHECK(ConstraintSpec::all_space().contains({1e30, -1e30}));
  const auto box = ConstraintSpec::box(-1.0, 1.0);
  CHECK(box.contains({1.0, -1.0}));
  CHECK_FALSE(box.contains({1.1, 0.0}));
  const auto ball = ConstraintSpec::ball(2.0);
  CHECK(ball.contains({2.0, 0.0}));
  CHECK_FALSE(ball.contains({2.1, 0.0}));
}

TEST_CASE("invalid arguments are rejected") {
  const Vector y = {1.0};
  const Vector u = {1.0};
  CHECK_THROWS_AS(dysa::prox_step(RegularizerSpec::zero(), ConstraintSpec::all_space(), y, u, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(dysa::prox_step(RegularizerSpec::zero(), ConstraintSpec::all_space(), y, u, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      dysa::prox_step(RegularizerSpec::zero(), ConstraintSpec::all_space(), y, {1.0, 2.0}, 1.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      dysa::prox_step(RegularizerSpec::l1(1.0), ConstraintSpec::ball(1.0), y, u, 1.0),
      std::invalid_argument);
  CHECK_THROWS_AS(RegularizerSpec::l1(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(RegularizerSpec::elastic_net(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConstraintSpec::box(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConstraintSpec::ball(0.0), std::invalid_argument);
}

TEST_CASE("prox optimality via the subgradient of the separable objective") {
  // For box x l1, the prox solution must satisfy the KKT conditions of
  // min <u, v-y> + |v-y|^2/(2a) + lambda|v|_1 over the box, checked
  // coordinate by coordinate.
  dysa::RngStream s(61);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t d = 1 + s.next_below(4);
    const double lambda = s.uniform(0.1, 2.0);
    const double alpha = s.uniform(0.05, 1.5);
    const double lo = s.uniform(-2.0, -0.2);
    const double hi = s.uniform(0.2, 2.0);
    Vector y(d), u(d);
    for (std::size_t i = 0; i < d; ++i) {
      y[i] = s.uniform(-3.0, 3.0);
      u[i] = s.uniform(-3.0, 3.0);
    }
    const auto reg = RegularizerSpec::l1(lambda);
    const auto cons = ConstraintSpec::box(lo, hi);
    const Vector z = dysa::prox_step(reg, cons, y, u, alpha);
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(z[i] >= lo - 1e-12);
      CHECK(z[i] <= hi + 1e-12);
      // st = unconstrained minimizer; clipping to the box is optimal because
      // the coordinate objective is convex in one variable
      const double st = dysa::soft_threshold(y[i] - alpha * u[i], alpha * lambda);
      const double clipped = std::min(hi, std::max(lo, st));
      CHECK(z[i] == doctest::Approx(clipped).epsilon(1e-12));
    }
  }
}
