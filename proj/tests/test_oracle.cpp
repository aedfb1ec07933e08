#include <cmath>
#include <cstdint>

#include <doctest.h>

#include "dysa/oracle.hpp"
#include "dysa/problems.hpp"
#include "dysa/rng.hpp"
#include "dysa/stats.hpp"
#include "dysa/vec.hpp"

using dysa::CallCounter;
using dysa::MiniBatch;
using dysa::OracleModel;
using dysa::ProblemInstance;
using dysa::Vector;

namespace {

ProblemInstance test_problem(OracleModel model, int dim = 6, std::uint64_t seed = 4) {
  dysa::QuadraticOptions opts;
  opts.dim = dim;
  opts.c_target = 0.5;
  opts.L_target = 2.0;
  opts.rotate = true;
  opts.model = model;
  opts.seed = seed;
  return dysa::make_random_quadratic(opts);
}

}  // namespace

TEST_CASE("noiseless oracle returns the exact gradient") {
  const ProblemInstance p = test_problem(OracleModel::noiseless());
  dysa::RngStream s(1);
  const Vector x = dysa::gaussian_vector(s, 6);
  const Vector g = dysa::sample_gradient(p.model, p, x, s);
  CHECK(g == p.grad(x));
}

TEST_CASE("sample gradients are unbiased") {
  for (const OracleModel& model :
       {OracleModel::additive(1.0), OracleModel::random_matrix(0.3)}) {
    const ProblemInstance p = test_problem(model);
    dysa::RngStream s(33);
    const Vector x = dysa::gaussian_vector(s, 6);
    const Vector g = p.grad(x);
    const int m = 200000;
    Vector mean = dysa::zeros(6);
    double sigma_hat = 0.0;
    for (int i = 0; i < m; ++i) {
      const Vector sample = dysa::sample_gradient(p.model, p, x, s);
      dysa::axpy(1.0 / m, sample, mean);
      sigma_hat += dysa::dist_sq(sample, g);
    }
    sigma_hat = std::sqrt(sigma_hat / m);
    // CLT band: |mean - g| <= 4 sigma / sqrt(m) coordinatewise aggregated
    CHECK(dysa::dist(mean, g) < 4.0 * sigma_hat / std::sqrt(static_cast<double>(m)));
  }
}

TEST_CASE("additive noise magnitude is sigma at every point") {
  const ProblemInstance p = test_problem(OracleModel::additive(1.0));
  dysa::RngStream s(7);
  // empirical sqrt(E|eps|^2) over batches of 100 near 0.1 = 1/sqrt(100)
  const Vector x = p.x_star;
  dysa::MomentAccumulator acc;
  CallCounter calls = 0;
  for (int i = 0; i < 3000; ++i) {
    const MiniBatch b = dysa::minibatch_gradient(p.model, p, x, 100, s, calls);
    acc.add(dysa::dist_sq(b.grad, p.grad(x)));
  }
  const double rms = std::sqrt(acc.mean());
  CHECK(rms > 0.085);
  CHECK(rms < 0.115);
}

TEST_CASE("random-matrix noise at the solution matches sigma_star") {
  const ProblemInstance p = test_problem(OracleModel::random_matrix(0.25));
  dysa::RngStream s(19);
  CallCounter calls = 0;
  dysa::MomentAccumulator acc;
  for (int i = 0; i < 4000; ++i) {
    const MiniBatch b = dysa::minibatch_gradient(p.model, p, p.x_star, 16, s, calls);
    acc.add(dysa::dist_sq(b.grad, p.grad(p.x_star)));
  }
  const double rms = std::sqrt(acc.mean());
  CHECK(rms <= 1.05 * p.sigma_star / 4.0);
  CHECK(rms >= 0.95 * p.sigma_star / 4.0);
}

TEST_CASE("batch of one reproduces sample_gradient bit for bit") {
  for (const OracleModel& model :
       {OracleModel::additive(0.7), OracleModel::random_matrix(0.2), OracleModel::noiseless()}) {
    const ProblemInstance p = test_problem(model);
    dysa::RngStream sa(55);
    dysa::RngStream sb(55);
    const Vector x = {0.3, -1.0, 0.7, 0.0, 2.0, -0.4};
    const Vector one = dysa::sample_gradient(p.model, p, x, sa);
    CallCounter calls = 0;
    const MiniBatch batch = dysa::minibatch_gradient(p.model, p, x, 1, sb, calls);
    CHECK(batch.grad == one);
    CHECK(batch.count == 1);
    CHECK(calls == 1);
  }
}

TEST_CASE("call accounting accumulates batch sizes") {
  const ProblemInstance p = test_problem(OracleModel::additive(1.0));
  dysa::RngStream s(3);
  CallCounter calls = 0;
  dysa::minibatch_gradient(p.model, p, p.x_star, 5, s, calls);
  dysa::minibatch_gradient(p.model, p, p.x_star, 12, s, calls);
  CHECK(calls == 17);
  CHECK_THROWS_AS(dysa::minibatch_gradient(p.model, p, p.x_star, 0, s, calls),
                  std::invalid_argument);
}

TEST_CASE("aggregate and literal batches share mean and spread") {
  for (const OracleModel& model :
       {OracleModel::additive(1.2), OracleModel::random_matrix(0.3)}) {
    const ProblemInstance p = test_problem(model);
    dysa::RngStream s(101);
    const Vector x = dysa::gaussian_vector(s, 6);
    const Vector g = p.grad(x);
    const std::int64_t n = 8;
    const int reps = 20000;
    dysa::MomentAccumulator agg, lit;
    CallCounter calls = 0;
    for (int i = 0; i < reps; ++i) {
      dysa::RngStream sa = s.child(static_cast<std::uint32_t>(i)).child(0);
      dysa::RngStream sl = s.child(static_cast<std::uint32_t>(i)).child(1);
      agg.add(dysa::dist_sq(dysa::minibatch_gradient(p.model, p, x, n, sa, calls).grad, g));
      lit.add(dysa::dist_sq(dysa::minibatch_gradient_literal(p.model, p, x, n, sl, calls).grad, g));
    }
    // same law => second moments agree within a CLT band
    const double band = 4.0 * (agg.standard_error() + lit.standard_error());
    CHECK(std::abs(agg.mean() - lit.mean()) < band);
  }
}

TEST_CASE("variance_decay_bound closed form") {
  CHECK(dysa::variance_decay_bound(2.0, 0.0, 5.0, 4) == doctest::Approx(1.0));
  CHECK(dysa::variance_decay_bound(0.0, 3.0, 2.0, 9) == doctest::Approx(2.0));
  CHECK(dysa::variance_decay_bound(1.0, 2.0, 0.5, 16) == doctest::Approx(0.5));
  CHECK_THROWS_AS(dysa::variance_decay_bound(1.0, 1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("empirical batch error respects the decay bound") {
  const ProblemInstance p = test_problem(OracleModel::random_matrix(0.3));
  dysa::RngStream s(23);
  Vector x = p.x_star;
  x[0] += 2.0;
  const double dist = dysa::dist(x, p.x_star);
  const Vector g = p.grad(x);
  for (std::int64_t n : {std::int64_t{1}, std::int64_t{16}, std::int64_t{256}}) {
    CallCounter calls = 0;
    dysa::MomentAccumulator acc;
    for (int i = 0; i < 4000; ++i)
      acc.add(dysa::dist_sq(dysa::minibatch_gradient(p.model, p, x, n, s, calls).grad, g));
    const double rms = std::sqrt(acc.mean());
    CHECK(rms <= 1.05 * dysa::variance_decay_bound(p.sigma_star, p.sigma_lip, dist, n));
  }
}

TEST_CASE("estimate_pointwise_sigma recovers the additive level") {
  const ProblemInstance p = test_problem(OracleModel::additive(1.0));
  dysa::RngStream s(41);
  const double est = dysa::estimate_pointwise_sigma(p.model, p, p.x_star, 100000, s);
  CHECK(est > 0.99);
  CHECK(est < 1.01);
}

TEST_CASE("estimate_pointwise_sigma tracks the multiplicative law") {
  const ProblemInstance p = test_problem(OracleModel::random_matrix(0.3));
  dysa::RngStream s(43);
  Vector x = p.x_star;
  x[2] -= 3.0;
  const double truth = 0.3 * std::sqrt(6.0 * (1.0 + dysa::norm_sq(x)));
  const double est = dysa::estimate_pointwise_sigma(p.model, p, x, 100000, s);
  CHECK(std::abs(est - truth) < 0.02 * truth);
}

TEST_CASE("estimate_sigma_lip distinguishes the two noise models") {
  dysa::RngStream s(47);
  std::vector<Vector> probes;
  for (int i = 0; i < 4; ++i) {
    Vector v = dysa::gaussian_vector(s, 6);
    probes.push_back(dysa::scaled(v, 3.0 / dysa::norm(v)));
  }

  const ProblemInstance add = test_problem(OracleModel::additive(1.0));
  const double slope_add =
      dysa::estimate_sigma_lip(add.model, add, add.x_star, probes, 20000, s);
  CHECK(slope_add >= 0.0);
  CHECK(slope_add <= 0.05 * 1.0);

  const ProblemInstance mul = test_problem(OracleModel::random_matrix(0.3));
  const double slope_mul =
      dysa::estimate_sigma_lip(mul.model, mul, mul.x_star, probes, 20000, s);
  CHECK(slope_mul > 0.0);
  CHECK(slope_mul <= 1.05 * mul.sigma_lip);
  CHECK(slope_mul >= 0.5 * mul.sigma_lip);
}

TEST_CASE("mean squared operator norm") {
  const ProblemInstance add = test_problem(OracleModel::additive(1.0));
  dysa::RngStream s(53);
  // deterministic matrix: exactly L^2
  CHECK(dysa::estimate_mean_sq_opnorm(add.model, add, 5, s) ==
        doctest::Approx(add.L * add.L).epsilon(1e-6));

  const ProblemInstance mul = test_problem(OracleModel::random_matrix(0.3));
  const double est = dysa::estimate_mean_sq_opnorm(mul.model, mul, 400, s);
  // fluctuations only add energy on average
  CHECK(est > mul.L * mul.L);
}
