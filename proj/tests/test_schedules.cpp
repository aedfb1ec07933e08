#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <doctest.h>

#include "dysa/schedules.hpp"

using dysa::BetaVariant;
using dysa::SmoothPolicy;
using dysa::StrongPolicy;

TEST_CASE("linear momentum weights are (1+t)/2") {
  CHECK(dysa::momentum_weight(1, BetaVariant::linear) == 1.0);
  CHECK(dysa::momentum_weight(3, BetaVariant::linear) == 2.0);
  CHECK(dysa::momentum_weight(7, BetaVariant::linear) == 4.0);
  CHECK_THROWS_AS(dysa::momentum_weight(0, BetaVariant::linear), std::invalid_argument);
}

TEST_CASE("exact momentum weights solve the recursion") {
  CHECK(dysa::momentum_weight(1, BetaVariant::exact) == 1.0);
  // beta_2^2 - beta_2 = 1 => beta_2 = (1 + sqrt(5))/2
  CHECK(dysa::momentum_weight(2, BetaVariant::exact) ==
        doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-15));
}

TEST_CASE("momentum sequence residuals") {
  dysa::MomentumSequence lin(BetaVariant::linear);
  dysa::MomentumSequence ex(BetaVariant::exact);
  for (int t = 1; t <= 2000; ++t) {
    CHECK(lin.recursion_residual() == -0.25);
    CHECK(std::abs(ex.recursion_residual()) <= 1e-12);
    CHECK(lin.beta() == dysa::momentum_weight(t, BetaVariant::linear));
    lin.advance();
    ex.advance();
  }
  CHECK(lin.t() == 2001);
}

TEST_CASE("smooth batch sizes at the pinned points") {
  // N0=2, b=1/2, delta=0: t=1 -> 2*floor(27*ln(3)^2) = 2*floor(32.58) = 64
  CHECK(dysa::smooth_batch_size(1, 2, 0.5, 0.0) == 64);
  // N0=1, t=2 -> floor(64*ln(4)^2) = floor(122.97) = 122
  CHECK(dysa::smooth_batch_size(2, 1, 0.5, 0.0) == 122);
}

TEST_CASE("smooth batch sizes grow monotonically") {
  std::int64_t prev = 0;
  for (std::int64_t t = 1; t <= 10000; t = t < 100 ? t + 1 : t * 2) {
    const std::int64_t n = dysa::smooth_batch_size(t, 1, 0.5, 0.0);
    CHECK(n > prev);
    prev = n;
  }
  CHECK_THROWS_AS(dysa::smooth_batch_size(1, 0, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dysa::smooth_batch_size(0, 1, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dysa::smooth_batch_size(1'000'000'000, 1, 0.5, 0.0), std::overflow_error);
}

TEST_CASE("geometric batch sizes") {
  CHECK(dysa::geometric_batch_size(1, 1, 0.5) == 2);
  CHECK(dysa::geometric_batch_size(3, 1, 0.5) == 8);
  CHECK(dysa::geometric_batch_size(2, 3, 0.5) == 12);
  CHECK(dysa::geometric_batch_size(1, 1, 0.9) == 1);  // floor(1.11) = 1
  CHECK_THROWS_AS(dysa::geometric_batch_size(1, 1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(dysa::geometric_batch_size(500, 1, 0.5), std::overflow_error);
}

TEST_CASE("smooth threshold pinned values") {
  // phi=mu=b=1/2, n0=2, (alpha1 sigma_lip)^2 = 1, delta=0 -> 42
  CHECK(dysa::tail_threshold_smooth(0.5, 2, 0.5, 0.0, 1.0) == 42);
  // large shift clamps to 1
  CHECK(dysa::tail_threshold_smooth(0.5, 2, 0.5, 44.0, 1.0) == 1);
  // noiseless: threshold is immediate
  CHECK(dysa::tail_threshold_smooth(0.5, 2, 0.5, 0.0, 0.0) == 1);
}

TEST_CASE("strong threshold pinned values") {
  // argument of the log = e^2 with zeta = 1/e -> exactly 2
  // pick mu=1/2, n0=1, L=1, sigma_lip chosen so 2 mu^2 s^2/((1-mu) phi) = e^2
  const double zeta = std::exp(-1.0);
  const double phi = 0.1;
  const double s2 = std::exp(2.0) * (1.0 - 0.5) * phi / (2.0 * 0.25);
  CHECK(dysa::tail_threshold_strong(0.5, phi, zeta, 1, std::sqrt(s2), 1.0) == 2);
  // base 2, argument 400 -> ceil(8.64) = 9
  const double s2b = 400.0 * (1.0 - 0.5) * phi / (2.0 * 0.25);
  CHECK(dysa::tail_threshold_strong(0.5, phi, 0.5, 1, std::sqrt(s2b), 1.0) == 9);
  // noiseless clamps to 1
  CHECK(dysa::tail_threshold_strong(0.5, phi, 0.5, 1, 0.0, 1.0) == 1);
}

TEST_CASE("contraction factor") {
  // mu=0.5, c/L=0.2: mu c/(2L) = 0.05. phi=0.02 -> 1 - 0.05 + 0.02 = 0.97
  CHECK(dysa::contraction_rho(0.5, 1.0, 5.0, 0.02, 0.9) == doctest::Approx(0.97));
  // zeta binds when larger
  CHECK(dysa::contraction_rho(0.5, 1.0, 5.0, 0.02, 0.99) == doctest::Approx(0.99));
  // phi at the boundary is not a contraction
  CHECK_THROWS_AS(dysa::contraction_rho(0.5, 1.0, 5.0, 0.05, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(dysa::contraction_rho(0.5, 1.0, 5.0, 0.0, 0.9), std::invalid_argument);
}

TEST_CASE("matched zeta") {
  // mu=0.5, c/L=0.2, phi=0.02: zeta = 1 - a_frac * 0.07
  CHECK(dysa::matched_zeta(0.5, 1.0, 5.0, 0.02, 0.4) == doctest::Approx(0.972));
  CHECK(dysa::max_matched_a(0.5, 1.0, 5.0, 0.02) == doctest::Approx(3.0 / 7.0));
  // a_frac = 1 gives zeta = 0.93 below the contraction floor 0.97
  CHECK_THROWS_AS(dysa::matched_zeta(0.5, 1.0, 5.0, 0.02, 1.0), std::invalid_argument);
  // matched zeta makes the sampling rate binding
  const double z = dysa::matched_zeta(0.5, 1.0, 5.0, 0.02, 0.4);
  CHECK(dysa::contraction_rho(0.5, 1.0, 5.0, 0.02, z) == z);
}

TEST_CASE("smooth policy accessors and validation") {
  SmoothPolicy p;
  p.mu = 0.5;
  p.a = 1.0;
  p.L = 1.0;
  p.n0 = 4;
  p.validate();
  CHECK(p.alpha() == doctest::Approx(0.5 / 1.5));
  CHECK(p.batch(1) == 2 * dysa::smooth_batch_size(1, 2, p.b, p.delta));

  SmoothPolicy bad = p;
  bad.mu = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.a = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.phi = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  SmoothPolicy fixed = p;
  fixed.fixed_batch = 7;
  CHECK(fixed.batch(1) == 7);
  CHECK(fixed.batch(100) == 7);
}

TEST_CASE("strong policy accessors and validation") {
  StrongPolicy p;
  p.mu = 0.9;
  p.zeta = 0.5;
  p.n0 = 1;
  p.phi = 0.02;
  p.L = 10.0;
  p.c = 1.0;
  p.validate();
  CHECK(p.alpha() == doctest::Approx(0.09));
  CHECK(p.lambda() == doctest::Approx(1.0 - 0.09));
  CHECK(p.batch(3) == 8);
  CHECK(p.rho() == doctest::Approx(dysa::contraction_rho(0.9, 1.0, 10.0, 0.02, 0.5)));
  // delta_aux = 2 (alpha sigma_lip)^2 / ((1 - L alpha) n0), L alpha = mu
  const double sl = 2.0;
  CHECK(p.delta_aux(sl) == doctest::Approx(2.0 * 0.09 * 0.09 * 4.0 / 0.1));
  CHECK(p.beta_aux(3.0) == doctest::Approx(2.0 * 0.09 * 0.09 * 9.0 / 0.1));
  CHECK(p.tail_threshold(0.0) == 1);

  StrongPolicy bad = p;
  bad.c = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.zeta = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("smooth tail mass decreases in t0 and certification bumps when needed") {
  SmoothPolicy p;
  p.mu = 0.5;
  p.a = 1.0;
  p.L = 1.0;
  p.n0 = 2;
  p.b = 0.5;
  p.delta = 0.0;
  p.phi = 0.5;
  const double m1 = dysa::smooth_tail_mass(p, 1);
  const double m10 = dysa::smooth_tail_mass(p, 10);
  const double m100 = dysa::smooth_tail_mass(p, 100);
  CHECK(m1 > m10);
  CHECK(m10 > m100);
  CHECK(m100 > 0.0);

  const double sigma_lip = 1.0 / p.alpha();  // alpha1*sigma_lip = 1, the pinned case
  const dysa::SmoothTailCertificate cert = dysa::certify_smooth_tail(p, sigma_lip);
  CHECK(cert.t0_formula == 42);
  CHECK(cert.t0 >= cert.t0_formula);
  CHECK(cert.tail <= cert.gamma);
  CHECK(dysa::smooth_tail_mass(p, cert.t0) <= p.phi / (15.0 * sigma_lip * sigma_lip));
}

TEST_CASE("gap envelope closed form at a pinned point") {
  dysa::GapBoundInputs in;
  in.gap1 = 1.0;
  in.s1_dist_sq = 1.0;
  in.sigma_star = 1.0;
  in.sigma_lip = 1.0;
  in.J = 4.0;
  in.mu = 0.5;
  in.a = 1.0;
  in.L = 1.0;
  in.b = 0.5;
  in.delta = 44.0;
  in.n0 = 2;
  // Lambda = L/mu + a/(mu sqrt(n0)) = 2 + sqrt(2)
  const double lambda = 2.0 + std::sqrt(2.0);
  const double logf = std::pow(std::log(2.0 + 44.0), 1.0);  // 2b = 1
  const double term_star = lambda * (3.0 * 0.25 / (4.0 * 0.5 * 1.0 * 0.5 * logf));
  const double term_lip = lambda * (15.0 * 0.25 / (4.0 * 0.5 * 2.0 * 0.5 * logf)) * 4.0;
  const double expect = (4.0 * 1.0 + 2.0 * lambda * 1.0 + term_star + term_lip) / 144.0;
  CHECK(dysa::accelerated_gap_bound(10, in) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("gap envelope scales as (t+2)^-2 and drops noise terms cleanly") {
  dysa::GapBoundInputs in;
  in.gap1 = 2.0;
  in.s1_dist_sq = 3.0;
  in.sigma_star = 0.0;
  in.sigma_lip = 0.0;
  in.J = 0.0;
  in.mu = 0.5;
  in.a = 1.0;
  in.L = 1.0;
  in.n0 = 1;
  const double lambda = 2.0 + 2.0;  // L/mu + a/(mu*1)
  const double b10 = dysa::accelerated_gap_bound(10, in);
  CHECK(b10 == doctest::Approx((4.0 * 2.0 + 2.0 * lambda * 3.0) / 144.0).epsilon(1e-12));
  const double b22 = dysa::accelerated_gap_bound(22, in);
  CHECK(b10 / b22 == doctest::Approx(576.0 / 144.0).epsilon(1e-12));
}

TEST_CASE("iterate bound pinned values") {
  dysa::IterateBoundInputs in;
  in.alpha_t0 = 1.0;
  in.beta_t0 = 1.0;
  in.gaps_upto_t0 = {0.0};
  in.s_t0_dist_sq = 0.0;
  in.sigma_star = 1.0;
  in.sigma_lip = 1.0;
  in.gamma = 1.0 / 30.0;  // denominator 1 - 15/30 = 1/2
  CHECK(dysa::iterate_l2_bound(in) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // sigma_lip = 0: numerator only, no sigma_star/(3 sigma_lip^2) term
  in.sigma_lip = 0.0;
  in.gaps_upto_t0 = {2.0, 1.0};
  in.s_t0_dist_sq = 5.0;
  in.alpha_t0 = 0.5;
  in.beta_t0 = 2.0;
  // max_t 2*0.5*4*gap = 8, plus 5
  CHECK(dysa::iterate_l2_bound(in) == doctest::Approx(13.0).epsilon(1e-12));
}

TEST_CASE("linear rate constants") {
  dysa::LinearRateInputs in;
  in.x1_dist_sq = 4.0;
  in.mu = 0.5;
  in.c = 1.0;
  in.L = 2.0;
  in.n0 = 1;
  in.sigma_star = 0.0;
  in.sigma_lip = 0.0;
  in.phi = 0.1;
  in.t0 = 1;
  const dysa::LinearRateConstants nc = dysa::linear_rate_constants(in);
  CHECK(nc.lambda == doctest::Approx(1.0 - 0.25));
  // noiseless: C = x1_dist_sq / lambda
  CHECK(nc.C == doctest::Approx(4.0 / 0.75).epsilon(1e-12));
  CHECK(nc.Q == 0.0);

  in.sigma_star = 3.0;
  in.sigma_lip = 2.0;
  in.max_dist_sq_before_t0 = 1.5;
  in.t0 = 4;
  const dysa::LinearRateConstants wc = dysa::linear_rate_constants(in);
  CHECK(wc.Q == doctest::Approx(4.0 * 1.5));
  const double noise =
      (4.0 * 0.5 / ((1.0 - 0.5) * 1.0 * 2.0 * 1.0)) * (wc.Q + 2.0 * 9.0);
  CHECK(wc.C == doctest::Approx(4.0 / 0.75 + noise).epsilon(1e-12));
  CHECK(wc.C >= wc.C1);
}

TEST_CASE("cumulative smooth batch growth follows the quartic-log law") {
  // sum_{t<=T} N_t ~ T^4 ln(T)^2 / 4 for n0=1, b=1/2, delta=0
  for (const std::int64_t T : {std::int64_t{200}, std::int64_t{2000}}) {
    long double sum = 0.0L;
    for (std::int64_t t = 1; t <= T; ++t)
      sum += static_cast<long double>(dysa::smooth_batch_size(t, 1, 0.5, 0.0));
    const long double law = static_cast<long double>(T) * T * T * T *
                            std::log(static_cast<long double>(T)) *
                            std::log(static_cast<long double>(T));
    const double ratio = static_cast<double>(sum / law);
    CHECK(ratio > 0.1);
    CHECK(ratio < 10.0);
  }
}
