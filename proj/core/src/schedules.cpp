#include "dysa/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dysa {

namespace {

// Numeric summation horizon for tail-mass certificates. Beyond it the series
// is covered by the integral remainder, which is still a genuine upper bound.
constexpr std::int64_t kTailHorizon = 1000000;

__float128 qsqrt(__float128 x) {
  if (x <= 0) return 0;
  __float128 r = static_cast<__float128>(std::sqrt(static_cast<double>(x)));
  for (int i = 0; i < 3; ++i) r = (r + x / r) / 2;  // Newton, quadratic cleanup
  return r;
}

long double smooth_batch_real(std::int64_t t, std::int64_t n0, double b, double delta) {
  const long double base =
      static_cast<long double>(t) + 2.0L + static_cast<long double>(delta);
  const long double raw =
      powl(base, 3.0L) * powl(logl(base), 1.0L + 2.0L * static_cast<long double>(b));
  return static_cast<long double>(n0) * floorl(raw);
}

void check_smooth_batch_params(std::int64_t t, std::int64_t n0, double b, double delta) {
  if (t < 1) throw std::invalid_argument("smooth_batch_size: t must be >= 1");
  if (n0 < 1) throw std::invalid_argument("smooth_batch_size: n0 must be >= 1");
  if (!(b > 0.0)) throw std::invalid_argument("smooth_batch_size: b must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("smooth_batch_size: delta must be >= 0");
}

// One series term: alpha^2 beta_{t+1}^2 / ((1 - L alpha) N_{t+1}).
long double tail_term(const SmoothPolicy& p, std::int64_t t, double beta_next) {
  const long double alpha = p.alpha();
  const long double denom = (1.0L - static_cast<long double>(p.L) * alpha) *
                            smooth_batch_real(t + 1, p.n0, p.b, p.delta);
  const long double bn = beta_next;
  return alpha * alpha * bn * bn / denom;
}

// Integral remainder for the series past `horizon`, inflated by 0.2% when the
// exact momentum variant is in play: its weights exceed the linear ones by at
// most 1/2 + ln(t+1)/4, which the inflation absorbs for t >= the horizon.
long double tail_remainder(const SmoothPolicy& p, std::int64_t horizon) {
  const long double alpha = p.alpha();
  const long double one_minus = 1.0L - static_cast<long double>(p.L) * alpha;
  const long double log_pow = powl(
      logl(static_cast<long double>(horizon) + 2.0L + static_cast<long double>(p.delta)),
      2.0L * static_cast<long double>(p.b));
  const long double safety = p.beta_variant == BetaVariant::exact ? 1.002L : 1.0L;
  return safety * alpha * alpha /
         (4.0L * one_minus * static_cast<long double>(p.n0) *
          (2.0L * static_cast<long double>(p.b) * log_pow));
}

// Analytic-only tail bound from t0 (used when t0 lies past the horizon).
long double tail_analytic(const SmoothPolicy& p, std::int64_t t0) {
  return tail_remainder(p, t0 - 1);
}

}  // namespace

double momentum_weight(std::int64_t t, BetaVariant variant) {
  if (t < 1) throw std::invalid_argument("momentum_weight: t must be >= 1");
  if (variant == BetaVariant::linear) return (1.0 + static_cast<double>(t)) / 2.0;
  MomentumSequence seq(BetaVariant::exact);
  while (seq.t() < t) seq.advance();
  return seq.beta();
}

MomentumSequence::MomentumSequence(BetaVariant variant) : variant_(variant), beta_(1) {
  beta_next_ = variant_ == BetaVariant::linear
                   ? static_cast<__float128>(3) / 2
                   : (1 + qsqrt(1 + 4 * beta_ * beta_)) / 2;
}

double MomentumSequence::beta() const { return static_cast<double>(beta_); }

double MomentumSequence::beta_next() const { return static_cast<double>(beta_next_); }

void MomentumSequence::advance() {
  ++t_;
  beta_ = beta_next_;
  beta_next_ = variant_ == BetaVariant::linear
                   ? static_cast<__float128>(2 + t_) / 2
                   : (1 + qsqrt(1 + 4 * beta_ * beta_)) / 2;
}

double MomentumSequence::recursion_residual() const {
  return static_cast<double>(beta_next_ * beta_next_ - beta_next_ - beta_ * beta_);
}

std::int64_t smooth_batch_size(std::int64_t t, std::int64_t n0, double b, double delta) {
  check_smooth_batch_params(t, n0, b, delta);
  const long double val = smooth_batch_real(t, n0, b, delta);
  if (val > static_cast<long double>(std::numeric_limits<std::int64_t>::max()))
    throw std::overflow_error("smooth_batch_size: batch exceeds int64 at t=" +
                              std::to_string(t));
  return static_cast<std::int64_t>(val);
}

std::int64_t geometric_batch_size(std::int64_t t, std::int64_t n0, double zeta) {
  if (t < 1) throw std::invalid_argument("geometric_batch_size: t must be >= 1");
  if (n0 < 1) throw std::invalid_argument("geometric_batch_size: n0 must be >= 1");
  if (!(zeta > 0.0 && zeta < 1.0))
    throw std::invalid_argument("geometric_batch_size: zeta must be in (0,1)");
  const long double val =
      static_cast<long double>(n0) *
      floorl(expl(-static_cast<long double>(t) * logl(static_cast<long double>(zeta))));
  if (val > static_cast<long double>(std::numeric_limits<std::int64_t>::max()))
    throw std::overflow_error("geometric_batch_size: batch exceeds int64 at t=" +
                              std::to_string(t));
  return static_cast<std::int64_t>(val);
}

std::int64_t tail_threshold_smooth(double phi, std::int64_t n0, double b, double delta,
                                   double alpha1_sigma_lip) {
  if (!(phi > 0.0 && phi < 1.0))
    throw std::invalid_argument("tail_threshold_smooth: phi must be in (0,1)");
  if (n0 < 1) throw std::invalid_argument("tail_threshold_smooth: n0 must be >= 1");
  if (!(b > 0.0)) throw std::invalid_argument("tail_threshold_smooth: b must be positive");
  if (!(delta >= 0.0))
    throw std::invalid_argument("tail_threshold_smooth: delta must be >= 0");
  if (!(alpha1_sigma_lip >= 0.0))
    throw std::invalid_argument("tail_threshold_smooth: noise slope must be >= 0");
  if (alpha1_sigma_lip == 0.0) return 1;
  const long double arg = 15.0L * static_cast<long double>(alpha1_sigma_lip) *
                          static_cast<long double>(alpha1_sigma_lip) /
                          (8.0L * static_cast<long double>(phi) *
                           static_cast<long double>(n0) * static_cast<long double>(b));
  const long double raw =
      expl(powl(arg, 1.0L / (2.0L * static_cast<long double>(b)))) - 1.0L -
      static_cast<long double>(delta);
  const long double ceiled = ceill(raw);
  if (ceiled < 1.0L) return 1;
  if (ceiled > 1e18L)
    throw std::overflow_error("tail_threshold_smooth: threshold exceeds int64");
  return static_cast<std::int64_t>(ceiled);
}

std::int64_t tail_threshold_strong(double mu, double phi, double zeta, std::int64_t n0,
                                   double sigma_lip, double L) {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("tail_threshold_strong: mu must be in (0,1)");
  if (!(phi > 0.0)) throw std::invalid_argument("tail_threshold_strong: phi must be positive");
  if (!(zeta > 0.0 && zeta < 1.0))
    throw std::invalid_argument("tail_threshold_strong: zeta must be in (0,1)");
  if (n0 < 1) throw std::invalid_argument("tail_threshold_strong: n0 must be >= 1");
  if (!(sigma_lip >= 0.0))
    throw std::invalid_argument("tail_threshold_strong: noise slope must be >= 0");
  if (!(L > 0.0)) throw std::invalid_argument("tail_threshold_strong: L must be positive");
  if (sigma_lip == 0.0) return 1;
  const double arg = 2.0 * mu * mu * sigma_lip * sigma_lip / ((1.0 - mu) * phi *
                     static_cast<double>(n0) * L * L);
  const double raw = std::log(arg) / std::log(1.0 / zeta);
  const double ceiled = std::ceil(raw);
  return ceiled < 1.0 ? 1 : static_cast<std::int64_t>(ceiled);
}

double contraction_rho(double mu, double c, double L, double phi, double zeta) {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("contraction_rho: mu must be in (0,1)");
  if (!(c > 0.0 && L >= c))
    throw std::invalid_argument("contraction_rho: need 0 < c <= L");
  if (!(zeta > 0.0 && zeta < 1.0))
    throw std::invalid_argument("contraction_rho: zeta must be in (0,1)");
  const double cap = mu * c / (2.0 * L);
  if (!(phi > 0.0 && phi < cap))
    throw std::invalid_argument("contraction_rho: phi must be in (0, mu*c/(2L)) = (0, " +
                                std::to_string(cap) + ")");
  return std::max(1.0 - cap + phi, zeta);
}

double matched_zeta(double mu, double c, double L, double phi, double a_frac) {
  if (!(a_frac > 0.0 && a_frac <= 1.0))
    throw std::invalid_argument("matched_zeta: a_frac must be in (0,1]");
  const double cap = mu * c / (2.0 * L);
  if (!(phi > 0.0 && phi < cap))
    throw std::invalid_argument("matched_zeta: phi must be in (0, mu*c/(2L))");
  const double zeta = 1.0 - a_frac * (cap + phi);
  const double floor_rho = 1.0 - cap + phi;
  if (zeta < floor_rho)
    throw std::invalid_argument(
        "matched_zeta: a_frac too large for the sampling rate to bind; admissible max is " +
        std::to_string(max_matched_a(mu, c, L, phi)));
  if (!(zeta > 0.0 && zeta < 1.0))
    throw std::invalid_argument("matched_zeta: resulting zeta outside (0,1)");
  return zeta;
}

double max_matched_a(double mu, double c, double L, double phi) {
  const double cap = mu * c / (2.0 * L);
  if (!(phi > 0.0 && phi < cap))
    throw std::invalid_argument("max_matched_a: phi must be in (0, mu*c/(2L))");
  return (cap - phi) / (cap + phi);
}

double SmoothPolicy::alpha() const {
  return mu / (L + a / std::sqrt(static_cast<double>(n0)));
}

std::int64_t SmoothPolicy::batch(std::int64_t t) const {
  if (fixed_batch >= 1) return fixed_batch;
  return smooth_batch_size(t, n0, b, delta);
}

void SmoothPolicy::validate() const {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("policy.mu must be in (0,1)");
  if (!(a > 0.0)) throw std::invalid_argument("policy.a must be positive");
  if (!(b > 0.0)) throw std::invalid_argument("policy.b must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("policy.delta must be >= 0");
  if (n0 < 1) throw std::invalid_argument("policy.n0 must be >= 1");
  if (!(L > 0.0)) throw std::invalid_argument("policy.L must be positive");
  if (!(phi > 0.0 && phi < 1.0))
    throw std::invalid_argument("policy.phi must be in (0,1)");
  if (fixed_batch < 0) throw std::invalid_argument("policy.fixed_batch must be >= 0");
}

std::int64_t StrongPolicy::batch(std::int64_t t) const {
  return geometric_batch_size(t, n0, zeta);
}

double StrongPolicy::delta_aux(double sigma_lip) const {
  const double as = alpha() * sigma_lip;
  return 2.0 * as * as / ((1.0 - L * alpha()) * static_cast<double>(n0));
}

double StrongPolicy::beta_aux(double sigma_star) const {
  const double a = alpha();
  return 2.0 * a * a * sigma_star * sigma_star /
         ((1.0 - L * a) * static_cast<double>(n0));
}

std::int64_t StrongPolicy::tail_threshold(double sigma_lip) const {
  return tail_threshold_strong(mu, phi, zeta, n0, sigma_lip, L);
}

void StrongPolicy::validate() const {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("policy.mu must be in (0,1)");
  if (!(zeta > 0.0 && zeta < 1.0))
    throw std::invalid_argument("policy.zeta must be in (0,1)");
  if (n0 < 1) throw std::invalid_argument("policy.n0 must be >= 1");
  if (!(L > 0.0) || !(c > 0.0) || c > L)
    throw std::invalid_argument("policy needs 0 < c <= L");
  const double cap = mu * c / (2.0 * L);
  if (!(phi > 0.0 && phi < cap))
    throw std::invalid_argument("policy.phi must be in (0, mu*c/(2L)) = (0, " +
                                std::to_string(cap) + ")");
}

double smooth_tail_mass(const SmoothPolicy& policy, std::int64_t t0) {
  policy.validate();
  if (t0 < 1) throw std::invalid_argument("smooth_tail_mass: t0 must be >= 1");
  if (t0 > kTailHorizon) return static_cast<double>(tail_analytic(policy, t0));
  long double acc = tail_remainder(policy, kTailHorizon);
  MomentumSequence seq(policy.beta_variant);
  std::vector<double> beta_next(static_cast<std::size_t>(kTailHorizon) + 1, 0.0);
  for (std::int64_t t = 1; t <= kTailHorizon; ++t) {
    beta_next[static_cast<std::size_t>(t)] = seq.beta_next();
    seq.advance();
  }
  for (std::int64_t t = kTailHorizon; t >= t0; --t)
    acc += tail_term(policy, t, beta_next[static_cast<std::size_t>(t)]);
  return static_cast<double>(acc);
}

SmoothTailCertificate certify_smooth_tail(const SmoothPolicy& policy, double sigma_lip) {
  policy.validate();
  if (!(sigma_lip >= 0.0))
    throw std::invalid_argument("certify_smooth_tail: noise slope must be >= 0");

  SmoothTailCertificate cert;
  cert.t0_formula =
      tail_threshold_smooth(policy.phi, policy.n0, policy.b, policy.delta,
                            policy.alpha() * sigma_lip);

  // per-index terms once, then suffix sums seeded with the integral remainder
  std::vector<long double> suffix(static_cast<std::size_t>(kTailHorizon) + 2, 0.0L);
  {
    std::vector<double> beta_next(static_cast<std::size_t>(kTailHorizon) + 1, 0.0);
    MomentumSequence seq(policy.beta_variant);
    for (std::int64_t t = 1; t <= kTailHorizon; ++t) {
      beta_next[static_cast<std::size_t>(t)] = seq.beta_next();
      seq.advance();
    }
    long double acc = tail_remainder(policy, kTailHorizon);
    suffix[static_cast<std::size_t>(kTailHorizon) + 1] = acc;
    for (std::int64_t t = kTailHorizon; t >= 1; --t) {
      acc += tail_term(policy, t, beta_next[static_cast<std::size_t>(t)]);
      suffix[static_cast<std::size_t>(t)] = acc;
    }
  }

  if (sigma_lip == 0.0) {
    // no multiplicative noise: any finite cap works, record the actual mass
    cert.t0 = cert.t0_formula;
    cert.tail = static_cast<double>(suffix[static_cast<std::size_t>(cert.t0)]);
    cert.gamma = 2.0 * cert.tail;
    return cert;
  }

  cert.gamma = policy.phi / (15.0 * sigma_lip * sigma_lip);
  const long double cap = cert.gamma;
  std::int64_t t0 = cert.t0_formula;
  if (t0 > kTailHorizon) {
    const long double analytic = tail_analytic(policy, t0);
    if (analytic > cap)
      throw std::invalid_argument("certify_smooth_tail: tail mass not certifiable at the closed-form threshold");
    cert.t0 = t0;
    cert.tail = static_cast<double>(analytic);
    return cert;
  }
  while (t0 <= kTailHorizon && suffix[static_cast<std::size_t>(t0)] > cap) ++t0;
  if (t0 > kTailHorizon)
    throw std::invalid_argument(
        "certify_smooth_tail: no index within the summation horizon has tail mass below gamma");
  cert.t0 = t0;
  cert.tail = static_cast<double>(suffix[static_cast<std::size_t>(t0)]);
  return cert;
}

double accelerated_gap_bound(std::int64_t t, const GapBoundInputs& in) {
  if (t < 1) throw std::invalid_argument("accelerated_gap_bound: t must be >= 1");
  if (!(in.mu > 0.0 && in.mu < 1.0))
    throw std::invalid_argument("accelerated_gap_bound: mu must be in (0,1)");
  if (!(in.a > 0.0)) throw std::invalid_argument("accelerated_gap_bound: a must be positive");
  if (!(in.b > 0.0)) throw std::invalid_argument("accelerated_gap_bound: b must be positive");
  if (!(in.delta >= 0.0))
    throw std::invalid_argument("accelerated_gap_bound: delta must be >= 0");
  if (in.n0 < 1) throw std::invalid_argument("accelerated_gap_bound: n0 must be >= 1");
  if (!(in.L > 0.0)) throw std::invalid_argument("accelerated_gap_bound: L must be positive");
  if (!(in.J >= 0.0) || !(in.gap1 >= 0.0) || !(in.s1_dist_sq >= 0.0) ||
      !(in.sigma_star >= 0.0) || !(in.sigma_lip >= 0.0))
    throw std::invalid_argument("accelerated_gap_bound: nonnegative inputs required");

  const double tp2 = static_cast<double>(t) + 2.0;
  const double inv_sq = 1.0 / (tp2 * tp2);
  const double lam = in.L / in.mu + in.a / (in.mu * std::sqrt(static_cast<double>(in.n0)));
  const double log_pow = std::pow(std::log(2.0 + in.delta), 2.0 * in.b);
  const double noise_core = in.mu * in.mu / (4.0 * (1.0 - in.mu) * in.b * log_pow);
  const double slope_ratio = in.sigma_lip / in.L;

  const double term1 = 4.0 * in.gap1 * inv_sq;
  const double term2 = 2.0 * lam * in.s1_dist_sq * inv_sq;
  const double term3 =
      lam * 3.0 * noise_core / (in.a * in.a) * in.sigma_star * in.sigma_star * inv_sq;
  const double term4 = lam * 15.0 * noise_core / static_cast<double>(in.n0) *
                       slope_ratio * slope_ratio * in.J * inv_sq;
  return term1 + term2 + term3 + term4;
}

double iterate_l2_bound(const IterateBoundInputs& in) {
  if (!(in.alpha_t0 > 0.0))
    throw std::invalid_argument("iterate_l2_bound: alpha_t0 must be positive");
  if (!(in.beta_t0 >= 1.0))
    throw std::invalid_argument("iterate_l2_bound: beta_t0 must be >= 1");
  if (!(in.s_t0_dist_sq >= 0.0) || !(in.sigma_star >= 0.0) || !(in.sigma_lip >= 0.0) ||
      !(in.gamma >= 0.0))
    throw std::invalid_argument("iterate_l2_bound: nonnegative inputs required");

  double max_gap_term = 0.0;
  for (double g : in.gaps_upto_t0)
    max_gap_term = std::max(max_gap_term, 2.0 * in.alpha_t0 * in.beta_t0 * in.beta_t0 *
                                              std::max(g, 0.0));
  if (in.sigma_lip == 0.0) return max_gap_term + in.s_t0_dist_sq;

  const double cap = 1.0 / (15.0 * in.sigma_lip * in.sigma_lip);
  if (!(in.gamma < cap))
    throw std::invalid_argument("iterate_l2_bound: gamma must be below 1/(15 sigma_lip^2)");
  const double numer = max_gap_term + in.s_t0_dist_sq +
                       in.sigma_star * in.sigma_star / (3.0 * in.sigma_lip * in.sigma_lip);
  const double denom = 1.0 - 15.0 * in.gamma * in.sigma_lip * in.sigma_lip;
  return numer / denom;
}

LinearRateConstants linear_rate_constants(const LinearRateInputs& in) {
  if (!(in.mu > 0.0 && in.mu < 1.0))
    throw std::invalid_argument("linear_rate_constants: mu must be in (0,1)");
  if (!(in.c > 0.0) || !(in.L >= in.c))
    throw std::invalid_argument("linear_rate_constants: need 0 < c <= L");
  if (in.mu * in.c / in.L >= 1.0)
    throw std::invalid_argument("linear_rate_constants: mu*c/L must be below 1");
  if (in.n0 < 1) throw std::invalid_argument("linear_rate_constants: n0 must be >= 1");
  if (in.t0 < 1) throw std::invalid_argument("linear_rate_constants: t0 must be >= 1");
  if (!(in.x1_dist_sq >= 0.0) || !(in.max_dist_sq_before_t0 >= 0.0) ||
      !(in.dist_sq_at_t0 >= 0.0) || !(in.sigma_star >= 0.0) || !(in.sigma_lip >= 0.0) ||
      !(in.phi >= 0.0))
    throw std::invalid_argument("linear_rate_constants: nonnegative inputs required");

  LinearRateConstants out;
  out.lambda = 1.0 - in.mu * in.c / in.L;
  out.Q = in.sigma_lip * in.sigma_lip * in.max_dist_sq_before_t0;
  const double noise_unit =
      4.0 * in.mu / ((1.0 - in.mu) * static_cast<double>(in.n0) * in.L * in.c);
  const double ss = in.sigma_star * in.sigma_star;
  out.C = in.x1_dist_sq / out.lambda + noise_unit * (out.Q + 2.0 * ss);
  out.C0 = std::pow(out.lambda + in.phi, -static_cast<double>(in.t0)) * in.dist_sq_at_t0 +
           noise_unit * ss;
  out.C1 = in.x1_dist_sq / out.lambda + noise_unit * (out.Q + ss);
  return out;
}

}  // namespace dysa
