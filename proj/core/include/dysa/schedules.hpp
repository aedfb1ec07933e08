#pragma once

#include <cstdint>
#include <vector>

// Schedule policies for the two solvers, their threshold iterations and
// contraction factors, and the theoretical bound calculators the harness
// audits runs against. All functions are pure; invalid parameters throw
// std::invalid_argument.

namespace dysa {

// Momentum weight family. `linear` is the closed-form (1+t)/2 policy the
// accelerated method is analyzed with; `exact` solves the classical
// recursion beta_{t+1}^2 - beta_{t+1} = beta_t^2 from beta_1 = 1. The linear
// weights miss that recursion by exactly 1/4 per step; both are provided and
// both are tested.
enum class BetaVariant { linear, exact };

// beta_t for t >= 1. The exact variant iterates the recursion (O(t)).
double momentum_weight(std::int64_t t, BetaVariant variant);

// Incremental momentum weights with extended-precision internal state so the
// recursion residual stays meaningful at large t (double alone drifts to
// ~1e-7 by t = 1e5 because the residual subtracts O(t^2) squares).
class MomentumSequence {
 public:
  explicit MomentumSequence(BetaVariant variant);
  std::int64_t t() const { return t_; }
  double beta() const;       // beta_t
  double beta_next() const;  // beta_{t+1}
  void advance();
  // beta_{t+1}^2 - beta_{t+1} - beta_t^2 evaluated on the internal state;
  // -1/4 exactly for the linear variant, ~0 for the exact variant.
  double recursion_residual() const;

 private:
  BetaVariant variant_;
  std::int64_t t_ = 1;
  __float128 beta_;
  __float128 beta_next_;
};

// N0 * floor((t+2+delta)^3 * ln(t+2+delta)^(1+2b)), evaluated in extended
// precision before flooring. Throws std::overflow_error past int64.
std::int64_t smooth_batch_size(std::int64_t t, std::int64_t n0, double b, double delta);

// N0 * floor(zeta^{-t}). Throws std::overflow_error past int64.
std::int64_t geometric_batch_size(std::int64_t t, std::int64_t n0, double zeta);

// Closed-form threshold iteration for the accelerated policy:
// ceil(exp((15 s^2 / (8 phi n0 b))^(1/(2b))) - 1 - delta), clamped at 1,
// where s = alpha_1 * sigma_lip. This is the literature form; it can
// undershoot the iteration actually certified by the tail-mass sum (the
// derivation drops a 1/(1 - L*alpha_1) factor), which is why policies go
// through certify_smooth_tail below.
std::int64_t tail_threshold_smooth(double phi, std::int64_t n0, double b, double delta,
                                   double alpha1_sigma_lip);

// Threshold iteration for the geometric policy:
// ceil(log_{1/zeta}(2 mu^2 sigma_lip^2 / ((1-mu) phi n0 L^2))), clamped at 1.
std::int64_t tail_threshold_strong(double mu, double phi, double zeta, std::int64_t n0,
                                   double sigma_lip, double L);

// max(1 - mu*c/(2L) + phi, zeta). phi must lie in (0, mu*c/(2L)) so the
// result is a genuine contraction; the boundary is rejected.
double contraction_rho(double mu, double c, double L, double phi, double zeta);

// zeta = 1 - a_frac*(mu*c/(2L) + phi), validated so that the sampling rate
// is the binding factor (contraction_rho == zeta exactly). Throws with the
// admissible maximum when a_frac is too large.
double matched_zeta(double mu, double c, double L, double phi, double a_frac);

// Largest a_frac for which matched_zeta is admissible:
// (mu*c/(2L) - phi) / (mu*c/(2L) + phi).
double max_matched_a(double mu, double c, double L, double phi);

// Accelerated-method policy: constant stepsize mu/(L + a/sqrt(N0)), momentum
// weights per beta_variant, cubic-log batch growth. phi in (0,1) is the
// exogenous tail-mass split used by the threshold iteration.
struct SmoothPolicy {
  double mu = 0.5;
  double a = 0.0;  // stepsize damping; config loader defaults it to L
  double b = 0.5;
  double delta = 0.0;
  std::int64_t n0 = 1;
  double L = 0.0;
  double phi = 0.5;
  BetaVariant beta_variant = BetaVariant::linear;
  std::int64_t fixed_batch = 0;  // >= 1 overrides the growth schedule (diagnostics)

  double alpha() const;
  std::int64_t batch(std::int64_t t) const;
  void validate() const;
};

// Strongly-convex-method policy: constant stepsize mu/L, geometric batch
// growth N0 * floor(zeta^{-t}).
struct StrongPolicy {
  double mu = 0.5;
  double zeta = 0.5;
  std::int64_t n0 = 1;
  double phi = 0.0;
  double L = 0.0;
  double c = 0.0;

  double alpha() const { return mu / L; }
  std::int64_t batch(std::int64_t t) const;
  double lambda() const { return 1.0 - mu * c / L; }
  double rho() const { return contraction_rho(mu, c, L, phi, zeta); }
  // 2 (alpha sigma_lip)^2 / ((1 - L alpha) N0); the proof's per-step noise gain
  double delta_aux(double sigma_lip) const;
  // 2 alpha^2 sigma_star^2 / ((1 - L alpha) N0)
  double beta_aux(double sigma_star) const;
  std::int64_t tail_threshold(double sigma_lip) const;
  void validate() const;
};

// Tail mass of the accelerated policy from index t0:
//   sum_{t >= t0} alpha^2 beta_{t+1}^2 / ((1 - L alpha) N_{t+1})
// evaluated as an exact partial sum to an internal horizon plus a rigorous
// integral remainder, so the value is an upper bound on the true series.
double smooth_tail_mass(const SmoothPolicy& policy, std::int64_t t0);

struct SmoothTailCertificate {
  std::int64_t t0 = 1;          // first index with certified tail mass
  std::int64_t t0_formula = 1;  // closed-form value before the certification bump
  double gamma = 0.0;           // certified cap (phi / (15 sigma_lip^2), or 2x tail when noiseless)
  double tail = 0.0;            // certified tail mass bound at t0
};

// Smallest t0 >= tail_threshold_smooth(...) whose tail mass is below
// phi / (15 sigma_lip^2). Throws when no index within the summation horizon
// qualifies.
SmoothTailCertificate certify_smooth_tail(const SmoothPolicy& policy, double sigma_lip);

// Evaluated theoretical quantities for auditing a run.
struct BoundReport {
  std::int64_t t0 = 1;
  double rho = 0.0;    // geometric contraction factor (strongly convex runs)
  double J = 0.0;      // sup bound on E|z^t - x*|^2 (accelerated runs)
  double C = 0.0;      // linear-rate constant, whole sequence
  double C0 = 0.0;     // linear-rate constant, settled regime (t >= t0)
  double C1 = 0.0;     // linear-rate constant, transient regime
  double gamma = 0.0;  // certified tail-mass cap (accelerated runs)
  double Q = 0.0;      // sigma_lip^2 * max prefix E|x^tau - x*|^2
};

// Inputs to the accelerated method's gap envelope.
struct GapBoundInputs {
  double gap1 = 0.0;        // E[g(z^1) - g*]
  double s1_dist_sq = 0.0;  // E|s^1 - x*|^2
  double sigma_star = 0.0;
  double sigma_lip = 0.0;
  double J = 0.0;
  double mu = 0.5;
  double a = 0.0;
  double b = 0.5;
  double delta = 0.0;
  std::int64_t n0 = 1;
  double L = 0.0;
};

// Envelope on E[g(z^{t+1}) - g*] for the accelerated policy: four terms, all
// decaying as (t+2)^{-2}.
double accelerated_gap_bound(std::int64_t t, const GapBoundInputs& in);

// Inputs to the uniform L2 bound on the accelerated iterates.
struct IterateBoundInputs {
  double alpha_t0 = 0.0;
  double beta_t0 = 1.0;
  std::vector<double> gaps_upto_t0;  // E[g(z^t) - g*] for t = 1..t0
  double s_t0_dist_sq = 0.0;         // E|s^{t0} - x*|^2
  double sigma_star = 0.0;
  double sigma_lip = 0.0;
  double gamma = 0.0;
};

// Uniform bound on sup_t E|z^t - x*|^2:
//   [max_t 2 alpha_t0 beta_t0^2 gap_t + s_t0_dist_sq + sigma_star^2/(3 sigma_lip^2)]
//     / (1 - 15 gamma sigma_lip^2).
// With sigma_lip = 0 the multiplicative machinery is unneeded: the bound
// degenerates to the numerator without the sigma term, denominator 1.
double iterate_l2_bound(const IterateBoundInputs& in);

// Inputs to the strongly convex method's linear-rate constants.
struct LinearRateInputs {
  double x1_dist_sq = 0.0;
  double max_dist_sq_before_t0 = 0.0;  // max over tau in [t0-1]; 0 when t0 = 1
  double dist_sq_at_t0 = 0.0;
  double mu = 0.5;
  double c = 0.0;
  double L = 0.0;
  std::int64_t n0 = 1;
  double sigma_star = 0.0;
  double sigma_lip = 0.0;
  double phi = 0.0;
  std::int64_t t0 = 1;
};

struct LinearRateConstants {
  double C = 0.0;   // E|x^{t+1} - x*|^2 <= C rho^{t+1} for all t >= 1
  double C0 = 0.0;  // settled-regime constant, valid from t0
  double C1 = 0.0;  // transient-regime constant (C minus one noise share)
  double Q = 0.0;   // sigma_lip^2 * max_dist_sq_before_t0
  double lambda = 0.0;
};

LinearRateConstants linear_rate_constants(const LinearRateInputs& in);

}  // namespace dysa
