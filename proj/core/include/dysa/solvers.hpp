#pragma once

#include <cstdint>
#include <vector>

#include "dysa/oracle.hpp"
#include "dysa/problems.hpp"
#include "dysa/rng.hpp"
#include "dysa/schedules.hpp"
#include "dysa/vec.hpp"

namespace dysa {

enum class RunStatus { completed, budget_exhausted, numerical_failure };

const char* run_status_name(RunStatus status);

// One record per completed iteration. Row t holds the iterate produced by
// step t: z^t for the accelerated method, x^{t+1} for the geometric one.
// Method-specific fields:
//   accelerated   s_dist_sq = |s^t - x*|^2, delta_a / delta_m are the noise
//                 ledger terms (delta_m defined from t = 2, zero at t = 1)
//   geometric     s_dist_sq mirrors dist_sq, delta_a = |eps^t|^2, delta_m = 0
struct TrajectoryPoint {
  std::int64_t t = 0;
  std::int64_t batch = 0;
  std::int64_t cum_calls = 0;
  double gap = 0.0;
  double dist_sq = 0.0;
  double s_dist_sq = 0.0;
  double delta_a = 0.0;
  double delta_m = 0.0;
  Vector iterate;  // populated only when record_iterates is on
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  RunStatus status = RunStatus::completed;
  std::int64_t total_calls = 0;
};

struct RunOptions {
  std::int64_t iterations = 100;
  std::int64_t oracle_budget = 0;  // 0 = unlimited; checked before each draw
  Vector x0;                       // empty = origin; must be feasible
  bool record_iterates = false;
};

// y = z_t + ((beta_t - 1)/beta_next) (z_t - z_prev)
Vector extrapolate(const Vector& z_t, const Vector& z_prev, double beta_t,
                   double beta_next);

// s = beta_t z_t - (beta_t - 1) z_prev
Vector momentum_point(const Vector& z_t, const Vector& z_prev, double beta_t);

struct LedgerTerms {
  double delta_a = 0.0;
  double delta_m = 0.0;
};

// delta_a = alpha^2 beta^2 |eps|^2 / (1 - L alpha)
// delta_m = 2 alpha beta <eps, x_star - s_prev>
LedgerTerms noise_ledger(const Vector& eps, const Vector& s_prev, const Vector& x_star,
                         double alpha, double beta, double L);

// Accelerated method: batch gradient at the extrapolated point, prox step,
// momentum update. Noise ledger computed against the exact mean gradient.
Trajectory run_accelerated(const ProblemInstance& problem, const OracleModel& model,
                           const SmoothPolicy& policy, const RunOptions& options,
                           RngStream& stream);

// Geometric-batch prox-gradient method; requires a strongly convex problem.
Trajectory run_prox_gradient(const ProblemInstance& problem, const OracleModel& model,
                             const StrongPolicy& policy, const RunOptions& options,
                             RngStream& stream);

}  // namespace dysa
