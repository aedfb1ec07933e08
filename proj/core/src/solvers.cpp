#include "dysa/solvers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dysa {

namespace {

Vector resolve_start(const ProblemInstance& p, const RunOptions& opt, const char* where) {
  Vector x0 = opt.x0.empty() ? zeros(static_cast<std::size_t>(p.dim)) : opt.x0;
  if (static_cast<int>(x0.size()) != p.dim)
    throw std::invalid_argument(std::string(where) + ": x0 dimension mismatch");
  if (!p.cons.contains(x0, 1e-9))
    throw std::invalid_argument(std::string(where) + ": x0 violates the constraint");
  return x0;
}

void common_run_checks(const ProblemInstance& p, const RunOptions& opt, double alpha,
                       const char* where) {
  if (opt.iterations < 1)
    throw std::invalid_argument(std::string(where) + ": iterations must be >= 1");
  if (opt.oracle_budget < 0)
    throw std::invalid_argument(std::string(where) + ": oracle_budget must be >= 0");
  if (!(alpha > 0.0) || alpha >= 1.0 / p.L)
    throw std::invalid_argument(std::string(where) +
                                ": stepsize must lie in (0, 1/L) for the problem's L");
}

}  // namespace

const char* run_status_name(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::budget_exhausted: return "budget_exhausted";
    case RunStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

Vector extrapolate(const Vector& z_t, const Vector& z_prev, double beta_t,
                   double beta_next) {
  require_same_dim(z_t, z_prev, "extrapolate");
  if (!(beta_next >= 1.0))
    throw std::invalid_argument("extrapolate: beta_next must be >= 1");
  const double w = (beta_t - 1.0) / beta_next;
  Vector out(z_t);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * (z_t[i] - z_prev[i]);
  return out;
}

Vector momentum_point(const Vector& z_t, const Vector& z_prev, double beta_t) {
  require_same_dim(z_t, z_prev, "momentum_point");
  if (!(beta_t >= 1.0))
    throw std::invalid_argument("momentum_point: beta_t must be >= 1");
  Vector out(z_t.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = beta_t * z_t[i] - (beta_t - 1.0) * z_prev[i];
  return out;
}

LedgerTerms noise_ledger(const Vector& eps, const Vector& s_prev, const Vector& x_star,
                         double alpha, double beta, double L) {
  require_same_dim(eps, s_prev, "noise_ledger");
  require_same_dim(eps, x_star, "noise_ledger");
  const double margin = 1.0 - L * alpha;
  if (!(margin > 0.0))
    throw std::invalid_argument("noise_ledger: requires 1 - L*alpha > 0");
  LedgerTerms out;
  out.delta_a = alpha * alpha * beta * beta * norm_sq(eps) / margin;
  double inner = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i)
    inner += eps[i] * (x_star[i] - s_prev[i]);
  out.delta_m = 2.0 * alpha * beta * inner;
  return out;
}

Trajectory run_accelerated(const ProblemInstance& problem, const OracleModel& model,
                           const SmoothPolicy& policy, const RunOptions& options,
                           RngStream& stream) {
  policy.validate();
  const double alpha = policy.alpha();
  common_run_checks(problem, options, alpha, "run_accelerated");
  Vector x0 = resolve_start(problem, options, "run_accelerated");

  Trajectory traj;
  traj.points.reserve(static_cast<std::size_t>(options.iterations));

  Vector z_prev = x0;  // z^0
  Vector y = x0;       // y^1 = z^0
  Vector s_prev;       // s^{t-1}, defined from t = 2
  MomentumSequence seq(policy.beta_variant);
  CallCounter calls = 0;

  for (std::int64_t t = 1; t <= options.iterations; ++t) {
    const std::int64_t batch = policy.batch(t);
    if (options.oracle_budget > 0 && calls + batch > options.oracle_budget) {
      traj.status = RunStatus::budget_exhausted;
      break;
    }
    RngStream step_stream = stream.child(static_cast<std::uint32_t>(t));
    const MiniBatch mb = minibatch_gradient(model, problem, y, batch, step_stream, calls);
    const Vector eps = sub(mb.grad, problem.grad(y));
    Vector z = prox_step(problem.reg, problem.cons, y, mb.grad, alpha);
    if (!all_finite(z)) {
      traj.status = RunStatus::numerical_failure;
      break;
    }

    const double beta_t = seq.beta();
    const double beta_next = seq.beta_next();
    Vector s = momentum_point(z, z_prev, beta_t);

    TrajectoryPoint row;
    row.t = t;
    row.batch = batch;
    row.cum_calls = calls;
    row.gap = problem.gap(z);
    row.dist_sq = dist_sq(z, problem.x_star);
    row.s_dist_sq = dist_sq(s, problem.x_star);
    if (t == 1) {
      row.delta_a = noise_ledger(eps, s, problem.x_star, alpha, beta_t, problem.L).delta_a;
      row.delta_m = 0.0;  // martingale term needs s^{t-1}, undefined before t = 2
    } else {
      const LedgerTerms ledger =
          noise_ledger(eps, s_prev, problem.x_star, alpha, beta_t, problem.L);
      row.delta_a = ledger.delta_a;
      row.delta_m = ledger.delta_m;
    }
    if (options.record_iterates) row.iterate = z;
    if (!std::isfinite(row.gap) || !std::isfinite(row.dist_sq)) {
      traj.status = RunStatus::numerical_failure;
      break;
    }
    traj.points.push_back(std::move(row));

    y = extrapolate(z, z_prev, beta_t, beta_next);
    z_prev = std::move(z);
    s_prev = std::move(s);
    seq.advance();
  }
  traj.total_calls = calls;
  return traj;
}

Trajectory run_prox_gradient(const ProblemInstance& problem, const OracleModel& model,
                             const StrongPolicy& policy, const RunOptions& options,
                             RngStream& stream) {
  if (!problem.strongly_convex())
    throw std::invalid_argument("run_prox_gradient: problem must be strongly convex");
  policy.validate();
  const double alpha = policy.alpha();
  common_run_checks(problem, options, alpha, "run_prox_gradient");
  Vector x = resolve_start(problem, options, "run_prox_gradient");

  Trajectory traj;
  traj.points.reserve(static_cast<std::size_t>(options.iterations));
  CallCounter calls = 0;

  for (std::int64_t t = 1; t <= options.iterations; ++t) {
    const std::int64_t batch = policy.batch(t);
    if (options.oracle_budget > 0 && calls + batch > options.oracle_budget) {
      traj.status = RunStatus::budget_exhausted;
      break;
    }
    RngStream step_stream = stream.child(static_cast<std::uint32_t>(t));
    const MiniBatch mb = minibatch_gradient(model, problem, x, batch, step_stream, calls);
    const Vector eps = sub(mb.grad, problem.grad(x));
    Vector x_next = prox_step(problem.reg, problem.cons, x, mb.grad, alpha);
    if (!all_finite(x_next)) {
      traj.status = RunStatus::numerical_failure;
      break;
    }

    TrajectoryPoint row;
    row.t = t;
    row.batch = batch;
    row.cum_calls = calls;
    row.gap = problem.gap(x_next);
    row.dist_sq = dist_sq(x_next, problem.x_star);
    row.s_dist_sq = row.dist_sq;
    row.delta_a = norm_sq(eps);
    row.delta_m = 0.0;
    if (options.record_iterates) row.iterate = x_next;
    if (!std::isfinite(row.gap) || !std::isfinite(row.dist_sq)) {
      traj.status = RunStatus::numerical_failure;
      break;
    }
    traj.points.push_back(std::move(row));
    x = std::move(x_next);
  }
  traj.total_calls = calls;
  return traj;
}

}  // namespace dysa
