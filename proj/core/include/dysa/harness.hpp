#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dysa/problems.hpp"
#include "dysa/schedules.hpp"
#include "dysa/solvers.hpp"

// Experiment orchestration: config parsing, replication sweeps with a worker
// pool, deterministic aggregation, rate fitting, oracle-complexity curves,
// bound audits, and CSV/JSON export.

namespace dysa {

enum class AlgoKind { accelerated, prox_gradient };

const char* algo_kind_name(AlgoKind kind);

// Flat "key = value" text, '#' comments, dotted namespaces. Parsing keeps
// keys sorted so echoes are stable.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

struct ExperimentConfig {
  QuadraticOptions problem;
  AlgoKind algo = AlgoKind::accelerated;

  // accelerated policy knobs (a < 0 means "default to the problem's L")
  double mu = 0.5;
  double a = -1.0;
  double b = 0.5;
  double delta = 0.0;
  std::int64_t n0 = 1;
  double phi = 0.5;
  BetaVariant beta_variant = BetaVariant::linear;
  std::int64_t fixed_batch = 0;

  // geometric policy knobs; a_frac in (0,1] derives zeta from the contraction
  // split when set (a_frac < 0 means "use zeta directly")
  double zeta = 0.5;
  double a_frac = -1.0;

  std::int64_t iterations = 100;
  int reps = 1;
  std::uint64_t seed = 1;
  std::int64_t oracle_budget = 0;
  bool record_iterates = false;
  Vector x0;  // empty = origin; single entry broadcasts across dimensions
  int jobs = 0;  // 0 = hardware concurrency

  std::int64_t fit_window_lo = 0;  // 0 = auto (drop first 10% of iterations)
  std::int64_t fit_window_hi = 0;  // 0 = last iteration

  std::string out_dir;

  ConfigMap echo;  // exact parsed key/value pairs, for export
};

// Strict construction: unknown keys, malformed values, and invalid ranges
// all raise ConfigError before any sampling happens.
ExperimentConfig make_experiment_config(const ConfigMap& map);

ProblemInstance build_problem(const ExperimentConfig& cfg);
SmoothPolicy resolve_smooth_policy(const ExperimentConfig& cfg, const ProblemInstance& p);
StrongPolicy resolve_strong_policy(const ExperimentConfig& cfg, const ProblemInstance& p);

struct AggregateRow {
  std::int64_t t = 0;
  std::int64_t batch = 0;
  std::int64_t cum_calls = 0;
  int rep_count = 0;
  double gap_mean = 0.0;
  double gap_se = 0.0;
  double dist_sq_mean = 0.0;
  double dist_sq_se = 0.0;
  double s_dist_sq_mean = 0.0;  // accelerated runs; mirrors dist for geometric
  double dm_mean = 0.0;
  double dm_se = 0.0;
  double alpha = 0.0;
  double beta = 1.0;
};

struct RateFit {
  double value = 0.0;      // log-log slope (power) or per-step ratio (geometric)
  double r_squared = 0.0;
  int points = 0;          // 0 = fit unavailable
  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;
  bool geometric = false;
};

struct ExperimentResult {
  std::string algo;
  int reps = 0;
  int failures = 0;
  std::vector<AggregateRow> rows;
  RateFit rate;
  BoundReport bound;
  double x1_dist_sq = 0.0;  // start-point squared distance, for audits
  std::uint64_t seed = 0;
  ConfigMap config_echo;
};

// One trajectory per replication, worker pool of `jobs` threads, stream path
// (seed -> rep -> iteration). Replication order is stable regardless of
// scheduling.
std::vector<Trajectory> run_replications(const ExperimentConfig& cfg,
                                         const ProblemInstance& p);

// Fixed-order reduction of raw trajectories; numerical failures are dropped
// from aggregates and counted. Throws when every replication failed.
ExperimentResult aggregate_replications(const ExperimentConfig& cfg,
                                        const ProblemInstance& p,
                                        const std::vector<Trajectory>& trajectories);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Least-squares slope of log(mean) against log(t) over t in [t_lo, t_hi].
// Needs >= 5 window points, all means positive.
RateFit fit_power_rate(const std::vector<double>& ts, const std::vector<double>& means,
                       double t_lo, double t_hi);

// Least-squares slope of log(mean) against t, reported as exp(slope).
RateFit fit_geometric_rate(const std::vector<double>& ts,
                           const std::vector<double>& means, double t_lo, double t_hi);

struct ComplexityRow {
  double eps = 0.0;
  std::int64_t t_hit = 0;
  std::int64_t calls_at_hit = 0;
  bool reached = false;
};

// First iteration whose mean gap is at or below each tolerance, with the
// oracle calls spent to get there. Unreached tolerances are flagged.
std::vector<ComplexityRow> complexity_curve(const ExperimentResult& result,
                                            const std::vector<double>& eps_grid);

// Writes trajectory.csv and/or summary.json into out_dir; returns the paths.
// Values carry 17 significant digits so re-parsing is lossless.
std::vector<std::string> export_result(const ExperimentResult& result,
                                       bool write_csv, bool write_json,
                                       const std::string& out_dir);

// Re-parse of an exported trajectory.csv.
struct LoadedResult {
  std::string algo;
  std::vector<AggregateRow> rows;
};
LoadedResult load_result_csv(const std::string& path);

// Default output directory: $DYSA_OUT_DIR when set, else "out".
std::string default_out_dir();

}  // namespace dysa
