#include "dysa/harness.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "dysa/errors.hpp"
#include "dysa/oracle.hpp"
#include "dysa/stats.hpp"
#include "dysa/version.hpp"

namespace dysa {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem.dim", "problem.c", "problem.L", "problem.rank_deficient",
      "problem.eig_floor", "problem.rotate", "problem.solution_norm", "problem.seed",
      "problem.reg", "problem.reg_lambda", "problem.reg_gamma",
      "problem.cons", "problem.cons_lo", "problem.cons_hi", "problem.cons_radius",
      "oracle.kind", "oracle.sigma", "oracle.scale",
      "algo",
      "policy.mu", "policy.a", "policy.b", "policy.delta", "policy.n0", "policy.phi",
      "policy.beta", "policy.fixed_batch", "policy.zeta", "policy.a_frac",
      "run.iterations", "run.reps", "run.seed", "run.budget", "run.record_iterates",
      "run.x0", "run.jobs",
      "fit.window_lo", "fit.window_hi",
      "out.dir",
  };
  return keys;
}

class ConfigReader {
 public:
  explicit ConfigReader(const ConfigMap& map) : map_(map) {}

  bool has(const std::string& key) const { return map_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = map_.find(key);
    return it == map_.end() ? fallback : it->second;
  }

  double number(const std::string& key, double fallback) const {
    auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    return parse_number(key, it->second);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(it->second, &pos);
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected an integer, got '" + it->second + "'");
    }
    if (pos != it->second.size())
      throw ConfigError(key + ": expected an integer, got '" + it->second + "'");
    return v;
  }

  bool flag(const std::string& key, bool fallback) const {
    auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected a boolean, got '" + v + "'");
  }

  static double parse_number(const std::string& key, const std::string& text) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &pos);
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected a number, got '" + text + "'");
    }
    if (pos != text.size())
      throw ConfigError(key + ": expected a number, got '" + text + "'");
    return v;
  }

 private:
  const ConfigMap& map_;
};

Vector parse_vector(const std::string& key, const std::string& text) {
  Vector out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ','))
    out.push_back(ConfigReader::parse_number(key, trim(part)));
  if (out.empty()) throw ConfigError(key + ": empty vector");
  return out;
}

RegularizerSpec parse_reg(const ConfigReader& r) {
  const std::string kind = r.str("problem.reg", "zero");
  const bool has_lambda = r.has("problem.reg_lambda");
  const bool has_gamma = r.has("problem.reg_gamma");
  if (kind == "zero") {
    if (has_lambda || has_gamma)
      throw ConfigError("problem.reg_lambda/reg_gamma not valid with problem.reg = zero");
    return RegularizerSpec::zero();
  }
  if (!has_lambda) throw ConfigError("problem.reg_lambda required for problem.reg = " + kind);
  const double lambda = r.number("problem.reg_lambda", 0.0);
  if (kind == "l1") {
    if (has_gamma) throw ConfigError("problem.reg_gamma only valid for elastic_net");
    return RegularizerSpec::l1(lambda);
  }
  if (kind == "squared_l2") {
    if (has_gamma) throw ConfigError("problem.reg_gamma only valid for elastic_net");
    return RegularizerSpec::squared_l2(lambda);
  }
  if (kind == "elastic_net") {
    if (!has_gamma) throw ConfigError("problem.reg_gamma required for elastic_net");
    return RegularizerSpec::elastic_net(lambda, r.number("problem.reg_gamma", 0.0));
  }
  throw ConfigError("problem.reg: unknown kind '" + kind +
                    "' (valid: zero, l1, squared_l2, elastic_net)");
}

ConstraintSpec parse_cons(const ConfigReader& r) {
  const std::string kind = r.str("problem.cons", "all_space");
  if (kind == "all_space") {
    if (r.has("problem.cons_lo") || r.has("problem.cons_hi") || r.has("problem.cons_radius"))
      throw ConfigError("constraint bounds given but problem.cons = all_space");
    return ConstraintSpec::all_space();
  }
  if (kind == "box") {
    if (!r.has("problem.cons_lo") || !r.has("problem.cons_hi"))
      throw ConfigError("problem.cons_lo and problem.cons_hi required for box");
    if (r.has("problem.cons_radius"))
      throw ConfigError("problem.cons_radius only valid for ball");
    return ConstraintSpec::box(r.number("problem.cons_lo", 0.0),
                               r.number("problem.cons_hi", 0.0));
  }
  if (kind == "ball") {
    if (!r.has("problem.cons_radius"))
      throw ConfigError("problem.cons_radius required for ball");
    if (r.has("problem.cons_lo") || r.has("problem.cons_hi"))
      throw ConfigError("problem.cons_lo/cons_hi only valid for box");
    return ConstraintSpec::ball(r.number("problem.cons_radius", 0.0));
  }
  throw ConfigError("problem.cons: unknown kind '" + kind +
                    "' (valid: all_space, box, ball)");
}

OracleModel parse_oracle(const ConfigReader& r) {
  const std::string kind = r.str("oracle.kind", "noiseless");
  if (kind == "noiseless") {
    if (r.has("oracle.sigma") || r.has("oracle.scale"))
      throw ConfigError("oracle.sigma/scale not valid with oracle.kind = noiseless");
    return OracleModel::noiseless();
  }
  if (kind == "additive") {
    if (!r.has("oracle.sigma")) throw ConfigError("oracle.sigma required for additive oracle");
    if (r.has("oracle.scale")) throw ConfigError("oracle.scale only valid for random_matrix");
    return OracleModel::additive(r.number("oracle.sigma", 0.0));
  }
  if (kind == "random_matrix") {
    if (!r.has("oracle.scale"))
      throw ConfigError("oracle.scale required for random_matrix oracle");
    if (r.has("oracle.sigma")) throw ConfigError("oracle.sigma only valid for additive");
    return OracleModel::random_matrix(r.number("oracle.scale", 0.0));
  }
  throw ConfigError("oracle.kind: unknown kind '" + kind +
                    "' (valid: noiseless, additive, random_matrix)");
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vector resolved_x0(const ExperimentConfig& cfg) {
  if (cfg.x0.empty()) return zeros(static_cast<std::size_t>(cfg.problem.dim));
  return cfg.x0;
}

}  // namespace

const char* algo_kind_name(AlgoKind kind) {
  return kind == AlgoKind::accelerated ? "accelerated" : "prox_gradient";
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    if (out.count(key))
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ExperimentConfig make_experiment_config(const ConfigMap& map) {
  for (const auto& [key, value] : map) {
    (void)value;
    if (!known_keys().count(key)) throw ConfigError("unknown config key: " + key);
  }
  ConfigReader r(map);
  ExperimentConfig cfg;
  cfg.echo = map;

  cfg.problem.dim = static_cast<int>(r.integer("problem.dim", 2));
  cfg.problem.c_target = r.number("problem.c", 1.0);
  cfg.problem.L_target = r.number("problem.L", 10.0);
  cfg.problem.rank_deficient = r.flag("problem.rank_deficient", false);
  cfg.problem.eig_floor = r.number("problem.eig_floor", 1e-4);
  cfg.problem.rotate = r.flag("problem.rotate", false);
  cfg.problem.solution_norm = r.number("problem.solution_norm", 1.0);
  cfg.problem.seed = static_cast<std::uint64_t>(r.integer("problem.seed", 1));
  cfg.problem.reg = parse_reg(r);
  cfg.problem.cons = parse_cons(r);
  cfg.problem.model = parse_oracle(r);

  const std::string algo = r.str("algo", "accelerated");
  if (algo == "accelerated") {
    cfg.algo = AlgoKind::accelerated;
  } else if (algo == "prox_gradient") {
    cfg.algo = AlgoKind::prox_gradient;
  } else {
    throw ConfigError("algo: unknown value '" + algo +
                      "' (valid: accelerated, prox_gradient)");
  }

  cfg.mu = r.number("policy.mu", 0.5);
  cfg.a = r.number("policy.a", -1.0);
  cfg.b = r.number("policy.b", 0.5);
  cfg.delta = r.number("policy.delta", 0.0);
  cfg.n0 = r.integer("policy.n0", 1);
  cfg.phi = r.number("policy.phi", 0.5);
  const std::string beta = r.str("policy.beta", "linear");
  if (beta == "linear") {
    cfg.beta_variant = BetaVariant::linear;
  } else if (beta == "exact") {
    cfg.beta_variant = BetaVariant::exact;
  } else {
    throw ConfigError("policy.beta: unknown value '" + beta + "' (valid: linear, exact)");
  }
  cfg.fixed_batch = r.integer("policy.fixed_batch", 0);
  cfg.zeta = r.number("policy.zeta", 0.5);
  cfg.a_frac = r.number("policy.a_frac", -1.0);

  cfg.iterations = r.integer("run.iterations", 100);
  cfg.reps = static_cast<int>(r.integer("run.reps", 1));
  cfg.seed = static_cast<std::uint64_t>(r.integer("run.seed", 1));
  cfg.oracle_budget = r.integer("run.budget", 0);
  cfg.record_iterates = r.flag("run.record_iterates", false);
  if (r.has("run.x0")) {
    cfg.x0 = parse_vector("run.x0", r.str("run.x0", ""));
    if (cfg.x0.size() == 1 && cfg.problem.dim > 1)
      cfg.x0 = constant(static_cast<std::size_t>(cfg.problem.dim), cfg.x0[0]);
  }
  cfg.jobs = static_cast<int>(r.integer("run.jobs", 0));

  cfg.fit_window_lo = r.integer("fit.window_lo", 0);
  cfg.fit_window_hi = r.integer("fit.window_hi", 0);
  cfg.out_dir = r.str("out.dir", "");

  if (cfg.iterations < 1) throw ConfigError("run.iterations must be >= 1");
  if (cfg.reps < 1) throw ConfigError("run.reps must be >= 1");
  if (cfg.oracle_budget < 0) throw ConfigError("run.budget must be >= 0");
  if (cfg.jobs < 0) throw ConfigError("run.jobs must be >= 0");

  // end-to-end dry build: every range/pairing error surfaces here, before
  // any replication is launched
  try {
    const ProblemInstance p = build_problem(cfg);
    if (cfg.algo == AlgoKind::accelerated) {
      resolve_smooth_policy(cfg, p).validate();
    } else {
      if (!p.strongly_convex())
        throw ConfigError("algo = prox_gradient requires a strongly convex problem");
      resolve_strong_policy(cfg, p).validate();
    }
    if (!cfg.x0.empty()) {
      if (static_cast<int>(cfg.x0.size()) != p.dim)
        throw ConfigError("run.x0 dimension does not match problem.dim");
      if (!p.cons.contains(cfg.x0, 1e-9))
        throw ConfigError("run.x0 violates the constraint");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ProblemInstance build_problem(const ExperimentConfig& cfg) {
  return make_random_quadratic(cfg.problem);
}

SmoothPolicy resolve_smooth_policy(const ExperimentConfig& cfg, const ProblemInstance& p) {
  SmoothPolicy sp;
  sp.mu = cfg.mu;
  sp.a = cfg.a < 0.0 ? p.L : cfg.a;
  sp.b = cfg.b;
  sp.delta = cfg.delta;
  sp.n0 = cfg.n0;
  sp.L = p.L;
  sp.phi = cfg.phi;
  sp.beta_variant = cfg.beta_variant;
  sp.fixed_batch = cfg.fixed_batch;
  return sp;
}

StrongPolicy resolve_strong_policy(const ExperimentConfig& cfg, const ProblemInstance& p) {
  StrongPolicy st;
  st.mu = cfg.mu;
  st.n0 = cfg.n0;
  st.phi = cfg.phi;
  st.L = p.L;
  st.c = p.c;
  st.zeta = cfg.a_frac > 0.0 ? matched_zeta(st.mu, st.c, st.L, st.phi, cfg.a_frac)
                             : cfg.zeta;
  return st;
}

std::vector<Trajectory> run_replications(const ExperimentConfig& cfg,
                                         const ProblemInstance& p) {
  RunOptions opt;
  opt.iterations = cfg.iterations;
  opt.oracle_budget = cfg.oracle_budget;
  opt.x0 = cfg.x0;
  opt.record_iterates = cfg.record_iterates;

  SmoothPolicy sp;
  StrongPolicy st;
  if (cfg.algo == AlgoKind::accelerated) {
    sp = resolve_smooth_policy(cfg, p);
  } else {
    st = resolve_strong_policy(cfg, p);
  }

  std::vector<Trajectory> out(static_cast<std::size_t>(cfg.reps));
  std::atomic<int> next{0};
  std::mutex fail_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const int rep = next.fetch_add(1);
      if (rep >= cfg.reps) return;
      try {
        RngStream rep_stream = RngStream(cfg.seed).child(static_cast<std::uint32_t>(rep));
        out[static_cast<std::size_t>(rep)] =
            cfg.algo == AlgoKind::accelerated
                ? run_accelerated(p, cfg.problem.model, sp, opt, rep_stream)
                : run_prox_gradient(p, cfg.problem.model, st, opt, rep_stream);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  if (jobs > cfg.reps) jobs = cfg.reps;
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

ExperimentResult aggregate_replications(const ExperimentConfig& cfg,
                                        const ProblemInstance& p,
                                        const std::vector<Trajectory>& trajectories) {
  ExperimentResult res;
  res.algo = algo_kind_name(cfg.algo);
  res.reps = cfg.reps;
  res.seed = cfg.seed;
  res.config_echo = cfg.echo;
  res.x1_dist_sq = dist_sq(resolved_x0(cfg), p.x_star);

  std::vector<const Trajectory*> included;
  for (const Trajectory& tr : trajectories) {
    if (tr.status == RunStatus::numerical_failure) {
      ++res.failures;
    } else {
      included.push_back(&tr);
    }
  }
  if (included.empty())
    throw std::runtime_error("run_experiment: every replication failed numerically");

  std::size_t max_len = 0;
  for (const Trajectory* tr : included) max_len = std::max(max_len, tr->points.size());

  SmoothPolicy sp;
  if (cfg.algo == AlgoKind::accelerated) sp = resolve_smooth_policy(cfg, p);
  const StrongPolicy st =
      cfg.algo == AlgoKind::prox_gradient ? resolve_strong_policy(cfg, p) : StrongPolicy{};
  MomentumSequence seq(cfg.beta_variant);

  res.rows.reserve(max_len);
  for (std::size_t i = 0; i < max_len; ++i) {
    MomentAccumulator gap, dsq, sdsq, dm;
    const TrajectoryPoint* proto = nullptr;
    for (const Trajectory* tr : included) {
      if (tr->points.size() <= i) continue;
      const TrajectoryPoint& pt = tr->points[i];
      if (!proto) proto = &pt;
      gap.add(pt.gap);
      dsq.add(pt.dist_sq);
      sdsq.add(pt.s_dist_sq);
      dm.add(pt.delta_m);
    }
    AggregateRow row;
    row.t = proto->t;
    row.batch = proto->batch;
    row.cum_calls = proto->cum_calls;
    row.rep_count = static_cast<int>(gap.count());
    row.gap_mean = gap.mean();
    row.gap_se = gap.standard_error();
    row.dist_sq_mean = dsq.mean();
    row.dist_sq_se = dsq.standard_error();
    row.s_dist_sq_mean = sdsq.mean();
    row.dm_mean = dm.mean();
    row.dm_se = dm.standard_error();
    if (cfg.algo == AlgoKind::accelerated) {
      row.alpha = sp.alpha();
      row.beta = seq.beta();
      seq.advance();
    } else {
      row.alpha = st.alpha();
      row.beta = 1.0;
    }
    res.rows.push_back(row);
  }

  // rate fit over the configured window (default: drop the transient 10%)
  if (!res.rows.empty()) {
    std::vector<double> ts, means;
    ts.reserve(res.rows.size());
    means.reserve(res.rows.size());
    for (const AggregateRow& row : res.rows) {
      ts.push_back(static_cast<double>(row.t));
      means.push_back(cfg.algo == AlgoKind::accelerated ? row.gap_mean : row.dist_sq_mean);
    }
    const std::int64_t t_first = res.rows.front().t;
    const std::int64_t t_last = res.rows.back().t;
    const std::int64_t lo =
        cfg.fit_window_lo > 0
            ? cfg.fit_window_lo
            : t_first + static_cast<std::int64_t>(
                            std::ceil(0.1 * static_cast<double>(t_last - t_first)));
    const std::int64_t hi = cfg.fit_window_hi > 0 ? cfg.fit_window_hi : t_last;
    try {
      res.rate = cfg.algo == AlgoKind::accelerated
                     ? fit_power_rate(ts, means, static_cast<double>(lo),
                                      static_cast<double>(hi))
                     : fit_geometric_rate(ts, means, static_cast<double>(lo),
                                          static_cast<double>(hi));
    } catch (const std::exception&) {
      res.rate = RateFit{};  // fit unavailable (e.g. exact zeros); rows still stand
    }
  }

  // theoretical audit quantities
  if (cfg.algo == AlgoKind::accelerated) {
    const SmoothTailCertificate cert = certify_smooth_tail(sp, p.sigma_lip);
    res.bound.t0 = cert.t0;
    res.bound.gamma = cert.gamma;
    const std::int64_t t0_avail =
        std::min<std::int64_t>(cert.t0, static_cast<std::int64_t>(res.rows.size()));
    if (t0_avail >= 1) {
      IterateBoundInputs in;
      in.alpha_t0 = sp.alpha();
      in.beta_t0 = momentum_weight(t0_avail, cfg.beta_variant);
      for (std::int64_t t = 1; t <= t0_avail; ++t)
        in.gaps_upto_t0.push_back(res.rows[static_cast<std::size_t>(t - 1)].gap_mean);
      in.s_t0_dist_sq = res.rows[static_cast<std::size_t>(t0_avail - 1)].s_dist_sq_mean;
      in.sigma_star = p.sigma_star;
      in.sigma_lip = p.sigma_lip;
      in.gamma = cert.gamma;
      res.bound.J = iterate_l2_bound(in);
    }
  } else {
    const std::int64_t t0 = st.tail_threshold(p.sigma_lip);
    res.bound.t0 = t0;
    res.bound.rho = st.rho();
    LinearRateInputs in;
    in.x1_dist_sq = res.x1_dist_sq;
    // x^tau for tau >= 2 sits in row tau-1; x^1 is the start point
    double q_raw = 0.0;
    for (std::int64_t tau = 1; tau <= t0 - 1; ++tau) {
      const double d =
          tau == 1 ? res.x1_dist_sq
                   : (static_cast<std::size_t>(tau - 2) < res.rows.size()
                          ? res.rows[static_cast<std::size_t>(tau - 2)].dist_sq_mean
                          : res.rows.back().dist_sq_mean);
      q_raw = std::max(q_raw, d);
    }
    in.max_dist_sq_before_t0 = q_raw;
    in.dist_sq_at_t0 =
        t0 == 1 ? res.x1_dist_sq
                : (static_cast<std::size_t>(t0 - 2) < res.rows.size()
                       ? res.rows[static_cast<std::size_t>(t0 - 2)].dist_sq_mean
                       : res.rows.back().dist_sq_mean);
    in.mu = st.mu;
    in.c = p.c;
    in.L = p.L;
    in.n0 = st.n0;
    in.sigma_star = p.sigma_star;
    in.sigma_lip = p.sigma_lip;
    in.phi = st.phi;
    in.t0 = t0;
    const LinearRateConstants lc = linear_rate_constants(in);
    res.bound.C = lc.C;
    res.bound.C0 = lc.C0;
    res.bound.C1 = lc.C1;
    res.bound.Q = lc.Q;
  }
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const ProblemInstance p = build_problem(cfg);
  return aggregate_replications(cfg, p, run_replications(cfg, p));
}

namespace {

RateFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys,
                 double window_lo, double window_hi) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("rate fit: degenerate window");
  const double slope = sxy / sxx;
  double r2 = 1.0;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double resid = ys[i] - my - slope * (xs[i] - mx);
      ss_res += resid * resid;
    }
    r2 = 1.0 - ss_res / syy;
  }
  RateFit fit;
  fit.value = slope;
  fit.r_squared = r2;
  fit.points = static_cast<int>(n);
  fit.window_lo = static_cast<std::int64_t>(window_lo);
  fit.window_hi = static_cast<std::int64_t>(window_hi);
  return fit;
}

void select_window(const std::vector<double>& ts, const std::vector<double>& means,
                   double t_lo, double t_hi, std::vector<double>& xs,
                   std::vector<double>& ys, bool log_x) {
  if (ts.size() != means.size())
    throw std::invalid_argument("rate fit: ts/means size mismatch");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < t_lo || ts[i] > t_hi) continue;
    if (!(means[i] > 0.0))
      throw std::invalid_argument("rate fit: nonpositive mean inside the window");
    xs.push_back(log_x ? std::log(ts[i]) : ts[i]);
    ys.push_back(std::log(means[i]));
  }
  if (xs.size() < 5)
    throw std::invalid_argument("rate fit: window must contain at least 5 points");
}

}  // namespace

RateFit fit_power_rate(const std::vector<double>& ts, const std::vector<double>& means,
                       double t_lo, double t_hi) {
  std::vector<double> xs, ys;
  select_window(ts, means, t_lo, t_hi, xs, ys, true);
  return fit_line(xs, ys, t_lo, t_hi);
}

RateFit fit_geometric_rate(const std::vector<double>& ts,
                           const std::vector<double>& means, double t_lo, double t_hi) {
  std::vector<double> xs, ys;
  select_window(ts, means, t_lo, t_hi, xs, ys, false);
  RateFit fit = fit_line(xs, ys, t_lo, t_hi);
  fit.value = std::exp(fit.value);
  fit.geometric = true;
  return fit;
}

std::vector<ComplexityRow> complexity_curve(const ExperimentResult& result,
                                            const std::vector<double>& eps_grid) {
  std::vector<ComplexityRow> out;
  out.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    ComplexityRow row;
    row.eps = eps;
    for (const AggregateRow& r : result.rows) {
      if (r.gap_mean <= eps) {
        row.t_hit = r.t;
        row.calls_at_hit = r.cum_calls;
        row.reached = true;
        break;
      }
    }
    if (!row.reached && !result.rows.empty()) {
      row.t_hit = 0;
      row.calls_at_hit = result.rows.back().cum_calls;
    }
    out.push_back(row);
  }
  return out;
}

std::vector<std::string> export_result(const ExperimentResult& result,
                                       bool write_csv, bool write_json,
                                       const std::string& out_dir) {
  if (result.rows.empty())
    throw std::invalid_argument("export_result: no aggregate rows to export");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

  std::vector<std::string> paths;
  if (write_csv) {
    const std::string path = (std::filesystem::path(out_dir) / "trajectory.csv").string();
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "algo,rep_count,t,N_t,cum_calls,gap_mean,gap_se,dist_sq_mean,dist_sq_se,"
           "dM_mean,dM_se,alpha_t,beta_t\n";
    for (const AggregateRow& r : result.rows) {
      out << result.algo << ',' << r.rep_count << ',' << r.t << ',' << r.batch << ','
          << r.cum_calls << ',' << format_g17(r.gap_mean) << ',' << format_g17(r.gap_se)
          << ',' << format_g17(r.dist_sq_mean) << ',' << format_g17(r.dist_sq_se) << ','
          << format_g17(r.dm_mean) << ',' << format_g17(r.dm_se) << ','
          << format_g17(r.alpha) << ',' << format_g17(r.beta) << '\n';
    }
    if (!out.good()) throw IoError("write failed: " + path);
    out.close();
    paths.push_back(path);
  }
  if (write_json) {
    const std::string path = (std::filesystem::path(out_dir) / "summary.json").string();
    nlohmann::json j;
    j["version"] = kVersion;
    j["algo"] = result.algo;
    j["seed"] = result.seed;
    j["reps"] = result.reps;
    j["failures"] = result.failures;
    j["x1_dist_sq"] = result.x1_dist_sq;
    j["rate_fit"] = {
        {"kind", result.rate.geometric ? "geometric" : "power"},
        {"value", result.rate.value},
        {"r_squared", result.rate.r_squared},
        {"points", result.rate.points},
        {"window_lo", result.rate.window_lo},
        {"window_hi", result.rate.window_hi},
    };
    j["bound_report"] = {
        {"t0", result.bound.t0}, {"rho", result.bound.rho},     {"J", result.bound.J},
        {"C", result.bound.C},   {"C0", result.bound.C0},       {"C1", result.bound.C1},
        {"gamma", result.bound.gamma}, {"Q", result.bound.Q},
    };
    nlohmann::json echo = nlohmann::json::object();
    for (const auto& [k, v] : result.config_echo) echo[k] = v;
    j["config_echo"] = echo;
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out.good()) throw IoError("write failed: " + path);
    out.close();
    paths.push_back(path);
  }
  return paths;
}

LoadedResult load_result_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read result file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty result file: " + path);
  const std::string expected =
      "algo,rep_count,t,N_t,cum_calls,gap_mean,gap_se,dist_sq_mean,dist_sq_se,"
      "dM_mean,dM_se,alpha_t,beta_t";
  if (line != expected) throw IoError("unexpected CSV header in " + path);

  LoadedResult out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(part);
    if (parts.size() != 13)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 13 columns");
    AggregateRow row;
    try {
      if (out.algo.empty()) out.algo = parts[0];
      row.rep_count = std::stoi(parts[1]);
      row.t = std::stoll(parts[2]);
      row.batch = std::stoll(parts[3]);
      row.cum_calls = std::stoll(parts[4]);
      row.gap_mean = std::stod(parts[5]);
      row.gap_se = std::stod(parts[6]);
      row.dist_sq_mean = std::stod(parts[7]);
      row.dist_sq_se = std::stod(parts[8]);
      row.dm_mean = std::stod(parts[9]);
      row.dm_se = std::stod(parts[10]);
      row.alpha = std::stod(parts[11]);
      row.beta = std::stod(parts[12]);
    } catch (const std::exception&) {
      throw IoError(path + ":" + std::to_string(lineno) + ": malformed row");
    }
    out.rows.push_back(row);
  }
  if (out.rows.empty()) throw IoError("no data rows in " + path);
  return out;
}

std::string default_out_dir() {
  const char* env = std::getenv("DYSA_OUT_DIR");
  return env && *env ? env : "out";
}

}  // namespace dysa
