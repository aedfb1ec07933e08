#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "dysa/harness.hpp"
#include "dysa/verify.hpp"
#include "verify_detail.hpp"

namespace dysa {

bool SuiteReport::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"prox",        "oracle", "schedules",
                                                 "accelerated", "strong", "complexity"};
  return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, int jobs) {
  if (name == "prox") return detail::suite_prox(seed);
  if (name == "oracle") return detail::suite_oracle(seed);
  if (name == "schedules") return detail::suite_schedules(seed);
  if (name == "accelerated") return detail::suite_accelerated(seed, jobs);
  if (name == "strong") return detail::suite_strong(seed, jobs);
  if (name == "complexity") return detail::suite_complexity(seed, jobs);
  std::string msg = "unknown verify suite '" + name + "' (valid:";
  for (const std::string& n : verify_suite_names()) msg += " " + n;
  msg += ")";
  throw std::invalid_argument(msg);
}

}  // namespace dysa

namespace dysa::detail {

namespace {

std::string fmt(const char* pattern, ...) {
  char buf[256];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// Desk-scale accelerated benchmark: rank-deficient spectrum so only the
// O(1/t^2) regime is visible, multiplicative-noise oracle, textbook policy.
ExperimentConfig accelerated_base(std::uint64_t seed, int jobs) {
  ExperimentConfig cfg;
  cfg.problem.dim = 20;
  cfg.problem.rank_deficient = true;
  cfg.problem.eig_floor = 1e-4;
  cfg.problem.L_target = 1.0;
  cfg.problem.rotate = true;
  cfg.problem.solution_norm = 1.0;
  cfg.problem.cons = ConstraintSpec::ball(3.0);
  cfg.problem.model = OracleModel::random_matrix(0.15);
  cfg.problem.seed = seed;
  cfg.algo = AlgoKind::accelerated;
  cfg.mu = 0.5;
  cfg.a = -1.0;  // resolves to L
  cfg.b = 0.5;
  cfg.delta = 44.0;
  cfg.n0 = 2;
  cfg.phi = 0.5;
  cfg.iterations = 300;
  cfg.reps = 50;
  cfg.seed = seed;
  cfg.jobs = jobs;
  cfg.fit_window_lo = 30;
  cfg.fit_window_hi = 300;
  return cfg;
}

// Strongly convex benchmark with the sampling rate matched to the
// contraction split, so rho == zeta is the certified rate.
ExperimentConfig strong_base(std::uint64_t seed, int jobs) {
  ExperimentConfig cfg;
  cfg.problem.dim = 10;
  cfg.problem.c_target = 0.1;
  cfg.problem.L_target = 1.0;
  cfg.problem.rotate = true;
  cfg.problem.solution_norm = 1.0;
  cfg.problem.model = OracleModel::random_matrix(0.2);
  cfg.problem.seed = seed;
  cfg.algo = AlgoKind::prox_gradient;
  cfg.mu = 0.9;
  cfg.phi = 0.02;
  cfg.a_frac = 0.35;
  cfg.n0 = 2;
  cfg.iterations = 100;
  cfg.reps = 50;
  cfg.seed = seed;
  cfg.jobs = jobs;
  cfg.fit_window_lo = 10;
  cfg.fit_window_hi = 100;
  return cfg;
}

double slope_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

}  // namespace

SuiteReport suite_accelerated(std::uint64_t seed, int jobs) {
  SuiteReport rep;
  rep.suite = "accelerated";

  const ExperimentConfig cfg = accelerated_base(seed, jobs);
  const ProblemInstance p = build_problem(cfg);
  const ExperimentResult res = aggregate_replications(cfg, p, run_replications(cfg, p));

  {
    const bool ok = res.rate.points > 0 && res.rate.value >= -2.4 && res.rate.value <= -1.6;
    rep.checks.push_back({"gap_rate_exponent", ok,
                          fmt("slope=%.3f over t in [30,300] (want [-2.4,-1.6]) r2=%.3f "
                              "reps=%d",
                              res.rate.value, res.rate.r_squared, res.reps),
                          1});
  }

  {
    GapBoundInputs in;
    in.gap1 = res.rows.front().gap_mean;
    in.s1_dist_sq = res.rows.front().s_dist_sq_mean;
    in.sigma_star = p.sigma_star;
    in.sigma_lip = p.sigma_lip;
    in.J = res.bound.J;
    in.mu = cfg.mu;
    in.a = p.L;
    in.b = cfg.b;
    in.delta = cfg.delta;
    in.n0 = cfg.n0;
    in.L = p.L;
    double worst = 0.0;
    bool ok = res.rows.size() >= 300;
    for (std::int64_t t = 2; t <= 300 && ok; ++t) {
      const double measured = res.rows[static_cast<std::size_t>(t - 1)].gap_mean;
      const double cap = 2.0 * accelerated_gap_bound(t, in);
      worst = std::max(worst, measured / cap);
      if (!(measured <= cap)) ok = false;
    }
    rep.checks.push_back({"gap_envelope_audit", ok,
                          fmt("t in [2,300]: worst gap/(2*envelope)=%.3f J=%.3f t0=%lld",
                              worst, res.bound.J, static_cast<long long>(res.bound.t0)),
                          2});
  }

  {
    ExperimentConfig open = cfg;
    open.problem.cons = ConstraintSpec::all_space();
    open.iterations = 200;
    open.fit_window_lo = 0;
    open.fit_window_hi = 0;
    const ExperimentResult r3 = run_experiment(open);
    const double early = r3.rows[9].gap_mean;
    const double late = r3.rows[199].gap_mean;
    const bool ok = r3.failures == 0 && r3.rows.size() == 200 && late <= early / 50.0;
    rep.checks.push_back({"unbounded_domain_decay", ok,
                          fmt("gap(200)/gap(10)=%.5f (want <= 0.02) failures=%d",
                              late / early, r3.failures),
                          3});
  }

  {
    ExperimentConfig noisy = cfg;
    noisy.delta = 0.0;
    noisy.iterations = 60;
    noisy.reps = 200;
    noisy.fit_window_lo = 0;
    noisy.fit_window_hi = 0;
    const ExperimentResult r8 = run_experiment(noisy);
    int passed = 0, total = 0;
    double worst_stat = 0.0;
    for (std::size_t i = 1; i < r8.rows.size(); ++i) {
      ++total;
      const double stat = std::fabs(r8.rows[i].dm_mean) / r8.rows[i].dm_se;
      worst_stat = std::max(worst_stat, stat);
      if (stat <= 3.5) ++passed;
    }
    const double frac = static_cast<double>(passed) / static_cast<double>(total);
    rep.checks.push_back({"martingale_increment_centering", frac >= 0.95,
                          fmt("reps=200 t in [2,60]: |mean dM|<=3.5se for %.1f%% "
                              "(worst |t-stat|=%.2f)",
                              100.0 * frac, worst_stat),
                          8});
  }

  {
    QuadraticOptions po = cfg.problem;
    po.model = OracleModel::noiseless();
    const ProblemInstance pn = make_random_quadratic(po);
    SmoothPolicy sp = resolve_smooth_policy(cfg, pn);
    sp.fixed_batch = 1;
    RunOptions opt;
    opt.iterations = 200;
    opt.record_iterates = true;
    RngStream stream = RngStream(seed).child(77);
    const Trajectory tr = run_accelerated(pn, pn.model, sp, opt, stream);

    const std::size_t d = static_cast<std::size_t>(pn.dim);
    Vector z_prev = zeros(d), y = zeros(d);
    MomentumSequence seq(cfg.beta_variant);
    long mismatches = tr.points.size() == 200 ? 0 : 1;
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
      const Vector z = prox_step(pn.reg, pn.cons, y, pn.grad(y), sp.alpha());
      for (std::size_t k = 0; k < d; ++k)
        if (z[k] != tr.points[i].iterate[k]) ++mismatches;
      y = extrapolate(z, z_prev, seq.beta(), seq.beta_next());
      z_prev = z;
      seq.advance();
    }
    rep.checks.push_back({"noiseless_reduction_bitwise", mismatches == 0,
                          fmt("200 iterations, %ld coordinate mismatches", mismatches),
                          10});
  }

  return rep;
}

SuiteReport suite_strong(std::uint64_t seed, int jobs) {
  SuiteReport rep;
  rep.suite = "strong";

  const ExperimentConfig cfg = strong_base(seed, jobs);
  const ProblemInstance p = build_problem(cfg);
  const StrongPolicy st = resolve_strong_policy(cfg, p);
  const ExperimentResult res = aggregate_replications(cfg, p, run_replications(cfg, p));

  {
    const bool matched = st.rho() == st.zeta;
    double worst = 0.0;
    bool ok = matched && res.rows.size() >= 100;
    for (std::size_t i = 0; i < res.rows.size() && ok; ++i) {
      const double cap =
          res.bound.C * std::pow(res.bound.rho, static_cast<double>(res.rows[i].t + 1));
      worst = std::max(worst, res.rows[i].dist_sq_mean / cap);
      if (!(res.rows[i].dist_sq_mean <= cap)) ok = false;
    }
    rep.checks.push_back({"linear_rate_envelope", ok,
                          fmt("rho=zeta=%.5f C=%.2f worst dist2/(C rho^{t+1})=%.3f",
                              res.bound.rho, res.bound.C, worst),
                          4});
  }

  {
    const bool ok = res.rate.points > 0 && res.rate.geometric &&
                    res.rate.value <= res.bound.rho + 0.02;
    rep.checks.push_back({"geometric_ratio_fit", ok,
                          fmt("fitted ratio=%.5f vs rho+0.02=%.5f r2=%.3f", res.rate.value,
                              res.bound.rho + 0.02, res.rate.r_squared),
                          4});
  }

  {
    QuadraticOptions po;
    po.dim = 10;
    po.c_target = 0.1;
    po.L_target = 1.0;
    po.rotate = false;
    po.solution_norm = 1.0;
    po.model = OracleModel::noiseless();
    po.seed = seed + 1;
    const ProblemInstance pd = make_random_quadratic(po);
    StrongPolicy noiseless;
    noiseless.mu = 0.9;
    noiseless.zeta = 0.5;
    noiseless.n0 = 1;
    noiseless.phi = 0.02;
    noiseless.L = pd.L;
    noiseless.c = pd.c;
    RunOptions opt;
    opt.iterations = 40;
    opt.x0 = pd.x_star;
    opt.x0[0] += 10.0;  // error along the smallest eigenvalue only
    RngStream stream = RngStream(seed).child(78);
    const Trajectory tr = run_prox_gradient(pd, pd.model, noiseless, opt, stream);

    const double lambda = noiseless.lambda();
    double prev = 10.0;
    double worst = 0.0;
    for (const TrajectoryPoint& pt : tr.points) {
      const double cur = std::sqrt(pt.dist_sq);
      worst = std::max(worst, std::fabs(cur / (prev * lambda) - 1.0));
      prev = cur;
    }
    const bool ok = tr.points.size() == 40 && worst <= 1e-12;
    rep.checks.push_back({"noiseless_contraction_factor", ok,
                          fmt("40 steps, worst |ratio/(1-mu c/L) - 1|=%.3e", worst), 10});
  }

  return rep;
}

SuiteReport suite_complexity(std::uint64_t seed, int jobs) {
  SuiteReport rep;
  rep.suite = "complexity";

  {
    ExperimentConfig cfg = strong_base(seed, jobs);
    cfg.problem.model = OracleModel::random_matrix(0.45);
    cfg.iterations = 420;
    cfg.reps = 20;
    cfg.fit_window_lo = 0;
    cfg.fit_window_hi = 0;
    const ExperimentResult res = run_experiment(cfg);
    const std::vector<double> grid = {1e-1, 1e-2, 1e-3, 1e-4};
    const std::vector<ComplexityRow> curve = complexity_curve(res, grid);
    bool reached = true;
    std::vector<double> xs, ys;
    for (const ComplexityRow& row : curve) {
      reached = reached && row.reached;
      if (row.reached) {
        xs.push_back(std::log(1.0 / row.eps));
        ys.push_back(std::log(static_cast<double>(row.calls_at_hit)));
      }
    }
    const double slope = xs.size() >= 2 ? slope_fit(xs, ys) : 0.0;
    const bool ok = reached && slope >= 0.8 && slope <= 1.2;
    rep.checks.push_back({"strongly_convex_call_growth", ok,
                          fmt("eps 1e-1..1e-4 %s, log calls / log(1/eps) slope=%.3f "
                              "(want [0.8,1.2])",
                              reached ? "all reached" : "NOT all reached", slope),
                          5});
  }

  {
    ExperimentConfig cfg = accelerated_base(seed, jobs);
    cfg.problem.cons = ConstraintSpec::all_space();
    // denser spectrum and a farther start flatten the hit spacing onto the
    // t^-2 backbone, so the fitted exponent reflects the schedule, not the
    // discreteness of the eigenvalue draw
    cfg.problem.dim = 100;
    cfg.problem.solution_norm = 12.0;
    cfg.delta = 0.0;
    cfg.iterations = 450;
    cfg.reps = 20;
    cfg.fit_window_lo = 0;
    cfg.fit_window_hi = 0;
    const ExperimentResult res = run_experiment(cfg);
    const std::vector<double> grid = {1e-1, 1e-2, 1e-3};
    const std::vector<ComplexityRow> curve = complexity_curve(res, grid);
    bool reached = true;
    std::vector<double> xs, ys;
    for (const ComplexityRow& row : curve) {
      reached = reached && row.reached;
      if (row.reached) {
        xs.push_back(std::log(1.0 / row.eps));
        ys.push_back(std::log(static_cast<double>(row.calls_at_hit)));
      }
    }
    const double slope = xs.size() >= 2 ? slope_fit(xs, ys) : 0.0;
    const bool ok = reached && slope >= 1.6 && slope <= 2.4;
    rep.checks.push_back({"smooth_call_growth", ok,
                          fmt("eps 1e-1..1e-3 %s, log calls / log(1/eps) slope=%.3f "
                              "(want [1.6,2.4])",
                              reached ? "all reached" : "NOT all reached", slope),
                          6});
  }

  {
    bool ok = true;
    double lo = 1e300, hi = 0.0;
    for (const std::int64_t T : {std::int64_t{100}, std::int64_t{1000}, std::int64_t{10000}}) {
      long double total = 0.0L;
      for (std::int64_t t = 1; t <= T; ++t)
        total += static_cast<long double>(smooth_batch_size(t, 1, 0.5, 0.0));
      const double logT = std::log(static_cast<double>(T));
      const double ratio = static_cast<double>(
          total / (powl(static_cast<long double>(T), 4) * logT * logT));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      if (ratio < 0.1 || ratio > 10.0) ok = false;
    }
    rep.checks.push_back({"cumulative_batch_growth_law", ok,
                          fmt("sum N_t / (T^4 ln^2 T) in [%.3f, %.3f] for T=1e2..1e4 "
                              "(want [0.1,10])",
                              lo, hi),
                          6});
  }

  return rep;
}

}  // namespace dysa::detail
