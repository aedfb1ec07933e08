#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dysa/errors.hpp"
#include "dysa/harness.hpp"
#include "dysa/verify.hpp"
#include "dysa/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;
constexpr int kExitIo = 4;

struct Overrides {
  std::string out_dir;
  std::int64_t seed = -1;
  int reps = 0;
  std::int64_t budget = -1;
  int jobs = 0;
};

void apply_overrides(dysa::ConfigMap& map, const Overrides& ov) {
  if (ov.seed >= 0) map["run.seed"] = std::to_string(ov.seed);
  if (ov.reps > 0) map["run.reps"] = std::to_string(ov.reps);
  if (ov.budget >= 0) map["run.budget"] = std::to_string(ov.budget);
  if (ov.jobs > 0) map["run.jobs"] = std::to_string(ov.jobs);
  if (!ov.out_dir.empty()) map["out.dir"] = ov.out_dir;
}

void print_result(const dysa::ExperimentResult& res,
                  const std::vector<std::string>& paths) {
  std::printf("algo=%s reps=%d failures=%d iterations=%zu\n", res.algo.c_str(), res.reps,
              res.failures, res.rows.size());
  if (res.rate.points > 0) {
    std::printf("rate fit: %s=%.6g r2=%.4f window=[%lld,%lld] points=%d\n",
                res.rate.geometric ? "ratio" : "slope", res.rate.value,
                res.rate.r_squared, static_cast<long long>(res.rate.window_lo),
                static_cast<long long>(res.rate.window_hi), res.rate.points);
  } else {
    std::printf("rate fit: unavailable\n");
  }
  std::printf("bound report: t0=%lld rho=%.6g J=%.6g C=%.6g C0=%.6g C1=%.6g gamma=%.6g\n",
              static_cast<long long>(res.bound.t0), res.bound.rho, res.bound.J,
              res.bound.C, res.bound.C0, res.bound.C1, res.bound.gamma);
  for (const std::string& p : paths) std::printf("wrote %s\n", p.c_str());
}

int run_one(const std::string& config_path, const Overrides& ov,
            const std::string& out_dir) {
  dysa::ConfigMap map = dysa::load_config_file(config_path);
  apply_overrides(map, ov);
  const dysa::ExperimentConfig cfg = dysa::make_experiment_config(map);
  const dysa::ExperimentResult res = dysa::run_experiment(cfg);
  std::string dir = out_dir;
  if (dir.empty()) dir = cfg.out_dir;
  if (dir.empty()) dir = dysa::default_out_dir();
  const std::vector<std::string> paths = dysa::export_result(res, true, true, dir);
  print_result(res, paths);
  return kExitOk;
}

int run_sweep(const std::string& config_dir, const Overrides& ov) {
  std::vector<std::string> configs;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(config_dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg")
      configs.push_back(entry.path().string());
  }
  if (ec) throw dysa::IoError("cannot list config directory " + config_dir + ": " + ec.message());
  if (configs.empty()) throw dysa::IoError("no .cfg files in " + config_dir);
  std::sort(configs.begin(), configs.end());

  std::string base_out = ov.out_dir.empty() ? dysa::default_out_dir() : ov.out_dir;
  for (const std::string& path : configs) {
    const std::string stem = std::filesystem::path(path).stem().string();
    std::printf("== %s ==\n", path.c_str());
    const int code =
        run_one(path, ov, (std::filesystem::path(base_out) / stem).string());
    if (code != kExitOk) return code;
  }
  return kExitOk;
}

int run_verify(const std::string& suite, std::uint64_t seed, int jobs) {
  const dysa::SuiteReport report = dysa::run_suite(suite, seed, jobs);
  for (const dysa::CheckResult& check : report.checks)
    std::printf("[%s] %s: %s\n", check.pass ? "PASS" : "FAIL", check.name.c_str(),
                check.detail.c_str());
  const bool ok = report.all_pass();
  std::printf("suite %s: %s\n", report.suite.c_str(), ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitVerify;
}

int run_report(const std::string& result_dir) {
  const std::string csv = (std::filesystem::path(result_dir) / "trajectory.csv").string();
  const dysa::LoadedResult loaded = dysa::load_result_csv(csv);

  std::vector<double> ts, means;
  for (const dysa::AggregateRow& row : loaded.rows) {
    ts.push_back(static_cast<double>(row.t));
    means.push_back(loaded.algo == "accelerated" ? row.gap_mean : row.dist_sq_mean);
  }
  const double t_first = ts.front();
  const double t_last = ts.back();
  const double lo = t_first + std::ceil(0.1 * (t_last - t_first));

  std::printf("result %s: algo=%s rows=%zu reps=%d\n", result_dir.c_str(),
              loaded.algo.c_str(), loaded.rows.size(), loaded.rows.front().rep_count);
  try {
    const dysa::RateFit fit = loaded.algo == "accelerated"
                                  ? dysa::fit_power_rate(ts, means, lo, t_last)
                                  : dysa::fit_geometric_rate(ts, means, lo, t_last);
    std::printf("rate fit: %s=%.6g r2=%.4f window=[%lld,%lld]\n",
                fit.geometric ? "ratio" : "slope", fit.value, fit.r_squared,
                static_cast<long long>(fit.window_lo),
                static_cast<long long>(fit.window_hi));
  } catch (const std::exception& e) {
    std::printf("rate fit: unavailable (%s)\n", e.what());
  }

  dysa::ExperimentResult shim;
  shim.rows = loaded.rows;
  const std::vector<double> grid = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::printf("%12s %10s %14s\n", "eps", "t_hit", "calls_at_hit");
  for (const dysa::ComplexityRow& row : dysa::complexity_curve(shim, grid)) {
    if (row.reached) {
      std::printf("%12g %10lld %14lld\n", row.eps, static_cast<long long>(row.t_hit),
                  static_cast<long long>(row.calls_at_hit));
    } else {
      std::printf("%12g %10s %14s\n", row.eps, "-", "unreached");
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("dysa ") + dysa::kVersion +
               " - dynamic-sampling stochastic approximation harness"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides ov;
  app.add_option("--out", ov.out_dir, "output directory (default $DYSA_OUT_DIR or ./out)");
  app.add_option("--seed", ov.seed, "override run.seed")
      ->check(CLI::Range(std::int64_t{0}, std::numeric_limits<std::int64_t>::max()));
  app.add_option("--reps", ov.reps, "override run.reps")
      ->check(CLI::Range(1, std::numeric_limits<int>::max()));
  app.add_option("--budget", ov.budget, "override run.budget (oracle calls)")
      ->check(CLI::Range(std::int64_t{1}, std::numeric_limits<std::int64_t>::max()));
  app.add_option("--jobs", ov.jobs, "worker threads (default: hardware)")
      ->check(CLI::Range(0, std::numeric_limits<int>::max()));

  std::string run_config;
  CLI::App* cmd_run = app.add_subcommand("run", "run one experiment from a config file");
  cmd_run->add_option("config", run_config, "config file (key = value)")->required();

  std::string sweep_dir;
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run every .cfg file in a directory");
  cmd_sweep->add_option("config-dir", sweep_dir, "directory of .cfg files")->required();

  std::string suite;
  CLI::App* cmd_verify = app.add_subcommand("verify", "run a named verification suite");
  cmd_verify->add_option("suite", suite, "one of: prox oracle schedules accelerated strong complexity")
      ->required();

  std::string result_dir;
  CLI::App* cmd_report = app.add_subcommand("report", "re-emit fits and tables from a stored result");
  cmd_report->add_option("result-dir", result_dir, "directory holding trajectory.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (cmd_run->parsed()) return run_one(run_config, ov, ov.out_dir);
    if (cmd_sweep->parsed()) return run_sweep(sweep_dir, ov);
    if (cmd_verify->parsed())
      return run_verify(suite, ov.seed >= 0 ? static_cast<std::uint64_t>(ov.seed) : 1,
                        ov.jobs);
    if (cmd_report->parsed()) return run_report(result_dir);
  } catch (const dysa::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const dysa::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
