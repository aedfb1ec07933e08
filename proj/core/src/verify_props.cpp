#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "dysa/oracle.hpp"
#include "dysa/problems.hpp"
#include "dysa/prox.hpp"
#include "dysa/rng.hpp"
#include "dysa/schedules.hpp"
#include "verify_detail.hpp"

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

Vector feasible_point(const ConstraintSpec& cons, RngStream& stream, std::size_t d) {
  Vector x = gaussian_vector(stream, d);
  switch (cons.kind) {
    case ConsKind::all_space:
      return scaled(x, 1.5);
    case ConsKind::box:
      for (double& v : x) v = std::clamp(1.5 * v, cons.lo, cons.hi);
      return x;
    case ConsKind::ball: {
      const double n = norm(x);
      if (n > cons.radius) x = scaled(x, 0.999 * cons.radius / n);
      return x;
    }
  }
  return x;
}

}  // namespace

SuiteReport suite_prox(std::uint64_t seed) {
  SuiteReport rep;
  rep.suite = "prox";

  {
    // with p(v) = <u, v - y> + phi(v), the prox output z satisfies
    // p(z) + |z-y|^2/2a <= p(x) + |x-y|^2/2a - |x-z|^2/2a for every feasible x
    RngStream stream = RngStream(seed).child(1);
    const long cases = 1000000;
    long violations = 0;
    double worst = -std::numeric_limits<double>::infinity();
    struct Combo {
      int reg;
      int cons;
    };
    const Combo combos[9] = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {0, 1},
                             {1, 1}, {2, 1}, {3, 1}, {0, 2}};
    for (long i = 0; i < cases; ++i) {
      const Combo combo = combos[i % 9];
      const std::size_t d = 1 + stream.next_below(4);
      const double lambda = stream.uniform(0.1, 1.5);
      const double gamma = stream.uniform(0.1, 1.5);
      RegularizerSpec reg;
      switch (combo.reg) {
        case 0: reg = RegularizerSpec::zero(); break;
        case 1: reg = RegularizerSpec::l1(lambda); break;
        case 2: reg = RegularizerSpec::squared_l2(lambda); break;
        default: reg = RegularizerSpec::elastic_net(lambda, gamma); break;
      }
      ConstraintSpec cons;
      if (combo.cons == 1) {
        cons = ConstraintSpec::box(stream.uniform(-2.0, -0.3), stream.uniform(0.3, 2.0));
      } else if (combo.cons == 2) {
        cons = ConstraintSpec::ball(stream.uniform(0.5, 2.0));
      }
      const Vector y = scaled(gaussian_vector(stream, d), 1.5);
      const Vector u = scaled(gaussian_vector(stream, d), 1.5);
      const double alpha = stream.uniform(0.01, 1.0);
      const Vector x = feasible_point(cons, stream, d);
      const Vector z = prox_step(reg, cons, y, u, alpha);
      const double inv2a = 0.5 / alpha;
      const double lhs = dot(u, sub(z, y)) + reg_value(reg, z) + inv2a * dist_sq(z, y);
      const double rhs = dot(u, sub(x, y)) + reg_value(reg, x) + inv2a * dist_sq(x, y) -
                         inv2a * dist_sq(x, z);
      const double slack = lhs - rhs;
      worst = std::max(worst, slack);
      if (slack > 1e-9) ++violations;
    }
    rep.checks.push_back({"three_point_inequality", violations == 0,
                          fmt("cases=%ld violations=%ld worst_slack=%.3e", cases,
                              violations, worst),
                          9});
  }

  {
    // d = 1: closed-form prox against brute-force grid minimization
    RngStream stream = RngStream(seed).child(2);
    const double step = 1e-6;
    const long grid_n = 6000001;  // [-3, 3] at 1e-6 resolution
    double worst = 0.0;
    int cases = 0;
    for (int kind = 0; kind < 4; ++kind) {
      for (int rep_i = 0; rep_i < 3; ++rep_i) {
        const double lambda = stream.uniform(0.3, 1.2);
        const double gamma = stream.uniform(0.3, 1.2);
        RegularizerSpec reg;
        switch (kind) {
          case 0: reg = RegularizerSpec::zero(); break;
          case 1: reg = RegularizerSpec::l1(lambda); break;
          case 2: reg = RegularizerSpec::squared_l2(lambda); break;
          default: reg = RegularizerSpec::elastic_net(lambda, gamma); break;
        }
        const double y = stream.uniform(-1.0, 1.0);
        const double u = stream.uniform(-1.5, 1.5);
        const double alpha = stream.uniform(0.2, 1.0);
        const Vector z = prox_step(reg, ConstraintSpec::all_space(), {y}, {u}, alpha);
        double best_v = std::numeric_limits<double>::infinity();
        double best_x = 0.0;
        const double inv2a = 0.5 / alpha;
        for (long g = 0; g < grid_n; ++g) {
          const double xv = -3.0 + step * static_cast<double>(g);
          const double dv = xv - y;
          const double val = u * dv + inv2a * dv * dv + reg_value(reg, {xv});
          if (val < best_v) {
            best_v = val;
            best_x = xv;
          }
        }
        worst = std::max(worst, std::fabs(z[0] - best_x));
        ++cases;
      }
    }
    rep.checks.push_back({"grid_oracle_d1", worst <= 2e-6,
                          fmt("cases=%d resolution=%.0e worst_arg_err=%.3e", cases, step,
                              worst),
                          9});
  }
  return rep;
}

SuiteReport suite_oracle(std::uint64_t seed) {
  SuiteReport rep;
  rep.suite = "oracle";

  const std::int64_t batch_sizes[5] = {1, 4, 16, 64, 256};
  const int m = 10000;
  double worst_bound_ratio = 0.0;
  double ratio_lo = std::numeric_limits<double>::infinity();
  double ratio_hi = 0.0;
  bool bound_ok = true;
  bool halving_ok = true;

  for (int model_i = 0; model_i < 2; ++model_i) {
    QuadraticOptions opts;
    opts.dim = 8;
    opts.c_target = 0.5;
    opts.L_target = 2.0;
    opts.solution_norm = 1.0;
    opts.model = model_i == 0 ? OracleModel::additive(1.0) : OracleModel::random_matrix(0.3);
    opts.seed = seed + static_cast<std::uint64_t>(model_i);
    const ProblemInstance p = make_random_quadratic(opts);

    RngStream model_stream = RngStream(seed).child(10 + static_cast<std::uint32_t>(model_i));
    Vector unit = gaussian_vector(model_stream, static_cast<std::size_t>(p.dim));
    unit = scaled(unit, 1.0 / norm(unit));
    const Vector points[3] = {p.x_star, add(p.x_star, unit), add(p.x_star, scaled(unit, 3.0))};

    for (int pt = 0; pt < 3; ++pt) {
      const Vector& x = points[pt];
      const Vector mean = p.grad(x);
      const double bound_dist = dist(x, p.x_star);
      double errs[5];
      for (int ni = 0; ni < 5; ++ni) {
        RngStream draw_stream =
            model_stream.child(static_cast<std::uint32_t>(100 + pt * 10 + ni));
        double acc = 0.0;
        for (int r = 0; r < m; ++r) {
          CallCounter calls = 0;
          RngStream rep_stream = draw_stream.child(static_cast<std::uint32_t>(r));
          const MiniBatch mb =
              minibatch_gradient(p.model, p, x, batch_sizes[ni], rep_stream, calls);
          acc += dist_sq(mb.grad, mean);
        }
        errs[ni] = std::sqrt(acc / m);
        const double bound =
            variance_decay_bound(p.sigma_star, p.sigma_lip, bound_dist, batch_sizes[ni]);
        const double ratio = errs[ni] / bound;
        worst_bound_ratio = std::max(worst_bound_ratio, ratio);
        if (ratio > 1.05) bound_ok = false;
      }
      for (int ni = 0; ni + 1 < 5; ++ni) {
        const double r = errs[ni] / errs[ni + 1];
        ratio_lo = std::min(ratio_lo, r);
        ratio_hi = std::max(ratio_hi, r);
        if (r < 1.7 || r > 2.3) halving_ok = false;
      }
    }
  }

  rep.checks.push_back({"batch_error_within_decay_bound", bound_ok,
                        fmt("models=2 points=3 N={1..256} m=%d worst_err/bound=%.4f", m,
                            worst_bound_ratio),
                        7});
  rep.checks.push_back({"batch_error_halves_per_4x", halving_ok,
                        fmt("err(N)/err(4N) in [%.3f, %.3f] target [1.7, 2.3]", ratio_lo,
                            ratio_hi),
                        7});
  return rep;
}

SuiteReport suite_schedules(std::uint64_t seed) {
  SuiteReport rep;
  rep.suite = "schedules";

  {
    // accelerated-policy threshold: certified tail mass below phi/(15 sigma^2)
    RngStream stream = RngStream(seed).child(1);
    bool ok = true;
    double worst_frac = 0.0;
    std::int64_t max_t0 = 0;
    for (int i = 0; i < 100; ++i) {
      SmoothPolicy sp;
      sp.mu = stream.uniform(0.3, 0.6);
      sp.b = stream.uniform(0.5, 1.0);
      sp.delta = stream.uniform(0.0, 50.0);
      sp.n0 = 1 + static_cast<std::int64_t>(stream.next_below(4));
      sp.L = stream.uniform(0.5, 4.0);
      sp.a = sp.L * stream.uniform(0.5, 2.0);
      sp.phi = stream.uniform(0.4, 0.99);
      const double sigma_lip = sp.L * stream.uniform(0.1, 1.5);
      const SmoothTailCertificate cert = certify_smooth_tail(sp, sigma_lip);
      const double cap = sp.phi / (15.0 * sigma_lip * sigma_lip);
      const double mass = smooth_tail_mass(sp, cert.t0);
      if (!(mass <= cap) || cert.t0 < cert.t0_formula || cert.t0 < 1) ok = false;
      worst_frac = std::max(worst_frac, mass / cap);
      max_t0 = std::max(max_t0, cert.t0);
    }
    rep.checks.push_back({"smooth_tail_certificate", ok,
                          fmt("draws=100 worst_mass/cap=%.4f max_t0=%lld", worst_frac,
                              static_cast<long long>(max_t0)),
                          11});
  }

  {
    // geometric-policy threshold: delta_aux * zeta^t0 <= phi and the
    // contraction chain lambda + delta_aux zeta^t0 < rho
    RngStream stream = RngStream(seed).child(2);
    bool ok = true;
    double worst_frac = 0.0;
    for (int i = 0; i < 100; ++i) {
      StrongPolicy st;
      st.mu = stream.uniform(0.1, 0.9);
      st.L = stream.uniform(0.5, 4.0);
      st.c = st.L * stream.uniform(0.05, 0.8);
      st.phi = (st.mu * st.c / (2.0 * st.L)) * stream.uniform(0.1, 0.9);
      st.zeta = stream.uniform(0.3, 0.95);
      st.n0 = 1 + static_cast<std::int64_t>(stream.next_below(4));
      const double sigma_lip = i % 10 == 0 ? 0.0 : st.L * stream.uniform(0.1, 2.0);
      const std::int64_t t0 = st.tail_threshold(sigma_lip);
      const double mass = st.delta_aux(sigma_lip) * std::pow(st.zeta, static_cast<double>(t0));
      if (!(mass <= st.phi * (1.0 + 1e-12))) ok = false;
      if (!(st.lambda() + mass < st.rho())) ok = false;
      if (sigma_lip == 0.0 && t0 != 1) ok = false;
      worst_frac = std::max(worst_frac, mass / st.phi);
    }
    rep.checks.push_back(
        {"strong_tail_certificate", ok, fmt("draws=100 worst_mass/phi=%.4f", worst_frac), 11});
  }

  {
    MomentumSequence linear(BetaVariant::linear);
    MomentumSequence exact(BetaVariant::exact);
    bool linear_ok = true;
    double worst_exact = 0.0;
    for (std::int64_t t = 1; t <= 100000; ++t) {
      if (linear.recursion_residual() != -0.25) linear_ok = false;
      worst_exact = std::max(worst_exact, std::fabs(exact.recursion_residual()));
      linear.advance();
      exact.advance();
    }
    rep.checks.push_back({"momentum_recursion_residual", linear_ok && worst_exact <= 1e-12,
                          fmt("t<=1e5 linear=-1/4 %s exact_worst=%.3e",
                              linear_ok ? "exact" : "VIOLATED", worst_exact),
                          11});
  }

  {
    const std::int64_t base = tail_threshold_smooth(0.5, 2, 0.5, 0.0, 1.0);
    const std::int64_t clamped = tail_threshold_smooth(0.5, 2, 0.5, 44.0, 1.0);
    const std::int64_t noiseless = tail_threshold_smooth(0.5, 2, 0.5, 0.0, 0.0);
    const bool ok = base == 42 && clamped == 1 && noiseless == 1;
    rep.checks.push_back({"threshold_shift_clamp", ok,
                          fmt("delta=0 -> %lld (want 42), delta=44 -> %lld (want 1), "
                              "sigma=0 -> %lld (want 1)",
                              static_cast<long long>(base), static_cast<long long>(clamped),
                              static_cast<long long>(noiseless)),
                          11});
  }

  {
    // matched sampling rate is always the binding contraction factor
    RngStream stream = RngStream(seed).child(3);
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
      const double mu = stream.uniform(0.1, 0.9);
      const double L = stream.uniform(0.5, 4.0);
      const double c = L * stream.uniform(0.05, 0.8);
      const double phi = (mu * c / (2.0 * L)) * stream.uniform(0.1, 0.9);
      const double a_frac = max_matched_a(mu, c, L, phi) * stream.uniform(0.1, 1.0);
      const double zeta = matched_zeta(mu, c, L, phi, a_frac);
      if (contraction_rho(mu, c, L, phi, zeta) != zeta) ok = false;
    }
    rep.checks.push_back({"matched_zeta_binding", ok, "draws=100 rho == zeta exactly", 0});
  }
  return rep;
}

}  // namespace dysa::detail
