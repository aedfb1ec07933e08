#include "dysa/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dysa {

namespace {

// Row-major orthogonal Q: returns Q v.
Vector rot_apply(const std::vector<double>& q, const Vector& v) {
  const std::size_t d = v.size();
  Vector out(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += q[i * d + j] * v[j];
    out[i] = s;
  }
  return out;
}

// Q^T v.
Vector rot_apply_t(const std::vector<double>& q, const Vector& v) {
  const std::size_t d = v.size();
  Vector out(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += q[i * d + j] * v[i];
    out[j] = s;
  }
  return out;
}

// Coordinates of x in the eigenbasis.
Vector to_eigen_basis(const ProblemInstance& p, const Vector& x) {
  return p.rotated() ? rot_apply_t(p.rotation, x) : x;
}

Vector from_eigen_basis(const ProblemInstance& p, const Vector& w) {
  return p.rotated() ? rot_apply(p.rotation, w) : w;
}

// Random orthogonal matrix: modified Gram-Schmidt on a Gaussian matrix,
// columns orthonormalized.
std::vector<double> random_rotation(std::size_t d, RngStream& stream) {
  std::vector<double> q(d * d);
  for (auto& v : q) v = stream.normal();
  for (std::size_t col = 0; col < d; ++col) {
    for (std::size_t prev = 0; prev < col; ++prev) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += q[i * d + col] * q[i * d + prev];
      for (std::size_t i = 0; i < d; ++i) q[i * d + col] -= s * q[i * d + prev];
    }
    double n = 0.0;
    for (std::size_t i = 0; i < d; ++i) n += q[i * d + col] * q[i * d + col];
    n = std::sqrt(n);
    if (n < 1e-12) throw std::runtime_error("random_rotation: degenerate draw");
    for (std::size_t i = 0; i < d; ++i) q[i * d + col] /= n;
  }
  return q;
}

// 1-d composite minimum of a/2 x^2 + b x + lam x^2 + gam |x| over [lo, hi].
// The unconstrained minimizer clamps exactly because the objective is convex
// in one variable.
double scalar_composite_min(double a, double b, double lam, double gam,
                            bool boxed, double lo, double hi) {
  const double curv = a + 2.0 * lam;
  double x;
  if (curv > 0.0) {
    x = soft_threshold(-b, gam) / curv;
  } else {
    // flat direction: bounded only if |b| <= gam or the box caps it
    if (std::abs(b) <= gam) {
      x = 0.0;
    } else if (!boxed) {
      throw std::invalid_argument("reference_solution: objective unbounded below along a flat direction");
    } else {
      x = b > 0.0 ? lo : hi;
    }
  }
  if (boxed) x = std::clamp(x, lo, hi);
  return x;
}

// Deterministic accelerated descent to the prox fixed point; gradient restart
// keeps it monotone enough for tight tolerances on strongly convex cases.
Vector fallback_solve(const ProblemInstance& p, double tol) {
  const double alpha = 1.0 / p.L;
  Vector z = zeros(p.dim);
  if (!p.cons.contains(z, 0.0)) {
    // start feasible: project the origin
    z = prox_step(RegularizerSpec::zero(), p.cons, zeros(p.dim), zeros(p.dim), 1.0);
  }
  Vector y = z;
  double beta = 1.0;
  const long cap = 5000000;
  for (long it = 1; it <= cap; ++it) {
    Vector g = p.grad(y);
    Vector z_new = prox_step(p.reg, p.cons, y, g, alpha);
    if ((it & 15) == 0) {
      Vector gx = p.grad(z_new);
      Vector fix = prox_step(p.reg, p.cons, z_new, gx, alpha);
      if (dist(z_new, fix) / alpha <= tol) return fix;
    }
    // restart when momentum points uphill
    double sw = 0.0;
    for (int i = 0; i < p.dim; ++i) sw += (y[i] - z_new[i]) * (z_new[i] - z[i]);
    if (sw > 0.0) beta = 1.0;
    const double beta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * beta * beta));
    const double w = (beta - 1.0) / beta_next;
    for (int i = 0; i < p.dim; ++i) y[i] = z_new[i] + w * (z_new[i] - z[i]);
    z = z_new;
    beta = beta_next;
  }
  Vector gx = p.grad(z);
  Vector fix = prox_step(p.reg, p.cons, z, gx, alpha);
  throw std::runtime_error("reference_solution: no convergence within iteration cap, residual " +
                           std::to_string(dist(z, fix) / alpha));
}

}  // namespace

double ProblemInstance::kappa() const {
  if (!(c > 0.0)) throw std::invalid_argument("kappa: problem is not strongly convex");
  return L / c;
}

double ProblemInstance::f(const Vector& x) const {
  require_same_dim(x, b, "ProblemInstance::f");
  const Vector w = to_eigen_basis(*this, x);
  double quad = 0.0;
  for (int i = 0; i < dim; ++i) quad += eigs[i] * w[i] * w[i];
  return 0.5 * quad + dot(b, x);
}

Vector ProblemInstance::apply_matrix(const Vector& v) const {
  require_same_dim(v, b, "ProblemInstance::apply_matrix");
  Vector w = to_eigen_basis(*this, v);
  for (int i = 0; i < dim; ++i) w[i] *= eigs[i];
  return from_eigen_basis(*this, w);
}

Vector ProblemInstance::grad(const Vector& x) const {
  Vector g = apply_matrix(x);
  for (int i = 0; i < dim; ++i) g[i] += b[i];
  return g;
}

double ProblemInstance::gap(const Vector& x) const {
  if (!cons.contains(x, 1e-9))
    throw std::invalid_argument("gap: point violates the constraint");
  return g(x) - g_star;
}

Vector true_gradient(const ProblemInstance& p, const Vector& x) { return p.grad(x); }

Vector reference_solution(const ProblemInstance& p, double tol) {
  const bool diag = !p.rotated();
  const bool separable_cons =
      p.cons.kind == ConsKind::all_space || p.cons.kind == ConsKind::box;

  // Smooth or ridge composite: exact solve in the eigenbasis.
  if (p.reg.kind == RegKind::zero || p.reg.kind == RegKind::squared_l2) {
    const double lam = p.reg.kind == RegKind::squared_l2 ? p.reg.lambda : 0.0;
    Vector w = to_eigen_basis(p, scaled(p.b, -1.0));
    Vector u(p.dim);
    for (int i = 0; i < p.dim; ++i) {
      const double curv = p.eigs[i] + 2.0 * lam;
      if (curv > 0.0) {
        u[i] = w[i] / curv;
      } else if (std::abs(w[i]) <= 1e-12 * std::max(1.0, norm(p.b))) {
        u[i] = 0.0;  // min-norm pick along the kernel
      } else {
        throw std::invalid_argument("reference_solution: objective unbounded below along a flat direction");
      }
    }
    Vector x = from_eigen_basis(p, u);
    if (p.cons.contains(x, 1e-12)) return x;
    if (diag && p.cons.kind == ConsKind::box) {
      // separable objective: clamp each eigen-coordinate (here ambient == eigen)
      for (int i = 0; i < p.dim; ++i)
        x[i] = scalar_composite_min(p.eigs[i], p.b[i], lam, 0.0, true, p.cons.lo, p.cons.hi);
      return x;
    }
    return fallback_solve(p, tol);
  }

  // l1 / elastic net: coordinate closed form needs a diagonal matrix.
  if (diag && separable_cons) {
    const double lam = p.reg.kind == RegKind::elastic_net ? p.reg.lambda : 0.0;
    const double gam = p.reg.kind == RegKind::elastic_net ? p.reg.gamma : p.reg.lambda;
    const bool boxed = p.cons.kind == ConsKind::box;
    Vector x(p.dim);
    for (int i = 0; i < p.dim; ++i)
      x[i] = scalar_composite_min(p.eigs[i], p.b[i], lam, gam, boxed, p.cons.lo, p.cons.hi);
    return x;
  }

  return fallback_solve(p, tol);
}

ProblemInstance make_quadratic(Vector eigs, Vector b, RegularizerSpec reg,
                               ConstraintSpec cons, OracleModel model,
                               std::vector<double> rotation) {
  ProblemInstance p;
  p.dim = static_cast<int>(eigs.size());
  if (p.dim == 0) throw std::invalid_argument("make_quadratic: empty spectrum");
  require_same_dim(eigs, b, "make_quadratic");
  if (!rotation.empty() && rotation.size() != eigs.size() * eigs.size())
    throw std::invalid_argument("make_quadratic: rotation size mismatch");
  if (!prox_supported(reg, cons))
    throw std::invalid_argument(std::string("make_quadratic: unsupported pairing ") +
                                reg_kind_name(reg.kind) + " x " + cons_kind_name(cons.kind));
  for (double e : eigs)
    if (!(e >= 0.0) || !std::isfinite(e))
      throw std::invalid_argument("make_quadratic: eigenvalues must be finite and nonnegative");
  if (!std::is_sorted(eigs.begin(), eigs.end()))
    throw std::invalid_argument("make_quadratic: eigenvalues must be ascending");

  p.eigs = std::move(eigs);
  p.b = std::move(b);
  p.rotation = std::move(rotation);
  p.reg = reg;
  p.cons = cons;
  p.model = model;
  p.c = p.eigs.front();
  p.L = p.eigs.back();
  if (!(p.L > 0.0)) throw std::invalid_argument("make_quadratic: largest eigenvalue must be positive");
  if (cons.kind == ConsKind::ball && !cons.center.empty() &&
      cons.center.size() != p.eigs.size())
    throw std::invalid_argument("make_quadratic: ball center dimension mismatch");

  p.x_star = reference_solution(p, 1e-12);
  p.g_star = p.g(p.x_star);

  switch (model.kind) {
    case OracleKind::additive:
      p.sigma_star = model.sigma;
      p.sigma_lip = 0.0;
      break;
    case OracleKind::random_matrix: {
      const double d = static_cast<double>(p.dim);
      p.sigma_star = model.scale * std::sqrt(d * (1.0 + norm_sq(p.x_star)));
      p.sigma_lip = model.scale * std::sqrt(d);
      break;
    }
  }

  // prox fixed-point residual certifies first-order optimality of x_star
  const double alpha = 1.0 / p.L;
  const Vector fix = prox_step(p.reg, p.cons, p.x_star, p.grad(p.x_star), alpha);
  const double resid = dist(p.x_star, fix) / alpha;
  if (!(resid <= 1e-9 * std::max(1.0, p.L * norm(p.x_star))))
    throw std::runtime_error("make_quadratic: stored solution fails the optimality check, residual " +
                             std::to_string(resid));
  return p;
}

ProblemInstance make_random_quadratic(const QuadraticOptions& opts) {
  if (opts.dim < 1) throw std::invalid_argument("make_random_quadratic: dim must be >= 1");
  if (!(opts.L_target > 0.0)) throw std::invalid_argument("make_random_quadratic: L must be positive");
  if (opts.rank_deficient && opts.dim < 2)
    throw std::invalid_argument("make_random_quadratic: rank-deficient needs dim >= 2");
  if (!opts.rank_deficient && (!(opts.c_target > 0.0) || opts.c_target > opts.L_target))
    throw std::invalid_argument("make_random_quadratic: need 0 < c <= L");
  if (opts.rank_deficient && (!(opts.eig_floor > 0.0) || opts.eig_floor >= 1.0))
    throw std::invalid_argument("make_random_quadratic: eig_floor must be in (0,1)");
  if (!(opts.solution_norm >= 0.0))
    throw std::invalid_argument("make_random_quadratic: solution_norm must be nonnegative");

  RngStream root(opts.seed);
  RngStream spec_stream = root.child(1);
  RngStream rot_stream = root.child(2);
  RngStream sol_stream = root.child(3);

  const int d = opts.dim;
  Vector eigs;
  eigs.reserve(d);
  const double lo = opts.rank_deficient ? opts.eig_floor * opts.L_target : opts.c_target;
  const double hi = opts.L_target;
  if (opts.rank_deficient) {
    eigs.push_back(0.0);
    for (int i = 0; i < d - 2; ++i)
      eigs.push_back(lo * std::exp(spec_stream.uniform01() * std::log(hi / lo)));
    eigs.push_back(hi);
  } else {
    eigs.push_back(lo);
    for (int i = 0; i < d - 2; ++i)
      eigs.push_back(lo * std::exp(spec_stream.uniform01() * std::log(hi / lo)));
    if (d > 1) eigs.push_back(hi);
  }
  std::sort(eigs.begin(), eigs.end());

  std::vector<double> rotation;
  if (opts.rotate && d > 1) rotation = random_rotation(static_cast<std::size_t>(d), rot_stream);

  // target solution of the smooth part; zero kernel component keeps the
  // problem bounded below and makes the min-norm solution explicit
  Vector target = gaussian_vector(sol_stream, static_cast<std::size_t>(d));
  if (opts.rank_deficient) {
    if (rotation.empty()) {
      target[0] = 0.0;
    } else {
      Vector w = rot_apply_t(rotation, target);
      w[0] = 0.0;
      target = rot_apply(rotation, w);
    }
  }
  const double tn = norm(target);
  if (opts.solution_norm == 0.0 || tn == 0.0) {
    target = zeros(static_cast<std::size_t>(d));
  } else {
    for (double& v : target) v *= opts.solution_norm / tn;
  }

  // bbar = -Abar * target
  ProblemInstance probe;
  probe.dim = d;
  probe.eigs = eigs;
  probe.b = zeros(static_cast<std::size_t>(d));
  probe.rotation = rotation;
  Vector bbar = scaled(probe.apply_matrix(target), -1.0);

  return make_quadratic(std::move(eigs), std::move(bbar), opts.reg, opts.cons,
                        opts.model, std::move(rotation));
}

}  // namespace dysa
