#pragma once

#include <cstdint>
#include <optional>

#include "dysa/oracle_model.hpp"
#include "dysa/prox.hpp"
#include "dysa/rng.hpp"
#include "dysa/vec.hpp"

// Synthetic composite test problems
//   min_{x in X}  g(x) = f(x) + phi(x),   f(x) = <x, Abar x>/2 + <bbar, x>
// with Abar = Q diag(eigs) Q^T (Q optional rotation, identity by default).
// Each instance carries its exact solution, optimal value, and the noise
// magnitudes of its oracle at the solution, so runs can report true
// optimality gaps and distances.

namespace dysa {

struct ProblemInstance {
  int dim = 0;
  Vector eigs;                      // ascending eigenvalues of Abar
  Vector b;                         // linear term, ambient coordinates
  std::vector<double> rotation;     // row-major d x d orthogonal Q; empty = identity
  RegularizerSpec reg;
  ConstraintSpec cons;
  OracleModel model;

  double L = 0.0;                   // largest eigenvalue
  double c = 0.0;                   // smallest eigenvalue (0 = not strongly convex)

  Vector x_star;                    // exact solution (min-norm one if non-unique)
  double g_star = 0.0;              // g(x_star)
  double sigma_star = 0.0;          // oracle error L2-norm at x_star
  double sigma_lip = 0.0;           // growth modulus: sigma(x) <= sigma_star + sigma_lip*||x - x_star||

  bool rotated() const { return !rotation.empty(); }
  bool strongly_convex() const { return c > 0.0; }
  double kappa() const;             // L/c; throws when c == 0

  double f(const Vector& x) const;        // smooth part
  Vector grad(const Vector& x) const;     // exact mean gradient Abar x + b
  double g(const Vector& x) const { return f(x) + reg_value(reg, x); }

  // g(x) - g_star with a feasibility check (1e-9 absolute).
  double gap(const Vector& x) const;

  // Abar v without the linear term (used by oracle sample materialization).
  Vector apply_matrix(const Vector& v) const;
};

Vector true_gradient(const ProblemInstance& p, const Vector& x);

struct QuadraticOptions {
  int dim = 2;
  double c_target = 1.0;            // smallest eigenvalue (ignored when rank_deficient)
  double L_target = 10.0;           // largest eigenvalue
  bool rank_deficient = false;      // smallest eigenvalue forced to 0
  double eig_floor = 1e-4;          // smallest positive eigenvalue fraction of L (rank-deficient case)
  bool rotate = false;              // conjugate the diagonal by a random rotation
  double solution_norm = 1.0;       // norm of the drawn target solution
  RegularizerSpec reg = RegularizerSpec::zero();
  ConstraintSpec cons = ConstraintSpec::all_space();
  OracleModel model = OracleModel::noiseless();
  std::uint64_t seed = 1;
};

// Random instance factory. bbar is chosen as -Abar x_target so the smooth
// part's minimizer is known exactly; the stored solution then accounts for
// the regularizer/constraint (closed form where available, deterministic
// solve otherwise).
ProblemInstance make_random_quadratic(const QuadraticOptions& opts);

// Fully specified instance (diagonal eigs in ascending order unless rotation
// given); used by tests and the factory.
ProblemInstance make_quadratic(Vector eigs, Vector b, RegularizerSpec reg,
                               ConstraintSpec cons, OracleModel model,
                               std::vector<double> rotation = {});

// Exact solution of the composite problem: closed form for separable /
// unconstrained-interior cases, deterministic accelerated descent to the
// prox fixed point otherwise. Throws on unbounded problems or
// non-convergence within the iteration cap (residual reported).
Vector reference_solution(const ProblemInstance& p, double tol = 1e-12);

}  // namespace dysa
