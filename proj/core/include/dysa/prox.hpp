#pragma once

#include <string>

#include "dysa/vec.hpp"

// Composite-step machinery: regularizers phi, feasible sets X, and the
// prox-mapping x = argmin_{v in X} <u, v-y> + ||v-y||^2/(2 alpha) + phi(v).
// Only pairings with an exact closed form are supported; everything else is
// rejected up front so no solver ever runs on an approximate prox.

namespace dysa {

enum class RegKind { zero, l1, squared_l2, elastic_net };

struct RegularizerSpec {
  RegKind kind = RegKind::zero;
  double lambda = 0.0;  // l1 weight, or quadratic weight for squared_l2/elastic_net
  double gamma = 0.0;   // l1 weight inside elastic_net

  static RegularizerSpec zero() { return {}; }
  static RegularizerSpec l1(double lambda);
  static RegularizerSpec squared_l2(double lambda);
  static RegularizerSpec elastic_net(double lambda, double gamma);

  bool is_zero() const { return kind == RegKind::zero; }
};

enum class ConsKind { all_space, box, ball };

struct ConstraintSpec {
  ConsKind kind = ConsKind::all_space;
  double lo = 0.0;         // uniform box bounds
  double hi = 0.0;
  Vector center;           // ball center; empty means the origin
  double radius = 0.0;

  static ConstraintSpec all_space() { return {}; }
  static ConstraintSpec box(double lo, double hi);
  static ConstraintSpec ball(double radius, Vector center = {});

  // Membership within an absolute tolerance.
  bool contains(const Vector& x, double tol = 1e-9) const;
};

const char* reg_kind_name(RegKind k);
const char* cons_kind_name(ConsKind k);

// Closed-form support table:
//   all_space x {zero, l1, squared_l2, elastic_net}
//   box       x {zero, l1, squared_l2, elastic_net}   (coordinate separable)
//   ball      x {zero}                                (Euclidean projection)
bool prox_supported(const RegularizerSpec& reg, const ConstraintSpec& cons);

double reg_value(const RegularizerSpec& reg, const Vector& x);

double soft_threshold(double w, double thr);

// Prox-mapping at base point y with gradient estimate u and stepsize alpha.
// Output is always feasible. Throws std::invalid_argument on alpha <= 0,
// dimension mismatch, or an unsupported (reg, cons) pairing.
Vector prox_step(const RegularizerSpec& reg, const ConstraintSpec& cons,
                 const Vector& y, const Vector& u, double alpha);

}  // namespace dysa
