#include "dysa/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dysa {

RegularizerSpec RegularizerSpec::l1(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("l1 regularizer: weight must be finite and nonnegative");
  RegularizerSpec r;
  r.kind = RegKind::l1;
  r.lambda = lambda;
  return r;
}

RegularizerSpec RegularizerSpec::squared_l2(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("squared_l2 regularizer: weight must be finite and nonnegative");
  RegularizerSpec r;
  r.kind = RegKind::squared_l2;
  r.lambda = lambda;
  return r;
}

RegularizerSpec RegularizerSpec::elastic_net(double lambda, double gamma) {
  if (!(lambda >= 0.0) || !(gamma >= 0.0) || !std::isfinite(lambda) || !std::isfinite(gamma))
    throw std::invalid_argument("elastic_net regularizer: weights must be finite and nonnegative");
  RegularizerSpec r;
  r.kind = RegKind::elastic_net;
  r.lambda = lambda;
  r.gamma = gamma;
  return r;
}

ConstraintSpec ConstraintSpec::box(double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("box constraint: lo must not exceed hi");
  ConstraintSpec c;
  c.kind = ConsKind::box;
  c.lo = lo;
  c.hi = hi;
  return c;
}

ConstraintSpec ConstraintSpec::ball(double radius, Vector center) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("ball constraint: radius must be finite and positive");
  ConstraintSpec c;
  c.kind = ConsKind::ball;
  c.radius = radius;
  c.center = std::move(center);
  return c;
}

bool ConstraintSpec::contains(const Vector& x, double tol) const {
  switch (kind) {
    case ConsKind::all_space:
      return true;
    case ConsKind::box:
      for (double v : x)
        if (v < lo - tol || v > hi + tol) return false;
      return true;
    case ConsKind::ball: {
      double s = 0.0;
      if (center.empty()) {
        s = norm_sq(x);
      } else {
        require_same_dim(x, center, "ConstraintSpec::contains");
        s = dist_sq(x, center);
      }
      return std::sqrt(s) <= radius + tol;
    }
  }
  return false;
}

const char* reg_kind_name(RegKind k) {
  switch (k) {
    case RegKind::zero: return "zero";
    case RegKind::l1: return "l1";
    case RegKind::squared_l2: return "squared_l2";
    case RegKind::elastic_net: return "elastic_net";
  }
  return "?";
}

const char* cons_kind_name(ConsKind k) {
  switch (k) {
    case ConsKind::all_space: return "all_space";
    case ConsKind::box: return "box";
    case ConsKind::ball: return "ball";
  }
  return "?";
}

bool prox_supported(const RegularizerSpec& reg, const ConstraintSpec& cons) {
  switch (cons.kind) {
    case ConsKind::all_space:
    case ConsKind::box:
      return true;  // coordinate separable for all four regularizers
    case ConsKind::ball:
      return reg.kind == RegKind::zero;
  }
  return false;
}

double reg_value(const RegularizerSpec& reg, const Vector& x) {
  switch (reg.kind) {
    case RegKind::zero:
      return 0.0;
    case RegKind::l1: {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return reg.lambda * s;
    }
    case RegKind::squared_l2:
      return reg.lambda * norm_sq(x);
    case RegKind::elastic_net: {
      double l1 = 0.0;
      for (double v : x) l1 += std::abs(v);
      return reg.lambda * norm_sq(x) + reg.gamma * l1;
    }
  }
  return 0.0;
}

double soft_threshold(double w, double thr) {
  if (w > thr) return w - thr;
  if (w < -thr) return w + thr;
  return 0.0;
}

namespace {

// argmin over R of (x-w)^2/(2 alpha) + alpha-weighted phi restricted to one
// coordinate; the box clamp afterwards is exact because the objective is a
// convex function of a single variable.
inline double scalar_prox(const RegularizerSpec& reg, double w, double alpha) {
  switch (reg.kind) {
    case RegKind::zero:
      return w;
    case RegKind::l1:
      return soft_threshold(w, alpha * reg.lambda);
    case RegKind::squared_l2:
      return w / (1.0 + 2.0 * alpha * reg.lambda);
    case RegKind::elastic_net:
      return soft_threshold(w, alpha * reg.gamma) / (1.0 + 2.0 * alpha * reg.lambda);
  }
  return w;
}

}  // namespace

Vector prox_step(const RegularizerSpec& reg, const ConstraintSpec& cons,
                 const Vector& y, const Vector& u, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("prox_step: alpha must be finite and positive");
  require_same_dim(y, u, "prox_step");
  if (!prox_supported(reg, cons))
    throw std::invalid_argument(std::string("prox_step: unsupported pairing ") +
                                reg_kind_name(reg.kind) + " x " + cons_kind_name(cons.kind));

  const std::size_t d = y.size();
  Vector x(d);

  if (cons.kind == ConsKind::ball) {
    // reg is zero here: Euclidean projection of the gradient step.
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double c = cons.center.empty() ? 0.0 : cons.center[i];
      x[i] = y[i] - alpha * u[i] - c;
      s += x[i] * x[i];
    }
    const double r = std::sqrt(s);
    const double shrink = r > cons.radius ? cons.radius / r : 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double c = cons.center.empty() ? 0.0 : cons.center[i];
      x[i] = c + shrink * x[i];
    }
    return x;
  }

  for (std::size_t i = 0; i < d; ++i) {
    const double w = y[i] - alpha * u[i];
    double v = scalar_prox(reg, w, alpha);
    if (cons.kind == ConsKind::box) v = std::clamp(v, cons.lo, cons.hi);
    x[i] = v;
  }
  return x;
}

}  // namespace dysa
