#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Small dense vector toolkit. Problems in scope are diagonal or
// rotated-diagonal with modest dimension, so plain loops beat any
// linear-algebra dependency.

namespace dysa {

using Vector = std::vector<double>;

inline void require_same_dim(const Vector& a, const Vector& b, const char* where) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

inline double dot(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double norm(const Vector& v) { return std::sqrt(norm_sq(v)); }

inline double dist_sq(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "dist_sq");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double dist(const Vector& a, const Vector& b) { return std::sqrt(dist_sq(a, b)); }

// y += c * x
inline void axpy(double c, const Vector& x, Vector& y) {
  require_same_dim(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline Vector scaled(const Vector& v, double c) {
  Vector out(v);
  for (double& x : out) x *= c;
  return out;
}

inline Vector add(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "add");
  Vector out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

inline Vector sub(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "sub");
  Vector out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

inline bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline Vector zeros(std::size_t d) { return Vector(d, 0.0); }

inline Vector constant(std::size_t d, double fill) { return Vector(d, fill); }

}  // namespace dysa
