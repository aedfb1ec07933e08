#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

// Streaming first/second moments with compensated accumulation and a
// parallel merge. Replication aggregates in the harness are reduced with
// these, so the merge must be order-insensitive to near machine precision.

namespace dysa {

class MomentAccumulator {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    kahan_add(mean_, mean_c_, d / static_cast<double>(n_));
    // d * (x - updated mean): classic Welford cross term
    kahan_add(m2_, m2_c_, d * (x - mean_));
  }

  void merge(const MomentAccumulator& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(other.n_);
    const double d = other.mean() - mean();
    const double n = na + nb;
    const double mean_new = mean() + d * (nb / n);
    const double m2_new = m2() + other.m2() + d * d * (na * nb / n);
    n_ += other.n_;
    mean_ = mean_new;
    mean_c_ = 0.0;
    m2_ = m2_new;
    m2_c_ = 0.0;
  }

  std::int64_t count() const { return n_; }
  double mean() const { return mean_ + mean_c_; }
  double m2() const { return m2_ + m2_c_; }

  double variance_sample() const {
    if (n_ < 2) return 0.0;
    return m2() / static_cast<double>(n_ - 1);
  }

  double stddev_sample() const { return std::sqrt(variance_sample()); }

  // Standard error of the mean; 0 for a single observation.
  double standard_error() const {
    if (n_ < 2) return 0.0;
    return stddev_sample() / std::sqrt(static_cast<double>(n_));
  }

 private:
  static void kahan_add(double& sum, double& comp, double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double mean_c_ = 0.0;
  double m2_ = 0.0;
  double m2_c_ = 0.0;
};

// (mean, standard error) of a sample; throws on empty input.
inline std::pair<double, double> moments(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("moments: empty sample");
  MomentAccumulator acc;
  for (double v : values) acc.add(v);
  return {acc.mean(), acc.standard_error()};
}

}  // namespace dysa
