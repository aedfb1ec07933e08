#include "dysa/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace dysa {

namespace {

// Per-coordinate stddev of the mean of n single-sample gradients at x.
double batch_mean_stddev(const OracleModel& model, const ProblemInstance& problem,
                         const Vector& x, std::int64_t n) {
  const double dn = static_cast<double>(n);
  switch (model.kind) {
    case OracleKind::additive:
      return model.sigma / std::sqrt(static_cast<double>(problem.dim) * dn);
    case OracleKind::random_matrix:
      return model.scale * std::sqrt((1.0 + norm_sq(x)) / dn);
  }
  throw std::logic_error("batch_mean_stddev: bad kind");
}

Vector draw_batch_mean(const OracleModel& model, const ProblemInstance& problem,
                       const Vector& x, std::int64_t n, RngStream& stream) {
  require_same_dim(x, problem.b, "sample_gradient");
  Vector g = problem.grad(x);
  const double sd = batch_mean_stddev(model, problem, x, n);
  if (sd > 0.0)
    for (double& v : g) v += sd * stream.normal();
  return g;
}

}  // namespace

Vector sample_gradient(const OracleModel& model, const ProblemInstance& problem,
                       const Vector& x, RngStream& stream) {
  return draw_batch_mean(model, problem, x, 1, stream);
}

MiniBatch minibatch_gradient(const OracleModel& model, const ProblemInstance& problem,
                             const Vector& x, std::int64_t n, RngStream& stream,
                             CallCounter& calls) {
  if (n < 1) throw std::invalid_argument("minibatch_gradient: batch size must be >= 1");
  MiniBatch mb{draw_batch_mean(model, problem, x, n, stream), n};
  calls += n;
  return mb;
}

MiniBatch minibatch_gradient_literal(const OracleModel& model,
                                     const ProblemInstance& problem, const Vector& x,
                                     std::int64_t n, RngStream& stream,
                                     CallCounter& calls) {
  if (n < 1) throw std::invalid_argument("minibatch_gradient: batch size must be >= 1");
  Vector acc = zeros(x.size());
  for (std::int64_t i = 0; i < n; ++i)
    axpy(1.0, sample_gradient(model, problem, x, stream), acc);
  for (double& v : acc) v /= static_cast<double>(n);
  calls += n;
  return {std::move(acc), n};
}

double variance_decay_bound(double sigma_star, double sigma_lip, double dist,
                            std::int64_t n) {
  if (n < 1) throw std::invalid_argument("variance_decay_bound: n must be >= 1");
  if (sigma_star < 0.0 || sigma_lip < 0.0 || dist < 0.0)
    throw std::invalid_argument("variance_decay_bound: arguments must be nonnegative");
  return (sigma_star + sigma_lip * dist) / std::sqrt(static_cast<double>(n));
}

double estimate_pointwise_sigma(const OracleModel& model, const ProblemInstance& problem,
                                const Vector& x, int m, RngStream& stream) {
  if (m < 2) throw std::invalid_argument("estimate_pointwise_sigma: m must be >= 2");
  const Vector mean = problem.grad(x);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const Vector g = sample_gradient(model, problem, x, stream);
    acc += dist_sq(g, mean);
  }
  return std::sqrt(acc / static_cast<double>(m));
}

double estimate_sigma_lip(const OracleModel& model, const ProblemInstance& problem,
                          const Vector& anchor, const std::vector<Vector>& probes,
                          int m, RngStream& stream) {
  if (probes.empty()) throw std::invalid_argument("estimate_sigma_lip: no probes");
  RngStream anchor_stream = stream.child(0);
  const double sigma_anchor =
      estimate_pointwise_sigma(model, problem, anchor, m, anchor_stream);
  double best = 0.0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double gap = dist(probes[i], anchor);
    if (gap == 0.0)
      throw std::invalid_argument("estimate_sigma_lip: probe coincides with anchor");
    RngStream probe_stream = stream.child(static_cast<std::uint32_t>(i + 1));
    const double sigma_probe =
        estimate_pointwise_sigma(model, problem, probes[i], m, probe_stream);
    best = std::max(best, (sigma_probe - sigma_anchor) / gap);
  }
  return best;
}

double estimate_mean_sq_opnorm(const OracleModel& model, const ProblemInstance& problem,
                               int m, RngStream& stream) {
  if (m < 1) throw std::invalid_argument("estimate_mean_sq_opnorm: m must be >= 1");
  const std::size_t d = static_cast<std::size_t>(problem.dim);
  const double s = model.kind == OracleKind::random_matrix ? model.scale : 0.0;
  std::vector<double> fluct;
  double acc = 0.0;
  for (int sample = 0; sample < m; ++sample) {
    if (s > 0.0) {
      fluct.resize(d * d);
      for (double& v : fluct) v = stream.normal();
    }
    // power iteration on A^T A where A = Abar + s * fluct
    auto apply = [&](const Vector& v) {
      Vector w = problem.apply_matrix(v);
      if (s > 0.0)
        for (std::size_t i = 0; i < d; ++i) {
          double acc_row = 0.0;
          for (std::size_t j = 0; j < d; ++j) acc_row += fluct[i * d + j] * v[j];
          w[i] += s * acc_row;
        }
      return w;
    };
    auto apply_t = [&](const Vector& v) {
      Vector w = problem.apply_matrix(v);
      if (s > 0.0)
        for (std::size_t j = 0; j < d; ++j) {
          double acc_col = 0.0;
          for (std::size_t i = 0; i < d; ++i) acc_col += fluct[i * d + j] * v[i];
          w[j] += s * acc_col;
        }
      return w;
    };
    Vector v = gaussian_vector(stream, d);
    double lam = 0.0;
    for (int it = 0; it < 60; ++it) {
      Vector av = apply(v);
      lam = norm_sq(av) / std::max(norm_sq(v), 1e-300);
      Vector next = apply_t(av);
      const double nn = norm(next);
      if (nn == 0.0) break;
      for (double& q : next) q /= nn;
      v = std::move(next);
    }
    acc += lam;
  }
  return acc / static_cast<double>(m);
}

}  // namespace dysa
