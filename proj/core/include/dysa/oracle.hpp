#pragma once

#include <cstdint>
#include <vector>

#include "dysa/oracle_model.hpp"
#include "dysa/problems.hpp"
#include "dysa/rng.hpp"
#include "dysa/vec.hpp"

namespace dysa {

// Cumulative count of single-sample oracle calls charged to one run.
using CallCounter = std::int64_t;

// Averaged stochastic gradient together with the number of samples it cost.
struct MiniBatch {
  Vector grad;
  std::int64_t count = 0;
};

// One unbiased stochastic gradient at x. The noise law per model:
//   additive       grad + N(0, (sigma^2/d) I)
//   random_matrix  grad + N(0, scale^2 (1 + |x|^2) I)
// The second is the law of (Abar + s G) x + (bbar + s h) minus the mean.
Vector sample_gradient(const OracleModel& model, const ProblemInstance& problem,
                       const Vector& x, RngStream& stream);

// Mean of n single-sample gradients, charged as n calls. The batch mean is
// drawn in aggregate from its exact Gaussian law, so cost is O(d) for any n;
// n = 1 reproduces sample_gradient bit for bit on an identical stream.
MiniBatch minibatch_gradient(const OracleModel& model, const ProblemInstance& problem,
                             const Vector& x, std::int64_t n, RngStream& stream,
                             CallCounter& calls);

// Literal n-sample average; reference implementation for testing the
// aggregate path. Identical law, O(n d) cost.
MiniBatch minibatch_gradient_literal(const OracleModel& model,
                                     const ProblemInstance& problem, const Vector& x,
                                     std::int64_t n, RngStream& stream,
                                     CallCounter& calls);

// (sigma_star + sigma_lip * dist) / sqrt(n): the guaranteed decay of the
// mini-batch error L2-norm under multiplicative noise.
double variance_decay_bound(double sigma_star, double sigma_lip, double dist,
                            std::int64_t n);

// Monte-Carlo estimate of sigma(x) = sqrt(E |grad_sample - grad|^2), m draws.
double estimate_pointwise_sigma(const OracleModel& model, const ProblemInstance& problem,
                                const Vector& x, int m, RngStream& stream);

// Empirical slope max over probes of (sigma(probe) - sigma(anchor)) / distance,
// clamped at zero. Each sigma uses m draws on a child stream.
double estimate_sigma_lip(const OracleModel& model, const ProblemInstance& problem,
                          const Vector& anchor, const std::vector<Vector>& probes,
                          int m, RngStream& stream);

// E[opnorm(A(sample))^2] by power iteration on each of m sampled matrices.
// For the additive model the matrix is deterministic and this returns L^2.
double estimate_mean_sq_opnorm(const OracleModel& model, const ProblemInstance& problem,
                               int m, RngStream& stream);

}  // namespace dysa
