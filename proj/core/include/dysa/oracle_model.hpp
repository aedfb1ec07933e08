#pragma once

#include <stdexcept>

// Stochastic first-order oracle models. The mean gradient always comes from
// the problem instance; the model describes only the noise law.
//
//   additive:      grad + eps,  eps ~ N(0, (sigma^2/d) I); error second moment
//                  is sigma^2 at every point (state-independent noise).
//   random_matrix: the sample is A(xi) x + b(xi) with A(xi) = Abar + s*G,
//                  b(xi) = bbar + s*h, G and h i.i.d. standard normal. The
//                  error law at x is N(0, s^2 (1 + ||x||^2) I): variance grows
//                  with ||x||, unbounded on unbounded feasible sets.

namespace dysa {

enum class OracleKind { additive, random_matrix };

struct OracleModel {
  OracleKind kind = OracleKind::additive;
  double sigma = 0.0;  // additive: sqrt(E||eps||^2)
  double scale = 0.0;  // random_matrix: entry fluctuation scale s

  static OracleModel additive(double sigma) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("additive oracle: sigma must be nonnegative");
    OracleModel m;
    m.kind = OracleKind::additive;
    m.sigma = sigma;
    return m;
  }

  static OracleModel random_matrix(double scale) {
    if (!(scale >= 0.0)) throw std::invalid_argument("random_matrix oracle: scale must be nonnegative");
    OracleModel m;
    m.kind = OracleKind::random_matrix;
    m.scale = scale;
    return m;
  }

  static OracleModel noiseless() { return additive(0.0); }

  bool is_noiseless() const {
    return (kind == OracleKind::additive && sigma == 0.0) ||
           (kind == OracleKind::random_matrix && scale == 0.0);
  }
};

}  // namespace dysa
