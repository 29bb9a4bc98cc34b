#include "cqlqg/rng.hpp"

#include <cmath>

namespace cqlqg {

double Rng::uniform() {
  // Top 53 bits give a dyadic rational in [0, 1); avoids the
  // implementation-defined std::uniform_real_distribution.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller with explicit formulas keeps the stream portable.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

Matrix Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      out(i, j) = normal();
    }
  }
  return out;
}

Matrix Rng::symmetric_matrix(Eigen::Index n) {
  return symmetrize(normal_matrix(n, n));
}

}  // namespace cqlqg
