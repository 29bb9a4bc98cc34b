#pragma once

#include <cstdint>
#include <random>

#include "cqlqg/linalg.hpp"

namespace cqlqg {

// Deterministic, portable random source: mt19937_64 driven, uniforms from the
// top 53 bits, normals via Box-Muller. Identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();   // standard normal
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);
  Matrix symmetric_matrix(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cqlqg
