#pragma once

#include <Eigen/LU>

#include "cqlqg/linalg.hpp"

namespace cqlqg {

struct StateSpaceTriple {
  Matrix a;  // N x N, must be Hurwitz for Gramian/cost operations
  Matrix b;  // N x M
  Matrix c;  // P x N
};

struct GramianPair {
  Matrix p;  // controllability Gramian
  Matrix q;  // observability Gramian
  Matrix h;  // Hankelian h = q * p
};

// Unique solution N of  a N + N a^T + m = 0  for Hurwitz a.
Matrix lyap_solve(const Matrix& a, const Matrix& m);

// Factorizes the vectorized Lyapunov operator of a fixed Hurwitz matrix once
// and reuses it for repeated right-hand sides.
class LyapunovSolver {
 public:
  explicit LyapunovSolver(const Matrix& a);
  Matrix solve(const Matrix& m) const;
  const Matrix& a() const { return a_; }

 private:
  Matrix a_;
  Eigen::PartialPivLU<Matrix> lu_;
};

GramianPair gramians(const StateSpaceTriple& sys);

struct CostForms {
  double trace_cpc = 0.0;     // Tr(C P C^T)
  double trace_bqb = 0.0;     // Tr(B^T Q B)
  double hankel_form = 0.0;   // -2 <A, H>
};

CostForms lqg_cost_forms(const StateSpaceTriple& sys, const GramianPair& g);

// Squared H2 norm; cross-checks all three equivalent expressions and throws
// ConsistencyError if they disagree beyond 1e-9 relative.
double lqg_cost(const StateSpaceTriple& sys);

// Directional derivatives of the Gramians along a Gamma-shaped perturbation
// [[dA, dB], [dC, 0]] of size (N+P) x (N+M).
Matrix gramian_derivative_p(const StateSpaceTriple& sys, const GramianPair& g,
                            const Matrix& dgamma);
Matrix gramian_derivative_q(const StateSpaceTriple& sys, const GramianPair& g,
                            const Matrix& dgamma);

}  // namespace cqlqg
