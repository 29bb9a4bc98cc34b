#pragma once

#include <optional>
#include <utility>

#include "cqlqg/lyapunov.hpp"

namespace cqlqg {

struct PlantDims {
  int n = 0;   // plant (and controller) state dimension, 2*nu
  int m1 = 0;  // plant noise dimension, 2*mu1
  int m2 = 0;  // plant control-input dimension, 2*mu2
  int p = 0;   // measured output dimension
  int p0 = 0;  // regulated output dimension
};

// Canonical commutation matrices of the plant/controller interconnection.
struct CommutationData {
  Matrix j0;  // n x n
  Matrix j1;  // m1 x m1
  Matrix j2;  // m2 x m2
  Matrix j;   // blkdiag(j2, D j1 D^T), conformal with b = [b1 b2]
};

// Validated quantum plant.
//
//   dx = A x dt + B1 dw + B2 deta,   dy = C x dt + D dw,   Z = C0 x + D0 zeta.
class PlantModel {
 public:
  // Checks evenness of n, m1, m2, full row rank of D, full column rank of D0
  // and all shape constraints; builds the canonical structures.
  static PlantModel validate(Matrix a, Matrix b1, Matrix b2, Matrix c, Matrix d,
                             Matrix c0, Matrix d0,
                             CanonicalLayout layout = CanonicalLayout::kInterleaved);

  const PlantDims& dims() const { return dims_; }
  CanonicalLayout layout() const { return layout_; }
  const CommutationData& comm() const { return comm_; }

  const Matrix& a() const { return a_; }
  const Matrix& b1() const { return b1_; }
  const Matrix& b2() const { return b2_; }
  const Matrix& c() const { return c_; }
  const Matrix& d() const { return d_; }
  const Matrix& c0() const { return c0_; }
  const Matrix& d0() const { return d0_; }

  // Aggregates of the closed-loop assembly.
  const Matrix& b_full() const { return b_full_; }    // [B1 B2]
  const Matrix& c_bar() const { return c_bar_; }      // [0; C]
  const Matrix& d_bar() const { return d_bar_; }      // [[0, I],[D, 0]]
  const Matrix& i_bar() const { return i_bar_; }      // [I; 0], extracts b1 from b
  const Matrix& gamma0() const { return gamma0_; }
  const Matrix& gamma1() const { return gamma1_; }
  const Matrix& gamma2() const { return gamma2_; }

 private:
  PlantModel() = default;

  PlantDims dims_;
  CanonicalLayout layout_ = CanonicalLayout::kInterleaved;
  CommutationData comm_;
  Matrix a_, b1_, b2_, c_, d_, c0_, d0_;
  Matrix b_full_, c_bar_, d_bar_, i_bar_;
  Matrix gamma0_, gamma1_, gamma2_;
};

// Hamiltonian parameterization (R, b) of a physically realizable controller.
struct ControllerParams {
  Matrix r;  // n x n symmetric
  Matrix b;  // n x (m2 + p); b1 = left n x m2 block
};

struct ControllerRealization {
  Matrix a;   // n x n
  Matrix b1;  // n x m2
  Matrix b2;  // n x p
  Matrix c;   // m2 x n
};

// a = J0 R + b J b^T J0 / 2,  c = J2 b1^T J0. PR holds by construction.
ControllerRealization realize_controller(const PlantModel& plant,
                                         const ControllerParams& params);

struct RecoveredR {
  Matrix r;       // symmetric part of -J0 (a - b J b^T J0 / 2)
  double defect;  // Frobenius norm of the discarded antisymmetric part
};

RecoveredR recover_r(const PlantModel& plant, const Matrix& a, const Matrix& b);

struct PrReport {
  double residual_commutation = 0.0;  // || a J0 + J0 a^T + b J b^T ||_F
  double residual_gain = 0.0;         // || b1 - J0 c^T J2 ||_F
  double scale = 1.0;
  bool pass = false;
};

PrReport check_physical_realizability(const PlantModel& plant,
                                      const ControllerRealization& ctrl);

// Closed loop (13): 2n states, m1+m2 noises, p0 outputs, with the
// Gamma-decomposition cached for derivative work.
class ClosedLoopSystem {
 public:
  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  StateSpaceTriple triple() const { return {a_, b_, c_}; }

  bool stable() const { return stable_; }
  double abscissa() const { return abscissa_; }

  // Gramians of the stable loop; throws UnstableError otherwise.
  const GramianPair& gramians() const;

  int n() const { return n_; }

  // n x n blocks of the cached Gramians/Hankelian (indices 1-based as usual).
  Matrix p_block(int i, int j) const { return block(gramians().p, i, j); }
  Matrix q_block(int i, int j) const { return block(gramians().q, i, j); }
  Matrix h_block(int i, int j) const { return block(gramians().h, i, j); }

 private:
  friend ClosedLoopSystem assemble_closed_loop(const PlantModel&,
                                               const ControllerRealization&);
  Matrix block(const Matrix& m, int i, int j) const {
    return m.block((i - 1) * n_, (j - 1) * n_, n_, n_);
  }

  int n_ = 0;
  Matrix a_, b_, c_;
  bool stable_ = false;
  double abscissa_ = 0.0;
  std::optional<GramianPair> gramians_;
};

// Builds the loop by the direct block formula and by the affine map
// Gamma0 + Gamma1 gamma Gamma2; the two must agree exactly. Unstable loops
// are represented with a status flag instead of an error.
ClosedLoopSystem assemble_closed_loop(const PlantModel& plant,
                                      const ControllerRealization& ctrl);

// Controller state transformation xi -> sigma xi for symplectic sigma:
// (a,b,c) -> (sigma a sigma^-1, sigma b, c sigma^-1), R -> sigma^-T R sigma^-1.
std::pair<ControllerParams, ControllerRealization> symplectic_transform(
    const PlantModel& plant, const ControllerParams& params, const Matrix& sigma);

// Orthogonal projection onto the Gamma-sparsity pattern: zeroes the
// bottom-right (p_rows x m_cols) block of an (r+p_rows) x (r+m_cols) matrix.
Matrix project_gamma(const Matrix& m, int r, int m_cols, int p_rows);

}  // namespace cqlqg
