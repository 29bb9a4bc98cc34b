#pragma once

#include <functional>

#include "cqlqg/model.hpp"
#include "cqlqg/operator_algebra.hpp"

namespace cqlqg {

// First-order data of the cost at a stable PR-parameterized point.
struct FirstOrderData {
  Matrix d_gamma_closed;  // dE/dGamma, (2n+p0) x (2n+m1+m2), Gamma-sparse
  Matrix d_gamma_ctrl;    // dE/dgamma, (n+m2) x (n+m2+p), Gamma-sparse
  Matrix d_r;             // dE/dR, n x n symmetric
  Matrix psi;             // symmetric part obstruction, Psi = 0 iff dE/dR = 0
  Matrix phi;             // antisymmetric multiplier of Theorem 1
  Matrix d_b;             // dE/db, n x (m2+p)
  double cost = 0.0;
};

// dE/dGamma = 2 [[H, Q B],[C P, 0]].
Matrix d_gamma_e(const PlantModel& plant, const ClosedLoopSystem& cls);

// dE/dgamma over the controller triple; computed by the block formulas and,
// when check_chain_rule is set, revalidated against Pi(Gamma1^T dE/dGamma Gamma2^T).
#ifdef NDEBUG
inline constexpr bool kCheckChainRuleDefault = false;
#else
inline constexpr bool kCheckChainRuleDefault = true;
#endif
Matrix d_small_gamma_e(const PlantModel& plant, const ClosedLoopSystem& cls,
                       bool check_chain_rule = kCheckChainRuleDefault);

// Full first-order bundle at (R, b); throws UnstableError when the loop is
// not Hurwitz.
FirstOrderData first_order_data(const PlantModel& plant, const ClosedLoopSystem& cls,
                                const Matrix& b);
FirstOrderData grad_r_b(const PlantModel& plant, const ControllerParams& params);

// The quasi-separated gain operators and their splittings.
struct SeparatedOperators {
  GradeROperator m_full;  // grade 3 on n x (m2+p)
  GradeROperator m1;      // grade 3 on n x m2
  GradeROperator m2;      // grade 2 on n x p
  GradeROperator m1_skew; // [[Phi, J2]]
  GradeROperator m1_pos;  // [[Q22, I | J0 P22 J0, J2 D0^T D0 J2]]
  GradeROperator m2_skew; // [[Phi, D J1 D^T]]
  GradeROperator m2_pos;  // [[Q22, D D^T]]
};

SeparatedOperators build_m_operators(const PlantModel& plant, const Matrix& phi,
                                     const Matrix& q22, const Matrix& p22);
SeparatedOperators build_m_operators(const PlantModel& plant,
                                     const ClosedLoopSystem& cls, const Matrix& phi);

struct DominationResult {
  bool applicable = false;  // Q22 positive definite
  double radius = 0.0;      // spectral radius of Q22^-1 Phi
};

// Spectral radius of Delta = Q22^-1 Phi; radius < 1 with full-row-rank D
// certifies positive definiteness of M1 and M2.
DominationResult domination_radius(const Matrix& q22, const Matrix& phi);

// Second Frechet derivative of E over R applied to a symmetric direction.
Matrix hessian_r_apply(const PlantModel& plant, const ClosedLoopSystem& cls,
                       const Matrix& m);

struct HessianMatrixResult {
  Matrix matrix;                 // 4 Ups^T (Omega + Omega^T) Ups, order n(n+1)/2
  Vector vech_weights;           // diag(Lambda^T Lambda): 1 on diagonal coords, 2 off
  double reconciliation_error;   // max rel. gap of matrix*vech(M) vs weights .* vech(apply(M))
  double min_eigenvalue;         // of the symmetrized matrix (quadratic-form sign)
  double symmetry_defect;        // ||matrix - matrix^T|| / ||matrix||
};

// vech-basis representation of the R-Hessian with diagnostics against the
// operator route. matrix * vech(M) equals vech_weights .* vech(hessian_r_apply(M)).
HessianMatrixResult hessian_r_matrix(const PlantModel& plant,
                                     const ClosedLoopSystem& cls);

// Second Frechet derivative of E over the full Gamma matrix. Holds the
// factorized Lyapunov operators of the loop so repeated directions are cheap.
class GammaHessian {
 public:
  GammaHessian(const PlantModel& plant, const ClosedLoopSystem& cls);
  // Applies d2E/dGamma2 to a Gamma-shaped direction of size
  // (2n+p0) x (2n+m1+m2).
  Matrix apply(const Matrix& x) const;

 private:
  Eigen::Index state_dim_, noise_dim_, out_dim_;
  Matrix p_, q_, b_, c_;
  LyapunovSolver forward_, adjoint_;
};

Matrix d2_gamma_e_apply(const PlantModel& plant, const ClosedLoopSystem& cls,
                        const Matrix& x);

// Gamma-shaped directions induced by parameter moves and their adjoints;
// building blocks of the second-order machinery.
Matrix gamma_dir_from_r(const PlantModel& plant, const Matrix& m);
Matrix gamma_dir_from_b(const PlantModel& plant, const Matrix& b, const Matrix& delta);
Matrix r_dir_adjoint(const PlantModel& plant, const Matrix& y);
Matrix b_dir_adjoint(const PlantModel& plant, const Matrix& b, const Matrix& y);

// Exact d2E/db2 applied to a direction (R fixed): the Gamma second derivative
// pushed through the parameterization plus the curvature of b -> a.
Matrix hessian_b_apply(const PlantModel& plant, const ClosedLoopSystem& cls,
                       const Matrix& b, const Matrix& h22, const Matrix& delta);

// Central-difference oracles. Used by tests, gradcheck and certificates only.
Matrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x0,
                   double h, bool symmetric_mode);
double fd_directional(const std::function<double(const Matrix&)>& f, const Matrix& x0,
                      const Matrix& dir, double h);
double fd_second_directional(const std::function<double(const Matrix&)>& f,
                             const Matrix& x0, const Matrix& dir, double h);

}  // namespace cqlqg
