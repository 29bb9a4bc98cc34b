#pragma once

#include <complex>
#include <vector>

#include "cqlqg/linalg.hpp"

namespace cqlqg {

// One term of a grade-r operator: X -> left * X * right.
struct OperatorPair {
  Matrix left;   // s x p
  Matrix right;  // q x t
};

enum class PairParity { kSymmetric, kAntisymmetric };

// Linear operator X -> sum_k left_k * X * right_k on p x q matrices.
// Self-adjoint (Frobenius inner product) when every pair is jointly
// symmetric or jointly antisymmetric.
class GradeROperator {
 public:
  explicit GradeROperator(std::vector<OperatorPair> pairs);
  static GradeROperator single(Matrix left, Matrix right);

  int grade() const { return static_cast<int>(pairs_.size()); }
  const std::vector<OperatorPair>& pairs() const { return pairs_; }

  Eigen::Index in_rows() const { return pairs_.front().left.cols(); }
  Eigen::Index in_cols() const { return pairs_.front().right.rows(); }
  Eigen::Index out_rows() const { return pairs_.front().left.rows(); }
  Eigen::Index out_cols() const { return pairs_.front().right.cols(); }
  bool endomorphism() const {
    return in_rows() == out_rows() && in_cols() == out_cols();
  }

  Matrix apply(const Matrix& x) const;
  GradeROperator adjoint() const;

  // Vectorized matrix: Xi = sum_k right_k^T (x) left_k, so that
  // vec(apply(X)) = Xi * vec(X).
  Matrix op_matrix() const;

  // Solves apply(result) = y through the vectorized system; throws
  // SingularOperatorError when the reciprocal condition estimate of Xi
  // falls below kMinRcond.
  Matrix invert_apply(const Matrix& y) const;

  // Eigenvalues of the operator. Grade one with square blocks uses the
  // pairwise-product rule; higher grades use the spectrum of Xi.
  Eigen::VectorXcd spectrum() const;

  // Spectrum of a self-adjoint-tagged operator as reals; imaginary parts
  // above kEigTolerance (relative) raise EigenvalueError.
  Vector self_adjoint_spectrum() const;

  // Classifies each pair; throws ConsistencyError naming the first pair
  // that is neither symmetric nor antisymmetric within tol.
  std::vector<PairParity> check_self_adjoint(double tol = kPrTolerance) const;

 private:
  std::vector<OperatorPair> pairs_;
};

struct GradeTwoInvertibility {
  bool invertible = false;
  std::complex<double> witness;  // offending product lambda_j * mu_k when not invertible
  double min_distance = 0.0;     // min |lambda_j * mu_k + 1|
};

// Grade-two invertibility criterion: with nonsingular leading pair, the
// operator is invertible iff no product of eigenvalues of left1^-1*left2
// and right2*right1^-1 equals -1.
GradeTwoInvertibility grade_two_invertible(const GradeROperator& op,
                                           double tol = kEigTolerance);

}  // namespace cqlqg
