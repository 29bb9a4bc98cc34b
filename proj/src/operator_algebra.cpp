#include "cqlqg/operator_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <string>
#include <utility>

namespace cqlqg {

GradeROperator::GradeROperator(std::vector<OperatorPair> pairs)
    : pairs_(std::move(pairs)) {
  if (pairs_.empty()) {
    throw ShapeError("GradeROperator: at least one pair required");
  }
  const auto& first = pairs_.front();
  for (const auto& pair : pairs_) {
    if (pair.left.rows() != first.left.rows() ||
        pair.left.cols() != first.left.cols() ||
        pair.right.rows() != first.right.rows() ||
        pair.right.cols() != first.right.cols()) {
      throw ShapeError("GradeROperator: all pairs must share block shapes");
    }
  }
}

GradeROperator GradeROperator::single(Matrix left, Matrix right) {
  std::vector<OperatorPair> pairs;
  pairs.push_back({std::move(left), std::move(right)});
  return GradeROperator(std::move(pairs));
}

Matrix GradeROperator::apply(const Matrix& x) const {
  if (x.rows() != in_rows() || x.cols() != in_cols()) {
    throw ShapeError("GradeROperator::apply: argument shape mismatch");
  }
  Matrix out = Matrix::Zero(out_rows(), out_cols());
  for (const auto& pair : pairs_) {
    out.noalias() += pair.left * x * pair.right;
  }
  return out;
}

GradeROperator GradeROperator::adjoint() const {
  std::vector<OperatorPair> transposed;
  transposed.reserve(pairs_.size());
  for (const auto& pair : pairs_) {
    transposed.push_back({pair.left.transpose(), pair.right.transpose()});
  }
  return GradeROperator(std::move(transposed));
}

Matrix GradeROperator::op_matrix() const {
  Matrix xi = Matrix::Zero(out_rows() * out_cols(), in_rows() * in_cols());
  for (const auto& pair : pairs_) {
    xi += kron(pair.right.transpose(), pair.left);
  }
  return xi;
}

Matrix GradeROperator::invert_apply(const Matrix& y) const {
  if (!endomorphism()) {
    throw ShapeError("invert_apply: operator must map a space to itself");
  }
  if (y.rows() != out_rows() || y.cols() != out_cols()) {
    throw ShapeError("invert_apply: right-hand side shape mismatch");
  }
  const Matrix xi = op_matrix();
  Eigen::PartialPivLU<Matrix> lu(xi);
  if (lu.rcond() < kMinRcond) {
    throw SingularOperatorError(
        "invert_apply: operator matrix numerically singular (rcond " +
        std::to_string(lu.rcond()) + ")");
  }
  return unvec(lu.solve(vec(y)), in_rows(), in_cols());
}

Eigen::VectorXcd GradeROperator::spectrum() const {
  if (!endomorphism()) {
    throw ShapeError("spectrum: operator must map a space to itself");
  }
  if (grade() == 1 && in_rows() == out_rows() && in_cols() == out_cols() &&
      pairs_.front().left.rows() == pairs_.front().left.cols() &&
      pairs_.front().right.rows() == pairs_.front().right.cols()) {
    // Pairwise products of the block spectra.
    Eigen::EigenSolver<Matrix> ls(pairs_.front().left, false);
    Eigen::EigenSolver<Matrix> rs(pairs_.front().right, false);
    if (ls.info() != Eigen::Success || rs.info() != Eigen::Success) {
      throw EigenvalueError("spectrum: block eigenvalue solver failed");
    }
    Eigen::VectorXcd out(ls.eigenvalues().size() * rs.eigenvalues().size());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < ls.eigenvalues().size(); ++i) {
      for (Eigen::Index j = 0; j < rs.eigenvalues().size(); ++j) {
        out(k++) = ls.eigenvalues()(i) * rs.eigenvalues()(j);
      }
    }
    return out;
  }
  Eigen::EigenSolver<Matrix> solver(op_matrix(), false);
  if (solver.info() != Eigen::Success) {
    throw EigenvalueError("spectrum: eigenvalue solver failed");
  }
  return solver.eigenvalues();
}

Vector GradeROperator::self_adjoint_spectrum() const {
  const Eigen::VectorXcd eigs = spectrum();
  const double scale = std::max(1.0, eigs.cwiseAbs().maxCoeff());
  if (eigs.imag().cwiseAbs().maxCoeff() > kEigTolerance * scale) {
    throw EigenvalueError(
        "self_adjoint_spectrum: spectrum has non-negligible imaginary parts; "
        "operator is not numerically self-adjoint");
  }
  Vector out = eigs.real();
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PairParity> GradeROperator::check_self_adjoint(double tol) const {
  if (!endomorphism()) {
    throw ShapeError("check_self_adjoint: operator must map a space to itself");
  }
  std::vector<PairParity> out;
  out.reserve(pairs_.size());
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    const auto& pair = pairs_[k];
    const double ls = std::max(1.0, pair.left.norm());
    const double rs = std::max(1.0, pair.right.norm());
    const bool left_sym = (pair.left - pair.left.transpose()).norm() <= tol * ls;
    const bool right_sym = (pair.right - pair.right.transpose()).norm() <= tol * rs;
    const bool left_skew = (pair.left + pair.left.transpose()).norm() <= tol * ls;
    const bool right_skew = (pair.right + pair.right.transpose()).norm() <= tol * rs;
    if (left_sym && right_sym) {
      out.push_back(PairParity::kSymmetric);
    } else if (left_skew && right_skew) {
      out.push_back(PairParity::kAntisymmetric);
    } else {
      throw ConsistencyError("check_self_adjoint: pair " + std::to_string(k) +
                             " is neither jointly symmetric nor jointly antisymmetric");
    }
  }
  return out;
}

GradeTwoInvertibility grade_two_invertible(const GradeROperator& op, double tol) {
  if (op.grade() != 2) {
    throw ShapeError("grade_two_invertible: operator must have grade exactly 2");
  }
  const auto& pairs = op.pairs();
  const Matrix& a1 = pairs[0].left;
  const Matrix& b1 = pairs[0].right;
  if (a1.rows() != a1.cols() || b1.rows() != b1.cols()) {
    throw ShapeError("grade_two_invertible: blocks must be square");
  }
  Eigen::PartialPivLU<Matrix> lu_a1(a1);
  Eigen::PartialPivLU<Matrix> lu_b1(b1);
  if (lu_a1.rcond() < kMinRcond || lu_b1.rcond() < kMinRcond) {
    throw SingularOperatorError(
        "grade_two_invertible: leading pair numerically singular");
  }
  const Matrix left_ratio = lu_a1.solve(pairs[1].left);            // a1^-1 a2
  const Matrix right_ratio =
      lu_b1.solve(pairs[1].right.transpose()).transpose();         // b2 b1^-1
  Eigen::EigenSolver<Matrix> ls(left_ratio, false);
  Eigen::EigenSolver<Matrix> rs(right_ratio, false);
  if (ls.info() != Eigen::Success || rs.info() != Eigen::Success) {
    throw EigenvalueError("grade_two_invertible: eigenvalue solver failed");
  }
  GradeTwoInvertibility result;
  result.min_distance = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ls.eigenvalues().size(); ++i) {
    for (Eigen::Index j = 0; j < rs.eigenvalues().size(); ++j) {
      const std::complex<double> product =
          ls.eigenvalues()(i) * rs.eigenvalues()(j);
      const double distance = std::abs(product + 1.0);
      if (distance < result.min_distance) {
        result.min_distance = distance;
        result.witness = product;
      }
    }
  }
  result.invertible = result.min_distance > tol;
  return result;
}

}  // namespace cqlqg
