#include "cqlqg/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace cqlqg {

Vector vec(const Matrix& m) {
  // Eigen stores column-major, so the stacked columns are the raw buffer.
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw ShapeError("unvec: vector length " + std::to_string(v.size()) +
                     " does not match " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Vector vech(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ShapeError("vech: input must be square");
  }
  const Eigen::Index n = m.rows();
  Vector out(n * (n + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      out(k++) = m(i, j);
    }
  }
  return out;
}

Matrix unvech(const Vector& v) {
  const auto len = v.size();
  const auto n = static_cast<Eigen::Index>(
      std::llround((std::sqrt(8.0 * static_cast<double>(len) + 1.0) - 1.0) / 2.0));
  if (n * (n + 1) / 2 != len) {
    throw ShapeError("unvech: length " + std::to_string(len) +
                     " is not a triangular number");
  }
  Matrix out(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      out(i, j) = v(k);
      out(j, i) = v(k);
      ++k;
    }
  }
  return out;
}

Matrix duplication_matrix(int n) {
  if (n < 1) {
    throw ShapeError("duplication_matrix: order must be positive");
  }
  const Eigen::Index nn = n;
  Matrix lambda = Matrix::Zero(nn * nn, nn * (nn + 1) / 2);
  auto vech_index = [nn](Eigen::Index i, Eigen::Index j) {
    // i >= j assumed
    return j * nn - j * (j + 1) / 2 + i;
  };
  for (Eigen::Index j = 0; j < nn; ++j) {
    for (Eigen::Index i = 0; i < nn; ++i) {
      const Eigen::Index row = j * nn + i;  // vec position of (i, j)
      const Eigen::Index col = (i >= j) ? vech_index(i, j) : vech_index(j, i);
      lambda(row, col) = 1.0;
    }
  }
  return lambda;
}

Matrix commutation_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix k = Matrix::Zero(rows * cols, rows * cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      // vec(M^T) entry (i*cols + j) pulls vec(M) entry (j*rows + i)
      k(i * cols + j, j * rows + i) = 1.0;
    }
  }
  return k;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix symmetrize(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ShapeError("symmetrize: input must be square");
  }
  return (m + m.transpose()) / 2.0;
}

Matrix antisymmetrize(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ShapeError("antisymmetrize: input must be square");
  }
  return (m - m.transpose()) / 2.0;
}

double frobenius_inner(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ShapeError("frobenius_inner: shape mismatch");
  }
  return (x.array() * y.array()).sum();
}

Matrix canonical_j(int order, CanonicalLayout layout) {
  if (order <= 0 || order % 2 != 0) {
    throw ShapeError("canonical_j: order must be even and positive, got " +
                     std::to_string(order));
  }
  Matrix j = Matrix::Zero(order, order);
  const int half = order / 2;
  if (layout == CanonicalLayout::kInterleaved) {
    for (int k = 0; k < half; ++k) {
      j(2 * k, 2 * k + 1) = 1.0;
      j(2 * k + 1, 2 * k) = -1.0;
    }
  } else {
    j.topRightCorner(half, half) = Matrix::Identity(half, half);
    j.bottomLeftCorner(half, half) = -Matrix::Identity(half, half);
  }
  return j;
}

StabilityInfo stability_info(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("stability_info: input must be square");
  }
  if (a.size() == 0) {
    return {true, -std::numeric_limits<double>::infinity()};
  }
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw EigenvalueError("stability_info: eigenvalue solver failed");
  }
  const double abscissa = solver.eigenvalues().real().maxCoeff();
  return {abscissa < -kHurwitzMargin, abscissa};
}

bool is_hurwitz(const Matrix& a) { return stability_info(a).hurwitz; }

bool is_symplectic(const Matrix& sigma, const Matrix& j0, double tol) {
  if (sigma.rows() != sigma.cols() || j0.rows() != j0.cols() ||
      sigma.rows() != j0.rows()) {
    throw ShapeError("is_symplectic: sigma and j0 must be square of equal order");
  }
  const double scale = std::max(1.0, sigma.squaredNorm());
  return (sigma * j0 * sigma.transpose() - j0).norm() <= tol * scale;
}

}  // namespace cqlqg
