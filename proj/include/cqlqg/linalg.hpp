#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include "cqlqg/errors.hpp"

namespace cqlqg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Numerical gates shared across the library.
inline constexpr double kHurwitzMargin = 1e-9;   // eigenvalue real parts must be below -margin
inline constexpr double kPrTolerance = 1e-9;     // physical-realizability / symmetry residuals
inline constexpr double kSolveTolerance = 1e-10; // relative residual gate for linear solves
inline constexpr double kEigTolerance = 1e-9;    // eigenvalue-based predicates
inline constexpr double kMinRcond = 1e-12;       // reciprocal-condition gate for inversion

// Two equivalent canonical forms of the antisymmetric structure matrix:
// interleaved = block-diagonal copies of [[0,1],[-1,0]], stacked = [[0,I],[-I,0]].
enum class CanonicalLayout { kInterleaved, kStacked };

// Column-stacking vectorization and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);

// Half-vectorization: lower triangle including the diagonal, column by column.
Vector vech(const Matrix& m);
// Rebuilds the symmetric matrix whose vech is v.
Matrix unvech(const Vector& v);

// 0/1 duplication matrix with vec(M) = L * vech(M) for symmetric M.
Matrix duplication_matrix(int n);

// Commutation matrix K with K * vec(M) = vec(M^T) for M of the given shape.
Matrix commutation_matrix(Eigen::Index rows, Eigen::Index cols);

Matrix kron(const Matrix& a, const Matrix& b);

Matrix symmetrize(const Matrix& m);
Matrix antisymmetrize(const Matrix& m);

double frobenius_inner(const Matrix& x, const Matrix& y);

Matrix canonical_j(int order, CanonicalLayout layout = CanonicalLayout::kInterleaved);

struct StabilityInfo {
  bool hurwitz = false;
  double abscissa = 0.0;  // max real part of the spectrum
};

StabilityInfo stability_info(const Matrix& a);
bool is_hurwitz(const Matrix& a);

bool is_symplectic(const Matrix& sigma, const Matrix& j0, double tol = kPrTolerance);

}  // namespace cqlqg
