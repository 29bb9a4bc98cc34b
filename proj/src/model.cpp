#include "cqlqg/model.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <string>

namespace cqlqg {

namespace {

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                   const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(std::string(name) + ": expected " + std::to_string(rows) +
                     "x" + std::to_string(cols) + ", got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

Eigen::Index numeric_rank(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  svd.setThreshold(1e-10);
  return svd.rank();
}

}  // namespace

PlantModel PlantModel::validate(Matrix a, Matrix b1, Matrix b2, Matrix c, Matrix d,
                                Matrix c0, Matrix d0, CanonicalLayout layout) {
  PlantModel plant;
  const int n = static_cast<int>(a.rows());
  const int m1 = static_cast<int>(b1.cols());
  const int m2 = static_cast<int>(b2.cols());
  const int p = static_cast<int>(c.rows());
  const int p0 = static_cast<int>(c0.rows());
  if (n <= 0 || n % 2 != 0) {
    throw ValidationError("plant: state dimension n must be even and positive, got " +
                          std::to_string(n));
  }
  if (m1 <= 0 || m1 % 2 != 0) {
    throw ValidationError("plant: noise dimension m1 must be even and positive, got " +
                          std::to_string(m1));
  }
  if (m2 <= 0 || m2 % 2 != 0) {
    throw ValidationError("plant: input dimension m2 must be even and positive, got " +
                          std::to_string(m2));
  }
  require_shape(a, n, n, "A");
  require_shape(b1, n, m1, "B1");
  require_shape(b2, n, m2, "B2");
  require_shape(c, p, n, "C");
  require_shape(d, p, m1, "D");
  require_shape(c0, p0, n, "C0");
  require_shape(d0, p0, m2, "D0");
  for (const Matrix* m : {&a, &b1, &b2, &c, &d, &c0, &d0}) {
    if (!m->allFinite()) {
      throw ValidationError("plant: matrices must have finite entries");
    }
  }
  if (numeric_rank(d) < p) {
    throw ValidationError("plant: D must have full row rank");
  }
  if (numeric_rank(d0) < m2) {
    throw ValidationError("plant: D0 must have full column rank");
  }

  plant.dims_ = {n, m1, m2, p, p0};
  plant.layout_ = layout;
  plant.a_ = std::move(a);
  plant.b1_ = std::move(b1);
  plant.b2_ = std::move(b2);
  plant.c_ = std::move(c);
  plant.d_ = std::move(d);
  plant.c0_ = std::move(c0);
  plant.d0_ = std::move(d0);

  plant.comm_.j0 = canonical_j(n, layout);
  plant.comm_.j1 = canonical_j(m1, layout);
  plant.comm_.j2 = canonical_j(m2, layout);
  plant.comm_.j = Matrix::Zero(m2 + p, m2 + p);
  plant.comm_.j.topLeftCorner(m2, m2) = plant.comm_.j2;
  plant.comm_.j.bottomRightCorner(p, p) =
      plant.d_ * plant.comm_.j1 * plant.d_.transpose();

  plant.b_full_.resize(n, m1 + m2);
  plant.b_full_ << plant.b1_, plant.b2_;

  plant.c_bar_ = Matrix::Zero(m2 + p, n);
  plant.c_bar_.bottomRows(p) = plant.c_;

  plant.d_bar_ = Matrix::Zero(m2 + p, m1 + m2);
  plant.d_bar_.topRightCorner(m2, m2) = Matrix::Identity(m2, m2);
  plant.d_bar_.bottomLeftCorner(p, m1) = plant.d_;

  plant.i_bar_ = Matrix::Zero(m2 + p, m2);
  plant.i_bar_.topRows(m2) = Matrix::Identity(m2, m2);

  plant.gamma0_ = Matrix::Zero(2 * n + p0, 2 * n + m1 + m2);
  plant.gamma0_.topLeftCorner(n, n) = plant.a_;
  plant.gamma0_.block(0, 2 * n, n, m1 + m2) = plant.b_full_;
  plant.gamma0_.block(2 * n, 0, p0, n) = plant.c0_;

  plant.gamma1_ = Matrix::Zero(2 * n + p0, n + m2);
  plant.gamma1_.block(0, n, n, m2) = plant.b2_;
  plant.gamma1_.block(n, 0, n, n) = Matrix::Identity(n, n);
  plant.gamma1_.block(2 * n, n, p0, m2) = plant.d0_;

  plant.gamma2_ = Matrix::Zero(n + m2 + p, 2 * n + m1 + m2);
  plant.gamma2_.block(0, n, n, n) = Matrix::Identity(n, n);
  plant.gamma2_.block(n, 0, m2 + p, n) = plant.c_bar_;
  plant.gamma2_.block(n, 2 * n, m2 + p, m1 + m2) = plant.d_bar_;

  return plant;
}

ControllerRealization realize_controller(const PlantModel& plant,
                                         const ControllerParams& params) {
  const auto& dims = plant.dims();
  require_shape(params.r, dims.n, dims.n, "R");
  require_shape(params.b, dims.n, dims.m2 + dims.p, "b");
  const Matrix& j0 = plant.comm().j0;
  ControllerRealization ctrl;
  ctrl.a = j0 * params.r +
           params.b * plant.comm().j * params.b.transpose() * j0 / 2.0;
  ctrl.b1 = params.b.leftCols(dims.m2);
  ctrl.b2 = params.b.rightCols(dims.p);
  ctrl.c = plant.comm().j2 * ctrl.b1.transpose() * j0;
  return ctrl;
}

RecoveredR recover_r(const PlantModel& plant, const Matrix& a, const Matrix& b) {
  const auto& dims = plant.dims();
  require_shape(a, dims.n, dims.n, "a");
  require_shape(b, dims.n, dims.m2 + dims.p, "b");
  const Matrix& j0 = plant.comm().j0;
  const Matrix hamiltonian_part =
      -j0 * (a - b * plant.comm().j * b.transpose() * j0 / 2.0);
  RecoveredR out;
  out.r = symmetrize(hamiltonian_part);
  out.defect = antisymmetrize(hamiltonian_part).norm();
  return out;
}

PrReport check_physical_realizability(const PlantModel& plant,
                                      const ControllerRealization& ctrl) {
  const Matrix& j0 = plant.comm().j0;
  const Matrix& j2 = plant.comm().j2;
  Matrix b(ctrl.b1.rows(), ctrl.b1.cols() + ctrl.b2.cols());
  b << ctrl.b1, ctrl.b2;
  PrReport report;
  report.residual_commutation =
      (ctrl.a * j0 + j0 * ctrl.a.transpose() + b * plant.comm().j * b.transpose())
          .norm();
  report.residual_gain = (ctrl.b1 - j0 * ctrl.c.transpose() * j2).norm();
  report.scale = std::max(
      {1.0, ctrl.a.norm(), b.squaredNorm(), ctrl.b1.norm(), ctrl.c.norm()});
  report.pass = report.residual_commutation <= kPrTolerance * report.scale &&
                report.residual_gain <= kPrTolerance * report.scale;
  return report;
}

ClosedLoopSystem assemble_closed_loop(const PlantModel& plant,
                                      const ControllerRealization& ctrl) {
  const auto& dims = plant.dims();
  const int n = dims.n;
  require_shape(ctrl.a, n, n, "ctrl.a");
  require_shape(ctrl.b1, n, dims.m2, "ctrl.b1");
  require_shape(ctrl.b2, n, dims.p, "ctrl.b2");
  require_shape(ctrl.c, dims.m2, n, "ctrl.c");

  ClosedLoopSystem cls;
  cls.n_ = n;
  cls.a_.resize(2 * n, 2 * n);
  cls.a_ << plant.a(), plant.b2() * ctrl.c, ctrl.b2 * plant.c(), ctrl.a;
  cls.b_.resize(2 * n, dims.m1 + dims.m2);
  cls.b_ << plant.b1(), plant.b2(), ctrl.b2 * plant.d(), ctrl.b1;
  cls.c_.resize(dims.p0, 2 * n);
  cls.c_ << plant.c0(), plant.d0() * ctrl.c;

  // Affine route Gamma0 + Gamma1 gamma Gamma2 must reproduce the blocks.
  Matrix gamma = Matrix::Zero(n + dims.m2, n + dims.m2 + dims.p);
  gamma.topLeftCorner(n, n) = ctrl.a;
  gamma.block(0, n, n, dims.m2) = ctrl.b1;
  gamma.block(0, n + dims.m2, n, dims.p) = ctrl.b2;
  gamma.block(n, 0, dims.m2, n) = ctrl.c;
  const Matrix affine =
      plant.gamma0() + plant.gamma1() * gamma * plant.gamma2();
  Matrix direct(2 * n + dims.p0, 2 * n + dims.m1 + dims.m2);
  direct << cls.a_, cls.b_, cls.c_,
      Matrix::Zero(dims.p0, dims.m1 + dims.m2);
  const double scale = std::max(1.0, direct.norm());
  if ((affine - direct).norm() > 1e-12 * scale) {
    throw ConsistencyError(
        "assemble_closed_loop: affine and direct assemblies disagree");
  }

  const StabilityInfo info = stability_info(cls.a_);
  cls.stable_ = info.hurwitz;
  cls.abscissa_ = info.abscissa;
  if (cls.stable_) {
    cls.gramians_ = gramians(cls.triple());
  }
  return cls;
}

const GramianPair& ClosedLoopSystem::gramians() const {
  if (!gramians_) {
    throw UnstableError("closed loop is not Hurwitz (abscissa " +
                        std::to_string(abscissa_) + "); Gramians unavailable");
  }
  return *gramians_;
}

std::pair<ControllerParams, ControllerRealization> symplectic_transform(
    const PlantModel& plant, const ControllerParams& params, const Matrix& sigma) {
  const Matrix& j0 = plant.comm().j0;
  if (!is_symplectic(sigma, j0)) {
    throw NotSymplecticError("symplectic_transform: sigma J0 sigma^T != J0");
  }
  // sigma^-1 = -J0 sigma^T J0 for symplectic sigma.
  const Matrix sigma_inv = -j0 * sigma.transpose() * j0;
  ControllerParams out;
  out.r = symmetrize(sigma_inv.transpose() * params.r * sigma_inv);
  out.b = sigma * params.b;
  return {out, realize_controller(plant, out)};
}

Matrix project_gamma(const Matrix& m, int r, int m_cols, int p_rows) {
  if (m.rows() != r + p_rows || m.cols() != r + m_cols) {
    throw ShapeError("project_gamma: partition does not match matrix shape");
  }
  Matrix out = m;
  out.bottomRightCorner(p_rows, m_cols).setZero();
  return out;
}

}  // namespace cqlqg
