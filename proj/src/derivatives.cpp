#include "cqlqg/derivatives.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace cqlqg {

namespace {

void require_stable(const ClosedLoopSystem& cls, const char* who) {
  if (!cls.stable()) {
    throw UnstableError(std::string(who) + ": closed loop is not Hurwitz");
  }
}

}  // namespace

Matrix d_gamma_e(const PlantModel& plant, const ClosedLoopSystem& cls) {
  require_stable(cls, "d_gamma_e");
  const auto& dims = plant.dims();
  const int n2 = 2 * cls.n();
  const GramianPair& g = cls.gramians();
  Matrix out = Matrix::Zero(n2 + dims.p0, n2 + dims.m1 + dims.m2);
  out.topLeftCorner(n2, n2) = 2.0 * g.h;
  out.topRightCorner(n2, dims.m1 + dims.m2) = 2.0 * g.q * cls.b();
  out.bottomLeftCorner(dims.p0, n2) = 2.0 * cls.c() * g.p;
  return out;
}

Matrix d_small_gamma_e(const PlantModel& plant, const ClosedLoopSystem& cls,
                       bool check_chain_rule) {
  require_stable(cls, "d_small_gamma_e");
  const auto& dims = plant.dims();
  const int n = cls.n();
  const GramianPair& g = cls.gramians();

  const Matrix q2dot = g.q.bottomRows(n);   // Q_{2.}
  const Matrix pdot2 = g.p.rightCols(n);    // P_{.2}
  Matrix out = Matrix::Zero(n + dims.m2, n + dims.m2 + dims.p);
  out.topLeftCorner(n, n) = 2.0 * cls.h_block(2, 2);
  out.topRightCorner(n, dims.m2 + dims.p) =
      2.0 * (cls.h_block(2, 1) * plant.c_bar().transpose() +
             q2dot * cls.b() * plant.d_bar().transpose());
  out.bottomLeftCorner(dims.m2, n) =
      2.0 * (plant.b2().transpose() * cls.h_block(1, 2) +
             plant.d0().transpose() * cls.c() * pdot2);

  if (check_chain_rule) {
    const Matrix chained = project_gamma(
        plant.gamma1().transpose() * d_gamma_e(plant, cls) *
            plant.gamma2().transpose(),
        n, dims.m2 + dims.p, dims.m2);
    const double scale = std::max(1.0, out.norm());
    if ((chained - out).norm() > 1e-12 * scale) {
      throw ConsistencyError(
          "d_small_gamma_e: block formula and chain rule disagree");
    }
  }
  return out;
}

FirstOrderData first_order_data(const PlantModel& plant, const ClosedLoopSystem& cls,
                                const Matrix& b) {
  require_stable(cls, "first_order_data");
  const auto& dims = plant.dims();
  const int n = cls.n();
  const Matrix& j0 = plant.comm().j0;

  FirstOrderData data;
  data.d_gamma_closed = d_gamma_e(plant, cls);
  data.d_gamma_ctrl = d_small_gamma_e(plant, cls);
  const Matrix h22 = cls.h_block(2, 2);
  const Matrix h22j0 = h22 * j0;
  data.phi = antisymmetrize(h22j0);
  data.psi = -symmetrize(h22j0);
  data.d_r = -2.0 * j0 * data.psi * j0;

  // dE/db = 2 (M(b) + H21 Cbar^T + Q21 B Dbar^T
  //            + J0 (H12^T B2 + P21 C0^T D0) J2 Ibar^T).
  const Matrix dbdbt = plant.d_bar() * plant.d_bar().transpose();
  const Matrix emb = plant.i_bar() * plant.comm().j2 * plant.d0().transpose() *
                     plant.d0() * plant.comm().j2 * plant.i_bar().transpose();
  const Matrix q22 = cls.q_block(2, 2);
  const Matrix p22 = cls.p_block(2, 2);
  const Matrix m_of_b = data.phi * b * plant.comm().j + q22 * b * dbdbt +
                        j0 * p22 * j0 * b * emb;
  const Matrix forcing =
      cls.h_block(2, 1) * plant.c_bar().transpose() +
      cls.q_block(2, 1) * plant.b_full() * plant.d_bar().transpose() +
      j0 *
          (cls.h_block(1, 2).transpose() * plant.b2() +
           cls.p_block(2, 1) * plant.c0().transpose() * plant.d0()) *
          plant.comm().j2 * plant.i_bar().transpose();
  data.d_b = 2.0 * (m_of_b + forcing);

  const StateSpaceTriple triple = cls.triple();
  data.cost = lqg_cost_forms(triple, cls.gramians()).trace_cpc;
  (void)dims;
  return data;
}

FirstOrderData grad_r_b(const PlantModel& plant, const ControllerParams& params) {
  const ControllerRealization ctrl = realize_controller(plant, params);
  const ClosedLoopSystem cls = assemble_closed_loop(plant, ctrl);
  return first_order_data(plant, cls, params.b);
}

SeparatedOperators build_m_operators(const PlantModel& plant, const Matrix& phi,
                                     const Matrix& q22, const Matrix& p22) {
  const auto& dims = plant.dims();
  const Matrix& j0 = plant.comm().j0;
  const Matrix& j2 = plant.comm().j2;
  const Matrix identity_m2 = Matrix::Identity(dims.m2, dims.m2);
  const Matrix d0td0 = plant.d0().transpose() * plant.d0();
  const Matrix j2d0j2 = j2 * d0td0 * j2;
  const Matrix ddt = plant.d() * plant.d().transpose();
  const Matrix dj1dt = plant.d() * plant.comm().j1 * plant.d().transpose();
  const Matrix j0p22j0 = j0 * p22 * j0;
  const Matrix dbdbt = plant.d_bar() * plant.d_bar().transpose();
  const Matrix emb = plant.i_bar() * j2d0j2 * plant.i_bar().transpose();

  // Parity sanity: the Gramian blocks must be numerically symmetric.
  const double q_defect = (q22 - q22.transpose()).norm();
  const double p_defect = (p22 - p22.transpose()).norm();
  if (q_defect > kPrTolerance * std::max(1.0, q22.norm()) ||
      p_defect > kPrTolerance * std::max(1.0, p22.norm())) {
    throw ConsistencyError(
        "build_m_operators: Gramian blocks asymmetric beyond tolerance");
  }

  SeparatedOperators ops{
      GradeROperator({{phi, plant.comm().j}, {q22, dbdbt}, {j0p22j0, emb}}),
      GradeROperator({{phi, j2}, {q22, identity_m2}, {j0p22j0, j2d0j2}}),
      GradeROperator({{phi, dj1dt}, {q22, ddt}}),
      GradeROperator::single(phi, j2),
      GradeROperator({{q22, identity_m2}, {j0p22j0, j2d0j2}}),
      GradeROperator::single(phi, dj1dt),
      GradeROperator::single(q22, ddt)};
  ops.m_full.check_self_adjoint();
  ops.m1.check_self_adjoint();
  ops.m2.check_self_adjoint();
  return ops;
}

SeparatedOperators build_m_operators(const PlantModel& plant,
                                     const ClosedLoopSystem& cls, const Matrix& phi) {
  return build_m_operators(plant, phi, cls.q_block(2, 2), cls.p_block(2, 2));
}

DominationResult domination_radius(const Matrix& q22, const Matrix& phi) {
  DominationResult result;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(q22));
  if (es.info() != Eigen::Success) {
    throw EigenvalueError("domination_radius: eigenvalue solver failed");
  }
  if (es.eigenvalues().minCoeff() <= 0.0) {
    result.applicable = false;
    return result;
  }
  result.applicable = true;
  const Matrix delta = q22.ldlt().solve(phi);
  Eigen::EigenSolver<Matrix> ds(delta, false);
  if (ds.info() != Eigen::Success) {
    throw EigenvalueError("domination_radius: eigenvalue solver failed");
  }
  result.radius = ds.eigenvalues().cwiseAbs().maxCoeff();
  return result;
}

Matrix hessian_r_apply(const PlantModel& plant, const ClosedLoopSystem& cls,
                       const Matrix& m) {
  require_stable(cls, "hessian_r_apply");
  const int n = cls.n();
  if (m.rows() != n || m.cols() != n) {
    throw ShapeError("hessian_r_apply: direction must be n x n");
  }
  const Matrix& j0 = plant.comm().j0;
  const GramianPair& g = cls.gramians();
  Matrix x = Matrix::Zero(2 * n, 2 * n);
  x.bottomRightCorner(n, n) = j0 * symmetrize(m);
  const Matrix y =
      g.q * lyap_solve(cls.a(), symmetrize(x * g.p)) +
      lyap_solve(cls.a().transpose(), symmetrize(g.q * x)) * g.p;
  return -4.0 * symmetrize(j0 * y.bottomRightCorner(n, n));
}

HessianMatrixResult hessian_r_matrix(const PlantModel& plant,
                                     const ClosedLoopSystem& cls) {
  require_stable(cls, "hessian_r_matrix");
  const int n = cls.n();
  const int n2 = 2 * n;
  const GramianPair& g = cls.gramians();
  const Matrix identity = Matrix::Identity(n2, n2);

  // Omega = -(I (x) Q) (I (x) A + A (x) I)^-1 Sigma (P (x) I).
  const Matrix sigma =
      (Matrix::Identity(n2 * n2, n2 * n2) + commutation_matrix(n2, n2)) / 2.0;
  const Matrix lyap_op = kron(identity, cls.a()) + kron(cls.a(), identity);
  Eigen::PartialPivLU<Matrix> lu(lyap_op);
  if (lu.rcond() < kMinRcond) {
    throw SingularLyapunovError("hessian_r_matrix: Lyapunov operator singular");
  }
  const Matrix omega =
      -kron(identity, g.q) * lu.solve(sigma * kron(g.p, identity));

  // Ups = ([0; I] (x) [0; J0]) Lambda.
  const Matrix lambda = duplication_matrix(n);
  Matrix lower_i = Matrix::Zero(n2, n);
  lower_i.bottomRows(n) = Matrix::Identity(n, n);
  Matrix lower_j = Matrix::Zero(n2, n);
  lower_j.bottomRows(n) = plant.comm().j0;
  const Matrix ups = kron(lower_i, lower_j) * lambda;

  HessianMatrixResult result;
  result.matrix = 4.0 * ups.transpose() * (omega + omega.transpose()) * ups;
  result.vech_weights = (lambda.transpose() * lambda).diagonal();
  result.symmetry_defect =
      (result.matrix - result.matrix.transpose()).norm() /
      std::max(1.0, result.matrix.norm());

  // Cross-validate the vech action against the operator route; the matrix
  // acts as vech_weights .* vech(hessian_r_apply(.)).
  double worst = 0.0;
  std::uint64_t lcg = 0x9e3779b97f4a7c15ULL;
  auto next_unit = [&lcg]() {
    lcg = lcg * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(lcg >> 11) / 9007199254740992.0 - 0.5;
  };
  for (int trial = 0; trial < 3; ++trial) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = next_unit();
    }
    m = symmetrize(m);
    const Vector lhs = result.matrix * vech(m);
    const Vector rhs =
        result.vech_weights.cwiseProduct(vech(hessian_r_apply(plant, cls, m)));
    worst = std::max(worst,
                     (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
  }
  result.reconciliation_error = worst;

  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(result.matrix));
  if (es.info() != Eigen::Success) {
    throw EigenvalueError("hessian_r_matrix: eigenvalue solver failed");
  }
  result.min_eigenvalue = es.eigenvalues().minCoeff();
  return result;
}

GammaHessian::GammaHessian(const PlantModel& plant, const ClosedLoopSystem& cls)
    : state_dim_(2 * cls.n()),
      noise_dim_(plant.dims().m1 + plant.dims().m2),
      out_dim_(plant.dims().p0),
      p_(cls.gramians().p),
      q_(cls.gramians().q),
      b_(cls.b()),
      c_(cls.c()),
      forward_(cls.a()),
      adjoint_(cls.a().transpose()) {}

Matrix GammaHessian::apply(const Matrix& x) const {
  const Eigen::Index nn = state_dim_;
  if (x.rows() != nn + out_dim_ || x.cols() != nn + noise_dim_) {
    throw ShapeError("GammaHessian::apply: direction must be Gamma-shaped");
  }
  // First variation of 2[I;0] Q [P B] sandwich: Lyapunov of the adjoint loop.
  Matrix qc(nn, nn + out_dim_);
  qc << q_, c_.transpose();
  Matrix right_embed = Matrix::Zero(nn + noise_dim_, nn);
  right_embed.topRows(nn) = Matrix::Identity(nn, nn);
  const Matrix l1 = adjoint_.solve(symmetrize(qc * x * right_embed));
  Matrix pb(nn, nn + noise_dim_);
  pb << p_, b_;
  Matrix t1 = Matrix::Zero(nn + out_dim_, nn + noise_dim_);
  t1.topRows(nn) = 4.0 * l1 * pb;

  // Symmetric partner through the forward loop.
  Matrix left_pick = Matrix::Zero(nn, nn + out_dim_);
  left_pick.leftCols(nn) = Matrix::Identity(nn, nn);
  Matrix pbt(nn + noise_dim_, nn);
  pbt << p_, b_.transpose();
  const Matrix l2 = forward_.solve(symmetrize(left_pick * x * pbt));
  Matrix qcc(nn + out_dim_, nn);
  qcc << q_, c_;
  Matrix t2 = Matrix::Zero(nn + out_dim_, nn + noise_dim_);
  t2.leftCols(nn) = 4.0 * qcc * l2;

  // Direct B/C curvature term.
  Matrix t3 = Matrix::Zero(nn + out_dim_, nn + noise_dim_);
  t3.topRightCorner(nn, noise_dim_) =
      2.0 * q_ * x.topRightCorner(nn, noise_dim_);
  t3.bottomLeftCorner(out_dim_, nn) =
      2.0 * x.bottomLeftCorner(out_dim_, nn) * p_;
  t3.bottomRightCorner(out_dim_, noise_dim_) =
      4.0 * x.bottomRightCorner(out_dim_, noise_dim_);
  return t1 + t2 + t3;
}

Matrix d2_gamma_e_apply(const PlantModel& plant, const ClosedLoopSystem& cls,
                        const Matrix& x) {
  require_stable(cls, "d2_gamma_e_apply");
  return GammaHessian(plant, cls).apply(x);
}

Matrix gamma_dir_from_r(const PlantModel& plant, const Matrix& m) {
  const auto& dims = plant.dims();
  Matrix dgamma = Matrix::Zero(dims.n + dims.m2, dims.n + dims.m2 + dims.p);
  dgamma.topLeftCorner(dims.n, dims.n) = plant.comm().j0 * m;
  return plant.gamma1() * dgamma * plant.gamma2();
}

Matrix gamma_dir_from_b(const PlantModel& plant, const Matrix& b,
                        const Matrix& delta) {
  const auto& dims = plant.dims();
  const Matrix& j = plant.comm().j;
  const Matrix& j0 = plant.comm().j0;
  Matrix dgamma = Matrix::Zero(dims.n + dims.m2, dims.n + dims.m2 + dims.p);
  dgamma.topLeftCorner(dims.n, dims.n) =
      (delta * j * b.transpose() + b * j * delta.transpose()) * j0 / 2.0;
  dgamma.topRightCorner(dims.n, dims.m2 + dims.p) = delta;
  dgamma.bottomLeftCorner(dims.m2, dims.n) =
      plant.comm().j2 * plant.i_bar().transpose() * delta.transpose() * j0;
  return plant.gamma1() * dgamma * plant.gamma2();
}

Matrix r_dir_adjoint(const PlantModel& plant, const Matrix& y) {
  const int n = plant.dims().n;
  const Matrix w =
      plant.gamma1().transpose() * y * plant.gamma2().transpose();
  return -symmetrize(plant.comm().j0 * w.topLeftCorner(n, n));
}

Matrix b_dir_adjoint(const PlantModel& plant, const Matrix& b, const Matrix& y) {
  const auto& dims = plant.dims();
  const int n = dims.n;
  const Matrix& j0 = plant.comm().j0;
  const Matrix w =
      plant.gamma1().transpose() * y * plant.gamma2().transpose();
  const Matrix w11 = w.topLeftCorner(n, n);
  const Matrix w12 = w.topRightCorner(n, dims.m2 + dims.p);
  const Matrix w21 = w.bottomLeftCorner(dims.m2, n);
  return (j0 * w11.transpose() + w11 * j0) * b * plant.comm().j / 2.0 + w12 +
         j0 * w21.transpose() * plant.comm().j2 * plant.i_bar().transpose();
}

Matrix hessian_b_apply(const PlantModel& plant, const ClosedLoopSystem& cls,
                       const Matrix& b, const Matrix& h22, const Matrix& delta) {
  require_stable(cls, "hessian_b_apply");
  const Matrix& j0 = plant.comm().j0;
  const Matrix x = gamma_dir_from_b(plant, b, delta);
  const Matrix y = d2_gamma_e_apply(plant, cls, x);
  // Curvature of b -> a adds [[2 Phi, J]] with 2 Phi = J0 H22^T + H22 J0.
  const Matrix curvature =
      (j0 * h22.transpose() + h22 * j0) * delta * plant.comm().j;
  return b_dir_adjoint(plant, b, y) + curvature;
}

Matrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x0,
                   double h, bool symmetric_mode) {
  if (h <= 0.0) {
    throw Error("fd_gradient: step size must be positive");
  }
  Matrix grad = Matrix::Zero(x0.rows(), x0.cols());
  if (!symmetric_mode) {
    for (Eigen::Index i = 0; i < x0.rows(); ++i) {
      for (Eigen::Index j = 0; j < x0.cols(); ++j) {
        Matrix xp = x0, xm = x0;
        xp(i, j) += h;
        xm(i, j) -= h;
        grad(i, j) = (f(xp) - f(xm)) / (2.0 * h);
      }
    }
    return grad;
  }
  if (x0.rows() != x0.cols()) {
    throw ShapeError("fd_gradient: symmetric mode needs a square argument");
  }
  for (Eigen::Index i = 0; i < x0.rows(); ++i) {
    for (Eigen::Index j = i; j < x0.cols(); ++j) {
      Matrix dir = Matrix::Zero(x0.rows(), x0.cols());
      dir(i, j) = 1.0;
      dir(j, i) = 1.0;  // same entry twice on the diagonal is intentional: E_ii
      if (i == j) dir(i, i) = 1.0;
      const double d = (f(x0 + h * dir) - f(x0 - h * dir)) / (2.0 * h);
      if (i == j) {
        grad(i, i) = d;
      } else {
        grad(i, j) = d / 2.0;
        grad(j, i) = d / 2.0;
      }
    }
  }
  return grad;
}

double fd_directional(const std::function<double(const Matrix&)>& f, const Matrix& x0,
                      const Matrix& dir, double h) {
  return (f(x0 + h * dir) - f(x0 - h * dir)) / (2.0 * h);
}

double fd_second_directional(const std::function<double(const Matrix&)>& f,
                             const Matrix& x0, const Matrix& dir, double h) {
  return (f(x0 + h * dir) - 2.0 * f(x0) + f(x0 - h * dir)) / (h * h);
}

}  // namespace cqlqg
