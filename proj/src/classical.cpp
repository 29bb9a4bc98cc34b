#include "cqlqg/classical.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace cqlqg {

namespace {

double care_residual(const Matrix& a, const Matrix& b, const Matrix& qw,
                     const Matrix& cross, const Matrix& rw, const Matrix& x) {
  const Matrix gain_term = x * b + cross;
  const Matrix res = a.transpose() * x + x * a + qw -
                     gain_term * rw.ldlt().solve(gain_term.transpose());
  return res.norm();
}

}  // namespace

Matrix solve_care(const Matrix& a, const Matrix& b, const Matrix& state_weight,
                  const Matrix& cross, const Matrix& control_weight) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.cols();
  if (a.cols() != n || b.rows() != n || state_weight.rows() != n ||
      state_weight.cols() != n || cross.rows() != n || cross.cols() != m ||
      control_weight.rows() != m || control_weight.cols() != m) {
    throw ShapeError("solve_care: inconsistent shapes");
  }
  Eigen::LDLT<Matrix> rw(symmetrize(control_weight));
  if (rw.info() != Eigen::Success || !rw.isPositive()) {
    throw ValidationError("solve_care: control weight must be positive definite");
  }

  // Stabilizing initial gain: zero if A is already Hurwitz, otherwise the
  // Bass shift construction K0 = B^T W^-1 with
  // (A + beta I) W + W (A + beta I)^T = 2 B B^T reversed in sign.
  Matrix gain = Matrix::Zero(m, n);
  if (!is_hurwitz(a)) {
    const double beta = a.norm() + 1.0;
    const Matrix shifted = -(a + beta * Matrix::Identity(n, n));
    Matrix w;
    try {
      w = lyap_solve(shifted, 2.0 * b * b.transpose());
    } catch (const Error&) {
      throw NoStabilizingSolutionError(
          "solve_care: Bass initialization Lyapunov solve failed");
    }
    Eigen::PartialPivLU<Matrix> lu(w);
    if (lu.rcond() < kMinRcond) {
      throw NoStabilizingSolutionError(
          "solve_care: Bass Gramian singular; pair may be uncontrollable");
    }
    gain = b.transpose() * lu.inverse();
    if (!is_hurwitz(a - b * gain)) {
      throw NoStabilizingSolutionError(
          "solve_care: eigenvalue-shift initialization failed to stabilize");
    }
  }

  // Newton-Kleinman: each step solves one Lyapunov equation at the current
  // stabilizing gain.
  Matrix x;
  bool have_x = false;
  for (int iter = 0; iter < 100; ++iter) {
    const Matrix a_cl = a - b * gain;
    if (!is_hurwitz(a_cl)) {
      throw NoStabilizingSolutionError(
          "solve_care: iteration lost the stabilizing property");
    }
    const Matrix stage_cost =
        state_weight + gain.transpose() * control_weight * gain - cross * gain -
        gain.transpose() * cross.transpose();
    const Matrix x_next =
        symmetrize(lyap_solve(a_cl.transpose(), symmetrize(stage_cost)));
    gain = rw.solve(b.transpose() * x_next + cross.transpose());
    if (have_x &&
        (x_next - x).norm() <= 1e-14 * std::max(1.0, x_next.norm())) {
      x = x_next;
      have_x = true;
      break;
    }
    x = x_next;
    have_x = true;
  }
  const double residual = care_residual(a, b, state_weight, cross, control_weight, x);
  const double scale = std::max({1.0, x.norm(), state_weight.norm()});
  if (residual > kSolveTolerance * scale * 10.0) {
    throw NoStabilizingSolutionError(
        "solve_care: Newton-Kleinman did not reach the residual gate (residual " +
        std::to_string(residual) + ")");
  }
  if (!is_hurwitz(a - b * rw.solve(b.transpose() * x + cross.transpose()))) {
    throw NoStabilizingSolutionError("solve_care: solution is not stabilizing");
  }
  return x;
}

ClassicalController classical_controller(const PlantModel& plant) {
  ClassicalController out;
  out.q1_hat = solve_care(plant.a(), plant.b2(),
                          plant.c0().transpose() * plant.c0(),
                          plant.c0().transpose() * plant.d0(),
                          plant.d0().transpose() * plant.d0());
  out.p1_hat = solve_care(plant.a().transpose(), plant.c().transpose(),
                          plant.b1() * plant.b1().transpose(),
                          plant.b1() * plant.d().transpose(),
                          plant.d() * plant.d().transpose());
  const Matrix d0td0 = plant.d0().transpose() * plant.d0();
  const Matrix ddt = plant.d() * plant.d().transpose();
  out.c_hat = -d0td0.ldlt().solve(plant.b2().transpose() * out.q1_hat +
                                  plant.d0().transpose() * plant.c0());
  out.b2_hat = ddt.ldlt()
                   .solve((out.p1_hat * plant.c().transpose() +
                           plant.b1() * plant.d().transpose())
                              .transpose())
                   .transpose();
  out.a_hat = plant.a() - out.b2_hat * plant.c() + plant.b2() * out.c_hat;

  // In the equivalent classical plant the controller noise is a measured
  // plant output; its optimal feedforward gain is exactly B2, which makes
  // the baseline the unconstrained optimum of the same cost.
  out.b1_hat = plant.b2();

  out.control_residual =
      care_residual(plant.a(), plant.b2(), plant.c0().transpose() * plant.c0(),
                    plant.c0().transpose() * plant.d0(), d0td0, out.q1_hat);
  out.filter_residual = care_residual(
      plant.a().transpose(), plant.c().transpose(),
      plant.b1() * plant.b1().transpose(), plant.b1() * plant.d().transpose(),
      ddt, out.p1_hat);

  const ControllerRealization baseline{out.a_hat, out.b1_hat, out.b2_hat,
                                       out.c_hat};
  const ClosedLoopSystem loop = assemble_closed_loop(plant, baseline);
  if (!loop.stable()) {
    throw NoStabilizingSolutionError(
        "classical_controller: baseline closed loop is not Hurwitz");
  }
  out.cost = lqg_cost(loop.triple());
  return out;
}

BaselineGap compare(const ClassicalController& classical, double quantum_cost) {
  BaselineGap gap;
  gap.classical_cost = classical.cost;
  gap.quantum_cost = quantum_cost;
  gap.gap = quantum_cost - classical.cost;
  gap.anomaly = gap.gap < -1e-8;
  return gap;
}

}  // namespace cqlqg
