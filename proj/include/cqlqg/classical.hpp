#pragma once

#include "cqlqg/model.hpp"

namespace cqlqg {

// Classical LQG baseline for the equivalent classical plant: the two
// independent AREs, the state-feedback and observation gains, and the cost
// of the unconstrained optimum.
struct ClassicalController {
  Matrix q1_hat;  // stabilizing solution of the control ARE
  Matrix p1_hat;  // stabilizing solution of the filter ARE
  Matrix c_hat;   // state feedback, m2 x n
  Matrix b2_hat;  // observation gain, n x p
  Matrix b1_hat;  // feedforward gain of the measured noise channel (= B2)
  Matrix a_hat;   // A - b2_hat C + B2 c_hat
  double cost = 0.0;
  double control_residual = 0.0;
  double filter_residual = 0.0;
};

// Stabilizing solution X of
//   A^T X + X A + state_weight = (X B + cross) control_weight^-1 (X B + cross)^T
// by Newton-Kleinman iteration from a Bass eigenvalue-shift start.
// The closed loop A - B control_weight^-1 (B^T X + cross^T) is Hurwitz.
Matrix solve_care(const Matrix& a, const Matrix& b, const Matrix& state_weight,
                  const Matrix& cross, const Matrix& control_weight);

ClassicalController classical_controller(const PlantModel& plant);

struct BaselineGap {
  double classical_cost = 0.0;
  double quantum_cost = 0.0;
  double gap = 0.0;       // quantum - classical; expected >= -1e-8
  bool anomaly = false;   // gap below the expected floor
};

BaselineGap compare(const ClassicalController& classical, double quantum_cost);

}  // namespace cqlqg
