#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cqlqg/classical.hpp"
#include "cqlqg/derivatives.hpp"

namespace cqlqg {

enum class StepKind { kUpdateB2, kUpdateB1, kNewtonR };
enum class InitMode { kClassicalSeed, kRandom, kUser };

struct SolveConfig {
  std::vector<StepKind> order = {StepKind::kUpdateB2, StepKind::kUpdateB1,
                                 StepKind::kNewtonR};
  int max_iterations = 200;
  double tol_psi = 1e-7;
  double tol_grad = 1e-7;
  double backtrack_factor = 0.5;
  int max_backtracks = 30;
  double hessian_floor = 1e-8;      // spectral floor of the regularized Newton step
  InitMode init_mode = InitMode::kClassicalSeed;
  std::optional<ControllerParams> initial;  // used by InitMode::kUser
  std::uint64_t seed = 0;
  int max_restarts = 5;             // fresh seeded starts when the run bogs down
  int max_init_draws = 300;
  // Whether Phi and the Gramians are refreshed between the two gain updates
  // inside one outer iteration (default) or frozen per outer iteration.
  bool refresh_between_gain_updates = true;

  void validate() const;
};

enum class TerminationStatus {
  kConverged,
  kMaxIterations,
  kStalled,
  kLostStabilityUnrecoverable,
};

std::string to_string(TerminationStatus status);
std::string to_string(StepKind kind);

struct IterationRecord {
  int iteration = 0;
  double cost = 0.0;
  double psi_norm = 0.0;
  double grad_b_norm = 0.0;
  double abscissa = 0.0;
  double delta_radius = 0.0;  // r(Q22^-1 Phi); NaN when not applicable
  double damping = 1.0;       // smallest accepted damping factor this iteration
};

struct CriticalityCertificate {
  double psi_norm = 0.0;
  double grad_b_norm = 0.0;
  double h22_phi_residual = 0.0;      // ||H22 + Phi J0|| (Theorem 1 first form)
  double hessian_min_eigenvalue = 0.0;
  double fd_r_error = 0.0;            // FD cross-check of dE/dR (absolute, normalized)
  double fd_b_error = 0.0;            // FD cross-check of dE/db
  bool first_order_pass = false;
  bool fd_pass = false;
};

struct SynthesisReport {
  std::vector<IterationRecord> trace;
  ControllerParams params;
  ControllerRealization realization;
  TerminationStatus status = TerminationStatus::kStalled;
  double cost = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  CriticalityCertificate certificate;
};

// Everything the gain/Newton updates need at the current iterate, in one
// immutable snapshot: realization, closed loop, Gramian blocks, first-order
// data and the separated operators with their forcing terms.
class IterateState {
 public:
  // Throws UnstableError when the loop is not Hurwitz.
  IterateState(const PlantModel& plant, ControllerParams params);

  const ControllerParams& params() const { return params_; }
  const ControllerRealization& realization() const { return realization_; }
  const ClosedLoopSystem& closed_loop() const { return cls_; }
  const FirstOrderData& first_order() const { return first_; }
  const SeparatedOperators& operators() const { return ops_; }

  double cost() const { return first_.cost; }
  double psi_norm() const { return psi_norm_; }
  double grad_b_norm() const { return grad_b_norm_; }

  const Matrix& forcing_b1() const { return forcing_b1_; }  // Eq. for b1
  const Matrix& forcing_b2() const { return forcing_b2_; }  // Eq. for b2

 private:
  ControllerParams params_;
  ControllerRealization realization_;
  ClosedLoopSystem cls_;
  FirstOrderData first_;
  SeparatedOperators ops_;
  Matrix forcing_b1_, forcing_b2_;
  double psi_norm_ = 0.0, grad_b_norm_ = 0.0;
};

// Frozen-coefficient gain assignments. Each returns the exact solution of
// its linear gain equation at the current Gramians; SingularOperatorError
// propagates when the operator fails the inversion gate.
Matrix update_b1(const PlantModel& plant, const IterateState& state);
Matrix update_b2(const PlantModel& plant, const IterateState& state);

// Regularized Newton step on R: solves (Hess lifted to >= floor) dR = -grad
// in vech coordinates; falls back to the steepest-descent direction when the
// Hessian assembly fails.
Matrix newton_step_r(const PlantModel& plant, const IterateState& state,
                     double floor);

struct RecoveryResult {
  bool accepted = false;
  double damping = 0.0;
  std::optional<IterateState> state;
};

// Backtracks a candidate toward the current iterate and accepts the first
// damped step that keeps the loop Hurwitz and strictly decreases the cost
// (near the tolerances, a residual-decreasing step within a tiny cost slack
// is also accepted, since cost comparisons drown in solver roundoff there).
RecoveryResult stability_recovery(const PlantModel& plant, const IterateState& current,
                                  const ControllerParams& candidate,
                                  const SolveConfig& config);

// Newton-like synthesis: the configured alternation of the two gain
// assignments and the Newton step on R, a joint trust-region polish, and
// deterministic restarts. Throws InitializationError when no stabilizing
// start exists within the draw budget.
SynthesisReport synthesize(const PlantModel& plant, const SolveConfig& config);

// Stand-alone criticality certificate at a given parameter point.
CriticalityCertificate check_criticality(const PlantModel& plant,
                                         const ControllerParams& params,
                                         double tol_psi = 1e-7,
                                         double tol_grad = 1e-7);

// Stabilizing starting point used by synthesize; exposed for tests/tools.
std::optional<ControllerParams> initialize_controller(const PlantModel& plant,
                                                      const SolveConfig& config,
                                                      std::uint64_t draw_seed);

}  // namespace cqlqg
