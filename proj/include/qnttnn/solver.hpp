#ifndef QNTTNN_SOLVER_HPP
#define QNTTNN_SOLVER_HPP

#include <array>
#include <functional>
#include <limits>
#include <vector>

#include "qnttnn/tensor.hpp"
#include "qnttnn/transform.hpp"

namespace qnttnn {

struct SolverConfig {
  double alpha = 10.0;
  double beta = 10.0;
  std::array<double, 4> rho = {1e-3, 1e-3, 1e-3, 1e-3};
  Index rank = 5;
  double eps = 1e-4;
  int max_iters = 200;
  int newton_iters = 5;
  double newton_tol = 1e-10;
  Activation activation{};

  /// Record structure deviation, feasibility and orthogonality at every iteration.
  bool diagnostics = false;
  /// Throw SolverDivergence when a monitored invariant fails (implies diagnostics).
  bool assert_invariants = false;

  /// Throws InvalidArgument when a field is out of range for tensors of depth n3.
  void validate(Index n3) const;
};

/// One row of the convergence log.
struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double rel_change = 0.0;
  /// f(k) + slack - f(k+1) - rho |Theta(k+1) - Theta(k)|^2 (negative means violated).
  double decrease_margin = 0.0;
  /// Slack allowed by the decrease monitor, 1e-8 (1 + |f(k)|).
  double decrease_slack = 0.0;
  double elapsed_s = 0.0;

  // Filled only in diagnostics mode.
  double structure_dev = std::numeric_limits<double>::quiet_NaN();
  double feasibility_residual = std::numeric_limits<double>::quiet_NaN();
  double orthogonality_residual = std::numeric_limits<double>::quiet_NaN();
};

/// Block tuple (X, Y, Z, T) in the real embedding.
struct SolverState {
  RealTensor3 x;  // (4n1, 4n2, n3)
  RealTensor3 y;  // (4n1, 4n2, r)
  RealTensor3 z;  // (4n1, 4n2, r)
  TransformMatrix t;
  int iter = 0;
  std::vector<IterationRecord> history;
};

/// (1/4) sum_i |Y_i|_* + (alpha/8)|X - Z x3 T^T|^2 + (beta/8)|Y - phi(Z)|^2.
/// Returns +infinity when P_Omega(X) departs from P_Omega(M^R) or T T^T departs
/// from I by more than 1e-8.
double objective(const SolverState& state, const RealTensor3& m_real, const Mask& mask,
                 const SolverConfig& cfg);

/// Smooth part of the objective with a known nuclear-norm term.
double objective_from_nuclear(const SolverState& state, double y_nuclear_sum,
                              const SolverConfig& cfg);

/// Observed entries of M^R on Omega; (alpha W + rho1 X)/(alpha + rho1) elsewhere,
/// W = Z x3 T^T.
RealTensor3 update_x(const SolverState& state, const RealTensor3& m_real, const Mask& mask,
                     const SolverConfig& cfg);

struct YUpdate {
  RealTensor3 y;
  double nuclear_sum = 0.0;  // sum_i |Y_i|_* of the new iterate
};

/// Slice-wise SVT of H_i = (beta phi(Z)_i + rho2 Y_i)/(beta + rho2).
YUpdate update_y(const SolverState& state, const SolverConfig& cfg);

/// Minimizes (c/8)(z - g)^2 + (beta/8)(phi(z) - y)^2 from z0 by damped
/// Gauss-Newton. Steps are halved until the objective does not increase beyond
/// a 1e-12 relative rounding allowance.
double newton_scalar(double z0, double g, double y, double c, double beta, const Activation& phi,
                     int iters, double tol);

/// Objective of the scalar Z problem.
double z_scalar_objective(double z, double g, double y, double c, double beta,
                          const Activation& phi);

/// Entry-wise Z update around G = (alpha (X x3 T) + rho3 Z)/(alpha + rho3).
RealTensor3 update_z(const SolverState& state, const SolverConfig& cfg);

/// Procrustes update of the transform.
TransformMatrix update_t(const SolverState& state, const SolverConfig& cfg);

/// Tube-wise linear interpolation of the observed entries along mode 3.
/// Tube ends extrapolate as constants; empty tubes take the plane's observed mean.
QTensor3 interpolate_missing(const QTensor3& m, const Mask& mask);

/// Throws DataError when an observed entry is not finite.
SolverState init_state(const QTensor3& m, const Mask& mask, const SolverConfig& cfg);

struct PamResult {
  QTensor3 x;
  std::vector<IterationRecord> history;
  double structure_dev = 0.0;  // deviation of the final X^R from block structure
  int iterations = 0;
  bool converged = false;
};

using IterationCallback = std::function<void(const SolverState&, const IterationRecord&)>;

/// Proximal alternating minimization: X, Y, Z, T updates until the relative
/// change of X^R drops below eps or max_iters is reached.
PamResult run_pam(const QTensor3& m, const Mask& mask, const SolverConfig& cfg,
                  const IterationCallback& on_iteration = {});

}  // namespace qnttnn

#endif  // QNTTNN_SOLVER_HPP
