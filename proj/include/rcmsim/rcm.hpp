#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rcmsim/kinematics.hpp"

namespace rcmsim {

// Software-enforced remote center of motion: the instrument shaft must pass
// through a fixed fulcrum. The pivot location on the shaft is not fixed a
// priori; it is parameterized by lambda in (0,1) and solved together with
// the joint angles (extended-Jacobian formulation).

inline constexpr double kLambdaMargin = 0.01;
inline constexpr double kNullspaceStepCap = 1.5e-3;  // [rad] per iteration
// Task directions whose singular value falls below this fraction of the
// largest are dropped from the task step. Near wrist-straight postures the
// extended Jacobian carries a near-degenerate roll/yaw combination (sigma
// of order mu); chasing micrometre error components along it demands
// radian-scale joint swings and ratchets the wrist into its limit, so those
// components are tolerated as residual instead.
inline constexpr double kSigmaTruncation = 1e-3;

struct RcmConstraint {
  Eigen::Vector3d fulcrum{0.0, 0.0, 0.0};  // [mm], world frame
};

/// IK unknown: 10 joint angles plus the shaft parameter lambda.
struct FullState {
  JointVector q = JointVector::Zero();
  double lambda = 0.5;
};

struct IkParams {
  double damping = 1e-2;        // DLS mu
  double max_step = 0.05;       // [rad] per-joint step clamp
  double pos_tol = 0.01;        // [mm]
  double rot_tol = 1e-4;        // [rad]
  double rcm_tol = 0.01;        // [mm]
  int max_iters = 200;
  double nullspace_gain = 0.1;  // alpha
  double rot_scale = 100.0;     // [mm/rad], weights orientation rows

  void validate() const {
    if (!(damping > 0.0)) throw std::invalid_argument("IkParams: damping must be > 0");
    if (!(max_step > 0.0)) throw std::invalid_argument("IkParams: max_step must be > 0");
    if (!(pos_tol > 0.0 && rot_tol > 0.0 && rcm_tol > 0.0))
      throw std::invalid_argument("IkParams: tolerances must be > 0");
    if (max_iters <= 0) throw std::invalid_argument("IkParams: max_iters must be > 0");
    if (nullspace_gain < 0.0) throw std::invalid_argument("IkParams: nullspace_gain must be >= 0");
    if (!(rot_scale > 0.0)) throw std::invalid_argument("IkParams: rot_scale must be > 0");
  }
};

struct IkResult {
  FullState state;
  bool converged = false;
  int iterations = 0;
  double residual_pos = 0.0;  // [mm]
  double residual_rot = 0.0;  // [rad]
  double residual_rcm = 0.0;  // [mm]
};

/// Pivot point implied by a state: p_w + lambda * (p_s - p_w).
inline Eigen::Vector3d rcm_point(const KinematicChain& chain, const FullState& state) {
  const FkResult fk = forward_kinematics(chain, state.q);
  return fk.instrument.shaft_proximal +
         state.lambda * (fk.instrument.shaft_distal - fk.instrument.shaft_proximal);
}

/// Constraint violation e_rcm = p_f - p_rcm(state).
inline Eigen::Vector3d rcm_error(const KinematicChain& chain, const FullState& state,
                                 const RcmConstraint& constraint) {
  return constraint.fulcrum - rcm_point(chain, state);
}

using ExtendedJacobian = Eigen::Matrix<double, 9, KinematicChain::kNumJoints + 1>;

/// Task Jacobian of [tip position; rot_scale * tip orientation; RCM point]
/// with respect to (q, lambda). RCM rows w.r.t. q are the lambda-blend of
/// the shaft endpoint Jacobians; the lambda column is p_s - p_w.
inline ExtendedJacobian extended_jacobian(const KinematicChain& chain, const FullState& state,
                                          const RcmConstraint& /*constraint*/,
                                          double rot_scale = 100.0) {
  constexpr int n = KinematicChain::kNumJoints;
  const FkResult fk = forward_kinematics(chain, state.q);

  const Jacobian6x10 J_tip = geometric_jacobian(chain, state.q, tip_point(chain));
  const Jacobian6x10 J_w = geometric_jacobian(
      chain, state.q, PointOfInterest{chain.shaft_proximal_frame, Eigen::Vector3d::Zero()});
  const Jacobian6x10 J_s = geometric_jacobian(
      chain, state.q, PointOfInterest{chain.shaft_distal_frame, Eigen::Vector3d::Zero()});

  ExtendedJacobian J = ExtendedJacobian::Zero();
  J.block<3, n>(0, 0) = J_tip.block<3, n>(0, 0);
  J.block<3, n>(3, 0) = rot_scale * J_tip.block<3, n>(3, 0);
  J.block<3, n>(6, 0) = (1.0 - state.lambda) * J_w.block<3, n>(0, 0) +
                        state.lambda * J_s.block<3, n>(0, 0);
  J.block<3, 1>(6, n) = fk.instrument.shaft_distal - fk.instrument.shaft_proximal;
  return J;
}

/// Joint-centering objective h(q) = sum ((q_i - mid_i)/half_range_i)^2 and
/// its analytic gradient; driven through the nullspace to keep the arm away
/// from its limits (redundancy resolution).
struct NullspaceObjective {
  double value = 0.0;
  JointVector gradient = JointVector::Zero();
};

inline NullspaceObjective nullspace_objective_grad(const KinematicChain& chain,
                                                   const JointVector& q) {
  NullspaceObjective out;
  for (int i = 0; i < KinematicChain::kNumJoints; ++i) {
    const JointDef& j = chain.joints[i];
    const double u = (q[i] - j.mid()) / j.half_range();
    out.value += u * u;
    out.gradient[i] = 2.0 * u / j.half_range();
  }
  return out;
}

/// Stacked task error [e_pos; rot_scale*e_rot; e_rcm], all in mm.
inline Eigen::Matrix<double, 9, 1> task_error(const KinematicChain& chain, const FullState& state,
                                              const Pose& target, const RcmConstraint& constraint,
                                              double rot_scale) {
  const FkResult fk = forward_kinematics(chain, state.q);
  Eigen::Matrix<double, 9, 1> e;
  e.segment<3>(0) = target.position - fk.instrument.tip;
  e.segment<3>(3) = rot_scale * orientation_error(target.orientation, fk.instrument.tip_orientation);
  e.segment<3>(6) = constraint.fulcrum -
                    (fk.instrument.shaft_proximal +
                     state.lambda * (fk.instrument.shaft_distal - fk.instrument.shaft_proximal));
  return e;
}

/// One damped-least-squares step with nullspace joint centering:
///   dx = J^T (J J^T + mu^2 I)^-1 e - alpha (I - J^+ J) [grad h; 0]
/// Both terms come from one SVD of J: the task term uses the damped inverse
/// V diag(s/(s^2+mu^2)) U^T; the projector uses the exact Moore-Penrose
/// rank decision so the centering term injects no task motion. The step is
/// scaled so no joint moves more than max_step; q is clamped to limits and
/// lambda is kept inside (0.01, 0.99).
inline FullState dls_step(const KinematicChain& chain, const FullState& state, const Pose& target,
                          const RcmConstraint& constraint, const IkParams& params) {
  constexpr int n = KinematicChain::kNumJoints;
  const ExtendedJacobian J = extended_jacobian(chain, state, constraint, params.rot_scale);
  const Eigen::Matrix<double, 9, 1> e = task_error(chain, state, target, constraint, params.rot_scale);

  const Eigen::JacobiSVD<ExtendedJacobian> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!s.allFinite()) throw std::runtime_error("dls_step: singular value decomposition failed");

  Eigen::Matrix<double, 9, 1> damped = Eigen::Matrix<double, 9, 1>::Zero();
  const Eigen::Matrix<double, 9, 1> ue = svd.matrixU().transpose() * e;
  const double sigma_floor = kSigmaTruncation * s[0];
  for (int i = 0; i < 9; ++i) {
    if (s[i] < sigma_floor) continue;
    damped[i] = s[i] / (s[i] * s[i] + params.damping * params.damping) * ue[i];
  }
  Eigen::Matrix<double, n + 1, 1> dx = svd.matrixV().leftCols<9>() * damped;

  if (params.nullspace_gain > 0.0) {
    const NullspaceObjective h = nullspace_objective_grad(chain, state.q);
    Eigen::Matrix<double, n + 1, 1> g = Eigen::Matrix<double, n + 1, 1>::Zero();
    g.head<n>() = h.gradient;
    // remove the row-space component of g; rank cut at 1e-9 of the top s.v.
    const double rank_tol = 1e-9 * s[0];
    Eigen::Matrix<double, n + 1, 1> g_null = g;
    for (int i = 0; i < 9; ++i) {
      if (s[i] <= rank_tol) continue;
      const Eigen::Matrix<double, n + 1, 1> v = svd.matrixV().col(i);
      g_null -= v.dot(g) * v;
    }
    Eigen::Matrix<double, n + 1, 1> ns = params.nullspace_gain * g_null;
    // The projector is exact only to first order; keep the centering substep
    // small so its quadratic task-space leakage stays below 1e-3 mm.
    const double ns_max = ns.cwiseAbs().maxCoeff();
    if (ns_max > kNullspaceStepCap) ns *= kNullspaceStepCap / ns_max;
    dx -= ns;
  }

  const double max_dq = dx.head<n>().cwiseAbs().maxCoeff();
  if (max_dq > params.max_step) dx *= params.max_step / max_dq;

  FullState next;
  next.q = clamp_to_limits(chain, state.q + dx.head<n>());
  next.lambda = std::clamp(state.lambda + dx[n], kLambdaMargin, 1.0 - kLambdaMargin);
  return next;
}

struct IkDiagnostics {
  std::vector<double> error_norms;  // stacked 9-vector norm per iteration
};

/// Iterates dls_step until position, orientation, and RCM residuals are all
/// under tolerance or max_iters is hit. Non-convergence is reported, not
/// thrown; the best state seen (by stacked error norm) is returned.
inline IkResult solve_ik(const KinematicChain& chain, const FullState& initial, const Pose& target,
                         const RcmConstraint& constraint, const IkParams& params,
                         IkDiagnostics* diag = nullptr) {
  params.validate();
  FullState state = initial;
  IkResult result;
  FullState best = state;
  double best_norm = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter <= params.max_iters; ++iter) {
    const Eigen::Matrix<double, 9, 1> e =
        task_error(chain, state, target, constraint, params.rot_scale);
    const double pos = e.segment<3>(0).norm();
    const double rot = e.segment<3>(3).norm() / params.rot_scale;
    const double rcm = e.segment<3>(6).norm();
    const double norm = e.norm();
    if (diag) diag->error_norms.push_back(norm);
    if (norm < best_norm) {
      best_norm = norm;
      best = state;
    }
    if (pos <= params.pos_tol && rot <= params.rot_tol && rcm <= params.rcm_tol) {
      result.state = state;
      result.converged = true;
      result.iterations = iter;
      result.residual_pos = pos;
      result.residual_rot = rot;
      result.residual_rcm = rcm;
      return result;
    }
    if (iter == params.max_iters) break;
    state = dls_step(chain, state, target, constraint, params);
  }

  const Eigen::Matrix<double, 9, 1> e = task_error(chain, best, target, constraint, params.rot_scale);
  result.state = best;
  result.converged = false;
  result.iterations = params.max_iters;
  result.residual_pos = e.segment<3>(0).norm();
  result.residual_rot = e.segment<3>(3).norm() / params.rot_scale;
  result.residual_rcm = e.segment<3>(6).norm();
  return result;
}

}  // namespace rcmsim
