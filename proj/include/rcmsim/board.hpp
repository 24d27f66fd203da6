#pragma once

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

#include "rcmsim/rcm.hpp"
#include "rcmsim/rng.hpp"

namespace rcmsim {

struct Target {
  Eigen::Vector3d center;       // [mm] world
  double radius = 2.5;          // [mm] (5 mm diameter marker)
  double insertion_angle = 0.0; // [deg] from vertical through the fulcrum
};

/// Ten contact targets on a dome-shaped foam surface below the fulcrum.
struct TargetBoard {
  static constexpr int kNumTargets = 10;
  std::array<Target, kNumTargets> targets;
  Eigen::Vector3d fulcrum{0, 0, 0};
  Eigen::Vector3d vertical{0, 0, 1};  // unit
};

/// Angle between the fulcrum-to-target ray and the vertical axis, degrees.
inline double insertion_angle(const Eigen::Vector3d& target, const Eigen::Vector3d& fulcrum,
                              const Eigen::Vector3d& vertical) {
  const Eigen::Vector3d d = target - fulcrum;
  const double n = d.norm();
  if (n < 1e-12) throw std::invalid_argument("insertion_angle: target coincides with fulcrum");
  const double c = std::clamp(std::abs(d.dot(vertical) / n), 0.0, 1.0);
  return rad2deg(std::acos(c));
}

/// Arm posture used to set up every trial: elbow bent, instrument pointing
/// straight down, shaft vertical. The fulcrum is the shaft midpoint here.
inline FullState nominal_posture() {
  FullState s;
  s.q << 0.0, 0.873, 0.0, -1.222, 0.0, 1.047, 0.0, 0.0, 0.0, 0.0;
  s.lambda = 0.5;
  return s;
}

/// Trial workspace: chain + posture-derived fulcrum + ready tip pose
/// hovering above the board.
struct Workcell {
  KinematicChain chain;
  FullState ready_state;
  RcmConstraint constraint;
  Pose ready_tip;
};

inline constexpr double kReadyHoverDepth = 60.0;  // [mm] below the fulcrum

inline Workcell make_workcell(const KinematicChain& chain = default_chain()) {
  Workcell w;
  w.chain = chain;
  const FullState posture = nominal_posture();
  w.constraint.fulcrum = rcm_point(chain, posture);

  const FkResult fk = forward_kinematics(chain, posture.q);
  Pose hover;
  hover.position = w.constraint.fulcrum - kReadyHoverDepth * Eigen::Vector3d::UnitZ();
  hover.orientation = fk.instrument.tip_orientation;  // pointing straight down

  // ramp the tip to the hover point in small steps; one large jump can drop
  // the solver into a twisted wrist branch with a joint pinned at its limit
  FullState state = posture;
  const Eigen::Vector3d start = fk.instrument.tip;
  const int steps = 50;
  for (int k = 1; k <= steps; ++k) {
    Pose waypoint = hover;
    waypoint.position = start + (hover.position - start) * (static_cast<double>(k) / steps);
    const IkResult r = solve_ik(chain, state, waypoint, w.constraint, IkParams{});
    if (!r.converged) throw std::runtime_error("make_workcell: ready approach did not converge");
    state = r.state;
  }
  const JointVector margins = joint_limit_margin(chain, state.q);
  if (margins.minCoeff() < 0.2)
    throw std::runtime_error("make_workcell: ready posture too close to a joint limit");
  w.ready_state = state;
  w.ready_tip = hover;
  return w;
}

// Board layout: angles follow a fixed template (three clustered near vertical,
// three mid-range, one at 22 deg, three near the 30 deg extreme) with a small
// seeded jitter; azimuths sit in a 90 deg work sector and depths span the
// 80-150 mm band. Each 10 deg band always holds at least 3 targets.
inline TargetBoard generate_board(std::uint64_t seed,
                                  const Eigen::Vector3d& fulcrum,
                                  const Eigen::Vector3d& vertical = Eigen::Vector3d(0, 0, 1)) {
  static constexpr double kAngleTemplate[TargetBoard::kNumTargets] = {
      0.5, 1.0, 1.5, 12.0, 15.0, 18.0, 22.0, 29.0, 29.5, 30.0};

  Rng rng(derive_seed(seed, "target-board"));
  TargetBoard board;
  board.fulcrum = fulcrum;
  board.vertical = vertical.normalized();

  for (int i = 0; i < TargetBoard::kNumTargets; ++i) {
    double angle = kAngleTemplate[i];
    if (angle > 0.5 && angle < 30.0) angle += rng.uniform(-0.4, 0.4);
    const double theta = deg2rad(angle);
    const double azimuth = deg2rad(rng.uniform(-45.0, 45.0));
    const double depth = rng.uniform(80.0, 150.0);  // vertical drop below fulcrum
    const double slant = depth / std::cos(theta);

    const Eigen::Vector3d dir(std::sin(theta) * std::cos(azimuth),
                              std::sin(theta) * std::sin(azimuth), -std::cos(theta));
    Target t;
    t.center = fulcrum + slant * dir;
    t.insertion_angle = insertion_angle(t.center, fulcrum, board.vertical);
    board.targets[i] = t;
  }
  return board;
}

inline TargetBoard generate_board(std::uint64_t seed) {
  return generate_board(seed, make_workcell().constraint.fulcrum);
}

/// Largest pairwise distance between targets; error records never exceed it.
inline double board_diameter(const TargetBoard& board) {
  double d = 0.0;
  for (int i = 0; i < TargetBoard::kNumTargets; ++i)
    for (int j = i + 1; j < TargetBoard::kNumTargets; ++j)
      d = std::max(d, (board.targets[i].center - board.targets[j].center).norm());
  return d;
}

}  // namespace rcmsim
