#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rcmsim {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double d) { return d * kPi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / kPi; }

/// One revolute joint in modified (Craig) DH convention:
///   T_i = RotX(alpha_{i-1}) * TransX(a_{i-1}) * RotZ(theta_i + offset) * TransZ(d_i)
struct JointDef {
  double dh_a = 0.0;             // [mm]
  double dh_alpha = 0.0;         // [rad]
  double dh_d = 0.0;             // [mm]
  double dh_theta_offset = 0.0;  // [rad]
  double limit_lo = -kPi;        // [rad]
  double limit_hi = kPi;         // [rad]

  double mid() const { return 0.5 * (limit_lo + limit_hi); }
  double half_range() const { return 0.5 * (limit_hi - limit_lo); }
};

/// Serial 10-joint chain: 7-DOF arm, instrument roll, 2-DOF distal wrist.
/// Frames are indexed 0 (base) .. 10; the rigid instrument shaft spans
/// [shaft_proximal_frame, shaft_distal_frame] and the tool tip sits at
/// tool_tip_offset in the last frame.
struct KinematicChain {
  static constexpr int kNumJoints = 10;

  std::array<JointDef, kNumJoints> joints{};
  int shaft_proximal_frame = 7;
  int shaft_distal_frame = 8;
  Eigen::Vector3d tool_tip_offset{0.0, 0.0, 10.0};
};

using JointVector = Eigen::Matrix<double, KinematicChain::kNumJoints, 1>;

namespace detail {
inline JointDef make_joint(double a, double alpha, double d, double theta_off,
                           double lo_deg, double hi_deg) {
  JointDef j;
  j.dh_a = a;
  j.dh_alpha = alpha;
  j.dh_d = d;
  j.dh_theta_offset = theta_off;
  j.limit_lo = deg2rad(lo_deg);
  j.limit_hi = deg2rad(hi_deg);
  return j;
}
}  // namespace detail

/// Frozen canonical geometry (version 1, see docs/geometry_table.md).
/// S-R-S arm: joints 1-3 meet at the shoulder, elbow at joint 4, joints 5-7
/// meet at the wrist. Upper arm 300 mm, forearm 250 mm, wrist-to-mount
/// 150 mm (700 mm reach); 300 mm instrument shaft; 10 mm distal segment.
/// At q = 0 the chain is a straight vertical column, tip at (0,0,1010).
inline const KinematicChain& default_chain() {
  static const KinematicChain chain = [] {
    using detail::make_joint;
    KinematicChain c;
    const double hp = kPi / 2.0;
    c.joints = {
        make_joint(0.0, 0.0, 0.0, 0.0, -170.0, 170.0),    // 1 base roll
        make_joint(0.0, -hp, 0.0, 0.0, -120.0, 120.0),    // 2 shoulder pitch
        make_joint(0.0, hp, 300.0, 0.0, -170.0, 170.0),   // 3 upper-arm roll
        make_joint(0.0, hp, 0.0, 0.0, -120.0, 120.0),     // 4 elbow pitch
        make_joint(0.0, -hp, 250.0, 0.0, -170.0, 170.0),  // 5 forearm roll
        make_joint(0.0, -hp, 0.0, 0.0, -120.0, 120.0),    // 6 wrist pitch
        make_joint(0.0, hp, 150.0, 0.0, -170.0, 170.0),   // 7 wrist roll
        make_joint(0.0, 0.0, 300.0, 0.0, -170.0, 170.0),  // 8 instrument roll (shaft)
        make_joint(0.0, -hp, 0.0, 0.0, -90.0, 90.0),      // 9 distal wrist pitch
        make_joint(0.0, hp, 0.0, 0.0, -90.0, 90.0),       // 10 distal wrist yaw
    };
    c.shaft_proximal_frame = 7;
    c.shaft_distal_frame = 8;
    c.tool_tip_offset = Eigen::Vector3d(0.0, 0.0, 10.0);
    return c;
  }();
  return chain;
}

inline constexpr double kShaftLengthMm = 300.0;

/// Structural validation shared by the compiled-in table and loaded files.
/// Throws std::invalid_argument on violation.
inline void validate_chain(const KinematicChain& chain) {
  for (int i = 0; i < KinematicChain::kNumJoints; ++i) {
    const JointDef& j = chain.joints[i];
    if (!(j.limit_lo < j.limit_hi))
      throw std::invalid_argument("joint " + std::to_string(i + 1) + ": limit_lo must be < limit_hi");
    if (std::abs(j.limit_lo) > kPi + 1e-12 || std::abs(j.limit_hi) > kPi + 1e-12)
      throw std::invalid_argument("joint " + std::to_string(i + 1) + ": limits must lie within [-pi, pi]");
    if (!std::isfinite(j.dh_a) || !std::isfinite(j.dh_alpha) || !std::isfinite(j.dh_d) ||
        !std::isfinite(j.dh_theta_offset))
      throw std::invalid_argument("joint " + std::to_string(i + 1) + ": non-finite DH entry");
  }
  if (chain.shaft_proximal_frame < 0 || chain.shaft_distal_frame > KinematicChain::kNumJoints ||
      chain.shaft_proximal_frame >= chain.shaft_distal_frame)
    throw std::invalid_argument("shaft frame indices must satisfy 0 <= proximal < distal <= 10");
  if (!chain.tool_tip_offset.allFinite())
    throw std::invalid_argument("tool_tip_offset must be finite");
}

/// Loads a geometry table. One joint per line:
///   a_mm alpha_rad d_mm theta_offset_rad lo_rad hi_rad
/// plus optional directives "tip_offset x y z" and "shaft proximal distal".
/// '#' starts a comment. Exactly 10 joint lines are required.
inline KinematicChain load_chain(std::istream& in) {
  KinematicChain chain = default_chain();
  int joint_count = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank
    if (first == "tip_offset") {
      Eigen::Vector3d v;
      if (!(ls >> v.x() >> v.y() >> v.z()))
        throw std::invalid_argument("geometry line " + std::to_string(lineno) + ": tip_offset needs 3 values");
      chain.tool_tip_offset = v;
      continue;
    }
    if (first == "shaft") {
      if (!(ls >> chain.shaft_proximal_frame >> chain.shaft_distal_frame))
        throw std::invalid_argument("geometry line " + std::to_string(lineno) + ": shaft needs 2 indices");
      continue;
    }
    if (joint_count >= KinematicChain::kNumJoints)
      throw std::invalid_argument("geometry line " + std::to_string(lineno) + ": more than 10 joints");
    JointDef j;
    std::istringstream row(line);
    if (!(row >> j.dh_a >> j.dh_alpha >> j.dh_d >> j.dh_theta_offset >> j.limit_lo >> j.limit_hi))
      throw std::invalid_argument("geometry line " + std::to_string(lineno) + ": expected 6 numeric fields");
    chain.joints[joint_count++] = j;
  }
  if (joint_count != KinematicChain::kNumJoints)
    throw std::invalid_argument("geometry table must define exactly 10 joints, got " +
                                std::to_string(joint_count));
  validate_chain(chain);
  return chain;
}

inline KinematicChain load_chain_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open geometry file: " + path);
  return load_chain(f);
}

}  // namespace rcmsim
