#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "rcmsim/geometry.hpp"

namespace rcmsim {

/// Rigid transform as position + unit quaternion.
struct Pose {
  Eigen::Vector3d position{0.0, 0.0, 0.0};
  Eigen::Quaterniond orientation{1.0, 0.0, 0.0, 0.0};

  Pose operator*(const Pose& rhs) const {
    Pose out;
    out.position = position + orientation * rhs.position;
    out.orientation = (orientation * rhs.orientation).normalized();
    return out;
  }
  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return position + orientation * p; }
  Pose inverse() const {
    Pose out;
    out.orientation = orientation.conjugate();
    out.position = -(out.orientation * position);
    return out;
  }
};

/// Rotation vector (axis * angle, in (-pi, pi]) of a unit quaternion.
inline Eigen::Vector3d rotation_vector(const Eigen::Quaterniond& q_in) {
  Eigen::Quaterniond q = q_in;
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();  // pick the short arc
  const Eigen::Vector3d v(q.x(), q.y(), q.z());
  const double vn = v.norm();
  const double angle = 2.0 * std::atan2(vn, q.w());
  if (vn < 1e-12) return 2.0 * v;  // small-angle: q ~ (1, r/2)
  return (angle / vn) * v;
}

/// Orientation error of `current` relative to `desired` as a rotation vector.
inline Eigen::Vector3d orientation_error(const Eigen::Quaterniond& desired,
                                         const Eigen::Quaterniond& current) {
  return rotation_vector(desired * current.conjugate());
}

struct InstrumentFrames {
  Eigen::Vector3d shaft_proximal;  // p_w [mm]
  Eigen::Vector3d shaft_distal;    // p_s [mm]
  Eigen::Vector3d tip;             // p_t [mm]
  Eigen::Quaterniond tip_orientation;
};

struct FkResult {
  std::array<Pose, KinematicChain::kNumJoints + 1> frames;  // frames[0] = base
  InstrumentFrames instrument;

  Pose tip_pose() const {
    return Pose{instrument.tip, instrument.tip_orientation};
  }
};

namespace detail {
// T_i = RotX(alpha) * TransX(a) * RotZ(theta) * TransZ(d), collapsed to
// a pose: translation (a, -d sin(alpha), d cos(alpha)), rotation Qx*Qz.
inline Pose dh_step(const JointDef& j, double q) {
  const double theta = q + j.dh_theta_offset;
  Pose p;
  p.position = Eigen::Vector3d(j.dh_a, -j.dh_d * std::sin(j.dh_alpha),
                               j.dh_d * std::cos(j.dh_alpha));
  p.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(j.dh_alpha, Eigen::Vector3d::UnitX())) *
                  Eigen::Quaterniond(Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitZ()));
  return p;
}
}  // namespace detail

/// Forward kinematics. Pure; throws on non-finite input.
inline FkResult forward_kinematics(const KinematicChain& chain, const JointVector& q) {
  if (!q.allFinite()) throw std::invalid_argument("forward_kinematics: non-finite joint vector");
  FkResult out;
  out.frames[0] = Pose{};
  for (int i = 0; i < KinematicChain::kNumJoints; ++i)
    out.frames[i + 1] = out.frames[i] * detail::dh_step(chain.joints[i], q[i]);
  out.instrument.shaft_proximal = out.frames[chain.shaft_proximal_frame].position;
  out.instrument.shaft_distal = out.frames[chain.shaft_distal_frame].position;
  const Pose& last = out.frames[KinematicChain::kNumJoints];
  out.instrument.tip = last.apply(chain.tool_tip_offset);
  out.instrument.tip_orientation = last.orientation;
  return out;
}

/// A point rigidly attached to a chain frame.
struct PointOfInterest {
  int frame = KinematicChain::kNumJoints;
  Eigen::Vector3d local_offset{0.0, 0.0, 0.0};
};

inline PointOfInterest tip_point(const KinematicChain& chain) {
  return PointOfInterest{KinematicChain::kNumJoints, chain.tool_tip_offset};
}

using Jacobian6x10 = Eigen::Matrix<double, 6, KinematicChain::kNumJoints>;

/// Geometric Jacobian at `poi` (rows 0-2 linear mm/rad, rows 3-5 angular
/// rad/rad). Column i is [z_i x (p - o_i); z_i] for joints at or before the
/// point's frame, zero for joints distal to it.
inline Jacobian6x10 geometric_jacobian(const KinematicChain& chain, const JointVector& q,
                                       const PointOfInterest& poi) {
  if (poi.frame < 0 || poi.frame > KinematicChain::kNumJoints)
    throw std::out_of_range("geometric_jacobian: frame index out of range");
  const FkResult fk = forward_kinematics(chain, q);
  const Eigen::Vector3d p = fk.frames[poi.frame].apply(poi.local_offset);
  Jacobian6x10 J = Jacobian6x10::Zero();
  for (int i = 1; i <= poi.frame; ++i) {
    const Eigen::Vector3d z = fk.frames[i].orientation * Eigen::Vector3d::UnitZ();
    const Eigen::Vector3d o = fk.frames[i].position;
    J.template block<3, 1>(0, i - 1) = z.cross(p - o);
    J.template block<3, 1>(3, i - 1) = z;
  }
  return J;
}

/// Central-difference Jacobian; the numeric check for geometric_jacobian.
/// Orientation rows are the quaternion log of the relative rotation over 2h.
inline Jacobian6x10 finite_difference_jacobian(const KinematicChain& chain, const JointVector& q,
                                               const PointOfInterest& poi, double h = 1e-6) {
  if (h <= 0.0) throw std::invalid_argument("finite_difference_jacobian: h must be > 0");
  if (poi.frame < 0 || poi.frame > KinematicChain::kNumJoints)
    throw std::out_of_range("finite_difference_jacobian: frame index out of range");
  Jacobian6x10 J;
  for (int i = 0; i < KinematicChain::kNumJoints; ++i) {
    JointVector qp = q, qm = q;
    qp[i] += h;
    qm[i] -= h;
    const FkResult fp = forward_kinematics(chain, qp);
    const FkResult fm = forward_kinematics(chain, qm);
    const Eigen::Vector3d pp = fp.frames[poi.frame].apply(poi.local_offset);
    const Eigen::Vector3d pm = fm.frames[poi.frame].apply(poi.local_offset);
    J.template block<3, 1>(0, i) = (pp - pm) / (2.0 * h);
    const Eigen::Quaterniond rel =
        fp.frames[poi.frame].orientation * fm.frames[poi.frame].orientation.conjugate();
    J.template block<3, 1>(3, i) = rotation_vector(rel) / (2.0 * h);
  }
  return J;
}

/// Normalized distance from each joint to its limits: 1 at mid-range,
/// 0 at a limit, clamped to [0, 1].
inline JointVector joint_limit_margin(const KinematicChain& chain, const JointVector& q) {
  JointVector m;
  for (int i = 0; i < KinematicChain::kNumJoints; ++i) {
    const JointDef& j = chain.joints[i];
    const double v = 1.0 - std::abs(q[i] - j.mid()) / j.half_range();
    m[i] = std::clamp(v, 0.0, 1.0);
  }
  return m;
}

inline JointVector clamp_to_limits(const KinematicChain& chain, const JointVector& q) {
  JointVector out;
  for (int i = 0; i < KinematicChain::kNumJoints; ++i)
    out[i] = std::clamp(q[i], chain.joints[i].limit_lo, chain.joints[i].limit_hi);
  return out;
}

}  // namespace rcmsim
