#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rcmsim/kinematics.hpp"
#include "rcmsim/rng.hpp"

namespace rcmsim {

// Pivot calibration: the tool is pivoted about a fixed point while flange
// poses (R_i, d_i) are recorded. The fixed tip offset t (flange frame) and
// pivot p (world frame) satisfy R_i t + d_i = p for every pose, giving the
// stacked linear system [R_i | -I] [t; p] = -d_i.

struct PivotResult {
  Eigen::Vector3d tip_offset;  // t [mm], flange frame
  Eigen::Vector3d pivot;       // p [mm], world frame
  double rms_residual = 0.0;   // [mm], per residual component (matches the
                               // per-axis noise level for isotropic noise)
};

inline constexpr double kPivotSingularTol = 1e-6;

inline PivotResult pivot_calibrate(const std::vector<Pose>& poses) {
  const int n = static_cast<int>(poses.size());
  if (n < 6) throw std::invalid_argument("pivot_calibrate: need at least 6 poses");

  Eigen::MatrixXd A(3 * n, 6);
  Eigen::VectorXd b(3 * n);
  for (int i = 0; i < n; ++i) {
    A.block<3, 3>(3 * i, 0) = poses[i].orientation.toRotationMatrix();
    A.block<3, 3>(3 * i, 3) = -Eigen::Matrix3d::Identity();
    b.segment<3>(3 * i) = -poses[i].position;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(5) < kPivotSingularTol)
    throw std::invalid_argument(
        "pivot_calibrate: degenerate input (poses lack orientation diversity)");
  const Eigen::Matrix<double, 6, 1> x = svd.solve(b);

  PivotResult out;
  out.tip_offset = x.head<3>();
  out.pivot = x.tail<3>();
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d r =
        poses[i].orientation * out.tip_offset + poses[i].position - out.pivot;
    ss += r.squaredNorm();
  }
  out.rms_residual = std::sqrt(ss / (3.0 * n));
  return out;
}

/// Synthesizes flange poses pivoting about a known point, for demos and
/// calibration checks. Orientations sweep a cone plus roll so the stacked
/// system is well conditioned; optional isotropic Gaussian position noise.
inline std::vector<Pose> synthesize_pivot_poses(int count, const Eigen::Vector3d& pivot,
                                                const Eigen::Vector3d& tip_offset,
                                                double noise_mm, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("synthesize_pivot_poses: count must be >= 1");
  Rng rng(derive_seed(seed, "pivot-synthesis"));
  std::vector<Pose> poses;
  poses.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double tilt = rng.uniform(0.2, 1.0);
    const double azim = rng.uniform(0.0, 2.0 * kPi);
    const double roll = rng.uniform(-kPi, kPi);
    Eigen::Quaterniond R =
        Eigen::Quaterniond(Eigen::AngleAxisd(azim, Eigen::Vector3d::UnitZ())) *
        Eigen::Quaterniond(Eigen::AngleAxisd(tilt, Eigen::Vector3d::UnitY())) *
        Eigen::Quaterniond(Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitZ()));
    R.normalize();
    Pose pose;
    pose.orientation = R;
    pose.position = pivot - R * tip_offset;
    if (noise_mm > 0.0)
      pose.position += Eigen::Vector3d(rng.normal(0.0, noise_mm), rng.normal(0.0, noise_mm),
                                       rng.normal(0.0, noise_mm));
    poses.push_back(pose);
  }
  return poses;
}

}  // namespace rcmsim
