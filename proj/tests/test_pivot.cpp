#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "rcmsim/pivot.hpp"

using namespace rcmsim;

TEST_CASE("noiseless synthetic poses recover pivot and tip exactly") {
  const Eigen::Vector3d pivot(100.0, 50.0, 200.0);
  const Eigen::Vector3d tip(0.0, 0.0, 310.0);
  const auto poses = synthesize_pivot_poses(20, pivot, tip, 0.0, 7);

  const PivotResult r = pivot_calibrate(poses);
  REQUIRE((r.pivot - pivot).norm() < 1e-9);
  REQUIRE((r.tip_offset - tip).norm() < 1e-9);
  REQUIRE(r.rms_residual < 1e-9);
}

TEST_CASE("noisy recovery stays within 0.15 mm at the 95th percentile") {
  const Eigen::Vector3d pivot(100.0, 50.0, 200.0);
  const Eigen::Vector3d tip(0.0, 0.0, 310.0);

  std::vector<double> pivot_errors;
  std::vector<double> rms_values;
  for (int seed = 0; seed < 100; ++seed) {
    const auto poses = synthesize_pivot_poses(20, pivot, tip, 0.1, 1000 + seed);
    const PivotResult r = pivot_calibrate(poses);
    pivot_errors.push_back((r.pivot - pivot).norm());
    rms_values.push_back(r.rms_residual);
  }
  std::sort(pivot_errors.begin(), pivot_errors.end());
  REQUIRE(pivot_errors[94] < 0.15);

  const double mean_rms =
      std::accumulate(rms_values.begin(), rms_values.end(), 0.0) / rms_values.size();
  REQUIRE(mean_rms > 0.05);
  REQUIRE(mean_rms < 0.15);
}

TEST_CASE("rms residual tracks the injected noise level") {
  const Eigen::Vector3d pivot(-40.0, 120.0, 90.0);
  const Eigen::Vector3d tip(5.0, -3.0, 290.0);
  for (const double noise : {0.1, 0.25, 0.5}) {
    double worst_rms = 0.0;
    for (int seed = 0; seed < 20; ++seed) {
      const auto poses = synthesize_pivot_poses(30, pivot, tip, noise, 55 + seed);
      worst_rms = std::max(worst_rms, pivot_calibrate(poses).rms_residual);
    }
    REQUIRE(worst_rms <= noise * 1.5);
  }
}

TEST_CASE("degenerate orientation set is rejected") {
  const Eigen::Vector3d pivot(100.0, 50.0, 200.0);
  const Eigen::Vector3d tip(0.0, 0.0, 310.0);

  Pose p;
  p.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(0.4, Eigen::Vector3d::UnitY()));
  p.position = pivot - p.orientation * tip;
  const std::vector<Pose> same_orientation(8, p);
  REQUIRE_THROWS_AS(pivot_calibrate(same_orientation), std::invalid_argument);

  const auto few = synthesize_pivot_poses(5, pivot, tip, 0.0, 3);
  REQUIRE_THROWS_AS(pivot_calibrate(few), std::invalid_argument);
}
