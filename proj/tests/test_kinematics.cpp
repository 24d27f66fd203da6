#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <sstream>

#include "rcmsim/kinematics.hpp"
#include "rcmsim/rng.hpp"

using namespace rcmsim;

namespace {

// Independent oracle: plain homogeneous-matrix chain multiplication of the
// DH table, kept deliberately separate from the quaternion-based library path.
Eigen::Matrix4d rot_x(double a) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<3, 3>(0, 0) = Eigen::AngleAxisd(a, Eigen::Vector3d::UnitX()).toRotationMatrix();
  return m;
}
Eigen::Matrix4d rot_z(double a) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<3, 3>(0, 0) = Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  return m;
}
Eigen::Matrix4d trans_x(double v) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 3) = v;
  return m;
}
Eigen::Matrix4d trans_z(double v) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(2, 3) = v;
  return m;
}

Eigen::Matrix4d dh_matrix(const JointDef& j, double q) {
  return rot_x(j.dh_alpha) * trans_x(j.dh_a) * rot_z(q + j.dh_theta_offset) * trans_z(j.dh_d);
}

std::vector<Eigen::Matrix4d> matrix_chain(const KinematicChain& chain, const JointVector& q) {
  std::vector<Eigen::Matrix4d> frames(KinematicChain::kNumJoints + 1,
                                      Eigen::Matrix4d::Identity());
  for (int i = 0; i < KinematicChain::kNumJoints; ++i)
    frames[i + 1] = frames[i] * dh_matrix(chain.joints[i], q[i]);
  return frames;
}

JointVector random_config(const KinematicChain& chain, Rng& rng) {
  JointVector q;
  for (int i = 0; i < KinematicChain::kNumJoints; ++i)
    q[i] = rng.uniform(chain.joints[i].limit_lo, chain.joints[i].limit_hi);
  return q;
}

}  // namespace

TEST_CASE("home pose matches independent matrix-chain oracle") {
  const KinematicChain& chain = default_chain();
  const JointVector q = JointVector::Zero();
  const FkResult fk = forward_kinematics(chain, q);

  const auto frames = matrix_chain(chain, q);
  for (int i = 0; i <= KinematicChain::kNumJoints; ++i) {
    const Eigen::Vector3d expected = frames[i].block<3, 1>(0, 3);
    REQUIRE((fk.frames[i].position - expected).norm() < 1e-9);
    const Eigen::Matrix3d r_expected = frames[i].block<3, 3>(0, 0);
    REQUIRE((fk.frames[i].orientation.toRotationMatrix() - r_expected).norm() < 1e-9);
  }
  // canonical link offsets summed along the home axis
  const Eigen::Vector3d home_tip(0.0, 0.0, 300.0 + 250.0 + 150.0 + 300.0 + 10.0);
  REQUIRE((fk.instrument.tip - home_tip).norm() < 1e-9);

  // and at a bent configuration the oracle still agrees
  Rng rng(derive_seed(42, "fk-oracle"));
  for (int trial = 0; trial < 25; ++trial) {
    const JointVector qr = random_config(chain, rng);
    const FkResult fkr = forward_kinematics(chain, qr);
    const auto fr = matrix_chain(chain, qr);
    const Eigen::Vector4d tip_h = fr.back() * Eigen::Vector4d(chain.tool_tip_offset.x(),
                                                              chain.tool_tip_offset.y(),
                                                              chain.tool_tip_offset.z(), 1.0);
    REQUIRE((fkr.instrument.tip - tip_h.head<3>()).norm() < 1e-9);
  }
}

TEST_CASE("base roll by pi mirrors the tip through the base z-axis") {
  const KinematicChain& chain = default_chain();

  JointVector q = JointVector::Zero();
  q << 0.0, 0.4, 0.1, -0.8, 0.2, 0.5, 0.1, 0.3, 0.2, -0.1;
  const Eigen::Vector3d tip = forward_kinematics(chain, q).instrument.tip;

  JointVector q_rot = q;
  q_rot[0] = q[0] + kPi;
  const Eigen::Vector3d tip_rot = forward_kinematics(chain, q_rot).instrument.tip;

  REQUIRE(tip_rot.x() == Catch::Approx(-tip.x()).margin(1e-9));
  REQUIRE(tip_rot.y() == Catch::Approx(-tip.y()).margin(1e-9));
  REQUIRE(tip_rot.z() == Catch::Approx(tip.z()).margin(1e-9));
}

TEST_CASE("rigid shaft invariant over random configurations") {
  const KinematicChain& chain = default_chain();
  Rng rng(derive_seed(7, "rigid-shaft"));
  double worst = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    const JointVector q = random_config(chain, rng);
    const FkResult fk = forward_kinematics(chain, q);
    const double len = (fk.instrument.shaft_distal - fk.instrument.shaft_proximal).norm();
    worst = std::max(worst, std::abs(len - kShaftLengthMm) / kShaftLengthMm);
  }
  REQUIRE(worst < 1e-9);
}

TEST_CASE("jacobian single-joint column is omega cross r") {
  const KinematicChain& chain = default_chain();
  const JointVector q = JointVector::Zero();
  const PointOfInterest poi{1, Eigen::Vector3d(100.0, 0.0, 0.0)};
  const Jacobian6x10 J = geometric_jacobian(chain, q, poi);

  REQUIRE((J.block<3, 1>(0, 0) - Eigen::Vector3d(0.0, 100.0, 0.0)).norm() < 1e-12);
  REQUIRE((J.block<3, 1>(3, 0) - Eigen::Vector3d(0.0, 0.0, 1.0)).norm() < 1e-12);
  for (int c = 1; c < 10; ++c) REQUIRE(J.col(c).norm() == 0.0);
}

TEST_CASE("geometric jacobian matches central differences on random configs") {
  const KinematicChain& chain = default_chain();
  Rng rng(derive_seed(11, "jacobian-fd"));
  const PointOfInterest tip = tip_point(chain);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const JointVector q = random_config(chain, rng);
    const Jacobian6x10 Ja = geometric_jacobian(chain, q, tip);
    const Jacobian6x10 Jn = finite_difference_jacobian(chain, q, tip, 1e-6);
    const double rel = (Ja - Jn).cwiseAbs().maxCoeff() / Ja.cwiseAbs().maxCoeff();
    worst = std::max(worst, rel);
  }
  REQUIRE(worst < 1e-5);
}

TEST_CASE("columns distal to the point of interest are exactly zero") {
  const KinematicChain& chain = default_chain();
  Rng rng(derive_seed(13, "distal-zero"));
  const JointVector q = random_config(chain, rng);
  const PointOfInterest poi{5, Eigen::Vector3d(1.0, 2.0, 3.0)};
  const Jacobian6x10 J = geometric_jacobian(chain, q, poi);
  for (int c = 5; c < 10; ++c) REQUIRE(J.col(c).norm() == 0.0);
}

TEST_CASE("central differences converge at second order") {
  const KinematicChain& chain = default_chain();
  JointVector q;
  q << 0.3, -0.5, 0.7, -1.0, 0.4, 0.6, -0.2, 0.8, 0.3, -0.4;
  const PointOfInterest tip = tip_point(chain);
  const Jacobian6x10 Ja = geometric_jacobian(chain, q, tip);

  const double e1 = (finite_difference_jacobian(chain, q, tip, 1e-2) - Ja).cwiseAbs().maxCoeff();
  const double e2 = (finite_difference_jacobian(chain, q, tip, 5e-3) - Ja).cwiseAbs().maxCoeff();
  REQUIRE(e1 / e2 > 3.0);
  REQUIRE(e1 / e2 < 5.5);
}

TEST_CASE("jacobian of the base frame is the zero matrix") {
  const KinematicChain& chain = default_chain();
  JointVector q;
  q << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0;
  const PointOfInterest base{0, Eigen::Vector3d::Zero()};
  REQUIRE(geometric_jacobian(chain, q, base).norm() == 0.0);
  REQUIRE(finite_difference_jacobian(chain, q, base, 1e-6).norm() < 1e-12);
}

TEST_CASE("joint limit margins") {
  const KinematicChain& chain = default_chain();

  JointVector q;
  for (int i = 0; i < 10; ++i) q[i] = chain.joints[i].mid();
  REQUIRE(joint_limit_margin(chain, q).minCoeff() == Catch::Approx(1.0));

  q[3] = chain.joints[3].limit_hi;
  REQUIRE(joint_limit_margin(chain, q)[3] == Catch::Approx(0.0).margin(1e-12));

  // 75% of the way from mid to the upper limit
  q[3] = chain.joints[3].mid() + 0.75 * chain.joints[3].half_range();
  REQUIRE(joint_limit_margin(chain, q)[3] == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("forward kinematics is bit-deterministic") {
  const KinematicChain& chain = default_chain();
  JointVector q;
  q << 0.3, -0.5, 0.7, -1.0, 0.4, 0.6, -0.2, 0.8, 0.3, -0.4;
  const FkResult a = forward_kinematics(chain, q);
  const FkResult b = forward_kinematics(chain, q);
  REQUIRE(std::memcmp(a.frames[10].position.data(), b.frames[10].position.data(),
                      3 * sizeof(double)) == 0);
  REQUIRE(std::memcmp(a.instrument.tip.data(), b.instrument.tip.data(), 3 * sizeof(double)) == 0);
  REQUIRE(std::memcmp(a.instrument.tip_orientation.coeffs().data(),
                      b.instrument.tip_orientation.coeffs().data(), 4 * sizeof(double)) == 0);
}

TEST_CASE("frames stay orthonormal") {
  const KinematicChain& chain = default_chain();
  Rng rng(derive_seed(17, "orthonormal"));
  for (int i = 0; i < 200; ++i) {
    const JointVector q = random_config(chain, rng);
    const FkResult fk = forward_kinematics(chain, q);
    for (const Pose& f : fk.frames) {
      REQUIRE(std::abs(f.orientation.norm() - 1.0) < 1e-9);
      REQUIRE(std::abs(f.orientation.toRotationMatrix().determinant() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("input validation") {
  const KinematicChain& chain = default_chain();
  JointVector q = JointVector::Zero();

  JointVector bad = q;
  bad[2] = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(forward_kinematics(chain, bad), std::invalid_argument);

  REQUIRE_THROWS_AS(finite_difference_jacobian(chain, q, tip_point(chain), 0.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(finite_difference_jacobian(chain, q, tip_point(chain), -1e-6),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(geometric_jacobian(chain, q, PointOfInterest{11, {}}), std::out_of_range);
  REQUIRE_THROWS_AS(geometric_jacobian(chain, q, PointOfInterest{-1, {}}), std::out_of_range);
}

TEST_CASE("geometry table round-trips through the text format") {
  const KinematicChain& chain = default_chain();

  std::ostringstream out;
  out.precision(17);
  out << "# canonical table\n";
  for (const JointDef& j : chain.joints)
    out << j.dh_a << ' ' << j.dh_alpha << ' ' << j.dh_d << ' ' << j.dh_theta_offset << ' '
        << j.limit_lo << ' ' << j.limit_hi << '\n';
  out << "tip_offset 0 0 10\n";
  out << "shaft 7 8\n";

  std::istringstream in(out.str());
  const KinematicChain loaded = load_chain(in);

  Rng rng(derive_seed(23, "geometry-roundtrip"));
  const JointVector q = random_config(chain, rng);
  const FkResult a = forward_kinematics(chain, q);
  const FkResult b = forward_kinematics(loaded, q);
  REQUIRE((a.instrument.tip - b.instrument.tip).norm() < 1e-9);

  std::istringstream too_few("0 0 0 0 -1 1\n");
  REQUIRE_THROWS_AS(load_chain(too_few), std::invalid_argument);

  std::istringstream bad_limits(
      "0 0 0 0 1 -1\n0 0 0 0 -1 1\n0 0 0 0 -1 1\n0 0 0 0 -1 1\n0 0 0 0 -1 1\n"
      "0 0 0 0 -1 1\n0 0 0 0 -1 1\n0 0 0 0 -1 1\n0 0 0 0 -1 1\n0 0 0 0 -1 1\n");
  REQUIRE_THROWS_AS(load_chain(bad_limits), std::invalid_argument);
}
