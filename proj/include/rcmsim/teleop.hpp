#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "rcmsim/kinematics.hpp"

namespace rcmsim {

// Master-console processing chain: boxcar tremor filter, then clutch and
// 5:1 motion downscaling (filter-then-scale). Orientation is passed through
// relative to the engage anchors, unscaled.

struct MasterSample {
  double t = 0.0;                  // [s]
  Eigen::Vector3d position{0, 0, 0};  // [mm]
  Eigen::Quaterniond orientation{1, 0, 0, 0};
  bool clutch_engaged = true;
  bool contact_press = false;
};

struct TeleopConfig {
  double scale = 5.0;            // master:slave motion ratio
  double window = 0.05;          // [s] averaging window
  double sample_rate = 1000.0;   // [Hz]
  double force_threshold = 5.0;  // [N]

  int window_samples() const {
    return static_cast<int>(std::lround(window * sample_rate));
  }
  void validate() const {
    if (!(scale >= 1.0)) throw std::invalid_argument("TeleopConfig: scale must be >= 1");
    if (!(sample_rate > 0.0)) throw std::invalid_argument("TeleopConfig: sample_rate must be > 0");
    if (window_samples() < 1)
      throw std::invalid_argument("TeleopConfig: window must span at least one sample");
    if (!(force_threshold > 0.0))
      throw std::invalid_argument("TeleopConfig: force_threshold must be > 0");
  }
};

/// Boxcar moving average over the last N samples, per axis. Output is the
/// running sum divided by N; the sum is recomputed from the ring buffer
/// every few thousand samples to keep accumulation drift below 1e-9.
class BoxcarFilter {
 public:
  explicit BoxcarFilter(int window_samples)
      : n_(window_samples), buffer_(static_cast<size_t>(window_samples)) {
    if (window_samples < 1) throw std::invalid_argument("BoxcarFilter: window must be >= 1");
  }

  /// First sample pre-fills the whole window (unit DC gain from the start).
  Eigen::Vector3d step(const Eigen::Vector3d& sample) {
    if (!primed_) {
      for (auto& s : buffer_) s = sample;
      sum_ = sample * static_cast<double>(n_);
      primed_ = true;
      head_ = 0;
      count_ = 0;
      return sample;
    }
    sum_ += sample - buffer_[head_];
    buffer_[head_] = sample;
    head_ = (head_ + 1) % n_;
    if (++count_ % kRefreshPeriod == 0) refresh_sum();
    return sum_ / static_cast<double>(n_);
  }

  bool primed() const { return primed_; }
  int window() const { return n_; }

 private:
  static constexpr std::uint64_t kRefreshPeriod = 4096;

  void refresh_sum() {
    Eigen::Vector3d s = Eigen::Vector3d::Zero();
    for (const auto& v : buffer_) s += v;
    sum_ = s;
  }

  int n_;
  std::vector<Eigen::Vector3d> buffer_;
  Eigen::Vector3d sum_ = Eigen::Vector3d::Zero();
  int head_ = 0;
  std::uint64_t count_ = 0;
  bool primed_ = false;
};

/// Closed-form magnitude response of an N-tap boxcar at frequency f.
inline double boxcar_gain(double f_hz, int n, double sample_rate_hz) {
  const double x = kPi * f_hz / sample_rate_hz;
  if (std::abs(std::sin(x)) < 1e-300) return 1.0;
  return std::abs(std::sin(x * n) / (n * std::sin(x)));
}

/// Clutched, scaled master-to-slave mapping. While disengaged the emitted
/// target is frozen; on (re-)engage the anchors reset to the current master
/// pose and held target, so the emitted target is always continuous.
class ClutchScaler {
 public:
  ClutchScaler(const Pose& initial_slave_target, const TeleopConfig& config)
      : config_(config), held_target_(initial_slave_target) {
    config_.validate();
  }

  Pose step(const Eigen::Vector3d& master_position, const Eigen::Quaterniond& master_orientation,
            bool clutch_engaged) {
    if (clutch_engaged && !engaged_) {
      master_anchor_pos_ = master_position;
      master_anchor_rot_ = master_orientation;
      slave_anchor_ = held_target_;
    }
    engaged_ = clutch_engaged;
    if (!engaged_) return held_target_;

    Pose target;
    target.position = slave_anchor_.position + (master_position - master_anchor_pos_) / config_.scale;
    target.orientation =
        (master_orientation * master_anchor_rot_.conjugate() * slave_anchor_.orientation)
            .normalized();
    held_target_ = target;
    return target;
  }

  bool engaged() const { return engaged_; }
  const Pose& held_target() const { return held_target_; }

 private:
  TeleopConfig config_;
  bool engaged_ = false;
  Eigen::Vector3d master_anchor_pos_ = Eigen::Vector3d::Zero();
  Eigen::Quaterniond master_anchor_rot_{1, 0, 0, 0};
  Pose slave_anchor_;
  Pose held_target_;
};

/// Force alert: fires strictly above the threshold (5.0 N exactly does not
/// alert). Negative force readings are rejected.
inline bool force_alert(double tip_force_n, const TeleopConfig& config) {
  if (tip_force_n < 0.0) throw std::invalid_argument("force_alert: negative force");
  return tip_force_n > config.force_threshold;
}

/// Full master-to-target pipeline (filter -> clutch/scale) for one operator.
/// Single-owner: advance from exactly one thread.
class TeleopPipeline {
 public:
  TeleopPipeline(const Pose& initial_slave_target, const TeleopConfig& config)
      : config_(config), filter_(config.window_samples()), clutch_(initial_slave_target, config) {
    config_.validate();
  }

  Pose step(const MasterSample& sample) {
    if (have_last_t_) {
      const double dt = sample.t - last_t_;
      const double period = 1.0 / config_.sample_rate;
      if (!(dt > 0.0) || std::abs(dt - period) > 0.25 * period)
        throw std::invalid_argument("TeleopPipeline: samples must advance at the configured rate");
    }
    last_t_ = sample.t;
    have_last_t_ = true;
    const Eigen::Vector3d filtered = filter_.step(sample.position);
    return clutch_.step(filtered, sample.orientation, sample.clutch_engaged);
  }

  const TeleopConfig& config() const { return config_; }
  const ClutchScaler& clutch() const { return clutch_; }

 private:
  TeleopConfig config_;
  BoxcarFilter filter_;
  ClutchScaler clutch_;
  double last_t_ = 0.0;
  bool have_last_t_ = false;
};

}  // namespace rcmsim
