#pragma once

#include <deque>
#include <stdexcept>

#include <Eigen/Dense>

#include "rcmsim/rng.hpp"

namespace rcmsim {

enum class Tier { kExpert, kNovice };

inline const char* tier_name(Tier t) { return t == Tier::kExpert ? "expert" : "novice"; }

/// Synthetic operator parameters. The numeric defaults are calibration
/// values (documented in configs/default.config), not measurements.
struct OperatorParams {
  Tier tier = Tier::kExpert;
  double tremor_rms = 0.8;         // [mm] per-axis displacement RMS, hand space
  double tremor_band_lo = 8.0;     // [Hz]
  double tremor_band_hi = 12.0;    // [Hz]
  double reaction_delay = 0.15;    // [s]
  double max_hand_speed = 60.0;    // [mm/s]
  double perception_noise = 0.5;   // [mm] sigma_p, per-axis target mislocalization
  double press_threshold = 1.0;    // [mm] delta, perceived-distance gate
  double angle_sensitivity = 1.2;  // k_theta, manual condition only

  void validate() const {
    if (tremor_rms < 0 || reaction_delay < 0 || max_hand_speed < 0 || perception_noise < 0 ||
        press_threshold < 0 || angle_sensitivity < 0)
      throw std::invalid_argument("OperatorParams: negative parameter");
    if (!(tremor_band_lo > 0 && tremor_band_hi >= tremor_band_lo))
      throw std::invalid_argument("OperatorParams: bad tremor band");
  }
};

inline OperatorParams expert_defaults() {
  OperatorParams p;
  p.tier = Tier::kExpert;
  p.tremor_rms = 0.8;
  p.reaction_delay = 0.15;
  p.max_hand_speed = 60.0;
  p.perception_noise = 0.5;
  p.press_threshold = 1.0;
  return p;
}

inline OperatorParams novice_defaults() {
  OperatorParams p;
  p.tier = Tier::kNovice;
  p.tremor_rms = 1.5;
  p.reaction_delay = 0.25;
  p.max_hand_speed = 45.0;
  p.perception_noise = 1.0;
  p.press_threshold = 1.5;
  return p;
}

/// Fulcrum-effect gain on operator noise in the manual condition.
inline double angle_noise_gain(double angle_deg, double k_theta) {
  return 1.0 + k_theta * (angle_deg / 30.0);
}

// Behavioral constants of the operator process (see docs/operator_model.md).
inline constexpr double kSimRate = 1000.0;      // [Hz] plant / master stream
inline constexpr double kOperatorRate = 100.0;  // [Hz] decision rate
inline constexpr int kTicksPerDecision = 10;
inline constexpr double kProportionalGain = 4.0;   // [1/s] speed per distance
inline constexpr double kDwellTime = 0.1;          // [s] under-threshold dwell
inline constexpr double kPerceptTau = 0.03;        // [s] visual smoothing EMA
inline constexpr double kImpatienceStart = 12.0;   // [s] on-target time before easing
inline constexpr double kImpatienceRate = 1.0 / 6.0;  // threshold growth per second

inline constexpr double kTremorWhiteTau = 0.05;  // [s] broadband correlation time

/// Band-limited hand tremor: per axis two seeded sinusoids inside the tremor
/// band plus a white-noise-driven broadband component, with variance split
/// 0.4/0.4/0.2 of tremor_rms^2. The broadband part is an OU process with a
/// 50 ms correlation time so consecutive millisecond samples stay physically
/// continuous.
class TremorGenerator {
 public:
  TremorGenerator(const OperatorParams& params, std::uint64_t seed)
      : white_rng_(derive_seed(seed, "tremor-white")) {
    Rng setup(derive_seed(seed, "tremor-setup"));
    amp_sin_ = std::sqrt(0.8) * params.tremor_rms;      // two sinusoids, 0.4 each
    sigma_white_ = std::sqrt(0.2) * params.tremor_rms;  // remaining variance
    for (int axis = 0; axis < 3; ++axis) {
      for (int k = 0; k < 2; ++k) {
        freq_[axis][k] = setup.uniform(params.tremor_band_lo, params.tremor_band_hi);
        phase_[axis][k] = setup.uniform(0.0, 2.0 * kPi);
      }
      broadband_[axis] = sigma_white_ > 0.0 ? white_rng_.normal(0.0, sigma_white_) : 0.0;
    }
  }

  Eigen::Vector3d sample(double t) {
    double dt = 0.0;
    if (have_last_t_) dt = std::max(0.0, t - last_t_);
    last_t_ = t;
    have_last_t_ = true;
    const double a = dt > 0.0 ? std::exp(-dt / kTremorWhiteTau) : 1.0;
    const double s_inc = sigma_white_ * std::sqrt(std::max(0.0, 1.0 - a * a));

    Eigen::Vector3d v;
    for (int axis = 0; axis < 3; ++axis) {
      double s = 0.0;
      for (int k = 0; k < 2; ++k)
        s += std::sin(2.0 * kPi * freq_[axis][k] * t + phase_[axis][k]);
      if (sigma_white_ > 0.0 && dt > 0.0)
        broadband_[axis] = a * broadband_[axis] + white_rng_.normal(0.0, s_inc);
      v[axis] = (amp_sin_ / std::sqrt(2.0)) * s + broadband_[axis];
    }
    return v;
  }

 private:
  double freq_[3][2];
  double phase_[3][2];
  double broadband_[3] = {0.0, 0.0, 0.0};
  double amp_sin_ = 0.0;
  double sigma_white_ = 0.0;
  double last_t_ = 0.0;
  bool have_last_t_ = false;
  Rng white_rng_;
};

struct OperatorDecision {
  Eigen::Vector3d hand_velocity = Eigen::Vector3d::Zero();  // intent, hand space
  bool press = false;  // fires once per target, after the motor latency
};

/// Closed-loop aiming process at 100 Hz: proportional velocity toward the
/// perceived target (speed-capped), commands executed after the reaction
/// delay, and a press commitment once the perceived tip stays within the
/// press threshold for the dwell time. The perceived tip is an EMA of the
/// true tip; target mislocalization enters as a per-target bias chosen by
/// the harness.
class OperatorController {
 public:
  OperatorController(const OperatorParams& params, std::uint64_t seed)
      : params_(params), tremor_(params, seed) {
    params_.validate();
    delay_ticks_ = std::max(1, static_cast<int>(std::lround(params_.reaction_delay * kOperatorRate)));
    dwell_needed_ = static_cast<int>(std::lround(kDwellTime * kOperatorRate));
  }

  /// Starts the next target; clears the dwell clock and the command queue.
  void begin_target() {
    pending_.assign(static_cast<size_t>(delay_ticks_), Eigen::Vector3d::Zero());
    dwell_count_ = 0;
    time_on_target_ = 0.0;
    press_scheduled_ = false;
    press_countdown_ = 0;
  }

  void reset(const Eigen::Vector3d& initial_tip) {
    percept_ = initial_tip;
    percept_init_ = true;
    begin_target();
  }

  /// One 100 Hz decision step. `hand_error_of` maps a world-frame tip
  /// correction to the hand displacement that produces it.
  template <typename HandMap>
  OperatorDecision update(const Eigen::Vector3d& true_tip,
                          const Eigen::Vector3d& perceived_target, double dt,
                          const HandMap& hand_error_of) {
    if (!percept_init_) {
      percept_ = true_tip;
      percept_init_ = true;
    }
    const double alpha = dt / (kPerceptTau + dt);
    percept_ += alpha * (true_tip - percept_);
    time_on_target_ += dt;

    OperatorDecision out;

    // press logic: dwell below the (patience-eased) threshold, then commit;
    // the press itself lands after one reaction delay
    const double eased = params_.press_threshold *
                         (1.0 + std::max(0.0, time_on_target_ - kImpatienceStart) * kImpatienceRate);
    const double perceived_dist = (percept_ - perceived_target).norm();
    if (!press_scheduled_) {
      dwell_count_ = perceived_dist < eased ? dwell_count_ + 1 : 0;
      if (dwell_count_ >= dwell_needed_) {
        press_scheduled_ = true;
        press_countdown_ = delay_ticks_;
      }
    } else if (--press_countdown_ <= 0) {
      out.press = true;
    }

    // proportional pursuit with speed cap, through the reaction-delay queue
    const Eigen::Vector3d hand_err = hand_error_of(perceived_target - percept_);
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    const double dist = hand_err.norm();
    if (dist > 1e-12) {
      const double speed = std::min(params_.max_hand_speed, kProportionalGain * dist);
      v = speed * hand_err / dist;
    }
    pending_.push_back(v);
    out.hand_velocity = pending_.front();
    pending_.pop_front();
    return out;
  }

  Eigen::Vector3d tremor_displacement(double t) { return tremor_.sample(t); }
  const OperatorParams& params() const { return params_; }
  double time_on_target() const { return time_on_target_; }

 private:
  OperatorParams params_;
  TremorGenerator tremor_;
  std::deque<Eigen::Vector3d> pending_;
  Eigen::Vector3d percept_ = Eigen::Vector3d::Zero();
  bool percept_init_ = false;
  int delay_ticks_ = 15;
  int dwell_needed_ = 10;
  int dwell_count_ = 0;
  double time_on_target_ = 0.0;
  bool press_scheduled_ = false;
  int press_countdown_ = 0;
};

}  // namespace rcmsim
