#pragma once

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "rcmsim/board.hpp"
#include "rcmsim/operator_model.hpp"
#include "rcmsim/rcm.hpp"
#include "rcmsim/teleop.hpp"

namespace rcmsim {

enum class Condition { kManual, kRobotic };

inline const char* condition_name(Condition c) {
  return c == Condition::kManual ? "manual" : "robotic";
}

struct ContactModel {
  double stiffness = 0.5;          // [N/mm] foam surface
  double contact_threshold = 0.5;  // [mm] counts as touching
  double damage_overshoot = 2.0;   // [mm] manual overshoot logged as damage
};

struct ManualConditionConfig {
  double handle_length = 150.0;    // d_out [mm]
  double insertion_depth = 150.0;  // d_in [mm]
};

struct RoboticConditionConfig {
  TeleopConfig teleop;
  IkParams ik;
};

struct TrialRecord {
  int operator_id = 0;
  Tier tier = Tier::kExpert;
  Condition condition = Condition::kManual;
  int target_index = 0;
  double insertion_angle = 0.0;  // [deg]
  double error = 0.0;            // [mm]
  double time = 0.0;             // [s]
  int order_position = 0;        // 0-based position in the randomized sequence
  std::uint64_t seed = 0;        // trial stream seed
  // not serialized into trials.csv:
  bool flagged = false;  // timeout or solver non-convergence
  bool damage = false;
};

struct TrialStats {
  double max_rcm_residual = 0.0;  // [mm] over converged ticks
  long long nonconverged_ticks = 0;
  long long total_ticks = 0;
  double ergonomic_cost = 0.0;  // time-averaged posture strain
  int damage_events = 0;
  int timeouts = 0;
};

struct TrialResult {
  std::vector<TrialRecord> records;
  TrialStats stats;
};

// ---------------------------------------------------------------------------
// plants

/// Manual laparoscope about a fixed fulcrum. Handle motion maps to tip
/// motion with the lever inversion: lateral components scale by
/// -(d_in/d_out), axial passes 1:1. Operator noise is additionally
/// amplified by g(theta) = 1 + k_theta * theta/30deg.
class ManualPlant {
 public:
  ManualPlant(const ManualConditionConfig& cfg, const Eigen::Vector3d& fulcrum,
              const Eigen::Vector3d& start_tip)
      : ratio_(cfg.insertion_depth / cfg.handle_length), fulcrum_(fulcrum), tip_(start_tip) {
    if (!(cfg.handle_length > 0.0) || !(cfg.insertion_depth > 0.0))
      throw std::invalid_argument("ManualPlant: lever lengths must be > 0");
  }

  void set_target(const Eigen::Vector3d& target_center, double noise_gain) {
    axial_ = (target_center - fulcrum_).normalized();
    noise_gain_ = noise_gain;
  }

  /// Tip motion produced by a handle displacement (intent channel).
  Eigen::Vector3d lever_map(const Eigen::Vector3d& handle) const {
    const Eigen::Vector3d ax = axial_ * axial_.dot(handle);
    return ax - ratio_ * (handle - ax);
  }

  /// Handle displacement that produces a desired tip displacement.
  Eigen::Vector3d lever_inverse(const Eigen::Vector3d& tip) const {
    const Eigen::Vector3d ax = axial_ * axial_.dot(tip);
    return ax - (1.0 / ratio_) * (tip - ax);
  }

  void step(const Eigen::Vector3d& handle_velocity, double dt) {
    tip_ += lever_map(handle_velocity * dt);
  }

  /// True tip including the angle-amplified tremor displacement.
  Eigen::Vector3d true_tip(const Eigen::Vector3d& tremor_handle) const {
    return tip_ + noise_gain_ * lever_map(tremor_handle);
  }

  double noise_gain() const { return noise_gain_; }

 private:
  double ratio_;
  Eigen::Vector3d fulcrum_;
  Eigen::Vector3d tip_;
  Eigen::Vector3d axial_ = -Eigen::Vector3d::UnitZ();
  double noise_gain_ = 1.0;
};

/// Teleoperated robot: master stream -> tremor filter -> clutch/scale ->
/// RCM-constrained IK (warm started) -> FK tip.
class RoboticPlant {
 public:
  RoboticPlant(const RoboticConditionConfig& cfg, const Workcell& cell)
      : cfg_(cfg),
        cell_(cell),
        pipeline_(cell.ready_tip, cfg.teleop),
        state_(cell.ready_state),
        tick_(0) {}

  struct TickOutput {
    Eigen::Vector3d tip;
    double rcm_residual = 0.0;
    bool converged = true;
  };

  TickOutput step(const Eigen::Vector3d& master_position, bool press) {
    MasterSample sample;
    sample.t = static_cast<double>(tick_) / cfg_.teleop.sample_rate;
    sample.position = master_position;
    sample.orientation = Eigen::Quaterniond::Identity();
    sample.clutch_engaged = true;
    sample.contact_press = press;
    ++tick_;

    const Pose target = pipeline_.step(sample);
    const IkResult r = solve_ik(cell_.chain, state_, target, cell_.constraint, cfg_.ik);
    state_ = r.state;

    TickOutput out;
    out.converged = r.converged;
    const FkResult fk = forward_kinematics(cell_.chain, state_.q);
    out.tip = fk.instrument.tip;
    out.rcm_residual = (cell_.constraint.fulcrum -
                        (fk.instrument.shaft_proximal +
                         state_.lambda * (fk.instrument.shaft_distal - fk.instrument.shaft_proximal)))
                           .norm();
    return out;
  }

  const FullState& state() const { return state_; }
  double scale() const { return cfg_.teleop.scale; }

 private:
  RoboticConditionConfig cfg_;
  Workcell cell_;
  TeleopPipeline pipeline_;
  FullState state_;
  long long tick_;
};

// ---------------------------------------------------------------------------
// posture-strain proxies

/// Time-average of the joint-centering objective over a joint trajectory;
/// the robotic stand-in for a discomfort score.
inline double ergonomic_cost(const KinematicChain& chain, const std::vector<JointVector>& traj) {
  if (traj.empty()) throw std::invalid_argument("ergonomic_cost: empty trajectory");
  double acc = 0.0;
  for (const JointVector& q : traj) acc += nullspace_objective_grad(chain, q).value;
  return acc / static_cast<double>(traj.size());
}

/// Equivalent strain for the hand-held laparoscope, on its 4-DOF pivot
/// chain (pitch/yaw about the trocar, insertion, roll). Same quadratic
/// form, documented proxy.
inline double manual_posture_strain(const Eigen::Vector3d& tip, const Eigen::Vector3d& fulcrum) {
  const Eigen::Vector3d d = tip - fulcrum;
  const double down = -d.z();
  if (down <= 1e-9) return 1.0;  // horizontal or above: worst-case posture
  const double pitch_x = std::atan2(d.x(), down);
  const double pitch_y = std::atan2(d.y(), down);
  const double half_tilt = deg2rad(60.0);
  const double insertion = (d.norm() - 150.0) / 150.0;
  return (pitch_x / half_tilt) * (pitch_x / half_tilt) +
         (pitch_y / half_tilt) * (pitch_y / half_tilt) + insertion * insertion;
}

// ---------------------------------------------------------------------------
// trial runner

struct TrialSetup {
  int operator_id = 0;
  OperatorParams op;
  Condition condition = Condition::kManual;
  ManualConditionConfig manual;
  RoboticConditionConfig robotic;
  ContactModel contact;
  std::uint64_t seed = 0;  // trial stream seed (already derived per trial)
  std::ostream* trace = nullptr;
};

inline constexpr double kTargetTimeout = 60.0;  // [s] per target

namespace detail {
inline std::array<int, TargetBoard::kNumTargets> target_order(std::uint64_t seed) {
  std::array<int, TargetBoard::kNumTargets> order;
  for (int i = 0; i < TargetBoard::kNumTargets; ++i) order[i] = i;
  Rng rng(derive_seed(seed, "target-order"));
  rng.shuffle(order.begin(), order.end());
  return order;
}
}  // namespace detail

/// Runs one operator through the ten targets of one condition. Deterministic
/// in (setup, board): all randomness comes from named substreams of
/// setup.seed.
inline TrialResult run_trial(const TrialSetup& setup, const TargetBoard& board,
                             const Workcell& cell) {
  TrialResult out;
  out.records.reserve(TargetBoard::kNumTargets);

  const double dt = 1.0 / kSimRate;
  const double dt_op = 1.0 / kOperatorRate;
  const bool robotic = setup.condition == Condition::kRobotic;

  OperatorController op(setup.op, derive_seed(setup.seed, "operator"));
  Rng percept_rng(derive_seed(setup.seed, "perception"));

  std::optional<ManualPlant> manual;
  std::optional<RoboticPlant> robot;
  if (robotic) robot.emplace(setup.robotic, cell);
  else manual.emplace(setup.manual, board.fulcrum, cell.ready_tip.position);

  Eigen::Vector3d hand_intent = Eigen::Vector3d::Zero();  // integral of executed intent
  Eigen::Vector3d true_tip = cell.ready_tip.position;
  op.reset(true_tip);

  const auto order = detail::target_order(setup.seed);
  long long tick = 0;
  double strain_acc = 0.0;

  for (int pos = 0; pos < TargetBoard::kNumTargets; ++pos) {
    const int target_index = order[pos];
    const Target& target = board.targets[target_index];
    const double g = angle_noise_gain(target.insertion_angle, setup.op.angle_sensitivity);
    const double bias_gain = robotic ? 1.0 : g;

    // per-target perceived-target mislocalization (sigma_p per axis)
    const Eigen::Vector3d bias =
        bias_gain * setup.op.perception_noise *
        Eigen::Vector3d(percept_rng.normal(), percept_rng.normal(), percept_rng.normal());
    const Eigen::Vector3d perceived_target = target.center + bias;
    const Eigen::Vector3d axial = (target.center - board.fulcrum).normalized();

    if (!robotic) manual->set_target(target.center, g);
    op.begin_target();

    const long long start_tick = tick;
    Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
    bool damage_this_target = false;
    bool done = false;

    TrialRecord rec;
    rec.operator_id = setup.operator_id;
    rec.tier = setup.op.tier;
    rec.condition = setup.condition;
    rec.target_index = target_index;
    rec.insertion_angle = target.insertion_angle;
    rec.order_position = pos;
    rec.seed = setup.seed;

    while (!done) {
      const double t = static_cast<double>(tick) * dt;
      const double elapsed = static_cast<double>(tick - start_tick) * dt;
      bool press_now = false;

      if ((tick - start_tick) % kTicksPerDecision == 0) {
        const auto hand_error_of = [&](const Eigen::Vector3d& tip_correction) {
          return robotic ? Eigen::Vector3d(robot->scale() * tip_correction)
                         : manual->lever_inverse(tip_correction);
        };
        const OperatorDecision d = op.update(true_tip, perceived_target, dt_op, hand_error_of);
        velocity = d.hand_velocity;
        press_now = d.press;
      }

      hand_intent += velocity * dt;
      const Eigen::Vector3d tremor = op.tremor_displacement(t);

      if (robotic) {
        const auto tick_out = robot->step(hand_intent + tremor, press_now);
        true_tip = tick_out.tip;
        if (tick_out.converged)
          out.stats.max_rcm_residual = std::max(out.stats.max_rcm_residual, tick_out.rcm_residual);
        else {
          ++out.stats.nonconverged_ticks;
          rec.flagged = true;
        }
        strain_acc += nullspace_objective_grad(cell.chain, robot->state().q).value;

        const double penetration = (true_tip - target.center).dot(axial);
        const double force = setup.contact.stiffness * std::max(0.0, penetration);
        if (force_alert(force, setup.robotic.teleop) && !damage_this_target) {
          damage_this_target = true;
          ++out.stats.damage_events;
        }
      } else {
        manual->step(velocity, dt);
        true_tip = manual->true_tip(tremor);
        strain_acc += manual_posture_strain(true_tip, board.fulcrum);

        const double penetration = (true_tip - target.center).dot(axial);
        if (penetration > setup.contact.damage_overshoot && !damage_this_target) {
          damage_this_target = true;
          ++out.stats.damage_events;
        }
      }

      if (setup.trace && tick % 10 == 0)
        (*setup.trace) << t << ',' << target_index << ',' << true_tip.x() << ',' << true_tip.y()
                       << ',' << true_tip.z() << '\n';

      ++tick;
      ++out.stats.total_ticks;

      if (press_now) {
        rec.error = (true_tip - target.center).norm();
        rec.time = elapsed + dt;
        done = true;
      } else if (elapsed + dt >= kTargetTimeout) {
        rec.error = (true_tip - target.center).norm();
        rec.time = kTargetTimeout;
        rec.flagged = true;
        ++out.stats.timeouts;
        done = true;
      }
    }

    rec.damage = damage_this_target;
    out.records.push_back(rec);
  }

  out.stats.ergonomic_cost =
      out.stats.total_ticks > 0 ? strain_acc / static_cast<double>(out.stats.total_ticks) : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// experiment runner

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::uint64_t board_seed = 1;
  int n_experts = 5;
  int n_novices = 5;
  OperatorParams expert = expert_defaults();
  OperatorParams novice = novice_defaults();
  ManualConditionConfig manual;
  RoboticConditionConfig robotic;
  ContactModel contact;
  int threads = 0;  // 0: RCMSIM_THREADS or hardware_concurrency
  std::string trace_dir;  // per-trial trace CSVs when non-empty
};

struct ConditionSummary {
  double mean_error = 0.0;
  double total_time = 0.0;
  double ergonomic_cost = 0.0;
  int damage_events = 0;
};

struct OperatorSummary {
  int operator_id = 0;
  Tier tier = Tier::kExpert;
  bool robotic_first = false;  // crossover bookkeeping
  ConditionSummary manual;
  ConditionSummary robotic;
};

struct Dataset {
  std::vector<TrialRecord> records;
  std::vector<OperatorSummary> summaries;
  TargetBoard board;
  TrialStats aggregate;  // summed robotic solver stats, all damage/timeouts
};

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RCMSIM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs every operator through both conditions (crossover order alternates
/// across operators). Trials execute in parallel when allowed; output
/// ordering and all random streams are independent of the schedule.
inline Dataset run_experiment(const ExperimentConfig& cfg) {
  if (cfg.n_experts + cfg.n_novices < 1)
    throw std::invalid_argument("run_experiment: need at least one operator");
  cfg.expert.validate();
  cfg.novice.validate();
  cfg.robotic.teleop.validate();
  cfg.robotic.ik.validate();

  const Workcell cell = make_workcell();
  Dataset out;
  out.board = generate_board(cfg.board_seed, cell.constraint.fulcrum);

  struct Job {
    TrialSetup setup;
    TrialResult result;
  };
  std::vector<Job> jobs;
  const int n_ops = cfg.n_experts + cfg.n_novices;
  for (int id = 0; id < n_ops; ++id) {
    const bool expert = id < cfg.n_experts;
    for (Condition cond : {Condition::kManual, Condition::kRobotic}) {
      Job j;
      j.setup.operator_id = id;
      j.setup.op = expert ? cfg.expert : cfg.novice;
      j.setup.op.tier = expert ? Tier::kExpert : Tier::kNovice;
      j.setup.condition = cond;
      j.setup.manual = cfg.manual;
      j.setup.robotic = cfg.robotic;
      j.setup.contact = cfg.contact;
      j.setup.seed = derive_seed(cfg.seed, "trial", static_cast<std::uint64_t>(id),
                                 cond == Condition::kRobotic ? 1 : 0);
      jobs.push_back(std::move(j));
    }
  }

  const int n_threads = std::min<int>(resolve_threads(cfg.threads), static_cast<int>(jobs.size()));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      std::ofstream trace_file;
      if (!cfg.trace_dir.empty()) {
        trace_file.open(cfg.trace_dir + "/trace_op" + std::to_string(jobs[i].setup.operator_id) +
                        "_" + condition_name(jobs[i].setup.condition) + ".csv");
        trace_file << "t,target_index,tip_x,tip_y,tip_z\n";
        jobs[i].setup.trace = &trace_file;
      }
      jobs[i].result = run_trial(jobs[i].setup, out.board, cell);
      jobs[i].setup.trace = nullptr;
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // canonical order: (operator, condition, target)
  for (int id = 0; id < n_ops; ++id) {
    OperatorSummary s;
    s.operator_id = id;
    s.tier = id < cfg.n_experts ? Tier::kExpert : Tier::kNovice;
    s.robotic_first = (id % 2 == 0);
    out.summaries.push_back(s);
  }
  for (auto& j : jobs) {
    OperatorSummary& s = out.summaries[static_cast<size_t>(j.setup.operator_id)];
    ConditionSummary& c =
        j.setup.condition == Condition::kManual ? s.manual : s.robotic;
    double err = 0.0;
    for (const TrialRecord& r : j.result.records) {
      err += r.error;
      c.total_time += r.time;
    }
    c.mean_error = err / static_cast<double>(j.result.records.size());
    c.ergonomic_cost = j.result.stats.ergonomic_cost;
    c.damage_events = j.result.stats.damage_events;

    out.aggregate.max_rcm_residual =
        std::max(out.aggregate.max_rcm_residual, j.result.stats.max_rcm_residual);
    out.aggregate.nonconverged_ticks += j.result.stats.nonconverged_ticks;
    if (j.setup.condition == Condition::kRobotic)
      out.aggregate.total_ticks += j.result.stats.total_ticks;
    out.aggregate.damage_events += j.result.stats.damage_events;
    out.aggregate.timeouts += j.result.stats.timeouts;

    for (TrialRecord& r : j.result.records) out.records.push_back(r);
  }
  std::sort(out.records.begin(), out.records.end(), [](const TrialRecord& a, const TrialRecord& b) {
    if (a.operator_id != b.operator_id) return a.operator_id < b.operator_id;
    if (a.condition != b.condition) return a.condition < b.condition;
    return a.target_index < b.target_index;
  });
  return out;
}

}  // namespace rcmsim
