#pragma once

#include <cstdint>
#include <numbers>
#include <variant>
#include <vector>

#include "bnswarm/bn.hpp"
#include "bnswarm/controllers.hpp"
#include "bnswarm/errors.hpp"
#include "bnswarm/survival.hpp"

namespace bnswarm {

struct ArenaConfig {
  double arena_radius = 0.45;       // m
  double target_radius = 0.015;     // m
  double detection_distance = 0.03; // m, clearance between robot centre and
                                    // the target disc's edge
  int robot_count = 20;
  double trial_duration = 3000.0;   // s
  int ticks_per_second = 32;
  double bias_mean = 0.00015;       // m/s, constant offset on the right wheel
  double bias_std = 0.00270;        // m/s
  // Calibration constants with no published values: collision footprint of a
  // robot and the track width used by the differential-drive kinematics.
  double body_radius = 0.0165;      // m
  double wheel_base = 0.025;        // m
  double linear_speed = 0.01;       // m/s during straight motion
  double rotation_speed = std::numbers::pi / 4.0;  // rad/s turning in place
};

// Throws ConfigError on nonsense values (non-positive lengths, detection
// range smaller than the target, robots that cannot fit in the arena).
void validate(const ArenaConfig& config);

struct LmcrwSpec {
  LmcrwParams params;
  LevyConfig levy;
};

struct BnSpec {
  BooleanNetwork topology;  // its state vector is ignored
  // When non-empty, entry r holds the initial node states robot r uses in
  // every trial; must have exactly robot_count entries. When empty each robot
  // draws a fresh random state per trial from its own stream.
  std::vector<std::vector<std::uint8_t>> fixed_states;
};

using ControllerSpec = std::variant<LmcrwSpec, BnSpec>;

// Fast is the production engine (incremental heading-vector rotation,
// trigonometry only at phase boundaries); Reference recomputes the heading
// trigonometry every tick and exists as the plain-reading baseline the fast
// engine is checked against.
enum class Engine { Fast, Reference };

struct CommandLogEntry {
  int robot = 0;
  std::int64_t tick = 0;  // tick index at which the command was pulled
  double turn_angle = 0.0;
  std::int64_t straight_ticks = 0;
};

struct TrialRecord {
  std::vector<double> first_passage;   // s; NaN where censored
  std::vector<std::uint8_t> censored;  // 1 = never reached the target
  double target_x = 0.0;
  double target_y = 0.0;
  std::uint64_t seed = 0;
  double straight_sum_s = 0.0;        // commanded straight seconds, summed
  std::int64_t straight_count = 0;    // number of commands pulled
  std::vector<CommandLogEntry> commands;  // populated when log_commands is set
};

struct TrialOptions {
  Engine engine = Engine::Fast;
  bool log_commands = false;
};

// One deterministic trial. All randomness (placement, per-robot wheel bias,
// initial network states, command streams) derives from trial_seed.
TrialRecord run_trial(const ArenaConfig& config, const ControllerSpec& spec,
                      std::uint64_t trial_seed, const TrialOptions& options = {});

// Trial farm: trial t runs with seed derive_seed(eval_seed, kTrial, t).
// Trials execute in parallel when OpenMP is enabled; records are returned in
// trial order either way.
std::vector<TrialRecord> run_trials(const ArenaConfig& config, const ControllerSpec& spec,
                                    std::uint64_t eval_seed, int count,
                                    const TrialOptions& options = {});

// Pools the first-passage data of a batch; censored robots enter as censored
// observations at trial_duration.
std::vector<Observation> to_observations(const std::vector<TrialRecord>& records,
                                         double trial_duration);

// Mean commanded straight duration in seconds over every decision point of a
// batch. Throws std::invalid_argument when no command was ever pulled.
double mean_straight_duration(const std::vector<TrialRecord>& records);

// Pieces exposed for direct testing.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

// Euler step of the differential-drive kinematics: the heading advances
// first, then the position moves along the new heading.
Pose differential_step(const Pose& pose, double v_left, double v_right,
                       double wheel_base, double dt);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Positional contact resolution: robots outside the wall limit are projected
// radially onto it, overlapping pairs are pushed apart symmetrically along
// their centre line. Repeats until corrections fall below 1e-6 m (at most 8
// passes), then enforces the wall exactly. Headings are untouched.
void resolve_collisions(std::vector<Vec2>& positions, double body_radius,
                        double arena_radius);

}  // namespace bnswarm
