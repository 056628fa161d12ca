#include "bnswarm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <memory>
#include <numbers>

namespace bnswarm {

void validate(const ArenaConfig& c) {
  const bool lengths_ok = c.arena_radius > 0.0 && c.target_radius > 0.0 &&
                          c.detection_distance > 0.0 && c.body_radius > 0.0 &&
                          c.wheel_base > 0.0;
  if (!lengths_ok) throw ConfigError("arena: all lengths must be positive");
  if (c.trial_duration <= 0.0) throw ConfigError("arena: trial_duration must be > 0");
  if (c.ticks_per_second < 1) throw ConfigError("arena: ticks_per_second must be >= 1");
  if (c.robot_count < 1) throw ConfigError("arena: robot_count must be >= 1");
  if (c.body_radius >= c.arena_radius) {
    throw ConfigError("arena: robots do not fit inside the arena");
  }
  if (c.bias_std < 0.0) throw ConfigError("arena: bias_std must be >= 0");
  if (c.linear_speed <= 0.0 || c.rotation_speed <= 0.0) {
    throw ConfigError("arena: speeds must be positive");
  }
}

Pose differential_step(const Pose& pose, double v_left, double v_right,
                       double wheel_base, double dt) {
  const double v = 0.5 * (v_left + v_right);
  const double omega = (v_right - v_left) / wheel_base;
  Pose next;
  next.heading = pose.heading + omega * dt;
  next.x = pose.x + v * dt * std::cos(next.heading);
  next.y = pose.y + v * dt * std::sin(next.heading);
  return next;
}

void resolve_collisions(std::vector<Vec2>& positions, double body_radius,
                        double arena_radius) {
  constexpr double kTolerance = 1e-6;
  const double wall_limit = arena_radius - body_radius;
  const double wall_limit_sq = wall_limit * wall_limit;
  const double min_dist = 2.0 * body_radius;
  const double min_dist_sq = min_dist * min_dist;
  const std::size_t n = positions.size();

  for (int pass = 0; pass < 8; ++pass) {
    double max_correction = 0.0;
    for (auto& p : positions) {
      const double d_sq = p.x * p.x + p.y * p.y;
      if (d_sq > wall_limit_sq) {
        const double d = std::sqrt(d_sq);
        max_correction = std::max(max_correction, d - wall_limit);
        const double s = wall_limit / d;
        p.x *= s;
        p.y *= s;
      }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = positions[j].x - positions[i].x;
        const double dy = positions[j].y - positions[i].y;
        const double d_sq = dx * dx + dy * dy;
        if (d_sq >= min_dist_sq) continue;
        double ux = 1.0, uy = 0.0;  // coincident centres separate along x
        double d = 0.0;
        if (d_sq > 0.0) {
          d = std::sqrt(d_sq);
          ux = dx / d;
          uy = dy / d;
        }
        const double half = 0.5 * (min_dist - d);
        positions[i].x -= ux * half;
        positions[i].y -= uy * half;
        positions[j].x += ux * half;
        positions[j].y += uy * half;
        max_correction = std::max(max_correction, half);
      }
    }
    if (max_correction < kTolerance) break;
  }
  // The last pair push may have nudged someone past the wall; make the wall
  // bound exact.
  for (auto& p : positions) {
    const double d_sq = p.x * p.x + p.y * p.y;
    if (d_sq > wall_limit_sq) {
      const double s = wall_limit / std::sqrt(d_sq);
      p.x *= s;
      p.y *= s;
    }
  }
}

namespace {

Vec2 sample_in_disk(Rng& rng, double radius) {
  for (;;) {
    const double x = rng.uniform(-radius, radius);
    const double y = rng.uniform(-radius, radius);
    if (x * x + y * y <= radius * radius) return Vec2{x, y};
  }
}

// Per-robot integrator state. The fast engine keeps the heading as a unit
// vector and rotates it incrementally by each tick's small wheel-differential
// angle, so the trigonometric argument stays near zero instead of growing
// with the accumulated heading. The heading accumulator is still advanced
// arithmetically so both engines agree on what the heading "is".
struct EngineState {
  double heading = 0.0;
  double ux = 1.0, uy = 0.0;
};

// Box-Muller with the spare draw kept, since the actuator noise consumes one
// Gaussian per robot on every driven tick.
struct GaussStream {
  Rng rng;
  double spare = 0.0;
  bool has_spare = false;

  explicit GaussStream(std::uint64_t seed) : rng(seed) {}

  double next(double mean, double stddev) {
    if (has_spare) {
      has_spare = false;
      return mean + stddev * spare;
    }
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare = radius * std::sin(angle);
    has_spare = true;
    return mean + stddev * radius * std::cos(angle);
  }
};

}  // namespace

TrialRecord run_trial(const ArenaConfig& config, const ControllerSpec& spec,
                      std::uint64_t trial_seed, const TrialOptions& options) {
  validate(config);
  const int robots = config.robot_count;
  const double dt = 1.0 / config.ticks_per_second;
  const bool fast = options.engine == Engine::Fast;

  TrialRecord record;
  record.seed = trial_seed;
  record.first_passage.assign(robots, std::numeric_limits<double>::quiet_NaN());
  record.censored.assign(robots, 1);

  // Placement stream: target first, then each robot's position (rejecting
  // overlaps with the ones already placed) followed by its heading.
  Rng place(derive_seed(trial_seed, seed_tag::kPlacement));
  const Vec2 target = sample_in_disk(place, config.arena_radius - config.target_radius);
  record.target_x = target.x;
  record.target_y = target.y;

  std::vector<Vec2> pos(robots);
  std::vector<EngineState> engine(robots);
  const double placement_radius = config.arena_radius - config.body_radius;
  const double min_dist_sq = 4.0 * config.body_radius * config.body_radius;
  for (int r = 0; r < robots; ++r) {
    bool placed = false;
    for (int attempt = 0; attempt < 100000 && !placed; ++attempt) {
      const Vec2 candidate = sample_in_disk(place, placement_radius);
      placed = true;
      for (int q = 0; q < r; ++q) {
        const double dx = candidate.x - pos[q].x;
        const double dy = candidate.y - pos[q].y;
        if (dx * dx + dy * dy < min_dist_sq) {
          placed = false;
          break;
        }
      }
      if (placed) pos[r] = candidate;
    }
    if (!placed) throw ConfigError("run_trial: could not place robots without overlap");
    engine[r].heading = place.uniform(-std::numbers::pi, std::numbers::pi);
    engine[r].ux = std::cos(engine[r].heading);
    engine[r].uy = std::sin(engine[r].heading);
  }

  // Actuator noise: every driven tick adds a fresh Gaussian to the right
  // wheel's commanded speed. One stream per robot, so a robot's draws depend
  // only on its own history and the engines consume identical sequences.
  std::vector<GaussStream> noise;
  noise.reserve(robots);
  for (int r = 0; r < robots; ++r) {
    noise.emplace_back(derive_seed(trial_seed, seed_tag::kBias, r));
  }

  std::vector<std::unique_ptr<Controller>> controllers(robots);
  if (const auto* lmcrw = std::get_if<LmcrwSpec>(&spec)) {
    for (int r = 0; r < robots; ++r) {
      controllers[r] = std::make_unique<LmcrwController>(lmcrw->params, lmcrw->levy);
    }
  } else {
    const auto& bn_spec = std::get<BnSpec>(spec);
    const int n = bn_spec.topology.size();
    if (!bn_spec.fixed_states.empty() &&
        static_cast<int>(bn_spec.fixed_states.size()) != robots) {
      throw ConfigError("run_trial: fixed_states must have one entry per robot");
    }
    for (int r = 0; r < robots; ++r) {
      BooleanNetwork net = bn_spec.topology;
      if (bn_spec.fixed_states.empty()) {
        Rng init(derive_seed(trial_seed, seed_tag::kBnInit, r));
        std::vector<std::uint8_t> states(n);
        for (auto& s : states) s = static_cast<std::uint8_t>(init.below(2));
        net.set_states(states);
      } else {
        net.set_states(bn_spec.fixed_states[r]);
      }
      controllers[r] = std::make_unique<BnController>(std::move(net));
    }
  }

  std::vector<Rng> command_rng;
  command_rng.reserve(robots);
  std::vector<MotionPhase> phase;
  phase.reserve(robots);
  for (int r = 0; r < robots; ++r) {
    command_rng.emplace_back(derive_seed(trial_seed, seed_tag::kController, r));
    phase.emplace_back(config.linear_speed, config.rotation_speed, config.wheel_base,
                       config.ticks_per_second);
  }

  // "Closer than 3 cm" is clearance between the robot's centre and the target
  // disc, so the centre-to-centre threshold adds the target radius.
  const double detect_range = config.detection_distance + config.target_radius;
  const double detect_sq = detect_range * detect_range;
  int found = 0;
  const auto check_detection = [&](int r, double t) {
    const double dx = pos[r].x - target.x;
    const double dy = pos[r].y - target.y;
    if (dx * dx + dy * dy <= detect_sq) {
      record.first_passage[r] = t;
      record.censored[r] = 0;
      ++found;
    }
  };
  // A robot that starts within range scores at the first tick.
  for (int r = 0; r < robots; ++r) check_detection(r, dt);

  const auto total_ticks =
      static_cast<std::int64_t>(std::llround(config.trial_duration * config.ticks_per_second));

  const double wall_limit = config.arena_radius - config.body_radius;
  const double wall_sq = wall_limit * wall_limit;
  const double touch_eps = wall_limit - 1e-9;
  const double touch_sq = touch_eps * touch_eps;

  for (std::int64_t tick = 1; tick <= total_ticks && found < robots; ++tick) {
    for (int r = 0; r < robots; ++r) {
      std::optional<MotionCommand> pulled;
      const MotionPhase::Wheels w = phase[r].tick(*controllers[r], command_rng[r], &pulled);
      if (pulled) {
        record.straight_sum_s +=
            static_cast<double>(pulled->straight_ticks) / config.ticks_per_second;
        ++record.straight_count;
        if (options.log_commands) {
          record.commands.push_back(
              CommandLogEntry{r, tick, pulled->turn_angle, pulled->straight_ticks});
        }
      }
      if (w.left == 0.0 && w.right == 0.0) continue;  // parked: motors off, no noise

      EngineState& es = engine[r];
      const double v_right = w.right + noise[r].next(config.bias_mean, config.bias_std);
      double step_x, step_y;
      if (fast) {
        const double omega_dt = (v_right - w.left) / config.wheel_base * dt;
        const double v_dt = 0.5 * (w.left + v_right) * dt;
        es.heading += omega_dt;
        // Per-tick angles are a few milliradians (centimetre-per-second
        // wheels, 1/32 s ticks), so a short Maclaurin series matches libm to
        // the last bit; outlandish configs fall back to the real thing.
        double cos_w, sin_w;
        const double x2 = omega_dt * omega_dt;
        if (x2 < 0.01) {
          sin_w = omega_dt *
                  (1.0 - x2 * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 / 5040.0)));
          cos_w = 1.0 - x2 * (0.5 - x2 * (1.0 / 24.0 -
                                          x2 * (1.0 / 720.0 - x2 / 40320.0)));
        } else {
          sin_w = std::sin(omega_dt);
          cos_w = std::cos(omega_dt);
        }
        const double nx = es.ux * cos_w - es.uy * sin_w;
        es.uy = es.ux * sin_w + es.uy * cos_w;
        es.ux = nx;
        step_x = v_dt * es.ux;
        step_y = v_dt * es.uy;
      } else {
        const Pose next = differential_step(Pose{pos[r].x, pos[r].y, es.heading}, w.left,
                                            v_right, config.wheel_base, dt);
        step_x = next.x - pos[r].x;
        step_y = next.y - pos[r].y;
        es.heading = next.heading;
      }

      // Wall contact pins the robot: pressing the boundary while still headed
      // outward cancels the translation (rotation stays free), so a robot only
      // gets away from the wall once its heading swings back inside. First
      // contact from the interior lands exactly on the limit circle.
      const double cand_x = pos[r].x + step_x;
      const double cand_y = pos[r].y + step_y;
      if (cand_x * cand_x + cand_y * cand_y > wall_sq) {
        const bool touching =
            pos[r].x * pos[r].x + pos[r].y * pos[r].y >= touch_sq;
        const bool outward = step_x * pos[r].x + step_y * pos[r].y > 0.0;
        if (!touching || !outward) {
          const double scale = wall_limit / std::hypot(cand_x, cand_y);
          pos[r].x = cand_x * scale;
          pos[r].y = cand_y * scale;
        }
      } else {
        pos[r].x = cand_x;
        pos[r].y = cand_y;
      }
    }

    resolve_collisions(pos, config.body_radius, config.arena_radius);

    const double t = static_cast<double>(tick) * dt;
    for (int r = 0; r < robots; ++r) {
      if (record.censored[r]) check_detection(r, t);
    }
  }
  return record;
}

std::vector<TrialRecord> run_trials(const ArenaConfig& config, const ControllerSpec& spec,
                                    std::uint64_t eval_seed, int count,
                                    const TrialOptions& options) {
  std::vector<TrialRecord> out(count);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < count; ++t) {
    try {
      out[t] = run_trial(config, spec, derive_seed(eval_seed, seed_tag::kTrial, t), options);
    } catch (...) {
#pragma omp critical
      {
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<Observation> to_observations(const std::vector<TrialRecord>& records,
                                         double trial_duration) {
  std::vector<Observation> data;
  for (const auto& record : records) {
    for (std::size_t r = 0; r < record.censored.size(); ++r) {
      if (record.censored[r]) {
        data.push_back(Observation{trial_duration, true});
      } else {
        data.push_back(Observation{record.first_passage[r], false});
      }
    }
  }
  return data;
}

double mean_straight_duration(const std::vector<TrialRecord>& records) {
  double sum = 0.0;
  std::int64_t count = 0;
  for (const auto& record : records) {
    sum += record.straight_sum_s;
    count += record.straight_count;
  }
  if (count == 0) throw std::invalid_argument("mean_straight_duration: no commands logged");
  return sum / static_cast<double>(count);
}

}  // namespace bnswarm
