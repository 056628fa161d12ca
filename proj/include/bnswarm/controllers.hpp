#pragma once

#include <cstdint>
#include <optional>

#include "bnswarm/bn.hpp"
#include "bnswarm/rng.hpp"

namespace bnswarm {

struct LmcrwParams {
  double rho = 0.75;   // wrapped-Cauchy concentration, in [0, 1]
  double alpha = 1.8;  // stability exponent, in (0, 2]
};

// Conversion of a raw stable draw into straight-motion ticks. scale_ticks is
// a calibration constant (the median of |X| is close to 1 across the alpha
// range, so 128 ticks puts the median commanded run at four seconds, a few
// body lengths of travel); max_ticks matches the widest network decode range
// so both controller families face the same physical cap.
struct LevyConfig {
  double scale_ticks = 128.0;
  std::int64_t max_ticks = std::int64_t{1} << 15;
};

// Draw from the wrapped Cauchy distribution with mode 0 (inverse-CDF method).
// rho = 0 is uniform on (-pi, pi), rho = 1 returns exactly 0.
double sample_wrapped_cauchy(double rho, Rng& rng);

// Symmetric alpha-stable draw (Chambers-Mallows-Stuck). At alpha = 2 this is
// Normal(0, sqrt(2)); smaller alpha gives tails P(|X| > x) ~ x^-alpha.
double sample_stable(double alpha, Rng& rng);

// |stable| scaled to ticks and clamped to [1, max_ticks].
std::int64_t sample_levy_ticks(double alpha, const LevyConfig& levy, Rng& rng);

// One decision of the baseline walker: angle first, then run length.
MotionCommand lmcrw_next(const LmcrwParams& params, const LevyConfig& levy, Rng& rng);

// One decision of the network walker: decode the current state, then advance
// the network one synchronous step. The initial state's command is the first
// one emitted.
MotionCommand bn_next(BooleanNetwork& net);

// Per-robot command source. next() may consume the robot's command stream
// (LMCRW) or none at all (network controller).
class Controller {
 public:
  virtual ~Controller() = default;
  virtual MotionCommand next(Rng& rng) = 0;
};

class LmcrwController final : public Controller {
 public:
  LmcrwController(const LmcrwParams& params, const LevyConfig& levy);
  MotionCommand next(Rng& rng) override;

 private:
  LmcrwParams params_;
  LevyConfig levy_;
};

class BnController final : public Controller {
 public:
  explicit BnController(BooleanNetwork net) : net_(std::move(net)) {}
  MotionCommand next(Rng& rng) override;
  const BooleanNetwork& network() const noexcept { return net_; }

 private:
  BooleanNetwork net_;
};

// Turn-then-run state machine. Each tick yields wheel speeds; a new command
// is pulled at most once per tick, when both phase counters are exhausted.
// A (0, 0) command therefore parks the robot for exactly one tick.
class MotionPhase {
 public:
  struct Wheels {
    double left = 0.0;
    double right = 0.0;
  };

  enum class Phase { Rotating, MovingStraight, Stopped };

  MotionPhase(double linear_speed, double rotation_speed, double wheel_base,
              int ticks_per_second);

  // Advance one control tick. When a fresh command is pulled it is also
  // reported through *pulled (command logging, straight-duration statistic);
  // the pointer may be null.
  Wheels tick(Controller& controller, Rng& rng,
              std::optional<MotionCommand>* pulled = nullptr);

  Phase phase() const noexcept { return phase_; }
  std::int64_t rotation_ticks_for(double turn_angle) const;

 private:
  double linear_speed_;
  double rotation_speed_;  // rad/s while turning in place
  double wheel_half_speed_;
  int ticks_per_second_;
  std::int64_t rotate_remaining_ = 0;
  std::int64_t straight_remaining_ = 0;
  double rotate_sign_ = 1.0;
  Phase phase_ = Phase::Stopped;
};

}  // namespace bnswarm
