#include "bnswarm/controllers.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bnswarm {

namespace {
constexpr double kPi = std::numbers::pi;
}

double sample_wrapped_cauchy(double rho, Rng& rng) {
  if (rho < 0.0 || rho > 1.0) {
    throw std::invalid_argument("sample_wrapped_cauchy: rho must be in [0, 1]");
  }
  const double u = rng.uniform01();
  if (rho == 1.0) return 0.0;  // degenerate: ballistic heading persistence
  // Inverse CDF of the zero-mode wrapped Cauchy: tan(theta/2) spreads by the
  // factor (1 - rho) / (1 + rho).
  return 2.0 * std::atan((1.0 - rho) / (1.0 + rho) * std::tan(kPi * (u - 0.5)));
}

double sample_stable(double alpha, Rng& rng) {
  if (!(alpha > 0.0) || alpha > 2.0) {
    throw std::invalid_argument("sample_stable: alpha must be in (0, 2]");
  }
  const double v = kPi * (rng.uniform01() - 0.5);  // uniform on (-pi/2, pi/2)
  const double w = rng.exponential();
  if (std::abs(alpha - 1.0) < 1e-12) return std::tan(v);  // Cauchy case
  const double av = alpha * v;
  return std::sin(av) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos(v - av) / w, (1.0 - alpha) / alpha);
}

std::int64_t sample_levy_ticks(double alpha, const LevyConfig& levy, Rng& rng) {
  if (levy.max_ticks < 1) throw std::invalid_argument("sample_levy_ticks: max_ticks < 1");
  const double raw = std::abs(sample_stable(alpha, rng)) * levy.scale_ticks;
  const auto ticks = static_cast<std::int64_t>(std::llround(std::min(
      raw, static_cast<double>(levy.max_ticks))));
  return std::clamp<std::int64_t>(ticks, 1, levy.max_ticks);
}

MotionCommand lmcrw_next(const LmcrwParams& params, const LevyConfig& levy, Rng& rng) {
  MotionCommand cmd;
  cmd.turn_angle = sample_wrapped_cauchy(params.rho, rng);
  cmd.straight_ticks = sample_levy_ticks(params.alpha, levy, rng);
  return cmd;
}

MotionCommand bn_next(BooleanNetwork& net) {
  const MotionCommand cmd = net.decode_motion();
  net.step();
  return cmd;
}

LmcrwController::LmcrwController(const LmcrwParams& params, const LevyConfig& levy)
    : params_(params), levy_(levy) {
  if (params.rho < 0.0 || params.rho > 1.0 || !(params.alpha > 0.0) || params.alpha > 2.0) {
    throw std::invalid_argument("LmcrwController: parameters out of range");
  }
}

MotionCommand LmcrwController::next(Rng& rng) { return lmcrw_next(params_, levy_, rng); }

MotionCommand BnController::next(Rng&) { return bn_next(net_); }

MotionPhase::MotionPhase(double linear_speed, double rotation_speed, double wheel_base,
                         int ticks_per_second)
    : linear_speed_(linear_speed),
      rotation_speed_(rotation_speed),
      wheel_half_speed_(0.5 * rotation_speed * wheel_base),
      ticks_per_second_(ticks_per_second) {}

std::int64_t MotionPhase::rotation_ticks_for(double turn_angle) const {
  // Whole ticks, rounded up; the residual fraction of a tick is dropped.
  return static_cast<std::int64_t>(
      std::ceil(std::abs(turn_angle) / rotation_speed_ * ticks_per_second_));
}

MotionPhase::Wheels MotionPhase::tick(Controller& controller, Rng& rng,
                                      std::optional<MotionCommand>* pulled) {
  if (rotate_remaining_ == 0 && straight_remaining_ == 0) {
    const MotionCommand cmd = controller.next(rng);
    rotate_remaining_ = rotation_ticks_for(cmd.turn_angle);
    rotate_sign_ = cmd.turn_angle < 0.0 ? -1.0 : 1.0;
    straight_remaining_ = cmd.straight_ticks;
    if (pulled) *pulled = cmd;
  }
  if (rotate_remaining_ > 0) {
    --rotate_remaining_;
    phase_ = Phase::Rotating;
    return Wheels{-rotate_sign_ * wheel_half_speed_, rotate_sign_ * wheel_half_speed_};
  }
  if (straight_remaining_ > 0) {
    --straight_remaining_;
    phase_ = Phase::MovingStraight;
    return Wheels{linear_speed_, linear_speed_};
  }
  phase_ = Phase::Stopped;  // a (0, 0) command parks the robot this tick
  return Wheels{};
}

}  // namespace bnswarm
