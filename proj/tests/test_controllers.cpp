#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bnswarm/controllers.hpp"
#include "bnswarm/sim.hpp"
#include "bnswarm/stats.hpp"
#include "oracles.hpp"

using namespace bnswarm;

TEST_CASE("wrapped Cauchy at rho=1 collapses to zero") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(sample_wrapped_cauchy(1.0, rng) == 0.0);
}

TEST_CASE("wrapped Cauchy at rho=0 is uniform on (-pi, pi)") {
  Rng rng(2);
  std::vector<double> sample(20000);
  for (double& x : sample) x = sample_wrapped_cauchy(0.0, rng);
  const KsTest ks = ks_uniform(sample, -std::numbers::pi, std::numbers::pi);
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("wrapped Cauchy mean resultant length equals rho") {
  for (const double rho : {0.3, 0.75}) {
    Rng rng(3);
    std::complex<double> sum;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      sum += std::polar(1.0, sample_wrapped_cauchy(rho, rng));
    }
    CHECK(std::abs(std::abs(sum / double(n)) - rho) < 0.01);
  }
}

TEST_CASE("stable draws have the commanded tail exponent") {
  for (const double alpha : {1.2, 1.6}) {
    Rng rng(4);
    std::vector<double> mags(200000);
    for (double& x : mags) x = std::abs(sample_stable(alpha, rng));
    const double hill = oracles::hill_estimator(mags, 2000);
    CHECK(std::abs(hill - alpha) < 0.15);
  }
}

TEST_CASE("stable draws at alpha=2 are Normal(0, sqrt 2)") {
  Rng rng(5);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_stable(2.0, rng);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(std::sqrt(sq / n - mean * mean) - std::numbers::sqrt2) < 0.01);
}

TEST_CASE("levy ticks always land in [1, max_ticks]") {
  Rng rng(6);
  const LevyConfig levy;
  std::int64_t lo = levy.max_ticks, hi = 0;
  for (int i = 0; i < 100000; ++i) {
    const std::int64_t t = sample_levy_ticks(1.2, levy, rng);
    REQUIRE(t >= 1);
    REQUIRE(t <= levy.max_ticks);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  CHECK(lo == 1);           // short runs are common
  CHECK(hi == levy.max_ticks);  // the heavy tail hits the cap
}

TEST_CASE("lmcrw commands stay inside the decode ranges") {
  Rng rng(7);
  const LmcrwParams params{0.75, 1.8};
  const LevyConfig levy;
  for (int i = 0; i < 20000; ++i) {
    const MotionCommand cmd = lmcrw_next(params, levy, rng);
    REQUIRE(cmd.turn_angle >= -std::numbers::pi);
    REQUIRE(cmd.turn_angle <= std::numbers::pi);
    REQUIRE(cmd.straight_ticks >= 1);
    REQUIRE(cmd.straight_ticks <= levy.max_ticks);
  }
}

TEST_CASE("bn controller walks the network and emits its decode") {
  BooleanNetwork net = BooleanNetwork::random(8, 42);
  BooleanNetwork shadow = net;
  BnController controller(net);
  Rng rng(0);
  for (int i = 0; i < 50; ++i) {
    const MotionCommand expect = shadow.decode_motion();
    shadow.step();
    CHECK(controller.next(rng) == expect);
  }
}

namespace {

class Scripted final : public Controller {
 public:
  explicit Scripted(std::vector<MotionCommand> commands) : commands_(std::move(commands)) {}
  MotionCommand next(Rng&) override {
    const MotionCommand cmd = commands_[std::min(index_, commands_.size() - 1)];
    ++index_;
    return cmd;
  }

 private:
  std::vector<MotionCommand> commands_;
  std::size_t index_ = 0;
};

}  // namespace

TEST_CASE("turn-then-run phases integrate to the commanded pose") {
  const double linear = 0.01, rot = std::numbers::pi / 4.0, base = 0.025;
  const int tps = 32;
  const double dt = 1.0 / tps;
  // Quarter turn left (exactly 64 rotation ticks), then one second straight.
  Scripted controller({{32, std::numbers::pi / 2.0}, {0, 0.0}});
  MotionPhase mp(linear, rot, base, tps);
  CHECK(mp.rotation_ticks_for(std::numbers::pi / 2.0) == 64);
  CHECK(mp.rotation_ticks_for(0.0) == 0);
  CHECK(mp.rotation_ticks_for(-std::numbers::pi) == 128);

  Rng rng(0);
  Pose pose;
  for (int t = 0; t < 64 + 32; ++t) {
    const auto wheels = mp.tick(controller, rng);
    if (t < 64) CHECK(mp.phase() == MotionPhase::Phase::Rotating);
    if (t >= 64) CHECK(mp.phase() == MotionPhase::Phase::MovingStraight);
    pose = differential_step(pose, wheels.left, wheels.right, base, dt);
  }
  CHECK(pose.heading == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-12));
  CHECK(std::abs(pose.x) < 1e-12);
  CHECK(pose.y == doctest::Approx(linear * 1.0).epsilon(1e-9));

  // The (0, 0) command parks the robot for one tick.
  const auto parked = mp.tick(controller, rng);
  CHECK(mp.phase() == MotionPhase::Phase::Stopped);
  CHECK(parked.left == 0.0);
  CHECK(parked.right == 0.0);
}
