#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bnswarm/bn.hpp"
#include "bnswarm/rng.hpp"
#include "oracles.hpp"

using namespace bnswarm;

namespace {

std::vector<int> unpack(std::uint64_t bits, int n) {
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = static_cast<int>((bits >> i) & 1);
  return out;
}

}  // namespace

TEST_CASE("synchronous step matches the naive matrix evaluation") {
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 4 + 2 * (rep % 3);  // 4, 6, 8
    BooleanNetwork net = BooleanNetwork::random(n, 1000 + rep);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      const std::vector<int> expect = oracles::naive_bn_step(net, unpack(s, n));
      const std::uint64_t got = net.step_packed(s);
      for (int i = 0; i < n; ++i) REQUIRE(((got >> i) & 1) == std::uint64_t(expect[i]));
    }
  }
}

TEST_CASE("step and step_packed agree") {
  BooleanNetwork net = BooleanNetwork::random(12, 77);
  BooleanNetwork walker = net;
  std::uint64_t packed = walker.states_packed();
  for (int t = 0; t < 200; ++t) {
    walker.step();
    packed = net.step_packed(packed);
    REQUIRE(walker.states_packed() == packed);
  }
}

TEST_CASE("a node with no inputs keeps its state") {
  BooleanNetwork net = oracles::frozen_network(6);
  net.set_state(2, true);
  net.set_state(5, true);
  const auto before = net.states();
  for (int t = 0; t < 10; ++t) net.step();
  CHECK(net.states() == before);
}

TEST_CASE("a node with one input copies it") {
  // Ring: node i reads node (i+1) mod n, plain edges.
  const int n = 4;
  BooleanNetwork net = oracles::frozen_network(n);
  for (int i = 0; i < n; ++i) net.set_connection(i, (i + 1) % n, 1);
  net.set_state(0, true);
  net.step();
  CHECK(net.state(3));
  CHECK_FALSE(net.state(0));
  // Negated copy flips.
  BooleanNetwork inv = oracles::frozen_network(n);
  inv.set_connection(0, 1, 2);
  inv.step();
  CHECK(inv.state(0));
}

TEST_CASE("gate entries beyond the in-degree are inert") {
  for (int rep = 0; rep < 20; ++rep) {
    BooleanNetwork net = BooleanNetwork::random(8, 500 + rep);
    BooleanNetwork tweaked = net;
    for (int node = 0; node < net.size(); ++node) {
      const int k = net.in_degree(node);
      for (int slot = std::max(0, k - 1); slot < net.size() - 1; ++slot) {
        tweaked.set_gate(node, slot, (net.gate(node, slot) + 1) % 3);
      }
    }
    std::uint64_t a = net.states_packed();
    std::uint64_t b = a;
    for (int t = 0; t < 64; ++t) {
      a = net.step_packed(a);
      b = tweaked.step_packed(b);
      REQUIRE(a == b);
    }
  }
}

TEST_CASE("motion decode endpoints and monotonicity") {
  const int n = 8;
  BooleanNetwork net = oracles::frozen_network(n);

  net.set_states(std::vector<std::uint8_t>(n, 0));
  MotionCommand zero = net.decode_motion();
  CHECK(zero.straight_ticks == 0);
  CHECK(zero.turn_angle == -std::numbers::pi);

  net.set_states(std::vector<std::uint8_t>(n, 1));
  MotionCommand ones = net.decode_motion();
  CHECK(ones.straight_ticks == (1 << (n / 2)) - 1);
  CHECK(ones.turn_angle == std::numbers::pi);

  // Node 0 is the most significant straight bit.
  net.set_states({1, 0, 0, 0, 0, 0, 0, 0});
  CHECK(net.decode_motion().straight_ticks == 8);
  net.set_states({0, 0, 0, 1, 0, 0, 0, 0});
  CHECK(net.decode_motion().straight_ticks == 1);

  // Angle midpoint: high half reading 7 of 15 sits just left of zero.
  net.set_states({0, 0, 0, 0, 0, 1, 1, 1});
  CHECK(net.decode_motion().turn_angle ==
        doctest::Approx(-std::numbers::pi + 2.0 * std::numbers::pi * 7.0 / 15.0));
}

TEST_CASE("serialize round-trips bit-exactly") {
  for (int rep = 0; rep < 10; ++rep) {
    BooleanNetwork net = BooleanNetwork::random(4 + 2 * rep, 900 + rep);
    const std::string text = net.serialize();
    const BooleanNetwork back = BooleanNetwork::deserialize(text);
    CHECK(back == net);
    CHECK(back.serialize() == text);
  }
}

TEST_CASE("deserialize reports the offending line") {
  CHECK_THROWS_AS(BooleanNetwork::deserialize(""), ParseError);
  try {
    BooleanNetwork::deserialize("bn x\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  // Corrupt one connection entry of a valid file: line 3 is the second row.
  BooleanNetwork net = BooleanNetwork::random(4, 5);
  std::string text = net.serialize();
  const auto pos = text.find('\n', text.find('\n') + 1) + 1;  // start of line 3
  text[pos] = '7';
  try {
    BooleanNetwork::deserialize(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("random networks are seed-determined and size-checked") {
  CHECK(BooleanNetwork::random(10, 3) == BooleanNetwork::random(10, 3));
  CHECK_FALSE(BooleanNetwork::random(10, 3) == BooleanNetwork::random(10, 4));
  CHECK_THROWS_AS(BooleanNetwork::random(5, 1), std::invalid_argument);
  CHECK_THROWS_AS(BooleanNetwork::random(2, 1), std::invalid_argument);
  CHECK_THROWS_AS(BooleanNetwork::random(66, 1), std::invalid_argument);
}

TEST_CASE("the command chain converts 2^15 ticks to 1024 cm exactly") {
  // 32 ticks per second at 1 cm/s: the longest decodable run is 2^15 ticks.
  const double cm = (double(std::int64_t{1} << 15) / 32.0) * (0.01 * 100.0);
  CHECK(cm == 1024.0);
}
