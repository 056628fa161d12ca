#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bnswarm/bn.hpp"

namespace bnswarm {

// Normalised Hamming distance between two equal-length state vectors.
double hamming(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

struct SensitivityResult {
  double delta_mean = 0.0;
  std::vector<double> deltas;  // one entry per perturbation run
  int horizon = 0;
  int runs = 0;
};

// Perturbation sensitivity: per run, draw a random state A, flip one random
// node to get B, advance both copies of the network for `horizon` synchronous
// steps and record H(A', B') - 1/N. Positive means the flip spread (chaotic
// side), negative means it healed (ordered side). Only the topology of `net`
// matters; fresh states are drawn per run.
SensitivityResult measure_delta(const BooleanNetwork& net, int runs, int horizon,
                                std::uint64_t seed);

inline constexpr int kDeltaRuns = 100;
inline constexpr int kDeltaHorizon = 10000;

enum class Regime { Ordered, Boundary, Chaotic };
const char* regime_name(Regime regime);

// Sign of the mean delta with a dead band of +-tolerance around zero.
Regime classify(const SensitivityResult& result, double tolerance = 0.01);

// Raw node-state raster for plotting plus cycle detection: rows[t] is the
// state vector after t steps, starting from the network's current state.
// cycle_length is set when some state reappears within the window (the
// attractor period once the run has converged).
struct ActivationTrace {
  std::vector<std::vector<std::uint8_t>> rows;
  std::optional<int> cycle_length;
  std::optional<int> cycle_start;  // first step of the repeated state
};

ActivationTrace activation_trace(BooleanNetwork net, int steps);

// Hash of the wiring and gates only (states excluded), so a network and its
// genome-decoded twin agree.
std::uint64_t topology_hash(const BooleanNetwork& net);

// The standard sensitivity protocol (100 runs, horizon 10^4) seeded from the
// topology hash: the same network always gets the same measurement, no
// matter which pipeline asks.
SensitivityResult delta_of_network(const BooleanNetwork& net);

}  // namespace bnswarm
