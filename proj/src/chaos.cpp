#include "bnswarm/chaos.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

#include "bnswarm/rng.hpp"

namespace bnswarm {

double hamming(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("hamming: vectors must have equal nonzero length");
  }
  int diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] != 0) != (b[i] != 0);
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

namespace {

// State after `horizon` synchronous steps. The visited sequence is memoised;
// once a state repeats the remaining steps collapse to an index into the
// cycle, which pays off whenever the attractor is reached well before the
// horizon.
std::uint64_t advance(const BooleanNetwork& net, std::uint64_t state, int horizon) {
  std::vector<std::uint64_t> sequence;
  std::unordered_map<std::uint64_t, int> seen;
  sequence.reserve(256);
  for (int t = 0; t < horizon; ++t) {
    const auto [it, fresh] = seen.emplace(state, t);
    if (!fresh) {
      const int entry = it->second;          // cycle entry step
      const int period = t - entry;
      return sequence[entry + (horizon - entry) % period];
    }
    sequence.push_back(state);
    state = net.step_packed(state);
  }
  return state;
}

}  // namespace

SensitivityResult measure_delta(const BooleanNetwork& net, int runs, int horizon,
                                std::uint64_t seed) {
  if (runs < 1 || horizon < 0) {
    throw std::invalid_argument("measure_delta: runs must be >= 1, horizon >= 0");
  }
  const int n = net.size();
  SensitivityResult result;
  result.deltas.assign(runs, 0.0);
  result.horizon = horizon;
  result.runs = runs;

#pragma omp parallel for schedule(dynamic)
  for (int run = 0; run < runs; ++run) {
    Rng rng(derive_seed(seed, seed_tag::kDeltaRun, run));
    std::uint64_t a = 0;
    for (int i = 0; i < n; ++i) a |= rng.below(2) << i;
    const std::uint64_t b = a ^ (std::uint64_t{1} << rng.below(n));
    const std::uint64_t a_final = advance(net, a, horizon);
    const std::uint64_t b_final = advance(net, b, horizon);
    const double h = static_cast<double>(std::popcount(a_final ^ b_final)) / n;
    result.deltas[run] = h - 1.0 / n;
  }
  double sum = 0.0;
  for (double d : result.deltas) sum += d;
  result.delta_mean = sum / runs;
  return result;
}

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::Ordered: return "ordered";
    case Regime::Boundary: return "boundary";
    default: return "chaotic";
  }
}

Regime classify(const SensitivityResult& result, double tolerance) {
  if (result.delta_mean < -tolerance) return Regime::Ordered;
  if (result.delta_mean > tolerance) return Regime::Chaotic;
  return Regime::Boundary;
}

std::uint64_t topology_hash(const BooleanNetwork& net) {
  std::uint64_t h = fnv1a(std::string_view("bn-topology"));
  h = derive_seed(h, static_cast<std::uint64_t>(net.size()));
  const auto mix = [&h](const std::vector<std::uint8_t>& bytes) {
    h = derive_seed(h, fnv1a(std::string_view(
                            reinterpret_cast<const char*>(bytes.data()), bytes.size())));
  };
  mix(net.connections());
  mix(net.gates());
  return h;
}

SensitivityResult delta_of_network(const BooleanNetwork& net) {
  return measure_delta(net, kDeltaRuns, kDeltaHorizon,
                       derive_seed(topology_hash(net), seed_tag::kDeltaRun));
}

ActivationTrace activation_trace(BooleanNetwork net, int steps) {
  constexpr int kWindowCap = 100000;
  if (steps < 0) throw std::invalid_argument("activation_trace: negative step count");
  steps = std::min(steps, kWindowCap);

  ActivationTrace trace;
  trace.rows.reserve(steps + 1);
  std::unordered_map<std::uint64_t, int> seen;
  for (int t = 0; t <= steps; ++t) {
    trace.rows.push_back(net.states());
    const auto [it, fresh] = seen.emplace(net.states_packed(), t);
    if (!fresh) {
      trace.cycle_start = it->second;
      trace.cycle_length = t - it->second;
      break;
    }
    net.step();
  }
  return trace;
}

}  // namespace bnswarm
