#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace bnswarm {

/// FNV-1a over raw bytes; used for content hashes (config echoes, network
/// files) that feed reproducibility checks and derived seeds.
inline std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// splitmix64 finalizer; used both as a mixing hash and to expand seeds.
constexpr std::uint64_t splitmix64_hash(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Deterministic child-seed derivation. Every random stream in the project is
/// reached from one base seed through derive_seed chains, so adding streams
/// (more trials, more evaluations) never perturbs existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) noexcept {
  return splitmix64_hash(parent ^ splitmix64_hash(tag ^ 0x6a09e667f3bcc909ull));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag,
                                    std::uint64_t index) noexcept {
  return derive_seed(derive_seed(parent, tag), index);
}

/// Stream tags for derive_seed. Values are part of the reproducibility
/// contract: changing them changes every output.
namespace seed_tag {
inline constexpr std::uint64_t kPlacement = 1;
inline constexpr std::uint64_t kBias = 2;
inline constexpr std::uint64_t kBnInit = 3;
inline constexpr std::uint64_t kController = 4;
inline constexpr std::uint64_t kEvaluation = 5;
inline constexpr std::uint64_t kTrial = 6;
inline constexpr std::uint64_t kRobot = 7;
inline constexpr std::uint64_t kGaInit = 8;
inline constexpr std::uint64_t kGaVariation = 9;
inline constexpr std::uint64_t kGaContext = 10;
inline constexpr std::uint64_t kGaPostEval = 11;
inline constexpr std::uint64_t kDeltaRun = 12;
inline constexpr std::uint64_t kCell = 13;
inline constexpr std::uint64_t kNetwork = 14;
inline constexpr std::uint64_t kBaseline = 15;
inline constexpr std::uint64_t kGaRun = 16;
}  // namespace seed_tag

/// xoshiro256++ with splitmix64 seeding. Self-contained so that streams are
/// bit-reproducible regardless of standard-library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = sm;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  int uniform_int(int lo, int hi) noexcept {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  /// Box-Muller without pair caching: one value per call, replay-friendly.
  double normal(double mean, double stddev) noexcept {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    return mean + stddev * radius * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Unit-rate exponential.
  double exponential() noexcept { return -std::log1p(-uniform01()); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace bnswarm
