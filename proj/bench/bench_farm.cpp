// Timing harness for the two parallel kernels (trial farm, sensitivity runs)
// and for the fast engine against the per-tick trigonometry reference.
// Not a test: it prints throughput numbers and exits.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bnswarm/bn.hpp"
#include "bnswarm/chaos.hpp"
#include "bnswarm/sim.hpp"

using namespace bnswarm;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double time_trials(const ArenaConfig& arena, const ControllerSpec& spec, int trials,
                   Engine engine, int threads) {
  set_threads(threads);
  TrialOptions options;
  options.engine = engine;
  const auto start = std::chrono::steady_clock::now();
  run_trials(arena, spec, 12345, trials, options);
  return seconds_since(start);
}

double time_delta(const BooleanNetwork& net, int runs, int horizon, int threads) {
  set_threads(threads);
  const auto start = std::chrono::steady_clock::now();
  measure_delta(net, runs, horizon, 999);
  return seconds_since(start);
}

void report(const char* label, int trials, double serial_s, double parallel_s, int threads) {
  std::printf("%-28s %3d units  serial %7.2f s (%6.2f/s)  %2d threads %7.2f s (%6.2f/s)  x%.2f\n",
              label, trials, serial_s, trials / serial_s, threads, parallel_s,
              trials / parallel_s, serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
  // Short trials keep the harness itself quick; pass a scale factor to grow
  // the workload for stable numbers.
  const int scale = argc > 1 ? std::stoi(argv[1]) : 1;
  const int threads = max_threads();

  ArenaConfig arena;
  arena.trial_duration = 300.0;
  const int trials = 16 * scale;

  const LmcrwSpec lmcrw{{0.75, 1.8}, {}};
  const double lm_serial = time_trials(arena, lmcrw, trials, Engine::Fast, 1);
  const double lm_par = time_trials(arena, lmcrw, trials, Engine::Fast, threads);
  report("lmcrw farm (fast)", trials, lm_serial, lm_par, threads);

  const double ref_serial = time_trials(arena, lmcrw, trials, Engine::Reference, 1);
  const double ref_par = time_trials(arena, lmcrw, trials, Engine::Reference, threads);
  report("lmcrw farm (reference)", trials, ref_serial, ref_par, threads);
  std::printf("%-28s fast engine is x%.2f the reference per trial\n", "",
              ref_serial / lm_serial);

  const BnSpec bn{BooleanNetwork::random(20, 777), {}};
  const double bn_serial = time_trials(arena, bn, trials, Engine::Fast, 1);
  const double bn_par = time_trials(arena, bn, trials, Engine::Fast, threads);
  report("network farm (fast)", trials, bn_serial, bn_par, threads);

  const BooleanNetwork net = BooleanNetwork::random(30, 778);
  const int runs = 200 * scale;
  const double d_serial = time_delta(net, runs, kDeltaHorizon, 1);
  const double d_par = time_delta(net, runs, kDeltaHorizon, threads);
  report("sensitivity runs", runs, d_serial, d_par, threads);
  return 0;
}
