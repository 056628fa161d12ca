#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bnswarm/bn.hpp"
#include "bnswarm/rng.hpp"
#include "bnswarm/sim.hpp"
#include "bnswarm/survival.hpp"

namespace bnswarm {

// Real-coded relaxation of a network topology: the flattened connection
// matrix followed by the flattened gate matrix, every gene in [0, 3) and
// floor-decoded to its digit. States are not evolved.
struct Genome {
  int network_size = 0;
  std::vector<double> genes;

  friend bool operator==(const Genome&, const Genome&) = default;
};

Genome random_genome(int network_size, Rng& rng);
BooleanNetwork decode_genome(const Genome& genome);  // all-zero initial states

// Largest representable gene value; keeps floor() inside {0, 1, 2}.
inline const double kGeneMax = 0x1.7ffffffffffffp+1;  // just below 3

struct GaConfig {
  int network_size = 20;
  int population = 40;
  int generations = 700;
  int eval_trials = 8;  // trials per fitness evaluation during evolution
  double p_crossover = 0.5;
  double p_mutation = 0.05;
  double sbx_eta = 20.0;
  double mutation_eta = 20.0;
  int post_eval_trials = 100;  // trials per evaluation after evolution
  // Alternative reading of the crossover probability: gate the whole genome
  // instead of each gene. Off by default.
  bool per_individual_crossover = false;
  // Redraw the evaluation layouts every generation instead of once per run.
  bool reseed_layouts_each_generation = false;
};

void validate(const GaConfig& config);  // throws ConfigError

// Uniform pair draw, lower fitness wins, ties split by a coin flip. Returns
// the winner's index.
std::size_t tournament_select(const std::vector<double>& fitness, Rng& rng);

// Simulated binary crossover producing a single offspring: each gene
// recombines with probability p_crossover (one of the two SBX children,
// chosen uniformly) and is copied from parent a otherwise. per_individual
// applies the probability once for the whole genome instead.
Genome sbx_crossover(const Genome& a, const Genome& b, double p_crossover, double eta,
                     Rng& rng, bool per_individual = false);

// Bounded polynomial mutation over [0, 3), applied per gene with probability
// p_mutation.
void polynomial_mutation(Genome& genome, double p_mutation, double eta, Rng& rng);

// The frozen evaluation environment shared by every individual: one layout
// seed per trial (target position, robot placement, wheel bias) and one
// initial state vector per robot, reused across individuals and generations.
struct GaEvalContext {
  ArenaConfig arena;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<std::vector<std::uint8_t>> robot_states;
  Engine engine = Engine::Fast;
};

GaEvalContext make_eval_context(const ArenaConfig& arena, int network_size, int trials,
                                std::uint64_t seed);

// Mean first-passage time of the decoded network under the frozen context
// (+inf sentinel when the survival fit is degenerate or fails). Consumes no
// randomness of its own, so identical genomes always score identically.
double evaluate_genome(const Genome& genome, const GaEvalContext& context);

struct GenerationLog {
  int generation = 0;
  double best_tf = 0.0;        // best fitness within the generation
  double mean_tf = 0.0;        // population mean (inf while any sentinel remains)
  double delta_of_best = 0.0;  // perturbation sensitivity of the generation best
};

struct EvolutionResult {
  Genome best;  // hall of fame: best-ever individual across all generations
  double best_fitness = 0.0;
  Genome generation0_best;  // kept so progress can be judged after the run
  double generation0_best_fitness = 0.0;
  std::vector<GenerationLog> log;  // one entry per generation, 0 .. G
};

// Everything needed to continue a run from the top of generation
// `next_generation` (its population is not yet evaluated). No generator
// state is stored: every stream is re-derived from the base seed and the
// generation index.
struct GaCheckpoint {
  int next_generation = 0;
  std::vector<Genome> population;
  Genome best;
  double best_fitness = 0.0;
  Genome generation0_best;
  double generation0_best_fitness = 0.0;
  std::vector<GenerationLog> log;
};

using FitnessFn = std::function<std::vector<double>(const std::vector<Genome>&, int generation)>;
using DeltaFn = std::function<double(const Genome&)>;
using CheckpointFn = std::function<void(const GaCheckpoint&)>;

// Generational loop: evaluate, log, then breed P offspring by (binary
// tournament x2 -> SBX -> polynomial mutation) and replace the population
// wholesale; the hall of fame lives outside the population. Generation 0 is
// the random initial population, so the log has generations + 1 entries.
// When `resume` is non-null the loop continues from the checkpoint instead
// of drawing a fresh initial population; on_generation (when set) fires at
// the top of every generation with a checkpoint capturing the state.
EvolutionResult run_evolution(const GaConfig& config, std::uint64_t seed,
                              const FitnessFn& fitness, const DeltaFn& delta_of_best,
                              const CheckpointFn& on_generation = {},
                              const GaCheckpoint* resume = nullptr);

// Sim-backed batch fitness for run_evolution, parallel across individuals.
FitnessFn make_sim_fitness(const GaConfig& config, const ArenaConfig& arena,
                           std::uint64_t seed, Engine engine);

// Post-run re-evaluation with fresh layouts and fresh per-robot initial
// states: `trials` trials seeded from derive_seed(seed, kGaPostEval, t).
struct PostEvaluation {
  WeibullFit fit;
  double mean_straight_s = 0.0;
  std::vector<TrialRecord> records;  // kept so callers can persist the raw data
};
PostEvaluation post_evaluate(const Genome& genome, const ArenaConfig& arena, int trials,
                             std::uint64_t seed, Engine engine = Engine::Fast);

}  // namespace bnswarm
