#include "bnswarm/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bnswarm {

Genome random_genome(int network_size, Rng& rng) {
  Genome genome;
  genome.network_size = network_size;
  const std::size_t n = static_cast<std::size_t>(network_size);
  genome.genes.resize(n * n + n * (n - 1));
  for (auto& gene : genome.genes) gene = rng.uniform(0.0, 3.0);
  return genome;
}

BooleanNetwork decode_genome(const Genome& genome) {
  const std::size_t n = static_cast<std::size_t>(genome.network_size);
  if (genome.genes.size() != n * n + n * (n - 1)) {
    throw std::invalid_argument("decode_genome: gene count does not match network size");
  }
  std::vector<std::uint8_t> connections(n * n);
  std::vector<std::uint8_t> gates(n * (n - 1));
  for (std::size_t i = 0; i < connections.size(); ++i) {
    connections[i] = static_cast<std::uint8_t>(genome.genes[i]);
  }
  for (std::size_t i = 0; i < gates.size(); ++i) {
    gates[i] = static_cast<std::uint8_t>(genome.genes[n * n + i]);
  }
  return BooleanNetwork(genome.network_size, std::move(connections), std::move(gates),
                        std::vector<std::uint8_t>(n, 0));
}

void validate(const GaConfig& c) {
  if (c.network_size < 4 || c.network_size > 64 || c.network_size % 2 != 0) {
    throw ConfigError("ga: network_size must be even and in [4, 64]");
  }
  if (c.population < 2 || c.population % 2 != 0) {
    throw ConfigError("ga: population must be even and >= 2");
  }
  if (c.generations < 0) throw ConfigError("ga: generations must be >= 0");
  if (c.eval_trials < 1 || c.post_eval_trials < 1) {
    throw ConfigError("ga: trial counts must be >= 1");
  }
  if (c.p_crossover < 0.0 || c.p_crossover > 1.0 || c.p_mutation < 0.0 || c.p_mutation > 1.0) {
    throw ConfigError("ga: probabilities must be in [0, 1]");
  }
  if (c.sbx_eta <= 0.0 || c.mutation_eta <= 0.0) {
    throw ConfigError("ga: distribution indices must be positive");
  }
}

std::size_t tournament_select(const std::vector<double>& fitness, Rng& rng) {
  if (fitness.empty()) throw std::invalid_argument("tournament_select: empty population");
  const std::size_t i = rng.below(fitness.size());
  const std::size_t j = rng.below(fitness.size());
  if (fitness[i] < fitness[j]) return i;
  if (fitness[j] < fitness[i]) return j;
  return rng.below(2) ? j : i;
}

Genome sbx_crossover(const Genome& a, const Genome& b, double p_crossover, double eta,
                     Rng& rng, bool per_individual) {
  if (a.network_size != b.network_size || a.genes.size() != b.genes.size()) {
    throw std::invalid_argument("sbx_crossover: parents have different shapes");
  }
  Genome child = a;
  const bool whole_genome = per_individual && rng.bernoulli(p_crossover);
  for (std::size_t i = 0; i < child.genes.size(); ++i) {
    const bool recombine = per_individual ? whole_genome : rng.bernoulli(p_crossover);
    if (!recombine) continue;  // gene stays parent a's
    const double u = rng.uniform01();
    const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                 : std::pow(0.5 / (1.0 - u), 1.0 / (eta + 1.0));
    const double x = a.genes[i];
    const double y = b.genes[i];
    const double low = 0.5 * ((1.0 + beta) * x + (1.0 - beta) * y);
    const double high = 0.5 * ((1.0 - beta) * x + (1.0 + beta) * y);
    child.genes[i] = std::clamp(rng.below(2) ? high : low, 0.0, kGeneMax);
  }
  return child;
}

void polynomial_mutation(Genome& genome, double p_mutation, double eta, Rng& rng) {
  for (auto& gene : genome.genes) {
    if (!rng.bernoulli(p_mutation)) continue;
    const double u = rng.uniform01();
    const double d_low = gene / 3.0;
    const double d_high = (3.0 - gene) / 3.0;
    double dq;
    if (u < 0.5) {
      dq = std::pow(2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d_low, eta + 1.0),
                    1.0 / (eta + 1.0)) - 1.0;
    } else {
      dq = 1.0 - std::pow(2.0 * (1.0 - u) +
                              2.0 * (u - 0.5) * std::pow(1.0 - d_high, eta + 1.0),
                          1.0 / (eta + 1.0));
    }
    gene = std::clamp(gene + dq * 3.0, 0.0, kGeneMax);
  }
}

GaEvalContext make_eval_context(const ArenaConfig& arena, int network_size, int trials,
                                std::uint64_t seed) {
  GaEvalContext context;
  context.arena = arena;
  context.trial_seeds.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    context.trial_seeds.push_back(derive_seed(seed, seed_tag::kEvaluation, t));
  }
  context.robot_states.reserve(arena.robot_count);
  for (int r = 0; r < arena.robot_count; ++r) {
    Rng init(derive_seed(seed, seed_tag::kBnInit, r));
    std::vector<std::uint8_t> states(network_size);
    for (auto& s : states) s = static_cast<std::uint8_t>(init.below(2));
    context.robot_states.push_back(std::move(states));
  }
  return context;
}

double evaluate_genome(const Genome& genome, const GaEvalContext& context) {
  BnSpec spec{decode_genome(genome), context.robot_states};
  const TrialOptions options{context.engine, false};
  std::vector<TrialRecord> records;
  records.reserve(context.trial_seeds.size());
  for (const std::uint64_t trial_seed : context.trial_seeds) {
    records.push_back(run_trial(context.arena, spec, trial_seed, options));
  }
  try {
    return fit_weibull(to_observations(records, context.arena.trial_duration)).mean_fpt;
  } catch (const std::runtime_error&) {
    // A fit that cannot converge marks a worthless genome, not a fatal run.
    return std::numeric_limits<double>::infinity();
  }
}

FitnessFn make_sim_fitness(const GaConfig& config, const ArenaConfig& arena,
                           std::uint64_t seed, Engine engine) {
  validate(config);
  validate(arena);
  const std::uint64_t context_seed = derive_seed(seed, seed_tag::kGaContext);
  GaEvalContext base = make_eval_context(arena, config.network_size, config.eval_trials,
                                         context_seed);
  base.engine = engine;
  const bool reseed = config.reseed_layouts_each_generation;
  const int trials = config.eval_trials;
  return [=](const std::vector<Genome>& population, int generation) {
    GaEvalContext context = base;
    if (reseed && generation > 0) {
      for (int t = 0; t < trials; ++t) {
        context.trial_seeds[t] = derive_seed(
            context_seed, seed_tag::kEvaluation,
            static_cast<std::uint64_t>(generation) * trials + t);
      }
    }
    std::vector<double> fitness(population.size());
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(population.size()); ++i) {
      try {
        fitness[i] = evaluate_genome(population[i], context);
      } catch (...) {
#pragma omp critical
        {
          if (!error) error = std::current_exception();
        }
      }
    }
    if (error) std::rethrow_exception(error);
    return fitness;
  };
}

EvolutionResult run_evolution(const GaConfig& config, std::uint64_t seed,
                              const FitnessFn& fitness, const DeltaFn& delta_of_best,
                              const CheckpointFn& on_generation, const GaCheckpoint* resume) {
  validate(config);
  if (!fitness) throw std::invalid_argument("run_evolution: fitness function required");

  EvolutionResult result;
  std::vector<Genome> population;
  int start = 0;
  bool have_best = false;
  if (resume) {
    population = resume->population;
    start = resume->next_generation;
    result.best = resume->best;
    result.best_fitness = resume->best_fitness;
    result.generation0_best = resume->generation0_best;
    result.generation0_best_fitness = resume->generation0_best_fitness;
    result.log = resume->log;
    have_best = start > 0;
    if (static_cast<int>(population.size()) != config.population) {
      throw ConfigError("run_evolution: checkpoint population size mismatch");
    }
  } else {
    Rng init(derive_seed(seed, seed_tag::kGaInit));
    population.reserve(config.population);
    for (int p = 0; p < config.population; ++p) {
      population.push_back(random_genome(config.network_size, init));
    }
  }

  for (int g = start; g <= config.generations; ++g) {
    if (on_generation) {
      on_generation(GaCheckpoint{g, population, result.best, result.best_fitness,
                                 result.generation0_best, result.generation0_best_fitness,
                                 result.log});
    }
    const std::vector<double> scores = fitness(population, g);
    if (scores.size() != population.size()) {
      throw std::invalid_argument("run_evolution: fitness function returned wrong count");
    }
    std::size_t best_idx = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      sum += scores[i];
      if (scores[i] < scores[best_idx]) best_idx = i;
    }
    if (!have_best || scores[best_idx] < result.best_fitness) {
      result.best = population[best_idx];
      result.best_fitness = scores[best_idx];
      have_best = true;
    }
    if (g == 0) {
      result.generation0_best = population[best_idx];
      result.generation0_best_fitness = scores[best_idx];
    }
    GenerationLog entry;
    entry.generation = g;
    entry.best_tf = scores[best_idx];
    entry.mean_tf = sum / static_cast<double>(scores.size());
    entry.delta_of_best = delta_of_best ? delta_of_best(population[best_idx]) : 0.0;
    result.log.push_back(entry);

    if (g == config.generations) break;

    // Breeding consumes one dedicated stream per generation, re-derived from
    // the base seed, so a resumed run replays the exact same draws.
    Rng variation(derive_seed(seed, seed_tag::kGaVariation, g));
    std::vector<Genome> next;
    next.reserve(config.population);
    for (int o = 0; o < config.population; ++o) {
      const std::size_t pa = tournament_select(scores, variation);
      const std::size_t pb = tournament_select(scores, variation);
      Genome child = sbx_crossover(population[pa], population[pb], config.p_crossover,
                                   config.sbx_eta, variation, config.per_individual_crossover);
      polynomial_mutation(child, config.p_mutation, config.mutation_eta, variation);
      next.push_back(std::move(child));
    }
    population = std::move(next);
  }
  return result;
}

PostEvaluation post_evaluate(const Genome& genome, const ArenaConfig& arena, int trials,
                             std::uint64_t seed, Engine engine) {
  BnSpec spec{decode_genome(genome), {}};  // fresh random states every trial
  const TrialOptions options{engine, false};
  PostEvaluation post;
  post.records = run_trials(arena, spec, derive_seed(seed, seed_tag::kGaPostEval),
                            trials, options);
  try {
    post.fit = fit_weibull(to_observations(post.records, arena.trial_duration));
  } catch (const std::runtime_error&) {
    KmCurve empty;
    post.fit = fit_weibull(empty);  // degenerate sentinel
  }
  post.mean_straight_s = mean_straight_duration(post.records);
  return post;
}

}  // namespace bnswarm
