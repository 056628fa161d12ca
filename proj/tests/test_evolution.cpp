#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bnswarm/errors.hpp"
#include "bnswarm/evolution.hpp"
#include "bnswarm/rng.hpp"

using namespace bnswarm;

namespace {

// Cheap deterministic stand-in for the simulator: fitness is the gene sum,
// so lower genes are better and improvements are easy to verify.
std::vector<double> gene_sum_fitness(const std::vector<Genome>& population, int) {
  std::vector<double> out;
  out.reserve(population.size());
  for (const Genome& g : population) {
    out.push_back(std::accumulate(g.genes.begin(), g.genes.end(), 0.0));
  }
  return out;
}

GaConfig tiny_config() {
  GaConfig config;
  config.network_size = 6;
  config.population = 8;
  config.generations = 10;
  config.eval_trials = 1;
  config.post_eval_trials = 1;
  return config;
}

}  // namespace

TEST_CASE("genomes decode to the matrices they spell") {
  const int n = 4;
  Genome genome;
  genome.network_size = n;
  genome.genes.assign(n * n + n * (n - 1), 0.0);
  genome.genes[1] = 1.7;        // connection (0, 1) -> 1
  genome.genes[n * n] = 2.999;  // gate (0, 0) -> 2
  const BooleanNetwork net = decode_genome(genome);
  CHECK(net.connection(0, 1) == 1);
  CHECK(net.connection(0, 0) == 0);
  CHECK(net.gate(0, 0) == 2);
  for (int i = 0; i < n; ++i) CHECK_FALSE(net.state(i));
}

TEST_CASE("random genomes stay inside the gene box") {
  Rng rng(5);
  const Genome g = random_genome(10, rng);
  CHECK(g.genes.size() == std::size_t(10 * 10 + 10 * 9));
  for (const double gene : g.genes) {
    CHECK(gene >= 0.0);
    CHECK(gene < 3.0);
  }
}

TEST_CASE("tournament favors the lower fitness three to one") {
  const std::vector<double> fitness = {5.0, 1.0};
  Rng rng(9);
  int wins = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) wins += tournament_select(fitness, rng) == 1;
  CHECK(std::abs(double(wins) / n - 0.75) < 0.01);
}

TEST_CASE("crossover and mutation respect the bounds") {
  Rng rng(11);
  Genome a = random_genome(8, rng);
  Genome b = random_genome(8, rng);
  for (int rep = 0; rep < 50; ++rep) {
    Genome child = sbx_crossover(a, b, 0.5, 20.0, rng);
    polynomial_mutation(child, 0.05, 20.0, rng);
    for (const double gene : child.genes) {
      REQUIRE(gene >= 0.0);
      REQUIRE(gene < 3.0);
    }
  }
  // Zero-probability operators are identity.
  const Genome same = sbx_crossover(a, b, 0.0, 20.0, rng);
  CHECK(same.genes == a.genes);
  Genome fixed = a;
  polynomial_mutation(fixed, 0.0, 20.0, rng);
  CHECK(fixed.genes == a.genes);
  // Shape mismatch is rejected.
  Genome other = random_genome(6, rng);
  CHECK_THROWS_AS(sbx_crossover(a, other, 0.5, 20.0, rng), std::invalid_argument);
}

TEST_CASE("evolution improves the gene-sum objective monotonically") {
  const GaConfig config = tiny_config();
  std::vector<GaCheckpoint> checkpoints;
  const EvolutionResult result = run_evolution(
      config, 77, gene_sum_fitness, [](const Genome&) { return 0.0; },
      [&](const GaCheckpoint& cp) { checkpoints.push_back(cp); });

  REQUIRE(result.log.size() == std::size_t(config.generations + 1));
  for (std::size_t i = 0; i < result.log.size(); ++i) {
    CHECK(result.log[i].generation == int(i));
    if (i > 0) CHECK(result.log[i].best_tf <= result.log[i - 1].best_tf);
    CHECK(result.log[i].mean_tf >= result.log[i].best_tf);
  }
  CHECK(result.best_fitness <= result.generation0_best_fitness);
  CHECK(result.best_fitness ==
        std::accumulate(result.best.genes.begin(), result.best.genes.end(), 0.0));
  REQUIRE(checkpoints.size() == std::size_t(config.generations + 1));
  CHECK(checkpoints.front().next_generation == 0);
  CHECK(checkpoints.back().next_generation == config.generations);
}

TEST_CASE("a checkpoint resumes to the identical outcome") {
  const GaConfig config = tiny_config();
  std::vector<GaCheckpoint> checkpoints;
  const EvolutionResult full = run_evolution(
      config, 123, gene_sum_fitness, [](const Genome&) { return 0.0; },
      [&](const GaCheckpoint& cp) { checkpoints.push_back(cp); });

  GaCheckpoint middle = checkpoints[4];
  const EvolutionResult resumed =
      run_evolution(config, 123, gene_sum_fitness, [](const Genome&) { return 0.0; }, {},
                    &middle);
  CHECK(resumed.best.genes == full.best.genes);
  CHECK(resumed.best_fitness == full.best_fitness);
  // The checkpoint carries the log prefix, so the resumed history is whole.
  REQUIRE(resumed.log.size() == full.log.size());
  for (std::size_t i = 0; i < resumed.log.size(); ++i) {
    CHECK(resumed.log[i].generation == full.log[i].generation);
    CHECK(resumed.log[i].best_tf == full.log[i].best_tf);
    CHECK(resumed.log[i].mean_tf == full.log[i].mean_tf);
  }

  // A population of the wrong size cannot resume.
  GaCheckpoint broken = checkpoints[4];
  broken.population.pop_back();
  CHECK_THROWS_AS(run_evolution(config, 123, gene_sum_fitness,
                                [](const Genome&) { return 0.0; }, {}, &broken),
                  ConfigError);
}

TEST_CASE("reruns of the same seed are bit-identical") {
  const GaConfig config = tiny_config();
  const auto fit = gene_sum_fitness;
  const auto delta = [](const Genome&) { return 0.0; };
  const EvolutionResult a = run_evolution(config, 9, fit, delta);
  const EvolutionResult b = run_evolution(config, 9, fit, delta);
  CHECK(a.best.genes == b.best.genes);
  CHECK(a.best_fitness == b.best_fitness);
  const EvolutionResult c = run_evolution(config, 10, fit, delta);
  CHECK(a.best.genes != c.best.genes);
}

TEST_CASE("simulation fitness is reproducible and orderly") {
  ArenaConfig arena;
  arena.robot_count = 4;
  arena.trial_duration = 120.0;
  GaEvalContext context = make_eval_context(arena, 8, 2, 555);
  Rng rng(3);
  const Genome genome = random_genome(8, rng);
  const double first = evaluate_genome(genome, context);
  const double second = evaluate_genome(genome, context);
  CHECK(first == second);
  CHECK(first > 0.0);

  const GaConfig config = [] {
    GaConfig c;
    c.network_size = 8;
    c.population = 4;
    c.generations = 1;
    c.eval_trials = 2;
    c.post_eval_trials = 2;
    return c;
  }();
  const FitnessFn fitness = make_sim_fitness(config, arena, 555, Engine::Fast);
  std::vector<Genome> population;
  for (int i = 0; i < 4; ++i) population.push_back(random_genome(8, rng));
  const std::vector<double> scores_a = fitness(population, 0);
  const std::vector<double> scores_b = fitness(population, 0);
  CHECK(scores_a == scores_b);
  REQUIRE(scores_a.size() == 4);
}

TEST_CASE("post evaluation carries fit, straightness and raw records") {
  ArenaConfig arena;
  arena.robot_count = 4;
  arena.trial_duration = 120.0;
  Rng rng(21);
  const Genome genome = random_genome(8, rng);
  const PostEvaluation pe = post_evaluate(genome, arena, 6, 99);
  CHECK(pe.records.size() == 6);
  CHECK(pe.mean_straight_s > 0.0);
  CHECK(pe.fit.n_events + pe.fit.n_censored == 6 * arena.robot_count);
  const PostEvaluation again = post_evaluate(genome, arena, 6, 99);
  CHECK(again.fit.mean_fpt == pe.fit.mean_fpt);
  CHECK(again.records[0].censored == pe.records[0].censored);
  for (std::size_t r = 0; r < pe.records[0].first_passage.size(); ++r) {
    if (!pe.records[0].censored[r]) {
      CHECK(again.records[0].first_passage[r] == pe.records[0].first_passage[r]);
    }
  }
}
