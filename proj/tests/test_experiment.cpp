#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "bnswarm/bn.hpp"
#include "bnswarm/chaos.hpp"
#include "bnswarm/errors.hpp"
#include "bnswarm/experiment.hpp"
#include "bnswarm/sim.hpp"

using namespace bnswarm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("unit_work") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out);
  out << text;
}

// Tiny arena block reused by the verb tests.
json small_arena_json() {
  return json{{"robot_count", 4}, {"trial_duration", 60.0}};
}

bool same_bytes(const fs::path& a, const fs::path& b) { return slurp(a) == slurp(b); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BNSWARM_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

}  // namespace

TEST_CASE("doubles survive the CSV round trip") {
  for (const double x : {0.1, 1.0 / 3.0, -2.5e-300, 7.25e300, 0.0, -123.456,
                         std::numbers::pi}) {
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(std::isinf(parse_double("inf")));
  CHECK(std::isnan(parse_double("")));
  CHECK_THROWS_AS(parse_double("12x"), ConfigError);
}

TEST_CASE("trial records round-trip through their CSV form") {
  const fs::path dir = fresh_dir("records_csv");
  ArenaConfig arena;
  arena.robot_count = 4;
  arena.trial_duration = 60.0;
  const auto records = run_trials(arena, LmcrwSpec{{0.75, 1.8}, {}}, 31, 3);
  write_records_csv(dir / "r.csv", records, 0xabcdef, 31);
  const std::string text = slurp(dir / "r.csv");
  CHECK(text.rfind("# config 0000000000abcdef seed 31\n", 0) == 0);
  const auto back = read_records_csv(dir / "r.csv");
  REQUIRE(back.size() == records.size());
  for (std::size_t t = 0; t < records.size(); ++t) {
    CHECK(back[t].censored == records[t].censored);
    CHECK(back[t].target_x == records[t].target_x);
    CHECK(back[t].target_y == records[t].target_y);
    for (std::size_t r = 0; r < records[t].first_passage.size(); ++r) {
      if (!records[t].censored[r]) {
        CHECK(back[t].first_passage[r] == records[t].first_passage[r]);
      } else {
        CHECK(std::isnan(back[t].first_passage[r]));
      }
    }
  }
}

TEST_CASE("canonical configs fill defaults and reject junk") {
  const json cfg = canonical_config("sweep-lmcrw", json{{"trials", 7}});
  CHECK(cfg["trials"] == 7);
  CHECK(cfg["evaluations"] == 20);
  CHECK(cfg["arena"]["robot_count"] == 20);
  CHECK(cfg["rho_grid"].size() == 7);
  CHECK(cfg["mode"] == "sweep-lmcrw");

  // Nested partial override keeps sibling defaults.
  const json nested =
      canonical_config("sweep-lmcrw", json{{"arena", json{{"robot_count", 3}}}});
  CHECK(nested["arena"]["robot_count"] == 3);
  CHECK(nested["arena"]["arena_radius"] == 0.45);

  CHECK_THROWS_AS(canonical_config("sweep-lmcrw", json{{"tirals", 7}}), ConfigError);
  CHECK_THROWS_AS(canonical_config("sweep-lmcrw", json{{"mode", "evolve"}}), ConfigError);
  CHECK_THROWS_AS(canonical_config("sweep-lmcrw", json{{"trials", 0}}), ConfigError);
  CHECK_THROWS_AS(canonical_config("sweep-lmcrw", json{{"engine", "warp"}}), ConfigError);
  CHECK_THROWS_AS(canonical_config("rbn-study", json{{"sizes", {7}}}), ConfigError);
  CHECK_THROWS_AS(canonical_config("nonsense", json::object()), ConfigError);

  CHECK(config_hash(cfg) == config_hash(canonical_config("sweep-lmcrw", json{{"trials", 7}})));
  CHECK(config_hash(cfg) != config_hash(canonical_config("sweep-lmcrw", json::object())));
}

TEST_CASE("presets cover both scales and stay internally consistent") {
  const auto names = preset_names();
  CHECK(names.size() == 8);
  for (const std::string& name : names) {
    const json preset = preset_config(name);
    const std::string mode = preset.at("mode").get<std::string>();
    CHECK_NOTHROW(canonical_config(mode, preset));
  }
  const json desk = canonical_config("rbn-study", preset_config("desk-rbn-cohort"));
  CHECK(desk["evaluations"] == 5);
  CHECK(desk["trials"] == 30);
  CHECK(desk["networks_per_size"] == 30);
  CHECK(desk["sizes"] == json({18, 20, 30}));
  const json paper = canonical_config("evolve", preset_config("paper-evolve-N30"));
  CHECK(paper["network_size"] == 30);
  CHECK(paper["ga"]["generations"] == 700);
  CHECK(paper["ga"]["population"] == 40);
  CHECK(paper["runs"] == 6);
  CHECK_THROWS_AS(preset_config("desk-everything"), ConfigError);
}

TEST_CASE("replay writes reproducible records and command logs") {
  const fs::path a = fresh_dir("replay_a");
  const fs::path b = fresh_dir("replay_b");
  const json config{{"arena", small_arena_json()},
                    {"base_seed", 77},
                    {"trials", 2},
                    {"controller", json{{"type", "lmcrw"}, {"rho", 0.5}, {"alpha", 1.6}}}};
  run_replay(config, a);
  run_replay(config, b);
  for (const char* file : {"meta.json", "records.csv", "commands.csv"}) {
    CHECK(same_bytes(a / file, b / file));
  }
  const std::string commands = slurp(a / "commands.csv");
  CHECK(commands.find("trial,robot,tick,turn_angle,straight_ticks") != std::string::npos);
  CHECK(std::count(commands.begin(), commands.end(), '\n') > 3);
}

TEST_CASE("delta verb reports the content-seeded measurement") {
  const fs::path dir = fresh_dir("delta_verb");
  const BooleanNetwork net = BooleanNetwork::random(8, 2024);
  spit(dir / "net.bn", net.serialize());
  const json config{{"network_file", (dir / "net.bn").string()},
                    {"runs", 40},
                    {"horizon", 500},
                    {"trace_steps", 50}};
  run_delta(config, dir / "out");
  const json report = json::parse(slurp(dir / "out" / "delta.json"));
  CHECK(report["runs"] == 40);
  CHECK(report["horizon"] == 500);
  const double expect =
      measure_delta(net, 40, 500, derive_seed(topology_hash(net), seed_tag::kDeltaRun))
          .delta_mean;
  CHECK(report["delta_mean"].get<double>() == expect);
  CHECK(slurp(dir / "out" / "trace.csv").find("step,n0,n1") != std::string::npos);
}

TEST_CASE("post-eval and analyze agree on the refitted tables") {
  const fs::path dir = fresh_dir("posteval");
  const BooleanNetwork net = BooleanNetwork::random(6, 11);
  spit(dir / "net.bn", net.serialize());
  const json config{{"arena", small_arena_json()},
                    {"base_seed", 5},
                    {"network_file", (dir / "net.bn").string()},
                    {"evaluations", 3},
                    {"trials", 4}};
  run_post_eval(config, dir / "run");
  CHECK(fs::exists(dir / "run" / "result.json"));
  CHECK(fs::exists(dir / "run" / "records" / "eval2.csv"));

  run_analyze(json{{"run_dir", (dir / "run").string()}}, dir / "analysis");
  CHECK(same_bytes(dir / "run" / "fits.csv", dir / "analysis" / "fits.csv"));
  const json report = json::parse(slurp(dir / "analysis" / "report.json"));
  CHECK(report["mode"] == "post-eval");
  CHECK(report["tf_evals"].size() == 3);
  const json result = json::parse(slurp(dir / "run" / "result.json"));
  CHECK(report["delta"] == result["delta"]);
}

TEST_CASE("sweep runs, analyzes and reruns byte-identically") {
  const fs::path dir = fresh_dir("sweep_small");
  const json config{{"arena", small_arena_json()},
                    {"base_seed", 9},
                    {"rho_grid", {0.0, 0.75}},
                    {"alpha_grid", {1.8}},
                    {"evaluations", 3},
                    {"trials", 3}};
  run_sweep_lmcrw(config, dir / "a");
  run_sweep_lmcrw(config, dir / "b");
  CHECK(same_bytes(dir / "a" / "fits.csv", dir / "b" / "fits.csv"));
  CHECK(same_bytes(dir / "a" / "heatmap.csv", dir / "b" / "heatmap.csv"));
  CHECK(same_bytes(dir / "a" / "records" / "cell1_eval2.csv",
                   dir / "b" / "records" / "cell1_eval2.csv"));

  run_analyze(json{{"run_dir", (dir / "a").string()}}, dir / "analysis");
  CHECK(same_bytes(dir / "a" / "fits.csv", dir / "analysis" / "fits.csv"));
  CHECK(same_bytes(dir / "a" / "heatmap.csv", dir / "analysis" / "heatmap.csv"));
  const json report = json::parse(slurp(dir / "analysis" / "report.json"));
  CHECK(report["cells"].size() == 2);
}

TEST_CASE("evolve verb produces the full artifact set") {
  const fs::path dir = fresh_dir("evolve_small");
  const json config{{"arena", small_arena_json()},
                    {"base_seed", 3},
                    {"network_size", 4},
                    {"runs", 1},
                    {"ga", json{{"population", 4},
                                {"generations", 2},
                                {"eval_trials", 1},
                                {"post_eval_trials", 2}}},
                    {"evaluations", 3},
                    {"baseline_trials", 2}};
  run_evolve(config, dir / "run");
  for (const char* file :
       {"meta.json", "baseline_fits.csv", "fits.csv", "verdicts.csv", "summary.csv",
        "best.json", "run0/log.csv", "run0/hof.bn", "run0/gen0_best.bn",
        "run0/checkpoint.json", "run0/result.json", "run0/records/best_eval0.csv",
        "run0/records/gen0_eval2.csv"}) {
    CHECK(fs::exists(dir / "run" / file));
  }
  // Log covers generations 0..G inclusive plus the header.
  const std::string log = slurp(dir / "run" / "run0" / "log.csv");
  CHECK(std::count(log.begin(), log.end(), '\n') == 2 + 3);

  run_analyze(json{{"run_dir", (dir / "run").string()}}, dir / "analysis");
  CHECK(same_bytes(dir / "run" / "fits.csv", dir / "analysis" / "fits.csv"));
  CHECK(same_bytes(dir / "run" / "verdicts.csv", dir / "analysis" / "verdicts.csv"));
}

TEST_CASE("the CLI maps outcomes to exit codes") {
  CHECK(run_cli("--help >/dev/null") == 0);
  CHECK(run_cli("sweep-lmcrw") == 1);  // --out is required
  CHECK(run_cli("delta --network does_not_exist.bn --out unit_work/cli_x") == 1);
  CHECK(run_cli("evolve --preset desk-lmcrw-grid --out unit_work/cli_x") == 1);

  const fs::path dir = fresh_dir("cli_replay");
  const json config{{"mode", "replay"},
                    {"arena", small_arena_json()},
                    {"base_seed", 12},
                    {"trials", 1},
                    {"controller", json{{"type", "lmcrw"}, {"rho", 0.75}, {"alpha", 1.8}}}};
  spit(dir / "config.json", config.dump());
  const std::string base = "replay --config " + (dir / "config.json").string();
  CHECK(run_cli(base + " --out " + (dir / "a").string()) == 0);
  CHECK(run_cli(base + " --out " + (dir / "b").string()) == 0);
  CHECK(same_bytes(dir / "a" / "records.csv", dir / "b" / "records.csv"));
  CHECK(run_cli(base + " --seed 13 --out " + (dir / "c").string()) == 0);
  CHECK_FALSE(same_bytes(dir / "a" / "records.csv", dir / "c" / "records.csv"));
}
