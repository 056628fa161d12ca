#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bnswarm/bn.hpp"
#include "bnswarm/errors.hpp"
#include "bnswarm/experiment.hpp"

namespace {

using nlohmann::json;

struct VerbArgs {
  CLI::App* cmd = nullptr;
  std::string config_path;
  std::string preset;
  std::string out;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string run_dir;   // analyze only
  std::string network;   // delta / post-eval only
};

json build_config(const std::string& mode, const VerbArgs& args) {
  json config = json::object();
  if (!args.preset.empty()) {
    config = bnswarm::preset_config(args.preset);
    const std::string preset_mode = config.value("mode", "");
    if (preset_mode != mode) {
      throw bnswarm::ConfigError("preset '" + args.preset + "' is for verb '" + preset_mode +
                                 "', not '" + mode + "'");
    }
  }
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path, std::ios::binary);
    if (!in) throw bnswarm::ConfigError("cannot open " + args.config_path);
    json user;
    try {
      user = json::parse(in);
    } catch (const json::exception& e) {
      throw bnswarm::ConfigError(args.config_path + ": " + e.what());
    }
    if (!user.is_object()) {
      throw bnswarm::ConfigError(args.config_path + ": expected a JSON object");
    }
    // File keys replace preset keys wholesale, nested blocks included.
    for (const auto& [key, value] : user.items()) config[key] = value;
  }
  if (args.cmd->count("--seed") > 0) config["base_seed"] = args.seed;
  if (!args.run_dir.empty()) config["run_dir"] = args.run_dir;
  if (!args.network.empty()) config["network_file"] = args.network;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarm target-search simulator and analysis toolkit"};
  app.require_subcommand(1);

  const std::vector<std::string> verbs = {"sweep-lmcrw", "rbn-study", "evolve", "post-eval",
                                          "delta",       "analyze",   "replay"};
  const std::map<std::string, std::string> blurbs = {
      {"sweep-lmcrw", "grid-sweep the LMCRW parameter space"},
      {"rbn-study", "evaluate cohorts of random Boolean network controllers"},
      {"evolve", "run the genetic search over network controllers"},
      {"post-eval", "re-evaluate a stored network controller"},
      {"delta", "measure a network's perturbation sensitivity"},
      {"analyze", "recompute the derived tables of a finished run"},
      {"replay", "run trials with full motion-command logging"}};

  std::map<std::string, VerbArgs> args;
  for (const std::string& verb : verbs) {
    VerbArgs& a = args[verb];
    a.cmd = app.add_subcommand(verb, blurbs.at(verb));
    a.cmd->add_option("--config", a.config_path, "JSON config file");
    a.cmd->add_option("--preset", a.preset, "named preset to start from");
    a.cmd->add_option("--seed", a.seed, "override the base seed");
    a.cmd->add_option("--out", a.out, "output directory")->required();
    a.cmd->add_option("--workers", a.workers, "worker thread cap (0 = library default)");
    if (verb == "analyze") {
      a.cmd->add_option("--run-dir", a.run_dir, "finished run to analyze");
    }
    if (verb == "delta" || verb == "post-eval") {
      a.cmd->add_option("--network", a.network, "stored network file");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    for (const std::string& verb : verbs) {
      const VerbArgs& a = args.at(verb);
      if (!a.cmd->parsed()) continue;
      if (a.workers > 0) {
#ifdef _OPENMP
        omp_set_num_threads(a.workers);
#endif
      }
      bnswarm::run_verb(verb, build_config(verb, a), a.out);
      return 0;
    }
    std::fprintf(stderr, "error: no verb selected\n");
    return 1;
  } catch (const bnswarm::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const bnswarm::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 2;
  }
}
