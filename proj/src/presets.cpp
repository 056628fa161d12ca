#include "bnswarm/experiment.hpp"

#include "bnswarm/errors.hpp"

namespace bnswarm {

using nlohmann::json;

namespace {

// The paper-* presets pin the full study settings; the desk-* presets shrink
// the batch sizes enough to finish on a workstation while keeping every
// analysis step meaningful (comparisons need a handful of evaluations).

json paper_lmcrw_grid() { return json{{"mode", "sweep-lmcrw"}, {"base_seed", 9001}}; }

json desk_lmcrw_grid() {
  return json{{"mode", "sweep-lmcrw"},
              {"base_seed", 9002},
              {"evaluations", 5},
              {"trials", 30}};
}

json paper_rbn_cohort() { return json{{"mode", "rbn-study"}, {"base_seed", 9003}}; }

json desk_rbn_cohort() {
  return json{{"mode", "rbn-study"},
              {"base_seed", 9004},
              {"sizes", {18, 20, 30}},
              {"networks_per_size", 30},
              {"evaluations", 5},
              {"trials", 30}};
}

json paper_evolve(int network_size, int base_seed) {
  return json{{"mode", "evolve"}, {"base_seed", base_seed}, {"network_size", network_size}};
}

json desk_evolve(int network_size, int base_seed) {
  return json{{"mode", "evolve"},
              {"base_seed", base_seed},
              {"network_size", network_size},
              {"runs", 2},
              {"ga", json{{"generations", 100}, {"post_eval_trials", 30}}},
              {"evaluations", 5},
              {"baseline_trials", 30}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"paper-lmcrw-grid", "desk-lmcrw-grid",  "paper-rbn-cohort", "desk-rbn-cohort",
          "paper-evolve-N20", "paper-evolve-N30", "desk-evolve-N20",  "desk-evolve-N30"};
}

json preset_config(const std::string& name) {
  if (name == "paper-lmcrw-grid") return paper_lmcrw_grid();
  if (name == "desk-lmcrw-grid") return desk_lmcrw_grid();
  if (name == "paper-rbn-cohort") return paper_rbn_cohort();
  if (name == "desk-rbn-cohort") return desk_rbn_cohort();
  if (name == "paper-evolve-N20") return paper_evolve(20, 9005);
  if (name == "paper-evolve-N30") return paper_evolve(30, 9006);
  if (name == "desk-evolve-N20") return desk_evolve(20, 9007);
  if (name == "desk-evolve-N30") return desk_evolve(30, 9008);
  std::string known;
  for (const std::string& n : preset_names()) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace bnswarm
