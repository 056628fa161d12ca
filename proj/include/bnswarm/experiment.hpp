#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnswarm/sim.hpp"

namespace bnswarm {

// Named configuration bundles: full-scale study settings and scaled-down
// desk variants of the same pipelines. Unknown names raise ConfigError.
std::vector<std::string> preset_names();
nlohmann::json preset_config(const std::string& name);

// Fills in every default, rejects unknown keys, range-checks all values and
// returns the complete config object. That object is what meta.json echoes
// and what the config hash covers, so two runs agree on their hash exactly
// when they agree on every effective setting.
nlohmann::json canonical_config(const std::string& mode, nlohmann::json user);
std::uint64_t config_hash(const nlohmann::json& canonical);

// Number text used in all CSV output: shortest round-trip form, with "inf",
// "-inf" and "nan" for the non-finite values. parse_double inverts it and
// maps an empty field to NaN (censored first-passage entries).
std::string format_double(double value);
double parse_double(const std::string& field);

// Trial batches on disk: one row per robot, columns
// trial,robot,first_passage_s,censored_flag,target_x,target_y with the
// first-passage field left empty on censored rows. Lines starting with '#'
// carry the config hash and base seed.
void write_records_csv(const std::filesystem::path& path,
                       const std::vector<TrialRecord>& records,
                       std::uint64_t config_hash, std::uint64_t base_seed);
std::vector<TrialRecord> read_records_csv(const std::filesystem::path& path);

// Experiment pipelines. Each takes a (possibly partial) config object,
// completes it via canonical_config, creates the output directory and writes
// every artifact beneath it. All randomness stems from the config's
// base_seed, so rerunning any of these with the same config yields
// byte-identical files.
void run_sweep_lmcrw(const nlohmann::json& config, const std::filesystem::path& out);
void run_rbn_study(const nlohmann::json& config, const std::filesystem::path& out);
void run_evolve(const nlohmann::json& config, const std::filesystem::path& out);
void run_post_eval(const nlohmann::json& config, const std::filesystem::path& out);
void run_delta(const nlohmann::json& config, const std::filesystem::path& out);
void run_replay(const nlohmann::json& config, const std::filesystem::path& out);

// Re-derives fits, comparisons, correlations and regime labels from the
// stored CSVs of a finished run (no re-simulation) and writes them to a new
// directory together with a machine-readable report. The re-derived data
// files are byte-comparable with the source run's.
void run_analyze(const nlohmann::json& config, const std::filesystem::path& out);

// Dispatch by verb name; used by the command-line front end.
void run_verb(const std::string& mode, const nlohmann::json& config,
              const std::filesystem::path& out);

}  // namespace bnswarm
