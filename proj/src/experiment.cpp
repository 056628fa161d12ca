#include "bnswarm/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "bnswarm/chaos.hpp"
#include "bnswarm/controllers.hpp"
#include "bnswarm/errors.hpp"
#include "bnswarm/evolution.hpp"
#include "bnswarm/rng.hpp"
#include "bnswarm/stats.hpp"
#include "bnswarm/survival.hpp"

namespace bnswarm {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// number text
// ---------------------------------------------------------------------------

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  const char* begin = field.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ConfigError("malformed numeric field '" + field + "'");
  }
  return value;
}

namespace {

long long parse_int(const std::string& field) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const long long value = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ConfigError("malformed integer field '" + field + "'");
  }
  return value;
}

std::string hex16(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

// JSON never carries inf or NaN, so non-finite doubles travel as strings.
json jnum(double value) {
  if (std::isfinite(value)) return value;
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

double jnum_get(const json& value, const char* context) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string& s = value.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigError(std::string(context) + ": expected a number");
}

// ---------------------------------------------------------------------------
// typed config accessors (all failures become ConfigError)
// ---------------------------------------------------------------------------

const json& jfield(const json& j, const char* key, const std::string& ctx) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(ctx + ": missing key '" + key + "'");
  return *it;
}

double jd(const json& j, const char* key, const std::string& ctx) {
  const json& v = jfield(j, key, ctx);
  if (!v.is_number()) throw ConfigError(ctx + "." + key + ": expected a number");
  return v.get<double>();
}

int ji(const json& j, const char* key, const std::string& ctx) {
  const json& v = jfield(j, key, ctx);
  if (!v.is_number_integer()) throw ConfigError(ctx + "." + key + ": expected an integer");
  const long long x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ConfigError(ctx + "." + key + ": out of range");
  }
  return static_cast<int>(x);
}

std::uint64_t ju(const json& j, const char* key, const std::string& ctx) {
  const json& v = jfield(j, key, ctx);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const long long x = v.get<long long>();
    if (x >= 0) return static_cast<std::uint64_t>(x);
  }
  throw ConfigError(ctx + "." + key + ": expected a non-negative integer");
}

bool jb(const json& j, const char* key, const std::string& ctx) {
  const json& v = jfield(j, key, ctx);
  if (!v.is_boolean()) throw ConfigError(ctx + "." + key + ": expected a boolean");
  return v.get<bool>();
}

std::string js(const json& j, const char* key, const std::string& ctx) {
  const json& v = jfield(j, key, ctx);
  if (!v.is_string()) throw ConfigError(ctx + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> jvd(const json& j, const char* key, const std::string& ctx) {
  const json& v = jfield(j, key, ctx);
  if (!v.is_array() || v.empty()) {
    throw ConfigError(ctx + "." + key + ": expected a non-empty array");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number()) throw ConfigError(ctx + "." + key + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> jvi(const json& j, const char* key, const std::string& ctx) {
  const json& v = jfield(j, key, ctx);
  if (!v.is_array() || v.empty()) {
    throw ConfigError(ctx + "." + key + ": expected a non-empty array");
  }
  std::vector<int> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number_integer()) throw ConfigError(ctx + "." + key + ": expected integers");
    out.push_back(e.get<int>());
  }
  return out;
}

// ---------------------------------------------------------------------------
// file IO
// ---------------------------------------------------------------------------

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("read failed: " + path.string());
  return text;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create " + path.string());
  out << content;
  if (!out.good()) throw std::runtime_error("write failed: " + path.string());
}

json parse_json_file(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

BooleanNetwork load_network(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return BooleanNetwork::deserialize(text);
  } catch (const ParseError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV plumbing
// ---------------------------------------------------------------------------

std::string csv_preamble(std::uint64_t config_hash, std::uint64_t base_seed) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "# config %016llx seed %llu\n",
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(base_seed));
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

struct CsvFile {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

CsvFile read_csv(const fs::path& path) {
  const std::string text = read_file(path);
  CsvFile csv;
  std::string::size_type pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (csv.columns.empty()) {
      csv.columns = split_fields(line);
    } else {
      auto fields = split_fields(line);
      if (fields.size() != csv.columns.size()) {
        throw ConfigError(path.string() + ": row has " + std::to_string(fields.size()) +
                          " fields, expected " + std::to_string(csv.columns.size()));
      }
      csv.rows.push_back(std::move(fields));
    }
  }
  if (csv.columns.empty()) throw ConfigError(path.string() + ": no header row");
  return csv;
}

constexpr const char* kRecordColumns =
    "trial,robot,first_passage_s,censored_flag,target_x,target_y";

}  // namespace

void write_records_csv(const fs::path& path, const std::vector<TrialRecord>& records,
                       std::uint64_t config_hash, std::uint64_t base_seed) {
  std::string out = csv_preamble(config_hash, base_seed);
  out += kRecordColumns;
  out += '\n';
  for (std::size_t t = 0; t < records.size(); ++t) {
    const TrialRecord& rec = records[t];
    for (std::size_t r = 0; r < rec.first_passage.size(); ++r) {
      out += std::to_string(t);
      out += ',';
      out += std::to_string(r);
      out += ',';
      if (!rec.censored[r]) out += format_double(rec.first_passage[r]);
      out += ',';
      out += rec.censored[r] ? '1' : '0';
      out += ',';
      out += format_double(rec.target_x);
      out += ',';
      out += format_double(rec.target_y);
      out += '\n';
    }
  }
  write_file(path, out);
}

std::vector<TrialRecord> read_records_csv(const fs::path& path) {
  const CsvFile csv = read_csv(path);
  if (csv.columns != split_fields(kRecordColumns)) {
    throw ConfigError(path.string() + ": unexpected columns");
  }
  std::vector<TrialRecord> records;
  for (const auto& row : csv.rows) {
    const long long trial = parse_int(row[0]);
    const long long robot = parse_int(row[1]);
    if (trial == static_cast<long long>(records.size())) {
      records.emplace_back();
      records.back().target_x = parse_double(row[4]);
      records.back().target_y = parse_double(row[5]);
    } else if (trial + 1 != static_cast<long long>(records.size())) {
      throw ConfigError(path.string() + ": trial indices out of order");
    }
    TrialRecord& rec = records.back();
    if (robot != static_cast<long long>(rec.first_passage.size())) {
      throw ConfigError(path.string() + ": robot indices out of order");
    }
    const bool censored = parse_int(row[3]) != 0;
    rec.first_passage.push_back(parse_double(row[2]));
    rec.censored.push_back(censored ? 1 : 0);
  }
  return records;
}

// ---------------------------------------------------------------------------
// config canonicalization
// ---------------------------------------------------------------------------

namespace {

json arena_defaults() {
  return json{{"arena_radius", 0.45},
              {"target_radius", 0.015},
              {"detection_distance", 0.03},
              {"robot_count", 20},
              {"trial_duration", 3000.0},
              {"ticks_per_second", 32},
              {"bias_mean", 0.00015},
              {"bias_std", 0.00270},
              {"body_radius", 0.0165},
              {"wheel_base", 0.025},
              {"linear_speed", 0.01},
              {"rotation_speed", std::numbers::pi / 4.0}};
}

json ga_defaults() {
  return json{{"population", 40},
              {"generations", 700},
              {"eval_trials", 8},
              {"p_crossover", 0.5},
              {"p_mutation", 0.05},
              {"sbx_eta", 20.0},
              {"mutation_eta", 20.0},
              {"post_eval_trials", 100},
              {"per_individual_crossover", false},
              {"reseed_layouts_each_generation", false}};
}

json baseline_defaults() { return json{{"rho", 0.75}, {"alpha", 1.8}}; }

json grid_defaults() {
  return json{{"rho_grid", {0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9}},
              {"alpha_grid", {1.2, 1.4, 1.6, 1.8, 2.0}}};
}

json defaults_for(const std::string& mode, const json& user) {
  json d;
  if (mode == "sweep-lmcrw") {
    d = grid_defaults();
    d["arena"] = arena_defaults();
    d["base_seed"] = 1;
    d["engine"] = "fast";
    d["evaluations"] = 20;
    d["trials"] = 100;
  } else if (mode == "rbn-study") {
    d["arena"] = arena_defaults();
    d["base_seed"] = 1;
    d["engine"] = "fast";
    d["sizes"] = {18, 20, 22, 24, 26, 28, 30};
    d["networks_per_size"] = 100;
    d["evaluations"] = 20;
    d["trials"] = 100;
    d["baseline"] = baseline_defaults();
  } else if (mode == "evolve") {
    d["arena"] = arena_defaults();
    d["base_seed"] = 1;
    d["engine"] = "fast";
    d["network_size"] = 20;
    d["runs"] = 6;
    d["ga"] = ga_defaults();
    d["evaluations"] = 20;
    d["baseline_trials"] = 100;
    d["baseline"] = baseline_defaults();
    d["resume"] = false;
  } else if (mode == "post-eval") {
    d["arena"] = arena_defaults();
    d["base_seed"] = 1;
    d["engine"] = "fast";
    d["network_file"] = "";
    d["evaluations"] = 20;
    d["trials"] = 100;
  } else if (mode == "delta") {
    d["network_file"] = "";
    d["runs"] = kDeltaRuns;
    d["horizon"] = kDeltaHorizon;
    d["trace_steps"] = 200;
    d["base_seed"] = 1;
  } else if (mode == "replay") {
    d["arena"] = arena_defaults();
    d["base_seed"] = 1;
    d["engine"] = "fast";
    d["trials"] = 1;
    // The controller block's keys depend on its type.
    std::string type = "lmcrw";
    if (user.contains("controller") && user["controller"].is_object() &&
        user["controller"].contains("type") && user["controller"]["type"].is_string()) {
      type = user["controller"]["type"].get<std::string>();
    }
    if (type == "bn") {
      d["controller"] = json{{"type", "bn"}, {"network_file", ""}};
    } else {
      d["controller"] = json{{"type", "lmcrw"}, {"rho", 0.75}, {"alpha", 1.8}};
    }
  } else if (mode == "analyze") {
    d["run_dir"] = "";
  } else {
    throw ConfigError("unknown verb '" + mode + "'");
  }
  return d;
}

json merge_over_defaults(const json& defaults, const json& user, const std::string& ctx) {
  if (!user.is_object()) throw ConfigError(ctx + ": expected an object");
  json out = defaults;
  for (const auto& [key, value] : user.items()) {
    const auto it = defaults.find(key);
    if (it == defaults.end()) throw ConfigError(ctx + ": unknown key '" + key + "'");
    if (it->is_object()) {
      out[key] = merge_over_defaults(*it, value, ctx + "." + key);
    } else {
      out[key] = value;
    }
  }
  return out;
}

ArenaConfig arena_from_json(const json& j) {
  const std::string ctx = "arena";
  ArenaConfig arena;
  arena.arena_radius = jd(j, "arena_radius", ctx);
  arena.target_radius = jd(j, "target_radius", ctx);
  arena.detection_distance = jd(j, "detection_distance", ctx);
  arena.robot_count = ji(j, "robot_count", ctx);
  arena.trial_duration = jd(j, "trial_duration", ctx);
  arena.ticks_per_second = ji(j, "ticks_per_second", ctx);
  arena.bias_mean = jd(j, "bias_mean", ctx);
  arena.bias_std = jd(j, "bias_std", ctx);
  arena.body_radius = jd(j, "body_radius", ctx);
  arena.wheel_base = jd(j, "wheel_base", ctx);
  arena.linear_speed = jd(j, "linear_speed", ctx);
  arena.rotation_speed = jd(j, "rotation_speed", ctx);
  validate(arena);
  return arena;
}

GaConfig ga_from_json(const json& j, int network_size) {
  const std::string ctx = "ga";
  GaConfig config;
  config.network_size = network_size;
  config.population = ji(j, "population", ctx);
  config.generations = ji(j, "generations", ctx);
  config.eval_trials = ji(j, "eval_trials", ctx);
  config.p_crossover = jd(j, "p_crossover", ctx);
  config.p_mutation = jd(j, "p_mutation", ctx);
  config.sbx_eta = jd(j, "sbx_eta", ctx);
  config.mutation_eta = jd(j, "mutation_eta", ctx);
  config.post_eval_trials = ji(j, "post_eval_trials", ctx);
  config.per_individual_crossover = jb(j, "per_individual_crossover", ctx);
  config.reseed_layouts_each_generation = jb(j, "reseed_layouts_each_generation", ctx);
  validate(config);
  return config;
}

Engine engine_from_json(const json& cfg, const std::string& ctx) {
  const std::string name = js(cfg, "engine", ctx);
  if (name == "fast") return Engine::Fast;
  if (name == "reference") return Engine::Reference;
  throw ConfigError(ctx + ".engine: expected 'fast' or 'reference'");
}

void check_network_size(int size, const std::string& what) {
  if (size < 4 || size > 64 || size % 2 != 0) {
    throw ConfigError(what + ": network size must be even and within [4, 64]");
  }
}

void check_rho_alpha(double rho, double alpha, const std::string& ctx) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError(ctx + ": rho must lie in [0, 1]");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ConfigError(ctx + ": alpha must lie in (0, 2]");
}

void check_positive(int value, const char* key, const std::string& ctx) {
  if (value < 1) throw ConfigError(ctx + "." + key + ": must be at least 1");
}

void validate_canonical(const std::string& mode, const json& cfg) {
  if (mode == "analyze") {
    if (js(cfg, "run_dir", mode).empty()) throw ConfigError("analyze.run_dir: required");
    return;
  }
  if (mode == "delta") {
    if (js(cfg, "network_file", mode).empty()) {
      throw ConfigError("delta.network_file: required");
    }
    check_positive(ji(cfg, "runs", mode), "runs", mode);
    check_positive(ji(cfg, "horizon", mode), "horizon", mode);
    check_positive(ji(cfg, "trace_steps", mode), "trace_steps", mode);
    ju(cfg, "base_seed", mode);
    return;
  }

  arena_from_json(jfield(cfg, "arena", mode));
  ju(cfg, "base_seed", mode);
  engine_from_json(cfg, mode);

  if (mode == "sweep-lmcrw") {
    for (const double rho : jvd(cfg, "rho_grid", mode)) check_rho_alpha(rho, 1.0, mode);
    for (const double alpha : jvd(cfg, "alpha_grid", mode)) check_rho_alpha(0.0, alpha, mode);
    check_positive(ji(cfg, "evaluations", mode), "evaluations", mode);
    check_positive(ji(cfg, "trials", mode), "trials", mode);
  } else if (mode == "rbn-study") {
    for (const int size : jvi(cfg, "sizes", mode)) check_network_size(size, mode + ".sizes");
    check_positive(ji(cfg, "networks_per_size", mode), "networks_per_size", mode);
    const int evaluations = ji(cfg, "evaluations", mode);
    check_positive(evaluations, "evaluations", mode);
    if (evaluations < 3) throw ConfigError(mode + ".evaluations: need at least 3 to compare");
    check_positive(ji(cfg, "trials", mode), "trials", mode);
    const json& baseline = jfield(cfg, "baseline", mode);
    check_rho_alpha(jd(baseline, "rho", "baseline"), jd(baseline, "alpha", "baseline"),
                    mode + ".baseline");
  } else if (mode == "evolve") {
    const int network_size = ji(cfg, "network_size", mode);
    check_network_size(network_size, mode + ".network_size");
    check_positive(ji(cfg, "runs", mode), "runs", mode);
    ga_from_json(jfield(cfg, "ga", mode), network_size);
    const int evaluations = ji(cfg, "evaluations", mode);
    check_positive(evaluations, "evaluations", mode);
    if (evaluations < 3) throw ConfigError(mode + ".evaluations: need at least 3 to compare");
    check_positive(ji(cfg, "baseline_trials", mode), "baseline_trials", mode);
    const json& baseline = jfield(cfg, "baseline", mode);
    check_rho_alpha(jd(baseline, "rho", "baseline"), jd(baseline, "alpha", "baseline"),
                    mode + ".baseline");
    jb(cfg, "resume", mode);
  } else if (mode == "post-eval") {
    if (js(cfg, "network_file", mode).empty()) {
      throw ConfigError("post-eval.network_file: required");
    }
    check_positive(ji(cfg, "evaluations", mode), "evaluations", mode);
    check_positive(ji(cfg, "trials", mode), "trials", mode);
  } else if (mode == "replay") {
    check_positive(ji(cfg, "trials", mode), "trials", mode);
    const json& controller = jfield(cfg, "controller", mode);
    const std::string type = js(controller, "type", "controller");
    if (type == "lmcrw") {
      check_rho_alpha(jd(controller, "rho", "controller"), jd(controller, "alpha", "controller"),
                      mode + ".controller");
    } else if (type == "bn") {
      if (js(controller, "network_file", "controller").empty()) {
        throw ConfigError("replay.controller.network_file: required");
      }
    } else {
      throw ConfigError("replay.controller.type: expected 'lmcrw' or 'bn'");
    }
  }
}

}  // namespace

json canonical_config(const std::string& mode, json user) {
  if (user.is_null()) user = json::object();
  if (!user.is_object()) throw ConfigError("config: expected a JSON object");
  if (user.contains("mode")) {
    if (!user["mode"].is_string() || user["mode"].get<std::string>() != mode) {
      throw ConfigError("config: mode does not match verb '" + mode + "'");
    }
    user.erase("mode");
  }
  json canonical = merge_over_defaults(defaults_for(mode, user), user, mode);
  validate_canonical(mode, canonical);
  canonical["mode"] = mode;
  return canonical;
}

std::uint64_t config_hash(const json& canonical) { return fnv1a(canonical.dump()); }

// ---------------------------------------------------------------------------
// shared run machinery
// ---------------------------------------------------------------------------

namespace {

struct RunMeta {
  json config;
  std::uint64_t hash = 0;
  std::uint64_t seed = 0;
};

RunMeta prepare_run(const std::string& mode, const json& user, const fs::path& out) {
  RunMeta meta;
  meta.config = canonical_config(mode, user);
  meta.hash = config_hash(meta.config);
  meta.seed = ju(meta.config, "base_seed", mode);
  fs::create_directories(out);
  const json m{{"mode", mode},
               {"base_seed", meta.seed},
               {"config_hash", hex16(meta.hash)},
               {"config", meta.config}};
  write_file(out / "meta.json", m.dump(2) + "\n");
  return meta;
}

// Weibull fit of a batch; a fit that fails to converge degrades to the same
// +inf sentinel a too-sparse batch gets, so pipelines never abort on one bad
// cell.
WeibullFit fit_records(const std::vector<TrialRecord>& records, double trial_duration) {
  const std::vector<Observation> obs = to_observations(records, trial_duration);
  try {
    return fit_weibull(obs);
  } catch (const std::runtime_error&) {
    WeibullFit fit;
    fit.lambda = fit.k = fit.residual = std::numeric_limits<double>::quiet_NaN();
    fit.mean_fpt = std::numeric_limits<double>::infinity();
    for (const Observation& o : obs) {
      if (o.censored) {
        ++fit.n_censored;
      } else {
        ++fit.n_events;
      }
    }
    fit.degenerate = true;
    return fit;
  }
}

std::pair<double, int> finite_mean(const std::vector<double>& values) {
  double sum = 0.0;
  int n = 0;
  for (const double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  }
  if (n == 0) return {std::numeric_limits<double>::infinity(), 0};
  return {sum / n, n};
}

void append_fit_fields(std::string& row, const WeibullFit& fit) {
  row += format_double(fit.lambda);
  row += ',';
  row += format_double(fit.k);
  row += ',';
  row += format_double(fit.mean_fpt);
  row += ',';
  row += format_double(fit.residual);
  row += ',';
  row += std::to_string(fit.n_events);
  row += ',';
  row += std::to_string(fit.n_censored);
  row += ',';
  row += fit.degenerate ? '1' : '0';
}

constexpr const char* kFitColumns = "lambda,k,mean_fpt,residual,n_events,n_censored,degenerate";

// ---- sweep ----------------------------------------------------------------

struct SweepFitRow {
  int cell = 0;
  int evaluation = 0;
  double rho = 0.0;
  double alpha = 0.0;
  WeibullFit fit;
};

std::string sweep_record_name(int cell, int evaluation) {
  return "cell" + std::to_string(cell) + "_eval" + std::to_string(evaluation) + ".csv";
}

std::string render_sweep_fits(const std::vector<SweepFitRow>& rows, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "rho,alpha,cell,evaluation,";
  out += kFitColumns;
  out += '\n';
  for (const SweepFitRow& row : rows) {
    out += format_double(row.rho);
    out += ',';
    out += format_double(row.alpha);
    out += ',';
    out += std::to_string(row.cell);
    out += ',';
    out += std::to_string(row.evaluation);
    out += ',';
    append_fit_fields(out, row.fit);
    out += '\n';
  }
  return out;
}

struct HeatmapCell {
  int cell = 0;
  double rho = 0.0;
  double alpha = 0.0;
  double mean_tf = 0.0;
  int evaluations = 0;
  int degenerate = 0;
};

std::vector<HeatmapCell> heatmap_cells(const std::vector<SweepFitRow>& rows) {
  std::vector<HeatmapCell> cells;
  for (const SweepFitRow& row : rows) {
    if (cells.empty() || cells.back().cell != row.cell) {
      cells.push_back({row.cell, row.rho, row.alpha, 0.0, 0, 0});
    }
    HeatmapCell& cell = cells.back();
    cell.mean_tf += row.fit.mean_fpt;
    ++cell.evaluations;
    if (row.fit.degenerate) ++cell.degenerate;
  }
  for (HeatmapCell& cell : cells) cell.mean_tf /= cell.evaluations;
  return cells;
}

std::string render_heatmap(const std::vector<HeatmapCell>& cells, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "rho,alpha,cell,mean_tf,n_evaluations,n_degenerate\n";
  for (const HeatmapCell& cell : cells) {
    out += format_double(cell.rho);
    out += ',';
    out += format_double(cell.alpha);
    out += ',';
    out += std::to_string(cell.cell);
    out += ',';
    out += format_double(cell.mean_tf);
    out += ',';
    out += std::to_string(cell.evaluations);
    out += ',';
    out += std::to_string(cell.degenerate);
    out += '\n';
  }
  return out;
}

// ---- evaluation-indexed fit tables (baseline, post-eval) -------------------

struct EvalFit {
  int evaluation = 0;
  WeibullFit fit;
};

std::string render_eval_fits(const std::vector<EvalFit>& fits, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "evaluation,";
  out += kFitColumns;
  out += '\n';
  for (const EvalFit& f : fits) {
    out += std::to_string(f.evaluation);
    out += ',';
    append_fit_fields(out, f.fit);
    out += '\n';
  }
  return out;
}

struct BaselineData {
  std::vector<EvalFit> fits;
  std::vector<double> tf;  // per-evaluation mean first-passage time
};

// The LMCRW reference sample shared by the comparison studies: one batch per
// evaluation at the configured (rho, alpha), written under baseline_records/.
BaselineData run_baseline(const fs::path& out, const ArenaConfig& arena, double rho,
                          double alpha, int evaluations, int trials, Engine engine,
                          const RunMeta& meta) {
  fs::create_directories(out / "baseline_records");
  const std::uint64_t baseline_seed = derive_seed(meta.seed, seed_tag::kBaseline);
  const LmcrwSpec spec{{rho, alpha}, {}};
  const TrialOptions options{engine, false};
  BaselineData data;
  for (int e = 0; e < evaluations; ++e) {
    const std::uint64_t eval_seed = derive_seed(baseline_seed, seed_tag::kEvaluation, e);
    const auto records = run_trials(arena, spec, eval_seed, trials, options);
    write_records_csv(out / "baseline_records" / ("eval" + std::to_string(e) + ".csv"),
                      records, meta.hash, meta.seed);
    const WeibullFit fit = fit_records(records, arena.trial_duration);
    data.fits.push_back({e, fit});
    data.tf.push_back(fit.mean_fpt);
  }
  write_file(out / "baseline_fits.csv", render_eval_fits(data.fits, meta));
  return data;
}

// Baseline re-read for analyze: same fits from the stored batches.
BaselineData refit_baseline(const fs::path& run_dir, int evaluations, double trial_duration) {
  BaselineData data;
  for (int e = 0; e < evaluations; ++e) {
    const auto records =
        read_records_csv(run_dir / "baseline_records" / ("eval" + std::to_string(e) + ".csv"));
    const WeibullFit fit = fit_records(records, trial_duration);
    data.fits.push_back({e, fit});
    data.tf.push_back(fit.mean_fpt);
  }
  return data;
}

// ---- rbn study ------------------------------------------------------------

struct RbnFitRow {
  int size = 0;
  int net = 0;
  int evaluation = 0;
  WeibullFit fit;
};

std::string rbn_record_name(int size, int net, int evaluation) {
  return "size" + std::to_string(size) + "_net" + std::to_string(net) + "_eval" +
         std::to_string(evaluation) + ".csv";
}

std::string rbn_network_name(int size, int net) {
  return "size" + std::to_string(size) + "_net" + std::to_string(net) + ".bn";
}

std::string render_rbn_fits(const std::vector<RbnFitRow>& rows, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "size,net,evaluation,";
  out += kFitColumns;
  out += '\n';
  for (const RbnFitRow& row : rows) {
    out += std::to_string(row.size);
    out += ',';
    out += std::to_string(row.net);
    out += ',';
    out += std::to_string(row.evaluation);
    out += ',';
    append_fit_fields(out, row.fit);
    out += '\n';
  }
  return out;
}

struct NetworkRow {
  int size = 0;
  int net = 0;
  std::string file;
  std::uint64_t thash = 0;
  double delta = 0.0;
  std::string regime;
  double dbar = 0.0;
  double tf = 0.0;  // mean over finite evaluations, +inf when none
  int n_finite = 0;
  ComparisonVerdict verdict;
};

std::string render_networks(const std::vector<NetworkRow>& rows, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "size,net,file,topology_hash,delta,regime,dbar,tf,n_finite_evals,"
         "test,p_value,threshold,verdict\n";
  for (const NetworkRow& row : rows) {
    out += std::to_string(row.size);
    out += ',';
    out += std::to_string(row.net);
    out += ',';
    out += row.file;
    out += ',';
    out += hex16(row.thash);
    out += ',';
    out += format_double(row.delta);
    out += ',';
    out += row.regime;
    out += ',';
    out += format_double(row.dbar);
    out += ',';
    out += format_double(row.tf);
    out += ',';
    out += std::to_string(row.n_finite);
    out += ',';
    out += row.verdict.test;
    out += ',';
    out += format_double(row.verdict.p_value);
    out += ',';
    out += format_double(row.verdict.threshold);
    out += ',';
    out += verdict_name(row.verdict.label);
    out += '\n';
  }
  return out;
}

std::string render_scatter(const std::vector<NetworkRow>& rows, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "size,net,delta,dbar,tf\n";
  for (const NetworkRow& row : rows) {
    out += std::to_string(row.size);
    out += ',';
    out += std::to_string(row.net);
    out += ',';
    out += format_double(row.delta);
    out += ',';
    out += format_double(row.dbar);
    out += ',';
    out += format_double(row.tf);
    out += '\n';
  }
  return out;
}

struct CorrRow {
  int size = 0;
  std::string pair;
  int n = 0;
  double r = std::numeric_limits<double>::quiet_NaN();
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
};

CorrRow correlate(int size, const char* pair, const std::vector<double>& x,
                  const std::vector<double>& y) {
  CorrRow row;
  row.size = size;
  row.pair = pair;
  row.n = static_cast<int>(x.size());
  if (x.size() >= 3) {
    try {
      const Regression reg = pearson_correlation(x, y);
      row.r = reg.r;
      row.slope = reg.slope;
      row.intercept = reg.intercept;
    } catch (const std::domain_error&) {
      // zero-variance input keeps the NaN placeholders
    }
  }
  return row;
}

// Networks whose every evaluation came back unfittable carry a +inf score and
// no usable point estimate, so they are left out of the per-size means and
// correlation panels (their verdicts still count them).
std::vector<CorrRow> size_correlations(int size, const std::vector<NetworkRow>& rows) {
  std::vector<double> delta, dbar, tf;
  for (const NetworkRow& row : rows) {
    if (row.size != size || !std::isfinite(row.tf)) continue;
    delta.push_back(row.delta);
    dbar.push_back(row.dbar);
    tf.push_back(row.tf);
  }
  return {correlate(size, "delta_tf", delta, tf), correlate(size, "dbar_tf", dbar, tf)};
}

std::string render_correlations(const std::vector<CorrRow>& rows, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "size,pair,n,r,slope,intercept\n";
  for (const CorrRow& row : rows) {
    out += std::to_string(row.size);
    out += ',';
    out += row.pair;
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.r);
    out += ',';
    out += format_double(row.slope);
    out += ',';
    out += format_double(row.intercept);
    out += '\n';
  }
  return out;
}

struct VerdictTally {
  int n = 0;
  int worse = 0;
  int similar = 0;
  int better = 0;

  void add(Verdict v) {
    ++n;
    if (v == Verdict::Worse) ++worse;
    if (v == Verdict::Similar) ++similar;
    if (v == Verdict::Better) ++better;
  }
};

void append_tally(std::string& out, const VerdictTally& tally) {
  out += std::to_string(tally.n);
  out += ',';
  out += std::to_string(tally.worse);
  out += ',';
  out += std::to_string(tally.similar);
  out += ',';
  out += std::to_string(tally.better);
  out += ',';
  out += format_double(100.0 * tally.worse / tally.n);
  out += ',';
  out += format_double(100.0 * tally.similar / tally.n);
  out += ',';
  out += format_double(100.0 * tally.better / tally.n);
}

std::string render_rbn_summary(const std::vector<int>& sizes,
                               const std::vector<NetworkRow>& rows, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "size,n_networks,n_worse,n_similar,n_better,pct_worse,pct_similar,pct_better\n";
  for (const int size : sizes) {
    VerdictTally tally;
    for (const NetworkRow& row : rows) {
      if (row.size == size) tally.add(row.verdict.label);
    }
    out += std::to_string(size);
    out += ',';
    append_tally(out, tally);
    out += '\n';
  }
  return out;
}

json correlation_json(const CorrRow& row) {
  return json{{"n", row.n},
              {"r", jnum(row.r)},
              {"slope", jnum(row.slope)},
              {"intercept", jnum(row.intercept)}};
}

// ---- evolve ---------------------------------------------------------------

struct EvolveRunRow {
  int run = 0;
  double train_fitness = 0.0;
  double tf = 0.0;
  double dbar = 0.0;
  double delta = 0.0;
  ComparisonVerdict verdict;
};

std::string render_verdicts(const std::vector<EvolveRunRow>& rows, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "run,train_fitness,tf,dbar,delta,test,p_value,threshold,verdict\n";
  for (const EvolveRunRow& row : rows) {
    out += std::to_string(row.run);
    out += ',';
    out += format_double(row.train_fitness);
    out += ',';
    out += format_double(row.tf);
    out += ',';
    out += format_double(row.dbar);
    out += ',';
    out += format_double(row.delta);
    out += ',';
    out += row.verdict.test;
    out += ',';
    out += format_double(row.verdict.p_value);
    out += ',';
    out += format_double(row.verdict.threshold);
    out += ',';
    out += verdict_name(row.verdict.label);
    out += '\n';
  }
  return out;
}

std::string render_evolve_summary(int size, const std::vector<EvolveRunRow>& rows,
                                  const RunMeta& meta) {
  VerdictTally tally;
  for (const EvolveRunRow& row : rows) tally.add(row.verdict.label);
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "size,n_runs,n_worse,n_similar,n_better,pct_worse,pct_similar,pct_better\n";
  out += std::to_string(size);
  out += ',';
  append_tally(out, tally);
  out += '\n';
  return out;
}

struct EvolveFitRow {
  int run = 0;
  std::string phase;  // "best" or "gen0"
  int evaluation = 0;
  WeibullFit fit;
};

std::string render_evolve_fits(const std::vector<EvolveFitRow>& rows, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "run,phase,evaluation,";
  out += kFitColumns;
  out += '\n';
  for (const EvolveFitRow& row : rows) {
    out += std::to_string(row.run);
    out += ',';
    out += row.phase;
    out += ',';
    out += std::to_string(row.evaluation);
    out += ',';
    append_fit_fields(out, row.fit);
    out += '\n';
  }
  return out;
}

std::string render_ga_log(const std::vector<GenerationLog>& log, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "generation,best_tf,mean_tf,delta_of_best\n";
  for (const GenerationLog& entry : log) {
    out += std::to_string(entry.generation);
    out += ',';
    out += format_double(entry.best_tf);
    out += ',';
    out += format_double(entry.mean_tf);
    out += ',';
    out += format_double(entry.delta_of_best);
    out += '\n';
  }
  return out;
}

json genome_to_json(const Genome& genome) { return json(genome.genes); }

Genome genome_from_json(const json& j, int network_size, const char* context) {
  if (!j.is_array()) throw ConfigError(std::string(context) + ": expected a gene array");
  Genome genome;
  genome.network_size = network_size;
  genome.genes.reserve(j.size());
  for (const json& g : j) {
    if (!g.is_number()) throw ConfigError(std::string(context) + ": expected numbers");
    genome.genes.push_back(g.get<double>());
  }
  const std::size_t expected = static_cast<std::size_t>(network_size) * network_size +
                               static_cast<std::size_t>(network_size) * (network_size - 1);
  if (genome.genes.size() != expected) {
    throw ConfigError(std::string(context) + ": wrong gene count");
  }
  return genome;
}

json checkpoint_to_json(const GaCheckpoint& cp, int network_size) {
  json population = json::array();
  for (const Genome& g : cp.population) population.push_back(genome_to_json(g));
  json log = json::array();
  for (const GenerationLog& entry : cp.log) {
    log.push_back(json{{"generation", entry.generation},
                       {"best_tf", jnum(entry.best_tf)},
                       {"mean_tf", jnum(entry.mean_tf)},
                       {"delta_of_best", jnum(entry.delta_of_best)}});
  }
  json out{{"next_generation", cp.next_generation},
           {"network_size", network_size},
           {"population", std::move(population)},
           {"best_fitness", jnum(cp.best_fitness)},
           {"generation0_best_fitness", jnum(cp.generation0_best_fitness)},
           {"log", std::move(log)}};
  // Before the first evaluation there is no best individual yet.
  out["best"] = cp.next_generation > 0 ? genome_to_json(cp.best) : json();
  out["generation0_best"] =
      cp.next_generation > 0 ? genome_to_json(cp.generation0_best) : json();
  return out;
}

GaCheckpoint checkpoint_from_json(const json& j, int network_size) {
  const std::string ctx = "checkpoint";
  GaCheckpoint cp;
  cp.next_generation = ji(j, "next_generation", ctx);
  if (cp.next_generation < 0) throw ConfigError("checkpoint: negative generation");
  if (ji(j, "network_size", ctx) != network_size) {
    throw ConfigError("checkpoint: network size does not match the config");
  }
  const json& population = jfield(j, "population", ctx);
  if (!population.is_array()) throw ConfigError("checkpoint.population: expected an array");
  for (const json& g : population) {
    cp.population.push_back(genome_from_json(g, network_size, "checkpoint.population"));
  }
  cp.best_fitness = jnum_get(jfield(j, "best_fitness", ctx), "checkpoint.best_fitness");
  cp.generation0_best_fitness = jnum_get(jfield(j, "generation0_best_fitness", ctx),
                                         "checkpoint.generation0_best_fitness");
  if (cp.next_generation > 0) {
    cp.best = genome_from_json(jfield(j, "best", ctx), network_size, "checkpoint.best");
    cp.generation0_best = genome_from_json(jfield(j, "generation0_best", ctx), network_size,
                                           "checkpoint.generation0_best");
  }
  const json& log = jfield(j, "log", ctx);
  if (!log.is_array()) throw ConfigError("checkpoint.log: expected an array");
  for (const json& entry : log) {
    GenerationLog e;
    e.generation = ji(entry, "generation", "checkpoint.log");
    e.best_tf = jnum_get(jfield(entry, "best_tf", ctx), "checkpoint.log.best_tf");
    e.mean_tf = jnum_get(jfield(entry, "mean_tf", ctx), "checkpoint.log.mean_tf");
    e.delta_of_best =
        jnum_get(jfield(entry, "delta_of_best", ctx), "checkpoint.log.delta_of_best");
    cp.log.push_back(e);
  }
  return cp;
}

json fit_to_json(const WeibullFit& fit) {
  return json{{"lambda", jnum(fit.lambda)},
              {"k", jnum(fit.k)},
              {"mean_fpt", jnum(fit.mean_fpt)},
              {"residual", jnum(fit.residual)},
              {"n_events", fit.n_events},
              {"n_censored", fit.n_censored},
              {"degenerate", fit.degenerate}};
}

// Post-run evaluation series of one genome: `evaluations` independent
// batches, records persisted per batch so the whole series can be re-fitted
// offline.
struct PostSeries {
  std::vector<EvalFit> fits;
  std::vector<double> tf;
  double tf_mean = std::numeric_limits<double>::infinity();
  int n_finite = 0;
  double dbar = std::numeric_limits<double>::quiet_NaN();
};

PostSeries post_series(const Genome& genome, const ArenaConfig& arena, int trials,
                       int evaluations, std::uint64_t run_seed, Engine engine,
                       const fs::path& record_dir, const std::string& prefix,
                       const RunMeta& meta) {
  PostSeries series;
  double straight_sum = 0.0;
  std::int64_t straight_count = 0;
  for (int e = 0; e < evaluations; ++e) {
    const std::uint64_t eval_seed = derive_seed(run_seed, seed_tag::kEvaluation, e);
    const PostEvaluation pe = post_evaluate(genome, arena, trials, eval_seed, engine);
    write_records_csv(record_dir / (prefix + "_eval" + std::to_string(e) + ".csv"),
                      pe.records, meta.hash, meta.seed);
    series.fits.push_back({e, pe.fit});
    series.tf.push_back(pe.fit.mean_fpt);
    for (const TrialRecord& rec : pe.records) {
      straight_sum += rec.straight_sum_s;
      straight_count += rec.straight_count;
    }
  }
  std::tie(series.tf_mean, series.n_finite) = finite_mean(series.tf);
  if (straight_count > 0) series.dbar = straight_sum / straight_count;
  return series;
}

// ---- activation rasters ----------------------------------------------------

std::string render_trace(const ActivationTrace& trace, int size, const RunMeta& meta) {
  std::string out = csv_preamble(meta.hash, meta.seed);
  out += "step";
  for (int n = 0; n < size; ++n) {
    out += ",n";
    out += std::to_string(n);
  }
  out += '\n';
  for (std::size_t t = 0; t < trace.rows.size(); ++t) {
    out += std::to_string(t);
    for (const std::uint8_t bit : trace.rows[t]) {
      out += ',';
      out += bit ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// verbs
// ---------------------------------------------------------------------------

void run_sweep_lmcrw(const json& config, const fs::path& out) {
  const RunMeta meta = prepare_run("sweep-lmcrw", config, out);
  const json& cfg = meta.config;
  const ArenaConfig arena = arena_from_json(cfg["arena"]);
  const Engine engine = engine_from_json(cfg, "sweep-lmcrw");
  const auto rhos = jvd(cfg, "rho_grid", "sweep-lmcrw");
  const auto alphas = jvd(cfg, "alpha_grid", "sweep-lmcrw");
  const int evaluations = ji(cfg, "evaluations", "sweep-lmcrw");
  const int trials = ji(cfg, "trials", "sweep-lmcrw");

  fs::create_directories(out / "records");
  const TrialOptions options{engine, false};
  std::vector<SweepFitRow> rows;
  for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      const int cell = static_cast<int>(ri * alphas.size() + ai);
      const std::uint64_t cell_seed = derive_seed(meta.seed, seed_tag::kCell, cell);
      const LmcrwSpec spec{{rhos[ri], alphas[ai]}, {}};
      for (int e = 0; e < evaluations; ++e) {
        const std::uint64_t eval_seed = derive_seed(cell_seed, seed_tag::kEvaluation, e);
        const auto records = run_trials(arena, spec, eval_seed, trials, options);
        write_records_csv(out / "records" / sweep_record_name(cell, e), records, meta.hash,
                          meta.seed);
        rows.push_back({cell, e, rhos[ri], alphas[ai], fit_records(records, arena.trial_duration)});
      }
    }
  }
  write_file(out / "fits.csv", render_sweep_fits(rows, meta));
  write_file(out / "heatmap.csv", render_heatmap(heatmap_cells(rows), meta));
}

void run_rbn_study(const json& config, const fs::path& out) {
  const RunMeta meta = prepare_run("rbn-study", config, out);
  const json& cfg = meta.config;
  const ArenaConfig arena = arena_from_json(cfg["arena"]);
  const Engine engine = engine_from_json(cfg, "rbn-study");
  const auto sizes = jvi(cfg, "sizes", "rbn-study");
  const int per_size = ji(cfg, "networks_per_size", "rbn-study");
  const int evaluations = ji(cfg, "evaluations", "rbn-study");
  const int trials = ji(cfg, "trials", "rbn-study");
  const double rho = jd(cfg["baseline"], "rho", "baseline");
  const double alpha = jd(cfg["baseline"], "alpha", "baseline");

  fs::create_directories(out / "records");
  fs::create_directories(out / "networks");
  const BaselineData baseline =
      run_baseline(out, arena, rho, alpha, evaluations, trials, engine, meta);

  const TrialOptions options{engine, false};
  std::vector<RbnFitRow> fit_rows;
  std::vector<NetworkRow> net_rows;
  for (const int size : sizes) {
    const std::uint64_t size_seed = derive_seed(meta.seed, seed_tag::kNetwork, size);
    for (int i = 0; i < per_size; ++i) {
      const std::uint64_t net_seed = derive_seed(size_seed, i);
      const BooleanNetwork net =
          BooleanNetwork::random(size, derive_seed(net_seed, seed_tag::kNetwork));
      const std::string file = rbn_network_name(size, i);
      write_file(out / "networks" / file, net.serialize());

      const BnSpec spec{net, {}};
      std::vector<double> sample;
      double straight_sum = 0.0;
      std::int64_t straight_count = 0;
      for (int e = 0; e < evaluations; ++e) {
        const std::uint64_t eval_seed = derive_seed(net_seed, seed_tag::kEvaluation, e);
        const auto records = run_trials(arena, spec, eval_seed, trials, options);
        write_records_csv(out / "records" / rbn_record_name(size, i, e), records, meta.hash,
                          meta.seed);
        const WeibullFit fit = fit_records(records, arena.trial_duration);
        fit_rows.push_back({size, i, e, fit});
        sample.push_back(fit.mean_fpt);
        for (const TrialRecord& rec : records) {
          straight_sum += rec.straight_sum_s;
          straight_count += rec.straight_count;
        }
      }

      NetworkRow row;
      row.size = size;
      row.net = i;
      row.file = "networks/" + file;
      row.thash = topology_hash(net);
      const SensitivityResult delta = delta_of_network(net);
      row.delta = delta.delta_mean;
      row.regime = regime_name(classify(delta));
      row.dbar = straight_count > 0 ? straight_sum / straight_count
                                    : std::numeric_limits<double>::quiet_NaN();
      std::tie(row.tf, row.n_finite) = finite_mean(sample);
      row.verdict = compare(sample, baseline.tf, per_size);
      net_rows.push_back(std::move(row));
    }
  }

  write_file(out / "fits.csv", render_rbn_fits(fit_rows, meta));
  write_file(out / "networks.csv", render_networks(net_rows, meta));
  write_file(out / "scatter.csv", render_scatter(net_rows, meta));
  std::vector<CorrRow> corr;
  for (const int size : sizes) {
    for (CorrRow& row : size_correlations(size, net_rows)) corr.push_back(std::move(row));
  }
  write_file(out / "correlations.csv", render_correlations(corr, meta));
  write_file(out / "summary.csv", render_rbn_summary(sizes, net_rows, meta));
}

void run_evolve(const json& config, const fs::path& out) {
  const RunMeta meta = prepare_run("evolve", config, out);
  const json& cfg = meta.config;
  const ArenaConfig arena = arena_from_json(cfg["arena"]);
  const Engine engine = engine_from_json(cfg, "evolve");
  const int network_size = ji(cfg, "network_size", "evolve");
  const int runs = ji(cfg, "runs", "evolve");
  const GaConfig ga = ga_from_json(cfg["ga"], network_size);
  const int evaluations = ji(cfg, "evaluations", "evolve");
  const int baseline_trials = ji(cfg, "baseline_trials", "evolve");
  const double rho = jd(cfg["baseline"], "rho", "baseline");
  const double alpha = jd(cfg["baseline"], "alpha", "baseline");
  const bool resume = jb(cfg, "resume", "evolve");

  const BaselineData baseline =
      run_baseline(out, arena, rho, alpha, evaluations, baseline_trials, engine, meta);

  // One sensitivity measurement per distinct topology; the measurement is
  // seeded from the topology itself, so caching cannot change any value.
  std::unordered_map<std::uint64_t, SensitivityResult> delta_cache;
  const auto cached_delta = [&](const BooleanNetwork& net) -> const SensitivityResult& {
    const std::uint64_t key = topology_hash(net);
    const auto it = delta_cache.find(key);
    if (it != delta_cache.end()) return it->second;
    return delta_cache.emplace(key, delta_of_network(net)).first->second;
  };

  std::vector<EvolveRunRow> run_rows;
  std::vector<EvolveFitRow> fit_rows;
  for (int r = 0; r < runs; ++r) {
    const fs::path run_dir = out / ("run" + std::to_string(r));
    fs::create_directories(run_dir / "records");
    const std::uint64_t run_seed = derive_seed(meta.seed, seed_tag::kGaRun, r);

    const FitnessFn fitness = make_sim_fitness(ga, arena, run_seed, engine);
    const DeltaFn delta_fn = [&](const Genome& genome) {
      return cached_delta(decode_genome(genome)).delta_mean;
    };
    const CheckpointFn on_generation = [&](const GaCheckpoint& cp) {
      write_file(run_dir / "checkpoint.json",
                 checkpoint_to_json(cp, network_size).dump(2) + "\n");
    };
    std::optional<GaCheckpoint> resume_cp;
    if (resume && fs::exists(run_dir / "checkpoint.json")) {
      resume_cp =
          checkpoint_from_json(parse_json_file(run_dir / "checkpoint.json"), network_size);
    }
    const EvolutionResult result = run_evolution(ga, run_seed, fitness, delta_fn,
                                                 on_generation,
                                                 resume_cp ? &*resume_cp : nullptr);

    write_file(run_dir / "log.csv", render_ga_log(result.log, meta));
    const BooleanNetwork best_net = decode_genome(result.best);
    write_file(run_dir / "hof.bn", best_net.serialize());
    write_file(run_dir / "gen0_best.bn", decode_genome(result.generation0_best).serialize());

    const PostSeries best = post_series(result.best, arena, ga.post_eval_trials, evaluations,
                                        run_seed, engine, run_dir / "records", "best", meta);
    const PostSeries gen0 =
        post_series(result.generation0_best, arena, ga.post_eval_trials, evaluations,
                    run_seed, engine, run_dir / "records", "gen0", meta);
    for (const EvalFit& f : best.fits) fit_rows.push_back({r, "best", f.evaluation, f.fit});
    for (const EvalFit& f : gen0.fits) fit_rows.push_back({r, "gen0", f.evaluation, f.fit});

    const SensitivityResult& delta = cached_delta(best_net);
    EvolveRunRow row;
    row.run = r;
    row.train_fitness = result.best_fitness;
    row.tf = best.tf_mean;
    row.dbar = best.dbar;
    row.delta = delta.delta_mean;
    row.verdict = compare(best.tf, baseline.tf, runs);
    run_rows.push_back(row);

    const auto side = [&](const PostSeries& series, double train, const char* network,
                          const BooleanNetwork& net) {
      json tf_evals = json::array();
      for (const double v : series.tf) tf_evals.push_back(jnum(v));
      json fits = json::array();
      for (const EvalFit& f : series.fits) fits.push_back(fit_to_json(f.fit));
      const SensitivityResult& d = cached_delta(net);
      return json{{"train_fitness", jnum(train)},
                  {"tf", jnum(series.tf_mean)},
                  {"tf_evals", std::move(tf_evals)},
                  {"n_finite_evals", series.n_finite},
                  {"dbar", jnum(series.dbar)},
                  {"delta", d.delta_mean},
                  {"regime", regime_name(classify(d))},
                  {"topology_hash", hex16(topology_hash(net))},
                  {"network", network},
                  {"fits", std::move(fits)}};
    };
    const json result_json{
        {"run", r},
        {"best", side(best, result.best_fitness, "hof.bn", best_net)},
        {"generation0_best", side(gen0, result.generation0_best_fitness, "gen0_best.bn",
                                  decode_genome(result.generation0_best))}};
    write_file(run_dir / "result.json", result_json.dump(2) + "\n");
  }

  write_file(out / "fits.csv", render_evolve_fits(fit_rows, meta));
  write_file(out / "verdicts.csv", render_verdicts(run_rows, meta));
  write_file(out / "summary.csv", render_evolve_summary(network_size, run_rows, meta));

  // Champion across runs by post-evaluated score, earliest run on ties.
  int champion = 0;
  for (int r = 1; r < runs; ++r) {
    if (run_rows[r].tf < run_rows[champion].tf) champion = r;
  }
  const json best_json{{"run", champion},
                       {"tf", jnum(run_rows[champion].tf)},
                       {"dbar", jnum(run_rows[champion].dbar)},
                       {"delta", run_rows[champion].delta},
                       {"network", "run" + std::to_string(champion) + "/hof.bn"}};
  write_file(out / "best.json", best_json.dump(2) + "\n");
}

void run_post_eval(const json& config, const fs::path& out) {
  const RunMeta meta = prepare_run("post-eval", config, out);
  const json& cfg = meta.config;
  const ArenaConfig arena = arena_from_json(cfg["arena"]);
  const Engine engine = engine_from_json(cfg, "post-eval");
  const int evaluations = ji(cfg, "evaluations", "post-eval");
  const int trials = ji(cfg, "trials", "post-eval");
  const BooleanNetwork net = load_network(js(cfg, "network_file", "post-eval"));

  fs::create_directories(out / "records");
  const BnSpec spec{net, {}};
  const TrialOptions options{engine, false};
  std::vector<EvalFit> fits;
  std::vector<double> tf;
  double straight_sum = 0.0;
  std::int64_t straight_count = 0;
  for (int e = 0; e < evaluations; ++e) {
    const std::uint64_t eval_seed = derive_seed(meta.seed, seed_tag::kEvaluation, e);
    const auto records = run_trials(arena, spec, eval_seed, trials, options);
    write_records_csv(out / "records" / ("eval" + std::to_string(e) + ".csv"), records,
                      meta.hash, meta.seed);
    const WeibullFit fit = fit_records(records, arena.trial_duration);
    fits.push_back({e, fit});
    tf.push_back(fit.mean_fpt);
    for (const TrialRecord& rec : records) {
      straight_sum += rec.straight_sum_s;
      straight_count += rec.straight_count;
    }
  }
  write_file(out / "fits.csv", render_eval_fits(fits, meta));

  const auto [tf_mean, n_finite] = finite_mean(tf);
  const SensitivityResult delta = delta_of_network(net);
  json tf_evals = json::array();
  for (const double v : tf) tf_evals.push_back(jnum(v));
  const json result{{"tf", jnum(tf_mean)},
                    {"tf_evals", std::move(tf_evals)},
                    {"n_finite_evals", n_finite},
                    {"dbar", jnum(straight_count > 0
                                      ? straight_sum / straight_count
                                      : std::numeric_limits<double>::quiet_NaN())},
                    {"delta", delta.delta_mean},
                    {"regime", regime_name(classify(delta))},
                    {"topology_hash", hex16(topology_hash(net))}};
  write_file(out / "result.json", result.dump(2) + "\n");
}

void run_delta(const json& config, const fs::path& out) {
  const RunMeta meta = prepare_run("delta", config, out);
  const json& cfg = meta.config;
  const int runs = ji(cfg, "runs", "delta");
  const int horizon = ji(cfg, "horizon", "delta");
  const int trace_steps = ji(cfg, "trace_steps", "delta");
  const BooleanNetwork net = load_network(js(cfg, "network_file", "delta"));

  // Seeded from the topology, not base_seed: every pipeline that measures
  // this network gets the identical result.
  const std::uint64_t seed = derive_seed(topology_hash(net), seed_tag::kDeltaRun);
  const SensitivityResult result = measure_delta(net, runs, horizon, seed);

  ActivationTrace trace = activation_trace(net, trace_steps);
  std::optional<int> cycle_length = trace.cycle_length;
  std::optional<int> cycle_start = trace.cycle_start;
  if (!cycle_length) {
    // The plotting window came up short; probe further just for the period.
    const ActivationTrace probe = activation_trace(net, 100000);
    cycle_length = probe.cycle_length;
    cycle_start = probe.cycle_start;
  }

  json deltas = json::array();
  for (const double d : result.deltas) deltas.push_back(d);
  const json delta_json{{"delta_mean", result.delta_mean},
                        {"delta_runs", std::move(deltas)},
                        {"regime", regime_name(classify(result))},
                        {"runs", result.runs},
                        {"horizon", result.horizon},
                        {"cycle_length", cycle_length ? json(*cycle_length) : json()},
                        {"cycle_start", cycle_start ? json(*cycle_start) : json()},
                        {"topology_hash", hex16(topology_hash(net))}};
  write_file(out / "delta.json", delta_json.dump(2) + "\n");
  write_file(out / "trace.csv", render_trace(trace, net.size(), meta));
}

void run_replay(const json& config, const fs::path& out) {
  const RunMeta meta = prepare_run("replay", config, out);
  const json& cfg = meta.config;
  const ArenaConfig arena = arena_from_json(cfg["arena"]);
  const Engine engine = engine_from_json(cfg, "replay");
  const int trials = ji(cfg, "trials", "replay");
  const json& controller = cfg["controller"];

  ControllerSpec spec = LmcrwSpec{};
  if (js(controller, "type", "controller") == "bn") {
    spec = BnSpec{load_network(js(controller, "network_file", "controller")), {}};
  } else {
    spec = LmcrwSpec{{jd(controller, "rho", "controller"), jd(controller, "alpha", "controller")},
                     {}};
  }

  const TrialOptions options{engine, true};
  const auto records = run_trials(arena, spec, meta.seed, trials, options);
  write_records_csv(out / "records.csv", records, meta.hash, meta.seed);

  std::string commands = csv_preamble(meta.hash, meta.seed);
  commands += "trial,robot,tick,turn_angle,straight_ticks\n";
  for (std::size_t t = 0; t < records.size(); ++t) {
    for (const CommandLogEntry& entry : records[t].commands) {
      commands += std::to_string(t);
      commands += ',';
      commands += std::to_string(entry.robot);
      commands += ',';
      commands += std::to_string(entry.tick);
      commands += ',';
      commands += format_double(entry.turn_angle);
      commands += ',';
      commands += std::to_string(entry.straight_ticks);
      commands += '\n';
    }
  }
  write_file(out / "commands.csv", commands);
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

namespace {

json report_envelope(const std::string& mode, const fs::path& run_dir, const RunMeta& meta) {
  return json{{"mode", mode},
              {"run_dir", run_dir.string()},
              {"config_hash", hex16(meta.hash)},
              {"base_seed", meta.seed}};
}

void analyze_sweep(const fs::path& run_dir, const RunMeta& meta, const fs::path& out) {
  const json& cfg = meta.config;
  const ArenaConfig arena = arena_from_json(cfg["arena"]);
  const auto rhos = jvd(cfg, "rho_grid", "sweep-lmcrw");
  const auto alphas = jvd(cfg, "alpha_grid", "sweep-lmcrw");
  const int evaluations = ji(cfg, "evaluations", "sweep-lmcrw");

  std::vector<SweepFitRow> rows;
  std::string boxplot = csv_preamble(meta.hash, meta.seed);
  boxplot += "rho,alpha,cell,evaluation,tf\n";
  for (std::size_t ri = 0; ri < rhos.size(); ++ri) {
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      const int cell = static_cast<int>(ri * alphas.size() + ai);
      for (int e = 0; e < evaluations; ++e) {
        const auto records = read_records_csv(run_dir / "records" / sweep_record_name(cell, e));
        const WeibullFit fit = fit_records(records, arena.trial_duration);
        rows.push_back({cell, e, rhos[ri], alphas[ai], fit});
        boxplot += format_double(rhos[ri]);
        boxplot += ',';
        boxplot += format_double(alphas[ai]);
        boxplot += ',';
        boxplot += std::to_string(cell);
        boxplot += ',';
        boxplot += std::to_string(e);
        boxplot += ',';
        boxplot += format_double(fit.mean_fpt);
        boxplot += '\n';
      }
    }
  }
  write_file(out / "fits.csv", render_sweep_fits(rows, meta));
  const auto cells = heatmap_cells(rows);
  write_file(out / "heatmap.csv", render_heatmap(cells, meta));
  write_file(out / "boxplot.csv", boxplot);

  json cell_list = json::array();
  const HeatmapCell* min_cell = nullptr;
  for (const HeatmapCell& cell : cells) {
    cell_list.push_back(json{{"rho", cell.rho},
                             {"alpha", cell.alpha},
                             {"cell", cell.cell},
                             {"mean_tf", jnum(cell.mean_tf)},
                             {"n_degenerate", cell.degenerate}});
    if (std::isfinite(cell.mean_tf) && (!min_cell || cell.mean_tf < min_cell->mean_tf)) {
      min_cell = &cell;
    }
  }
  json report = report_envelope("sweep-lmcrw", run_dir, meta);
  report["cells"] = std::move(cell_list);
  report["min_cell"] = min_cell ? json{{"rho", min_cell->rho},
                                       {"alpha", min_cell->alpha},
                                       {"cell", min_cell->cell},
                                       {"mean_tf", min_cell->mean_tf}}
                                : json();
  write_file(out / "report.json", report.dump(2) + "\n");
}

void analyze_rbn(const fs::path& run_dir, const RunMeta& meta, const fs::path& out) {
  const json& cfg = meta.config;
  const ArenaConfig arena = arena_from_json(cfg["arena"]);
  const auto sizes = jvi(cfg, "sizes", "rbn-study");
  const int per_size = ji(cfg, "networks_per_size", "rbn-study");
  const int evaluations = ji(cfg, "evaluations", "rbn-study");

  const BaselineData baseline = refit_baseline(run_dir, evaluations, arena.trial_duration);
  write_file(out / "baseline_fits.csv", render_eval_fits(baseline.fits, meta));

  // The average straight duration is not derivable from the record CSVs (they
  // carry passage times only), so it is taken from the run's network table.
  std::map<std::pair<int, int>, double> dbar;
  {
    const CsvFile table = read_csv(run_dir / "networks.csv");
    auto column = [&](const char* name) {
      const auto it = std::find(table.columns.begin(), table.columns.end(), name);
      if (it == table.columns.end()) {
        throw ConfigError((run_dir / "networks.csv").string() + ": missing column " + name);
      }
      return static_cast<std::size_t>(it - table.columns.begin());
    };
    const std::size_t c_size = column("size"), c_net = column("net"), c_dbar = column("dbar");
    for (const auto& row : table.rows) {
      dbar[{static_cast<int>(parse_int(row[c_size])), static_cast<int>(parse_int(row[c_net]))}] =
          parse_double(row[c_dbar]);
    }
  }

  fs::create_directories(out / "rasters");
  std::vector<RbnFitRow> fit_rows;
  std::vector<NetworkRow> net_rows;
  std::string boxplot = csv_preamble(meta.hash, meta.seed);
  boxplot += "size,net,evaluation,tf\n";
  for (const int size : sizes) {
    for (int i = 0; i < per_size; ++i) {
      const std::string file = rbn_network_name(size, i);
      const BooleanNetwork net = load_network(run_dir / "networks" / file);

      std::vector<double> sample;
      for (int e = 0; e < evaluations; ++e) {
        const auto records = read_records_csv(run_dir / "records" / rbn_record_name(size, i, e));
        const WeibullFit fit = fit_records(records, arena.trial_duration);
        fit_rows.push_back({size, i, e, fit});
        sample.push_back(fit.mean_fpt);
        boxplot += std::to_string(size);
        boxplot += ',';
        boxplot += std::to_string(i);
        boxplot += ',';
        boxplot += std::to_string(e);
        boxplot += ',';
        boxplot += format_double(fit.mean_fpt);
        boxplot += '\n';
      }

      NetworkRow row;
      row.size = size;
      row.net = i;
      row.file = "networks/" + file;
      row.thash = topology_hash(net);
      const SensitivityResult delta = delta_of_network(net);
      row.delta = delta.delta_mean;
      row.regime = regime_name(classify(delta));
      const auto it = dbar.find({size, i});
      row.dbar = it != dbar.end() ? it->second : std::numeric_limits<double>::quiet_NaN();
      std::tie(row.tf, row.n_finite) = finite_mean(sample);
      row.verdict = compare(sample, baseline.tf, per_size);
      net_rows.push_back(std::move(row));

      write_file(out / "rasters" / (rbn_network_name(size, i) + ".csv"),
                 render_trace(activation_trace(net, 200), size, meta));
    }
  }

  write_file(out / "fits.csv", render_rbn_fits(fit_rows, meta));
  write_file(out / "networks.csv", render_networks(net_rows, meta));
  write_file(out / "scatter.csv", render_scatter(net_rows, meta));
  write_file(out / "boxplot.csv", boxplot);
  std::vector<CorrRow> corr;
  for (const int size : sizes) {
    for (CorrRow& row : size_correlations(size, net_rows)) corr.push_back(std::move(row));
  }
  write_file(out / "correlations.csv", render_correlations(corr, meta));
  write_file(out / "summary.csv", render_rbn_summary(sizes, net_rows, meta));

  json report = report_envelope("rbn-study", run_dir, meta);
  json size_list = json::array();
  for (const int size : sizes) {
    VerdictTally tally;
    std::vector<double> tf;
    for (const NetworkRow& row : net_rows) {
      if (row.size != size) continue;
      tally.add(row.verdict.label);
      if (std::isfinite(row.tf)) tf.push_back(row.tf);
    }
    const auto cr = size_correlations(size, net_rows);
    size_list.push_back(json{{"size", size},
                             {"n_networks", tally.n},
                             {"n_worse", tally.worse},
                             {"n_similar", tally.similar},
                             {"n_better", tally.better},
                             {"mean_tf", jnum(finite_mean(tf).first)},
                             {"correlations",
                              json{{"delta_tf", correlation_json(cr[0])},
                                   {"dbar_tf", correlation_json(cr[1])}}}});
  }
  report["sizes"] = std::move(size_list);
  json comparisons = json::array();
  for (const NetworkRow& row : net_rows) {
    comparisons.push_back(json{{"size", row.size},
                               {"net", row.net},
                               {"test", row.verdict.test},
                               {"p_value", jnum(row.verdict.p_value)},
                               {"p_corrected", jnum(std::min(1.0, row.verdict.p_value * per_size))},
                               {"threshold", row.verdict.threshold},
                               {"verdict", verdict_name(row.verdict.label)}});
  }
  report["comparisons"] = std::move(comparisons);
  write_file(out / "report.json", report.dump(2) + "\n");
}

void analyze_evolve(const fs::path& run_dir, const RunMeta& meta, const fs::path& out) {
  const json& cfg = meta.config;
  const ArenaConfig arena = arena_from_json(cfg["arena"]);
  const int network_size = ji(cfg, "network_size", "evolve");
  const int runs = ji(cfg, "runs", "evolve");
  const int evaluations = ji(cfg, "evaluations", "evolve");

  const BaselineData baseline = refit_baseline(run_dir, evaluations, arena.trial_duration);
  write_file(out / "baseline_fits.csv", render_eval_fits(baseline.fits, meta));

  fs::create_directories(out / "rasters");
  std::vector<EvolveRunRow> run_rows;
  std::vector<EvolveFitRow> fit_rows;
  json report_runs = json::array();
  for (int r = 0; r < runs; ++r) {
    const fs::path dir = run_dir / ("run" + std::to_string(r));
    const json result = parse_json_file(dir / "result.json");
    const json& best_side = jfield(result, "best", "result");

    const auto refit_phase = [&](const char* phase) {
      std::vector<double> tf;
      for (int e = 0; e < evaluations; ++e) {
        const auto records = read_records_csv(
            dir / "records" / (std::string(phase) + "_eval" + std::to_string(e) + ".csv"));
        const WeibullFit fit = fit_records(records, arena.trial_duration);
        fit_rows.push_back({r, phase, e, fit});
        tf.push_back(fit.mean_fpt);
      }
      return tf;
    };
    const std::vector<double> best_tf = refit_phase("best");
    refit_phase("gen0");

    const BooleanNetwork best_net = load_network(dir / "hof.bn");
    const SensitivityResult delta = delta_of_network(best_net);
    write_file(out / "rasters" / ("run" + std::to_string(r) + "_hof.csv"),
               render_trace(activation_trace(best_net, 200), network_size, meta));

    EvolveRunRow row;
    row.run = r;
    row.train_fitness = jnum_get(jfield(best_side, "train_fitness", "result"), "train_fitness");
    row.tf = finite_mean(best_tf).first;
    row.dbar = jnum_get(jfield(best_side, "dbar", "result"), "dbar");
    row.delta = delta.delta_mean;
    row.verdict = compare(best_tf, baseline.tf, runs);
    run_rows.push_back(row);

    report_runs.push_back(json{{"run", r},
                               {"train_fitness", jnum(row.train_fitness)},
                               {"tf", jnum(row.tf)},
                               {"dbar", jnum(row.dbar)},
                               {"delta", row.delta},
                               {"regime", regime_name(classify(delta))},
                               {"test", row.verdict.test},
                               {"p_value", jnum(row.verdict.p_value)},
                               {"p_corrected", jnum(std::min(1.0, row.verdict.p_value * runs))},
                               {"threshold", row.verdict.threshold},
                               {"verdict", verdict_name(row.verdict.label)}});
  }

  write_file(out / "fits.csv", render_evolve_fits(fit_rows, meta));
  write_file(out / "verdicts.csv", render_verdicts(run_rows, meta));
  write_file(out / "summary.csv", render_evolve_summary(network_size, run_rows, meta));

  VerdictTally tally;
  for (const EvolveRunRow& row : run_rows) tally.add(row.verdict.label);
  json report = report_envelope("evolve", run_dir, meta);
  report["runs"] = std::move(report_runs);
  report["summary"] = json{{"size", network_size},
                           {"n_runs", tally.n},
                           {"n_worse", tally.worse},
                           {"n_similar", tally.similar},
                           {"n_better", tally.better}};
  write_file(out / "report.json", report.dump(2) + "\n");
}

void analyze_post_eval(const fs::path& run_dir, const RunMeta& meta, const fs::path& out) {
  const json& cfg = meta.config;
  const ArenaConfig arena = arena_from_json(cfg["arena"]);
  const int evaluations = ji(cfg, "evaluations", "post-eval");

  std::vector<EvalFit> fits;
  std::vector<double> tf;
  for (int e = 0; e < evaluations; ++e) {
    const auto records =
        read_records_csv(run_dir / "records" / ("eval" + std::to_string(e) + ".csv"));
    const WeibullFit fit = fit_records(records, arena.trial_duration);
    fits.push_back({e, fit});
    tf.push_back(fit.mean_fpt);
  }
  write_file(out / "fits.csv", render_eval_fits(fits, meta));

  const json result = parse_json_file(run_dir / "result.json");
  const BooleanNetwork net = load_network(js(cfg, "network_file", "post-eval"));
  const SensitivityResult delta = delta_of_network(net);
  write_file(out / "raster.csv", render_trace(activation_trace(net, 200), net.size(), meta));

  const auto [tf_mean, n_finite] = finite_mean(tf);
  json tf_evals = json::array();
  for (const double v : tf) tf_evals.push_back(jnum(v));
  json report = report_envelope("post-eval", run_dir, meta);
  report["tf"] = jnum(tf_mean);
  report["tf_evals"] = std::move(tf_evals);
  report["n_finite_evals"] = n_finite;
  report["dbar"] = jfield(result, "dbar", "result");
  report["delta"] = delta.delta_mean;
  report["regime"] = regime_name(classify(delta));
  write_file(out / "report.json", report.dump(2) + "\n");
}

}  // namespace

void run_analyze(const json& config, const fs::path& out) {
  const json canonical = canonical_config("analyze", config);
  const fs::path run_dir = js(canonical, "run_dir", "analyze");
  const json meta_json = parse_json_file(run_dir / "meta.json");

  RunMeta meta;
  meta.config = jfield(meta_json, "config", "meta");
  const std::string hash_text = js(meta_json, "config_hash", "meta");
  meta.hash = std::strtoull(hash_text.c_str(), nullptr, 16);
  meta.seed = ju(meta_json, "base_seed", "meta");
  const std::string mode = js(meta_json, "mode", "meta");

  fs::create_directories(out);
  if (mode == "sweep-lmcrw") {
    analyze_sweep(run_dir, meta, out);
  } else if (mode == "rbn-study") {
    analyze_rbn(run_dir, meta, out);
  } else if (mode == "evolve") {
    analyze_evolve(run_dir, meta, out);
  } else if (mode == "post-eval") {
    analyze_post_eval(run_dir, meta, out);
  } else {
    throw ConfigError("analyze: runs of mode '" + mode + "' carry no refittable data");
  }
}

void run_verb(const std::string& mode, const json& config, const fs::path& out) {
  if (mode == "sweep-lmcrw") return run_sweep_lmcrw(config, out);
  if (mode == "rbn-study") return run_rbn_study(config, out);
  if (mode == "evolve") return run_evolve(config, out);
  if (mode == "post-eval") return run_post_eval(config, out);
  if (mode == "delta") return run_delta(config, out);
  if (mode == "replay") return run_replay(config, out);
  if (mode == "analyze") return run_analyze(config, out);
  throw ConfigError("unknown verb '" + mode + "'");
}

}  // namespace bnswarm
