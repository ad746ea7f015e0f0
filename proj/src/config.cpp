#include "bco/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bco::io {

using nlohmann::json;
using experiments::EnvironmentKind;
using experiments::Scenario;
using experiments::StartMode;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("unknown key: " + path + it.key());
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError("missing key: " + path + key);
  if (!obj[key].is_number()) throw ConfigError("expected number: " + path + key);
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& path) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_number()) throw ConfigError("expected number: " + path + key);
  return obj[key].get<double>();
}

int int_or(const json& obj, const std::string& key, int fallback, const std::string& path) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_number_integer()) throw ConfigError("expected integer: " + path + key);
  return obj[key].get<int>();
}

bool bool_or(const json& obj, const std::string& key, bool fallback, const std::string& path) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError("expected boolean: " + path + key);
  return obj[key].get<bool>();
}

std::string string_or(const json& obj, const std::string& key, const std::string& fallback,
                      const std::string& path) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_string()) throw ConfigError("expected string: " + path + key);
  return obj[key].get<std::string>();
}

void parse_learner(const json& obj, experiments::LearnerSettings& out) {
  const std::string path = "learner.";
  reject_unknown_keys(obj,
                      {"interval", "omega", "exploration_exponent", "step_scale", "step_exponent",
                       "constant_parameters", "eta_constant", "delta_constant", "start",
                       "truncation"},
                      path);
  if (obj.contains("interval")) {
    const auto& iv = obj["interval"];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      throw ConfigError("expected [lower, upper]: " + path + "interval");
    out.interval = Interval(iv[0].get<double>(), iv[1].get<double>());
  }
  out.omega = number_or(obj, "omega", out.omega, path);
  out.exploration_exponent = number_or(obj, "exploration_exponent", out.exploration_exponent, path);
  out.step_scale = number_or(obj, "step_scale", out.step_scale, path);
  out.step_exponent = number_or(obj, "step_exponent", out.step_exponent, path);
  out.constant_parameters = bool_or(obj, "constant_parameters", out.constant_parameters, path);
  out.eta_constant = number_or(obj, "eta_constant", out.eta_constant, path);
  out.delta_constant = number_or(obj, "delta_constant", out.delta_constant, path);
  if (obj.contains("start") && !obj["start"].is_null()) {
    const auto& start = obj["start"];
    if (start.is_string()) {
      const auto mode = start.get<std::string>();
      if (mode == "midpoint")
        out.start_mode = StartMode::midpoint;
      else if (mode == "random")
        out.start_mode = StartMode::random;
      else
        throw ConfigError("expected midpoint, random, or a number: " + path + "start");
    } else if (start.is_number()) {
      out.start_mode = StartMode::fixed;
      out.start_value = start.get<double>();
    } else {
      throw ConfigError("expected midpoint, random, or a number: " + path + "start");
    }
  }
  if (obj.contains("truncation") && !obj["truncation"].is_null()) {
    const auto& tr = obj["truncation"];
    const std::string tpath = path + "truncation.";
    reject_unknown_keys(tr, {"enabled", "multiplier", "lipschitz_bound"}, tpath);
    out.truncation.enabled = bool_or(tr, "enabled", out.truncation.enabled, tpath);
    out.truncation.multiplier = number_or(tr, "multiplier", out.truncation.multiplier, tpath);
    if (tr.contains("lipschitz_bound") && !tr["lipschitz_bound"].is_null())
      out.truncation.lipschitz_bound = require_number(tr, "lipschitz_bound", tpath);
  }
}

void parse_environment(const json& obj, experiments::EnvironmentSettings& out) {
  const std::string path = "environment.";
  reject_unknown_keys(obj,
                      {"type", "stations", "t_on", "lte_rate", "tau", "idle_slot", "phy_rate",
                       "frame_overhead", "aggregated_packets", "packet_bytes", "subframe",
                       "collision_prob", "batch_seconds", "toff_jitter"},
                      path);
  const std::string kind = string_or(obj, "type", "analytic", path);
  if (kind == "analytic")
    out.kind = EnvironmentKind::analytic;
  else if (kind == "simulator")
    out.kind = EnvironmentKind::simulator;
  else
    throw ConfigError("expected analytic or simulator: " + path + "type");
  out.stations = int_or(obj, "stations", out.stations, path);
  out.radio.t_on = number_or(obj, "t_on", out.radio.t_on, path);
  out.radio.lte_rate = number_or(obj, "lte_rate", out.radio.lte_rate, path);
  out.radio.tau = number_or(obj, "tau", out.radio.tau, path);
  out.radio.idle_slot = number_or(obj, "idle_slot", out.radio.idle_slot, path);
  out.radio.phy_rate = number_or(obj, "phy_rate", out.radio.phy_rate, path);
  out.radio.frame_overhead = number_or(obj, "frame_overhead", out.radio.frame_overhead, path);
  out.radio.aggregated_packets = int_or(obj, "aggregated_packets", out.radio.aggregated_packets, path);
  out.radio.packet_bytes = int_or(obj, "packet_bytes", out.radio.packet_bytes, path);
  out.radio.subframe = number_or(obj, "subframe", out.radio.subframe, path);
  if (obj.contains("collision_prob") && !obj["collision_prob"].is_null())
    out.radio.collision_prob = require_number(obj, "collision_prob", path);
  out.batch_seconds = number_or(obj, "batch_seconds", out.batch_seconds, path);
  out.toff_jitter = number_or(obj, "toff_jitter", out.toff_jitter, path);
}

void parse_dynamics(const json& obj, experiments::ExperimentPlan& plan) {
  const std::string path = "dynamics.";
  reject_unknown_keys(obj, {"mid_iteration_switch", "timeline"}, path);
  plan.mid_iteration_switch = bool_or(obj, "mid_iteration_switch", true, path);
  if (!obj.contains("timeline") || obj["timeline"].is_null()) return;
  const auto& timeline = obj["timeline"];
  if (!timeline.is_array()) throw ConfigError("expected array: " + path + "timeline");
  for (const auto& entry : timeline) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
        !entry[1].is_number_integer())
      throw ConfigError("expected [iteration, stations] pairs: " + path + "timeline");
    plan.dynamics.push_back({entry[0].get<int>(), entry[1].get<int>()});
  }
}

void parse_bound_check(const json& obj, experiments::BoundCheckSettings& out) {
  const std::string path = "bound_check.";
  reject_unknown_keys(
      obj, {"piece_stations", "switch_rounds", "rounds", "eta", "delta", "deviation_grid"}, path);
  if (obj.contains("piece_stations") && !obj["piece_stations"].is_null()) {
    if (!obj["piece_stations"].is_array())
      throw ConfigError("expected array: " + path + "piece_stations");
    out.piece_stations.clear();
    for (const auto& v : obj["piece_stations"]) {
      if (!v.is_number_integer()) throw ConfigError("expected integers: " + path + "piece_stations");
      out.piece_stations.push_back(v.get<int>());
    }
  }
  if (obj.contains("switch_rounds") && !obj["switch_rounds"].is_null()) {
    if (!obj["switch_rounds"].is_array())
      throw ConfigError("expected array: " + path + "switch_rounds");
    out.switch_rounds.clear();
    for (const auto& v : obj["switch_rounds"]) {
      if (!v.is_number_integer()) throw ConfigError("expected integers: " + path + "switch_rounds");
      out.switch_rounds.push_back(v.get<int>());
    }
  }
  out.rounds = int_or(obj, "rounds", out.rounds, path);
  if (obj.contains("eta") && !obj["eta"].is_null()) out.eta = require_number(obj, "eta", path);
  if (obj.contains("delta") && !obj["delta"].is_null())
    out.delta = require_number(obj, "delta", path);
  out.deviation_grid = int_or(obj, "deviation_grid", out.deviation_grid, path);
}

}  // namespace

RunConfig RunConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  reject_unknown_keys(doc,
                      {"scenario", "name", "iterations", "replications", "seeds", "parallel",
                       "convergence_tolerance_ms", "throughput_tolerance", "learner", "environment",
                       "dynamics", "bound_check", "output"},
                      "");
  RunConfig config;
  auto& plan = config.plan;
  if (!doc.contains("scenario") || !doc["scenario"].is_string())
    throw ConfigError("missing key: scenario");
  plan.scenario = experiments::scenario_from_string(doc["scenario"].get<std::string>());
  plan.name = string_or(doc, "name", experiments::to_string(plan.scenario), "");
  plan.iterations = int_or(doc, "iterations", plan.iterations, "");
  plan.replications = int_or(doc, "replications", plan.replications, "");
  if (doc.contains("seeds") && !doc["seeds"].is_null()) {
    if (!doc["seeds"].is_array()) throw ConfigError("expected array: seeds");
    for (const auto& v : doc["seeds"]) {
      if (!v.is_number_integer()) throw ConfigError("expected integers: seeds");
      plan.seeds.push_back(v.get<std::uint64_t>());
    }
    plan.replications = static_cast<int>(plan.seeds.size());
  }
  plan.parallel = bool_or(doc, "parallel", plan.parallel, "");
  plan.convergence_tolerance =
      number_or(doc, "convergence_tolerance_ms", plan.convergence_tolerance * 1e3, "") * 1e-3;
  plan.throughput_tolerance = number_or(doc, "throughput_tolerance", plan.throughput_tolerance, "");
  if (doc.contains("learner") && !doc["learner"].is_null()) parse_learner(doc["learner"], plan.learner);
  if (doc.contains("environment") && !doc["environment"].is_null())
    parse_environment(doc["environment"], plan.env);
  if (doc.contains("dynamics") && !doc["dynamics"].is_null()) parse_dynamics(doc["dynamics"], plan);
  if (doc.contains("bound_check") && !doc["bound_check"].is_null())
    parse_bound_check(doc["bound_check"], plan.bound_check);
  if (doc.contains("output") && !doc["output"].is_null()) {
    const auto& out = doc["output"];
    reject_unknown_keys(out, {"directory", "prefix"}, "output.");
    config.output.directory = string_or(out, "directory", config.output.directory, "output.");
    config.output.prefix = string_or(out, "prefix", config.output.prefix, "output.");
  }
  if (config.output.prefix.empty()) config.output.prefix = plan.name;

  try {
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

json RunConfig::to_json() const {
  json doc;
  doc["scenario"] = experiments::to_string(plan.scenario);
  doc["name"] = plan.name;
  doc["iterations"] = plan.iterations;
  doc["replications"] = plan.replications;
  if (plan.seeds.empty())
    doc["seeds"] = nullptr;
  else
    doc["seeds"] = plan.seeds;
  doc["parallel"] = plan.parallel;
  doc["convergence_tolerance_ms"] = plan.convergence_tolerance * 1e3;
  doc["throughput_tolerance"] = plan.throughput_tolerance;

  json learner;
  learner["interval"] = {plan.learner.interval.lower, plan.learner.interval.upper};
  learner["omega"] = plan.learner.omega;
  learner["exploration_exponent"] = plan.learner.exploration_exponent;
  learner["step_scale"] = plan.learner.step_scale;
  learner["step_exponent"] = plan.learner.step_exponent;
  learner["constant_parameters"] = plan.learner.constant_parameters;
  learner["eta_constant"] = plan.learner.eta_constant;
  learner["delta_constant"] = plan.learner.delta_constant;
  switch (plan.learner.start_mode) {
    case StartMode::midpoint: learner["start"] = "midpoint"; break;
    case StartMode::random: learner["start"] = "random"; break;
    case StartMode::fixed: learner["start"] = plan.learner.start_value; break;
  }
  json truncation;
  truncation["enabled"] = plan.learner.truncation.enabled;
  truncation["multiplier"] = plan.learner.truncation.multiplier;
  if (plan.learner.truncation.lipschitz_bound)
    truncation["lipschitz_bound"] = *plan.learner.truncation.lipschitz_bound;
  else
    truncation["lipschitz_bound"] = nullptr;
  learner["truncation"] = truncation;
  doc["learner"] = learner;

  json env;
  env["type"] = plan.env.kind == EnvironmentKind::analytic ? "analytic" : "simulator";
  env["stations"] = plan.env.stations;
  env["t_on"] = plan.env.radio.t_on;
  env["lte_rate"] = plan.env.radio.lte_rate;
  env["tau"] = plan.env.radio.tau;
  env["idle_slot"] = plan.env.radio.idle_slot;
  env["phy_rate"] = plan.env.radio.phy_rate;
  env["frame_overhead"] = plan.env.radio.frame_overhead;
  env["aggregated_packets"] = plan.env.radio.aggregated_packets;
  env["packet_bytes"] = plan.env.radio.packet_bytes;
  env["subframe"] = plan.env.radio.subframe;
  if (plan.env.radio.collision_prob)
    env["collision_prob"] = *plan.env.radio.collision_prob;
  else
    env["collision_prob"] = nullptr;
  env["batch_seconds"] = plan.env.batch_seconds;
  env["toff_jitter"] = plan.env.toff_jitter;
  doc["environment"] = env;

  json dynamics;
  dynamics["mid_iteration_switch"] = plan.mid_iteration_switch;
  json timeline = json::array();
  for (const auto& event : plan.dynamics) timeline.push_back({event.iteration, event.stations});
  dynamics["timeline"] = timeline;
  doc["dynamics"] = dynamics;

  json bound;
  bound["piece_stations"] = plan.bound_check.piece_stations;
  bound["switch_rounds"] = plan.bound_check.switch_rounds;
  bound["rounds"] = plan.bound_check.rounds;
  bound["eta"] = plan.bound_check.eta ? json(*plan.bound_check.eta) : json(nullptr);
  bound["delta"] = plan.bound_check.delta ? json(*plan.bound_check.delta) : json(nullptr);
  bound["deviation_grid"] = plan.bound_check.deviation_grid;
  doc["bound_check"] = bound;

  json out;
  out["directory"] = output.directory;
  out["prefix"] = output.prefix;
  doc["output"] = out;
  return doc;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  RunConfig config = from_json(doc);

  if (const char* env_seeds = std::getenv("BCOCOEX_SEEDS")) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(env_seeds);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        seeds.push_back(std::stoull(item));
      } catch (const std::exception&) {
        throw ConfigError("BCOCOEX_SEEDS: invalid seed '" + item + "'");
      }
    }
    if (!seeds.empty()) {
      config.plan.seeds = seeds;
      config.plan.replications = static_cast<int>(seeds.size());
      try {
        config.plan.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  return config;
}

std::size_t RunConfig::plan_hash() const { return std::hash<std::string>{}(to_json().dump()); }

json default_config_json() { return RunConfig{}.to_json(); }

std::string schema_text() {
  return R"(Config reference (JSON). Every key is optional unless marked required;
unknown keys are rejected. Times are seconds unless the key name says ms.

scenario   (required) one of: omega_sweep, schedule_sweep, slow_dynamics,
           fast_dynamics, noisy_sim, bound_check.
name       run label; used as the default output prefix.
iterations outer iterations per replication (two cost evaluations each).
replications  number of seeded replications (default 25).
seeds      explicit seed list (distinct integers); null derives 1..replications.
           Overridden by the BCOCOEX_SEEDS environment variable ("1,2,3").
parallel   run replications on multiple threads (default true).
convergence_tolerance_ms  |toff - toff*| threshold for the convergence-time
           statistic (default 20).
throughput_tolerance      relative throughput band for summaries (default 0.1).

learner.interval    [lower, upper] decision interval in log-seconds
                    (default [-6.9, 0]).
learner.omega       exploration scale; query offset is
                    omega / (k+1)^exploration_exponent (default 0.01).
learner.exploration_exponent  default 0.75.
learner.step_scale / step_exponent  step size step_scale/(k+1)^step_exponent
                    (default 1 and 0.5).
learner.constant_parameters  freeze eta and delta at eta_constant /
                    delta_constant (used by bound_check).
learner.start       "midpoint", "random" (uniform over the shrunken
                    interval), or a number.
learner.truncation.enabled     gradient-spike truncation (default true).
learner.truncation.multiplier  threshold multiplier (default 10).
learner.truncation.lipschitz_bound  gradient bound G; when null the threshold
                    falls back to multiplier * |last applied gradient|.

environment.type    "analytic" (closed-form cost) or "simulator" (slotted
                    packet simulator with batched noisy costs).
environment.stations  initial WiFi station count n.
environment.t_on      on-period, s (default 0.05).
environment.lte_rate  r, bit/s (default 75e6).
environment.tau       per-slot WiFi transmit probability (default 1/16).
environment.idle_slot sigma, s (default 9e-6).
environment.phy_rate / frame_overhead / aggregated_packets / packet_bytes
                    define the WiFi frame: payload = packets * bytes * 8 bits,
                    duration = payload/phy_rate + overhead.
environment.subframe  gamma, s (default 1e-3).
environment.collision_prob  p_txA; null derives 1 - (1-tau)^n.
environment.batch_seconds   simulator batch length t_b (default 50).
environment.toff_jitter     off-times uniform on [1 +- jitter]*toff (default 0.5).

dynamics.timeline   [[iteration, stations], ...]; an entry at iteration 0
                    overrides the initial count, later entries switch the
                    station count at that iteration.
dynamics.mid_iteration_switch  apply switches between the two half-round
                    queries (default true; false switches before the
                    iteration's first query).

bound_check.piece_stations  station count per loss piece (default [5, 10]).
bound_check.switch_rounds   first round of each later piece (default [502]).
bound_check.rounds          horizon T, even (default 2000).
bound_check.eta / delta     constant parameters; null derives both from the
                    switching-regime prescription with measured G and C.
bound_check.deviation_grid  grid points for measured sup-deviations.

output.directory / output.prefix  where run artifacts are written:
  <prefix>_trajectories.csv  one row per (replication, iteration)
  <prefix>_events.jsonl      one line per round: run, seed, t, x, cost
  <prefix>_summary.json      aggregate statistics

CSV columns, in order: run_id, seed, k, t, y_k, toff_ms, gradient_estimate,
truncated, s_lte_bps, s_wifi_mean_bps, n, toff_opt_ms, s_lte_opt_bps,
s_wifi_opt_bps, regret_so_far. Times are milliseconds; decimal point, no
locale.

sim-calibrate --csv FILE writes per-batch audit rows with columns: stations,
toff_ms, seed, elapsed_s, lte_bps, wifi_mean_bps, wifi_total_bits, successes,
collisions, truncated_frames, cycles.
)";
}

}  // namespace bco::io
