#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bco/bounds.hpp"
#include "bco/config.hpp"
#include "bco/csv.hpp"
#include "bco/experiment.hpp"
#include "bco/packet_sim.hpp"

namespace fs = std::filesystem;
using namespace bco;

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void execute_plan(const io::RunConfig& config) {
  const auto& plan = config.plan;
  fs::create_directories(config.output.directory);
  const std::string base = join_path(config.output.directory, config.output.prefix);

  const auto runs = experiments::run_plan(plan);
  const auto summary = experiments::aggregate(runs, plan.convergence_tolerance);
  io::write_trajectories_csv(runs, base + "_trajectories.csv");
  io::write_events_jsonl(runs, base + "_events.jsonl");
  io::write_summary_json(summary, base + "_summary.json");

  std::size_t rows = 0;
  for (const auto& run : runs) rows += run.records.size();
  std::printf("%s: %zu replications, %zu rows -> %s_{trajectories.csv,events.jsonl,summary.json}\n",
              plan.name.c_str(), runs.size(), rows, base.c_str());
  std::printf("  converged %d/%zu runs (tolerance %g ms)", summary.converged_runs, runs.size(),
              plan.convergence_tolerance * 1e3);
  if (summary.converged_runs > 0)
    std::printf(", mean convergence iteration %.1f", summary.mean_convergence_iteration);
  std::printf("\n");
  if (summary.short_batches > 0)
    std::printf("  note: %d simulator batches covered fewer than 100 duty cycles\n",
                summary.short_batches);
}

void print_bound_result(const experiments::BoundCheckResult& r, int rounds) {
  std::printf("constants: eta=%.6g delta=%.6g (switching-regime prescription unless overridden)\n",
              r.eta, r.delta);
  std::printf("measured:  G=%.6g C=%.6g L[1,%d]=%.6g switches=%d\n", r.g_measured, r.c_measured,
              r.full_r, r.l_measured, r.switches);
  const bool bound_ok = r.mean_full <= r.interval_bound;
  std::printf("regret:    mean R[1,%d] = %.3f (stderr %.3f) vs constant-parameter bound %.3f -> %s\n",
              r.full_r, r.mean_full, r.stderr_full, r.interval_bound, bound_ok ? "PASS" : "FAIL");
  std::printf("           tuned switching bound (N=%d): %.3f\n", r.switches, r.tuned_switching_bound);
  const double rate_full = r.mean_full / r.full_r;
  const double rate_half = r.mean_half / r.half_r;
  std::printf("sublinear: R/T = %.6f over %d rounds < %.6f over %d rounds -> %s\n", rate_full,
              r.full_r, rate_half, r.half_r, rate_full < rate_half ? "PASS" : "FAIL");
  for (const auto& check : r.interval_checks) {
    std::printf("interval:  R[%d,%d] mean = %.3f (stderr %.3f), L = %.6g, bound = %.3f -> %s\n",
                check.s, check.r, check.mean_regret, check.stderr_regret, check.deviation,
                check.bound, check.mean_regret <= check.bound ? "PASS" : "FAIL");
  }
  std::printf("horizon:   T = %d rounds (%d iterations)\n", rounds, rounds / 2);
}

void write_bound_json(const experiments::BoundCheckResult& r, const std::string& path) {
  nlohmann::json doc;
  doc["eta"] = r.eta;
  doc["delta"] = r.delta;
  doc["g_measured"] = r.g_measured;
  doc["c_measured"] = r.c_measured;
  doc["l_measured"] = r.l_measured;
  doc["switches"] = r.switches;
  doc["regret_full"] = r.regret_full;
  doc["regret_half"] = r.regret_half;
  doc["mean_full"] = r.mean_full;
  doc["stderr_full"] = r.stderr_full;
  doc["mean_half"] = r.mean_half;
  doc["interval_bound"] = r.interval_bound;
  doc["tuned_switching_bound"] = r.tuned_switching_bound;
  doc["full_interval"] = {r.full_s, r.full_r};
  doc["half_interval"] = {r.full_s, r.half_r};
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.interval_checks)
    checks.push_back({{"s", c.s},
                      {"r", c.r},
                      {"mean_regret", c.mean_regret},
                      {"stderr_regret", c.stderr_regret},
                      {"deviation", c.deviation},
                      {"bound", c.bound}});
  doc["interval_checks"] = checks;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << doc.dump(2) << '\n';
}

void execute_bounds(const io::RunConfig& config) {
  auto plan = config.plan;
  if (plan.scenario != experiments::Scenario::bound_check)
    throw io::ConfigError("bounds: config scenario must be bound_check");
  const auto result = experiments::run_bound_check(plan);
  print_bound_result(result, plan.bound_check.rounds);
  fs::create_directories(config.output.directory);
  const std::string path =
      join_path(config.output.directory, config.output.prefix + "_bounds.json");
  write_bound_json(result, path);
  std::printf("wrote %s\n", path.c_str());
}

int execute_calibrate(const io::RunConfig* config, std::vector<int> stations,
                      std::vector<double> toff_ms, double batch_seconds, int replicates,
                      double tolerance, std::uint64_t seed, const std::string& csv_path) {
  coex::RadioDefaults radio;
  double jitter = 0.5;
  if (config) {
    radio = config->plan.env.radio;
    jitter = config->plan.env.toff_jitter;
  }
  if (stations.empty()) stations = {1, 5, 10};
  if (toff_ms.empty()) toff_ms = {50.0, 200.0, 500.0};
  if (replicates < 1) replicates = 1;

  std::printf("%4s %9s %12s %12s %8s %12s %12s %8s\n", "n", "toff_ms", "wifi_sim", "wifi_model",
              "wifi_err", "lte_sim", "lte_model", "lte_err");
  bool all_ok = true;
  std::vector<io::BatchAudit> audits;
  for (int n : stations) {
    const auto params = coex::make_params(radio, n);
    for (double toff : toff_ms) {
      const double toff_s = toff * 1e-3;
      double wifi_sim = 0.0, lte_sim = 0.0;
      for (int i = 0; i < replicates; ++i) {
        auto cfg = sim::make_sim_config(radio, n, batch_seconds, jitter, seed++);
        auto batch = sim::run_batch(cfg, toff_s);
        double wifi_total = 0.0;
        for (double bits : batch.wifi_bits) wifi_total += bits;
        wifi_sim += wifi_total / n / batch.elapsed;
        lte_sim += batch.lte_bits / batch.elapsed;
        if (!csv_path.empty()) audits.push_back({n, toff_s, cfg.seed, std::move(batch)});
      }
      wifi_sim /= replicates;
      lte_sim /= replicates;
      const double wifi_model = coex::wifi_throughput(params, toff_s, 0);
      const double lte_model = coex::lte_throughput(params, toff_s);
      const double wifi_err = wifi_sim / wifi_model - 1.0;
      const double lte_err = lte_sim / lte_model - 1.0;
      const bool ok = std::abs(wifi_err) <= tolerance && std::abs(lte_err) <= tolerance;
      all_ok = all_ok && ok;
      std::printf("%4d %9.1f %12.4g %12.4g %7.2f%% %12.4g %12.4g %7.2f%% %s\n", n, toff,
                  wifi_sim, wifi_model, wifi_err * 100.0, lte_sim, lte_model, lte_err * 100.0,
                  ok ? "PASS" : "FAIL");
    }
  }
  std::printf("calibration %s at %.0f%% tolerance (%d x %g s batches per point)\n",
              all_ok ? "PASS" : "FAIL", tolerance * 100.0, replicates, batch_seconds);
  if (!csv_path.empty()) {
    io::write_batches_csv(audits, csv_path);
    std::printf("wrote %s\n", csv_path.c_str());
  }
  return all_ok ? 0 : 3;
}

std::string sweep_suffix(double omega, double exponent, int stations) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "_omega%g_p%g_n%d", omega, exponent, stations);
  return buffer;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit duty-cycle tuner for unlicensed LTE/WiFi coexistence"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;

  auto* cmd_run = app.add_subcommand("run", "Execute one experiment plan from a config file");
  cmd_run->add_option("-c,--config", config_path, "JSON config file")->required();
  cmd_run->add_option("-o,--out", out_dir, "override output directory");

  auto* cmd_sweep =
      app.add_subcommand("sweep", "Cross-product runs over omega/exponent/station lists");
  std::vector<double> sweep_omega, sweep_exponent;
  std::vector<int> sweep_stations;
  cmd_sweep->add_option("-c,--config", config_path, "base JSON config file")->required();
  cmd_sweep->add_option("-o,--out", out_dir, "override output directory");
  cmd_sweep->add_option("--omega", sweep_omega, "omega values")->delimiter(',');
  cmd_sweep->add_option("--exponent", sweep_exponent, "exploration exponents")->delimiter(',');
  cmd_sweep->add_option("--stations", sweep_stations, "station counts")->delimiter(',');

  auto* cmd_bounds = app.add_subcommand(
      "bounds", "Run a constant-parameter plan and print measured regret next to the bounds");
  cmd_bounds->add_option("-c,--config", config_path, "JSON config file (scenario bound_check)")
      ->required();
  cmd_bounds->add_option("-o,--out", out_dir, "override output directory");

  auto* cmd_calibrate =
      app.add_subcommand("sim-calibrate", "Compare simulator throughputs with the analytic model");
  std::vector<int> cal_stations;
  std::vector<double> cal_toff_ms;
  double cal_batch = 50.0;
  int cal_replicates = 4;
  double cal_tolerance = 0.05;
  std::uint64_t cal_seed = 1;
  cmd_calibrate->add_option("-c,--config", config_path, "JSON config supplying radio parameters");
  cmd_calibrate->add_option("--stations", cal_stations, "station counts (default 1,5,10)")
      ->delimiter(',');
  cmd_calibrate->add_option("--toff-ms", cal_toff_ms, "mean off-times in ms (default 50,200,500)")
      ->delimiter(',');
  cmd_calibrate->add_option("--batch-seconds", cal_batch, "simulated seconds per batch");
  cmd_calibrate->add_option("--replicates", cal_replicates, "batches averaged per point");
  cmd_calibrate->add_option("--tolerance", cal_tolerance, "relative tolerance (default 0.05)");
  cmd_calibrate->add_option("--seed", cal_seed, "base seed");
  std::string cal_csv;
  cmd_calibrate->add_option("--csv", cal_csv, "write per-batch audit rows to this CSV file");

  auto* cmd_schema = app.add_subcommand("schema", "Print the config reference and defaults");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_schema->parsed()) {
      std::cout << io::schema_text() << "\nDefaults:\n"
                << io::default_config_json().dump(2) << std::endl;
      return 0;
    }
    if (cmd_run->parsed()) {
      auto config = io::RunConfig::load(config_path);
      if (!out_dir.empty()) config.output.directory = out_dir;
      if (config.plan.scenario == experiments::Scenario::bound_check)
        execute_bounds(config);
      else
        execute_plan(config);
      return 0;
    }
    if (cmd_sweep->parsed()) {
      auto base = io::RunConfig::load(config_path);
      if (!out_dir.empty()) base.output.directory = out_dir;
      if (sweep_omega.empty()) sweep_omega = {base.plan.learner.omega};
      if (sweep_exponent.empty()) sweep_exponent = {base.plan.learner.exploration_exponent};
      if (sweep_stations.empty()) sweep_stations = {base.plan.env.stations};
      for (double omega : sweep_omega) {
        for (double exponent : sweep_exponent) {
          for (int stations : sweep_stations) {
            io::RunConfig config = base;
            config.plan.learner.omega = omega;
            config.plan.learner.exploration_exponent = exponent;
            config.plan.env.stations = stations;
            config.plan.validate();
            config.output.prefix = base.output.prefix + sweep_suffix(omega, exponent, stations);
            execute_plan(config);
          }
        }
      }
      return 0;
    }
    if (cmd_bounds->parsed()) {
      auto config = io::RunConfig::load(config_path);
      if (!out_dir.empty()) config.output.directory = out_dir;
      execute_bounds(config);
      return 0;
    }
    if (cmd_calibrate->parsed()) {
      std::optional<io::RunConfig> config;
      if (!config_path.empty()) config = io::RunConfig::load(config_path);
      return execute_calibrate(config ? &*config : nullptr, cal_stations, cal_toff_ms, cal_batch,
                               cal_replicates, cal_tolerance, cal_seed, cal_csv);
    }
  } catch (const io::ConfigError& e) {
    std::fprintf(stderr, "error[config]: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error[config]: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error[runtime]: %s\n", e.what());
    return 3;
  }
  return 0;
}
