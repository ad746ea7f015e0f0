#include "bco/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bco::io {

std::string format_double(double value) {
  char buffer[40];
  // %.17g always round-trips; prefer the shorter %.15g when it does too.
  std::snprintf(buffer, sizeof buffer, "%.15g", value);
  if (std::strtod(buffer, nullptr) != value)
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

}  // namespace

void write_trajectories_csv(const std::vector<experiments::ReplicationResult>& runs,
                            const std::string& path) {
  auto out = open_or_throw(path);
  out << "run_id,seed,k,t,y_k,toff_ms,gradient_estimate,truncated,s_lte_bps,"
         "s_wifi_mean_bps,n,toff_opt_ms,s_lte_opt_bps,s_wifi_opt_bps,regret_so_far\n";
  for (const auto& run : runs) {
    for (const auto& rec : run.records) {
      out << run.run_index << ',' << run.seed << ',' << rec.k << ',' << rec.t << ','
          << format_double(rec.y_center) << ',' << format_double(rec.toff_center * 1e3) << ','
          << format_double(rec.gradient_raw) << ',' << (rec.truncated ? 1 : 0) << ','
          << format_double(rec.s_lte) << ',' << format_double(rec.s_wifi_mean) << ','
          << rec.stations << ',' << format_double(rec.opt_toff * 1e3) << ','
          << format_double(rec.opt_s_lte) << ',' << format_double(rec.opt_s_wifi_mean) << ','
          << format_double(rec.regret_so_far) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_events_jsonl(const std::vector<experiments::ReplicationResult>& runs,
                        const std::string& path) {
  auto out = open_or_throw(path);
  for (const auto& run : runs) {
    if (!run.ledger) continue;
    for (const auto& rec : run.ledger->records()) {
      nlohmann::json line;
      line["run"] = run.run_index;
      line["seed"] = run.seed;
      line["t"] = rec.round;
      line["x"] = rec.x;
      line["cost"] = rec.cost;
      out << line.dump() << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_batches_csv(const std::vector<BatchAudit>& batches, const std::string& path) {
  auto out = open_or_throw(path);
  out << "stations,toff_ms,seed,elapsed_s,lte_bps,wifi_mean_bps,wifi_total_bits,"
         "successes,collisions,truncated_frames,cycles\n";
  for (const auto& audit : batches) {
    const auto& batch = audit.result;
    double wifi_total = 0.0;
    for (double bits : batch.wifi_bits) wifi_total += bits;
    const double wifi_mean =
        batch.wifi_bits.empty() ? 0.0
                                : wifi_total / static_cast<double>(batch.wifi_bits.size()) /
                                      batch.elapsed;
    out << audit.stations << ',' << format_double(audit.toff_bar * 1e3) << ',' << audit.seed << ','
        << format_double(batch.elapsed) << ',' << format_double(batch.lte_bits / batch.elapsed)
        << ',' << format_double(wifi_mean) << ',' << format_double(wifi_total) << ','
        << batch.successes << ',' << batch.collisions << ',' << batch.truncated_frames << ','
        << batch.cycles << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_summary_json(const experiments::Summary& summary, const std::string& path) {
  nlohmann::json doc;
  doc["converged_runs"] = summary.converged_runs;
  doc["mean_convergence_iteration"] = summary.mean_convergence_iteration;
  doc["convergence_iteration"] = summary.convergence_iteration;
  doc["short_batches"] = summary.short_batches;
  nlohmann::json rows = nlohmann::json::array();
  auto stats_json = [](const experiments::QuantityStats& s) {
    return nlohmann::json{{"mean", s.mean}, {"std", s.stddev}, {"min", s.min}, {"max", s.max}};
  };
  for (const auto& agg : summary.per_iteration) {
    nlohmann::json row;
    row["k"] = agg.k;
    row["y"] = stats_json(agg.center);
    row["toff_s"] = stats_json(agg.toff);
    row["s_lte_bps"] = stats_json(agg.s_lte);
    row["s_wifi_mean_bps"] = stats_json(agg.s_wifi_mean);
    rows.push_back(row);
  }
  doc["per_iteration"] = rows;
  auto out = open_or_throw(path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace bco::io
