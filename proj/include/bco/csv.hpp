#pragma once

#include <string>
#include <vector>

#include "bco/experiment.hpp"
#include "bco/packet_sim.hpp"

namespace bco::io {

// Shortest representation that round-trips a double exactly.
std::string format_double(double value);

// One row per (replication, iteration), columns:
//   run_id, seed, k, t, y_k, toff_ms, gradient_estimate, truncated,
//   s_lte_bps, s_wifi_mean_bps, n, toff_opt_ms, s_lte_opt_bps,
//   s_wifi_opt_bps, regret_so_far
// Times in milliseconds; decimal point, no locale.
void write_trajectories_csv(const std::vector<experiments::ReplicationResult>& runs,
                            const std::string& path);

// One JSON object per line and round: {"run", "seed", "t", "x", "cost"}.
void write_events_jsonl(const std::vector<experiments::ReplicationResult>& runs,
                        const std::string& path);

void write_summary_json(const experiments::Summary& summary, const std::string& path);

// One simulator batch with the operating point it was taken at, for audit
// output.
struct BatchAudit {
  int stations = 0;
  double toff_bar = 0.0;  // seconds
  std::uint64_t seed = 0;
  sim::BatchResult result;
};

// One row per batch, columns:
//   stations, toff_ms, seed, elapsed_s, lte_bps, wifi_mean_bps,
//   wifi_total_bits, successes, collisions, truncated_frames, cycles
void write_batches_csv(const std::vector<BatchAudit>& batches, const std::string& path);

}  // namespace bco::io
