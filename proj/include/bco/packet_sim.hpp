#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bco/coexistence.hpp"
#include "bco/rng.hpp"

namespace bco::sim {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Slotted coexistence simulator configuration. Durations in seconds, rates in
// bits/second. WiFi time advances in variable steps (idle slots of length
// idle_slot, busy periods of frame_duration); on-period boundaries cut slots.
struct SimConfig {
  int stations = 10;
  double tau = 1.0 / 16.0;        // per-slot transmit probability, [0, 1]
  double idle_slot = 9e-6;        // sigma
  double frame_duration = 1e-3;   // T_fra
  double payload_bits = 60000.0;  // delivered bits per successful frame
  double t_on = 0.05;             // on-period; 0 disables duty cycling
  double subframe = 1e-3;         // gamma
  double lte_rate = 75e6;         // r
  double batch_seconds = 50.0;    // t_b
  double toff_jitter = 0.5;       // off-times are uniform on [1 +- jitter] * toff_bar
  std::uint64_t seed = 1;

  void validate() const;
};

struct BatchResult {
  std::vector<double> wifi_bits;  // delivered bits per station
  double lte_bits = 0.0;
  double elapsed = 0.0;  // simulated seconds, >= batch_seconds
  std::int64_t successes = 0;
  std::int64_t collisions = 0;
  std::int64_t truncated_frames = 0;  // WiFi frames cut by an on-period start
  std::int64_t cycles = 0;
};

// One off-period duration: uniform on [1 - jitter, 1 + jitter] * toff_bar.
double sample_toff(Rng& rng, double toff_bar, double jitter = 0.5);

// Simulates whole on/off cycles until at least batch_seconds have elapsed.
//
// On-periods deliver lte_rate * (t_on - corrupted) bits, where a WiFi frame
// still in flight at the on-start corrupts the first ceil(overlap/subframe)
// subframes. Off-periods run the slotted WiFi contention: per slot each
// station transmits with probability tau; a sole transmitter delivers
// payload_bits if its frame ends inside the off-period, and a frame crossing
// the boundary is lost for WiFi and becomes the next on-period's overlap.
// Deterministic given the config seed.
BatchResult run_batch(const SimConfig& config, double toff_bar);

// Cost sample from batch averages:
//   -log(lte bits/elapsed) - sum_j log(wifi bits_j/elapsed).
// Throws SimError when any measured throughput is zero (batch too short).
double noisy_cost(const BatchResult& batch, const coex::CoexistenceParams& params);

// True when the batch covers fewer than ~100 duty cycles at this operating
// point, i.e. averages will be noticeably noisy.
bool short_batch(const SimConfig& config, double toff_bar);

// Simulator configuration consistent with an analytic parameter pack built
// from the same radio knobs.
SimConfig make_sim_config(const coex::RadioDefaults& radio, int stations, double batch_seconds,
                          double toff_jitter, std::uint64_t seed);

}  // namespace bco::sim
