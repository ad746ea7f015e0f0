#include "bco/packet_sim.hpp"

#include <cmath>

namespace bco::sim {

void SimConfig::validate() const {
  if (stations < 1) throw std::invalid_argument("SimConfig: need >= 1 station");
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("SimConfig: tau outside [0, 1]");
  if (!(idle_slot > 0.0) || !(frame_duration > 0.0) || !(subframe > 0.0))
    throw std::invalid_argument("SimConfig: slot durations must be positive");
  if (!(payload_bits > 0.0)) throw std::invalid_argument("SimConfig: payload must be positive");
  if (t_on < 0.0) throw std::invalid_argument("SimConfig: t_on must be >= 0");
  if (!(lte_rate > 0.0)) throw std::invalid_argument("SimConfig: rate must be positive");
  if (!(batch_seconds > 0.0)) throw std::invalid_argument("SimConfig: batch must be positive");
  if (toff_jitter < 0.0 || toff_jitter >= 1.0)
    throw std::invalid_argument("SimConfig: jitter outside [0, 1)");
}

double sample_toff(Rng& rng, double toff_bar, double jitter) {
  if (!(toff_bar > 0.0)) throw std::invalid_argument("sample_toff: toff_bar must be positive");
  if (jitter < 0.0 || jitter >= 1.0) throw std::invalid_argument("sample_toff: jitter outside [0, 1)");
  if (jitter == 0.0) return toff_bar;
  return toff_bar * (1.0 + jitter * (2.0 * uniform01(rng) - 1.0));
}

namespace {

// Slotted contention sampler. Per slot, nobody transmits with probability
// (1-tau)^n; a busy slot carries exactly one frame, successful when a single
// station holds it. Idle runs are advanced with one geometric draw, which is
// exact under per-slot independence; successes attribute to a uniformly drawn
// station, matching the symmetric per-station process.
struct SlotEngine {
  const SimConfig& cfg;
  Rng& rng;
  BatchResult& out;
  double p_idle;
  double p_success;  // given a busy slot
  double log_p_idle;

  SlotEngine(const SimConfig& c, Rng& r, BatchResult& o) : cfg(c), rng(r), out(o) {
    const int n = cfg.stations;
    p_idle = std::pow(1.0 - cfg.tau, n);
    const double p_busy = 1.0 - p_idle;
    p_success = p_busy > 0.0 ? n * cfg.tau * std::pow(1.0 - cfg.tau, n - 1) / p_busy : 0.0;
    log_p_idle = (p_idle > 0.0 && p_idle < 1.0) ? std::log(p_idle) : 0.0;
  }

  // Number of idle slots before the next busy one, capped at `max_slots`.
  double idle_run(double max_slots) {
    if (p_idle >= 1.0) return max_slots;
    if (p_idle <= 0.0) return 0.0;
    const double u = uniform01(rng);
    if (u <= 0.0) return max_slots;
    const double slots = std::floor(std::log(u) / log_p_idle);
    return slots < max_slots ? slots : max_slots;
  }

  // Settles one busy frame that completes on the air.
  void complete_frame() {
    if (uniform01(rng) < p_success) {
      const int n = cfg.stations;
      const int station = n == 1 ? 0 : static_cast<int>(uniform01(rng) * n) % n;
      out.wifi_bits[static_cast<std::size_t>(station)] += cfg.payload_bits;
      ++out.successes;
    } else {
      ++out.collisions;
    }
  }

  // Contention over a window of fixed length. Returns the overlap of a frame
  // crossing the window end (0 when the channel was idle at the boundary).
  double bounded_window(double window) {
    double rem = window;
    while (rem > 0.0) {
      const double idle_time = idle_run(rem / cfg.idle_slot + 1.0) * cfg.idle_slot;
      if (idle_time >= rem) return 0.0;
      rem -= idle_time;
      if (cfg.frame_duration > rem) {
        // Frame still in flight at the window end; lost for WiFi no matter
        // who held it, so no ownership draw is needed.
        ++out.truncated_frames;
        return cfg.frame_duration - rem;
      }
      rem -= cfg.frame_duration;
      complete_frame();
    }
    return 0.0;
  }

  // Contention with no end boundary: whole slots until the elapsed budget is
  // covered. Used when duty cycling is disabled.
  void open_window(double budget) {
    while (out.elapsed < budget) {
      const double max_slots = (budget - out.elapsed) / cfg.idle_slot + 1.0;
      const double idle_slots = idle_run(max_slots);
      out.elapsed += idle_slots * cfg.idle_slot;
      if (idle_slots >= max_slots || out.elapsed >= budget) break;
      out.elapsed += cfg.frame_duration;
      complete_frame();
    }
  }
};

}  // namespace

BatchResult run_batch(const SimConfig& config, double toff_bar) {
  config.validate();
  if (!(toff_bar > 0.0)) throw std::invalid_argument("run_batch: toff_bar must be positive");

  Rng rng(config.seed);
  BatchResult out;
  out.wifi_bits.assign(static_cast<std::size_t>(config.stations), 0.0);
  SlotEngine engine(config, rng, out);

  if (config.t_on == 0.0) {
    engine.open_window(config.batch_seconds);
    out.cycles = 1;
    return out;
  }

  double pending_overlap = 0.0;
  while (out.elapsed < config.batch_seconds) {
    // On-period: back-to-back subframes; a crossing WiFi frame corrupts the
    // leading ceil(overlap/subframe) of them.
    double corrupted = 0.0;
    if (pending_overlap > 0.0) {
      corrupted = std::ceil(pending_overlap / config.subframe) * config.subframe;
      if (corrupted > config.t_on) corrupted = config.t_on;
      pending_overlap = 0.0;
    }
    out.lte_bits += config.lte_rate * (config.t_on - corrupted);
    out.elapsed += config.t_on;

    const double window = sample_toff(rng, toff_bar, config.toff_jitter);
    pending_overlap = engine.bounded_window(window);
    out.elapsed += window;
    ++out.cycles;
  }
  return out;
}

double noisy_cost(const BatchResult& batch, const coex::CoexistenceParams& params) {
  if (batch.wifi_bits.size() != static_cast<std::size_t>(params.stations))
    throw std::invalid_argument("noisy_cost: station count mismatch");
  if (!(batch.elapsed > 0.0)) throw std::invalid_argument("noisy_cost: empty batch");
  if (!(batch.lte_bits > 0.0))
    throw SimError("noisy_cost: zero measured LTE throughput, batch too short");
  double f = -std::log(batch.lte_bits / batch.elapsed);
  for (double bits : batch.wifi_bits) {
    if (!(bits > 0.0))
      throw SimError("noisy_cost: zero measured WiFi throughput, batch too short");
    f -= std::log(bits / batch.elapsed);
  }
  return f;
}

bool short_batch(const SimConfig& config, double toff_bar) {
  return config.batch_seconds < 100.0 * (config.t_on + toff_bar);
}

SimConfig make_sim_config(const coex::RadioDefaults& radio, int stations, double batch_seconds,
                          double toff_jitter, std::uint64_t seed) {
  SimConfig cfg;
  cfg.stations = stations;
  cfg.tau = radio.tau;
  cfg.idle_slot = radio.idle_slot;
  cfg.frame_duration = radio.frame_duration();
  cfg.payload_bits = radio.payload_bits();
  cfg.t_on = radio.t_on;
  cfg.subframe = radio.subframe;
  cfg.lte_rate = radio.lte_rate;
  cfg.batch_seconds = batch_seconds;
  cfg.toff_jitter = toff_jitter;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

}  // namespace bco::sim
