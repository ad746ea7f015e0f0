#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bco/coexistence.hpp"
#include "bco/packet_sim.hpp"

using namespace bco;
using namespace bco::sim;

namespace {

double mean_wifi_rate(const BatchResult& batch) {
  double total = 0.0;
  for (double bits : batch.wifi_bits) total += bits;
  return total / static_cast<double>(batch.wifi_bits.size()) / batch.elapsed;
}

double sample_std(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

}  // namespace

TEST_CASE("off-time sampling: support, mean, and degenerate width") {
  Rng rng(5);
  const double toff = 0.1;
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const double v = sample_toff(rng, toff, 0.5);
    CHECK(v >= 0.05);
    CHECK(v <= 0.15);
    sum += v;
  }
  CHECK(sum / draws == doctest::Approx(toff).epsilon(0.01));
  CHECK(sample_toff(rng, toff, 0.0) == toff);
  CHECK_THROWS_AS(sample_toff(rng, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(sample_toff(rng, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("seed determinism: identical batches bit for bit") {
  coex::RadioDefaults radio;
  auto cfg = make_sim_config(radio, 5, 3.0, 0.5, 12345);
  const auto a = run_batch(cfg, 0.1);
  const auto b = run_batch(cfg, 0.1);
  CHECK(a.wifi_bits == b.wifi_bits);
  CHECK(a.lte_bits == b.lte_bits);
  CHECK(a.elapsed == b.elapsed);
  CHECK(a.successes == b.successes);
  CHECK(a.collisions == b.collisions);
  CHECK(a.truncated_frames == b.truncated_frames);
  CHECK(a.cycles == b.cycles);
  cfg.seed = 54321;
  const auto c = run_batch(cfg, 0.1);
  CHECK(a.wifi_bits != c.wifi_bits);
}

TEST_CASE("always-transmitting lone station with duty cycling disabled") {
  SimConfig cfg;
  cfg.stations = 1;
  cfg.tau = 1.0;
  cfg.t_on = 0.0;  // no on-periods at all
  cfg.frame_duration = 1.0231e-3;
  cfg.payload_bits = 60000.0;
  cfg.batch_seconds = 5.0;
  cfg.seed = 9;
  const auto batch = run_batch(cfg, 0.1);
  CHECK(batch.collisions == 0);
  CHECK(batch.truncated_frames == 0);
  // Back-to-back successes: exactly payload/frame_duration.
  CHECK(batch.wifi_bits[0] / batch.elapsed ==
        doctest::Approx(cfg.payload_bits / cfg.frame_duration).epsilon(1e-9));
}

TEST_CASE("silent stations: zero WiFi and clean duty-cycle share") {
  coex::RadioDefaults radio;
  radio.tau = 0.0;
  auto cfg = make_sim_config(radio, 3, 20.0, 0.5, 31);
  const double toff = 0.1;
  const auto batch = run_batch(cfg, toff);
  for (double bits : batch.wifi_bits) CHECK(bits == 0.0);
  CHECK(batch.successes == 0);
  // LTE occupies exactly t_on of every cycle.
  const double expected = cfg.lte_rate * cfg.t_on / (cfg.t_on + toff);
  CHECK(batch.lte_bits / batch.elapsed == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("conservation bounds") {
  coex::RadioDefaults radio;
  auto cfg = make_sim_config(radio, 10, 10.0, 0.5, 77);
  const auto batch = run_batch(cfg, 0.05);
  CHECK(batch.lte_bits <= cfg.lte_rate * cfg.t_on * static_cast<double>(batch.cycles) + 1e-6);
  double wifi_total = 0.0;
  for (double bits : batch.wifi_bits) wifi_total += bits;
  CHECK(wifi_total <= cfg.payload_bits * (batch.elapsed / cfg.frame_duration) + 1e-6);
  CHECK(batch.elapsed >= cfg.batch_seconds);
  CHECK(batch.cycles >= 1);
}

TEST_CASE("station symmetry: successes spread across stations") {
  coex::RadioDefaults radio;
  auto cfg = make_sim_config(radio, 5, 20.0, 0.5, 101);
  const auto batch = run_batch(cfg, 0.2);
  const double mean = mean_wifi_rate(batch) * batch.elapsed;
  for (double bits : batch.wifi_bits) {
    CHECK(bits > 0.5 * mean);
    CHECK(bits < 1.5 * mean);
  }
}

TEST_CASE("throughputs match the analytic model within 5 percent") {
  // The analytic curves describe the simulator's mean; single batches carry
  // a few percent of duty-cycle realization noise, so average a handful.
  coex::RadioDefaults radio;
  const int n = 5;
  const auto params = coex::make_params(radio, n);
  auto cfg = make_sim_config(radio, n, 50.0, 0.5, 2718);
  for (double toff : {0.05, 0.2}) {
    double wifi_sum = 0.0, lte_sum = 0.0;
    const int replicates = 3;
    for (int i = 0; i < replicates; ++i) {
      const auto batch = run_batch(cfg, toff);
      wifi_sum += mean_wifi_rate(batch);
      lte_sum += batch.lte_bits / batch.elapsed;
      cfg.seed += 1;
    }
    const double wifi_model = coex::wifi_throughput(params, toff, 0);
    const double lte_model = coex::lte_throughput(params, toff);
    CHECK(wifi_sum / replicates == doctest::Approx(wifi_model).epsilon(0.05));
    CHECK(lte_sum / replicates == doctest::Approx(lte_model).epsilon(0.05));
  }
}

TEST_CASE("noisy cost: identities and failure modes") {
  coex::RadioDefaults radio;
  const int n = 4;
  const auto params = coex::make_params(radio, n);

  // A batch that reproduces the analytic throughputs exactly yields the
  // analytic cost (definitional identity).
  const double z = -2.0;
  const double toff = coex::ztilde_to_toff(z, params.c1);
  BatchResult synthetic;
  synthetic.elapsed = 50.0;
  synthetic.lte_bits = coex::lte_throughput(params, toff) * synthetic.elapsed;
  for (int j = 0; j < n; ++j)
    synthetic.wifi_bits.push_back(coex::wifi_throughput(params, toff, j) * synthetic.elapsed);
  CHECK(noisy_cost(synthetic, params) == doctest::Approx(coex::cost(params, z)).epsilon(1e-12));

  // Doubling every throughput lowers the cost by (n+1) log 2.
  BatchResult doubled = synthetic;
  doubled.lte_bits *= 2.0;
  for (double& bits : doubled.wifi_bits) bits *= 2.0;
  CHECK(noisy_cost(synthetic, params) - noisy_cost(doubled, params) ==
        doctest::Approx((n + 1) * std::log(2.0)).epsilon(1e-12));

  // Zero measured throughput reports a too-short batch.
  BatchResult starved = synthetic;
  starved.wifi_bits[2] = 0.0;
  CHECK_THROWS_AS(noisy_cost(starved, params), SimError);
  BatchResult wrong = synthetic;
  wrong.wifi_bits.pop_back();
  CHECK_THROWS_AS(noisy_cost(wrong, params), std::invalid_argument);
}

TEST_CASE("cost-sample noise shrinks like one over sqrt batch length") {
  coex::RadioDefaults radio;
  const int n = 10;
  const auto params = coex::make_params(radio, n);
  const double z = -1.5;
  const double toff = coex::ztilde_to_toff(z, params.c1);

  std::vector<double> short_costs, long_costs;
  for (int seed = 1; seed <= 25; ++seed) {
    auto cfg = make_sim_config(radio, n, 12.5, 0.5, static_cast<std::uint64_t>(seed));
    short_costs.push_back(noisy_cost(run_batch(cfg, toff), params));
    cfg.batch_seconds = 50.0;
    cfg.seed = static_cast<std::uint64_t>(1000 + seed);
    long_costs.push_back(noisy_cost(run_batch(cfg, toff), params));
  }
  const double ratio = sample_std(short_costs) / sample_std(long_costs);
  // Quadrupling the batch should halve the spread (wide band for 25 samples).
  CHECK(ratio > 1.3);
  CHECK(ratio < 3.1);
}

TEST_CASE("short-batch warning threshold") {
  coex::RadioDefaults radio;
  auto cfg = make_sim_config(radio, 5, 50.0, 0.5, 1);
  CHECK(!short_batch(cfg, 0.1));   // 50 s covers ~333 cycles
  CHECK(short_batch(cfg, 0.9));    // fewer than 100 cycles
  cfg.batch_seconds = 2.0;
  CHECK(short_batch(cfg, 0.1));
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.tau = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  cfg.stations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  cfg.toff_jitter = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  CHECK_THROWS_AS(run_batch(cfg, 0.0), std::invalid_argument);
}
