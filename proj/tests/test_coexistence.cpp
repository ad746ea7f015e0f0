#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bco/coexistence.hpp"
#include "bco/golden.hpp"
#include "bco/rng.hpp"

using namespace bco;
using namespace bco::coex;

namespace {

CoexistenceParams bare_params(int n, double t_on, double c1, double c2, double rate,
                              double baseline) {
  CoexistenceParams p;
  p.stations = n;
  p.t_on = t_on;
  p.lte_rate = rate;
  p.wifi_baseline.assign(static_cast<std::size_t>(n), baseline);
  p.c1 = c1;
  p.c2 = c2;
  p.collision_prob = 0.0;
  return p;
}

}  // namespace

TEST_CASE("wifi throughput formula and limits") {
  auto p = bare_params(1, 0.05, 0.0, 0.0, 75e6, 50e6);
  CHECK(wifi_throughput(p, 0.05, 0) == doctest::Approx(25e6).epsilon(1e-12));
  // Long off-times approach the baseline rate.
  CHECK(wifi_throughput(p, 1e7, 0) == doctest::Approx(50e6).epsilon(1e-6));
  // Zero effective airtime at toff == c1.
  p.c1 = 5e-4;
  CHECK(wifi_throughput(p, 5e-4, 0) == 0.0);
  CHECK_THROWS_AS(wifi_throughput(p, 4e-4, 0), std::invalid_argument);
  CHECK_THROWS_AS(wifi_throughput(p, 0.05, 3), std::out_of_range);
  // Strictly increasing in the off-time.
  double prev = wifi_throughput(p, 0.001, 0);
  for (double toff = 0.01; toff < 1.0; toff += 0.05) {
    const double cur = wifi_throughput(p, toff, 0);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("duty-cycled transmitter throughput formula and limits") {
  auto p = bare_params(1, 0.05, 0.0, 0.0, 75e6, 50e6);
  CHECK(lte_throughput(p, 0.05) == doctest::Approx(37.5e6).epsilon(1e-12));
  CHECK(lte_throughput(p, 0.0) == doctest::Approx(75e6).epsilon(1e-12));
  p.c2 = 0.01;
  CHECK(lte_throughput(p, 0.0) == doctest::Approx(75e6 * 0.04 / 0.05).epsilon(1e-12));
  p.c2 = p.t_on;
  CHECK(lte_throughput(p, 0.3) == 0.0);
  p.c2 = 0.0;
  double prev = lte_throughput(p, 0.0);
  for (double toff = 0.05; toff < 2.0; toff += 0.1) {
    const double cur = lte_throughput(p, toff);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("cost matches its definitional identity and hand value") {
  // n=1, t_on=0.05, c1=c2=0, r=s=1, z=0: 2 log(1.05) - log(0.05).
  auto unit = bare_params(1, 0.05, 0.0, 0.0, 1.0, 1.0);
  const double expected = 2.0 * std::log(1.05) - std::log(0.05);
  CHECK(cost(unit, 0.0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(cost(unit, 0.0) == doctest::Approx(3.09331).epsilon(1e-5));

  // f(z) = -log s_lte(toff(z)) - sum_j log s_wifi_j(toff(z)), checked to 1e-12.
  auto p = bare_params(5, 0.05, 2e-4, 4e-4, 75e6, 14e6);
  for (double z = -6.5; z < 0.0; z += 0.61) {
    const double toff = ztilde_to_toff(z, p.c1);
    double direct = -std::log(lte_throughput(p, toff));
    for (int j = 0; j < p.stations; ++j) direct -= std::log(wifi_throughput(p, toff, j));
    CHECK(cost(p, z) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("cost is convex (midpoint test on random pairs)") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(uniform01(rng) * 10.0);
    auto p = bare_params(n, 0.01 + 0.1 * uniform01(rng), 1e-3 * uniform01(rng), 0.0, 75e6, 10e6);
    const double z1 = uniform_in(rng, -6.9, 0.0);
    const double z2 = uniform_in(rng, -6.9, 0.0);
    const double mid = cost(p, 0.5 * (z1 + z2));
    CHECK(mid <= 0.5 * (cost(p, z1) + cost(p, z2)) + 1e-9);
  }
}

TEST_CASE("analytic gradient values, limits, and monotonicity") {
  auto unit = bare_params(1, 0.05, 0.0, 0.0, 1.0, 1.0);
  CHECK(analytic_gradient(unit, 0.0) == doctest::Approx(2.0 / 1.05 - 1.0).epsilon(1e-14));
  // e^z vanishes far left: gradient tends to -n.
  auto p10 = bare_params(10, 0.05, 0.0, 0.0, 75e6, 10e6);
  CHECK(analytic_gradient(p10, -40.0) == doctest::Approx(-10.0).epsilon(1e-12));
  // Stationary at z* = log(n (t_on + c1)) by construction.
  CHECK(analytic_gradient(p10, std::log(10.0 * 0.05)) == doctest::Approx(0.0).epsilon(1e-12));
  // Derivative of a convex function is nondecreasing.
  double prev = analytic_gradient(p10, -7.0);
  for (double z = -6.8; z <= 0.0; z += 0.2) {
    const double g = analytic_gradient(p10, z);
    CHECK(g >= prev);
    prev = g;
  }
}

TEST_CASE("analytic gradient matches central differences of the cost") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(uniform01(rng) * 10.0);
    auto p = bare_params(n, 0.01 + 0.1 * uniform01(rng), 1e-3 * uniform01(rng),
                         5e-4 * uniform01(rng), 75e6, 10e6);
    const double z = uniform_in(rng, -6.9, 0.0);
    const double h = 1e-5;
    const double fd = (cost(p, z + h) - cost(p, z - h)) / (2.0 * h);
    const double g = analytic_gradient(p, z);
    CHECK(std::abs(fd - g) <= 1e-6 * std::max(1.0, std::abs(g)));
  }
}

TEST_CASE("optimum oracle: closed form, golden section, and clamping") {
  const Interval K(-6.9, 0.0);

  auto p10 = bare_params(10, 0.05, 0.0, 0.0, 75e6, 10e6);
  auto opt = optimal_ztilde(p10, K);
  CHECK(opt.ztilde == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(opt.toff == doctest::Approx(0.5).epsilon(1e-12));

  auto p1 = bare_params(1, 0.05, 0.0, 0.0, 75e6, 10e6);
  CHECK(optimal_ztilde(p1, K).ztilde == doctest::Approx(std::log(0.05)).epsilon(1e-12));

  auto p5 = bare_params(5, 0.05, 0.001, 0.0, 75e6, 10e6);
  CHECK(optimal_ztilde(p5, K).ztilde == doctest::Approx(std::log(0.255)).epsilon(1e-12));

  // Golden-section minimization of the cost lands on the same point.
  const auto golden =
      minimize_golden([&](double z) { return cost(p5, z); }, K.lower, K.upper, 1e-8);
  CHECK(golden.x == doctest::Approx(optimal_ztilde(p5, K).ztilde).epsilon(1e-6));

  // Interior minimizer: nudging either way cannot improve.
  const double zstar = optimal_ztilde(p5, K).ztilde;
  CHECK(cost(p5, zstar + 1e-3) >= cost(p5, zstar));
  CHECK(cost(p5, zstar - 1e-3) >= cost(p5, zstar));

  // A large station count pushes the optimum past the upper bound: clamped.
  auto p_many = bare_params(50, 0.2, 0.0, 0.0, 75e6, 10e6);
  CHECK(optimal_ztilde(p_many, K).ztilde == doctest::Approx(0.0));
}

TEST_CASE("airtime corrections") {
  const auto a = airtime_corrections(2e-3, 0.5, 1e-3);
  CHECK(a.c1 == doctest::Approx(0.5e-3).epsilon(1e-12));
  CHECK(a.c2 == doctest::Approx(0.5e-3).epsilon(1e-12));

  const auto zero = airtime_corrections(2e-3, 0.0, 1e-3);
  CHECK(zero.c1 == 0.0);
  CHECK(zero.c2 == 0.0);

  // ceil(3e-3 / 2e-3) = 2 subframes.
  const auto b = airtime_corrections(3e-3, 1.0, 1e-3);
  CHECK(b.c2 == doctest::Approx(2e-3).epsilon(1e-12));
  CHECK(b.c1 == doctest::Approx(1.5e-3).epsilon(1e-12));

  CHECK_THROWS_AS(airtime_corrections(0.0, 0.5, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(airtime_corrections(2e-3, 1.5, 1e-3), std::invalid_argument);
}

TEST_CASE("log off-time transforms invert each other") {
  CHECK(toff_to_ztilde(1.0 + 0.3, 0.3) == doctest::Approx(0.0).epsilon(1e-14));
  for (double c1 : {0.0, 1e-4, 0.02}) {
    for (double z : {-3.0, -6.9, 0.0, -0.37}) {
      CHECK(toff_to_ztilde(ztilde_to_toff(z, c1), c1) == doctest::Approx(z).epsilon(1e-12));
    }
  }
  // The decision interval spans toff - c1 from about 1.006 ms to 1 s.
  CHECK(ztilde_to_toff(-6.9, 0.0) == doctest::Approx(1.00518e-3).epsilon(1e-5));
  CHECK(ztilde_to_toff(0.0, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(toff_to_ztilde(0.3, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(toff_to_ztilde(0.1, 0.3), std::invalid_argument);
}

TEST_CASE("baseline saturation rate") {
  // Always-transmitting single station: back-to-back successes.
  MacParams solo{1.0, 9e-6, 2e-3, 2e-3, 60000.0, 1};
  CHECK(wifi_baseline_rate(solo) == doctest::Approx(60000.0 / 2e-3).epsilon(1e-12));

  // Vanishing transmit probability gives vanishing throughput.
  MacParams timid{1e-12, 9e-6, 2e-3, 2e-3, 60000.0, 3};
  CHECK(wifi_baseline_rate(timid) < 1.0);

  // n=2, tau=0.1: per-slot success 0.09, slot mean 0.81*9e-6 + 0.19*2e-3.
  MacParams pair{0.1, 9e-6, 2e-3, 2e-3, 5.0 * 1500.0 * 8.0, 2};
  const double expected = 0.09 * 60000.0 / (0.81 * 9e-6 + 0.19 * 2e-3);
  CHECK(wifi_baseline_rate(pair) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(wifi_baseline_rate(pair) == doctest::Approx(13.94e6).epsilon(1e-3));

  CHECK_THROWS_AS(wifi_baseline_rate(MacParams{0.0, 9e-6, 2e-3, 2e-3, 1.0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(wifi_baseline_rate(MacParams{1.1, 9e-6, 2e-3, 2e-3, 1.0, 1}),
                  std::invalid_argument);
}

TEST_CASE("common rate scaling shifts the cost by a constant only") {
  const Interval K(-6.9, 0.0);
  auto p = bare_params(4, 0.05, 1e-4, 2e-4, 75e6, 12e6);
  auto scaled = p;
  const double factor = 3.7;
  scaled.lte_rate *= factor;
  for (auto& s : scaled.wifi_baseline) s *= factor;

  const double shift = -(p.stations + 1.0) * std::log(factor);
  for (double z = -6.5; z <= 0.0; z += 0.5) {
    CHECK(cost(scaled, z) - cost(p, z) == doctest::Approx(shift).epsilon(1e-12));
    CHECK(analytic_gradient(scaled, z) == doctest::Approx(analytic_gradient(p, z)).epsilon(1e-14));
  }
  CHECK(optimal_ztilde(scaled, K).ztilde == optimal_ztilde(p, K).ztilde);
}

TEST_CASE("default parameter packs are coherent") {
  RadioDefaults radio;
  CHECK(radio.payload_bits() == doctest::Approx(60000.0));
  CHECK(radio.frame_duration() == doctest::Approx(60000.0 / 65e6 + 1e-4).epsilon(1e-12));

  const auto p10 = make_params(radio, 10);
  CHECK(p10.stations == 10);
  CHECK(p10.collision_prob == doctest::Approx(1.0 - std::pow(15.0 / 16.0, 10)).epsilon(1e-12));
  CHECK(p10.c1 > 0.0);
  CHECK(p10.c2 > 0.0);
  CHECK(p10.t_on > p10.c2);
  // The derived optimum sits near 0.5 s for ten stations.
  const Interval K(-6.9, 0.0);
  const auto opt = optimal_ztilde(p10, K);
  CHECK(opt.toff == doctest::Approx(0.5).epsilon(0.02));

  const auto p1 = make_params(radio, 1);
  CHECK(optimal_ztilde(p1, K).toff == doctest::Approx(0.05).epsilon(0.02));

  // Declared loss constants: gradient sup at an endpoint, range over K.
  const auto loss = coexistence_loss(p10, K);
  CHECK(loss.lipschitz == doctest::Approx(std::abs(analytic_gradient(p10, K.lower))));
  CHECK(loss.range_bound ==
        doctest::Approx(std::max(cost(p10, K.lower), cost(p10, K.upper)) - cost(p10, opt.ztilde)));
  // Spot-check the declared Lipschitz constant on sampled pairs.
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const double z1 = uniform_in(rng, K.lower, K.upper);
    const double z2 = uniform_in(rng, K.lower, K.upper);
    CHECK(std::abs(loss.value(z1) - loss.value(z2)) <=
          loss.lipschitz * std::abs(z1 - z2) + 1e-9);
  }

  CoexistenceParams bad = p10;
  bad.c2 = bad.t_on;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p10;
  bad.wifi_baseline.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
