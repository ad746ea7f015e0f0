#pragma once

#include <optional>
#include <vector>

#include "bco/interval.hpp"
#include "bco/loss.hpp"

namespace bco::coex {

// Saturated slotted random-access MAC parameters used to derive the baseline
// per-station rate (the rate a station sees with the duty-cycled transmitter
// absent).
struct MacParams {
  double tau;             // per-slot transmit probability, (0, 1]
  double idle_slot;       // sigma, seconds
  double success_slot;    // T_s, seconds
  double collision_slot;  // T_c, seconds
  double payload_bits;    // delivered bits per successful frame
  int stations;           // n
};

// Slotted saturation throughput of one station:
//   s_j = P_succ_j * L / (P_idle * sigma + P_succ * T_s + P_coll * T_c)
// with P_succ_j = tau (1-tau)^(n-1), P_succ = n P_succ_j, P_idle = (1-tau)^n.
double wifi_baseline_rate(const MacParams& mac);

// All symbols of the analytic coexistence model. Durations in seconds, rates
// in bits/second. c1 is the mean WiFi airtime lost to a partial collision at
// the start of an on-period, c2 the matching loss on the duty-cycled side.
struct CoexistenceParams {
  int stations = 1;                   // n
  double t_on = 0.05;                 // on-period, s
  double lte_rate = 75e6;             // r, bit/s
  std::vector<double> wifi_baseline;  // s_j, bit/s, one entry per station
  double frame_duration = 1e-3;       // T_fra, s
  double collision_prob = 0.0;        // p_txA in [0, 1]
  double subframe = 1e-3;             // gamma, s
  double c1 = 0.0;
  double c2 = 0.0;

  void validate() const;
};

struct AirtimeCorrections {
  double c1;
  double c2;
};

// c1 = (T_fra / 2) p_txA;  c2 = ceil(T_fra / (2 gamma)) gamma p_txA.
AirtimeCorrections airtime_corrections(double frame_duration, double collision_prob,
                                       double subframe);

// Throughput of station j at mean off-time toff_bar:
//   s_j (toff_bar - c1) / (t_on + toff_bar).
// toff_bar below c1 is rejected (negative effective airtime); equality gives 0.
double wifi_throughput(const CoexistenceParams& p, double toff_bar, int station);

// Duty-cycled transmitter throughput: r (t_on - c2) / (t_on + toff_bar).
double lte_throughput(const CoexistenceParams& p, double toff_bar);

// Log-domain control coordinate: ztilde = log(toff_bar - c1).
double toff_to_ztilde(double toff_bar, double c1);
double ztilde_to_toff(double ztilde, double c1);

// Proportional-fairness cost in the log coordinate,
//   f(z) = -log(r (t_on - c2)) - sum_j log s_j + (n+1) log(t_on + c1 + e^z) - n z,
// convex in z.
double cost(const CoexistenceParams& p, double ztilde);

// df/dz = (n+1) e^z / (t_on + c1 + e^z) - n.
double analytic_gradient(const CoexistenceParams& p, double ztilde);

struct Optimum {
  double ztilde;
  double toff;
};

// Unique stationary point z* = log(n (t_on + c1)) clamped to the interval,
// with the corresponding mean off-time.
Optimum optimal_ztilde(const CoexistenceParams& p, const Interval& interval);

// Wraps the cost as a Loss with its analytic gradient and exact declared
// constants on the interval (the gradient is nondecreasing, so its sup lives
// at an endpoint; the cost is convex, so its range is endpoint-max minus the
// clamped-optimum value).
Loss coexistence_loss(const CoexistenceParams& p, const Interval& interval);

// One knob set for building consistent parameter packs. These are artifact
// defaults, not measured values; everything is overridable through the run
// config.
struct RadioDefaults {
  double tau = 1.0 / 16.0;
  double idle_slot = 9e-6;
  double phy_rate = 65e6;        // payload bits/s inside a frame
  double frame_overhead = 1e-4;  // fixed per-frame overhead, s
  int aggregated_packets = 5;
  int packet_bytes = 1500;
  double subframe = 1e-3;
  double lte_rate = 75e6;
  double t_on = 0.05;
  std::optional<double> collision_prob;  // default 1 - (1-tau)^n

  double payload_bits() const { return 8.0 * aggregated_packets * packet_bytes; }
  double frame_duration() const { return payload_bits() / phy_rate + frame_overhead; }
};

double default_collision_prob(double tau, int stations);

CoexistenceParams make_params(const RadioDefaults& radio, int stations);

}  // namespace bco::coex
