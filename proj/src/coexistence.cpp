#include "bco/coexistence.hpp"

#include <cmath>
#include <stdexcept>

namespace bco::coex {

double wifi_baseline_rate(const MacParams& mac) {
  if (!(mac.tau > 0.0) || mac.tau > 1.0)
    throw std::invalid_argument("wifi_baseline_rate: tau must lie in (0, 1]");
  if (mac.stations < 1) throw std::invalid_argument("wifi_baseline_rate: need >= 1 station");
  if (!(mac.idle_slot > 0.0) || !(mac.success_slot > 0.0) || !(mac.collision_slot > 0.0))
    throw std::invalid_argument("wifi_baseline_rate: slot durations must be positive");
  const int n = mac.stations;
  const double p_succ_j = mac.tau * std::pow(1.0 - mac.tau, n - 1);
  const double p_succ = n * p_succ_j;
  const double p_idle = std::pow(1.0 - mac.tau, n);
  const double p_coll = 1.0 - p_idle - p_succ;
  const double slot = p_idle * mac.idle_slot + p_succ * mac.success_slot + p_coll * mac.collision_slot;
  return p_succ_j * mac.payload_bits / slot;
}

void CoexistenceParams::validate() const {
  if (stations < 1) throw std::invalid_argument("CoexistenceParams: need >= 1 station");
  if (!(lte_rate > 0.0)) throw std::invalid_argument("CoexistenceParams: rate must be positive");
  if (!(c1 >= 0.0) || !(c2 >= 0.0))
    throw std::invalid_argument("CoexistenceParams: airtime corrections must be >= 0");
  if (!(t_on > c2)) throw std::invalid_argument("CoexistenceParams: t_on must exceed c2");
  if (wifi_baseline.size() != static_cast<std::size_t>(stations))
    throw std::invalid_argument("CoexistenceParams: one baseline rate per station required");
  for (double s : wifi_baseline)
    if (!(s > 0.0)) throw std::invalid_argument("CoexistenceParams: baseline rates must be positive");
  if (collision_prob < 0.0 || collision_prob > 1.0)
    throw std::invalid_argument("CoexistenceParams: collision probability outside [0, 1]");
}

AirtimeCorrections airtime_corrections(double frame_duration, double collision_prob,
                                       double subframe) {
  if (!(frame_duration > 0.0) || !(subframe > 0.0))
    throw std::invalid_argument("airtime_corrections: durations must be positive");
  if (collision_prob < 0.0 || collision_prob > 1.0)
    throw std::invalid_argument("airtime_corrections: collision probability outside [0, 1]");
  const double c1 = 0.5 * frame_duration * collision_prob;
  const double c2 = std::ceil(frame_duration / (2.0 * subframe)) * subframe * collision_prob;
  return AirtimeCorrections{c1, c2};
}

double wifi_throughput(const CoexistenceParams& p, double toff_bar, int station) {
  if (station < 0 || station >= p.stations)
    throw std::out_of_range("wifi_throughput: station index out of range");
  if (toff_bar < p.c1) throw std::invalid_argument("wifi_throughput: toff_bar below c1");
  return p.wifi_baseline[static_cast<std::size_t>(station)] * (toff_bar - p.c1) /
         (p.t_on + toff_bar);
}

double lte_throughput(const CoexistenceParams& p, double toff_bar) {
  if (toff_bar < 0.0) throw std::invalid_argument("lte_throughput: toff_bar must be >= 0");
  return p.lte_rate * (p.t_on - p.c2) / (p.t_on + toff_bar);
}

double toff_to_ztilde(double toff_bar, double c1) {
  if (!(toff_bar > c1)) throw std::invalid_argument("toff_to_ztilde: toff_bar must exceed c1");
  return std::log(toff_bar - c1);
}

double ztilde_to_toff(double ztilde, double c1) { return std::exp(ztilde) + c1; }

double cost(const CoexistenceParams& p, double ztilde) {
  const double n = static_cast<double>(p.stations);
  double log_baselines = 0.0;
  for (double s : p.wifi_baseline) log_baselines += std::log(s);
  return -std::log(p.lte_rate * (p.t_on - p.c2)) - log_baselines +
         (n + 1.0) * std::log(p.t_on + p.c1 + std::exp(ztilde)) - n * ztilde;
}

double analytic_gradient(const CoexistenceParams& p, double ztilde) {
  const double n = static_cast<double>(p.stations);
  const double u = std::exp(ztilde);
  return (n + 1.0) * u / (p.t_on + p.c1 + u) - n;
}

Optimum optimal_ztilde(const CoexistenceParams& p, const Interval& interval) {
  const double z = std::log(static_cast<double>(p.stations) * (p.t_on + p.c1));
  const double clamped = project(interval, 0.0, z);
  return Optimum{clamped, ztilde_to_toff(clamped, p.c1)};
}

Loss coexistence_loss(const CoexistenceParams& p, const Interval& interval) {
  p.validate();
  Loss loss;
  loss.value = [p](double z) { return cost(p, z); };
  loss.grad = [p](double z) { return analytic_gradient(p, z); };
  const double g_lo = std::abs(analytic_gradient(p, interval.lower));
  const double g_hi = std::abs(analytic_gradient(p, interval.upper));
  loss.lipschitz = g_lo > g_hi ? g_lo : g_hi;
  const double f_lo = cost(p, interval.lower);
  const double f_hi = cost(p, interval.upper);
  const double f_min = cost(p, optimal_ztilde(p, interval).ztilde);
  loss.range_bound = (f_lo > f_hi ? f_lo : f_hi) - f_min;
  return loss;
}

double default_collision_prob(double tau, int stations) {
  return 1.0 - std::pow(1.0 - tau, stations);
}

CoexistenceParams make_params(const RadioDefaults& radio, int stations) {
  MacParams mac;
  mac.tau = radio.tau;
  mac.idle_slot = radio.idle_slot;
  mac.success_slot = radio.frame_duration();
  mac.collision_slot = radio.frame_duration();
  mac.payload_bits = radio.payload_bits();
  mac.stations = stations;
  const double baseline = wifi_baseline_rate(mac);

  CoexistenceParams p;
  p.stations = stations;
  p.t_on = radio.t_on;
  p.lte_rate = radio.lte_rate;
  p.wifi_baseline.assign(static_cast<std::size_t>(stations), baseline);
  p.frame_duration = radio.frame_duration();
  p.collision_prob =
      radio.collision_prob ? *radio.collision_prob : default_collision_prob(radio.tau, stations);
  p.subframe = radio.subframe;
  const auto corrections = airtime_corrections(p.frame_duration, p.collision_prob, p.subframe);
  p.c1 = corrections.c1;
  p.c2 = corrections.c2;
  p.validate();
  return p;
}

}  // namespace bco::coex
