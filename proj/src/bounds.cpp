#include "bco/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace bco {

double interval_regret_bound(double diameter, double lipschitz, double eta, double delta,
                             double rounds_delta, double total_dev) {
  if (!(eta > 0.0)) throw std::invalid_argument("interval_regret_bound: eta must be positive");
  if (!(delta > 0.0) || delta >= diameter / 2.0)
    throw std::invalid_argument("interval_regret_bound: delta must lie in (0, D/2)");
  const double d2 = diameter * diameter;
  const double g2 = lipschitz * lipschitz;
  return 2.0 * d2 / eta + eta * g2 * rounds_delta + eta * total_dev / (4.0 * delta * delta) +
         4.0 * delta * lipschitz * rounds_delta;
}

TunedBound tuned_regret_bound(BoundRegime regime, double horizon, double diameter,
                              double lipschitz, double range_bound, double extra) {
  if (horizon < 2.0) throw std::invalid_argument("tuned_regret_bound: horizon must be >= 2");
  if (!(diameter > 0.0) || !(lipschitz > 0.0) || !(range_bound > 0.0))
    throw std::invalid_argument("tuned_regret_bound: parameters must be positive");
  const double T = horizon;
  const double D = diameter;
  const double G = lipschitz;
  const double C = range_bound;
  switch (regime) {
    case BoundRegime::general: {
      const double eta = G / (D * std::pow(T, 0.75));
      const double delta = C * std::pow(T, -0.25);
      const double bound =
          (2.0 * G * D + 4.0 * G * C + G / (4.0 * D)) * std::pow(T, 0.75) + G * D * std::pow(T, 0.25);
      return TunedBound{eta, delta, bound};
    }
    case BoundRegime::switching_total: {
      const double eta = G / (D * std::sqrt(T));
      const double delta = C * std::log(T) / T;
      const double bound = (extra / 2.0 + 3.0) * G * D * std::sqrt(T) + 4.0 * C * G * std::log(T);
      return TunedBound{eta, delta, bound};
    }
    case BoundRegime::switching_interval: {
      const double eta = G / (D * std::sqrt(T));
      const double delta = C * std::log(T) / T;
      const double bound = 3.0 * G * D * std::sqrt(T) + 4.0 * C * G * std::log(T) + 2.0 * C;
      return TunedBound{eta, delta, bound};
    }
    case BoundRegime::slow: {
      const double alpha = extra;
      const double eta = G / (D * std::pow(T, 0.75));
      const double delta = alpha * std::pow(T, -0.25);
      const double bound = (2.0 * G * D + 4.0 * G * alpha + G / (4.0 * D)) * std::pow(T, 0.75) +
                           G * D * std::pow(T, 0.25);
      return TunedBound{eta, delta, bound};
    }
  }
  throw std::logic_error("tuned_regret_bound: unknown regime");
}

}  // namespace bco
