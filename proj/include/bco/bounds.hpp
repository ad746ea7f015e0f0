#pragma once

namespace bco {

// Expected interval-regret bound for the constant-parameter learner over an
// interval of length rounds_delta = r - s with total deviation L:
//   2 D^2 / eta + eta G^2 Delta + eta L / (4 delta^2) + 4 delta G Delta.
double interval_regret_bound(double diameter, double lipschitz, double eta, double delta,
                             double rounds_delta, double total_dev);

// Tuned-parameter regimes. `extra` carries the switch count N for
// switching_total and the per-round drift bound alpha for slow; it is unused
// otherwise.
enum class BoundRegime { general, switching_total, switching_interval, slow };

struct TunedBound {
  double eta;
  double delta;
  double bound;
};

TunedBound tuned_regret_bound(BoundRegime regime, double horizon, double diameter,
                              double lipschitz, double range_bound, double extra = 0.0);

}  // namespace bco
