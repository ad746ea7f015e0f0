#include "bco/learner.hpp"

#include <cmath>
#include <limits>

namespace bco {

double gradient_estimate(double gplus, double gminus, int eps, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("gradient_estimate: delta must be positive");
  if (eps != 1 && eps != -1) throw std::invalid_argument("gradient_estimate: eps must be +1 or -1");
  return (gplus - gminus) / (2.0 * static_cast<double>(eps) * delta);
}

TwoPointLearner::TwoPointLearner(const Interval& interval, const PowerSchedule& exploration,
                                 const PowerSchedule& step_size, double y0, std::uint64_t seed,
                                 TruncationConfig truncation)
    : interval_(interval),
      exploration_(exploration),
      step_size_(step_size),
      truncation_(truncation),
      rng_(seed) {
  const double delta0 = exploration_(0);
  if (delta0 > interval_.diameter() / 2.0)
    throw std::invalid_argument("TwoPointLearner: delta_0 exceeds half the interval diameter");
  if (truncation_.enabled) {
    if (!(truncation_.multiplier > 0.0))
      throw std::invalid_argument("TwoPointLearner: truncation multiplier must be positive");
    if (truncation_.lipschitz_bound && !(*truncation_.lipschitz_bound > 0.0))
      throw std::invalid_argument("TwoPointLearner: truncation Lipschitz bound must be positive");
  }
  y_ = project(interval_, delta0, y0);
  eps_ = rademacher(rng_);
}

Query TwoPointLearner::next_query() {
  if (query_pending_) throw ProtocolError("next_query: previous query not yet observed");
  query_pending_ = true;
  const double d = exploration_(k_);
  if (phase_ == Phase::AwaitPlus)
    return Query{2 * k_ + 1, y_ + eps_ * d};
  return Query{2 * k_ + 2, y_ - eps_ * d};
}

std::optional<StepReport> TwoPointLearner::observe(double cost) {
  if (!query_pending_) throw ProtocolError("observe: no pending query");
  query_pending_ = false;
  ++rounds_;

  if (phase_ == Phase::AwaitPlus) {
    cost_plus_ = cost;
    phase_ = Phase::AwaitMinus;
    return std::nullopt;
  }

  const double d = exploration_(k_);
  const double raw = gradient_estimate(cost_plus_, cost, eps_, d);

  double applied = raw;
  bool truncated = false;
  if (truncation_.enabled) {
    double threshold = std::numeric_limits<double>::infinity();
    if (truncation_.lipschitz_bound)
      threshold = truncation_.multiplier * *truncation_.lipschitz_bound;
    else if (k_ > 0 && last_applied_ != 0.0)
      threshold = truncation_.multiplier * std::abs(last_applied_);
    if (std::abs(raw) > threshold) {
      applied = last_applied_;
      truncated = true;
    }
  }

  y_ = project(interval_, d, y_ - step_size_(k_) * applied);
  last_applied_ = applied;

  const StepReport report{k_, raw, applied, truncated, y_};
  ++k_;
  eps_ = rademacher(rng_);
  phase_ = Phase::AwaitPlus;
  return report;
}

}  // namespace bco
