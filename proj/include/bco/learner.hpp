#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "bco/interval.hpp"
#include "bco/rng.hpp"
#include "bco/schedule.hpp"

namespace bco {

// Raised when the query/observe protocol is violated (double query, or an
// observation without a pending query).
struct ProtocolError : std::logic_error {
  using std::logic_error::logic_error;
};

// Central-difference gradient estimate from the two half-round costs:
//   (gplus - gminus) / (2 * eps * delta).
double gradient_estimate(double gplus, double gminus, int eps, double delta);

// Gradient-spike truncation. When the raw estimate exceeds the threshold the
// update reuses the previously applied gradient instead. The threshold is
// multiplier * G when a Lipschitz bound G is configured, otherwise
// multiplier * |last applied gradient| (no truncation before the first
// accepted gradient, or while the last applied gradient is exactly zero).
struct TruncationConfig {
  bool enabled = true;
  double multiplier = 10.0;
  std::optional<double> lipschitz_bound;
};

enum class Phase { AwaitPlus, AwaitMinus };

struct Query {
  int round;  // 1-based round index t
  double x;   // point to evaluate
};

// Emitted when an outer iteration completes (second observation).
struct StepReport {
  int iteration;    // index k of the completed iteration
  double estimate;  // raw central-difference estimate
  double applied;   // gradient actually used in the update
  bool truncated;
  double center_next;  // y_{k+1}
};

// Online gradient descent with sequential multi-point gradient estimates.
//
// One outer iteration k spans two rounds: the learner queries y_k + eps*d_k
// at round 2k+1 and y_k - eps*d_k at round 2k+2 (eps a fresh uniform sign),
// forms the central-difference estimate from the two observed costs, and
// descends with step eta_k, projecting back onto the shrunken interval
// K_{d_k} = [A + d_k, B - d_k]. Since the exploration schedule is
// non-increasing, every queried point stays inside [A, B].
//
// Deterministic: the same seed and cost stream reproduce the trajectory
// bit for bit. One instance per thread; instances share nothing.
class TwoPointLearner {
 public:
  TwoPointLearner(const Interval& interval, const PowerSchedule& exploration,
                  const PowerSchedule& step_size, double y0, std::uint64_t seed,
                  TruncationConfig truncation = TruncationConfig{});

  // Returns the next point to play. Calling twice without an interleaved
  // observe() throws ProtocolError.
  Query next_query();

  // Feeds back the cost of the pending query. Returns a StepReport when this
  // observation completes an iteration, std::nullopt after the first
  // half-round.
  std::optional<StepReport> observe(double cost);

  int iteration() const { return k_; }
  int rounds_completed() const { return rounds_; }
  double center() const { return y_; }
  int epsilon() const { return eps_; }
  Phase phase() const { return phase_; }
  double delta() const { return exploration_(k_); }
  double eta() const { return step_size_(k_); }
  double last_applied_gradient() const { return last_applied_; }
  const Interval& decision_interval() const { return interval_; }

 private:
  Interval interval_;
  PowerSchedule exploration_;
  PowerSchedule step_size_;
  TruncationConfig truncation_;
  Rng rng_;

  double y_;
  int k_ = 0;
  int rounds_ = 0;
  Phase phase_ = Phase::AwaitPlus;
  bool query_pending_ = false;
  int eps_;
  double cost_plus_ = 0.0;
  double last_applied_ = 0.0;
};

}  // namespace bco
