#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bco/coexistence.hpp"
#include "bco/interval.hpp"
#include "bco/learner.hpp"
#include "bco/loss.hpp"
#include "bco/packet_sim.hpp"
#include "bco/regret.hpp"

namespace bco::experiments {

enum class Scenario {
  omega_sweep,
  schedule_sweep,
  slow_dynamics,
  fast_dynamics,
  noisy_sim,
  bound_check,
};

enum class StartMode { midpoint, random, fixed };

struct LearnerSettings {
  Interval interval{-6.9, 0.0};
  double omega = 0.01;
  double exploration_exponent = 0.75;
  double step_scale = 1.0;
  double step_exponent = 0.5;
  bool constant_parameters = false;  // freeze eta and delta
  double eta_constant = 0.0;
  double delta_constant = 0.0;
  StartMode start_mode = StartMode::midpoint;
  double start_value = 0.0;  // used by StartMode::fixed
  TruncationConfig truncation;
};

enum class EnvironmentKind { analytic, simulator };

struct EnvironmentSettings {
  EnvironmentKind kind = EnvironmentKind::analytic;
  int stations = 10;
  coex::RadioDefaults radio;
  double batch_seconds = 50.0;  // simulator only
  double toff_jitter = 0.5;     // simulator only
};

// Station-count change applied at the given outer iteration. An event at
// iteration 0 overrides the initial count; later events switch the loss
// between the two half-round queries of that iteration (worst case for the
// gradient estimate) or, when mid_iteration_switch is off, before its first
// query.
struct DynamicsEvent {
  int iteration;
  int stations;
};

struct BoundCheckSettings {
  std::vector<int> piece_stations{5, 10};
  std::vector<int> switch_rounds{502};  // first round of each later piece
  int rounds = 2000;                    // horizon T (even)
  std::optional<double> eta;    // default: switching-regime prescription
  std::optional<double> delta;  // from the measured constants
  int deviation_grid = 10000;
};

struct ExperimentPlan {
  Scenario scenario = Scenario::omega_sweep;
  std::string name = "run";
  LearnerSettings learner;
  EnvironmentSettings env;
  std::vector<DynamicsEvent> dynamics;
  bool mid_iteration_switch = true;
  int iterations = 100;
  int replications = 25;
  std::vector<std::uint64_t> seeds;  // empty: 1..replications
  double convergence_tolerance = 0.020;  // seconds, on mean off-time
  double throughput_tolerance = 0.10;
  bool parallel = true;
  BoundCheckSettings bound_check;

  void validate() const;
  std::vector<std::uint64_t> effective_seeds() const;
};

// Per-iteration trace of one replication. Throughput fields are evaluated on
// the analytic model at the iteration's station count (simulator runs store
// their batch measurements separately).
struct TrajectoryRecord {
  int k = 0;
  int t = 0;  // rounds completed, 2k+2
  double y_center = 0.0;
  double y_next = 0.0;
  double x_first = 0.0;
  double x_second = 0.0;
  double cost_first = 0.0;
  double cost_second = 0.0;
  double gradient_raw = 0.0;
  double gradient_applied = 0.0;
  bool truncated = false;
  int stations = 0;
  double toff_center = 0.0;
  double toff_next = 0.0;
  double s_lte = 0.0;
  double s_wifi_mean = 0.0;
  double opt_ztilde = 0.0;
  double opt_toff = 0.0;
  double opt_s_lte = 0.0;
  double opt_s_wifi_mean = 0.0;
  double measured_s_lte = 0.0;       // NaN for analytic runs
  double measured_s_wifi_mean = 0.0;  // NaN for analytic runs
  double regret_so_far = 0.0;
};

struct ReplicationResult {
  std::uint64_t seed = 0;
  int run_index = 0;
  std::vector<TrajectoryRecord> records;
  std::shared_ptr<RegretLedger> ledger;
  int short_batches = 0;
};

// Maps iterations to station counts and the matching analytic parameter
// packs; also yields the round-level loss sequence the environment plays.
struct Timeline {
  std::vector<int> segment_start_round;  // 1-based, first is 1
  std::vector<int> segment_stations;
  std::vector<coex::CoexistenceParams> segment_params;
  int horizon = 0;

  int segment_of_round(int t) const;
  const coex::CoexistenceParams& params_of_round(int t) const;
};

Timeline build_timeline(const EnvironmentSettings& env, const std::vector<DynamicsEvent>& dynamics,
                        bool mid_iteration_switch, int iterations);

std::shared_ptr<PiecewiseSequence> analytic_sequence(const Timeline& timeline,
                                                     const Interval& interval);

std::vector<ReplicationResult> run_plan(const ExperimentPlan& plan);

struct QuantityStats {
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct IterationAggregate {
  int k = 0;
  QuantityStats center;
  QuantityStats toff;
  QuantityStats s_lte;
  QuantityStats s_wifi_mean;
};

struct Summary {
  std::vector<IterationAggregate> per_iteration;
  // First iteration from which |toff(y_next) - toff*| stays within tolerance
  // until the end; -1 when a run never settles.
  std::vector<int> convergence_iteration;
  int converged_runs = 0;
  double mean_convergence_iteration = 0.0;  // over converged runs
  int short_batches = 0;
};

Summary aggregate(const std::vector<ReplicationResult>& runs, double toff_tolerance);

// Constant-parameter regret measurement against the switching bound.
struct IntervalCheck {
  int s = 0;
  int r = 0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  double deviation = 0.0;  // measured L over [s, r]
  double bound = 0.0;      // constant-parameter bound at the same constants
};

struct BoundCheckResult {
  double eta = 0.0;
  double delta = 0.0;
  double g_measured = 0.0;
  double c_measured = 0.0;
  double l_measured = 0.0;  // over the full odd interval
  int switches = 0;
  std::vector<double> regret_full;  // per seed, R over [1, T-1]
  std::vector<double> regret_half;  // per seed, R over [1, T/2-1]
  double mean_full = 0.0;
  double stderr_full = 0.0;
  double mean_half = 0.0;
  double interval_bound = 0.0;    // at the constants used, full interval
  double tuned_switching_bound = 0.0;  // tuned switching-regime value
  std::vector<IntervalCheck> interval_checks;
  int full_s = 1, full_r = 0, half_r = 0;
};

BoundCheckResult run_bound_check(const ExperimentPlan& plan);

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

}  // namespace bco::experiments
