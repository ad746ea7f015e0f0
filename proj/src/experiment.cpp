#include "bco/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "bco/bounds.hpp"
#include "bco/golden.hpp"

namespace bco::experiments {

namespace {

double mean_wifi_throughput(const coex::CoexistenceParams& params, double toff) {
  double total = 0.0;
  for (int j = 0; j < params.stations; ++j) total += coex::wifi_throughput(params, toff, j);
  return total / static_cast<double>(params.stations);
}

QuantityStats stats_of(const std::vector<double>& values) {
  QuantityStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  s.min = values.front();
  s.max = values.front();
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

}  // namespace

void ExperimentPlan::validate() const {
  if (iterations < 0) throw std::invalid_argument("plan: iterations must be >= 0");
  if (replications < 1) throw std::invalid_argument("plan: need >= 1 replication");
  if (!seeds.empty()) {
    if (seeds.size() != static_cast<std::size_t>(replications))
      throw std::invalid_argument("plan: seed count must match replications");
    std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
    if (unique.size() != seeds.size()) throw std::invalid_argument("plan: seeds must be distinct");
  }
  if (env.stations < 1) throw std::invalid_argument("plan: need >= 1 station");
  if (learner.constant_parameters) {
    if (!(learner.eta_constant > 0.0))
      throw std::invalid_argument("plan: constant eta must be positive");
    if (!(learner.delta_constant > 0.0) ||
        learner.delta_constant > learner.interval.diameter() / 2.0)
      throw std::invalid_argument("plan: constant delta must lie in (0, D/2]");
  }
  int prev = -1;
  for (const auto& event : dynamics) {
    if (event.iteration <= prev)
      throw std::invalid_argument("plan: dynamics iterations must be strictly increasing");
    if (event.iteration >= iterations && !(event.iteration == 0 && iterations == 0))
      throw std::invalid_argument("plan: dynamics event beyond the horizon");
    if (event.stations < 1) throw std::invalid_argument("plan: dynamics station count must be >= 1");
    prev = event.iteration;
  }
  if (!(convergence_tolerance > 0.0) || !(throughput_tolerance > 0.0))
    throw std::invalid_argument("plan: tolerances must be positive");
  if (scenario == Scenario::bound_check) {
    if (env.kind != EnvironmentKind::analytic)
      throw std::invalid_argument("plan: bound check runs on the analytic environment");
    if (bound_check.rounds < 4 || bound_check.rounds % 2 != 0)
      throw std::invalid_argument("plan: bound-check horizon must be even and >= 4");
    if (bound_check.piece_stations.empty())
      throw std::invalid_argument("plan: bound check needs >= 1 piece");
    if (bound_check.switch_rounds.size() + 1 != bound_check.piece_stations.size())
      throw std::invalid_argument("plan: switch count must be pieces - 1");
    int prev_round = 1;
    for (int s : bound_check.switch_rounds) {
      if (s <= prev_round || s > bound_check.rounds)
        throw std::invalid_argument("plan: switch rounds must be increasing and within the horizon");
      prev_round = s;
    }
    if (bound_check.deviation_grid < 2)
      throw std::invalid_argument("plan: deviation grid needs >= 2 points");
  }
}

std::vector<std::uint64_t> ExperimentPlan::effective_seeds() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(replications));
  for (int i = 1; i <= replications; ++i) out.push_back(static_cast<std::uint64_t>(i));
  return out;
}

int Timeline::segment_of_round(int t) const {
  if (t < 1 || t > horizon) throw std::out_of_range("Timeline: round out of range");
  auto it = std::upper_bound(segment_start_round.begin(), segment_start_round.end(), t);
  return static_cast<int>(it - segment_start_round.begin()) - 1;
}

const coex::CoexistenceParams& Timeline::params_of_round(int t) const {
  return segment_params[static_cast<std::size_t>(segment_of_round(t))];
}

Timeline build_timeline(const EnvironmentSettings& env, const std::vector<DynamicsEvent>& dynamics,
                        bool mid_iteration_switch, int iterations) {
  Timeline tl;
  tl.horizon = std::max(2 * iterations, 1);
  int initial = env.stations;
  std::size_t first = 0;
  if (!dynamics.empty() && dynamics.front().iteration == 0) {
    initial = dynamics.front().stations;
    first = 1;
  }
  tl.segment_start_round.push_back(1);
  tl.segment_stations.push_back(initial);
  for (std::size_t i = first; i < dynamics.size(); ++i) {
    const auto& event = dynamics[i];
    const int start = mid_iteration_switch ? 2 * event.iteration + 2 : 2 * event.iteration + 1;
    tl.segment_start_round.push_back(start);
    tl.segment_stations.push_back(event.stations);
  }
  tl.segment_params.reserve(tl.segment_stations.size());
  for (int n : tl.segment_stations) tl.segment_params.push_back(coex::make_params(env.radio, n));
  return tl;
}

std::shared_ptr<PiecewiseSequence> analytic_sequence(const Timeline& timeline,
                                                     const Interval& interval) {
  std::vector<Loss> pieces;
  pieces.reserve(timeline.segment_params.size());
  for (const auto& p : timeline.segment_params) pieces.push_back(coex::coexistence_loss(p, interval));
  return std::make_shared<PiecewiseSequence>(std::move(pieces), timeline.segment_start_round,
                                             timeline.horizon);
}

namespace {

ReplicationResult run_replication(const ExperimentPlan& plan, std::uint64_t seed, int index) {
  const auto& settings = plan.learner;
  const Interval& interval = settings.interval;
  const Timeline timeline =
      build_timeline(plan.env, plan.dynamics, plan.mid_iteration_switch, plan.iterations);
  const auto sequence = analytic_sequence(timeline, interval);

  Rng master(seed);
  const PowerSchedule delta = settings.constant_parameters
                                  ? PowerSchedule::constant(settings.delta_constant)
                                  : PowerSchedule(settings.omega, settings.exploration_exponent);
  const PowerSchedule eta = settings.constant_parameters
                                ? PowerSchedule::constant(settings.eta_constant)
                                : PowerSchedule(settings.step_scale, settings.step_exponent);

  double y0 = interval.midpoint();
  if (settings.start_mode == StartMode::random) {
    const double d0 = delta(0);
    y0 = uniform_in(master, interval.lower + d0, interval.upper - d0);
  } else if (settings.start_mode == StartMode::fixed) {
    y0 = settings.start_value;
  }

  TwoPointLearner learner(interval, delta, eta, y0, master(), settings.truncation);

  ReplicationResult out;
  out.seed = seed;
  out.run_index = index;
  out.ledger = std::make_shared<RegretLedger>(sequence);
  out.records.reserve(static_cast<std::size_t>(plan.iterations));

  const bool simulate = plan.env.kind == EnvironmentKind::simulator;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double cost_sum = 0.0;

  for (int k = 0; k < plan.iterations; ++k) {
    TrajectoryRecord rec;
    rec.k = k;
    rec.y_center = learner.center();

    double xs[2] = {0.0, 0.0};
    double costs[2] = {0.0, 0.0};
    double measured_lte[2] = {nan, nan};
    double measured_wifi[2] = {nan, nan};
    StepReport report{};

    for (int half = 0; half < 2; ++half) {
      const Query query = learner.next_query();
      const auto& params = timeline.params_of_round(query.round);
      double cost_value;
      if (simulate) {
        sim::SimConfig cfg = sim::make_sim_config(plan.env.radio, params.stations,
                                                  plan.env.batch_seconds, plan.env.toff_jitter,
                                                  master());
        const double toff = coex::ztilde_to_toff(query.x, params.c1);
        const auto batch = sim::run_batch(cfg, toff);
        if (batch.cycles < 100) ++out.short_batches;
        cost_value = sim::noisy_cost(batch, params);
        measured_lte[half] = batch.lte_bits / batch.elapsed;
        double wifi_total = 0.0;
        for (double bits : batch.wifi_bits) wifi_total += bits;
        measured_wifi[half] = wifi_total / static_cast<double>(params.stations) / batch.elapsed;
      } else {
        cost_value = sequence->evaluate(query.round, query.x);
      }
      out.ledger->record(query.round, query.x, cost_value);
      cost_sum += cost_value;
      xs[half] = query.x;
      costs[half] = cost_value;
      const auto step = learner.observe(cost_value);
      if (step) report = *step;
    }

    const auto& params = timeline.params_of_round(2 * k + 2);
    rec.t = 2 * k + 2;
    rec.y_next = report.center_next;
    rec.x_first = xs[0];
    rec.x_second = xs[1];
    rec.cost_first = costs[0];
    rec.cost_second = costs[1];
    rec.gradient_raw = report.estimate;
    rec.gradient_applied = report.applied;
    rec.truncated = report.truncated;
    rec.stations = params.stations;
    rec.toff_center = coex::ztilde_to_toff(rec.y_center, params.c1);
    rec.toff_next = coex::ztilde_to_toff(rec.y_next, params.c1);
    rec.s_lte = coex::lte_throughput(params, rec.toff_center);
    rec.s_wifi_mean = mean_wifi_throughput(params, rec.toff_center);
    const auto opt = coex::optimal_ztilde(params, interval);
    rec.opt_ztilde = opt.ztilde;
    rec.opt_toff = opt.toff;
    rec.opt_s_lte = coex::lte_throughput(params, opt.toff);
    rec.opt_s_wifi_mean = mean_wifi_throughput(params, opt.toff);
    if (simulate) {
      rec.measured_s_lte = 0.5 * (measured_lte[0] + measured_lte[1]);
      rec.measured_s_wifi_mean = 0.5 * (measured_wifi[0] + measured_wifi[1]);
    } else {
      rec.measured_s_lte = nan;
      rec.measured_s_wifi_mean = nan;
    }
    rec.regret_so_far =
        cost_sum - best_fixed_point(*sequence, 1, 2 * k + 2, interval).total_cost;
    out.records.push_back(rec);
  }
  return out;
}

}  // namespace

std::vector<ReplicationResult> run_plan(const ExperimentPlan& plan) {
  plan.validate();
  const auto seeds = plan.effective_seeds();
  std::vector<ReplicationResult> results(seeds.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto drain = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < seeds.size();) {
      try {
        results[i] = run_replication(plan, seeds[i], static_cast<int>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  unsigned workers = 1;
  if (plan.parallel && seeds.size() > 1) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 2;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(seeds.size()));
  }
  if (workers <= 1) {
    drain();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

Summary aggregate(const std::vector<ReplicationResult>& runs, double toff_tolerance) {
  if (runs.empty()) throw std::invalid_argument("aggregate: need at least one replication");
  const std::size_t iterations = runs.front().records.size();
  for (const auto& run : runs)
    if (run.records.size() != iterations)
      throw std::invalid_argument("aggregate: replications have unequal lengths");

  Summary summary;
  summary.per_iteration.reserve(iterations);
  std::vector<double> center, toff, lte, wifi;
  for (std::size_t k = 0; k < iterations; ++k) {
    center.clear();
    toff.clear();
    lte.clear();
    wifi.clear();
    for (const auto& run : runs) {
      const auto& rec = run.records[k];
      center.push_back(rec.y_center);
      toff.push_back(rec.toff_center);
      lte.push_back(rec.s_lte);
      wifi.push_back(rec.s_wifi_mean);
    }
    IterationAggregate agg;
    agg.k = static_cast<int>(k);
    agg.center = stats_of(center);
    agg.toff = stats_of(toff);
    agg.s_lte = stats_of(lte);
    agg.s_wifi_mean = stats_of(wifi);
    summary.per_iteration.push_back(agg);
  }

  double convergence_sum = 0.0;
  for (const auto& run : runs) {
    int first_ok = -1;
    if (!run.records.empty()) {
      int candidate = static_cast<int>(run.records.size());
      for (int k = static_cast<int>(run.records.size()) - 1; k >= 0; --k) {
        const auto& rec = run.records[static_cast<std::size_t>(k)];
        if (std::abs(rec.toff_next - rec.opt_toff) <= toff_tolerance)
          candidate = k;
        else
          break;
      }
      if (candidate < static_cast<int>(run.records.size())) first_ok = candidate;
    }
    summary.convergence_iteration.push_back(first_ok);
    if (first_ok >= 0) {
      ++summary.converged_runs;
      convergence_sum += first_ok;
    }
    summary.short_batches += run.short_batches;
  }
  if (summary.converged_runs > 0)
    summary.mean_convergence_iteration = convergence_sum / summary.converged_runs;
  return summary;
}

BoundCheckResult run_bound_check(const ExperimentPlan& plan) {
  plan.validate();
  if (plan.scenario != Scenario::bound_check)
    throw std::invalid_argument("run_bound_check: plan scenario is not bound_check");
  const auto& bc = plan.bound_check;
  const Interval& interval = plan.learner.interval;
  const int horizon = bc.rounds;

  std::vector<Loss> pieces;
  std::vector<int> starts{1};
  for (int s : bc.switch_rounds) starts.push_back(s);
  for (int n : bc.piece_stations)
    pieces.push_back(coex::coexistence_loss(coex::make_params(plan.env.radio, n), interval));
  const auto sequence = std::make_shared<PiecewiseSequence>(pieces, starts, horizon);

  // Measured constants over a uniform grid.
  const int grid = bc.deviation_grid;
  double g_measured = 0.0;
  double f_max = -std::numeric_limits<double>::infinity();
  double f_min = std::numeric_limits<double>::infinity();
  const double step = interval.diameter() / static_cast<double>(grid - 1);
  for (const auto& piece : pieces) {
    for (int i = 0; i < grid; ++i) {
      const double x = i + 1 == grid ? interval.upper : interval.lower + step * i;
      g_measured = std::max(g_measured, std::abs(piece.grad(x)));
      const double v = piece.value(x);
      f_max = std::max(f_max, v);
      f_min = std::min(f_min, v);
    }
  }
  const double c_measured = f_max - f_min;

  BoundCheckResult result;
  result.switches = static_cast<int>(bc.switch_rounds.size());
  result.g_measured = g_measured;
  result.c_measured = c_measured;

  const auto tuned = tuned_regret_bound(BoundRegime::switching_total, horizon,
                                        interval.diameter(), g_measured, c_measured,
                                        result.switches);
  result.eta = bc.eta.value_or(tuned.eta);
  result.delta = bc.delta.value_or(tuned.delta);
  result.tuned_switching_bound = tuned.bound;
  if (!(result.delta > 0.0) || result.delta >= interval.diameter() / 2.0)
    throw std::invalid_argument("run_bound_check: delta outside (0, D/2)");

  result.full_r = horizon - 1;
  result.half_r = horizon / 2 - 1;
  if (result.half_r % 2 == 0) --result.half_r;
  result.l_measured = total_deviation(*sequence, 1, result.full_r, interval, grid);
  result.interval_bound =
      interval_regret_bound(interval.diameter(), g_measured, result.eta, result.delta,
                            static_cast<double>(result.full_r - 1), result.l_measured);

  std::vector<std::shared_ptr<RegretLedger>> ledgers;
  for (std::uint64_t seed : plan.effective_seeds()) {
    Rng master(seed);
    double y0 = interval.midpoint();
    if (plan.learner.start_mode == StartMode::random)
      y0 = uniform_in(master, interval.lower + result.delta, interval.upper - result.delta);
    else if (plan.learner.start_mode == StartMode::fixed)
      y0 = plan.learner.start_value;
    TwoPointLearner learner(interval, PowerSchedule::constant(result.delta),
                            PowerSchedule::constant(result.eta), y0, master(),
                            plan.learner.truncation);
    auto ledger = std::make_shared<RegretLedger>(sequence);
    for (int k = 0; k < horizon / 2; ++k) {
      for (int half = 0; half < 2; ++half) {
        const Query query = learner.next_query();
        const double cost_value = sequence->evaluate(query.round, query.x);
        ledger->record(query.round, query.x, cost_value);
        learner.observe(cost_value);
      }
    }
    result.regret_full.push_back(regret(*ledger, 1, result.full_r, interval));
    result.regret_half.push_back(regret(*ledger, 1, result.half_r, interval));
    ledgers.push_back(std::move(ledger));
  }

  const auto full_stats = stats_of(result.regret_full);
  result.mean_full = full_stats.mean;
  result.stderr_full =
      full_stats.stddev / std::sqrt(static_cast<double>(result.regret_full.size()));
  result.mean_half = stats_of(result.regret_half).mean;

  // A few odd sub-intervals, each against the bound at the same constants.
  std::vector<std::pair<int, int>> windows{{1, result.half_r}, {1, result.full_r}};
  if (!bc.switch_rounds.empty()) {
    int after = bc.switch_rounds.front() + 1;
    if (after % 2 == 0) ++after;
    if (after < result.full_r) windows.push_back({after, result.full_r});
  }
  for (const auto& [s, r] : windows) {
    IntervalCheck check;
    check.s = s;
    check.r = r;
    check.deviation = total_deviation(*sequence, s, r, interval, grid);
    check.bound = interval_regret_bound(interval.diameter(), g_measured, result.eta,
                                        result.delta, static_cast<double>(r - s),
                                        check.deviation);
    std::vector<double> values;
    for (const auto& ledger : ledgers) values.push_back(regret(*ledger, s, r, interval));
    const auto stats = stats_of(values);
    check.mean_regret = stats.mean;
    check.stderr_regret = stats.stddev / std::sqrt(static_cast<double>(values.size()));
    result.interval_checks.push_back(check);
  }
  return result;
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::omega_sweep: return "omega_sweep";
    case Scenario::schedule_sweep: return "schedule_sweep";
    case Scenario::slow_dynamics: return "slow_dynamics";
    case Scenario::fast_dynamics: return "fast_dynamics";
    case Scenario::noisy_sim: return "noisy_sim";
    case Scenario::bound_check: return "bound_check";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "omega_sweep") return Scenario::omega_sweep;
  if (name == "schedule_sweep") return Scenario::schedule_sweep;
  if (name == "slow_dynamics") return Scenario::slow_dynamics;
  if (name == "fast_dynamics") return Scenario::fast_dynamics;
  if (name == "noisy_sim") return Scenario::noisy_sim;
  if (name == "bound_check") return Scenario::bound_check;
  throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace bco::experiments
