#include "bco/regret.hpp"

#include <cmath>
#include <stdexcept>

#include "bco/golden.hpp"

namespace bco {

RegretLedger::RegretLedger(std::shared_ptr<const LossSequence> sequence)
    : sequence_(std::move(sequence)) {
  if (!sequence_) throw std::invalid_argument("RegretLedger: null sequence");
}

void RegretLedger::record(int round, double x, double cost) {
  if (round != rounds() + 1)
    throw std::invalid_argument("RegretLedger: rounds must be recorded contiguously from 1");
  records_.push_back(LedgerRecord{round, x, cost});
}

double instantaneous_deviation(const std::function<double(double)>& fa,
                               const std::function<double(double)>& fb, const Interval& interval,
                               int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("instantaneous_deviation: need >= 2 grid points");
  const double step = interval.diameter() / static_cast<double>(grid_points - 1);
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points ? interval.upper : interval.lower + step * i;
    const double gap = std::abs(fa(x) - fb(x));
    if (gap > worst) worst = gap;
  }
  return worst;
}

double iteration_deviation(const LossSequence& seq, int k, const Interval& interval,
                           int grid_points) {
  const int t = 2 * k + 1;
  if (seq.same_loss(t, t + 1)) return 0.0;
  return instantaneous_deviation([&](double x) { return seq.evaluate(t, x); },
                                 [&](double x) { return seq.evaluate(t + 1, x); }, interval,
                                 grid_points);
}

double total_deviation(const LossSequence& seq, int s, int r, const Interval& interval,
                       int grid_points) {
  if (s % 2 == 0 || r % 2 == 0) throw std::invalid_argument("total_deviation: bounds must be odd");
  if (s > r) throw std::invalid_argument("total_deviation: reversed bounds");
  if (s < 1 || r + 1 > seq.horizon())
    throw std::out_of_range("total_deviation: interval not covered by the sequence");
  double total = 0.0;
  for (int k = (s - 1) / 2; k <= (r - 1) / 2; ++k) {
    const double a = iteration_deviation(seq, k, interval, grid_points);
    total += a * a;
  }
  return total;
}

BestFixed best_fixed_point(const LossSequence& seq, int s, int r, const Interval& interval) {
  const auto m = minimize_golden([&](double x) { return seq.range_sum(s, r, x); }, interval.lower,
                                 interval.upper, 1e-8);
  return BestFixed{m.x, m.value};
}

double regret(const RegretLedger& ledger, int s, int r, const Interval& interval) {
  if (s < 1 || r > ledger.rounds() || s > r)
    throw std::invalid_argument("regret: ledger does not cover [s, r]");
  double incurred = 0.0;
  const auto& recs = ledger.records();
  for (int t = s; t <= r; ++t) incurred += recs[static_cast<std::size_t>(t - 1)].cost;
  return incurred - best_fixed_point(ledger.sequence(), s, r, interval).total_cost;
}

}  // namespace bco
