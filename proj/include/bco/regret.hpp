#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "bco/interval.hpp"
#include "bco/loss.hpp"

namespace bco {

struct LedgerRecord {
  int round;
  double x;
  double cost;
};

// Append-only log of played points and incurred costs, with a handle on the
// loss sequence so regret can re-evaluate it at arbitrary points. Rounds must
// be recorded contiguously from 1.
class RegretLedger {
 public:
  explicit RegretLedger(std::shared_ptr<const LossSequence> sequence);

  void record(int round, double x, double cost);

  int rounds() const { return static_cast<int>(records_.size()); }
  const std::vector<LedgerRecord>& records() const { return records_; }
  const LossSequence& sequence() const { return *sequence_; }

 private:
  std::shared_ptr<const LossSequence> sequence_;
  std::vector<LedgerRecord> records_;
};

// Largest |fa - fb| over a uniform grid (endpoints included); a lower bound
// on the true sup that tightens as the grid refines.
double instantaneous_deviation(const std::function<double(double)>& fa,
                               const std::function<double(double)>& fb, const Interval& interval,
                               int grid_points);

// Deviation alpha_k between the two losses of outer iteration k, i.e. rounds
// 2k+1 and 2k+2.
double iteration_deviation(const LossSequence& seq, int k, const Interval& interval,
                           int grid_points);

// Sum of alpha_k^2 for k = (s-1)/2 .. (r-1)/2; s and r must be odd with
// s <= r, and round r+1 must exist.
double total_deviation(const LossSequence& seq, int s, int r, const Interval& interval,
                       int grid_points = 10000);

struct BestFixed {
  double x;
  double total_cost;
};

// Minimizer of sum_{t=s..r} f_t(x) over the full interval, by golden-section
// search to 1e-8 in x.
BestFixed best_fixed_point(const LossSequence& seq, int s, int r, const Interval& interval);

// Interval regret: recorded cost over [s, r] minus the best fixed cost in
// hindsight. Full-horizon regret is s = 1, r = rounds().
double regret(const RegretLedger& ledger, int s, int r, const Interval& interval);

}  // namespace bco
