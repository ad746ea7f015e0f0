#include "bco/loss.hpp"

#include <algorithm>

namespace bco {

double LossSequence::range_sum(int s, int r, double x) const {
  check_round(s);
  check_round(r);
  if (s > r) throw std::invalid_argument("range_sum: reversed bounds");
  double total = 0.0;
  for (int t = s; t <= r; ++t) total += evaluate(t, x);
  return total;
}

FixedSequence::FixedSequence(Loss loss, int horizon) : loss_(std::move(loss)), horizon_(horizon) {
  if (horizon_ < 1) throw std::invalid_argument("FixedSequence: horizon must be >= 1");
}

double FixedSequence::evaluate(int t, double x) const {
  check_round(t);
  return loss_.value(x);
}

double FixedSequence::range_sum(int s, int r, double x) const {
  check_round(s);
  check_round(r);
  if (s > r) throw std::invalid_argument("range_sum: reversed bounds");
  return static_cast<double>(r - s + 1) * loss_.value(x);
}

bool FixedSequence::same_loss(int, int) const { return true; }

PiecewiseSequence::PiecewiseSequence(std::vector<Loss> pieces, std::vector<int> starts, int horizon)
    : pieces_(std::move(pieces)), starts_(std::move(starts)), horizon_(horizon) {
  if (pieces_.empty()) throw std::invalid_argument("PiecewiseSequence: no pieces");
  if (starts_.size() != pieces_.size())
    throw std::invalid_argument("PiecewiseSequence: starts/pieces size mismatch");
  if (starts_.front() != 1) throw std::invalid_argument("PiecewiseSequence: first start must be 1");
  for (std::size_t i = 1; i < starts_.size(); ++i)
    if (starts_[i] <= starts_[i - 1])
      throw std::invalid_argument("PiecewiseSequence: starts must be strictly increasing");
  if (horizon_ < starts_.back())
    throw std::invalid_argument("PiecewiseSequence: horizon shorter than last start");
}

int PiecewiseSequence::piece_index(int t) const {
  check_round(t);
  auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  return static_cast<int>(it - starts_.begin()) - 1;
}

double PiecewiseSequence::evaluate(int t, double x) const {
  return pieces_[static_cast<std::size_t>(piece_index(t))].value(x);
}

double PiecewiseSequence::range_sum(int s, int r, double x) const {
  check_round(s);
  check_round(r);
  if (s > r) throw std::invalid_argument("range_sum: reversed bounds");
  double total = 0.0;
  const int np = piece_count();
  for (int i = 0; i < np; ++i) {
    const int first = std::max(s, starts_[static_cast<std::size_t>(i)]);
    const int last = std::min(r, i + 1 < np ? starts_[static_cast<std::size_t>(i + 1)] - 1 : horizon_);
    if (first <= last)
      total += static_cast<double>(last - first + 1) * pieces_[static_cast<std::size_t>(i)].value(x);
  }
  return total;
}

bool PiecewiseSequence::same_loss(int t1, int t2) const {
  return piece_index(t1) == piece_index(t2);
}

DriftSequence::DriftSequence(Loss base, std::function<double(int)> offset, double alpha, int horizon)
    : base_(std::move(base)), offset_(std::move(offset)), alpha_(alpha), horizon_(horizon) {
  if (horizon_ < 1) throw std::invalid_argument("DriftSequence: horizon must be >= 1");
  if (alpha_ < 0.0) throw std::invalid_argument("DriftSequence: alpha must be >= 0");
}

double DriftSequence::evaluate(int t, double x) const {
  check_round(t);
  return base_.value(x) + offset_(t);
}

CustomSequence::CustomSequence(std::function<double(int, double)> eval, int horizon)
    : eval_(std::move(eval)), horizon_(horizon) {
  if (horizon_ < 1) throw std::invalid_argument("CustomSequence: horizon must be >= 1");
}

double CustomSequence::evaluate(int t, double x) const {
  check_round(t);
  return eval_(t, x);
}

}  // namespace bco
