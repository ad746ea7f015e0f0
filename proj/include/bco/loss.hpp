#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bco {

// A single convex loss over the decision interval. `grad` may be empty when
// no closed form is available. `lipschitz` and `range_bound` are declared
// constants (G and the sup-inf range C on the interval); zero means
// undeclared.
struct Loss {
  std::function<double(double)> value;
  std::function<double(double)> grad;
  double lipschitz = 0.0;
  double range_bound = 0.0;
};

// Round-indexed sequence of losses chosen by the environment. Rounds are
// 1-based; evaluate(t, x) must be valid for t in [1, horizon].
class LossSequence {
 public:
  virtual ~LossSequence() = default;

  virtual double evaluate(int t, double x) const = 0;
  virtual int horizon() const = 0;

  // Sum of f_t(x) over t in [s, r]. The default is a plain loop; structured
  // sequences override it with something cheaper.
  virtual double range_sum(int s, int r, double x) const;

  // True when rounds t1 and t2 are known to carry the identical loss
  // (used to skip deviation scans).
  virtual bool same_loss(int /*t1*/, int /*t2*/) const { return false; }

 protected:
  void check_round(int t) const {
    if (t < 1 || t > horizon()) throw std::out_of_range("LossSequence: round out of range");
  }
};

// The same loss every round.
class FixedSequence : public LossSequence {
 public:
  FixedSequence(Loss loss, int horizon);

  double evaluate(int t, double x) const override;
  int horizon() const override { return horizon_; }
  double range_sum(int s, int r, double x) const override;
  bool same_loss(int t1, int t2) const override;

  const Loss& loss() const { return loss_; }

 private:
  Loss loss_;
  int horizon_;
};

// Piecewise-constant sequence: piece i applies from round starts[i] until the
// next start. starts must begin at 1 and be strictly increasing, which makes
// the round -> piece map nondecreasing onto {0..N-1}.
class PiecewiseSequence : public LossSequence {
 public:
  PiecewiseSequence(std::vector<Loss> pieces, std::vector<int> starts, int horizon);

  double evaluate(int t, double x) const override;
  int horizon() const override { return horizon_; }
  double range_sum(int s, int r, double x) const override;
  bool same_loss(int t1, int t2) const override;

  int piece_index(int t) const;
  int piece_count() const { return static_cast<int>(pieces_.size()); }
  int switch_count() const { return piece_count() - 1; }
  const Loss& piece(int i) const { return pieces_.at(static_cast<std::size_t>(i)); }

 private:
  std::vector<Loss> pieces_;
  std::vector<int> starts_;
  int horizon_;
};

// Base loss plus a per-round scalar offset whose round-to-round change is
// declared bounded by `alpha`.
class DriftSequence : public LossSequence {
 public:
  DriftSequence(Loss base, std::function<double(int)> offset, double alpha, int horizon);

  double evaluate(int t, double x) const override;
  int horizon() const override { return horizon_; }

  double declared_alpha() const { return alpha_; }

 private:
  Loss base_;
  std::function<double(int)> offset_;
  double alpha_;
  int horizon_;
};

// Externally driven sequence (arbitrary evaluator).
class CustomSequence : public LossSequence {
 public:
  CustomSequence(std::function<double(int, double)> eval, int horizon);

  double evaluate(int t, double x) const override;
  int horizon() const override { return horizon_; }

 private:
  std::function<double(int, double)> eval_;
  int horizon_;
};

}  // namespace bco
