#pragma once

#include <stdexcept>

namespace bco {

// Closed decision interval [lower, upper] with strictly positive diameter.
// shrink(alpha) yields the inner interval [lower+alpha, upper-alpha]; it is
// only defined for alpha <= diameter/2 (otherwise the result would be empty).
struct Interval {
  double lower;
  double upper;

  Interval(double a, double b) : lower(a), upper(b) {
    if (!(a < b)) throw std::invalid_argument("Interval: lower must be < upper");
  }

  double diameter() const { return upper - lower; }

  bool contains(double x) const { return x >= lower && x <= upper; }

  // The shrunken set may degenerate to a single point at alpha = D/2.
  Interval shrink(double alpha) const {
    check_shrink(alpha);
    Interval inner(*this);
    inner.lower += alpha;
    inner.upper -= alpha;
    return inner;
  }

  void check_shrink(double alpha) const {
    if (alpha < 0.0) throw std::invalid_argument("Interval: negative shrink margin");
    if (alpha > diameter() / 2.0)
      throw std::invalid_argument("Interval: shrink margin exceeds half diameter");
  }

  double midpoint() const { return 0.5 * (lower + upper); }
};

// Clamp x onto the shrunken interval [lower+alpha, upper-alpha].
inline double project(const Interval& interval, double alpha, double x) {
  interval.check_shrink(alpha);
  const double a = interval.lower + alpha;
  const double b = interval.upper - alpha;
  return x < a ? a : (x > b ? b : x);
}

}  // namespace bco
