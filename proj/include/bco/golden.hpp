#pragma once

#include <cmath>
#include <functional>

namespace bco {

struct ScalarMinimum {
  double x;
  double value;
};

// Golden-section minimization of a unimodal (here: convex) function on
// [a, b]. Stops when the bracket is narrower than xtol.
inline ScalarMinimum minimize_golden(const std::function<double(double)>& f, double a, double b,
                                     double xtol = 1e-8, int max_iter = 200) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return ScalarMinimum{x, f(x)};
}

}  // namespace bco
