#pragma once

#include <cmath>
#include <stdexcept>

namespace bco {

// Non-increasing parameter schedule value(k) = scale / (k+1)^exponent.
// Schedules are evaluated at k+1 so that k = 0 is well defined; exponent 0
// gives the constant schedules used by the fixed-parameter analysis mode.
struct PowerSchedule {
  double scale;
  double exponent;

  PowerSchedule(double scale_, double exponent_) : scale(scale_), exponent(exponent_) {
    if (!(scale > 0.0)) throw std::invalid_argument("PowerSchedule: scale must be positive");
    if (exponent < 0.0) throw std::invalid_argument("PowerSchedule: exponent must be >= 0");
  }

  static PowerSchedule constant(double value) { return PowerSchedule(value, 0.0); }

  double operator()(int k) const {
    if (k < 0) throw std::invalid_argument("PowerSchedule: negative index");
    return exponent == 0.0 ? scale : scale / std::pow(static_cast<double>(k) + 1.0, exponent);
  }
};

}  // namespace bco
