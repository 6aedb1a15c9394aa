#pragma once

#include "utb/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <type_traits>

namespace utb::fd {

/// Spatial step for chart-coordinate derivatives.
inline double spatial_step(double x, double base = 1e-4) { return base * std::max(1.0, std::abs(x)); }

inline constexpr double kDefaultCurveStep = 1e-3;
inline std::atomic<double> curve_step_base{kDefaultCurveStep};

/// Step for derivatives along a curve parameter. Larger than the spatial step
/// because these are usually the outer level of a nested difference.
inline double curve_step(double s) {
  return curve_step_base.load(std::memory_order_relaxed) * std::max(1.0, std::abs(s));
}

/// Fourth-order first derivative, central when the stencil fits in [lo, hi],
/// otherwise a one-sided five-point stencil.
template <class F>
auto first(F&& f, double s, double h, double lo, double hi) {
  using R = std::decay_t<decltype(f(s))>;
  if (s - 2 * h >= lo && s + 2 * h <= hi) {
    return R(((f(s - 2 * h) - f(s + 2 * h)) + 8.0 * (f(s + h) - f(s - h))) / (12.0 * h));
  }
  if (s + 4 * h <= hi && s >= lo) {
    return R((-25.0 * f(s) + 48.0 * f(s + h) - 36.0 * f(s + 2 * h) + 16.0 * f(s + 3 * h) -
            3.0 * f(s + 4 * h)) /
           (12.0 * h));
  }
  if (s - 4 * h >= lo && s <= hi) {
    return R((25.0 * f(s) - 48.0 * f(s - h) + 36.0 * f(s - 2 * h) - 16.0 * f(s - 3 * h) +
            3.0 * f(s - 4 * h)) /
           (12.0 * h));
  }
  fail(ErrorKind::DomainBoundary, "difference stencil at s=" + std::to_string(s) +
                                      " does not fit in [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
}

/// Unbounded fourth-order central first derivative.
template <class F>
auto central(F&& f, double s, double h) {
  using R = std::decay_t<decltype(f(s))>;
  return R(((f(s - 2 * h) - f(s + 2 * h)) + 8.0 * (f(s + h) - f(s - h))) / (12.0 * h));
}

/// Unbounded fourth-order central second derivative.
template <class F>
auto central_second(F&& f, double s, double h) {
  using R = std::decay_t<decltype(f(s))>;
  return R((-(f(s - 2 * h) + f(s + 2 * h)) + 16.0 * (f(s - h) + f(s + h)) - 30.0 * f(s)) /
         (12.0 * h * h));
}

}  // namespace utb::fd
