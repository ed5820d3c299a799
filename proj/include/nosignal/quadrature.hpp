#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "nosignal/errors.hpp"

namespace nosignal {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int refinement_levels = 0;
};

/// Composite Simpson weights for n equally spaced nodes (n odd, n >= 3), times dx.
inline std::vector<double> simpson_weights(std::size_t n, double dx) {
  if (n < 3 || n % 2 == 0) {
    throw InvalidArgument("Simpson rule needs an odd number of nodes >= 3, got " + std::to_string(n));
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * dx / 3.0;
  w.front() = dx / 3.0;
  w.back() = dx / 3.0;
  return w;
}

/// Composite Simpson over samples y[0..n) spaced dx apart, taking every
/// `stride`-th node.
template <class T>
T simpson(std::span<const T> y, double dx, std::size_t stride = 1) {
  const std::size_t n = (y.size() - 1) / stride + 1;
  if (y.empty() || (y.size() - 1) % stride != 0 || n < 3 || n % 2 == 0) {
    throw InvalidArgument("Simpson rule: sample count incompatible with stride");
  }
  const double h = dx * static_cast<double>(stride);
  T odd{}, even{};
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (k % 2 == 1) {
      odd += y[k * stride];
    } else {
      even += y[k * stride];
    }
  }
  return (y.front() + y[(n - 1) * stride] + 4.0 * odd + 2.0 * even) * (h / 3.0);
}

/// Simpson on the full grid and on every other node. Needs (n - 1) divisible
/// by 4. The value is the full-grid sum; its error estimate is the Richardson
/// difference (fine - coarse) / 15, floored at the accumulated rounding.
/// The extrapolated value is not returned: on grids that do not yet resolve
/// the integrand the half-grid sum is far off and extrapolating amplifies it.
inline QuadratureResult simpson_richardson(std::span<const double> y, double dx) {
  if (y.size() < 5 || (y.size() - 1) % 4 != 0) {
    throw InvalidArgument("Richardson-Simpson needs 4k + 1 samples, got " + std::to_string(y.size()));
  }
  const double fine = simpson(y, dx, 1);
  const double coarse = simpson(y, dx, 2);
  double abs_mass = 0.0;
  for (double v : y) abs_mass += std::abs(v);
  abs_mass *= dx;
  const double rounding = std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(y.size())) * abs_mass;
  const double correction = (fine - coarse) / 15.0;
  return {fine, std::max(std::abs(correction), rounding), 1};
}

}  // namespace nosignal
