#pragma once

#include <cstddef>
#include <vector>

#include "nosignal/errors.hpp"

namespace nosignal {

/// n points from lo to hi inclusive (n == 1 gives {lo}).
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidArgument("grid must have at least one point");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out[n - 1] = hi;
  return out;
}

/// n points covering [lo, hi) with the endpoint excluded, for periodic parameters.
inline std::vector<double> periodic_grid(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidArgument("grid must have at least one point");
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  return out;
}

}  // namespace nosignal
