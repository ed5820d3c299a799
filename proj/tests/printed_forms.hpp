#pragma once

// Reference closed-form amplitudes and probabilities, written out by hand
// and used as independent oracles. Two of the reference blocks are
// internally inconsistent and are kept as-is so tests can pin the discrepancy:
//   - polar_vh_as_printed uses cos(alpha) twice, so |amp|^2 != P_VH;
//   - mz_in_probabilities_as_printed does not sum to one.

#include <array>
#include <cmath>
#include <complex>

namespace printed {

using C = std::complex<double>;
inline constexpr C I{0.0, 1.0};

inline std::array<C, 4> polar_amplitudes(double a, double t) {
  const double r = std::sqrt(2.0);
  return {(-std::sin(a) * std::cos(t) + I * std::cos(a) * std::sin(t)) / r,
          (-std::cos(a) * std::cos(t) + I * std::sin(a) * std::sin(t)) / r,
          (std::cos(a) * std::cos(t) - I * std::sin(a) * std::sin(t)) / r,  // sin(a) restored
          (std::sin(a) * std::cos(t) - I * std::cos(a) * std::sin(t)) / r};
}

inline C polar_vh_as_printed(double a, double t) {
  return (std::cos(a) * std::cos(t) - I * std::cos(a) * std::sin(t)) / std::sqrt(2.0);
}

inline std::array<double, 4> polar_probabilities(double a, double t) {
  const double m = std::cos(2 * a) * std::cos(2 * t);
  return {(1 - m) / 4, (1 + m) / 4, (1 + m) / 4, (1 - m) / 4};
}

inline std::array<C, 4> mz_in_amplitudes(double a, double pa, double pb) {
  const C ea = std::polar(1.0, pa), eb = std::polar(1.0, pb), eab = std::polar(1.0, pa + pb);
  const double c = std::cos(a), s = std::sin(a), d = 2.0 * std::sqrt(2.0);
  return {(I * c * (ea - eb) + s * (1.0 + eab)) / d, (-c * (ea + eb) + I * s * (1.0 - eab)) / d,
          (c * (ea + eb) + I * s * (1.0 - eab)) / d, (I * c * (ea - eb) - s * (1.0 + eab)) / d};
}

inline std::array<double, 4> mz_in_probabilities_as_printed(double a, double pa, double pb) {
  const double s2 = std::sin(2 * a), c2 = std::cos(2 * a);
  const double sa = std::sin(pa), sb = std::sin(pb), ca = std::cos(pa), cb = std::cos(pb);
  return {(1 - sa * (s2 + sb) - c2 * ca * cb + s2 * sb) / 4, (1 - s2 * (sa + sb) + c2 * ca * cb + s2 * sb) / 4,
          (1 + s2 * (sa + sb) + c2 * ca * cb + s2 * sb) / 4, (1 - sb * (s2 + sa) - c2 * ca * cb + s2 * sa) / 4};
}

/// P_A1B1 with the splitter in, re-derived by hand from the amplitudes.
inline double mz_in_p11_derived(double a, double pa, double pb) {
  return (1 - std::cos(a) * std::cos(a) * std::cos(pa - pb) + std::sin(a) * std::sin(a) * std::cos(pa + pb) -
          std::sin(2 * a) * (std::sin(pa) - std::sin(pb))) /
         4;
}

/// Splitter out; the unbalanced bracket in the first line closes after cos(a).
inline std::array<C, 4> mz_out_amplitudes(double a, double pa, double pb) {
  const C ea = std::polar(1.0, pa), eb = std::polar(1.0, pb);
  const double c = std::cos(a), s = std::sin(a);
  return {(s - I * eb * c) / 2.0, (I * s - eb * c) / 2.0, ea * (c - I * eb * s) / 2.0,
          I * ea * (c + I * eb * s) / 2.0};
}

inline std::array<double, 4> mz_out_probabilities(double a, double pb) {
  const double m = std::sin(2 * a) * std::sin(pb);
  return {(1 + m) / 4, (1 - m) / 4, (1 + m) / 4, (1 - m) / 4};
}

inline double bob_b1(double a, double pb) { return (1 + std::sin(2 * a) * std::sin(pb)) / 2; }
inline double bob_b0(double a, double pb) { return (1 - std::sin(2 * a) * std::sin(pb)) / 2; }

}  // namespace printed
