#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>

#include "nosignal/errors.hpp"

namespace nosignal {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

inline double require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw InvalidArgument(std::string(name) + " must be finite");
  }
  return value;
}

/// Maps a finite angle into [0, 2pi).
inline double canonical_angle(double radians, const char* name = "angle") {
  require_finite(radians, name);
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a value just below a multiple of 2pi can round up to exactly 2pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

enum class Basis { Polarization, Path };

/// Pure two-photon state over a 2x2 product basis, Alice's mode first.
///
/// Slot 1 is H (polarization) or path 1; slot 2 is V or path 2. Coefficients
/// are stored row-major: c11, c12, c21, c22.
struct TwoPhotonState {
  std::array<Complex, 4> c{};
  Basis basis = Basis::Polarization;

  /// alice, bob in {0, 1} meaning basis slots 1 and 2.
  Complex coeff(int alice, int bob) const { return c[static_cast<std::size_t>(2 * alice + bob)]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& z : c) s += std::norm(z);
    return s;
  }
};

/// Probabilities over four joint outcomes. The first digit is Alice's
/// detector, the second Bob's; what "1" and "0" mean depends on the bench.
struct JointDistribution {
  double p11 = 0.0;
  double p10 = 0.0;
  double p01 = 0.0;
  double p00 = 0.0;

  std::array<double, 4> as_array() const { return {p11, p10, p01, p00}; }
  double total() const { return p11 + p10 + p01 + p00; }
};

/// Bob's singles: probability of a click in detector "1" and detector "0".
struct MarginalDistribution {
  double pB1 = 0.0;
  double pB0 = 0.0;
};

/// Summing over Alice's outcomes, which Bob does not see.
inline MarginalDistribution bob_marginals(const JointDistribution& joint) {
  return {joint.p11 + joint.p01, joint.p10 + joint.p00};
}

/// Variable-entanglement source state.
///
/// Correlated terms carry (cos b + sin b)/2, anti-correlated terms
/// +-i(cos b - sin b)/2, with b = alpha - pi/4. alpha = 0 is the
/// maximally entangled i(|12> - |21>)/sqrt2, alpha = pi/4 a product state.
inline TwoPhotonState make_source_state(double alpha, Basis basis) {
  require_finite(alpha, "alpha");
  const double beta = alpha - kPi / 4.0;
  const double correlated = (std::cos(beta) + std::sin(beta)) / 2.0;
  const double anti = (std::cos(beta) - std::sin(beta)) / 2.0;
  TwoPhotonState s;
  s.basis = basis;
  s.c = {Complex{correlated, 0.0}, kI * anti, -kI * anti, Complex{correlated, 0.0}};
  return s;
}

/// Concurrence 2|c11 c22 - c12 c21| of a pure two-qubit state.
inline double concurrence(const TwoPhotonState& s) {
  return 2.0 * std::abs(s.coeff(0, 0) * s.coeff(1, 1) - s.coeff(0, 1) * s.coeff(1, 0));
}

/// Concurrence of the source state; analytically |cos 2 alpha|.
inline double entanglement_degree(double alpha) {
  return concurrence(make_source_state(alpha, Basis::Polarization));
}

inline constexpr double kAmplitudeNormTolerance = 1e-9;

/// Modulus-squared rule. Amplitudes must be normalized within 1e-9;
/// the output is renormalized so it sums to one to rounding.
inline JointDistribution distribution_from_amplitudes(std::span<const Complex, 4> amps) {
  std::array<double, 4> p{};
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    if (!std::isfinite(amps[k].real()) || !std::isfinite(amps[k].imag())) {
      throw InvalidArgument("amplitude is not finite");
    }
    p[k] = std::norm(amps[k]);
    sum += p[k];
  }
  if (std::abs(1.0 - sum) > kAmplitudeNormTolerance) {
    throw UnitarityError(1.0 - sum);
  }
  return {p[0] / sum, p[1] / sum, p[2] / sum, p[3] / sum};
}

inline JointDistribution distribution_from_amplitudes(const std::array<Complex, 4>& amps) {
  return distribution_from_amplitudes(std::span<const Complex, 4>(amps));
}

}  // namespace nosignal
