#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "nosignal/amplitude.hpp"

namespace nosignal {

/// Four-detector polarization bench: source half-wave-plate setting alpha,
/// Alice's polarimeter rotated by theta relative to Bob's.
struct PolarizationConfig {
  double alpha = 0.0;
  double theta = 0.0;

  PolarizationConfig() = default;
  PolarizationConfig(double alpha_rad, double theta_rad)
      : alpha(canonical_angle(alpha_rad, "alpha")), theta(canonical_angle(theta_rad, "theta")) {}
};

/// Alice's polarization, then Bob's.
enum class PolarOutcome { HH, HV, VH, VV };

inline std::string_view to_string(PolarOutcome o) {
  switch (o) {
    case PolarOutcome::HH: return "HH";
    case PolarOutcome::HV: return "HV";
    case PolarOutcome::VH: return "VH";
    case PolarOutcome::VV: return "VV";
  }
  return "?";
}

/// Joint detection amplitudes (HH, HV, VH, VV).
///
/// Each party projects the source state on its analyzer basis; Alice's basis
/// is (cos t H + sin t V, -sin t H + cos t V). The PBS output ports carry
/// fixed phases, Alice (H: -1, V: i) and Bob (H: 1, V: -i), which put the
/// amplitudes in the same phase convention as the reference closed forms.
inline std::array<Complex, 4> polar_joint_amplitudes(const PolarizationConfig& cfg) {
  const TwoPhotonState psi = make_source_state(cfg.alpha, Basis::Polarization);
  const double ct = std::cos(cfg.theta);
  const double st = std::sin(cfg.theta);
  // rows: Alice outcome (H', V'); columns: source slot (H, V)
  const double alice_basis[2][2] = {{ct, st}, {-st, ct}};
  const Complex alice_phase[2] = {-1.0, kI};
  const Complex bob_phase[2] = {1.0, -kI};

  std::array<Complex, 4> out{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Complex amp = alice_basis[a][0] * psi.coeff(0, b) + alice_basis[a][1] * psi.coeff(1, b);
      out[static_cast<std::size_t>(2 * a + b)] = alice_phase[a] * bob_phase[b] * amp;
    }
  }
  return out;
}

/// P_HH = P_VV = (1 - cos2a cos2t)/4, P_HV = P_VH = (1 + cos2a cos2t)/4.
/// Stored as p11 = HH, p10 = HV, p01 = VH, p00 = VV (H is detector "1").
inline JointDistribution polar_joint_probabilities(const PolarizationConfig& cfg) {
  const double m = std::cos(2.0 * cfg.alpha) * std::cos(2.0 * cfg.theta);
  const double same = (1.0 - m) / 4.0;
  const double opposite = (1.0 + m) / 4.0;
  return {same, opposite, opposite, same};
}

/// Bob's singles, P(H_B) = P_HH + P_VH and P(V_B) = P_HV + P_VV.
inline MarginalDistribution polar_bob_marginals(const PolarizationConfig& cfg) {
  return bob_marginals(polar_joint_probabilities(cfg));
}

struct PolarRow {
  double alpha = 0.0;
  double theta = 0.0;
  JointDistribution joint;
};

/// alpha-major table over alpha_list x theta_grid.
inline std::vector<PolarRow> polar_sweep(std::span<const double> alpha_list,
                                         std::span<const double> theta_grid) {
  if (alpha_list.empty() || theta_grid.empty()) {
    throw InvalidArgument("polar_sweep: alpha and theta grids must be non-empty");
  }
  std::vector<PolarRow> rows;
  rows.reserve(alpha_list.size() * theta_grid.size());
  for (double alpha : alpha_list) {
    for (double theta : theta_grid) {
      const PolarizationConfig cfg{alpha, theta};
      rows.push_back({cfg.alpha, cfg.theta, polar_joint_probabilities(cfg)});
    }
  }
  return rows;
}

}  // namespace nosignal
