#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nosignal/amplitude.hpp"

namespace nosignal {

/// What sits at the end of Alice's interferometer.
enum class AliceMode {
  SplitterIn,   // BS_A remixes the two paths
  SplitterOut,  // each path goes straight to its own detector
  BeamStop,     // Alice's photon is absorbed near the source
};

inline std::string_view to_string(AliceMode m) {
  switch (m) {
    case AliceMode::SplitterIn: return "in";
    case AliceMode::SplitterOut: return "out";
    case AliceMode::BeamStop: return "stop";
  }
  return "?";
}

/// Dual Mach-Zehnder bench. phi_a and phi_b shift the upper (path 1) arms.
struct PathConfig {
  double alpha = 0.0;
  double phi_a = 0.0;
  double phi_b = 0.0;
  AliceMode alice_mode = AliceMode::SplitterIn;

  PathConfig() = default;
  PathConfig(double alpha_rad, double phi_a_rad, double phi_b_rad, AliceMode mode)
      : alpha(canonical_angle(alpha_rad, "alpha")),
        phi_a(canonical_angle(phi_a_rad, "phi_a")),
        phi_b(canonical_angle(phi_b_rad, "phi_b")),
        alice_mode(mode) {}
};

enum class PathOutcome { A1B1, A1B0, A0B1, A0B0, B1, B0 };

inline std::string_view to_string(PathOutcome o) {
  switch (o) {
    case PathOutcome::A1B1: return "A1B1";
    case PathOutcome::A1B0: return "A1B0";
    case PathOutcome::A0B1: return "A0B1";
    case PathOutcome::A0B0: return "A0B0";
    case PathOutcome::B1: return "B1";
    case PathOutcome::B0: return "B0";
  }
  return "?";
}

using Transfer2 = std::array<std::array<Complex, 2>, 2>;

/// Exit splitter: rows are detectors (1, 0), columns paths (1, 2).
/// D1 = (p1 + p2)/sqrt2, D0 = -i(p1 - p2)/sqrt2.
inline Transfer2 exit_splitter() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{{Complex{r, 0.0}, Complex{r, 0.0}}, {-kI * r, kI * r}}};
}

/// Phase shifter on path 1 followed by the exit splitter.
inline Transfer2 interferometer(double phi) {
  Transfer2 m = exit_splitter();
  const Complex shift = std::polar(1.0, phi);
  m[0][0] *= shift;
  m[1][0] *= shift;
  return m;
}

/// Alice's arm with BS_A removed: path 2 lands on D_A1, path 1 on D_A0
/// after a reflection (-i).
inline Transfer2 alice_direct(double phi_a) {
  return {{{Complex{0.0, 0.0}, Complex{1.0, 0.0}}, {-kI * std::polar(1.0, phi_a), Complex{0.0, 0.0}}}};
}

/// Bob-side amplitudes conditioned on Alice's path: result[l][i] is the
/// amplitude for Bob detector l (0 -> D_B1, 1 -> D_B0) with Alice's photon
/// on path i + 1.
inline Transfer2 bob_conditional_amplitudes(const TwoPhotonState& psi, double phi_b) {
  const Transfer2 bob = interferometer(phi_b);
  Transfer2 out{};
  for (int l = 0; l < 2; ++l) {
    for (int i = 0; i < 2; ++i) {
      out[l][i] = bob[l][0] * psi.coeff(i, 0) + bob[l][1] * psi.coeff(i, 1);
    }
  }
  return out;
}

/// Joint amplitudes (A1B1, A1B0, A0B1, A0B0).
inline std::array<Complex, 4> mz_joint_amplitudes(const PathConfig& cfg) {
  if (cfg.alice_mode == AliceMode::BeamStop) {
    throw ModeError("mz_joint_amplitudes: beam stop leaves Alice without detectors");
  }
  const TwoPhotonState psi = make_source_state(cfg.alpha, Basis::Path);
  const Transfer2 alice =
      cfg.alice_mode == AliceMode::SplitterIn ? interferometer(cfg.phi_a) : alice_direct(cfg.phi_a);
  const Transfer2 bob_given_path = bob_conditional_amplitudes(psi, cfg.phi_b);

  std::array<Complex, 4> out{};
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      out[static_cast<std::size_t>(2 * k + l)] =
          alice[k][0] * bob_given_path[l][0] + alice[k][1] * bob_given_path[l][1];
    }
  }
  return out;
}

/// Modulus squares of the joint amplitudes (p11 = A1B1, p10 = A1B0, p01 = A0B1, p00 = A0B0).
inline JointDistribution mz_joint_probabilities(const PathConfig& cfg) {
  return distribution_from_amplitudes(mz_joint_amplitudes(cfg));
}

/// Closed-form singles, (1 +- sin 2a sin phi_b)/2.
inline MarginalDistribution mz_singles_prediction(double alpha, double phi_b) {
  const double m = std::sin(2.0 * alpha) * std::sin(phi_b);
  return {(1.0 + m) / 2.0, (1.0 - m) / 2.0};
}

/// Bob's singles. With Alice's splitter in or out they are summed from the
/// joint distribution; with the beam stop they come from Bob's reduced state.
inline MarginalDistribution mz_bob_marginals(const PathConfig& cfg) {
  if (cfg.alice_mode != AliceMode::BeamStop) {
    return bob_marginals(mz_joint_probabilities(cfg));
  }
  const TwoPhotonState psi = make_source_state(cfg.alpha, Basis::Path);
  const Transfer2 a = bob_conditional_amplitudes(psi, cfg.phi_b);
  // Tr_A: incoherent sum over Alice's path
  const double p1 = std::norm(a[0][0]) + std::norm(a[0][1]);
  const double p0 = std::norm(a[1][0]) + std::norm(a[1][1]);
  return {p1, p0};
}

struct MzRow {
  double alpha = 0.0;
  double phi_a = 0.0;
  double phi_b = 0.0;
  AliceMode mode = AliceMode::SplitterIn;
  std::optional<JointDistribution> joint;  // empty for BeamStop
  MarginalDistribution bob;
};

/// Table ordered by (alpha, phi_a, phi_b, mode) with the last index fastest.
inline std::vector<MzRow> mz_sweep(std::span<const double> alpha_list, std::span<const double> phi_a_grid,
                                   std::span<const double> phi_b_grid, std::span<const AliceMode> modes) {
  if (alpha_list.empty() || phi_a_grid.empty() || phi_b_grid.empty() || modes.empty()) {
    throw InvalidArgument("mz_sweep: all grids must be non-empty");
  }
  std::vector<MzRow> rows;
  rows.reserve(alpha_list.size() * phi_a_grid.size() * phi_b_grid.size() * modes.size());
  for (double alpha : alpha_list) {
    for (double phi_a : phi_a_grid) {
      for (double phi_b : phi_b_grid) {
        for (AliceMode mode : modes) {
          const PathConfig cfg{alpha, phi_a, phi_b, mode};
          MzRow row{cfg.alpha, cfg.phi_a, cfg.phi_b, mode, std::nullopt, {}};
          if (mode != AliceMode::BeamStop) {
            row.joint = mz_joint_probabilities(cfg);
            row.bob = bob_marginals(*row.joint);
          } else {
            row.bob = mz_bob_marginals(cfg);
          }
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

/// Fringe visibility (max - min)/(max + min) of a sampled pattern.
inline double visibility(std::span<const double> pattern) {
  if (pattern.empty()) throw EmptyInput("visibility: empty pattern");
  const auto [lo, hi] = std::minmax_element(pattern.begin(), pattern.end());
  const double denom = *hi + *lo;
  return denom > 0.0 ? (*hi - *lo) / denom : 0.0;
}

}  // namespace nosignal
