#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nosignal/grid.hpp"
#include "nosignal/path.hpp"
#include "nosignal/polarization.hpp"
#include "nosignal/table.hpp"
#include "nosignal/wedge.hpp"

namespace nosignal {

enum class AuditBench { Polar, Path, Wedge };

inline std::string_view to_string(AuditBench b) {
  switch (b) {
    case AuditBench::Polar: return "polar";
    case AuditBench::Path: return "mz";
    case AuditBench::Wedge: return "wedge";
  }
  return "?";
}

/// Grid sizes per axis. Polarization: (alpha, theta). Path: (alpha, phi_a,
/// phi_b) for every Alice mode. Wedge: (alpha, phi_b) for each phi_a.
struct AuditGrids {
  std::size_t alpha = 100;
  std::size_t setting_a = 100;
  std::size_t setting_b = 100;
  WedgeGeometry geometry{};
  unsigned workers = default_workers();
};

inline double default_tolerance(AuditBench b) { return b == AuditBench::Wedge ? 1e-4 : 1e-12; }

inline AuditGrids default_grids(AuditBench b) {
  AuditGrids g;
  switch (b) {
    case AuditBench::Polar: g.alpha = g.setting_a = 100; g.setting_b = 1; break;
    case AuditBench::Path: g.alpha = g.setting_a = g.setting_b = 50; break;
    case AuditBench::Wedge: g.alpha = 21; g.setting_a = 3; g.setting_b = 21; break;
  }
  return g;
}

struct NoSignalReport {
  AuditBench bench = AuditBench::Polar;
  std::string grid;  // e.g. "alpha 100 x theta 100"
  std::size_t cells = 0;
  double max_abs_diff = 0.0;
  std::vector<std::pair<std::string, std::string>> location;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> cell_errors;  // annotated failures, "alpha=..,phi_b=..: why"

  std::string location_text() const {
    std::string out;
    for (const auto& [k, v] : location) out += (out.empty() ? "" : " ") + k + "=" + v;
    return out;
  }
};

namespace detail {
using Location = std::vector<std::pair<std::string, std::string>>;

inline std::pair<std::string, std::string> at(std::string key, double v) { return {std::move(key), format_double(v)}; }

inline void note_max(NoSignalReport& r, double diff, Location where) {
  if (diff > r.max_abs_diff || r.location.empty()) {
    r.max_abs_diff = std::max(r.max_abs_diff, diff);
    r.location = std::move(where);
  }
}

inline void require_axis(std::size_t n, const char* name) {
  if (n == 0) throw InvalidArgument(std::string("audit grid axis '") + name + "' is empty");
}
}  // namespace detail

/// Bob's singles over every Alice-side setting on the grid, compared with
/// the Alice-independent prediction; verdict pass iff max |diff| <= tolerance.
inline NoSignalReport run_no_signal_audit(AuditBench bench, const AuditGrids& grids, double tolerance) {
  if (!(tolerance > 0.0)) throw InvalidArgument("audit tolerance must be > 0");
  NoSignalReport r;
  r.bench = bench;
  r.tolerance = tolerance;

  if (bench == AuditBench::Polar) {
    detail::require_axis(grids.alpha, "alpha");
    detail::require_axis(grids.setting_a, "theta");
    const auto alphas = linspace(0.0, kPi / 2, grids.alpha);
    const auto thetas = linspace(0.0, kPi, grids.setting_a);
    r.grid = "alpha " + std::to_string(alphas.size()) + " x theta " + std::to_string(thetas.size());
    for (double a : alphas)
      for (double t : thetas) {
        const PolarizationConfig cfg(a, t);
        const auto m = bob_marginals(distribution_from_amplitudes(polar_joint_amplitudes(cfg)));
        detail::note_max(r, std::abs(m.pB1 - 0.5), {detail::at("alpha", a), detail::at("theta", t)});
        ++r.cells;
      }
  } else if (bench == AuditBench::Path) {
    detail::require_axis(grids.alpha, "alpha");
    detail::require_axis(grids.setting_a, "phi_a");
    detail::require_axis(grids.setting_b, "phi_b");
    const auto alphas = linspace(0.0, kPi / 2, grids.alpha);
    const auto pas = linspace(0.0, kTwoPi, grids.setting_a);
    const auto pbs = linspace(0.0, kTwoPi, grids.setting_b);
    r.grid = "alpha " + std::to_string(alphas.size()) + " x phi_a " + std::to_string(pas.size()) + " x phi_b " +
             std::to_string(pbs.size()) + " x modes in/out/stop";
    for (AliceMode mode : {AliceMode::SplitterIn, AliceMode::SplitterOut, AliceMode::BeamStop})
      for (double a : alphas)
        for (double pa : pas)
          for (double pb : pbs) {
            const PathConfig cfg(a, pa, pb, mode);
            const auto m = mode == AliceMode::BeamStop ? mz_bob_marginals(cfg) : bob_marginals(mz_joint_probabilities(cfg));
            const auto expected = mz_singles_prediction(a, pb);
            const double d = std::max(std::abs(m.pB1 - expected.pB1), std::abs(m.pB0 - expected.pB0));
            detail::note_max(r, d, {{"mode", std::string(to_string(mode))}, detail::at("alpha", a), detail::at("phi_a", pa), detail::at("phi_b", pb)});
            ++r.cells;
          }
  } else {
    detail::require_axis(grids.alpha, "alpha");
    detail::require_axis(grids.setting_a, "phi_a");
    detail::require_axis(grids.setting_b, "phi_b");
    const auto alphas = linspace(0.0, kPi / 2, grids.alpha);
    const auto pas = periodic_grid(0.0, kTwoPi, grids.setting_a);
    const auto pbs = linspace(0.0, kTwoPi, grids.setting_b);
    r.grid = "alpha " + std::to_string(alphas.size()) + " x phi_b " + std::to_string(pbs.size()) + " x phi_a " +
             std::to_string(pas.size());
    std::optional<WedgeBench> wb;
    try {
      wb.emplace(grids.geometry, grids.workers);
    } catch (const SamplingError& e) {
      r.cell_errors.push_back(std::string("geometry: ") + e.what());
    }
    if (wb) {
      for (double pa : pas) {
        for (const auto& c : signal_difference_map(alphas, pbs, pa, *wb, grids.workers)) {
          ++r.cells;
          if (!c.ok()) {
            r.cell_errors.push_back("alpha=" + format_double(c.alpha) + " phi_b=" + format_double(c.phi_b) +
                                    " phi_a=" + format_double(pa) + ": " + c.error);
            continue;
          }
          detail::note_max(r, std::max(std::abs(c.diff_b1), std::abs(c.diff_b0)),
                           {detail::at("alpha", c.alpha), detail::at("phi_a", pa), detail::at("phi_b", c.phi_b)});
        }
      }
    }
  }
  r.pass = r.cell_errors.empty() && r.max_abs_diff <= tolerance;
  return r;
}

}  // namespace nosignal
