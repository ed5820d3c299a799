#pragma once

#include <string>
#include <vector>

#include "nosignal/audit.hpp"
#include "nosignal/config.hpp"
#include "nosignal/grid.hpp"
#include "nosignal/path.hpp"
#include "nosignal/polarization.hpp"
#include "nosignal/sampler.hpp"
#include "nosignal/table.hpp"
#include "nosignal/wedge.hpp"

namespace nosignal {

struct RunResult {
  Table table;
  int exit_code = 0;                // 0 ok, 2 audit failure
  std::vector<std::string> notes;  // human-readable diagnostics for stderr
};

inline constexpr std::size_t kDefaultSweepPoints = 101;
inline constexpr std::size_t kDefaultMapPoints = 21;

namespace detail {
inline unsigned workers_of(const RunConfig& cfg) {
  const auto w = cfg.count("workers", 0);
  return w == 0 ? default_workers() : static_cast<unsigned>(w);
}

inline std::size_t grid_of(const RunConfig& cfg, std::size_t fallback) {
  const auto n = cfg.count("grid", fallback);
  if (n == 0) throw InvalidArgument("grid must be at least 1");
  return static_cast<std::size_t>(n);
}

/// Curves default to alpha in {0, pi/8, pi/4}: maximal, partial and no entanglement.
inline std::vector<double> alpha_list(const RunConfig& cfg) {
  if (cfg.has("alpha")) return {cfg.angle("alpha", 0.0)};
  return {0.0, kPi / 8, kPi / 4};
}

inline AliceMode mode_of(const RunConfig& cfg) {
  const auto m = cfg.text("bs_a", "in");
  return m == "out" ? AliceMode::SplitterOut : m == "stop" ? AliceMode::BeamStop : AliceMode::SplitterIn;
}

inline Table run_polar(const RunConfig& cfg) {
  const auto alphas = alpha_list(cfg);
  const auto thetas = cfg.has("theta") ? std::vector<double>{cfg.angle("theta", 0.0)}
                                       : linspace(0.0, kPi, grid_of(cfg, kDefaultSweepPoints));
  Table t{{"alpha", "theta", "p_hh", "p_hv", "p_vh", "p_vv"}, {}};
  for (const auto& r : polar_sweep(alphas, thetas)) {
    t.rows.push_back({r.alpha, r.theta, r.joint.p11, r.joint.p10, r.joint.p01, r.joint.p00});
  }
  return t;
}

inline Table run_mz(const RunConfig& cfg) {
  const auto alphas = alpha_list(cfg);
  const std::vector<double> phi_a{cfg.angle("phi_a", 0.0)};
  const auto phi_b = cfg.has("phi_b") ? std::vector<double>{cfg.angle("phi_b", 0.0)}
                                      : periodic_grid(0.0, kTwoPi, grid_of(cfg, kDefaultSweepPoints));
  const std::vector<AliceMode> modes{mode_of(cfg)};
  const bool joint = cfg.flag("joint", false);
  if (joint && modes[0] == AliceMode::BeamStop) throw ModeError("--joint: the beam stop leaves Alice no detectors");
  Table t;
  t.columns = {"alpha", "phi_b", "p_b1", "p_b0"};
  if (joint) t.columns.insert(t.columns.end(), {"phi_a", "mode", "p_a1b1", "p_a1b0", "p_a0b1", "p_a0b0"});
  for (const auto& r : mz_sweep(alphas, phi_a, phi_b, modes)) {
    std::vector<Cell> row{r.alpha, r.phi_b, r.bob.pB1, r.bob.pB0};
    if (joint) {
      row.insert(row.end(), {r.phi_a, std::string(to_string(r.mode)), r.joint->p11, r.joint->p10, r.joint->p01,
                             r.joint->p00});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table run_wedge(const RunConfig& cfg) {
  const WedgeBench bench(geometry(cfg), workers_of(cfg));
  const double alpha = cfg.angle("alpha", 0.0);
  const double phi_a = cfg.angle("phi_a", 0.0);
  const double phi_b = cfg.angle("phi_b", 0.0);
  const auto d1 = bench.joint_density(alpha, phi_a, phi_b, BobOutcome::B1);
  const auto d0 = bench.joint_density(alpha, phi_a, phi_b, BobOutcome::B0);
  const auto& g1 = bench.at_detector(WedgePath::A1);
  const auto& g2 = bench.at_detector(WedgePath::A2);
  Table t{{"x", "density_b1", "density_b0", "abs_psi_a1", "abs_psi_a2"}, {}};
  for (std::size_t m = 0; m < d1.size(); ++m) {
    t.rows.push_back({g1.x[m], d1[m], d0[m], std::abs(g1.field[m]), std::abs(g2.field[m])});
  }
  return t;
}

inline Table run_diffmap(const RunConfig& cfg, std::vector<std::string>& notes) {
  const std::size_t n = grid_of(cfg, kDefaultMapPoints);
  const auto alphas = linspace(0.0, kPi / 2, n);
  const auto phis = linspace(0.0, kTwoPi, n);
  Table t{{"alpha", "phi_b", "diff_b1", "diff_b0", "err_b1", "err_b0"}, {}};
  for (const auto& c : signal_difference_map(alphas, phis, cfg.angle("phi_a", 0.0), geometry(cfg), workers_of(cfg))) {
    if (!c.ok()) notes.push_back("cell alpha=" + format_double(c.alpha) + " phi_b=" + format_double(c.phi_b) + ": " + c.error);
    t.rows.push_back({c.alpha, c.phi_b, c.diff_b1, c.diff_b0, c.err_b1, c.err_b0});
  }
  return t;
}

inline Table run_sample(const RunConfig& cfg) {
  SamplerSpec spec;
  spec.seed = cfg.count("seed", 0);
  spec.n = static_cast<std::size_t>(cfg.count("n", 1000));
  spec.workers = workers_of(cfg);
  const double alpha = cfg.angle("alpha", 0.0);
  if (cfg.text("source", "polar") == "polar") {
    spec.config = PolarizationConfig(alpha, cfg.angle("theta", 0.0));
  } else {
    spec.config = PathConfig(alpha, cfg.angle("phi_a", 0.0), cfg.angle("phi_b", 0.0), mode_of(cfg));
  }
  return events_table(sample_events(spec));
}

inline constexpr ChshAngles kCanonicalChshAngles{0.0, kPi / 8, kPi / 4, 3 * kPi / 8};

inline Table run_chsh(const RunConfig& cfg) {
  ChshAngles angles = kCanonicalChshAngles;
  if (cfg.has("angles")) {
    const auto list = parse_angle_list(cfg.text("angles", ""));
    std::copy(list.begin(), list.end(), angles.begin());
  }
  const double alpha = cfg.angle("alpha", 0.0);
  const auto r = cfg.flag("analytic", false)
                     ? chsh_analytic(alpha, angles)
                     : estimate_chsh(alpha, angles, static_cast<std::size_t>(cfg.count("n", 1000000)),
                                     cfg.count("seed", 0), workers_of(cfg));
  const double n = static_cast<double>(r.n_per_setting);
  Table t{{"quantity", "value", "standard_error"}, {}};
  const char* names[4] = {"E(a,b)", "E(a,b')", "E(a',b)", "E(a',b')"};
  for (std::size_t k = 0; k < 4; ++k) {
    const double e = r.correlations[k];
    t.rows.push_back({std::string(names[k]), e, r.n_per_setting ? std::sqrt((1.0 - e * e) / n) : 0.0});
  }
  t.rows.push_back({std::string("S"), r.s, r.standard_error});
  return t;
}

inline Table run_audit(const RunConfig& cfg, int& exit_code, std::vector<std::string>& notes) {
  const std::string target = cfg.text("target", "all");
  std::vector<AuditBench> benches;
  if (target == "polar" || target == "all") benches.push_back(AuditBench::Polar);
  if (target == "mz" || target == "all") benches.push_back(AuditBench::Path);
  if (target == "wedge" || target == "all") benches.push_back(AuditBench::Wedge);
  Table t{{"bench", "grid", "cells", "max_abs_diff", "location", "tolerance", "verdict"}, {}};
  for (AuditBench b : benches) {
    AuditGrids grids = default_grids(b);
    if (cfg.has("grid")) {
      const std::size_t n = grid_of(cfg, 1);
      grids.alpha = grids.setting_b = n;
      if (b != AuditBench::Wedge) grids.setting_a = n;
    }
    grids.geometry = geometry(cfg);
    grids.workers = workers_of(cfg);
    const auto r = run_no_signal_audit(b, grids, cfg.real("tolerance", default_tolerance(b)));
    for (const auto& e : r.cell_errors) notes.push_back(std::string(to_string(b)) + ": " + e);
    t.rows.push_back({std::string(to_string(b)), r.grid, static_cast<std::int64_t>(r.cells), r.max_abs_diff,
                      r.location_text(), r.tolerance, std::string(r.pass ? "pass" : "fail")});
    if (!r.pass) exit_code = 2;
  }
  return t;
}
}  // namespace detail

/// Runs one configuration. Output depends only on cfg (never on timing or
/// worker count).
inline RunResult run(const RunConfig& cfg) {
  RunResult out;
  switch (cfg.bench) {
    case Bench::Polar: out.table = detail::run_polar(cfg); break;
    case Bench::Mz: out.table = detail::run_mz(cfg); break;
    case Bench::Wedge: out.table = detail::run_wedge(cfg); break;
    case Bench::Diffmap: out.table = detail::run_diffmap(cfg, out.notes); break;
    case Bench::Sample: out.table = detail::run_sample(cfg); break;
    case Bench::Chsh: out.table = detail::run_chsh(cfg); break;
    case Bench::Audit: out.table = detail::run_audit(cfg, out.exit_code, out.notes); break;
  }
  return out;
}

}  // namespace nosignal
