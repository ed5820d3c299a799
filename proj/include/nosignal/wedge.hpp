#pragma once

// Three-detector wedge-mirror configuration in a 1-D transverse model.
//
// Alice's two paths a1 and a2 are reflected by the two faces of a wedge
// mirror onto one detector D_A. Each beam is a Gaussian whose inner tail is
// clipped by the apex and whose outer tail is clipped by the edge of its
// face. The reflected fields are propagated to the detector plane with the
// paraxial Huygens-Fresnel integral; each carries a small steering tilt so
// that the two beams overlap there. Bob's interferometer is the single-mode
// one from path.hpp.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nosignal/amplitude.hpp"
#include "nosignal/grid.hpp"
#include "nosignal/parallel.hpp"
#include "nosignal/path.hpp"
#include "nosignal/quadrature.hpp"

namespace nosignal {

enum class WedgePath { A1, A2 };
enum class BobOutcome { B1, B0 };

/// Lengths in metres, angles in radians.
struct WedgeGeometry {
  double wavelength = 810e-9;
  /// Standard deviation of each beam's intensity profile.
  double beam_sigma = 1e-3;
  /// Distance from a beam centre to the outer edge of its wedge face.
  double aperture_halfwidth = 10e-3;
  /// Distance from a beam centre to the wedge apex.
  double apex_offset = 5.4e-3;
  double propagation_distance = 1.0;
  /// Steering angle of each beam; unset means "centres meet on axis at the detector".
  std::optional<double> tilt_angle;
  double detector_halfwidth = 12e-3;
  std::size_t samples_aperture = 4097;
  std::size_t samples_detector = 16385;
  /// false: full Gaussians, no apex or edge clipping.
  bool truncate = true;

  double effective_tilt() const {
    return tilt_angle ? *tilt_angle : std::atan2(apex_offset, propagation_distance);
  }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(std::isfinite(v) && v > 0.0)) throw InvalidArgument(std::string("wedge geometry: ") + name + " must be > 0");
    };
    positive(wavelength, "wavelength");
    positive(beam_sigma, "beam_sigma");
    positive(aperture_halfwidth, "aperture_halfwidth");
    positive(apex_offset, "apex_offset");
    positive(detector_halfwidth, "detector_halfwidth");
    if (!(std::isfinite(propagation_distance) && propagation_distance >= 0.0)) {
      throw InvalidArgument("wedge geometry: propagation_distance must be >= 0");
    }
    if (tilt_angle && !std::isfinite(*tilt_angle)) throw InvalidArgument("wedge geometry: tilt_angle must be finite");
    if (samples_aperture < 64 || samples_detector < 64) {
      throw InvalidArgument("wedge geometry: need at least 64 samples on each grid");
    }
    if (samples_aperture % 2 == 0) throw InvalidArgument("wedge geometry: samples_aperture must be odd");
    if ((samples_detector - 1) % 4 != 0) throw InvalidArgument("wedge geometry: samples_detector must be 4k + 1");
    if (aperture_halfwidth / beam_sigma < 5.0) {
      throw InvalidArgument("wedge geometry: aperture_halfwidth must be at least 5 beam_sigma");
    }
  }

  bool operator==(const WedgeGeometry&) const = default;
};

/// Complex scalar field on a uniform grid, normalized so that the integral
/// of |field|^2 is the probability carried.
struct BeamProfile {
  std::vector<double> x;
  std::vector<Complex> field;

  double dx() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }

  std::vector<double> intensity() const {
    std::vector<double> out(field.size());
    std::transform(field.begin(), field.end(), out.begin(), [](Complex z) { return std::norm(z); });
    return out;
  }

  double energy() const {
    const auto i = intensity();
    return simpson(std::span<const double>(i), dx());
  }
};

/// Unit-normalized Gaussian amplitude, intensity standard deviation sigma.
inline double gaussian_amplitude(double x, double centre, double sigma) {
  const double u = (x - centre) / sigma;
  return std::pow(2.0 * kPi * sigma * sigma, -0.25) * std::exp(-u * u / 4.0);
}

/// Field reflected by one wedge face, in wedge coordinates with the apex at
/// x = 0. Path a1 sits at +apex_offset and keeps x in [0, apex_offset +
/// aperture_halfwidth]; a2 is its mirror image. Grid endpoints are the clip
/// points, so each profile is smooth on its closed support.
inline BeamProfile truncated_aperture_field(const WedgeGeometry& geom, WedgePath path) {
  geom.validate();
  const double c = geom.apex_offset;
  double lo, hi;
  if (geom.truncate) {
    lo = 0.0;
    hi = c + geom.aperture_halfwidth;
  } else {
    const double reach = std::max(geom.aperture_halfwidth, 12.0 * geom.beam_sigma);
    lo = c - reach;
    hi = c + reach;
  }
  BeamProfile a1;
  a1.x = linspace(lo, hi, geom.samples_aperture);
  a1.field.resize(a1.x.size());
  for (std::size_t i = 0; i < a1.x.size(); ++i) a1.field[i] = gaussian_amplitude(a1.x[i], c, geom.beam_sigma);
  if (path == WedgePath::A1) return a1;

  BeamProfile a2;
  const std::size_t n = a1.x.size();
  a2.x.resize(n);
  a2.field.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    a2.x[i] = -a1.x[n - 1 - i];
    a2.field[i] = a1.field[n - 1 - i];
  }
  return a2;
}

/// Largest input spacing that keeps the Fresnel integrand (chirp times tilt
/// ramp) above two samples per period for every detector point.
inline double fresnel_max_spacing(double x_lo, double x_hi, const WedgeGeometry& geom, double tilt) {
  const double lz = geom.wavelength * geom.propagation_distance;
  const double base = std::sin(tilt) / geom.wavelength;
  const double d = geom.detector_halfwidth;
  double f_max = 0.0;
  for (double xs : {x_lo, x_hi})
    for (double xd : {-d, d}) f_max = std::max(f_max, std::abs(base + (xs - xd) / lz));
  return f_max > 0.0 ? 0.5 / f_max : std::numeric_limits<double>::infinity();
}

/// Paraxial Huygens-Fresnel propagation over propagation_distance onto the
/// detector grid [-detector_halfwidth, detector_halfwidth], after applying a
/// linear phase ramp exp(i k sin(tilt) x). Zero distance returns the ramped
/// input on its own grid.
inline BeamProfile fresnel_propagate(const BeamProfile& profile, const WedgeGeometry& geom, double tilt,
                                     unsigned workers = default_workers()) {
  geom.validate();
  require_finite(tilt, "tilt");
  if (profile.x.size() < 3 || profile.x.size() != profile.field.size()) {
    throw InvalidArgument("fresnel_propagate: malformed profile");
  }
  const double k = 2.0 * kPi / geom.wavelength;
  const double ramp_rate = k * std::sin(tilt);

  if (geom.propagation_distance == 0.0) {
    BeamProfile out = profile;
    for (std::size_t i = 0; i < out.x.size(); ++i) out.field[i] *= std::polar(1.0, ramp_rate * out.x[i]);
    return out;
  }

  const std::size_t n = profile.x.size();
  const double dxs = profile.dx();
  const double x0 = profile.x.front();
  const double span = profile.x.back() - x0;
  const double max_dx = fresnel_max_spacing(x0, profile.x.back(), geom, tilt);
  if (dxs > max_dx * (1.0 + 1e-12)) {
    std::size_t need = static_cast<std::size_t>(std::ceil(span / max_dx)) + 1;
    if (need % 2 == 0) ++need;
    throw SamplingError("fresnel_propagate: aperture grid violates the Fresnel-kernel Nyquist bound", need);
  }

  const double lz = geom.wavelength * geom.propagation_distance;
  const double chirp = kPi / lz;
  const auto weights = simpson_weights(n, dxs);
  // source term with everything that does not depend on the detector point folded in
  std::vector<Complex> src(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xs = profile.x[i];
    src[i] = weights[i] * profile.field[i] * std::polar(1.0, ramp_rate * xs + chirp * xs * xs);
  }
  const Complex prefactor = std::polar(1.0 / std::sqrt(lz), -kPi / 4.0);

  BeamProfile out;
  out.x = linspace(-geom.detector_halfwidth, geom.detector_halfwidth, geom.samples_detector);
  out.field.assign(out.x.size(), Complex{});
  constexpr std::size_t kReseed = 64;  // bounds drift of the rotation recurrence
  parallel_for(out.x.size(), workers, [&](std::size_t m) {
    const double xd = out.x[m];
    const double rate = -2.0 * chirp * xd;
    const Complex step = std::polar(1.0, rate * dxs);
    Complex acc{};
    Complex rot{};
    for (std::size_t i = 0; i < n; ++i) {
      if (i % kReseed == 0) rot = std::polar(1.0, rate * (x0 + dxs * static_cast<double>(i)));
      acc += src[i] * rot;
      rot *= step;
    }
    out.field[m] = prefactor * std::polar(1.0, chirp * xd * xd) * acc;
  });
  return out;
}

/// Sampling period of the two-beam fringes on the detector, or infinity
/// when the beams are not steered.
inline double fringe_period(const WedgeGeometry& geom) {
  const double s = std::abs(std::sin(geom.effective_tilt()));
  return s > 0.0 ? geom.wavelength / (2.0 * s) : std::numeric_limits<double>::infinity();
}

inline constexpr double kMinSamplesPerFringe = 32.0;

/// Detector-face integral of a density sampled on the detector grid.
inline QuadratureResult integrate_detector(std::span<const double> density, const WedgeGeometry& geom) {
  if (density.size() != geom.samples_detector) {
    throw InvalidArgument("integrate_detector: density is not sampled on the detector grid");
  }
  const double width = 2.0 * geom.detector_halfwidth;
  const double dx = width / static_cast<double>(density.size() - 1);
  const double period = fringe_period(geom);
  if (dx > period / kMinSamplesPerFringe) {
    std::size_t intervals = static_cast<std::size_t>(std::ceil(width * kMinSamplesPerFringe / period));
    intervals = (intervals + 3) / 4 * 4;
    throw SamplingError("integrate_detector: fewer than 32 samples per fringe period", intervals + 1);
  }
  return simpson_richardson(density, dx);
}

/// Fields of both paths at the detector for one geometry, propagated once
/// and reused for every (alpha, phi_a, phi_b).
class WedgeBench {
 public:
  explicit WedgeBench(WedgeGeometry geom, unsigned workers = default_workers()) : geom_(std::move(geom)) {
    geom_.validate();
    const double tilt = geom_.effective_tilt();
    aperture_[0] = truncated_aperture_field(geom_, WedgePath::A1);
    aperture_[1] = truncated_aperture_field(geom_, WedgePath::A2);
    // a1 sits at +x and is steered towards the axis, a2 the other way
    detector_[0] = fresnel_propagate(aperture_[0], geom_, -tilt, workers);
    detector_[1] = fresnel_propagate(aperture_[1], geom_, +tilt, workers);
    overlap_ = compute_overlap();
  }

  const WedgeGeometry& geometry() const { return geom_; }
  const BeamProfile& aperture(WedgePath p) const { return aperture_[index(p)]; }
  const BeamProfile& at_detector(WedgePath p) const { return detector_[index(p)]; }

  /// Probability that Alice's photon survives the wedge (both faces, weighted by 1/2 each).
  double retained_fraction() const { return 0.5 * (aperture_[0].energy() + aperture_[1].energy()); }

  /// Coincidence density at D_A for one Bob outcome: the two paths add
  /// coherently, weighted by Bob's amplitude conditioned on each path.
  std::vector<double> joint_density(double alpha, double phi_a, double phi_b, BobOutcome bob) const {
    const TwoPhotonState psi = make_source_state(alpha, Basis::Path);
    const Transfer2 cond = bob_conditional_amplitudes(psi, canonical_angle(phi_b, "phi_b"));
    const int l = bob == BobOutcome::B1 ? 0 : 1;
    const Complex w1 = cond[l][0] * std::polar(1.0, canonical_angle(phi_a, "phi_a"));
    const Complex w2 = cond[l][1];
    const auto& g1 = detector_[0].field;
    const auto& g2 = detector_[1].field;
    std::vector<double> density(g1.size());
    for (std::size_t m = 0; m < g1.size(); ++m) density[m] = std::norm(w1 * g1[m] + w2 * g2[m]);
    return density;
  }

  /// Bob's singles from integrating the coincidence densities over D_A.
  std::pair<QuadratureResult, QuadratureResult> bob_singles(double alpha, double phi_a, double phi_b) const {
    const auto d1 = joint_density(alpha, phi_a, phi_b, BobOutcome::B1);
    const auto d0 = joint_density(alpha, phi_a, phi_b, BobOutcome::B0);
    return {integrate_detector(d1, geom_), integrate_detector(d0, geom_)};
  }

  /// Probability of path p that leaves the aperture but misses D_A.
  double uncaptured(WedgePath p) const {
    return std::max(0.0, aperture(p).energy() - at_detector(p).energy());
  }

  /// |integral over D_A of g1 conj(g2)|, padded by its own quadrature error.
  /// This is the only place Alice's phase enters Bob's integrated singles.
  double detector_overlap() const { return overlap_; }

  /// Largest shift of Bob's integrated singles for one outcome away from
  /// their phi_a-free part: the interference term 2 Re(e^{i phi_a} w1 conj(w2) X)
  /// is bounded by 2|w1||w2||X|.
  double phase_sensitivity_bound(double alpha, double phi_b, BobOutcome bob) const {
    const TwoPhotonState psi = make_source_state(alpha, Basis::Path);
    const Transfer2 cond = bob_conditional_amplitudes(psi, canonical_angle(phi_b, "phi_b"));
    const int l = bob == BobOutcome::B1 ? 0 : 1;
    return 2.0 * std::abs(cond[l][0]) * std::abs(cond[l][1]) * overlap_;
  }

  /// |<a1|a2>| at the wedge: zero when clipped (disjoint faces), the Gaussian
  /// tail overlap when truncation is disabled.
  double aperture_overlap() const {
    if (geom_.truncate) return 0.0;
    const double u = geom_.apex_offset / geom_.beam_sigma;
    return std::exp(-u * u / 2.0);
  }

 private:
  static std::size_t index(WedgePath p) { return p == WedgePath::A1 ? 0 : 1; }

  WedgeGeometry geom_;
  BeamProfile aperture_[2];
  BeamProfile detector_[2];
  double overlap_ = 0.0;

  double compute_overlap() const {
    const auto& g1 = detector_[0].field;
    const auto& g2 = detector_[1].field;
    std::vector<double> re(g1.size()), im(g1.size());
    for (std::size_t m = 0; m < g1.size(); ++m) {
      const Complex v = g1[m] * std::conj(g2[m]);
      re[m] = v.real();
      im[m] = v.imag();
    }
    const double dx = detector_[0].dx();
    const auto r = simpson_richardson(re, dx);
    const auto i = simpson_richardson(im, dx);
    return std::hypot(r.value, i.value) + r.error_estimate + i.error_estimate;
  }
};

inline std::vector<double> joint_density_at_detector(double alpha, double phi_a, double phi_b, BobOutcome bob,
                                                     const WedgeGeometry& geom) {
  return WedgeBench(geom).joint_density(alpha, phi_a, phi_b, bob);
}

struct DiffCell {
  double alpha = 0.0;
  double phi_b = 0.0;
  double diff_b1 = 0.0;
  double diff_b0 = 0.0;
  double err_b1 = 0.0;
  double err_b0 = 0.0;
  std::string error;  // non-empty when the cell could not be evaluated

  bool ok() const { return error.empty(); }
};

namespace detail {
inline std::vector<DiffCell> empty_cells(std::span<const double> alpha_grid, std::span<const double> phi_b_grid,
                                         double phi_a) {
  if (alpha_grid.empty() || phi_b_grid.empty()) {
    throw InvalidArgument("signal_difference_map: grids must be non-empty");
  }
  require_finite(phi_a, "phi_a");
  std::vector<DiffCell> cells(alpha_grid.size() * phi_b_grid.size());
  for (std::size_t i = 0; i < alpha_grid.size(); ++i)
    for (std::size_t j = 0; j < phi_b_grid.size(); ++j) {
      auto& c = cells[i * phi_b_grid.size() + j];
      c.alpha = alpha_grid[i];
      c.phi_b = phi_b_grid[j];
    }
  return cells;
}

inline void mark_failed(DiffCell& c, const std::string& why) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  c.diff_b1 = c.diff_b0 = c.err_b1 = c.err_b0 = nan;
  c.error = why;
}
}  // namespace detail

/// Numerically integrated wedge singles minus the single-mode prediction
/// (1 +- sin 2a sin phi_b)/2, alpha-major, on an already propagated bench.
/// Failures are recorded per cell (values NaN) instead of aborting the map.
inline std::vector<DiffCell> signal_difference_map(std::span<const double> alpha_grid,
                                                   std::span<const double> phi_b_grid, double phi_a,
                                                   const WedgeBench& bench, unsigned workers = default_workers()) {
  auto cells = detail::empty_cells(alpha_grid, phi_b_grid, phi_a);
  parallel_for(cells.size(), workers, [&](std::size_t k) {
    auto& c = cells[k];
    try {
      const auto [b1, b0] = bench.bob_singles(c.alpha, phi_a, c.phi_b);
      const auto predicted = mz_singles_prediction(c.alpha, c.phi_b);
      c.diff_b1 = b1.value - predicted.pB1;
      c.diff_b0 = b0.value - predicted.pB0;
      c.err_b1 = b1.error_estimate + bench.phase_sensitivity_bound(c.alpha, c.phi_b, BobOutcome::B1);
      c.err_b0 = b0.error_estimate + bench.phase_sensitivity_bound(c.alpha, c.phi_b, BobOutcome::B0);
    } catch (const std::exception& e) {
      detail::mark_failed(c, e.what());
    }
  });
  return cells;
}

/// Same, propagating the geometry first. A geometry that cannot be sampled
/// marks every cell.
inline std::vector<DiffCell> signal_difference_map(std::span<const double> alpha_grid,
                                                   std::span<const double> phi_b_grid, double phi_a,
                                                   const WedgeGeometry& geom, unsigned workers = default_workers()) {
  if (alpha_grid.empty() || phi_b_grid.empty()) {
    throw InvalidArgument("signal_difference_map: grids must be non-empty");
  }
  std::optional<WedgeBench> bench;
  try {
    bench.emplace(geom, workers);
  } catch (const SamplingError& e) {
    auto cells = detail::empty_cells(alpha_grid, phi_b_grid, phi_a);
    for (auto& c : cells) detail::mark_failed(c, e.what());
    return cells;
  }
  return signal_difference_map(alpha_grid, phi_b_grid, phi_a, *bench, workers);
}

}  // namespace nosignal
