#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "nosignal/parallel.hpp"
#include "nosignal/path.hpp"
#include "nosignal/polarization.hpp"
#include "nosignal/table.hpp"

namespace nosignal {

/// Events are generated in fixed-size chunks, each with its own generator
/// seeded from (seed, chunk index). The chunk size never depends on the
/// number of workers, so the stream is the same for any worker count.
inline constexpr std::size_t kSampleChunk = 65536;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

/// Uniform in [0, 1) from the top 53 bits, so the mapping does not depend on
/// the standard library's distribution implementation.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// n i.i.d. outcome indices drawn from probs (need not be exactly normalized;
/// a draw past the cumulative sum goes to the last outcome with p > 0).
inline std::vector<std::uint8_t> sample_indices(std::span<const double> probs, std::size_t n, std::uint64_t seed,
                                                unsigned workers = 1) {
  if (probs.empty() || probs.size() > 255) throw InvalidArgument("sample_indices: need 1..255 outcomes");
  std::vector<double> cumulative(probs.size());
  double running = 0.0;
  std::size_t last_nonzero = probs.size();
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (!(probs[k] >= 0.0) || !std::isfinite(probs[k])) throw InvalidArgument("sample_indices: invalid probability");
    running += probs[k];
    cumulative[k] = running;
    if (probs[k] > 0.0) last_nonzero = k;
  }
  if (last_nonzero == probs.size()) throw InvalidArgument("sample_indices: all probabilities are zero");

  std::vector<std::uint8_t> out(n);
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    std::mt19937_64 rng(derive_seed(seed, c));
    const std::size_t hi = std::min(n, (c + 1) * kSampleChunk);
    for (std::size_t i = c * kSampleChunk; i < hi; ++i) {
      const double u = unit_uniform(rng);
      std::size_t k = 0;
      while (k < cumulative.size() && !(u < cumulative[k])) ++k;
      out[i] = static_cast<std::uint8_t>(k < cumulative.size() ? k : last_nonzero);
    }
  });
  return out;
}

using BenchConfig = std::variant<PolarizationConfig, PathConfig>;

struct SamplerSpec {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  BenchConfig config = PolarizationConfig{};
  unsigned workers = 1;
};

using EventOutcome = std::variant<PolarOutcome, PathOutcome>;

struct EventRecord {
  std::uint64_t index = 0;
  EventOutcome outcome = PolarOutcome::HH;
  double alpha = 0.0;
  double setting_a = 0.0;  // theta, or phi_a
  double setting_b = 0.0;  // 0 for the polarization bench, or phi_b

  bool operator==(const EventRecord&) const = default;
};

inline std::string_view outcome_label(const EventOutcome& o) {
  return std::visit([](auto v) { return to_string(v); }, o);
}

/// Whether Bob's detector "1" fired (H for polarization, B1 for the path bench).
inline bool bob_fired_one(const EventOutcome& o) {
  if (const auto* p = std::get_if<PolarOutcome>(&o)) return *p == PolarOutcome::HH || *p == PolarOutcome::VH;
  const auto q = std::get<PathOutcome>(o);
  return q == PathOutcome::A1B1 || q == PathOutcome::A0B1 || q == PathOutcome::B1;
}

inline std::vector<EventRecord> sample_events(const SamplerSpec& spec) {
  std::vector<double> probs;
  std::vector<EventOutcome> labels;
  EventRecord proto;
  if (const auto* pc = std::get_if<PolarizationConfig>(&spec.config)) {
    const auto a = polar_joint_probabilities(*pc).as_array();
    probs.assign(a.begin(), a.end());
    labels = {PolarOutcome::HH, PolarOutcome::HV, PolarOutcome::VH, PolarOutcome::VV};
    proto.alpha = pc->alpha;
    proto.setting_a = pc->theta;
  } else {
    const auto& mc = std::get<PathConfig>(spec.config);
    if (mc.alice_mode == AliceMode::BeamStop) {
      const auto m = mz_bob_marginals(mc);
      probs = {m.pB1, m.pB0};
      labels = {PathOutcome::B1, PathOutcome::B0};
    } else {
      const auto a = mz_joint_probabilities(mc).as_array();
      probs.assign(a.begin(), a.end());
      labels = {PathOutcome::A1B1, PathOutcome::A1B0, PathOutcome::A0B1, PathOutcome::A0B0};
    }
    proto.alpha = mc.alpha;
    proto.setting_a = mc.phi_a;
    proto.setting_b = mc.phi_b;
  }
  const auto idx = sample_indices(probs, spec.n, spec.seed, spec.workers);
  std::vector<EventRecord> events(spec.n, proto);
  for (std::size_t i = 0; i < spec.n; ++i) {
    events[i].index = i;
    events[i].outcome = labels[idx[i]];
  }
  return events;
}

struct EmpiricalMarginals {
  MarginalDistribution p;
  double standard_error = 0.0;  // binomial, same for both outcomes
  std::size_t n = 0;
};

inline EmpiricalMarginals empirical_marginals(std::span<const EventRecord> events) {
  if (events.empty()) throw EmptyInput("empirical_marginals: empty event stream");
  std::size_t ones = 0;
  for (const auto& e : events) ones += bob_fired_one(e.outcome) ? 1 : 0;
  const double n = static_cast<double>(events.size());
  const double p1 = static_cast<double>(ones) / n;
  return {{p1, 1.0 - p1}, std::sqrt(p1 * (1.0 - p1) / n), events.size()};
}

/// Frequencies of the four coincidence outcomes, in JointDistribution order.
inline JointDistribution empirical_joint(std::span<const EventRecord> events) {
  if (events.empty()) throw EmptyInput("empirical_joint: empty event stream");
  std::array<std::size_t, 4> counts{};
  for (const auto& e : events) {
    std::size_t k = 0;
    if (const auto* p = std::get_if<PolarOutcome>(&e.outcome)) {
      k = static_cast<std::size_t>(*p);
    } else {
      const auto q = std::get<PathOutcome>(e.outcome);
      if (q == PathOutcome::B1 || q == PathOutcome::B0) throw ModeError("beam-stop events have no Alice outcome");
      k = static_cast<std::size_t>(q);
    }
    ++counts[k];
  }
  const double n = static_cast<double>(events.size());
  return {counts[0] / n, counts[1] / n, counts[2] / n, counts[3] / n};
}

inline Table events_table(std::span<const EventRecord> events) {
  Table t{{"index", "outcome", "alpha", "setting_a", "setting_b"}, {}};
  t.rows.reserve(events.size());
  for (const auto& e : events) {
    t.rows.push_back({static_cast<std::int64_t>(e.index), std::string(outcome_label(e.outcome)), e.alpha,
                      e.setting_a, e.setting_b});
  }
  return t;
}

/// Analyzer angles (a, b, a', b').
using ChshAngles = std::array<double, 4>;

struct ChshResult {
  double s = 0.0;
  double standard_error = 0.0;
  std::array<double, 4> correlations{};  // E(a,b), E(a,b'), E(a',b), E(a',b')
  std::size_t n_per_setting = 0;         // 0 for the closed form
};

namespace detail {
inline void require_singlet(double alpha) {
  if (canonical_angle(alpha, "alpha") != 0.0) {
    throw UnsupportedConfiguration("CHSH is only supported for the maximally entangled source, alpha = 0");
  }
}

inline std::array<std::pair<double, double>, 4> chsh_pairs(const ChshAngles& g) {
  for (double v : g) require_finite(v, "analyzer angle");
  return {{{g[0], g[1]}, {g[0], g[3]}, {g[2], g[1]}, {g[2], g[3]}}};
}

inline double chsh_combination(const std::array<double, 4>& e) { return std::abs(e[0] - e[1] + e[2] + e[3]); }
}  // namespace detail

/// E for analyzers at (a, b) with the singlet: only a - b matters.
inline double polar_correlation(double alpha, double a, double b) {
  const auto p = polar_joint_probabilities(PolarizationConfig(alpha, a - b));
  return (p.p11 + p.p00) - (p.p10 + p.p01);
}

inline ChshResult chsh_analytic(double alpha, const ChshAngles& angles) {
  detail::require_singlet(alpha);
  ChshResult r;
  const auto pairs = detail::chsh_pairs(angles);
  for (std::size_t k = 0; k < 4; ++k) r.correlations[k] = polar_correlation(0.0, pairs[k].first, pairs[k].second);
  r.s = detail::chsh_combination(r.correlations);
  return r;
}

inline constexpr std::size_t kMinChshSamples = 10000;

inline ChshResult estimate_chsh(double alpha, const ChshAngles& angles, std::size_t n_per_setting, std::uint64_t seed,
                                unsigned workers = 1) {
  detail::require_singlet(alpha);
  if (n_per_setting < kMinChshSamples) {
    throw InvalidArgument("estimate_chsh: need at least " + std::to_string(kMinChshSamples) + " samples per setting");
  }
  ChshResult r;
  r.n_per_setting = n_per_setting;
  const auto pairs = detail::chsh_pairs(angles);
  const double n = static_cast<double>(n_per_setting);
  double variance = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto p = polar_joint_probabilities(PolarizationConfig(0.0, pairs[k].first - pairs[k].second)).as_array();
    const auto idx = sample_indices(p, n_per_setting, derive_seed(seed, 0xC5A0 + k), workers);
    std::int64_t balance = 0;
    for (auto i : idx) balance += (i == 0 || i == 3) ? 1 : -1;
    const double e = static_cast<double>(balance) / n;
    r.correlations[k] = e;
    variance += (1.0 - e * e) / n;
  }
  r.s = detail::chsh_combination(r.correlations);
  r.standard_error = std::sqrt(variance);
  return r;
}

}  // namespace nosignal
