#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nosignal/amplitude.hpp"
#include "nosignal/errors.hpp"
#include "nosignal/table.hpp"
#include "nosignal/wedge.hpp"

namespace nosignal {

namespace detail {
inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}
}  // namespace detail

/// Radians from a decimal ("0.785") or a pi literal: "pi", "-pi/2", "3*pi/8",
/// "3pi/4", "0.5*pi". No canonicalization.
inline double parse_angle(std::string_view text) {
  const std::string_view s = detail::trim(text);
  const auto bad = [&] { return InvalidArgument("not an angle: '" + std::string(text) + "'"); };
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) {
    if (auto v = detail::parse_number(s)) return *v;
    throw bad();
  }
  std::string_view prefix = s.substr(0, pos);
  std::string_view suffix = s.substr(pos + 2);
  double coefficient = 1.0;
  if (prefix == "-") {
    coefficient = -1.0;
  } else if (!prefix.empty() && prefix != "+") {
    if (prefix.back() == '*') prefix.remove_suffix(1);
    auto c = detail::parse_number(prefix);
    if (!c) throw bad();
    coefficient = *c;
  }
  double divisor = 1.0;
  if (!suffix.empty()) {
    if (suffix.front() != '/') throw bad();
    auto d = detail::parse_number(suffix.substr(1));
    if (!d || *d == 0.0) throw bad();
    divisor = *d;
  }
  return coefficient * kPi / divisor;
}

/// Comma-separated angles, e.g. "0,pi/8,pi/4,3pi/8".
inline std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_angle(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

enum class Bench { Polar, Mz, Wedge, Sample, Chsh, Diffmap, Audit };

inline constexpr std::array<std::pair<Bench, std::string_view>, 7> kBenchNames{{
    {Bench::Polar, "polar"},
    {Bench::Mz, "mz"},
    {Bench::Wedge, "wedge"},
    {Bench::Sample, "sample"},
    {Bench::Chsh, "chsh"},
    {Bench::Diffmap, "diffmap"},
    {Bench::Audit, "audit"},
}};

inline std::string_view to_string(Bench b) {
  for (const auto& [v, name] : kBenchNames)
    if (v == b) return name;
  return "?";
}

inline std::optional<Bench> parse_bench(std::string_view s) {
  for (const auto& [v, name] : kBenchNames)
    if (name == s) return v;
  return std::nullopt;
}

enum class KeyKind { Angle, AngleList, Length, NonNegative, Positive, Count, Flag, Choice };

struct KeySpec {
  std::string_view name;
  KeyKind kind;
  std::vector<Bench> benches;
  std::vector<std::string_view> choices = {};
};

inline const std::vector<KeySpec>& key_specs() {
  using B = Bench;
  const std::vector<B> optics{B::Wedge, B::Diffmap, B::Audit};
  static const std::vector<KeySpec> specs = {
      {"alpha", KeyKind::Angle, {B::Polar, B::Mz, B::Wedge, B::Sample, B::Chsh}},
      {"theta", KeyKind::Angle, {B::Polar, B::Sample}},
      {"phi_a", KeyKind::Angle, {B::Mz, B::Wedge, B::Sample, B::Diffmap}},
      {"phi_b", KeyKind::Angle, {B::Mz, B::Wedge, B::Sample}},
      {"bs_a", KeyKind::Choice, {B::Mz, B::Sample}, {"in", "out", "stop"}},
      {"joint", KeyKind::Flag, {B::Mz}},
      {"grid", KeyKind::Count, {B::Polar, B::Mz, B::Diffmap, B::Audit}},
      {"source", KeyKind::Choice, {B::Sample}, {"polar", "mz"}},
      {"n", KeyKind::Count, {B::Sample, B::Chsh}},
      {"seed", KeyKind::Count, {B::Sample, B::Chsh}},
      {"angles", KeyKind::AngleList, {B::Chsh}},
      {"analytic", KeyKind::Flag, {B::Chsh}},
      {"target", KeyKind::Choice, {B::Audit}, {"polar", "mz", "wedge", "all"}},
      {"tolerance", KeyKind::Positive, {B::Audit}},
      {"workers", KeyKind::Count, {B::Polar, B::Mz, B::Wedge, B::Sample, B::Chsh, B::Diffmap, B::Audit}},
      {"wavelength", KeyKind::Length, optics},
      {"beam_sigma", KeyKind::Length, optics},
      {"aperture_halfwidth", KeyKind::Length, optics},
      {"apex_offset", KeyKind::Length, optics},
      {"propagation_distance", KeyKind::NonNegative, optics},
      {"tilt_angle", KeyKind::Angle, optics},
      {"detector_halfwidth", KeyKind::Length, optics},
      {"samples_aperture", KeyKind::Count, optics},
      {"samples_detector", KeyKind::Count, optics},
      {"truncate", KeyKind::Flag, optics},
  };
  return specs;
}

inline const KeySpec* find_key(std::string_view name) {
  for (const auto& k : key_specs())
    if (k.name == name) return &k;
  return nullptr;
}

namespace detail {
inline std::optional<std::uint64_t> parse_count(std::string_view s) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<bool> parse_flag(std::string_view s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  return std::nullopt;
}

/// Empty string when the value is acceptable for the key, else the reason.
inline std::string check_value(const KeySpec& k, std::string_view v) {
  try {
    switch (k.kind) {
      case KeyKind::Angle:
        parse_angle(v);
        return {};
      case KeyKind::AngleList:
        if (parse_angle_list(v).size() != 4) return "expected four comma-separated angles";
        return {};
      case KeyKind::Length:
      case KeyKind::Positive: {
        auto x = parse_number(v);
        if (!x || *x <= 0.0) return "expected a positive number";
        return {};
      }
      case KeyKind::NonNegative: {
        auto x = parse_number(v);
        if (!x || *x < 0.0) return "expected a non-negative number";
        return {};
      }
      case KeyKind::Count:
        if (!parse_count(v)) return "expected a non-negative integer";
        return {};
      case KeyKind::Flag:
        if (!parse_flag(v)) return "expected true or false";
        return {};
      case KeyKind::Choice:
        if (std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end()) {
          std::string list;
          for (auto c : k.choices) list += (list.empty() ? "" : ", ") + std::string(c);
          return "expected one of " + list;
        }
        return {};
    }
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "unsupported key";
}
}  // namespace detail

struct RunConfig {
  Bench bench = Bench::Polar;
  std::map<std::string, std::string> parameters;
  std::string output_path;  // empty: standard output
  Format format = Format::Csv;

  bool operator==(const RunConfig&) const = default;

  bool has(const std::string& key) const { return parameters.count(key) != 0; }

  std::string text(const std::string& key, std::string fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : it->second;
  }
  double angle(const std::string& key, double fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : parse_angle(it->second);
  }
  double real(const std::string& key, double fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : *detail::parse_number(it->second);
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : *detail::parse_count(it->second);
  }
  bool flag(const std::string& key, bool fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : *detail::parse_flag(it->second);
  }
};

/// Default geometry with any optics keys of cfg applied.
inline WedgeGeometry geometry(const RunConfig& cfg) {
  WedgeGeometry g;
  g.wavelength = cfg.real("wavelength", g.wavelength);
  g.beam_sigma = cfg.real("beam_sigma", g.beam_sigma);
  g.aperture_halfwidth = cfg.real("aperture_halfwidth", g.aperture_halfwidth);
  g.apex_offset = cfg.real("apex_offset", g.apex_offset);
  g.propagation_distance = cfg.real("propagation_distance", g.propagation_distance);
  if (cfg.has("tilt_angle")) g.tilt_angle = cfg.angle("tilt_angle", 0.0);
  g.detector_halfwidth = cfg.real("detector_halfwidth", g.detector_halfwidth);
  g.samples_aperture = cfg.count("samples_aperture", g.samples_aperture);
  g.samples_detector = cfg.count("samples_detector", g.samples_detector);
  g.truncate = cfg.flag("truncate", g.truncate);
  return g;
}

namespace detail {
struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

inline std::vector<Entry> tokenize_key_values(std::string_view text) {
  std::vector<Entry> out;
  int line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++line;
    const auto end = std::min(text.find('\n', start), text.size());
    std::string_view body = text.substr(start, end - start);
    body = body.substr(0, body.find('#'));
    std::size_t i = 0;
    while (i < body.size()) {
      while (i < body.size() && (body[i] == ' ' || body[i] == '\t' || body[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < body.size() && body[j] != ' ' && body[j] != '\t' && body[j] != '\r') ++j;
      if (j > i) {
        const std::string_view token = body.substr(i, j - i);
        const auto eq = token.find('=');
        if (eq == std::string_view::npos || eq == 0) {
          throw ParseError(std::string(token), line, "expected key=value");
        }
        out.push_back({std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)), line});
      }
      i = j;
    }
    start = end + 1;
  }
  return out;
}

inline int line_of_key(std::string_view text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string_view::npos) return 1;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

inline std::vector<Entry> tokenize_json(std::string_view text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", 1, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("", 1, "JSON config must be an object");
  std::vector<Entry> out;
  for (const auto& [key, value] : doc.items()) {
    const int line = line_of_key(text, key);
    auto scalar = [&](const nlohmann::ordered_json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
      if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
      if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
      if (v.is_number_float()) return format_double(v.get<double>());
      throw ParseError(key, line, "unsupported JSON value");
    };
    if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + scalar(v);
      out.push_back({key, joined, line});
    } else {
      out.push_back({key, scalar(value), line});
    }
  }
  return out;
}
}  // namespace detail

/// key=value tokens (whitespace separated, '#' starts a comment) or, when the
/// text starts with '{', a flat JSON object. "bench" is required; every other
/// key must belong to that bench.
inline RunConfig parse_config(std::string_view text) {
  const std::string_view body = detail::trim(text);
  const auto entries = (!body.empty() && body.front() == '{') ? detail::tokenize_json(text)
                                                              : detail::tokenize_key_values(text);
  RunConfig cfg;
  const detail::Entry* bench_entry = nullptr;
  for (const auto& e : entries) {
    if (e.key == "bench") {
      if (bench_entry) throw ParseError("bench", e.line, "duplicate key");
      bench_entry = &e;
    }
  }
  if (!bench_entry) throw ParseError("bench", entries.empty() ? 1 : entries.back().line, "missing required key");
  const auto bench = parse_bench(bench_entry->value);
  if (!bench) throw ParseError("bench", bench_entry->line, "unknown bench '" + bench_entry->value + "'");
  cfg.bench = *bench;

  bool seen_out = false, seen_format = false;
  for (const auto& e : entries) {
    if (e.key == "bench") continue;
    if (e.value.empty()) throw ParseError(e.key, e.line, "empty value");
    if (e.value.find_first_of(" \t\r\n#") != std::string::npos) {
      throw ParseError(e.key, e.line, "value may not contain whitespace or '#'");
    }
    if (e.key == "out") {
      if (seen_out) throw ParseError(e.key, e.line, "duplicate key");
      seen_out = true;
      cfg.output_path = e.value;
      continue;
    }
    if (e.key == "format") {
      if (seen_format) throw ParseError(e.key, e.line, "duplicate key");
      seen_format = true;
      if (e.value != "csv" && e.value != "json") throw ParseError(e.key, e.line, "expected csv or json");
      cfg.format = parse_format(e.value);
      continue;
    }
    const KeySpec* spec = find_key(e.key);
    if (!spec) throw ParseError(e.key, e.line, "unknown key");
    if (std::find(spec->benches.begin(), spec->benches.end(), cfg.bench) == spec->benches.end()) {
      throw ParseError(e.key, e.line, "not a parameter of bench '" + std::string(to_string(cfg.bench)) + "'");
    }
    if (const auto why = detail::check_value(*spec, e.value); !why.empty()) throw ParseError(e.key, e.line, why);
    if (!cfg.parameters.emplace(e.key, e.value).second) throw ParseError(e.key, e.line, "duplicate key");
  }

  if (cfg.bench == Bench::Wedge || cfg.bench == Bench::Diffmap || cfg.bench == Bench::Audit) {
    try {
      geometry(cfg).validate();
    } catch (const InvalidArgument& e) {
      throw ParseError("geometry", bench_entry->line, e.what());
    }
  }
  return cfg;
}

/// key=value text that parse_config maps back to an equal RunConfig.
inline std::string serialize(const RunConfig& cfg) {
  std::string out = "bench=" + std::string(to_string(cfg.bench)) + "\n";
  for (const auto& [k, v] : cfg.parameters) out += k + "=" + v + "\n";
  if (!cfg.output_path.empty()) out += "out=" + cfg.output_path + "\n";
  out += "format=" + std::string(to_string(cfg.format)) + "\n";
  return out;
}

}  // namespace nosignal
