#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "nosignal/nosignal.hpp"

namespace {

using nosignal::Bench;

struct Sub {
  Bench bench;
  CLI::App* app = nullptr;
  std::vector<std::pair<CLI::Option*, std::string>> options;  // option -> config key
  std::vector<std::pair<CLI::Option*, std::string>> flags;
};

struct Shared {
  std::string config_path;
  std::string out;
  std::string format;
  std::vector<std::string> geom;
  std::vector<std::string> values = std::vector<std::string>(64);
  std::size_t next_value = 0;
};

void add_value(Sub& s, Shared& sh, const std::string& flag, const std::string& key, const std::string& help) {
  auto* opt = s.app->add_option(flag, sh.values.at(sh.next_value++), help);
  s.options.emplace_back(opt, key);
}

void add_switch(Sub& s, const std::string& flag, const std::string& key, const std::string& help) {
  s.flags.emplace_back(s.app->add_flag(flag, help), key);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nosignal::IoError(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"No-signal benches for variable-entanglement photon pairs"};
  app.require_subcommand(1);
  Shared sh;
  std::vector<Sub> subs;
  subs.reserve(7);

  auto make = [&](Bench b, const std::string& help) -> Sub& {
    subs.push_back({b, app.add_subcommand(std::string(nosignal::to_string(b)), help), {}, {}});
    Sub& s = subs.back();
    s.app->add_option("--config", sh.config_path, "key=value or JSON config file; flags override it");
    s.app->add_option("--out", sh.out, "output file (default: standard output)");
    s.app->add_option("--format", sh.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    add_value(s, sh, "--workers", "workers", "worker threads (output does not depend on it)");
    return s;
  };
  auto geom = [&](Sub& s) {
    s.app->add_option("--geom", sh.geom, "wedge geometry override key=val (repeatable)");
  };

  {
    Sub& s = make(Bench::Polar, "joint probabilities of the polarization bench");
    add_value(s, sh, "--alpha", "alpha", "source angle (default: 0, pi/8, pi/4)");
    add_value(s, sh, "--theta", "theta", "Alice's analyzer angle (default: sweep over [0, pi])");
    add_value(s, sh, "--grid", "grid", "sweep points");
  }
  {
    Sub& s = make(Bench::Mz, "Bob's singles of the path bench");
    add_value(s, sh, "--alpha", "alpha", "source angle (default: 0, pi/8, pi/4)");
    add_value(s, sh, "--phi-a", "phi_a", "Alice's phase");
    add_value(s, sh, "--phi-b", "phi_b", "Bob's phase (default: sweep over [0, 2pi))");
    add_value(s, sh, "--bs-a", "bs_a", "Alice's final splitter: in, out or stop");
    add_value(s, sh, "--grid", "grid", "sweep points");
    add_switch(s, "--joint", "joint", "include the four coincidence probabilities");
  }
  {
    Sub& s = make(Bench::Wedge, "coincidence densities across Alice's detector behind the wedge");
    add_value(s, sh, "--alpha", "alpha", "source angle");
    add_value(s, sh, "--phi-a", "phi_a", "Alice's phase");
    add_value(s, sh, "--phi-b", "phi_b", "Bob's phase");
    geom(s);
  }
  {
    Sub& s = make(Bench::Sample, "Monte Carlo detection events");
    add_value(s, sh, "--source", "source", "polar or mz");
    add_value(s, sh, "--alpha", "alpha", "source angle");
    add_value(s, sh, "--theta", "theta", "analyzer angle (polar)");
    add_value(s, sh, "--phi-a", "phi_a", "Alice's phase (mz)");
    add_value(s, sh, "--phi-b", "phi_b", "Bob's phase (mz)");
    add_value(s, sh, "--bs-a", "bs_a", "in, out or stop (mz)");
    add_value(s, sh, "--n", "n", "number of pairs");
    add_value(s, sh, "--seed", "seed", "64-bit seed");
  }
  {
    Sub& s = make(Bench::Chsh, "CHSH statistic for the maximally entangled source");
    add_value(s, sh, "--alpha", "alpha", "source angle (only 0 is supported)");
    add_value(s, sh, "--angles", "angles", "a,b,a',b' (default 0,pi/8,pi/4,3pi/8)");
    add_value(s, sh, "--n", "n", "pairs per setting");
    add_value(s, sh, "--seed", "seed", "64-bit seed");
    add_switch(s, "--analytic", "analytic", "closed form instead of sampling");
  }
  {
    Sub& s = make(Bench::Diffmap, "wedge singles minus the single-mode prediction over (alpha, phi_b)");
    add_value(s, sh, "--phi-a", "phi_a", "Alice's phase");
    add_value(s, sh, "--grid", "grid", "points per axis");
    geom(s);
  }
  {
    Sub& s = make(Bench::Audit, "no-signal audit; exit code 2 when any bench fails");
    add_value(s, sh, "--target", "target", "polar, mz, wedge or all");
    add_value(s, sh, "--grid", "grid", "points per axis");
    add_value(s, sh, "--tolerance", "tolerance", "override the default tolerance");
    geom(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const Sub* chosen = nullptr;
    for (const auto& s : subs)
      if (s.app->parsed()) chosen = &s;
    if (!chosen) return 1;

    nosignal::RunConfig cfg;
    if (!sh.config_path.empty()) {
      try {
        cfg = nosignal::parse_config(read_file(sh.config_path));
      } catch (const nosignal::ParseError& e) {
        std::cerr << "error: " << sh.config_path << ": " << e.what() << '\n';
        return 1;
      }
      if (cfg.bench != chosen->bench) {
        throw nosignal::InvalidArgument("config file is for bench '" + std::string(nosignal::to_string(cfg.bench)) +
                                        "', not '" + std::string(nosignal::to_string(chosen->bench)) + "'");
      }
    }
    cfg.bench = chosen->bench;
    for (const auto& [opt, key] : chosen->options)
      if (opt->count() > 0) cfg.parameters[key] = opt->as<std::string>();
    for (const auto& [opt, key] : chosen->flags)
      if (opt->count() > 0) cfg.parameters[key] = "true";
    for (const auto& kv : sh.geom) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw nosignal::InvalidArgument("--geom expects key=val, got '" + kv + "'");
      cfg.parameters[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (!sh.out.empty()) cfg.output_path = sh.out;
    if (!sh.format.empty()) cfg.format = nosignal::parse_format(sh.format);

    // flags go through the same validation as config files
    cfg = nosignal::parse_config(nosignal::serialize(cfg));

    const auto result = nosignal::run(cfg);
    for (const auto& note : result.notes) std::cerr << note << '\n';
    if (cfg.output_path.empty()) {
      std::cout << nosignal::render(result.table, cfg.format);
    } else {
      nosignal::emit_table(result.table, cfg.format, cfg.output_path);
    }
    if (cfg.bench == Bench::Audit) {
      std::cerr << (result.exit_code == 0 ? "no-signal audit: pass" : "no-signal audit: FAIL") << '\n';
    }
    return result.exit_code;
  } catch (const nosignal::ParseError& e) {
    std::cerr << "error: '" << e.key() << "': " << e.reason() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
