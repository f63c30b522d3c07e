// Command-line driver: stationary | sweep-e | bifurcate | tw | branch | spectrum.
// Exit codes: 0 success, 1 usage/config error, 2 numerical failure.

#include "motility/bifurcation.hpp"
#include "motility/config.hpp"
#include "motility/io.hpp"
#include "motility/numerics.hpp"
#include "motility/reports.hpp"
#include "motility/stationary_spectrum.hpp"
#include "motility/traveling_wave.hpp"
#include "motility/tw_spectrum.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace motility;

namespace {

constexpr int kOk = 0, kUsage = 1, kNumerical = 2;

// Flags that override configuration keys, as (flag name, config key, help).
struct Override {
  const char* flag;
  const char* key;
  const char* help;
};

const std::vector<Override> kOverrides = {
    {"--v", "v", "traveling-wave velocity"},
    {"--v-max", "v_max", "branch end velocity"},
    {"--steps", "steps", "continuation steps from V = 0"},
    {"--subspace", "subspace", "spectrum subspace: even | full"},
    {"--r-min", "r_min", "sweep start radius"},
    {"--r-max", "r_max", "sweep end radius"},
    {"--r-points", "r_points", "sweep point count"},
    {"--n-radial", "n_radial", "radial collocation nodes (stationary)"},
    {"--n-modes", "n_modes", "Fourier blocks in the stability check"},
    {"--n-s", "n_s", "traveling-wave radial nodes"},
    {"--n-theta", "n_theta", "traveling-wave angular nodes"},
    {"--out-shape", "out_shape", "shape CSV path"},
    {"--out-myosin", "out_myosin", "myosin CSV path"},
    {"--out-branch", "out_branch", "branch CSV path"},
    {"--out-csv", "out_csv", "CSV path (sweeps, spectrum table)"},
    {"--out-json", "out_json", "JSON path (default: standard output)"},
};

struct Invocation {
  std::string config_path;
  std::vector<std::string> sets;          // key=value overrides
  std::map<std::string, std::string> flags;  // config key -> flag value
};

void add_common(CLI::App* sub, Invocation& inv, const std::vector<std::string>& allowed) {
  sub->add_option("--config", inv.config_path, "configuration file (key = value)")->required();
  sub->add_option("--set", inv.sets, "override a config key: key=value (repeatable)");
  for (const auto& o : kOverrides) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == o.key;
    if (ok) sub->add_option(o.flag, inv.flags[o.key], o.help);
  }
}

void emit_json(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

TwSettings tw_settings(const RunConfig& c) {
  TwSettings s;
  s.n_s = c.n_s;
  s.n_theta = c.n_theta;
  s.newton_tol = c.newton_tol;
  s.max_iter = c.max_iter;
  return s;
}

std::vector<double> radii(const RunConfig& c) {
  std::vector<double> r(c.r_points);
  for (int i = 0; i < c.r_points; ++i) r[i] = c.r_min + (c.r_max - c.r_min) * i / (c.r_points - 1);
  return r;
}

double critical_radius(const RunConfig& c, const ModelParams& p) {
  return find_R0(p, -1.0, -1.0, 0.5, 20.0, 400, c.radius());
}

Branch branch_to(const RunConfig& c, const ModelParams& p, double V) {
  const double R0 = critical_radius(c, p);
  return continue_branch(p, R0, V, c.steps, tw_settings(c));
}

int run(const std::string& cmd, const RunConfig& c, const std::map<std::string, std::string>& given) {
  const ModelParams p = c.params();
  if (cmd == "stationary") {
    const double R = c.radius();
    emit_json(stationary_json(p, radial_state(p, R), check_hypotheses(p, R)), c.out_json);
  } else if (cmd == "sweep-e") {
    write_sweep_e_csv(sweep_E(p, radii(c), c.n_modes, c.n_radial), c.out_csv.empty() ? "sweep_e.csv" : c.out_csv);
  } else if (cmd == "bifurcate") {
    const double R0 = critical_radius(c, p);
    emit_json(bifurcation_report_json(bifurcation_report(p, R0, c.fd_step)), c.out_json);
    if (!c.out_csv.empty()) write_bifurcation_sweep_csv(bifurcation_sweep(p, radii(c), c.n_radial), c.out_csv);
  } else if (cmd == "tw") {
    const TravelingWave tw =
        c.v == 0.0 ? solve_tw(p, critical_radius(c, p), 0.0, nullptr, tw_settings(c)) : branch_to(c, p, c.v).waves.back();
    write_shape_csv(tw, c.out_shape);
    write_myosin_csv(tw, c.out_myosin);
    emit_json(wave_summary_json(tw), c.out_json);
  } else if (cmd == "branch") {
    const Branch br = branch_to(c, p, c.v_max);
    write_branch_csv(br, c.out_branch);
  } else if (cmd == "spectrum") {
    SpectrumSettings s;
    s.subspace = c.subspace == "full" ? Subspace::Full : Subspace::Even;
    s.zero_tol = c.zero_tol;
    s.delta = c.delta;
    s.fd_step = c.w2_step;
    const bool single = given.count("v") > 0;
    const Branch br = branch_to(c, p, single ? c.v : c.v_max);
    const std::vector<SpectrumReport> reports = lambda_of_V(br, s);
    if (single) {
      emit_json(spectrum_report_json(reports.back()), c.out_json);
    } else {
      emit_json(spectrum_branch_json(reports, adjoint_scaling_check(br)), c.out_json);
      if (!c.out_csv.empty()) write_spectrum_csv(reports, c.out_csv);
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial states, bifurcation and traveling waves of the free-boundary cell-motility model"};
  app.require_subcommand(1);
  Invocation inv;
  const std::vector<std::string> all_keys = [] {
    std::vector<std::string> k;
    for (const auto& o : kOverrides) k.push_back(o.key);
    return k;
  }();
  struct Sub {
    const char* name;
    const char* help;
    std::vector<std::string> keys;
  };
  const std::vector<Sub> subs = {
      {"stationary", "radial state and hypothesis report (JSON)", {"out_json"}},
      {"sweep-e", "movability eigenvalue sweep over R (CSV)", {"r_min", "r_max", "r_points", "n_radial", "n_modes", "out_csv"}},
      {"bifurcate", "critical radius and derivative chain (JSON, optional R-sweep CSV)",
       {"r_min", "r_max", "r_points", "n_radial", "out_csv", "out_json"}},
      {"tw", "one traveling wave at --v, continued from V = 0 (shape and myosin CSVs)",
       {"v", "steps", "n_s", "n_theta", "out_shape", "out_myosin", "out_json"}},
      {"branch", "traveling-wave branch up to --v-max (CSV)", {"v_max", "steps", "n_s", "n_theta", "out_branch"}},
      {"spectrum", "near-zero spectrum at --v or along the branch up to --v-max (JSON, optional CSV)",
       {"v", "v_max", "steps", "subspace", "n_s", "n_theta", "out_csv", "out_json"}},
  };
  std::map<std::string, CLI::App*> handles;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, inv, s.keys);
    handles[s.name] = sub;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  std::string cmd;
  for (const auto& [name, h] : handles)
    if (h->parsed()) cmd = name;

  RunConfig cfg;
  std::map<std::string, std::string> given;
  try {
    cfg = load_config(inv.config_path);
    for (const auto& kv : inv.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got: " + kv);
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& o : kOverrides) {
      const CLI::App* h = handles[cmd];
      const auto* opt = h->get_option_no_throw(o.flag);
      if (opt && opt->count() > 0) {
        cfg.set(o.key, inv.flags[o.key]);
        given[o.key] = inv.flags[o.key];
      }
    }
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    return run(cmd, cfg, given);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
