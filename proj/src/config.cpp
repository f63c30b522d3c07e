#include "motility/config.hpp"

#include "motility/numerics.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <functional>
#include <numbers>
#include <sstream>

namespace motility {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
    throw ConfigError("invalid number for '" + key + "': " + v);
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("invalid integer for '" + key + "': " + v);
  return static_cast<int>(x);
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

// Removes a trailing '#' comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = unquote(trim(raw));
  using Setter = std::function<void()>;
  const std::map<std::string, Setter> table = {
      {"zeta", [&] { zeta = to_double(key, v); }},
      {"gamma", [&] { gamma = to_double(key, v); }},
      {"k_e", [&] { k_e = to_double(key, v); }},
      {"p_h", [&] { p_h = to_double(key, v); }},
      {"area_ref", [&] { area_ref = to_double(key, v); }},
      {"target_m0", [&] { target_m0 = to_double(key, v); }},
      {"R", [&] { R = to_double(key, v); }},
      {"n_radial", [&] { n_radial = to_int(key, v); }},
      {"n_modes", [&] { n_modes = to_int(key, v); }},
      {"zero_tol", [&] { zero_tol = to_double(key, v); }},
      {"newton_tol", [&] { newton_tol = to_double(key, v); }},
      {"max_iter", [&] { max_iter = to_int(key, v); }},
      {"fd_step", [&] { fd_step = to_double(key, v); }},
      {"w2_step", [&] { w2_step = v == "auto" ? -1.0 : to_double(key, v); }},
      {"delta_policy", [&] { delta = v == "auto" ? -1.0 : to_double(key, v); }},
      {"n_s", [&] { n_s = to_int(key, v); }},
      {"n_theta", [&] { n_theta = to_int(key, v); }},
      {"subspace",
       [&] {
         if (v != "even" && v != "full") throw ConfigError("subspace must be 'even' or 'full', got: " + v);
         subspace = v;
       }},
      {"r_min", [&] { r_min = to_double(key, v); }},
      {"r_max", [&] { r_max = to_double(key, v); }},
      {"r_points", [&] { r_points = to_int(key, v); }},
      {"v", [&] { this->v = to_double(key, v); }},
      {"v_max", [&] { v_max = to_double(key, v); }},
      {"steps", [&] { steps = to_int(key, v); }},
      {"out_shape", [&] { out_shape = v; }},
      {"out_myosin", [&] { out_myosin = v; }},
      {"out_branch", [&] { out_branch = v; }},
      {"out_csv", [&] { out_csv = v; }},
      {"out_json", [&] { out_json = v; }},
  };
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key: " + key);
  it->second();
}

ModelParams RunConfig::params() const {
  if (!zeta || !gamma || !k_e) throw ConfigError("config must set zeta, gamma and k_e");
  try {
    if (target_m0) {
      if (p_h || area_ref) throw ConfigError("calibrated entry (target_m0, R) excludes p_h and area_ref");
      if (!R) throw ConfigError("calibrated entry requires R");
      return ModelParams::calibrated(*zeta, *gamma, *k_e, *target_m0, *R);
    }
    if (!p_h || !area_ref) throw ConfigError("raw entry requires p_h and area_ref (or use target_m0 and R)");
    ModelParams p;
    p.zeta = *zeta;
    p.gamma = *gamma;
    p.k_e = *k_e;
    p.p_h = *p_h;
    p.area_ref = *area_ref;
    p.validate();
    return p;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid model parameters: ") + e.what());
  }
}

double RunConfig::radius() const {
  if (R) return *R;
  if (area_ref) return std::sqrt(*area_ref / std::numbers::pi);
  throw ConfigError("config must set R or area_ref");
}

void RunConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  (void)params();
  need(radius() > 0.0, "R must be positive");
  need(n_radial >= 4, "n_radial must be >= 4");
  need(n_modes >= 2, "n_modes must be >= 2");
  need(zero_tol > 0.0, "zero_tol must be positive");
  need(newton_tol > 0.0, "newton_tol must be positive");
  need(max_iter >= 1, "max_iter must be >= 1");
  need(fd_step > 0.0 && fd_step < 0.1, "fd_step must lie in (0, 0.1)");
  need(n_s >= 4, "n_s must be >= 4");
  need(n_theta >= 8 && n_theta % 2 == 0, "n_theta must be even and >= 8");
  need(r_min > 0.0 && r_max > r_min, "need 0 < r_min < r_max");
  need(r_points >= 2, "r_points must be >= 2");
  need(steps >= 1, "steps must be >= 1");
  need(v_max > 0.0, "v_max must be positive");
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    try {
      cfg.set(key, s.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace motility
