#pragma once
// Run configuration: a flat key = value text file (TOML subset: numbers,
// quoted or bare strings, '#' comments). Unknown keys, malformed values and
// inconsistent parameter styles are errors raised before any computation.

#include "motility/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace motility {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // Model parameters. Either raw (zeta, gamma, k_e, p_h, area_ref; R optional)
  // or calibrated (zeta, gamma, k_e, target_m0, R with area_ref = πR²).
  std::optional<double> zeta, gamma, k_e, p_h, area_ref, target_m0, R;

  // Numerical controls (defaults documented in the README).
  int n_radial = 48;          // radial collocation nodes of the stationary mode operators
  int n_modes = 8;            // Fourier blocks 0..n_modes−1 in the stability check
  double zero_tol = 1e-5;     // |λ| below which an eigenvalue counts as a structural zero
  double newton_tol = 1e-10;  // traveling-wave Newton tolerance
  int max_iter = 30;          // traveling-wave Newton iteration cap
  double fd_step = 1e-4;      // relative step (× R) for the F′/E′ difference checks
  double w2_step = -1.0;      // branch-derivative step; <= 0 uses the branch spacing
  double delta = -1.0;        // delta_policy: <= 0 ("auto") picks half the gap at V = 0
  int n_s = 16;               // traveling-wave radial nodes
  int n_theta = 32;           // traveling-wave angular nodes (even)
  std::string subspace = "even";  // spectrum subspace: even | full

  // Ranges.
  double r_min = 2.0, r_max = 6.0;  // sweep-e / bifurcate sweep
  int r_points = 20;
  double v = 0.2;        // single-velocity runs
  double v_max = 0.3;    // branch end
  int steps = 16;        // continuation steps from V = 0

  // Output paths (empty JSON path = standard output).
  std::string out_shape = "shape.csv";
  std::string out_myosin = "myosin.csv";
  std::string out_branch = "branch.csv";
  std::string out_csv;
  std::string out_json;

  // Sets one key from its textual value; throws ConfigError.
  void set(const std::string& key, const std::string& value);

  // Resolved model parameters; throws ConfigError when the parameter style is
  // incomplete/mixed or the values violate positivity.
  ModelParams params() const;
  // Radius of the stationary state / continuation hint (R, else sqrt(area_ref/π)).
  double radius() const;
  // Checks the numerical controls; throws ConfigError.
  void validate() const;
};

RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

}  // namespace motility
