#pragma once
// Newton/continuation solver for the traveling-wave free-boundary problem
//   ΔΦ + Λ e^{Φ−Vx} = ζΦ in Ω,  ∂_ν(Φ − Vx) = 0 and ζΦ = p★(|Ω|) − γκ on ∂Ω,
// with the boundary centered (no cos φ component of r(φ) − R0).

#include "motility/disk_map.hpp"
#include "motility/model.hpp"

#include <memory>
#include <string>
#include <vector>

namespace motility {

struct TwSettings {
  int n_s = 16;          // radial nodes
  int n_theta = 32;      // angular nodes (even)
  double newton_tol = 1e-10;
  int max_iter = 30;
  double jac_step = 1e-7;  // finite-difference step for boundary-mode Jacobian columns
};

struct TravelingWave {
  double V = 0.0;
  double Lambda = 0.0;
  double M = 0.0;
  double R0 = 0.0;
  double area = 0.0;
  double residual_norm = 0.0;
  int newton_iters = 0;
  std::vector<double> rho_modes;  // cos-mode coefficients of r(φ) − R0, k = 0..n_theta/2 − 1
  Eigen::VectorXd phi;            // Φ at all mapped-grid nodes
  std::shared_ptr<const DiskGrid> grid;
  ModelParams params;
  TwSettings settings;

  BoundaryCurve curve() const { return {R0, rho_modes}; }
  MappedGeometry geometry() const { return MappedGeometry::make(*grid, curve()); }
};

struct Branch {
  std::vector<TravelingWave> waves;  // ordered by V, first entry V = 0
  ModelParams params;
  double R0 = 0.0;
};

// The radial state at R0 expressed on the mapped grid (the V = 0 wave).
TravelingWave radial_wave(const ModelParams& params, double R0, const TwSettings& settings = {});

// Newton solve at velocity V. Without an initial guess the linear small-V
// profile about the radial state is used.
TravelingWave solve_tw(const ModelParams& params, double R0, double V, const TravelingWave* initial_guess = nullptr,
                       const TwSettings& settings = {});

// Natural-parameter continuation V = 0, V_max/steps, ..., V_max.
Branch continue_branch(const ModelParams& params, double R0, double V_max, int steps, const TwSettings& settings = {});

// Nonlinear residual of a wave (max norm) on its own grid, and re-evaluated
// after spectral interpolation onto a finer grid.
double tw_residual(const TravelingWave& tw);
double tw_residual_refined(const TravelingWave& tw, int n_s, int n_theta);

Eigen::VectorXd myosin_field(const TravelingWave& tw);

struct MassDerivatives {
  std::vector<double> V;
  std::vector<double> M_prime;
  double M_dd0 = 0.0;
  double fit_residual = 0.0;
  double M_prime_at(double v) const;  // interpolated along the branch
};
MassDerivatives mass_derivatives(const Branch& branch);

struct ExpansionCoefficient {
  double value = 0.0;
  double error_estimate = 0.0;
};
struct Expansion {
  ExpansionCoefficient rho_10, rho_12, M_1, rho_11;
  bool converged = true;
};
Expansion extract_expansion(const Branch& branch);

// CSV exports
void write_shape_csv(const TravelingWave& tw, const std::string& path, int samples = 256);
void write_myosin_csv(const TravelingWave& tw, const std::string& path);
void write_branch_csv(const Branch& branch, const std::string& path);

}  // namespace motility
