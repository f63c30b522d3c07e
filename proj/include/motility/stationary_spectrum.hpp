#pragma once
// Fourier-mode discretization of the linearization around a radial stationary
// state, its spectra, and the movability eigenvalue E(R) by two routes.

#include "motility/model.hpp"
#include "motility/numerics.hpp"

#include <complex>
#include <string>
#include <vector>

namespace motility {

// One cos(nφ) block acting on (m̂ at the interior radial nodes, ρ̂). The
// boundary value m̂(R) is eliminated through the Neumann condition and φ̂ through
// a Helmholtz solve.
struct ModeOperator {
  int n = 0;
  double R = 0.0;
  CollocationGrid grid;
  Eigen::MatrixXd matrix;  // size n_radial + 1; last index is ρ̂

  int n_radial() const { return static_cast<int>(matrix.rows()) - 1; }
  // Known structural kernel vector of the block (n = 0, 1), empty otherwise.
  Eigen::VectorXd structural_kernel(const RadialState& state, const ModelParams& params) const;
};

ModeOperator assemble_mode(const RadialState& state, const ModelParams& params, int n, int n_radial);

struct EigReport {
  int n = 0;
  std::vector<std::complex<double>> eigenvalues;   // sorted by descending real part
  std::vector<double> structural_zero_residuals;   // ||A v|| / (||A|| ||v||)
  double E_value = 0.0;                            // n = 1 only
  double max_re_nonzero = 0.0;                     // max Re over non-structural eigenvalues
};

// Spectrum of one mode. Known structural kernel vectors are deflated exactly by
// an orthogonal similarity before the dense eigensolve.
EigReport mode_spectrum(const ModeOperator& op, const RadialState& state, const ModelParams& params);

struct MovabilityResult {
  double E = 0.0;
  // Projection-based identification of the structural zero on the full block.
  double structural_eigenvalue = 0.0;
  double structural_overlap = 0.0;
  bool ambiguous = false;
  std::vector<std::complex<double>> candidates;  // reported when ambiguous
};

MovabilityResult movability_E_operator_detail(const RadialState& state, const ModelParams& params, int n_radial);
double movability_E_operator(const RadialState& state, const ModelParams& params, int n_radial);

// −min of E_ζ(m)/∫m² over m = m̂(r)cosφ (Galerkin, n_basis functions).
double movability_E_rayleigh(const RadialState& state, const ModelParams& params, int n_basis);

// E_ζ(m)/∫m² for a given radial profile m̂ (L2-projected onto the Galerkin space).
double rayleigh_quotient(const RadialState& state, const ModelParams& params,
                         const std::function<double(double)>& m_hat, int n_basis);

struct StabilityReport {
  bool applicable = true;       // stability hypotheses hold
  std::string note;
  int zero_multiplicity = 0;    // eigenvalues with |λ| ≤ zero_tol over all modes
  double zero_tol = 1e-5;
  double E = 0.0;
  double max_re_nonzero = 0.0;  // excluding zeros and E
  bool stable_apart_from_E = false;
  double spectral_gap = 0.0;    // −max_re_nonzero
  double truncated_mode_bound = 0.0;  // max Re λ of the n_modes-th block
  std::vector<EigReport> modes;
};

StabilityReport verify_disk_stability(const RadialState& state, const ModelParams& params, int n_modes,
                                      int n_radial, double zero_tol = 1e-5);

struct SweepRow {
  double R, E_operator, E_rayleigh, max_re_nonzero;
  int zero_multiplicity;
};

std::vector<SweepRow> sweep_E(const ModelParams& params, const std::vector<double>& radii, int n_modes,
                              int n_radial);

}  // namespace motility
