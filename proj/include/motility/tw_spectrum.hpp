#pragma once
// Linearization A(V) around a traveling wave, its near-zero spectrum, the
// structural kernel (shifts, branch derivative, rotation), the small
// eigenvalue λ(V), and the adjoint constants of the small-V expansion.
//
// Unknowns: angular modal coefficients of m on the interior rings (the boundary
// ring is eliminated through the myosin Neumann closure) followed by the modal
// coefficients of the normal boundary displacement ρ. The potential φ is
// eliminated by a dense solve of Δφ + m = ζφ with the linearized Young–Laplace
// data on the boundary.

#include "motility/traveling_wave.hpp"

#include <complex>
#include <string>
#include <vector>

namespace motility {

enum class Subspace { Even, Full };
const char* to_string(Subspace s);

struct LinearizedOperator {
  TravelingWave tw;
  Subspace subspace = Subspace::Even;
  Eigen::MatrixXd matrix;
  Eigen::MatrixXd pairing;       // Gram matrix of ∫_Ω m m̃ + ∮ ρ ρ̃ ds on the unknowns
  Eigen::MatrixXd to_m_nodes;    // unknowns -> m at every grid node (boundary ring reconstructed)
  Eigen::MatrixXd to_phi_nodes;  // unknowns -> eliminated potential φ at every node
  int n_m = 0;                   // number of m unknowns
  int n_rho = 0;                 // number of ρ unknowns

  int size() const { return static_cast<int>(matrix.rows()); }
  // Unknown vector of a pair given by nodal m (all nodes) and boundary ρ (ring 0).
  Eigen::VectorXd from_fields(const Eigen::VectorXd& m_nodes, const Eigen::VectorXd& rho_boundary) const;
  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(pairing * b); }
  double norm(const Eigen::VectorXd& a) const { return std::sqrt(inner(a, a)); }
  // Adjoint under the pairing: A* = P⁻¹ Aᵀ P.
  Eigen::MatrixXd adjoint() const;
};

LinearizedOperator assemble_A(const TravelingWave& tw, Subspace subspace);

struct KernelVectors {
  Eigen::VectorXd W1, W2, W3, W4;  // W3/W4 empty in the even subspace; W4 empty at V = 0
  double fd_step = 0.0;
};
// W1 = (−∂_x(Λe^{Φ−Vx}), ν_x); W3 its y-analog; W2 = ∂_V of the branch
// (centered difference with step fd_step, including node and boundary motion);
// W4 = rotation generator divided by V. With `richardson`, the difference
// quotients at fd_step and fd_step/2 are combined to fourth order.
KernelVectors kernel_vectors(const LinearizedOperator& op, double fd_step, bool richardson = false);

struct KernelResiduals {
  double W1 = 0.0;  // ‖A W1‖/‖W1‖
  double W2 = 0.0;  // ‖A W2 − W1‖/‖W2‖
  double W3 = 0.0;  // ‖A W3‖/‖W3‖
  double W4 = 0.0;  // ‖A W4 − W3‖/‖W4‖
  bool has_W2 = false, has_W3 = false, has_W4 = false;
  double fd_step = 0.0;
};
KernelResiduals kernel_residuals(const LinearizedOperator& op, const KernelVectors& w);
KernelResiduals kernel_residuals(const LinearizedOperator& op, double fd_step, bool richardson = false);

// δ = half the smallest |λ| among eigenvalues of A(0) with |λ| > zero_tol.
struct DeltaChoice {
  double delta = 0.0;
  int small_count = 0;  // eigenvalues with |λ| <= zero_tol at V = 0
  double zero_tol = 0.0;
};
DeltaChoice choose_delta(const TravelingWave& radial, Subspace subspace, double zero_tol = 1e-5);

struct AdjointConstants {
  double R0 = 0.0, m0 = 0.0, dE_dM = 0.0;
  double mass_integral = 0.0;      // ∫(Φ_V⁰ − x)²
  double gradient_integral = 0.0;  // ∫|∇(Φ_V⁰ − x)|²
  double k0 = 0.0;                 // m0 dE/dM ∫(Φ_V⁰ − x)²
  double k0_solvability = 0.0;     // k0 from the Fredholm solvability condition
  double A_const = 0.0, B_const = 0.0;
  double bracket_nu2 = 0.0;    // coefficient of Vν_x² (vanishes identically)
  double bracket_const = 0.0;  // coefficient of V (vanishes identically)
  double bracket_const_as_printed = 0.0;  // same coefficient with the printed signs (diagnostic)
};
AdjointConstants adjoint_constants(double R0, const ModelParams& params);

struct AlphaResult {
  double alpha = 0.0;
  double bracket = 0.0;               // from the integrals of Φ_V⁰ − x
  double bracket_via_F_prime = 0.0;   // πζR0 F'(R0)
  bool degenerate = false;
};
AlphaResult alpha_of_lambda_hat(double lambda_hat, double R0, const ModelParams& params);

// −(dE/dM) V M'(V)
double asymptotic_lambda(double V, double dE_dM, double M_prime_V);

struct SpectrumReport {
  double V = 0.0;
  Subspace subspace = Subspace::Even;
  double delta = 0.0;
  std::vector<std::complex<double>> eigenvalues_near_zero;  // |λ| < δ, ascending |λ|
  std::vector<double> structural_overlap;  // cosine of the angle to the structural span, per eigenvalue
  int delta_count = 0;
  int expected_count = 0;
  bool count_ok = false;
  int nonzero_count = 0;  // members with |λ| above the structural floor
  std::complex<double> lambda_V;         // trace of the δ-cluster
  std::complex<double> lambda_V_member;  // the individual nonzero member
  double lambda_asymptotic = 0.0;
  double ratio = 0.0;             // Re λ(V) / lambda_asymptotic
  double lambda_hat_formula = 0.0;  // −dE/dM · M''(0)
  double max_re_outside = 0.0;    // largest Re λ outside the δ-disk
  KernelResiduals kernel;
  AdjointConstants constants;
  AlphaResult alpha;
};

struct SpectrumSettings {
  Subspace subspace = Subspace::Even;
  double zero_tol = 1e-5;     // floor separating structural zeros from λ(V)
  double delta = -1.0;        // <= 0: chosen at V = 0 and frozen
  double fd_step = -1.0;      // <= 0: branch spacing
  bool richardson = true;     // fourth-order branch derivative for W2
};

// One report per branch point (V = 0 included); reports are ordered by V.
std::vector<SpectrumReport> lambda_of_V(const Branch& branch, const SpectrumSettings& settings = {});

struct AdjointScaling {
  std::vector<double> V;
  std::vector<double> norm;            // ‖W‖ of the solution of A* W = W1*
  std::vector<double> limit_ratio;     // ‖W‖ V |k0| / ‖Φ_V⁰ − x‖
  std::vector<double> W1star_residual; // ‖A* W1*‖ / (‖A*‖₂ ‖W1*‖)
  std::vector<double> solvability;     // border multiplier (0 when A* W = W1* is consistent)
  double slope = 0.0;                  // log-log slope of norm vs V
};
// Even subspace; uses the branch points with V > 0.
AdjointScaling adjoint_scaling_check(const Branch& branch);

// Exports
std::string spectrum_report_json(const SpectrumReport& r);
void write_spectrum_csv(const std::vector<SpectrumReport>& reports, const std::string& path);

}  // namespace motility
