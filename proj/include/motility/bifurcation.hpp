#pragma once
// Closed-form radial profiles, the bifurcation function F(R), the critical
// radius R0, transversality and the derivative chain E'(R) -> dE/dM.

#include "motility/model.hpp"

#include <string>
#include <vector>

namespace motility {

// Solution of (1/r)(rΦ')' − Φ/r² + (m0 − ζ)Φ = m0 r, Φ(0) = Φ(R) = 0.
double phi_d(double r, double R, double m0, double zeta);
double phi_d_prime(double r, double R, double m0, double zeta);

// Λ̃(R) = p★(πR²) − γ/R (the radial density at radius R).
double lambda_tilde(const ModelParams& params, double R);

// Neumann-normalized profile: same ODE with density Λ̃(R), Φ(0) = 0, Φ'(R) = 1.
// Its boundary value equals F(R).
double phi_v0_tilde(double r, double R, const ModelParams& params);

double F_of_R(double R, const ModelParams& params);

// Bracketed root of F. With lo/hi unset (<= 0), brackets are found by a sign
// scan over [scan_lo, scan_hi] and the root closest to R_hint is returned
// (R_hint <= 0 selects the reference radius sqrt(area_ref/π)).
// Throws NumericalError("no bifurcation in range").
double find_R0(const ModelParams& params, double lo = -1.0, double hi = -1.0, double scan_lo = 0.5,
               double scan_hi = 20.0, int scan_points = 400, double R_hint = -1.0);

// All sign-change roots of F found by the scan, ascending.
std::vector<double> all_roots_of_F(const ModelParams& params, double scan_lo, double scan_hi, int scan_points);

struct RadialIntegrals {
  double gradient_integral = 0.0;  // π∫((Φ_D'−1)² + (Φ_D−r)²/r²) r dr
  double mass_integral = 0.0;      // π∫(Φ_D − r)² r dr
};
RadialIntegrals radial_integrals(double R, const ModelParams& params, int quad_points = 64);

struct Transversality {
  double F_prime_closed = 0.0;
  double F_prime_numeric = 0.0;
  double relative_difference = 0.0;
};
// Throws NumericalError when the two routes disagree beyond 1e-3 relative.
Transversality transversality(double R0, const ModelParams& params, double fd_step = 1e-4);

// E'(R) from the closed-form identity (valid at roots of F).
double E_prime_closed(double R0, const ModelParams& params);
double dE_dM_at_R0(double R0, const ModelParams& params);

struct BifurcationReport {
  double R0 = 0.0;
  double F_at_R0 = 0.0;
  double F_prime = 0.0;
  double F_prime_numeric = 0.0;
  double E_prime = 0.0;
  double dM_dR = 0.0;
  double dE_dM = 0.0;
  double gradient_integral = 0.0;
  double mass_integral = 0.0;
  double m0 = 0.0;
  double M0 = 0.0;
  bool degenerate = false;
  // margin p★' + (2m0 − γ/R0)/(2πR0²) of the non-degeneracy side condition
  double nondegeneracy_margin = 0.0;
  HypothesisReport hypotheses;
};

BifurcationReport bifurcation_report(const ModelParams& params, double R0, double fd_step = 1e-4);

}  // namespace motility
