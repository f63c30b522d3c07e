#include "motility/bifurcation.hpp"

#include "motility/numerics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace motility {

using std::numbers::pi;

namespace {

void require_zeta_above(double m0, double zeta, const char* who) {
  if (!(m0 > 0.0) || !(zeta > m0)) {
    std::ostringstream os;
    os << who << ": requires 0 < density < zeta (density = " << m0 << ", zeta = " << zeta << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

double phi_d(double r, double R, double m0, double zeta) {
  require_zeta_above(m0, zeta, "phi_d");
  if (r < 0.0 || r > R * (1.0 + 1e-14)) throw DomainError("phi_d: r outside [0, R]");
  const double s = std::sqrt(zeta - m0);
  const double C = m0 * R / ((zeta - m0) * bessel_i(1, s * R));
  return -m0 * r / (zeta - m0) + C * bessel_i(1, s * r);
}

double phi_d_prime(double r, double R, double m0, double zeta) {
  require_zeta_above(m0, zeta, "phi_d_prime");
  if (r < 0.0 || r > R * (1.0 + 1e-14)) throw DomainError("phi_d_prime: r outside [0, R]");
  const double s = std::sqrt(zeta - m0);
  const double C = m0 * R / ((zeta - m0) * bessel_i(1, s * R));
  return -m0 / (zeta - m0) + C * s * bessel_i(1, s * r, true);
}

double lambda_tilde(const ModelParams& params, double R) {
  return p_star(params, pi * R * R) - params.gamma / R;
}

double phi_v0_tilde(double r, double R, const ModelParams& params) {
  const double lt = lambda_tilde(params, R);
  require_zeta_above(lt, params.zeta, "phi_v0_tilde");
  const double s2 = params.zeta - lt, s = std::sqrt(s2);
  return -lt * r / s2 + params.zeta * bessel_i(1, s * r) / (s2 * s * bessel_i(1, s * R, true));
}

double F_of_R(double R, const ModelParams& params) {
  const double lt = lambda_tilde(params, R);
  require_zeta_above(lt, params.zeta, "F_of_R");
  const double d = params.zeta - lt, s = std::sqrt(d);
  return params.zeta * bessel_i(1, R * s) / (d * s * bessel_i(1, R * s, true)) - R * lt / d;
}

namespace {

// Hybrid bisection / Illinois false position on a sign-changing bracket.
double bracketed_root(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa < 0) == (fb < 0)) throw NumericalError("bracketed_root: no sign change on bracket");
  int side = 0;
  for (int it = 0; it < 300; ++it) {
    double c = (a * fb - b * fa) / (fb - fa);
    const double width = b - a;
    // fall back to bisection when the secant point hugs an endpoint
    if (!(c > a + 0.01 * width && c < b - 0.01 * width)) c = 0.5 * (a + b);
    const double fc = f(c);
    if (std::abs(fc) <= 1e-13 || width <= 1e-15 * std::abs(c)) return c;
    if ((fc < 0) == (fa < 0)) {
      a = c;
      fa = fc;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = c;
      fb = fc;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> all_roots_of_F(const ModelParams& params, double scan_lo, double scan_hi, int scan_points) {
  auto F = [&](double R) { return F_of_R(R, params); };
  std::vector<double> roots;
  double prev_R = 0.0, prev_F = 0.0;
  bool have_prev = false;
  for (int i = 0; i <= scan_points; ++i) {
    const double R = scan_lo + (scan_hi - scan_lo) * i / scan_points;
    double f;
    try {
      f = F(R);
    } catch (const DomainError&) {
      have_prev = false;
      continue;
    }
    if (have_prev && (f < 0) != (prev_F < 0)) roots.push_back(bracketed_root(F, prev_R, R));
    prev_R = R;
    prev_F = f;
    have_prev = true;
  }
  return roots;
}

double find_R0(const ModelParams& params, double lo, double hi, double scan_lo, double scan_hi, int scan_points,
               double R_hint) {
  auto F = [&](double R) { return F_of_R(R, params); };
  if (lo > 0.0 && hi > lo) return bracketed_root(F, lo, hi);
  const std::vector<double> roots = all_roots_of_F(params, scan_lo, scan_hi, scan_points);
  if (roots.empty()) {
    std::ostringstream os;
    os << "no bifurcation in range [" << scan_lo << ", " << scan_hi << "]";
    throw NumericalError(os.str());
  }
  const double hint = R_hint > 0.0 ? R_hint : std::sqrt(params.area_ref / pi);
  double best = roots.front();
  for (double r : roots)
    if (std::abs(r - hint) < std::abs(best - hint)) best = r;
  return best;
}

RadialIntegrals radial_integrals(double R, const ModelParams& params, int quad_points) {
  const double m0 = lambda_tilde(params, R), zeta = params.zeta;
  const QuadratureRule q = gauss_legendre(quad_points, 0.0, R);
  RadialIntegrals out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double r = q.nodes[i];
    const double f = phi_d(r, R, m0, zeta) - r;
    const double df = phi_d_prime(r, R, m0, zeta) - 1.0;
    out.gradient_integral += pi * q.weights[i] * (df * df + f * f / (r * r)) * r;
    out.mass_integral += pi * q.weights[i] * f * f * r;
  }
  return out;
}

Transversality transversality(double R0, const ModelParams& params, double fd_step) {
  const double lt = lambda_tilde(params, R0), zeta = params.zeta, gamma = params.gamma;
  const double G = radial_integrals(R0, params).gradient_integral;
  Transversality t;
  t.F_prime_closed = (pi * R0 * (zeta + lt - lt * lt * R0 * R0) -
                      (gamma / (R0 * R0) + 2.0 * pi * R0 * p_star_prime(params)) * G) /
                     (pi * zeta * R0);
  // Richardson-extrapolated centered difference
  const double h = fd_step * R0;
  auto cd = [&](double hh) { return (F_of_R(R0 + hh, params) - F_of_R(R0 - hh, params)) / (2.0 * hh); };
  t.F_prime_numeric = (4.0 * cd(0.5 * h) - cd(h)) / 3.0;
  t.relative_difference = std::abs(t.F_prime_closed - t.F_prime_numeric) / std::abs(t.F_prime_numeric);
  if (t.relative_difference > 1e-3) {
    std::ostringstream os;
    os << "transversality: closed-form F' = " << t.F_prime_closed << " disagrees with numeric F' = "
       << t.F_prime_numeric;
    throw NumericalError(os.str());
  }
  return t;
}

double E_prime_closed(double R0, const ModelParams& params) {
  const Transversality t = transversality(R0, params);
  const double lt = lambda_tilde(params, R0);
  const double mass = radial_integrals(R0, params).mass_integral;
  return -pi * params.zeta * R0 * t.F_prime_closed / (lt * mass);
}

double dE_dM_at_R0(double R0, const ModelParams& params) {
  const double dM = dM_dR(params, R0);
  if (dM == 0.0) throw NumericalError("dE_dM_at_R0: M'(R0) = 0, reparametrization by M is degenerate");
  return E_prime_closed(R0, params) / dM;
}

BifurcationReport bifurcation_report(const ModelParams& params, double R0, double fd_step) {
  BifurcationReport b;
  b.R0 = R0;
  b.F_at_R0 = F_of_R(R0, params);
  const Transversality t = transversality(R0, params, fd_step);
  b.F_prime = t.F_prime_closed;
  b.F_prime_numeric = t.F_prime_numeric;
  const RadialIntegrals I = radial_integrals(R0, params);
  b.gradient_integral = I.gradient_integral;
  b.mass_integral = I.mass_integral;
  const RadialState s = radial_state(params, R0);
  b.m0 = s.m0;
  b.M0 = s.M;
  b.E_prime = -pi * params.zeta * R0 * b.F_prime / (s.m0 * I.mass_integral);
  b.dM_dR = dM_dR(params, R0);
  b.degenerate = b.F_prime == 0.0 || b.dM_dR == 0.0;
  b.dE_dM = b.dM_dR != 0.0 ? b.E_prime / b.dM_dR : std::nan("");
  b.nondegeneracy_margin =
      p_star_prime(params) + (2.0 * s.m0 - params.gamma / R0) / (2.0 * pi * R0 * R0);
  b.hypotheses = check_hypotheses(params, R0);
  return b;
}

}  // namespace motility
