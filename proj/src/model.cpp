#include "motility/model.hpp"

#include "motility/numerics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace motility {

using std::numbers::pi;

void ModelParams::validate() const {
  std::ostringstream os;
  if (!(zeta > 0.0)) os << "zeta must be > 0 (got " << zeta << "); ";
  if (!(gamma > 0.0)) os << "gamma must be > 0 (got " << gamma << "); ";
  if (!(k_e >= 0.0)) os << "k_e must be >= 0 (got " << k_e << "); ";
  if (!(area_ref > 0.0)) os << "area_ref must be > 0 (got " << area_ref << "); ";
  if (!std::isfinite(p_h)) os << "p_h must be finite; ";
  if (!os.str().empty()) throw DomainError("invalid model parameters: " + os.str());
}

ModelParams ModelParams::calibrated(double zeta, double gamma, double k_e, double target_m0, double R) {
  if (!(R > 0.0)) throw DomainError("calibration radius must be positive");
  ModelParams p;
  p.zeta = zeta;
  p.gamma = gamma;
  p.k_e = k_e;
  p.area_ref = pi * R * R;
  p.p_h = target_m0 + gamma / R;
  p.validate();
  return p;
}

double p_star(const ModelParams& params, double area) {
  if (!(area > 0.0)) throw DomainError("p_star: area must be positive");
  return params.p_h - params.k_e * (area - params.area_ref) / params.area_ref;
}

double p_star_prime(const ModelParams& params) { return -params.k_e / params.area_ref; }

RadialState radial_state(const ModelParams& params, double R) {
  params.validate();
  if (!(R > 0.0)) throw DomainError("radial_state: R must be positive");
  RadialState s;
  s.R = R;
  s.p_star_val = p_star(params, pi * R * R);
  s.m0 = s.p_star_val - params.gamma / R;
  if (!(s.m0 > 0.0)) {
    std::ostringstream os;
    os << "radial_state: nonpositive myosin density m0 = " << s.m0 << " at R = " << R
       << " (p_star = " << s.p_star_val << ", gamma/R = " << params.gamma / R << ")";
    throw DomainError(os.str());
  }
  s.phi0 = s.m0 / params.zeta;
  s.M = pi * R * R * s.m0;
  return s;
}

HypothesisReport check_hypotheses(const ModelParams& params, double R) {
  const RadialState s = radial_state(params, R);
  HypothesisReport h;
  h.R = R;
  h.m0 = s.m0;
  h.a_margin = params.zeta - s.m0;
  h.a_holds = h.a_margin >= 0.0;

  const std::vector<double> eig = neumann_laplacian_eigs(R, 12);
  h.fourth_eig_multiplicity = eig[3];
  std::vector<double> distinct;
  for (double e : eig) {
    if (distinct.empty() || e - distinct.back() > 1e-9 * (1.0 + e)) distinct.push_back(e);
  }
  h.fourth_eig_distinct = distinct.at(3);
  h.b_holds_multiplicity = s.m0 < h.fourth_eig_multiplicity;
  h.b_holds_distinct = s.m0 < h.fourth_eig_distinct;

  h.p_star_prime = p_star_prime(params);
  h.c_bound = -(params.gamma / R + 2.0 * s.m0) / (2.0 * pi * R * R);
  h.c_margin = h.c_bound - h.p_star_prime;
  h.c_holds = h.p_star_prime < h.c_bound;
  h.dM_dR = dM_dR(params, R);
  return h;
}

double M_of_R(const ModelParams& params, double R) {
  return pi * R * R * p_star(params, pi * R * R) - pi * params.gamma * R;
}

double dM_dR(const ModelParams& params, double R) {
  return 2.0 * pi * R * p_star(params, pi * R * R) + 2.0 * pi * pi * R * R * R * p_star_prime(params) -
         pi * params.gamma;
}

ModelParams fig1_params() { return ModelParams::calibrated(kFig1Zeta, 3.5, 5.0, 0.62, 3.6); }

}  // namespace motility
