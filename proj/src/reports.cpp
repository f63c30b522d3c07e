#include "motility/reports.hpp"

#include "json_text.hpp"
#include "motility/io.hpp"
#include "motility/parallel.hpp"

namespace motility {

using nlohmann::ordered_json;

std::string stationary_json(const ModelParams& params, const RadialState& s, const HypothesisReport& h) {
  ordered_json j;
  j["params"] = {{"zeta", params.zeta},
                 {"gamma", params.gamma},
                 {"k_e", params.k_e},
                 {"p_h", params.p_h},
                 {"area_ref", params.area_ref}};
  j["radial_state"] = {{"R", s.R}, {"m0", s.m0}, {"phi0", s.phi0}, {"M", s.M}, {"p_star", s.p_star_val}};
  j["hypotheses"] = {{"R", h.R},
                     {"m0", h.m0},
                     {"a_holds", h.a_holds},
                     {"a_margin", h.a_margin},
                     {"fourth_eig_multiplicity", h.fourth_eig_multiplicity},
                     {"fourth_eig_distinct", h.fourth_eig_distinct},
                     {"b_holds_multiplicity", h.b_holds_multiplicity},
                     {"b_holds_distinct", h.b_holds_distinct},
                     {"p_star_prime", h.p_star_prime},
                     {"c_bound", h.c_bound},
                     {"c_holds", h.c_holds},
                     {"c_margin", h.c_margin},
                     {"dM_dR", h.dM_dR},
                     {"all_hold", h.all_hold()}};
  return detail::json_text(j);
}

std::string bifurcation_report_json(const BifurcationReport& b) {
  ordered_json j;
  j["R0"] = b.R0;
  j["F_at_R0"] = b.F_at_R0;
  j["F_prime"] = b.F_prime;
  j["F_prime_numeric"] = b.F_prime_numeric;
  j["E_prime"] = b.E_prime;
  j["dM_dR"] = b.dM_dR;
  j["dE_dM"] = b.dE_dM;
  j["gradient_integral"] = b.gradient_integral;
  j["mass_integral"] = b.mass_integral;
  j["m0"] = b.m0;
  j["M0"] = b.M0;
  j["degenerate"] = b.degenerate;
  j["nondegeneracy_margin"] = b.nondegeneracy_margin;
  j["hypotheses_hold"] = b.hypotheses.all_hold();
  return detail::json_text(j);
}

std::string wave_summary_json(const TravelingWave& tw) {
  ordered_json j;
  j["V"] = tw.V;
  j["R0"] = tw.R0;
  j["M"] = tw.M;
  j["Lambda"] = tw.Lambda;
  j["area"] = tw.area;
  j["rho_modes"] = tw.rho_modes;
  j["residual"] = tw.residual_norm;
  j["newton_iters"] = tw.newton_iters;
  j["n_s"] = tw.settings.n_s;
  j["n_theta"] = tw.settings.n_theta;
  return detail::json_text(j);
}

std::string spectrum_branch_json(const std::vector<SpectrumReport>& reports, const AdjointScaling& a) {
  ordered_json j;
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(ordered_json::parse(spectrum_report_json(r)));
  j["reports"] = arr;
  j["adjoint_scaling"] = {{"V", a.V},
                          {"norm", a.norm},
                          {"limit_ratio", a.limit_ratio},
                          {"W1star_residual", a.W1star_residual},
                          {"solvability", a.solvability},
                          {"slope", a.slope}};
  return detail::json_text(j);
}

void write_sweep_e_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  CsvWriter out(path, {"R", "E_operator", "E_rayleigh", "max_re_nonzero", "zero_multiplicity"});
  for (const auto& r : rows)
    out.row({r.R, r.E_operator, r.E_rayleigh, r.max_re_nonzero, static_cast<double>(r.zero_multiplicity)});
}

std::vector<BifurcationSweepRow> bifurcation_sweep(const ModelParams& params, const std::vector<double>& radii,
                                                   int n_radial) {
  std::vector<BifurcationSweepRow> rows(radii.size());
  parallel_for(static_cast<int>(radii.size()), [&](int i) {
    const double R = radii[i];
    const RadialState s = radial_state(params, R);
    rows[i] = {R, F_of_R(R, params), movability_E_operator(s, params, n_radial), s.M, dM_dR(params, R)};
  });
  return rows;
}

void write_bifurcation_sweep_csv(const std::vector<BifurcationSweepRow>& rows, const std::string& path) {
  CsvWriter out(path, {"R", "F", "E", "M", "dM_dR"});
  for (const auto& r : rows) out.row({r.R, r.F, r.E, r.M, r.dM_dR});
}

}  // namespace motility
