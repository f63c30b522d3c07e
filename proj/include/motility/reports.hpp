#pragma once
// Report exports used by the command-line driver. JSON output is pretty-printed
// with snake_case keys and every floating-point value at 17 significant
// digits; CSV output uses the same number formatting.

#include "motility/bifurcation.hpp"
#include "motility/stationary_spectrum.hpp"
#include "motility/tw_spectrum.hpp"

#include <string>
#include <vector>

namespace motility {

// RadialState and HypothesisReport of the radial state of radius R.
std::string stationary_json(const ModelParams& params, const RadialState& state, const HypothesisReport& h);

std::string bifurcation_report_json(const BifurcationReport& b);

// Scalar summary of one traveling wave (V, M, Lambda, area, boundary modes, solver stats).
std::string wave_summary_json(const TravelingWave& tw);

// Spectrum along a branch: one report per V plus the adjoint scaling summary.
std::string spectrum_branch_json(const std::vector<SpectrumReport>& reports, const AdjointScaling& scaling);

// Columns R, E_operator, E_rayleigh, max_re_nonzero, zero_multiplicity.
void write_sweep_e_csv(const std::vector<SweepRow>& rows, const std::string& path);

struct BifurcationSweepRow {
  double R, F, E, M, dM_dR;
};
std::vector<BifurcationSweepRow> bifurcation_sweep(const ModelParams& params, const std::vector<double>& radii,
                                                   int n_radial);
// Columns R, F, E, M, dM_dR.
void write_bifurcation_sweep_csv(const std::vector<BifurcationSweepRow>& rows, const std::string& path);

}  // namespace motility
