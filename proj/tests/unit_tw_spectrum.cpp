#include <doctest.h>

#include "motility/bifurcation.hpp"
#include "motility/numerics.hpp"
#include "motility/tw_spectrum.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

using namespace motility;

namespace {

constexpr double kR0 = 3.6;

const Branch& short_branch() {
  static const Branch br = continue_branch(fig1_params(), kR0, 0.15, 8);
  return br;
}

const std::vector<SpectrumReport>& even_reports() {
  static const std::vector<SpectrumReport> r = lambda_of_V(short_branch());
  return r;
}

}  // namespace

TEST_CASE("choose_delta: structural zeros at rest and a clear gap") {
  const TravelingWave rest = solve_tw(fig1_params(), kR0, 0.0);
  const DeltaChoice even = choose_delta(rest, Subspace::Even);
  const DeltaChoice full = choose_delta(rest, Subspace::Full);
  CHECK(even.small_count == 3);
  CHECK(full.small_count == 5);
  CHECK(even.delta == doctest::Approx(full.delta).epsilon(1e-8));
  CHECK(even.delta > 100.0 * even.zero_tol);
  CHECK_THROWS_AS(choose_delta(short_branch().waves[2], Subspace::Even), DomainError);
}

TEST_CASE("kernel vectors: shifts and rotation are exact, branch derivative is second order") {
  const Branch& br = short_branch();
  const LinearizedOperator rest = assemble_A(br.waves.front(), Subspace::Full);
  CHECK(kernel_residuals(rest, 0.01875).W1 <= 1e-8);
  CHECK(kernel_residuals(rest, 0.01875).W3 <= 1e-8);

  const TravelingWave& tw = br.waves[4];  // V = 0.075
  const LinearizedOperator op = assemble_A(tw, Subspace::Full);
  const KernelResiduals r = kernel_residuals(op, 0.01875, true);
  REQUIRE(r.has_W2);
  REQUIRE(r.has_W3);
  REQUIRE(r.has_W4);
  CHECK(r.W1 <= 1e-8);
  CHECK(r.W3 <= 1e-8);
  CHECK(r.W4 <= 1e-8);
  CHECK(r.W2 <= 1e-4);

  const LinearizedOperator even = assemble_A(tw, Subspace::Even);
  const double coarse = kernel_residuals(even, 0.02).W2, fine = kernel_residuals(even, 0.01).W2;
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
  CHECK(kernel_residuals(even, 0.02, true).W2 < fine);
}

TEST_CASE("assemble_A: even and full subspaces give the same small eigenvalue") {
  const Branch& br = short_branch();
  SpectrumSettings full;
  full.subspace = Subspace::Full;
  Branch two;
  two.params = br.params;
  two.R0 = br.R0;
  two.waves = {br.waves[0], br.waves[1], br.waves[2], br.waves[3], br.waves[4], br.waves[5]};
  const auto f = lambda_of_V(two, full);
  const auto& e = even_reports();
  for (std::size_t k = 1; k < f.size(); ++k) {
    CHECK(f[k].delta_count == 5);
    CHECK(f[k].count_ok);
    CHECK(std::abs(f[k].lambda_V.real() - e[k].lambda_V.real()) <= 1e-8 * std::abs(e[k].lambda_V.real()));
  }
}

TEST_CASE("lambda_of_V: one real negative eigenvalue tracking the mass slope") {
  const auto& rs = even_reports();
  REQUIRE(rs.size() == 9);
  double prev_gap = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const SpectrumReport& r = rs[k];
    CHECK(r.count_ok);
    CHECK(r.max_re_outside < 0.0);
    CHECK(std::abs(r.lambda_V_member.imag()) <= 1e-10);
    CHECK(r.kernel.W1 <= 1e-8);
    if (k == 0) {
      CHECK(r.nonzero_count == 0);
      continue;
    }
    CHECK(r.nonzero_count == 1);
    CHECK(r.lambda_V.real() < 0.0);
    CHECK(r.kernel.W2 <= 1e-4);
    const double gap = std::abs(r.ratio - 1.0);
    if (k > 1) CHECK(gap > prev_gap);  // agreement improves as V -> 0
    prev_gap = gap;
  }
  CHECK(std::abs(rs[1].ratio - 1.0) <= 0.01);
  // λ/V² approaches −dE/dM · M''(0)
  const double lh = rs[1].lambda_V.real() / (rs[1].V * rs[1].V);
  CHECK(lh == doctest::Approx(rs[1].lambda_hat_formula).epsilon(0.01));
}

TEST_CASE("adjoint_constants: both cancellation brackets vanish and k0 is consistent") {
  const auto p = fig1_params();
  const AdjointConstants c = adjoint_constants(kR0, p);
  CHECK(std::abs(c.bracket_nu2) <= 1e-10);
  CHECK(std::abs(c.bracket_const) <= 1e-10);
  CHECK(std::abs(c.bracket_const_as_printed) > 0.1);  // the sign-flipped variant does not cancel
  CHECK(c.k0 == doctest::Approx(c.k0_solvability).epsilon(1e-8));
  CHECK(c.k0 == doctest::Approx(1.14493523).epsilon(1e-7));
  CHECK(c.dE_dM > 0.0);
}

TEST_CASE("alpha_of_lambda_hat: quadratic in lambda_hat, bracket matches transversality") {
  const auto p = fig1_params();
  const AlphaResult zero = alpha_of_lambda_hat(0.0, kR0, p);
  CHECK(zero.alpha == 0.0);
  CHECK(!zero.degenerate);
  CHECK(zero.bracket == doctest::Approx(zero.bracket_via_F_prime).epsilon(1e-8));
  const double a1 = alpha_of_lambda_hat(-0.5, kR0, p).alpha, a2 = alpha_of_lambda_hat(-1.0, kR0, p).alpha;
  CHECK(a2 == doctest::Approx(4.0 * a1).epsilon(1e-12));
  CHECK(alpha_of_lambda_hat(0.5, kR0, p).alpha == doctest::Approx(a1).epsilon(1e-12));
}

TEST_CASE("adjoint_scaling_check: the adjoint solve blows up like 1/V with the predicted constant") {
  const AdjointScaling a = adjoint_scaling_check(short_branch());
  REQUIRE(a.V.size() == 8);
  CHECK(std::abs(a.slope + 1.0) <= 0.15);
  CHECK(std::abs(a.limit_ratio.front() - 1.0) <= 0.15);
  for (std::size_t k = 0; k < a.V.size(); ++k) {
    CHECK(std::abs(a.solvability[k]) <= 1e-8);
    CHECK(a.W1star_residual[k] <= 1e-4);
  }
}

TEST_CASE("exports: JSON report and CSV table") {
  const auto& rs = even_reports();
  const auto j = nlohmann::json::parse(spectrum_report_json(rs[3]));
  CHECK(j.at("V").get<double>() == rs[3].V);
  CHECK(j.contains("cancellation_residuals"));
  CHECK(j.at("cancellation_residuals").contains("constant"));
  const std::string path = "unit_tw_spectrum.csv";
  write_spectrum_csv(rs, path);
  std::ifstream in(path);
  std::string head, line;
  std::getline(in, head);
  CHECK(head ==
        "V,re_lambda,im_lambda,lambda_asymptotic,ratio,W1_residual,W2_residual,W3_residual,W4_residual,delta_count");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 9);
  in.close();
  std::remove(path.c_str());
}
