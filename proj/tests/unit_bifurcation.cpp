#include <doctest.h>

#include "motility/bifurcation.hpp"
#include "motility/numerics.hpp"
#include "motility/stationary_spectrum.hpp"
#include "ode_oracle.hpp"

#include <cmath>

using namespace motility;

using motility::testing::OdeOracle;

TEST_CASE("phi_d: boundary values and independent ODE oracle") {
  const double samples[][3] = {{3.6, 0.62, 3.5677}, {2.0, 0.5, 1.0}, {1.0, 0.1, 5.0}, {4.0, 1.0, 2.0},
                               {5.0, 0.3, 0.8}};
  for (const auto& s : samples) {
    const double R = s[0], m0 = s[1], zeta = s[2];
    CHECK(phi_d(0.0, R, m0, zeta) == 0.0);
    CHECK(std::abs(phi_d(R, R, m0, zeta)) <= 1e-13 * R);
    const OdeOracle oracle(R, m0, zeta, 40);
    for (int i = 1; i <= 50; ++i) {
      const double r = R * i / 51.0;
      const double exact = oracle(r), v = phi_d(r, R, m0, zeta);
      CHECK(std::abs(v - exact) <= 1e-8 * std::abs(exact));
    }
  }
}

TEST_CASE("phi_d: residual of the ODE and derivative consistency") {
  const double R = 3.0, m0 = 0.7, zeta = 2.0;
  for (int i = 1; i < 40; ++i) {
    const double r = R * i / 40.0, h = 1e-4;
    const double d1 = phi_d_prime(r, R, m0, zeta);
    const double d1_fd = (phi_d(r + h, R, m0, zeta) - phi_d(r - h, R, m0, zeta)) / (2 * h);
    CHECK(std::abs(d1 - d1_fd) <= 1e-7);
    const double d2 = (phi_d_prime(r + h, R, m0, zeta) - phi_d_prime(r - h, R, m0, zeta)) / (2 * h);
    const double res = d2 + d1 / r - phi_d(r, R, m0, zeta) / (r * r) + (m0 - zeta) * phi_d(r, R, m0, zeta) - m0 * r;
    CHECK(std::abs(res) <= 1e-6);
  }
  CHECK_THROWS_AS(phi_d(1.0, 2.0, 2.0, 1.0), DomainError);
}

TEST_CASE("F_of_R: positivity for small density and boundary identity") {
  // nearly zero density: F ≈ ζ I1/(ζ^{3/2} I1') > 0
  const ModelParams p = ModelParams::calibrated(2.0, 1.0, 0.0, 1e-9, 2.0);
  CHECK(F_of_R(2.0, p) > 0.0);
  const ModelParams q = fig1_params();
  for (double R : {3.0, 3.3, 3.6, 3.8}) {
    CHECK(std::abs(phi_v0_tilde(R, R, q) - F_of_R(R, q)) <= 1e-12 * std::max(1.0, std::abs(F_of_R(R, q))));
  }
}

TEST_CASE("F_of_R: boundary value of the Neumann-slope problem solved by collocation") {
  const ModelParams p = fig1_params();
  for (double R : {3.2, 3.6, 3.8}) {
    const double lt = lambda_tilde(p, R);
    const auto g = CollocationGrid::make(R, 40, -1);
    const int n = g.size();
    Eigen::MatrixXd L = g.D2;
    for (int i = 0; i < n; ++i) {
      L.row(i) += g.D1.row(i) / g.r(i);
      L(i, i) -= 1.0 / (g.r(i) * g.r(i)) + (p.zeta - lt);
    }
    Eigen::VectorXd rhs = lt * g.r;
    L.row(0) = g.D1.row(0);
    rhs(0) = 1.0;
    const Eigen::VectorXd sol = L.partialPivLu().solve(rhs);
    CHECK(std::abs(sol(0) - F_of_R(R, p)) <= 1e-8 * std::max(1.0, std::abs(sol(0))));
  }
}

TEST_CASE("F_of_R: domain errors") {
  const ModelParams p = ModelParams::calibrated(0.5, 3.5, 5.0, 0.62, 3.6);
  CHECK_THROWS_AS(F_of_R(3.6, p), DomainError);
}

TEST_CASE("find_R0: reference root, zero co-location and bracket invariance") {
  const ModelParams p = fig1_params();
  const double R0 = find_R0(p);
  CHECK(std::abs(F_of_R(R0, p)) <= 1e-12);
  CHECK(R0 == doctest::Approx(3.6).epsilon(1e-9));
  // zero of F coincides with Φ_D'(R) = 1
  const double m0 = lambda_tilde(p, R0);
  CHECK(std::abs(phi_d_prime(R0, R0, m0, p.zeta) - 1.0) <= 1e-8);
  const double R0b = find_R0(p, 3.5, 3.7);
  const double R0c = find_R0(p, 3.59, 3.61);
  CHECK(std::abs(R0b - R0) <= 1e-10);
  CHECK(std::abs(R0c - R0) <= 1e-10);
  // F and Φ_D'(R) − 1 have opposite signs on both sides of the root
  for (double R : {3.3, 3.5, 3.7, 3.8}) {
    const double lt = lambda_tilde(p, R);
    CHECK((F_of_R(R, p) > 0) == (phi_d_prime(R, R, lt, p.zeta) < 1.0));
  }
  // the scan reports every sign change; the hint selects among them
  const auto roots = all_roots_of_F(p, 0.5, 20.0, 400);
  CHECK(roots.size() >= 1);
  CHECK(std::abs(find_R0(p, -1, -1, 0.5, 20.0, 400, 3.0) - R0) <= 1e-10);
}

TEST_CASE("find_R0: continuity in k_e and missing bifurcation") {
  // Reference area away from the root so that k_e actually enters F(R0).
  ModelParams p = fig1_params();
  p.area_ref *= 1.05;
  p.p_h += 0.25;
  const double R0 = find_R0(p);
  double prev = 1e9;
  for (double dk : {1e-2, 1e-3, 1e-4}) {
    ModelParams q = p;
    q.k_e += dk;
    const double d = std::abs(find_R0(q) - R0);
    CHECK(d > 0.0);
    CHECK(d < prev);
    CHECK(d < 10.0 * dk);
    prev = d;
  }
  CHECK_THROWS_AS(find_R0(p, -1, -1, 2.0, 3.0, 20), NumericalError);
}

TEST_CASE("transversality and derivative chain") {
  const ModelParams p = fig1_params();
  const double R0 = find_R0(p);
  const Transversality t = transversality(R0, p);
  CHECK(t.relative_difference <= 1e-5);
  CHECK(t.F_prime_closed != 0.0);
  const RadialIntegrals I = radial_integrals(R0, p);
  CHECK(I.gradient_integral > 0.0);
  const RadialIntegrals I2 = radial_integrals(R0, p, 128);
  CHECK(std::abs(I2.gradient_integral - I.gradient_integral) <= 1e-10 * I.gradient_integral);
  CHECK(std::abs(I2.mass_integral - I.mass_integral) <= 1e-10 * I.mass_integral);
  const double Ep = E_prime_closed(R0, p);
  CHECK((Ep > 0) != (t.F_prime_closed > 0));
  const BifurcationReport b = bifurcation_report(p, R0);
  CHECK(b.dE_dM == doctest::Approx(Ep / dM_dR(p, R0)).epsilon(1e-12));
  CHECK(b.dE_dM == doctest::Approx(dE_dM_at_R0(R0, p)).epsilon(1e-12));
  CHECK_FALSE(b.degenerate);
}

TEST_CASE("E'(R0) closed form against finite differences of the operator route") {
  const ModelParams p = fig1_params();
  const double R0 = find_R0(p);
  const double Ep = E_prime_closed(R0, p);
  const double h = 0.02;
  const double fd = (movability_E_operator(radial_state(p, R0 + h), p, 48) -
                     movability_E_operator(radial_state(p, R0 - h), p, 48)) /
                    (2 * h);
  CHECK(std::abs(fd - Ep) <= 1e-3 * std::abs(Ep));
}
