#include <doctest.h>

#include "motility/bifurcation.hpp"
#include "motility/stationary_spectrum.hpp"

#include <cmath>
#include <numbers>

using namespace motility;
using std::numbers::pi;

TEST_CASE("assemble_mode: structural kernel vectors") {
  const ModelParams p = fig1_params();
  const RadialState s = radial_state(p, 3.4);
  const ModeOperator op1 = assemble_mode(s, p, 1, 48);
  CHECK(op1.matrix.rows() == 49);
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(49);
  shift(48) = 1.0;
  CHECK((op1.matrix * shift).norm() <= 1e-12);
  const ModeOperator op0 = assemble_mode(s, p, 0, 48);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(49, 2 * pi * s.R * p_star_prime(p) + p.gamma / (s.R * s.R));
  v(48) = 1.0;
  CHECK((op0.matrix * v).norm() <= 1e-6 * v.norm());
  CHECK_THROWS_AS(assemble_mode(s, p, 1, 8), DomainError);
}

TEST_CASE("mode_spectrum: n = 1 zero, n = 2 stable, conjugation closure") {
  const ModelParams p = fig1_params();
  const RadialState s = radial_state(p, 3.6);
  const EigReport r1 = mode_spectrum(assemble_mode(s, p, 1, 48), s, p);
  double closest = 1e9;
  for (auto l : r1.eigenvalues) closest = std::min(closest, std::abs(l));
  CHECK(closest <= 1e-6);
  const EigReport r2 = mode_spectrum(assemble_mode(s, p, 2, 48), s, p);
  CHECK(r2.eigenvalues.front().real() < 0.0);
  for (const EigReport* r : {&r1, &r2}) {
    for (auto l : r->eigenvalues) {
      if (std::abs(l.imag()) < 1e-12) continue;
      bool found = false;
      for (auto q : r->eigenvalues) found = found || std::abs(q - std::conj(l)) <= 1e-8 * std::max(1.0, std::abs(l));
      CHECK(found);
    }
  }
}

TEST_CASE("mode_spectrum: grid refinement of eigenvalues with |λ| <= 10") {
  const ModelParams p = fig1_params();
  const RadialState s = radial_state(p, 3.4);
  for (int n : {0, 1, 2, 3}) {
    const EigReport a = mode_spectrum(assemble_mode(s, p, n, 32), s, p);
    const EigReport b = mode_spectrum(assemble_mode(s, p, n, 64), s, p);
    for (auto l : a.eigenvalues) {
      if (std::abs(l) > 10.0) continue;
      double best = 1e9;
      for (auto q : b.eigenvalues) best = std::min(best, std::abs(q - l));
      CHECK(best <= 1e-6);
    }
  }
}

TEST_CASE("movability: zero at R0, sign via Φ_D'(R) − 1, two-route agreement") {
  const ModelParams p = fig1_params();
  const double R0 = find_R0(p);
  const RadialState s0 = radial_state(p, R0);
  CHECK(std::abs(movability_E_operator(s0, p, 64)) <= 1e-5);
  CHECK(std::abs(movability_E_rayleigh(s0, p, 24)) <= 1e-5);
  for (double R : {3.3, 3.5, 3.7, 3.8}) {
    const RadialState s = radial_state(p, R);
    const double Eo = movability_E_operator(s, p, 64);
    const double Er = movability_E_rayleigh(s, p, 24);
    CHECK(std::abs(Eo - Er) <= 1e-6);
    const double dphi = phi_d_prime(R, R, s.m0, p.zeta) - 1.0;
    CHECK((Eo > 0) == (dphi > 0));
  }
}

TEST_CASE("movability: structural-zero identification by projection") {
  const ModelParams p = fig1_params();
  const MovabilityResult away = movability_E_operator_detail(radial_state(p, 3.3), p, 48);
  CHECK_FALSE(away.ambiguous);
  CHECK(std::abs(away.structural_eigenvalue) <= 1e-8);
  CHECK(away.structural_overlap > 0.999);
}

TEST_CASE("movability_E_rayleigh: test vector, monotonicity in ζ, refinement") {
  const ModelParams p = fig1_params();
  const double R0 = find_R0(p);
  const RadialState s = radial_state(p, R0);
  const double q = rayleigh_quotient(
      s, p, [&](double r) { return s.m0 * (phi_d(r, R0, s.m0, p.zeta) - r); }, 24);
  CHECK(std::abs(q) <= 1e-6);
  // E decreases with ζ at fixed (R, m0)
  double prev = 1e9;
  for (double zeta : {3.0, 3.5, 4.0, 5.0}) {
    ModelParams pz = ModelParams::calibrated(zeta, 3.5, 5.0, 0.62, 3.6);
    const double E = movability_E_rayleigh(radial_state(pz, 3.6), pz, 24);
    CHECK(E < prev);
    prev = E;
  }
  CHECK(std::abs(movability_E_rayleigh(s, p, 16) - movability_E_rayleigh(s, p, 32)) <= 1e-6);
}

TEST_CASE("verify_disk_stability: multiplicities and signs") {
  const ModelParams p = fig1_params();
  const double R0 = find_R0(p);
  const StabilityReport at = verify_disk_stability(radial_state(p, R0), p, 8, 48);
  CHECK(at.applicable);
  CHECK(at.zero_multiplicity == 3);
  CHECK(at.stable_apart_from_E);
  const StabilityReport below = verify_disk_stability(radial_state(p, 3.7), p, 8, 48);
  CHECK(below.E < 0.0);
  CHECK(below.zero_multiplicity == 2);
  CHECK(below.stable_apart_from_E);
  // radial mode: nothing but the structural zero on the closed right half-plane
  for (auto l : below.modes[0].eigenvalues) CHECK((std::abs(l) <= 1e-5 || l.real() < 0.0));
  // n and −n coincide by construction; higher modes become more dissipative
  CHECK(below.modes[8].eigenvalues.front().real() < below.modes[4].eigenvalues.front().real());
  const ModelParams bad = ModelParams::calibrated(3.0, 3.5, 0.0, 0.62, 3.6);
  CHECK_FALSE(verify_disk_stability(radial_state(bad, 3.6), bad, 4, 32).applicable);
}
