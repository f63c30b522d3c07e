#include <doctest.h>

#include "motility/model.hpp"
#include "motility/numerics.hpp"

#include <cmath>
#include <numbers>

using namespace motility;
using std::numbers::pi;

TEST_CASE("p_star: examples") {
  ModelParams p;
  p.zeta = 2.0;
  p.gamma = 1.0;
  p.k_e = 5.0;
  p.p_h = 1.3;
  p.area_ref = 10.0;
  CHECK(p_star(p, 10.0) == doctest::Approx(1.3));
  CHECK(p_star(p, 11.0) == doctest::Approx(1.3 - 0.5).epsilon(1e-14));
  p.k_e = 0.0;
  CHECK(p_star(p, 3.0) == 1.3);
  CHECK(p_star(p, 300.0) == 1.3);
  CHECK_THROWS_AS(p_star(p, 0.0), DomainError);
}

TEST_CASE("ModelParams: positivity is enforced at construction") {
  CHECK_THROWS_AS(ModelParams::calibrated(-1.0, 3.5, 5.0, 0.62, 3.6), DomainError);
  CHECK_THROWS_AS(ModelParams::calibrated(1.0, 0.0, 5.0, 0.62, 3.6), DomainError);
  CHECK_THROWS_AS(ModelParams::calibrated(1.0, 3.5, -5.0, 0.62, 3.6), DomainError);
}

TEST_CASE("radial_state: reference calibration") {
  const ModelParams p = fig1_params();
  const RadialState s = radial_state(p, 3.6);
  CHECK(s.p_star_val == doctest::Approx(0.62 + 3.5 / 3.6).epsilon(1e-14));
  CHECK(s.m0 == doctest::Approx(0.62).epsilon(1e-14));
  CHECK(s.M == doctest::Approx(pi * 3.6 * 3.6 * 0.62).epsilon(1e-14));
  CHECK(s.M == doctest::Approx(25.24).epsilon(1e-3));
  CHECK(s.phi0 == doctest::Approx(0.62 / p.zeta).epsilon(1e-14));
  CHECK(std::abs(s.m0 + p.gamma / s.R - s.p_star_val) <= 1e-15);
}

TEST_CASE("radial_state: small surface tension limit and invariants") {
  ModelParams p = ModelParams::calibrated(2.0, 1e-12, 1.0, 0.5, 2.0);
  const RadialState s = radial_state(p, 2.0);
  CHECK(s.m0 == doctest::Approx(s.p_star_val).epsilon(1e-11));
  for (double R : {1.5, 2.0, 2.2}) {
    p = ModelParams::calibrated(2.0, 0.3, 1.0, 0.5, 2.0);
    const RadialState t = radial_state(p, R);
    CHECK(std::abs(t.m0 + p.gamma / R - t.p_star_val) <= 1e-15);
    CHECK(t.M == pi * R * R * t.m0);
    CHECK(t.phi0 == t.m0 / p.zeta);
    const RadialState u = radial_state(p, R);
    CHECK(u.M == t.M);  // pure function, bitwise equal
  }
}

TEST_CASE("radial_state: nonpositive density is rejected") {
  const ModelParams p = ModelParams::calibrated(2.0, 3.5, 0.0, 0.1, 3.6);
  CHECK_THROWS_AS(radial_state(p, 1.0), DomainError);
}

TEST_CASE("check_hypotheses: failing cases") {
  const ModelParams no_elastic = ModelParams::calibrated(2.0, 3.5, 0.0, 0.62, 3.6);
  const HypothesisReport h = check_hypotheses(no_elastic, 3.6);
  CHECK(h.p_star_prime == 0.0);
  CHECK_FALSE(h.c_holds);
  const ModelParams low_zeta = ModelParams::calibrated(0.5, 3.5, 5.0, 0.62, 3.6);
  CHECK_FALSE(check_hypotheses(low_zeta, 3.6).a_holds);
}

TEST_CASE("check_hypotheses: reference parameters") {
  const ModelParams p = fig1_params();
  const HypothesisReport h = check_hypotheses(p, 3.6);
  CHECK(h.a_holds);
  CHECK(h.b_holds_multiplicity);
  CHECK(h.b_holds_distinct);
  CHECK(h.c_holds);
  CHECK(h.fourth_eig_distinct > h.fourth_eig_multiplicity);
  const double fd = (M_of_R(p, 3.6 + 1e-5) - M_of_R(p, 3.6 - 1e-5)) / 2e-5;
  CHECK((fd < 0) == (h.dM_dR < 0));
  CHECK(h.dM_dR < 0);
}

TEST_CASE("M_of_R and dM_dR") {
  ModelParams p;
  p.zeta = 1.0;
  p.gamma = 1e-300;
  p.k_e = 0.0;
  p.p_h = 0.7;
  p.area_ref = 2.0;
  CHECK(M_of_R(p, 1.3) == doctest::Approx(pi * 1.3 * 1.3 * 0.7).epsilon(1e-14));
  for (double ke : {0.0, 1.0, 5.0}) {
    for (double R : {2.0, 3.0, 3.6, 4.5}) {
      const ModelParams q = ModelParams::calibrated(3.0, 3.5, ke, 0.62, 3.6);
      const double fd = (M_of_R(q, R + 1e-5) - M_of_R(q, R - 1e-5)) / 2e-5;
      CHECK(std::abs(dM_dR(q, R) - fd) <= 1e-6 * std::abs(dM_dR(q, R)));
      // dM/dR < 0 exactly when the area condition holds
      if (M_of_R(q, R) > 0.0) CHECK((dM_dR(q, R) < 0) == check_hypotheses(q, R).c_holds);
    }
  }
}
