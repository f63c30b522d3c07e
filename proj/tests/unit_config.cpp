#include <doctest.h>

#include "motility/config.hpp"
#include "motility/model.hpp"

#include <cmath>

using namespace motility;

TEST_CASE("parse_config: calibrated entry, comments and quoted strings") {
  const RunConfig c = parse_config(
      "# reference set\n"
      "zeta = 3.5677286848508\n"
      "gamma = 3.5   # surface tension\n"
      "k_e = 5.0\n"
      "target_m0 = 0.62\n"
      "R = 3.6\n"
      "subspace = \"full\"\n"
      "out_json = 'report # 1.json'\n");
  const ModelParams p = c.params();
  const ModelParams ref = fig1_params();
  CHECK(p.p_h == doctest::Approx(ref.p_h).epsilon(1e-14));
  CHECK(p.area_ref == doctest::Approx(M_PI * 3.6 * 3.6).epsilon(1e-14));
  CHECK(c.radius() == 3.6);
  CHECK(c.subspace == "full");
  CHECK(c.out_json == "report # 1.json");
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse_config: documented defaults") {
  const RunConfig c = parse_config("zeta = 1\ngamma = 1\nk_e = 1\np_h = 2\narea_ref = 3.14159\n");
  CHECK(c.n_radial == 48);
  CHECK(c.n_modes == 8);
  CHECK(c.zero_tol == 1e-5);
  CHECK(c.newton_tol == 1e-10);
  CHECK(c.max_iter == 30);
  CHECK(c.fd_step == 1e-4);
  CHECK(c.delta < 0.0);
  CHECK(c.w2_step < 0.0);
  CHECK(c.n_s == 16);
  CHECK(c.n_theta == 32);
  CHECK(c.steps == 16);
  CHECK(c.radius() == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse_config: errors name the offending line") {
  CHECK_THROWS_WITH_AS(parse_config("zeta = 1\nbogus = 2\n", "f.toml"), "f.toml:2: unknown config key: bogus",
                       ConfigError);
  CHECK_THROWS_AS(parse_config("zeta = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_s = 3.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[section]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("subspace = odd\n"), ConfigError);
}

TEST_CASE("RunConfig: inconsistent or invalid parameter styles") {
  // mixed styles
  CHECK_THROWS_AS(parse_config("zeta=1\ngamma=1\nk_e=1\ntarget_m0=0.5\nR=2\np_h=1\n").params(), ConfigError);
  // calibrated without R
  CHECK_THROWS_AS(parse_config("zeta=1\ngamma=1\nk_e=1\ntarget_m0=0.5\n").params(), ConfigError);
  // raw without area_ref
  CHECK_THROWS_AS(parse_config("zeta=1\ngamma=1\nk_e=1\np_h=1\n").params(), ConfigError);
  // positivity
  CHECK_THROWS_AS(parse_config("zeta=-1\ngamma=1\nk_e=1\np_h=1\narea_ref=1\n").params(), ConfigError);
  // numerical controls
  RunConfig c = parse_config("zeta=1\ngamma=1\nk_e=1\np_h=2\narea_ref=3\n");
  c.set("n_theta", "31");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.set("n_theta", "32");
  c.set("r_max", "0.1");
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("RunConfig::set: later values override earlier ones") {
  RunConfig c = parse_config("v = 0.2\ndelta_policy = auto\n");
  c.set("v", "0.24");
  c.set("delta_policy", "0.1");
  CHECK(c.v == 0.24);
  CHECK(c.delta == 0.1);
}
