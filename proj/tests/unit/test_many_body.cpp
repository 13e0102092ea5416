#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fiberpol/errors.hpp"
#include "fiberpol/many_body.hpp"
#include "generators.hpp"

using namespace fiberpol;
using fiberpol::testing::rel_diff;

TEST_CASE("phase spellings") {
  CHECK(to_string(Phase::Superfluid) == "SF");
  CHECK(to_string(Phase::MottPinnedSG) == "MOTT_SG");
  CHECK(to_string(Phase::MottBH) == "MOTT_BH");
  CHECK(to_string(Phase::Indeterminate) == "INDETERMINATE");
}

TEST_CASE("luttinger_k") {
  CHECK(luttinger_k(3.5) == doctest::Approx(2.0038743299881887).epsilon(1e-14));
  CHECK(luttinger_k(10.0) == doctest::Approx(1.4096112209514830).epsilon(1e-14));
  CHECK_THROWS_AS(luttinger_k(12.0), DomainError);
  CHECK_THROWS_AS(luttinger_k(0.0), DomainError);
  CHECK_THROWS_AS(luttinger_k(-1.0), DomainError);
}

TEST_CASE("sg_critical_depth") {
  CHECK(sg_critical_depth(3.5) == doctest::Approx(0.0077486599763773092).epsilon(1e-10));
  CHECK(sg_critical_depth(1.0) == doctest::Approx(2.8520714140064934).epsilon(1e-14));
  CHECK(sg_critical_depth(4.0) == 0.0);
  CHECK_THROWS_AS(sg_critical_depth(11.0), DomainError);
}

TEST_CASE("bh_params") {
  const BhParams p = bh_params(9.7062, 0.20970);
  CHECK(p.j_over_er == doctest::Approx(0.024417579803549033).epsilon(1e-13));
  CHECK(p.u_over_er == doctest::Approx(0.094004994473858870).epsilon(1e-13));
  CHECK(p.u_over_j == doctest::Approx(3.8498899248071867).epsilon(1e-13));
  CHECK(bh_params(1.0, 0.3).j_over_er == doctest::Approx(0.30541902835432863).epsilon(1e-14));
  const BhParams free = bh_params(5.0, 0.0);
  CHECK(free.u_over_er == 0.0);
  CHECK(free.u_over_j == 0.0);
  CHECK_THROWS_AS(bh_params(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(bh_params(-1.0, 1.0), DomainError);
}

TEST_CASE("classify") {
  SUBCASE("deep lattice, weak interaction: Mott above (U/J)_c") {
    const ManyBodyPoint p = make_point(-0.2097, 9.8);
    CHECK(p.flags.bh_valid);
    CHECK(p.u_over_j > kCriticalUOverJ);
    CHECK(p.phase == Phase::MottBH);
    CHECK(p.flags.sign_warning);
  }
  SUBCASE("below (U/J)_c is superfluid") {
    const ManyBodyPoint p = make_point(0.2097, 9.0);
    CHECK(p.u_over_j < kCriticalUOverJ);
    CHECK(p.phase == Phase::Superfluid);
  }
  SUBCASE("shallow lattice pins a strongly interacting gas") {
    const ManyBodyPoint p = make_point(4.0, 0.5);
    CHECK(p.flags.sg_valid);
    CHECK(p.phase == Phase::MottPinnedSG);
  }
  SUBCASE("no lattice, no pinning") {
    const ManyBodyPoint p = make_point(4.0, 0.0);
    CHECK(p.phase == Phase::Superfluid);
    CHECK(std::isnan(p.u_over_j));
  }
  SUBCASE("gap region is indeterminate") {
    CHECK(make_point(2.0, 5.0).phase == Phase::Indeterminate);
    CHECK(make_point(7.0, 1.0).phase == Phase::Indeterminate);
  }
  SUBCASE("exactly on the sine-Gordon line counts as Mott") {
    ManyBodyPoint p = make_point(1.5, 1.0);
    p.v1_over_er = sg_critical_depth(1.5);
    CHECK(classify(p) == Phase::MottPinnedSG);
  }
  SUBCASE("exactly on the Bose-Hubbard line counts as Mott") {
    ManyBodyPoint p = make_point(0.2, 10.0);
    p.u_over_j = kCriticalUOverJ;
    CHECK(classify(p) == Phase::MottBH);
  }
  CHECK_THROWS_AS(make_point(1.0, -0.1), DomainError);
}

TEST_CASE("property: sg_critical_depth is 2(K - 2) clamped at zero") {
  fiberpol::testing::Gen gen(42);
  for (int i = 0; i < 10000; ++i) {
    const double g = gen.uniform(1e-6, 10.0);
    const double expected = std::max(0.0, 2.0 * (luttinger_k(g) - 2.0));
    INFO("gamma = " << g);
    REQUIRE(rel_diff(sg_critical_depth(g), expected) < 1e-12);
  }
}

TEST_CASE("property: U/J components equal the closed-form critical expression") {
  fiberpol::testing::Gen gen(7);
  for (int i = 0; i < 10000; ++i) {
    const double x = gen.log_uniform(1e-3, 60.0);
    const double g = gen.log_uniform(1e-4, 10.0);
    INFO("x = " << x << " gamma = " << g);
    REQUIRE(rel_diff(bh_params(x, g).u_over_j, u_over_j_closed_form(x, g)) < 1e-12);
  }
}

TEST_CASE("property: K is strictly decreasing and crosses 2 where the critical depth vanishes") {
  double previous = luttinger_k(0.01);
  for (double g = 0.02; g <= 10.0; g += 0.01) {
    const double k = luttinger_k(g);
    REQUIRE(k < previous);
    previous = k;
    if (k <= 2.0) REQUIRE(sg_critical_depth(g) == 0.0);
    else REQUIRE(sg_critical_depth(g) > 0.0);
  }
}

TEST_CASE("property: regime windows never overlap") {
  fiberpol::testing::Gen gen(99);
  for (int i = 0; i < 10000; ++i) {
    const RegimeFlags f = regime_flags(gen.uniform(0, 12), gen.uniform(0, 25));
    REQUIRE_FALSE((f.sg_valid && f.bh_valid));
  }
  // The single shared corner gamma = 1, V1/E_R = 3.
  const RegimeFlags corner = regime_flags(1.0, 3.0);
  CHECK_FALSE((corner.sg_valid && corner.bh_valid));
}

TEST_CASE("property: classification is stable under a 1e-15 relative nudge of gamma") {
  fiberpol::testing::Gen gen(1234);
  int changed = 0;
  for (int i = 0; i < 10000; ++i) {
    const double g = gen.uniform(0.05, 6.0);
    const double x = gen.uniform(0.0, 20.0);
    const Phase a = make_point(g, x).phase;
    const Phase b = make_point(g * (1 + 1e-15), x).phase;
    if (a != b) ++changed;
  }
  CHECK(changed == 0);
}
