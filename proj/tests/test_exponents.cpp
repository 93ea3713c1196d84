#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace fujita;
using namespace testing_support;

TEST_CASE("fujita exponent values and domain") {
  CHECK(fujita_exponent(1, 0.5) == 2.0);
  CHECK(fujita_exponent(2, 0.5) == 1.5);
  CHECK(fujita_exponent(3, 0.75) == 1.5);
  CHECK_THROWS_AS(fujita_exponent(1, 0.0), DomainError);
  CHECK_THROWS_AS(fujita_exponent(1, 1.0), DomainError);
  for (int d : {1, 2, 3})
    for (double s : {0.01, 0.3, 0.99}) {
      const double pf = fujita_exponent(d, s);
      CHECK(pf > 1.0);
      CHECK(pf < 3.0);
    }
}

TEST_CASE("forcing critical exponent values and hypothesis") {
  CHECK(forcing_critical_exponent(1, 0.3) == Catch::Approx(2.5));
  CHECK(forcing_critical_exponent(2, 0.5) == Catch::Approx(2.0));
  CHECK_THROWS_AS(forcing_critical_exponent(1, 0.5), UndefinedExponentError);
  CHECK_THROWS_AS(forcing_critical_exponent(1, 0.7), UndefinedExponentError);
}

TEST_CASE("weissler exponent") {
  CHECK(weissler_exponent(1, 0.5, 3.0) == Catch::Approx(2.0));
  CHECK(weissler_exponent(2, 0.5, 3.0) == Catch::Approx(4.0));
  // at p = p_F the smallness exponent is exactly 1
  for (int d : {1, 2, 3})
    for (double s : {0.2, 0.5, 0.8})
      CHECK(weissler_exponent(d, s, fujita_exponent(d, s)) == Catch::Approx(1.0));
  CHECK_THROWS_AS(weissler_exponent(1, 0.5, 1.0), DomainError);
}

TEST_CASE("global existence parameters: worked examples") {
  {
    const auto gp = global_existence_parameters(2, 0.5, 3.0);
    CHECK(gp.p_c_s == Catch::Approx(4.0));
    CHECK(gp.k == Catch::Approx(4.0 / 3.0));
    CHECK(gp.q == Catch::Approx(6.0));
    CHECK(gp.rho == Catch::Approx(1.0 / 6.0));
  }
  {
    const auto gp = global_existence_parameters(1, 0.3, 3.0);
    CHECK(gp.p_c_s == Catch::Approx(10.0 / 3.0));
    CHECK(gp.k == Catch::Approx(10.0 / 9.0));
    CHECK(gp.q == Catch::Approx(5.0));
    CHECK(gp.rho == Catch::Approx(1.0 / 6.0));
  }
  // boundary: p = p_crit rejected
  CHECK_THROWS_AS(global_existence_parameters(2, 0.5, 2.0), ParameterDomainError);
  // q override inside the admissible interval is honored
  const auto gp = global_existence_parameters(2, 0.5, 3.0, 5.0);
  CHECK(gp.q == Catch::Approx(5.0));
  CHECK_THROWS_AS(global_existence_parameters(2, 0.5, 3.0, 100.0),
                  ParameterDomainError);
}

TEST_CASE("parameter chain and decay identity on random admissible triples") {
  auto r = rng(20240917);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int count = 0;
  while (count < 1000) {
    const int d = 1 + static_cast<int>(unif(r) * 3);
    const double s_hi = std::min(1.0, d / 2.0);
    if (s_hi <= 0.1) continue;
    const double s = 0.05 + unif(r) * (s_hi - 0.1);
    if (!(d > 2 * s)) continue;
    const double p_crit = forcing_critical_exponent(d, s);
    const double p = p_crit * (1.0 + 0.01 + unif(r) * 3.0);
    const auto gp = global_existence_parameters(d, s, p);
    REQUIRE(gp.q > gp.p_c_s);
    REQUIRE(gp.p_c_s > gp.k);
    REQUIRE(gp.k >= 1.0);
    REQUIRE(gp.rho > 0.0);
    // decay identity rho = (d/2s)(1/p_c_s - 1/q)
    const double rhs = (d / (2.0 * s)) * (1.0 / gp.p_c_s - 1.0 / gp.q);
    REQUIRE(std::abs(gp.rho - rhs) <= 1e-12);
    // the relation used by the beta-function bound: rho(p-1) = 1 - d(p-1)/(2qs)
    const double lhs2 = gp.rho * (p - 1.0);
    const double rhs2 = 1.0 - d * (p - 1.0) / (2.0 * gp.q * s);
    REQUIRE(std::abs(lhs2 - rhs2) <= 1e-12);
    ++count;
  }
}

TEST_CASE("p_F below p_crit whenever the latter exists") {
  auto r = rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const int d = 1 + static_cast<int>(unif(r) * 3);
    const double s = 0.02 + 0.96 * unif(r);
    if (!(d > 2 * s)) continue;
    CHECK(fujita_exponent(d, s) < forcing_critical_exponent(d, s));
  }
}

TEST_CASE("exponent report fills optionals per hypothesis") {
  const auto r1 = exponent_report(1, 0.5, 3.0);  // d = 2s: no p_crit
  CHECK_FALSE(r1.p_crit.has_value());
  CHECK_FALSE(r1.q.has_value());
  CHECK(r1.p_F == Catch::Approx(2.0));

  const auto r2 = exponent_report(1, 0.3, 3.0);
  REQUIRE(r2.p_crit.has_value());
  CHECK(*r2.p_crit == Catch::Approx(2.5));
  REQUIRE(r2.q.has_value());
  CHECK(*r2.q == Catch::Approx(5.0));
  REQUIRE(r2.rho.has_value());

  const auto r3 = exponent_report(1, 0.3, 2.0);  // p below p_crit: no q, rho
  REQUIRE(r3.p_crit.has_value());
  CHECK_FALSE(r3.q.has_value());
}
