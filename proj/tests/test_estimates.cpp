#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace fujita;
using namespace testing_support;

TEST_CASE("decay fit: contractivity at q = r, poisson rate at (1, inf)") {
  const double inf = std::numeric_limits<double>::infinity();

  SECTION("q = r = 1 on nonnegative data: slope zero, ratio at most 1 + 1e-6") {
    const Grid g = Grid::make(1, 2048, 2048.0);
    const Field probe = gaussian_1d(g, 1.0, 0.0, 4.0);
    const auto params = OperatorParams::make(0, 1, 0.5);
    std::vector<double> ts;
    for (double t = 1.0; t <= 64.0; t *= 2) ts.push_back(t);
    const auto fit = decay_fit(params, 1.0, 1.0, probe, ts);
    CHECK(fit.theory_slope == 0.0);
    CHECK(std::abs(fit.fitted_slope) < 1e-6);  // L1 of nonnegative data is the mass
    for (double t : ts) {
      const Field ut = apply_semigroup(probe, params, t);
      CHECK(ut.l1_norm() <= (1 + 1e-6) * probe.l1_norm());
      CHECK(ut.l2_norm() <= (1 + 1e-6) * probe.l2_norm());
      CHECK(ut.linf_norm() <= (1 + 1e-6) * probe.linf_norm());
    }
  }

  SECTION("pure nonlocal s = 1/2: L1 -> Linf slope -1 within 5%") {
    const Grid g = Grid::make(1, 8192, 8192.0);
    const Field probe = gaussian_1d(g, 1.0, 0.0, 4.0);
    const auto params = OperatorParams::make(0, 1, 0.5);
    std::vector<double> ts;
    for (int i = 0; i < 10; ++i) ts.push_back(10.0 * std::pow(10.0, i / 4.5));
    const auto fit = decay_fit(params, 1.0, inf, probe, ts);
    CHECK(fit.theory_slope == Catch::Approx(-1.0));
    CHECK(fit.rel_error < 0.05);
  }

  SECTION("window filtering excludes boundary-contaminated times") {
    const Grid g = Grid::make(1, 1024, 100.0);
    const Field probe = gaussian_1d(g, 1.0, 0.0, 3.0);
    const auto params = OperatorParams::make(0, 1, 0.5);
    // width(t) ~ t exceeds box/4 = 25 for t > 25: all large times drop out
    CHECK_THROWS_AS(decay_fit(params, 1.0, inf, probe, {30.0, 60.0, 120.0}),
                    WindowError);
  }

  SECTION("argument validation") {
    const Grid g = Grid::make(1, 256, 100.0);
    const Field probe = gaussian_1d(g, 1.0, 0.0, 3.0);
    const auto params = OperatorParams::make(1, 1, 0.5);
    CHECK_THROWS_AS(decay_fit(params, 2.0, 1.0, probe, {1.0, 2.0, 4.0}),
                    DomainError);
    CHECK_THROWS_AS(decay_fit(params, 1.0, 2.0, Field::zeros(g), {1.0, 2.0, 4.0}),
                    DomainError);
  }
}

TEST_CASE("small-time comparison of the two decay exponents") {
  // On t < 1 the nonlocal rate t^{-d/2s} dominates the local t^{-d/2}:
  // no small-time window exclusion is needed.
  for (int d : {1, 2, 3})
    for (double s : {0.25, 0.5, 0.75})
      for (double t : {0.01, 0.1, 0.5, 0.99})
        CHECK(std::pow(t, -d / 2.0) <= std::pow(t, -d / (2.0 * s)) * (1 + 1e-12));
}

TEST_CASE("cordoba check: exact zeros and cutoff powers") {
  const Grid g = Grid::make(1, 1024, 512.0);

  SECTION("constant base gives exactly zero") {
    CHECK(cordoba_check(Field::constant(g, 2.0), 0.5, 3.0) == 0.0);
  }

  SECTION("l = 1 is the identity map") {
    const auto pair = build_test_function(8.0, 64.0, 2.0);
    const Field base = pair.psi_base_field(g);
    CHECK(cordoba_check(base, 0.5, 1.0) == 0.0);
  }

  SECTION("powered cutoff satisfies the inequality within tolerance") {
    const auto pair = build_test_function(8.0, 64.0, 2.0);
    const Field base = pair.psi_base_field(g);
    for (double s : {0.25, 0.5, 0.75}) {
      const double violation = cordoba_check(base, s, 4.0);
      std::vector<double> p4(base.size());
      for (std::size_t i = 0; i < base.size(); ++i)
        p4[i] = std::pow(base[i], 4.0);
      const double scale =
          fujita::detail::frac_laplacian(Field::from_samples(g, std::move(p4)), s)
              .linf_norm();
      CHECK(violation <= 1e-6 * scale);
    }
  }

  SECTION("negative base is rejected") {
    CHECK_THROWS_AS(cordoba_check(Field::constant(g, -1.0), 0.5, 2.0), DomainError);
  }
}

TEST_CASE("pointwise inequality suite") {
  const Grid g = Grid::make(1, 256, 100.0);

  SECTION("u = v: zero left side") {
    const Field u = gaussian_1d(g, 1.0, 0.0, 5.0);
    const auto rep = pointwise_inequality_suite(u, u, 2.0);
    CHECK(rep.qwe_violation <= 0.0);
  }

  SECTION("u=1, v=0, p=2: 1 <= 2") {
    const auto rep = pointwise_inequality_suite(Field::constant(g, 1.0),
                                                Field::zeros(g), 2.0);
    CHECK(rep.qwe_violation <= 0.0);  // max of 1 - 2 = -1
  }

  SECTION("randomized fields, several exponents: no violations") {
    auto r = rng(5150);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      Field u = Field::zeros(g), v = Field::zeros(g);
      for (int b = 0; b < 3; ++b) {
        u = axpy(1.0, u, 1.0,
                 gaussian_1d(g, 2 * unif(r), 20 * unif(r), 1.5 + 3 * std::abs(unif(r))));
        v = axpy(1.0, v, 1.0,
                 gaussian_1d(g, 2 * unif(r), 20 * unif(r), 1.5 + 3 * std::abs(unif(r))));
      }
      for (double p : {1.5, 2.0, 3.0}) {
        const auto rep = pointwise_inequality_suite(u, v, p);
        const double scale =
            std::max({std::pow(u.linf_norm(), p), std::pow(v.linf_norm(), p), 1.0});
        CHECK(rep.qwe_violation <= 1e-12 * scale);
        CHECK(rep.product_violation_l1 <= 1e-12 * scale);
        CHECK(rep.product_violation_l2 <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("decay bound constant is stable across probe shapes") {
  // C_fit = max_t ||e^{-tL}probe||_inf * t / ||probe||_1 stays within a factor
  // 3 across gaussian, dipole and ring probes (d=1, s=1/2, q=1, r=inf).
  const Grid g = Grid::make(1, 4096, 4096.0);
  const auto params = OperatorParams::make(0, 1, 0.5);
  std::vector<Field> probes{
      gaussian_1d(g, 1.0, 0.0, 4.0),
      make_family("dipole", {{"amp", 1.0}, {"sep", 12.0}, {"width", 1.5}}, g),
      make_family("ring", {{"amp", 1.0}, {"radius", 10.0}, {"width", 3.0}}, g)};
  std::vector<double> cs;
  for (const auto& probe : probes) {
    double c_fit = 0;
    for (double t : {3.0, 9.0, 27.0, 54.0}) {
      const Field ut = apply_semigroup(probe, params, t);
      c_fit = std::max(c_fit, ut.linf_norm() * t / probe.l1_norm());
    }
    cs.push_back(c_fit);
  }
  const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
  CHECK(*hi / *lo < 3.0);
}

TEST_CASE("monotone decay of semigroup norms in time") {
  const Grid g = Grid::make(1, 1024, 1024.0);
  const Field probe =
      make_family("dipole", {{"amp", 1.0}, {"sep", 6.0}, {"width", 2.0}}, g);
  const auto params = OperatorParams::make(1, 1, 0.5);
  double prev1 = probe.l1_norm(), prev2 = probe.l2_norm(), previ = probe.linf_norm();
  for (double t : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const Field ut = apply_semigroup(probe, params, t);
    CHECK(ut.l1_norm() <= prev1 * (1 + 1e-9));
    CHECK(ut.l2_norm() <= prev2 * (1 + 1e-9));
    CHECK(ut.linf_norm() <= previ * (1 + 1e-9));
    prev1 = ut.l1_norm();
    prev2 = ut.l2_norm();
    previ = ut.linf_norm();
  }
}

TEST_CASE("young constant is sharp") {
  for (double p : {1.5, 2.0, 3.0})
    for (double eps : {0.1, 0.25}) {
      const double ce = young_constant(eps, p);
      const double b = 1.3;
      auto gap = [&](double a) {
        return a * b - (eps * std::pow(a, p) + ce * std::pow(b, p / (p - 1.0)));
      };
      // inequality holds on a broad scan
      for (double a = 0.01; a < 100.0; a *= 1.07) CHECK(gap(a) <= 1e-12);
      // and is attained at the analytic maximizer a* = (b/(eps p))^{1/(p-1)}
      const double astar = std::pow(b / (eps * p), 1.0 / (p - 1.0));
      CHECK(std::abs(gap(astar)) <= 1e-9);
    }
}
