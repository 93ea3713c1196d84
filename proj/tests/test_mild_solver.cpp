#include <catch2/catch_amalgamated.hpp>
#include <cstring>

#include "helpers.hpp"

using namespace fujita;
using namespace testing_support;

namespace {

/// Closed-form solution of u' = u^p from a constant level c.
double ode_exact(double c, double p, double t) {
  return c * std::pow(1.0 - (p - 1.0) * std::pow(c, p - 1.0) * t,
                      -1.0 / (p - 1.0));
}

SolverConfig quick_cfg() {
  SolverConfig cfg;
  cfg.dt_init = 1e-3;
  cfg.dt_min = 1e-12;
  cfg.dt_max = 0.5;
  cfg.t_end = 10.0;
  return cfg;
}

}  // namespace

TEST_CASE("picard: zero data fixes zero after one iteration") {
  const Grid g = Grid::make(1, 32, 20.0);
  SolverConfig cfg = quick_cfg();
  cfg.dt_init = 0.01;
  const auto res = picard_small_time(Field::zeros(g), Field::zeros(g), 2.0,
                                     OperatorParams::make(1, 1, 0.5), 0.5, cfg);
  CHECK(res.iterations == 1);
  CHECK(res.residual == 0.0);
  for (const auto& st : res.trajectory.states) CHECK(st.linf_norm() == 0.0);
}

TEST_CASE("picard: constant field follows the separable ODE") {
  const Grid g = Grid::make(1, 16, 10.0);
  const double c = 0.5, p = 2.0, T = 0.1;
  SolverConfig cfg = quick_cfg();
  cfg.dt_init = T / 4096;
  const auto res = picard_small_time(Field::constant(g, c), Field::zeros(g), p,
                                     OperatorParams::make(1, 1, 0.5), T, cfg);
  double worst = 0;
  for (std::size_t j = 0; j < res.trajectory.times.size(); ++j) {
    const double expect = ode_exact(c, p, res.trajectory.times[j]);
    worst = std::max(worst,
                     std::abs(res.trajectory.states[j].linf_norm() - expect));
  }
  CHECK(worst <= 1e-6);
  CHECK(res.residual <= cfg.picard_tol);

  // distances decrease geometrically; measured ratio obeys the contraction
  // bound 2^{p-1} C(p) T delta^{p-1} with C(p) = p
  REQUIRE(res.ratios.size() >= 2);
  const double delta = c;
  const double bound = std::pow(2.0, p - 1.0) * p * T * std::pow(delta, p - 1.0);
  for (double ratio : res.ratios) CHECK(ratio <= bound * (1.0 + 1e-3));
}

TEST_CASE("picard rejects intervals violating the smallness condition") {
  const Grid g = Grid::make(1, 16, 10.0);
  SolverConfig cfg = quick_cfg();
  // T + 2^p T delta^{p-1} for delta=2, p=2, T=2: far beyond 1
  CHECK_THROWS_AS(picard_small_time(Field::constant(g, 2.0), Field::zeros(g), 2.0,
                                    OperatorParams::make(1, 1, 0.5), 2.0, cfg),
                  DomainError);
}

TEST_CASE("exponential euler step: structure on special inputs") {
  const Grid g = Grid::make(1, 128, 50.0);
  const auto params = OperatorParams::make(1, 1, 0.5);

  SECTION("zero field with constant forcing gains c*dt") {
    const double c = 0.3, dt = 0.05;
    const Field out = exponential_euler_step(Field::zeros(g), Field::constant(g, c),
                                             2.0, params, dt);
    for (std::size_t i = 0; i < out.size(); ++i)
      CHECK(out[i] == Catch::Approx(c * dt).margin(1e-15));
  }

  SECTION("negligible nonlinearity reduces to the semigroup") {
    const Field u = gaussian_1d(g, 1e-8, 0.0, 4.0);
    const double dt = 0.1;
    const Field stepped = exponential_euler_step(u, Field::zeros(g), 2.0, params, dt);
    const Field semi = apply_semigroup(u, params, dt);
    CHECK(sup_distance(stepped, semi) <= dt * 1e-15 + 1e-18);
  }

  SECTION("dt validation") {
    CHECK_THROWS_AS(
        exponential_euler_step(Field::zeros(g), Field::zeros(g), 2.0, params, 0.0),
        DomainError);
  }
}

TEST_CASE("one-step defect against picard is second order (Richardson)") {
  const Grid g = Grid::make(1, 256, 100.0);
  const auto params = OperatorParams::make(1, 1, 0.5);
  const Field u0 = gaussian_1d(g, 0.5, 0.0, 5.0);
  const Field f = Field::zeros(g);
  const double p = 2.0;

  auto defect = [&](double dt) {
    SolverConfig cfg = quick_cfg();
    cfg.dt_init = dt / 512;  // fine picard nodes on [0, dt]
    const auto pic = picard_small_time(u0, f, p, params, dt, cfg);
    const Field one = exponential_euler_step(u0, f, p, params, dt);
    return sup_distance(one, pic.trajectory.states.back());
  };

  const double d1 = defect(0.04);
  const double d2 = defect(0.02);
  CHECK(d1 / d2 == Catch::Approx(4.0).epsilon(0.25));  // local order 2
}

TEST_CASE("integrate: constant-data blow-up matches the ODE lifespan") {
  const Grid g = Grid::make(1, 16, 10.0);
  SolverConfig cfg = quick_cfg();
  cfg.t_end = 5.0;
  const auto out = integrate(Field::constant(g, 1.0), Field::zeros(g), 2.0,
                             OperatorParams::make(1, 1, 0.5), cfg);
  REQUIRE(out.status == SolveStatus::BlowUp);
  REQUIRE(out.t_star.has_value());
  CHECK(*out.t_star > 0.98);
  CHECK(*out.t_star < 1.02);
  REQUIRE(out.t_max_estimate.has_value());
  CHECK(std::abs(*out.t_max_estimate - 1.0) < 0.05);
  CHECK(out.series.back().linf >= cfg.blowup_threshold);
}

TEST_CASE("integrate: small supercritical data decays to the horizon") {
  const Grid g = Grid::make(1, 256, 100.0);
  SolverConfig cfg = quick_cfg();
  cfg.t_end = 50.0;
  const Field u0 = gaussian_1d(g, 0.01, 0.0, 5.0);
  const auto out = integrate(u0, Field::zeros(g), 4.0,
                             OperatorParams::make(1, 1, 0.5), cfg);
  REQUIRE(out.status == SolveStatus::Global);
  CHECK(out.series.back().linf < out.series.front().linf);
  CHECK(out.series.back().t == Catch::Approx(cfg.t_end));
}

TEST_CASE("integrate: under-resolved data aborts as Indeterminate") {
  // a width-0.5 bump on a spacing-1.56 grid puts well over tail_tol of the
  // energy in the top third of the spectrum
  const Grid g = Grid::make(1, 256, 400.0);
  const Field u0 = make_family("dipole", {{"amp", 0.5}, {"sep", 10.0},
                                          {"width", 0.5}}, g);
  SolverConfig cfg = quick_cfg();
  cfg.t_end = 100.0;
  const auto out = integrate(u0, Field::zeros(g), 1.6,
                             OperatorParams::make(1, 1, 0.5), cfg);
  CHECK(out.status == SolveStatus::Indeterminate);
  CHECK_FALSE(out.diagnostic.empty());
}

TEST_CASE("integrate: threshold must exceed the initial sup norm") {
  const Grid g = Grid::make(1, 16, 10.0);
  SolverConfig cfg = quick_cfg();
  cfg.blowup_threshold = 0.5;
  CHECK_THROWS_AS(integrate(Field::constant(g, 1.0), Field::zeros(g), 2.0,
                            OperatorParams::make(1, 1, 0.5), cfg),
                  DomainError);
}

TEST_CASE("integrate is deterministic down to the bit pattern") {
  const Grid g = Grid::make(1, 128, 60.0);
  SolverConfig cfg = quick_cfg();
  cfg.t_end = 3.0;
  const Field u0 = gaussian_1d(g, 0.4, 1.0, 4.0);
  const Field f = gaussian_1d(g, 0.05, -2.0, 3.0);
  const auto a = integrate(u0, f, 1.7, OperatorParams::make(1, 0.5, 0.4), cfg);
  const auto b = integrate(u0, f, 1.7, OperatorParams::make(1, 0.5, 0.4), cfg);
  REQUIRE(a.series.size() == b.series.size());
  REQUIRE(a.status == b.status);
  CHECK(std::memcmp(a.series.data(), b.series.data(),
                    a.series.size() * sizeof(NormSample)) == 0);
}

TEST_CASE("discrete mass balance: mean gain per step is the nonlinear mean") {
  const Grid g = Grid::make(1, 256, 80.0);
  const auto params = OperatorParams::make(1, 1, 0.5);
  const Field f = gaussian_1d(g, 0.1, 5.0, 3.0);
  const double p = 1.8, dt = 0.05;
  const auto traj = evolve_fixed(gaussian_1d(g, 0.5, 0.0, 4.0), f, p, params, dt, 40);
  const double vol = g.cell_volume();
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
    const auto& u = traj.states[k];
    double gain = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
      gain += std::pow(std::abs(u[i]), p) + f[i];
    gain *= vol;
    const double dm = (traj.states[k + 1].mass() - u.mass()) / dt;
    REQUIRE(std::abs(dm - gain) <= 1e-6 * std::max(1.0, std::abs(gain)));
  }
}

TEST_CASE("fixed-step evolution stays close to the picard fixed point") {
  const Grid g = Grid::make(1, 256, 100.0);
  const auto params = OperatorParams::make(1, 1, 0.5);
  const Field u0 = gaussian_1d(g, 0.5, 0.0, 5.0);
  const Field f = Field::zeros(g);
  const double p = 2.0, T = 0.1;

  SolverConfig cfg = quick_cfg();
  cfg.dt_init = T / 500;  // picard nodes
  const auto pic = picard_small_time(u0, f, p, params, T, cfg);
  const auto traj = evolve_fixed(u0, f, p, params, T / 1000, 1000);

  double worst = 0;
  for (std::size_t j = 0; j < pic.trajectory.times.size(); ++j) {
    // picard node j corresponds to fixed-step node 2j
    worst = std::max(worst, sup_distance(pic.trajectory.states[j],
                                         traj.states[2 * j]));
  }
  CHECK(worst <= 1e-4 * (1.0 + u0.linf_norm()));
}

TEST_CASE("parabolic rescaling maps computed trajectories onto each other") {
  // b = 0: u -> lambda^{2/(p-1)} u(lambda x), t -> lambda^2 t with lambda = 2.
  const double p = 2.0, lambda = 2.0;
  const auto params = OperatorParams::make(1.0, 0.0, 0.5);
  const Grid ga = Grid::make(1, 256, 100.0);
  const Grid gb = Grid::make(1, 256, 100.0 / lambda);
  const double amp = 0.3, width = 6.0;
  const Field ua = gaussian_1d(ga, amp, 0.0, width);
  const Field ub = gaussian_1d(gb, amp * lambda * lambda, 0.0, width / lambda);
  const double dta = 0.01;
  const int steps = 200;
  const auto ta = evolve_fixed(ua, Field::zeros(ga), p, params, dta, steps);
  const auto tb = evolve_fixed(ub, Field::zeros(gb), p, params,
                               dta / (lambda * lambda), steps);
  double worst = 0;
  for (int k : {50, 100, 200}) {
    const auto& va = ta.states[static_cast<std::size_t>(k)];
    const auto& vb = tb.states[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < va.size(); ++i)
      worst = std::max(worst, std::abs(vb[i] - lambda * lambda * va[i]));
  }
  CHECK(worst <= 1e-8 * lambda * lambda * amp);
}

TEST_CASE("classify_outcome on synthetic and computed series") {
  SolverConfig cfg = quick_cfg();

  SECTION("monotone decay is global with no estimate") {
    std::vector<NormSample> series;
    for (int i = 0; i <= 20; ++i) {
      const double t = 0.1 * i;
      series.push_back({t, 1.0, 1.0, std::exp(-t), 1.0});
    }
    const auto cls = classify_outcome(series, 2.0, cfg);
    CHECK(cls.status == SolveStatus::Global);
    CHECK_FALSE(cls.t_max_estimate.has_value());
  }

  SECTION("series generated from the lifespan model round-trips the fit") {
    const double t_star = 3.0, p = 2.0, kappa = 2.0;
    cfg.blowup_threshold = 100.0;
    std::vector<NormSample> series;
    for (int i = 0; i <= 60; ++i) {
      const double t = t_star - std::pow(10.0, -0.05 * i);  // approach t*
      const double linf = kappa * std::pow(t_star - t, -1.0 / (p - 1.0));
      series.push_back({t, 1.0, 1.0, linf, 1.0});
      if (linf >= cfg.blowup_threshold) break;
    }
    const auto cls = classify_outcome(series, p, cfg);
    REQUIRE(cls.status == SolveStatus::BlowUp);
    REQUIRE(cls.t_max_estimate.has_value());
    CHECK(*cls.t_max_estimate == Catch::Approx(t_star).epsilon(1e-9));
  }

  SECTION("flat series at the dt floor classifies as blow-up") {
    cfg.blowup_threshold = 1e8;
    cfg.dt_min = 1e-10;
    std::vector<NormSample> series;
    double t = 0;
    for (int i = 0; i < 20; ++i) {
      t += (i < 10) ? 0.1 : cfg.dt_min;  // step collapse
      series.push_back({t, 1.0, 1.0, 1e6 + i, 1.0});
    }
    const auto cls = classify_outcome(series, 2.0, cfg);
    CHECK(cls.status == SolveStatus::BlowUp);
  }

  SECTION("fewer than 8 growth samples omit the estimate") {
    cfg.blowup_threshold = 10.0;
    std::vector<NormSample> series;
    for (int i = 0; i < 5; ++i)
      series.push_back({0.1 * i, 1.0, 1.0, 3.0 * i + 1.0, 1.0});
    const auto cls = classify_outcome(series, 2.0, cfg);
    CHECK(cls.status == SolveStatus::BlowUp);
    CHECK_FALSE(cls.t_max_estimate.has_value());
  }

  SECTION("empty series is rejected") {
    CHECK_THROWS_AS(classify_outcome({}, 2.0, cfg), DomainError);
  }
}

TEST_CASE("uniqueness probe: all starts converge to the same limit") {
  SECTION("zero data") {
    const Grid g = Grid::make(1, 32, 20.0);
    SolverConfig cfg = quick_cfg();
    cfg.dt_init = 0.01;
    CHECK(uniqueness_probe(Field::zeros(g), Field::zeros(g), 2.0,
                           OperatorParams::make(1, 1, 0.5), 0.4, cfg) == 0.0);
  }
  SECTION("constant-field ODE") {
    const Grid g = Grid::make(1, 16, 10.0);
    SolverConfig cfg = quick_cfg();
    cfg.dt_init = 1e-4;
    const double probe =
        uniqueness_probe(Field::constant(g, 0.5), Field::zeros(g), 2.0,
                         OperatorParams::make(1, 1, 0.5), 0.1, cfg);
    CHECK(probe <= 1e-9);
  }
  SECTION("gaussian data, short interval") {
    const Grid g = Grid::make(1, 128, 60.0);
    SolverConfig cfg = quick_cfg();
    cfg.dt_init = 5e-4;
    const double probe =
        uniqueness_probe(gaussian_1d(g, 0.5, 0.0, 4.0), Field::zeros(g), 2.0,
                         OperatorParams::make(1, 1, 0.5), 0.05, cfg);
    CHECK(probe <= 10.0 * cfg.picard_tol);
  }
}
