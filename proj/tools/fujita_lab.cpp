// fujita-lab: spectral simulation and verification laboratory for the
// semilinear heat equation driven by -a*Lap + b*(-Lap)^s.
//
// Subcommands: exponents, simulate, sweep, capacity, nonexistence, decay,
// verify. Exit codes: 0 success / expected classifications, 1 unexpected
// classification, 2 configuration error, 3 indeterminate result.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fujita/fujita.hpp"

namespace {

using namespace fujita;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load_config(const std::string& path, int threads_flag) {
  ExperimentConfig cfg = parse_config(read_file(path));
  if (threads_flag > 0) cfg.threads = threads_flag;
  if (const char* env = std::getenv("FUJITA_LAB_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) cfg.threads = t;
  }
  return cfg;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
}

std::string opt_str(const std::optional<double>& v) {
  return v ? csv_number(*v) : std::string();
}

int cmd_exponents(int d, double s, std::optional<double> p, bool as_csv,
                  const std::string& out_dir) {
  const double p_eff = p.value_or(0.0);
  ExponentReport rep;
  if (p) {
    rep = exponent_report(d, s, *p);
  } else {
    rep.d = d;
    rep.s = s;
    rep.p = 0;
    rep.p_F = fujita_exponent(d, s);
    if (d > 2.0 * s) rep.p_crit = forcing_critical_exponent(d, s);
  }

  std::vector<std::string> header{"d", "s", "p", "p_F", "p_crit", "p_c_s", "k",
                                  "q", "rho"};
  std::vector<std::string> row{
      std::to_string(d),
      csv_number(s),
      p ? csv_number(*p) : std::string(),
      csv_number(rep.p_F),
      rep.p_crit ? csv_number(*rep.p_crit) : std::string(),
      p ? csv_number(rep.p_c_s) : std::string(),
      p ? csv_number(rep.k) : std::string(),
      rep.q ? csv_number(*rep.q) : std::string(),
      rep.rho ? csv_number(*rep.rho) : std::string()};

  if (as_csv) {
    std::fputs(csv_render(header, {row}).c_str(), stdout);
  } else {
    std::printf("%-8s %s\n", "d", std::to_string(d).c_str());
    std::printf("%-8s %.17g\n", "s", s);
    if (p) std::printf("%-8s %.17g\n", "p", p_eff);
    std::printf("%-8s %.17g\n", "p_F", rep.p_F);
    if (rep.p_crit) std::printf("%-8s %.17g\n", "p_crit", *rep.p_crit);
    else std::printf("%-8s undefined (d <= 2s)\n", "p_crit");
    if (p) {
      std::printf("%-8s %.17g\n", "p_c_s", rep.p_c_s);
      std::printf("%-8s %.17g\n", "k", rep.k);
      if (rep.q) std::printf("%-8s %.17g\n", "q", *rep.q);
      if (rep.rho) std::printf("%-8s %.17g\n", "rho", *rep.rho);
    }
  }
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    emit_csv(out_dir + "/exponents.csv", header, {row});
  }
  return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
  const Grid grid = cfg.make_grid();
  const auto params = cfg.make_operator();
  const Field u0 = cfg.make_ic(grid);
  const Field f = cfg.make_forcing(grid);
  const SolveOutcome out = integrate(u0, f, cfg.p, params, cfg.solver);

  ensure_dir(out_dir);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(out.series.size());
  for (const auto& s : out.series)
    rows.push_back({csv_number(s.t), csv_number(s.l1), csv_number(s.l2),
                    csv_number(s.linf), csv_number(s.mass)});
  emit_csv(out_dir + "/series.csv", {"t", "l1", "l2", "linf", "mass"}, rows);
  emit_csv(out_dir + "/summary.csv", {"status", "t_star", "t_max_estimate"},
           {{to_string(out.status), opt_str(out.t_star), opt_str(out.t_max_estimate)}});
  std::printf("%s,%s,%s\n", to_string(out.status), opt_str(out.t_star).c_str(),
              opt_str(out.t_max_estimate).c_str());
  if (!out.diagnostic.empty()) std::fprintf(stderr, "%s\n", out.diagnostic.c_str());
  return out.status == SolveStatus::Indeterminate ? 3 : 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const SweepResult res = run_sweep(cfg, out_dir);
  for (const auto& rec : res.records) {
    std::printf("p=%-8g %-13s t_star=%-12s run=%s%s\n", rec.p,
                to_string(rec.status), opt_str(rec.t_star).c_str(),
                rec.run_id.c_str(), rec.slow_regime ? " [slow-regime]" : "");
    if (!rec.diagnostic.empty())
      std::fprintf(stderr, "p=%g: %s\n", rec.p, rec.diagnostic.c_str());
  }
  return res.exit_code;
}

int cmd_capacity(const ExperimentConfig& cfg, const std::string& out_dir) {
  ScalingOptions opts;
  opts.d = cfg.d;
  opts.n = cfg.n;
  opts.box_margin = cfg.grid_margin;
  opts.time_nodes = cfg.time_nodes;
  const auto params = cfg.make_operator();
  const auto slopes = scaling_slopes(cfg.p, params, cfg.r_list, nullptr, opts);

  // T-sweep at the median R for the I1 time-scaling slope.
  const double r_mid = cfg.r_list[cfg.r_list.size() / 2];
  const Grid g_mid = Grid::make(cfg.d, cfg.n, cfg.grid_margin * r_mid);
  std::vector<double> lt, li;
  const double t_base = std::pow(r_mid, 2.0 * cfg.s);
  for (double factor : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto pair = build_test_function(t_base * factor, r_mid, cfg.p);
    const auto rep = capacity_integrals(pair, params, g_mid, cfg.time_nodes);
    lt.push_back(std::log(pair.T));
    li.push_back(std::log(rep.I1));
  }
  const double slope_i1_t = fit_line(lt, li).slope;

  ensure_dir(out_dir);
  std::vector<std::vector<std::string>> rows;
  for (const auto& rep : slopes.reports)
    rows.push_back({csv_number(rep.R), csv_number(rep.T), csv_number(rep.I1),
                    csv_number(rep.I2), csv_number(slopes.I1.slope),
                    csv_number(slope_i1_t), csv_number(slopes.I2.slope)});
  emit_csv(out_dir + "/capacity.csv",
           {"R", "T", "I1", "I2", "slope_I1_R", "slope_I1_T", "slope_I2_R"}, rows);
  std::printf("slope_I1_R=%.6g slope_I1_T=%.6g slope_I2_R=%.6g (stderr %.2g)\n",
              slopes.I1.slope, slope_i1_t, slopes.I2.slope, slopes.I2.stderr_);
  return 0;
}

int cmd_nonexistence(const ExperimentConfig& cfg, const std::string& out_dir) {
  const Grid grid = cfg.make_grid();
  const auto params = cfg.make_operator();
  const Field u0 = cfg.make_ic(grid);
  const Field f = cfg.make_forcing(grid);
  const auto rep = nonexistence_report(u0, f, cfg.p, params, cfg.r_list);

  ensure_dir(out_dir);
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : rep.rows)
    rows.push_back({csv_number(r.R), csv_number(r.T), csv_number(r.f_phi),
                    csv_number(r.u0_term), csv_number(r.capacity_term)});
  emit_csv(out_dir + "/nonexistence.csv",
           {"R", "T", "f_phi", "u0_term", "capacity_term"}, rows);
  std::printf("contradiction_trend=%s\n", rep.contradiction_trend ? "yes" : "no");
  return 0;
}

int cmd_decay(const ExperimentConfig& cfg, const std::string& out_dir) {
  const Grid grid = cfg.make_grid();
  const auto params = cfg.make_operator();
  const Field probe = cfg.make_ic(grid);
  std::vector<double> t_grid;
  const double ratio = std::pow(cfg.t_hi / cfg.t_lo, 1.0 / (cfg.t_points - 1));
  for (int i = 0; i < cfg.t_points; ++i)
    t_grid.push_back(cfg.t_lo * std::pow(ratio, i));
  const auto fit = decay_fit(params, cfg.decay_q, cfg.decay_r, probe, t_grid);

  ensure_dir(out_dir);
  emit_csv(out_dir + "/decay.csv",
           {"q", "r", "t_lo", "t_hi", "fitted_slope", "theory_slope", "rel_error"},
           {{csv_number(fit.q), csv_number(fit.r), csv_number(fit.t_lo),
             csv_number(fit.t_hi), csv_number(fit.fitted_slope),
             csv_number(fit.theory_slope), csv_number(fit.rel_error)}});
  std::printf("fitted=%.6g theory=%.6g rel_error=%.3g\n", fit.fitted_slope,
              fit.theory_slope, fit.rel_error);
  return 0;
}

int cmd_verify(std::uint64_t seed) {
  const auto rep = run_verification_suite(seed, 100);
  for (const auto& c : rep.checks)
    std::printf("%-55s worst=%-12.3g tol=%-8.1g %s\n", c.name.c_str(), c.worst,
                c.tolerance, c.passed ? "PASS" : "FAIL");
  return rep.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral lab for the mixed local-nonlocal semilinear heat equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int threads = 0;
  std::uint64_t seed = 12345;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "worker threads for sweeps");
  app.add_option("--seed", seed, "seed for randomized verification");

  auto* exps = app.add_subcommand("exponents", "critical exponents for (d, s[, p])");
  int exp_d = 1;
  double exp_s = 0.5;
  double exp_p = 0;
  bool exp_csv = false;
  exps->add_option("--d", exp_d, "spatial dimension")->required();
  exps->add_option("--s", exp_s, "fractional order in (0,1)")->required();
  exps->add_option("--p", exp_p, "nonlinearity exponent (> 1)");
  exps->add_flag("--csv", exp_csv, "print CSV instead of aligned text");

  auto add_config_sub = [&](const char* name, const char* desc) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "experiment config file")->required();
    return sub;
  };
  auto* simulate = add_config_sub("simulate", "single integration, series.csv");
  auto* sweep = add_config_sub("sweep", "p sweep across the critical exponents");
  auto* capacity = add_config_sub("capacity", "capacity-integral R sweep");
  auto* nonexist = add_config_sub("nonexistence", "nonexistence functional table");
  auto* decay = add_config_sub("decay", "semigroup decay-slope fit");
  auto* verify = app.add_subcommand("verify", "randomized inequality suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (exps->parsed()) {
      std::optional<double> p;
      if (exps->count("--p")) p = exp_p;
      return cmd_exponents(exp_d, exp_s, p, exp_csv, out_dir == "." ? "" : out_dir);
    }
    if (verify->parsed()) return cmd_verify(seed);

    const ExperimentConfig cfg = load_config(config_path, threads);
    if (simulate->parsed()) return cmd_simulate(cfg, out_dir);
    if (sweep->parsed()) return cmd_sweep(cfg, out_dir);
    if (capacity->parsed()) return cmd_capacity(cfg, out_dir);
    if (nonexist->parsed()) return cmd_nonexistence(cfg, out_dir);
    if (decay->parsed()) return cmd_decay(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error:\n%s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
