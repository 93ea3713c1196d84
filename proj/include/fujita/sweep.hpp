#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fujita/config.hpp"
#include "fujita/csv.hpp"
#include "fujita/exponents.hpp"
#include "fujita/mild_solver.hpp"

// Orchestration of p-sweeps straddling the critical exponents. Each p value
// runs an independent integration; results are aggregated in submission order
// regardless of the worker schedule, so the output is thread-count invariant.

namespace fujita {

struct RunRecord {
  std::string run_id;  // FNV-1a hash of the canonical per-run config
  std::string config_snapshot;
  double p = 0;
  double p_F = 0;
  std::optional<double> p_crit;
  SolveStatus status = SolveStatus::Indeterminate;
  std::optional<double> t_star;
  std::optional<double> t_max_estimate;
  double final_linf = 0;
  double wall_time_sec = 0;
  bool gated = false;        // participates in the pass/fail verdict
  bool expect_blowup = false;
  bool expect_global = false;
  bool slow_regime = false;  // |p - p_F| < 0.05: excluded from gating
  std::string diagnostic;
};

struct SweepResult {
  std::vector<RunRecord> records;
  int exit_code = 0;  // 0 expected, 1 unexpected classification, 3 indeterminate
};

inline std::string run_id_of(const std::string& canonical_config) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config)));
  return buf;
}

namespace detail {

inline std::string opt_cell(const std::optional<double>& v) {
  return v ? csv_number(*v) : std::string();
}

}  // namespace detail

/// Run one integration per sweep p value and write `sweep.csv` to out_dir.
/// Expectations: p < p_F with positive-mass data and no forcing must blow up;
/// p > p_F with small data (|u0|_{p_c^s} <= 0.01) must be global. Runs within
/// 0.05 of p_F are flagged slow-regime and excluded from gating.
inline SweepResult run_sweep(const ExperimentConfig& cfg,
                             const std::string& out_dir = "") {
  if (cfg.sweep.empty()) throw ConfigError("run_sweep: empty sweep list");
  const Grid grid = cfg.make_grid();
  const OperatorParams params = cfg.make_operator();
  const Field u0 = cfg.make_ic(grid);
  const Field f = cfg.make_forcing(grid);
  const double p_F = fujita_exponent(cfg.d, cfg.s);
  const bool f_none = f.linf_norm() == 0.0;
  const double mass0 = u0.mass();

  SweepResult result;
  result.records.resize(cfg.sweep.size());

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= cfg.sweep.size()) return;
      const double p = cfg.sweep[i];
      RunRecord rec;
      rec.p = p;
      rec.p_F = p_F;
      if (cfg.d > 2.0 * cfg.s) rec.p_crit = forcing_critical_exponent(cfg.d, cfg.s);
      ExperimentConfig run_cfg = cfg;
      run_cfg.p = p;
      run_cfg.sweep.clear();
      rec.config_snapshot = run_cfg.canonical();
      rec.run_id = run_id_of(rec.config_snapshot);
      rec.slow_regime = std::abs(p - p_F) < 0.05;

      const double small_norm = u0.lp_norm(std::max(weissler_exponent(cfg.d, cfg.s, p), 1.0));
      const bool small_data = small_norm <= 0.01;
      rec.expect_blowup = p < p_F && mass0 > 0 && f_none;
      rec.expect_global = p > p_F && small_data;
      rec.gated = !rec.slow_regime && (rec.expect_blowup || rec.expect_global);

      const auto t0 = std::chrono::steady_clock::now();
      const SolveOutcome outcome = integrate(u0, f, p, params, cfg.solver);
      rec.wall_time_sec =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      rec.status = outcome.status;
      rec.t_star = outcome.t_star;
      rec.t_max_estimate = outcome.t_max_estimate;
      rec.final_linf = outcome.series.empty() ? 0.0 : outcome.series.back().linf;
      rec.diagnostic = outcome.diagnostic;
      result.records[i] = std::move(rec);
    }
  };

  const int nthreads =
      std::max(1, std::min<int>(cfg.threads, static_cast<int>(cfg.sweep.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  bool any_indeterminate = false, any_mismatch = false;
  for (const auto& rec : result.records) {
    if (rec.status == SolveStatus::Indeterminate) any_indeterminate = true;
    if (!rec.gated) continue;
    if (rec.expect_blowup && rec.status != SolveStatus::BlowUp) any_mismatch = true;
    if (rec.expect_global && rec.status != SolveStatus::Global) any_mismatch = true;
  }
  result.exit_code = any_indeterminate ? 3 : (any_mismatch ? 1 : 0);

  if (!out_dir.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& rec : result.records) {
      rows.push_back({csv_number(rec.p), csv_number(rec.p_F),
                      detail::opt_cell(rec.p_crit), to_string(rec.status),
                      detail::opt_cell(rec.t_star),
                      detail::opt_cell(rec.t_max_estimate),
                      csv_number(rec.final_linf)});
    }
    emit_csv(out_dir + "/sweep.csv",
             {"p", "p_F", "p_crit", "status", "t_star", "t_max_estimate",
              "final_linf"},
             rows);
  }
  return result;
}

}  // namespace fujita
