#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fujita/errors.hpp"
#include "fujita/families.hpp"
#include "fujita/grid.hpp"
#include "fujita/mild_solver.hpp"
#include "fujita/operator_core.hpp"

// Experiment configuration: sections in square brackets, `key = value` lines,
// '#' comments. Unknown sections and keys are errors (no silent typos), and
// all problems are reported together with line numbers.

namespace fujita {

struct FamilySpec {
  std::string name = "zero";
  FamilyParams params;
};

struct ExperimentConfig {
  // [grid]
  int d = 1;
  int n = 1024;
  double box_length = 200.0;
  // [operator]
  double a = 1.0;
  double b = 1.0;
  double s = 0.5;
  // [problem]
  double p = 2.0;
  FamilySpec ic;
  FamilySpec forcing;
  // [solver]
  SolverConfig solver;
  // [experiment]
  std::string mode;
  std::vector<double> sweep;
  std::string output = ".";
  std::vector<double> r_list;
  int time_nodes = 256;
  double grid_margin = 8.0;
  double decay_q = 1.0;
  double decay_r = std::numeric_limits<double>::infinity();
  double t_lo = 10.0;
  double t_hi = 1000.0;
  int t_points = 9;
  int threads = 1;

  Grid make_grid() const { return Grid::make(d, n, box_length); }
  OperatorParams make_operator() const { return OperatorParams::make(a, b, s); }
  Field make_ic(const Grid& g) const { return make_family(ic.name, ic.params, g); }
  Field make_forcing(const Grid& g) const {
    return make_family(forcing.name, forcing.params, g);
  }

  /// Deterministic serialization (fixed key order, 17 significant digits);
  /// identical configs produce identical strings.
  std::string canonical() const;
};

namespace detail {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline bool parse_double(const std::string& s, double* out) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) return false;
    *out = v;
    return true;
  } catch (...) {
    return false;
  }
}

inline bool parse_int(const std::string& s, int* out) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) return false;
    *out = static_cast<int>(v);
    return true;
  } catch (...) {
    return false;
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline const std::set<std::string>& known_families() {
  static const std::set<std::string> f{"zero", "none", "gaussian", "dipole",
                                       "ring", "neg_bump_pos_tail"};
  return f;
}

inline const std::set<std::string>& known_modes() {
  static const std::set<std::string> m{"simulate", "sweep",   "capacity",
                                       "decay",    "exponents", "nonexistence"};
  return m;
}

}  // namespace detail

inline std::string ExperimentConfig::canonical() const {
  using detail::format_g17;
  std::ostringstream os;
  os << "grid.d=" << d << ";grid.n=" << n
     << ";grid.box_length=" << format_g17(box_length) << ";operator.a="
     << format_g17(a) << ";operator.b=" << format_g17(b)
     << ";operator.s=" << format_g17(s) << ";problem.p=" << format_g17(p);
  auto fam = [&](const char* key, const FamilySpec& fs) {
    os << ";" << key << "=" << fs.name;
    for (const auto& [k, v] : fs.params) os << "," << k << "=" << format_g17(v);
  };
  fam("problem.ic", ic);
  fam("problem.forcing", forcing);
  os << ";solver.dt_init=" << format_g17(solver.dt_init)
     << ";solver.dt_min=" << format_g17(solver.dt_min)
     << ";solver.dt_max=" << format_g17(solver.dt_max)
     << ";solver.t_end=" << format_g17(solver.t_end)
     << ";solver.blowup_threshold=" << format_g17(solver.blowup_threshold)
     << ";solver.picard_tol=" << format_g17(solver.picard_tol)
     << ";solver.picard_max_iter=" << solver.picard_max_iter
     << ";solver.adapt_factor=" << format_g17(solver.adapt_factor)
     << ";solver.growth_cap=" << format_g17(solver.growth_cap)
     << ";solver.tail_tol=" << format_g17(solver.tail_tol)
     << ";solver.tail_guard=" << format_g17(solver.tail_guard);
  os << ";experiment.mode=" << mode << ";experiment.output=" << output;
  auto list = [&](const char* key, const std::vector<double>& xs) {
    os << ";" << key << "=";
    for (std::size_t i = 0; i < xs.size(); ++i)
      os << (i ? "," : "") << format_g17(xs[i]);
  };
  list("experiment.sweep", sweep);
  list("experiment.r_list", r_list);
  os << ";experiment.time_nodes=" << time_nodes
     << ";experiment.grid_margin=" << format_g17(grid_margin)
     << ";experiment.q=" << format_g17(decay_q)
     << ";experiment.r=" << format_g17(decay_r)
     << ";experiment.t_lo=" << format_g17(t_lo)
     << ";experiment.t_hi=" << format_g17(t_hi)
     << ";experiment.t_points=" << t_points;
  return os.str();
}

/// Parse and validate a configuration text. Throws ConfigError carrying every
/// problem found, each tagged with its line number.
inline ExperimentConfig parse_config(const std::string& text) {
  using namespace detail;
  ExperimentConfig cfg;
  std::vector<std::string> errors;
  std::map<std::string, int> seen;  // "section.key" -> line

  static const std::map<std::string, std::set<std::string>> schema = {
      {"grid", {"d", "n", "box_length"}},
      {"operator", {"a", "b", "s"}},
      {"problem", {"p", "ic", "forcing"}},
      {"solver",
       {"dt_init", "dt_min", "dt_max", "t_end", "blowup_threshold", "picard_tol",
        "picard_max_iter", "adapt_factor", "growth_cap", "tail_tol", "tail_guard"}},
      {"experiment",
       {"mode", "sweep", "output", "r_list", "time_nodes", "grid_margin", "q", "r",
        "t_lo", "t_hi", "t_points", "threads"}},
  };

  auto err = [&](int line, const std::string& msg) {
    errors.push_back("line " + std::to_string(line) + ": " + msg);
  };

  auto parse_family = [&](int line, const std::string& value, FamilySpec* out) {
    std::istringstream is(value);
    std::string tok;
    bool first = true;
    FamilySpec fs;
    while (is >> tok) {
      if (first) {
        fs.name = tok;
        first = false;
        continue;
      }
      const auto eq = tok.find('=');
      if (eq == std::string::npos) {
        err(line, "family parameter '" + tok + "' is not of the form key=value");
        return;
      }
      double v = 0;
      if (!parse_double(tok.substr(eq + 1), &v)) {
        err(line, "family parameter '" + tok + "' has a non-numeric value");
        return;
      }
      fs.params[tok.substr(0, eq)] = v;
    }
    if (first) {
      err(line, "empty family specification");
      return;
    }
    if (!known_families().count(fs.name)) {
      err(line, "unknown family '" + fs.name + "'");
      return;
    }
    *out = fs;
  };

  std::istringstream input(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(input, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        err(line_no, "malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!schema.count(section)) {
        err(line_no, "unknown section [" + section + "]");
        section.clear();
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      err(line_no, "expected 'key = value'");
      continue;
    }
    if (section.empty()) {
      err(line_no, "key outside of any section");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!schema.at(section).count(key)) {
      err(line_no, "unknown key '" + key + "' in section [" + section + "]");
      continue;
    }
    const std::string qual = section + "." + key;
    if (seen.count(qual)) {
      err(line_no, "duplicate key '" + qual + "' (first set on line " +
                       std::to_string(seen[qual]) + ")");
      continue;
    }
    seen[qual] = line_no;

    auto set_d = [&](double* dst) {
      if (!parse_double(value, dst)) err(line_no, "'" + key + "' must be a number");
    };
    auto set_i = [&](int* dst) {
      if (!parse_int(value, dst)) err(line_no, "'" + key + "' must be an integer");
    };
    auto set_list = [&](std::vector<double>* dst) {
      dst->clear();
      for (const auto& item : split(value, ',')) {
        double v = 0;
        if (item.empty() || !parse_double(item, &v)) {
          err(line_no, "'" + key + "' must be a comma-separated number list");
          dst->clear();
          return;
        }
        dst->push_back(v);
      }
    };

    if (qual == "grid.d") set_i(&cfg.d);
    else if (qual == "grid.n") set_i(&cfg.n);
    else if (qual == "grid.box_length") set_d(&cfg.box_length);
    else if (qual == "operator.a") set_d(&cfg.a);
    else if (qual == "operator.b") set_d(&cfg.b);
    else if (qual == "operator.s") set_d(&cfg.s);
    else if (qual == "problem.p") set_d(&cfg.p);
    else if (qual == "problem.ic") parse_family(line_no, value, &cfg.ic);
    else if (qual == "problem.forcing") parse_family(line_no, value, &cfg.forcing);
    else if (qual == "solver.dt_init") set_d(&cfg.solver.dt_init);
    else if (qual == "solver.dt_min") set_d(&cfg.solver.dt_min);
    else if (qual == "solver.dt_max") set_d(&cfg.solver.dt_max);
    else if (qual == "solver.t_end") set_d(&cfg.solver.t_end);
    else if (qual == "solver.blowup_threshold") set_d(&cfg.solver.blowup_threshold);
    else if (qual == "solver.picard_tol") set_d(&cfg.solver.picard_tol);
    else if (qual == "solver.picard_max_iter") set_i(&cfg.solver.picard_max_iter);
    else if (qual == "solver.adapt_factor") set_d(&cfg.solver.adapt_factor);
    else if (qual == "solver.growth_cap") set_d(&cfg.solver.growth_cap);
    else if (qual == "solver.tail_tol") set_d(&cfg.solver.tail_tol);
    else if (qual == "solver.tail_guard") set_d(&cfg.solver.tail_guard);
    else if (qual == "experiment.mode") cfg.mode = value;
    else if (qual == "experiment.sweep") set_list(&cfg.sweep);
    else if (qual == "experiment.output") cfg.output = value;
    else if (qual == "experiment.r_list") set_list(&cfg.r_list);
    else if (qual == "experiment.time_nodes") set_i(&cfg.time_nodes);
    else if (qual == "experiment.grid_margin") set_d(&cfg.grid_margin);
    else if (qual == "experiment.q") set_d(&cfg.decay_q);
    else if (qual == "experiment.r") set_d(&cfg.decay_r);
    else if (qual == "experiment.t_lo") set_d(&cfg.t_lo);
    else if (qual == "experiment.t_hi") set_d(&cfg.t_hi);
    else if (qual == "experiment.t_points") set_i(&cfg.t_points);
    else if (qual == "experiment.threads") set_i(&cfg.threads);
  }

  // Required keys.
  for (const char* req : {"grid.d", "grid.n", "grid.box_length", "operator.a",
                          "operator.b", "operator.s", "problem.p", "problem.ic",
                          "solver.t_end", "experiment.mode"}) {
    if (!seen.count(req))
      errors.push_back(std::string("missing required key '") + req + "'");
  }

  auto line_of = [&](const std::string& qual) {
    auto it = seen.find(qual);
    return it == seen.end() ? 0 : it->second;
  };

  // Semantic validation (only when the key was parsed).
  if (seen.count("operator.s") && !(cfg.s > 0.0 && cfg.s < 1.0))
    err(line_of("operator.s"), "s must lie in (0,1)");
  if (seen.count("operator.a") && (cfg.a < 0 || cfg.b < 0 || cfg.a + cfg.b <= 0))
    err(line_of("operator.a"), "need a >= 0, b >= 0, a + b > 0");
  if (seen.count("problem.p") && !(cfg.p > 1.0))
    err(line_of("problem.p"), "p must be > 1");
  if (seen.count("grid.d") && (cfg.d < 1 || cfg.d > 3))
    err(line_of("grid.d"), "d must be in {1,2,3}");
  if (seen.count("grid.n") && (!is_pow2(cfg.n) || cfg.n < 16))
    err(line_of("grid.n"), "n must be a power of two >= 16");
  if (seen.count("grid.box_length") && !(cfg.box_length > 0))
    err(line_of("grid.box_length"), "box_length must be > 0");
  if (seen.count("experiment.mode") && !detail::known_modes().count(cfg.mode))
    err(line_of("experiment.mode"), "unknown mode '" + cfg.mode + "'");
  if (seen.count("experiment.threads") && cfg.threads < 1)
    err(line_of("experiment.threads"), "threads must be >= 1");

  // Mode-specific requirements.
  if (cfg.mode == "sweep" && cfg.sweep.empty())
    errors.push_back("mode 'sweep' requires a nonempty 'sweep' list in [experiment]");
  if ((cfg.mode == "capacity" || cfg.mode == "nonexistence") && cfg.r_list.empty())
    errors.push_back("mode '" + cfg.mode +
                     "' requires a nonempty 'r_list' in [experiment]");
  if (cfg.mode == "nonexistence" &&
      (!seen.count("problem.forcing") || cfg.forcing.name == "zero" ||
       cfg.forcing.name == "none"))
    errors.push_back(
        "mode 'nonexistence' requires a forcing entry in [problem] "
        "(the functional tests int f phi)");

  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

}  // namespace fujita
