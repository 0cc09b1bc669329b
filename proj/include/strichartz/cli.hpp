#pragma once

// Command implementations for the strichartz-stab tool: constants, verify,
// sweep and minimize. Each command builds a table plus metadata; emit() writes
// it as JSON or CSV. Parsing lives in run().

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strichartz/optimize.hpp"
#include "strichartz/paraboloid.hpp"
#include "strichartz/quad.hpp"
#include "strichartz/report.hpp"
#include "strichartz/sphere.hpp"
#include "strichartz/verify.hpp"

namespace strichartz::cli {

inline constexpr const char* program_name = "strichartz-stab";
inline constexpr const char* program_version = "1.0.0";
inline constexpr const char* config_env = "STRICHARTZ_STAB_CONFIG";

enum ExitCode : int { exit_ok = 0, exit_verification = 1, exit_usage = 2, exit_numeric = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using report::Cell;
using report::Json;
using report::Table;

struct Options {
  std::string command;
  std::string case_name = "paraboloid";
  std::string dims;             // empty: per-command default
  std::string suite = "all";
  std::string experiment;
  std::string grid;             // empty: per-experiment default
  double tol = 1e-10;
  std::string out;              // empty: stdout
  std::string format = "json";
  int budget = 2000;
  double seed_epsilon = 0.03;
  int basis_size = 6;
  std::string search_cache;
  bool meta_time = false;
};

struct CommandOutput {
  Json meta = Json::object();
  Table table;
  Json extra = Json::object();
  std::string rows_key = "rows";
  int exit_code = exit_ok;
};

// ---------------------------------------------------------------------------
// Argument helpers

/// "a..b" (empty when b < a), "a", or "a,b,c".
inline std::vector<int> parse_dims(const std::string& text) {
  const auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("invalid dimension '" + s + "' in --dims " + text);
    }
  };
  std::vector<int> out;
  const std::size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots));
    const int hi = to_int(text.substr(dots + 2));
    for (int d = lo; d <= hi; ++d) out.push_back(d);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(to_int(item));
    }
  }
  for (int d : out) {
    if (d < 1) throw UsageError("dimensions must be >= 1 (got " + std::to_string(d) + ")");
  }
  return out;
}

inline std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("invalid grid value '" + item + "'");
    }
  }
  return out;
}

inline quad::QuadratureSpec quadrature_spec(const Options& o) {
  if (!(o.tol > 0.0)) throw UsageError("--tol must be > 0");
  quad::QuadratureSpec s;
  s.abs_tol = o.tol;
  s.rel_tol = o.tol;
  return s;
}

inline Json quadrature_meta(const quad::QuadratureSpec& s) {
  Json j = Json::object();
  j["abs_tol"] = s.abs_tol;
  j["rel_tol"] = s.rel_tol;
  j["truncation_radius"] = s.truncation_radius;
  j["envelope_exponent"] = s.envelope_exponent;
  j["panel_width"] = s.panel_width;
  j["extrapolation_levels"] = s.extrapolation_levels;
  return j;
}

inline Json box_meta(const opt::SearchSpec& s) {
  Json box = Json::array();
  for (const opt::Bounds& b : s.box) box.push_back(Json::array({b.lo, b.hi}));
  return box;
}

inline Json base_meta(const Options& o) {
  Json m = Json::object();
  m["program"] = program_name;
  m["version"] = program_version;
  m["command"] = o.command;
  if (o.meta_time) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m["generated_at"] = buf;
  }
  return m;
}

inline Cell num(double v) { return v; }
inline Cell none() { return std::monostate{}; }

// ---------------------------------------------------------------------------
// constants

inline std::optional<double> read_search_cache(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read search cache '" + path + "'");
  try {
    const Json doc = Json::parse(in);
    return doc.at("quotient").get<double>();
  } catch (const std::exception& e) {
    throw std::runtime_error("search cache '" + path + "' is not a minimize result: " + e.what());
  }
}

inline CommandOutput cmd_constants(const Options& o) {
  using report::Method;
  using report::ReportRow;
  CommandOutput out;
  out.meta = base_meta(o);
  out.meta["case"] = o.case_name;
  std::vector<ReportRow> rows;
  if (o.case_name == "paraboloid") {
    const std::string dims_text = o.dims.empty() ? "1..4" : o.dims;
    out.meta["dims"] = dims_text;
    for (int d : parse_dims(dims_text)) {
      const paraboloid::Dim dim{d};
      const paraboloid::ConstantRecord sg = paraboloid::spectral_gap_paraboloid(dim);
      const paraboloid::ConstantRecord tp = paraboloid::two_peak_paraboloid(dim);
      const paraboloid::VanishingCheck v = paraboloid::check_tp_vanishing(dim);
      rows.push_back({sg.name, sg.exact_expression, sg.value, Method::closed_form, 0.0, "paraboloid spectral-gap constant"});
      rows.push_back({tp.name, tp.exact_expression, tp.value, Method::closed_form, 0.0, "paraboloid two-peak constant"});
      rows.push_back({"TP margin(d=" + std::to_string(d) + ")", "1 - 2^(-2/(d+2)) - (d^2+d+2)/(d+2)^3", v.margin,
                      Method::closed_form, 0.0, "inequality equivalent to C_SG < C_TP"});
    }
  } else if (o.case_name == "sphere") {
    rows.push_back({"M^2", "4 pi^2", sphere::constants.M * sphere::constants.M, Method::closed_form, 0.0,
                    "sharp sphere extension constant squared"});
    rows.push_back({"C_SG*", "8 pi^2 / 5", sphere::spectral_gap_sphere(), Method::closed_form, 0.0,
                    "sphere spectral-gap constant"});
    rows.push_back({"C_TP*", "(2 - sqrt 2) 4 pi^2", sphere::two_peak_sphere(), Method::closed_form, 0.0,
                    "sphere two-peak constant"});
    if (const auto bound = read_search_cache(o.search_cache)) {
      rows.push_back({"C_** upper bound", "", *bound, Method::optimization, 0.0, "cached minimize result"});
      out.meta["search_cache"] = o.search_cache;
    }
  } else {
    throw UsageError("--case must be paraboloid or sphere (got '" + o.case_name + "')");
  }
  out.table = report::table_of(rows);
  return out;
}

// ---------------------------------------------------------------------------
// verify

inline CommandOutput cmd_verify(const Options& o) {
  const std::set<std::string> valid{"specfun", "quadrature", "paraboloid", "sphere", "all"};
  if (!valid.count(o.suite)) throw UsageError("unknown suite '" + o.suite + "'");
  CommandOutput out;
  out.meta = base_meta(o);
  out.meta["suite"] = o.suite;
  const quad::QuadratureSpec spec = quadrature_spec(o);
  out.meta["quadrature"] = quadrature_meta(spec);
  out.table.columns = {"suite", "check", "residual", "tolerance", "passed", "note"};
  bool all = true;
  for (const verify::Check& c : verify::run_suite(o.suite, spec)) {
    out.table.add({c.suite, c.name, c.residual, c.tolerance, c.passed, c.note});
    all = all && c.passed;
  }
  out.extra["passed"] = all;
  out.exit_code = all ? exit_ok : exit_verification;
  return out;
}

// ---------------------------------------------------------------------------
// sweep

inline std::vector<double> default_grid(const std::string& experiment) {
  if (experiment == "two_peak_paraboloid" || experiment == "optimal_mu") return {1e-1, 1e-2, 1e-3, 1e-4};
  if (experiment == "two_peak_sphere") return {10.0, 20.0, 50.0, 100.0};
  if (experiment == "rayleigh_epsilon") return {0.005, 0.01, 0.02, 0.03};
  throw UsageError("unknown sweep experiment '" + experiment + "'");
}

inline CommandOutput cmd_sweep(const Options& o) {
  const std::string& ex = o.experiment;
  std::vector<double> grid = o.grid.empty() ? default_grid(ex) : parse_grid(o.grid);
  if (grid.empty()) throw UsageError("sweep grid is empty");
  const quad::QuadratureSpec spec = quadrature_spec(o);
  CommandOutput out;
  out.meta = base_meta(o);
  out.meta["experiment"] = ex;
  out.meta["grid"] = grid;
  out.meta["quadrature"] = quadrature_meta(spec);
  Table& t = out.table;

  const auto failed_row = [&](std::vector<Cell> prefix, const std::string& message) {
    prefix.push_back(std::string("failed"));
    while (prefix.size() + 1 < t.columns.size()) prefix.push_back(none());
    prefix.push_back(message);
    t.add(std::move(prefix));
  };

  if (ex == "two_peak_paraboloid" || ex == "optimal_mu") {
    const std::string dims_text = o.dims.empty() ? "2" : o.dims;
    out.meta["dims"] = dims_text;
    const std::vector<int> dims = parse_dims(dims_text);
    if (ex == "two_peak_paraboloid") {
      t.columns = {"d", "lambda", "status", "norm_sq", "qnorm_q", "deficit", "dist_sq", "mu_star", "quotient",
                   "error_estimate", "limit", "message"};
      for (int d : dims) {
        for (double lambda : grid) {
          try {
            const auto p = paraboloid::two_peak_quotient_paraboloid({d}, lambda, spec);
            t.add({std::int64_t{d}, lambda, std::string("ok"), p.norm_sq, p.qnorm_q, p.deficit, p.dist_sq, p.mu_star,
                   p.quotient, p.error_estimate, paraboloid::two_peak_paraboloid({d}).value, std::string()});
          } catch (const std::exception& e) {
            failed_row({std::int64_t{d}, lambda}, e.what());
          }
        }
      }
    } else {
      t.columns = {"d", "lambda", "status", "mu_star", "h_value", "mu_lo", "mu_hi", "one_minus_2lambda_pow",
                   "message"};
      for (int d : dims) {
        for (double lambda : grid) {
          try {
            const auto m = paraboloid::optimal_mu({d}, lambda);
            const double predicted = 1.0 - std::pow(2.0 * lambda, 0.5 * d);
            t.add({std::int64_t{d}, lambda, std::string("ok"), m.mu_star, m.h_value, m.lo, m.hi, predicted,
                   std::string()});
          } catch (const std::exception& e) {
            failed_row({std::int64_t{d}, lambda}, e.what());
          }
        }
      }
    }
  } else if (ex == "two_peak_sphere") {
    t.columns = {"y", "status", "norm_sq", "quartic_norm", "j22", "j22_error", "m_value", "dist_sq", "deficit",
                 "quotient", "error_estimate", "limit", "message"};
    out.meta["m_search_box"] = "|x| in [0, |y| + 30], axis angle in [0, pi]";
    for (double y : grid) {
      try {
        const auto p = sphere::two_peak_quotient_sphere(y, spec);
        t.add({y, std::string("ok"), p.norm_sq, p.quartic_norm, p.j22, p.j22_error, p.m_value, p.dist_sq, p.deficit,
               p.quotient, p.error_estimate, sphere::two_peak_sphere(), std::string()});
      } catch (const std::exception& e) {
        failed_row({y}, e.what());
      }
    }
  } else if (ex == "rayleigh_epsilon") {
    t.columns = {"epsilon", "status", "in_window", "norm_sq", "quartic_norm", "delta_quartic", "quartic_error",
                 "m_numeric", "r_star", "dist_sq", "deficit", "quotient", "error_estimate", "message"};
    out.meta["epsilon_window"] = sphere::epsilon_window();
    out.meta["m_search_box"] = box_meta(sphere::default_m_search());
    for (double eps : grid) {
      try {
        const auto p = sphere::rayleigh_f_epsilon(eps, spec);
        t.add({eps, std::string(p.in_window ? "ok" : "outside_window"), p.in_window, p.norm_sq, p.quartic_norm,
               p.delta_quartic, p.quartic_error, p.m_numeric, p.r_star, p.dist_sq, p.deficit, p.quotient,
               p.error_estimate,
               std::string(p.in_window ? "" : "eps outside the window; dist_sq from the full m(f) search")});
      } catch (const std::exception& e) {
        failed_row({eps}, e.what());
      }
    }
  } else {
    throw UsageError("unknown sweep experiment '" + ex + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// minimize

inline CommandOutput cmd_minimize(const Options& o) {
  if (o.basis_size < 3) throw UsageError("--basis-size must be >= 3");
  if (!(o.seed_epsilon > 0.0 && o.seed_epsilon < sphere::epsilon_window())) {
    throw UsageError("--seed-epsilon must lie in (0, " + report::format_double(sphere::epsilon_window()) + ")");
  }
  if (o.budget < 1) throw UsageError("--budget must be >= 1");
  sphere::SphereSearchOptions so;
  so.basis_size = o.basis_size;
  so.seed_epsilon = o.seed_epsilon;
  so.search.max_evaluations = o.budget;
  so.quadrature = quadrature_spec(o);
  const sphere::SphereSearchResult r = sphere::minimize_rayleigh_sphere(so);

  CommandOutput out;
  out.meta = base_meta(o);
  out.meta["basis_size"] = o.basis_size;
  out.meta["seed_epsilon"] = o.seed_epsilon;
  out.meta["budget"] = o.budget;
  out.meta["coefficient_box"] = Json::array({-so.coefficient_bound, so.coefficient_bound});
  out.meta["fixed_a0"] = std::sqrt(4.0 * sphere::pi);
  out.meta["m_search_box"] = box_meta(so.m_search);
  out.meta["quadrature"] = quadrature_meta(so.quadrature);
  out.rows_key = "trace";
  out.table.columns = {"evaluation", "quotient", "dist_sq", "deficit"};
  for (int k = 0; k <= o.basis_size; ++k) out.table.columns.push_back("a" + std::to_string(k));
  for (const sphere::TraceEntry& e : r.trace) {
    std::vector<Cell> row{std::int64_t{e.evaluation}, e.quotient, e.dist_sq, e.deficit};
    for (double a : e.coeffs) row.push_back(a);
    out.table.add(std::move(row));
  }
  out.extra["coeffs"] = r.best_coeffs;
  out.extra["quotient"] = r.quotient;
  out.extra["seed_quotient"] = r.seed_quotient;
  out.extra["evaluations"] = r.evaluations;
  out.extra["budget_exhausted"] = r.budget_exhausted;
  out.extra["success"] = r.success;
  out.extra["spectral_gap"] = sphere::spectral_gap_sphere();
  out.extra["two_peak"] = sphere::two_peak_sphere();
  out.exit_code = r.success ? exit_ok : exit_numeric;
  return out;
}

// ---------------------------------------------------------------------------
// Output and dispatch

inline void emit(const Options& o, const CommandOutput& c, std::ostream& stdout_stream) {
  std::ofstream file;
  std::ostream* os = &stdout_stream;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output file '" + o.out + "'");
    os = &file;
  }
  if (o.format == "csv") {
    report::write_csv(*os, c.table);
  } else {
    report::write_json(*os, c.meta, c.table, c.extra, c.rows_key);
  }
  os->flush();
  if (!*os) throw std::runtime_error("failed writing output");
}

inline CommandOutput dispatch(const Options& o) {
  if (o.format != "json" && o.format != "csv") throw UsageError("--format must be json or csv");
  if (o.command == "constants") return cmd_constants(o);
  if (o.command == "verify") return cmd_verify(o);
  if (o.command == "sweep") return cmd_sweep(o);
  if (o.command == "minimize") return cmd_minimize(o);
  throw UsageError("a subcommand is required: constants, verify, sweep or minimize");
}

/// key = value lines; '#' starts a comment. Keys are the long flag names.
inline std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(std::string(config_env) + " points to unreadable file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

inline void apply_config(Options& o, const std::map<std::string, std::string>& config,
                         const std::set<std::string>& given) {
  for (const auto& [key, value] : config) {
    if (given.count(key)) continue;
    try {
      if (key == "case") o.case_name = value;
      else if (key == "dims") o.dims = value;
      else if (key == "grid") o.grid = value;
      else if (key == "tol") o.tol = std::stod(value);
      else if (key == "out") o.out = value;
      else if (key == "format") o.format = value;
      else if (key == "budget") o.budget = std::stoi(value);
      else if (key == "seed-epsilon") o.seed_epsilon = std::stod(value);
      else if (key == "basis-size") o.basis_size = std::stoi(value);
      else if (key == "search-cache") o.search_cache = value;
      else if (key == "meta-time") o.meta_time = value == "true" || value == "1" || value == "yes";
      else throw UsageError("unknown config key '" + key + "'");
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("invalid value '" + value + "' for config key '" + key + "'");
    }
  }
}

/// Full command-line entry point. Returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Sharp-constant and stability computations for Strichartz / extension inequalities", program_name};
  app.set_version_flag("--version", program_version);
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  std::map<std::string, CLI::Option*> flags;
  flags["case"] = app.add_option("--case", o.case_name, "paraboloid or sphere (constants)");
  flags["dims"] = app.add_option("--dims", o.dims, "dimension range, e.g. 1..4 or 1,2");
  flags["grid"] = app.add_option("--grid", o.grid, "comma-separated sweep parameters");
  flags["tol"] = app.add_option("--tol", o.tol, "quadrature absolute and relative tolerance");
  flags["out"] = app.add_option("--out", o.out, "output file (default stdout)");
  flags["format"] = app.add_option("--format", o.format, "json or csv");
  flags["budget"] = app.add_option("--budget", o.budget, "objective evaluations for minimize");
  flags["seed-epsilon"] = app.add_option("--seed-epsilon", o.seed_epsilon, "seed f = 1 + eps Y_2^0 for minimize");
  flags["basis-size"] = app.add_option("--basis-size", o.basis_size, "highest harmonic degree N for minimize");
  flags["search-cache"] = app.add_option("--search-cache", o.search_cache, "minimize JSON output to report");
  flags["meta-time"] = app.add_flag("--meta-time,!--no-meta-time", o.meta_time, "add a timestamp to the metadata");

  CLI::App* constants = app.add_subcommand("constants", "tabulate the closed-form constants");
  CLI::App* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("suite", o.suite, "specfun, quadrature, paraboloid, sphere or all");
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweeps");
  sweep->add_option("experiment", o.experiment, "two_peak_paraboloid, two_peak_sphere, rayleigh_epsilon or optimal_mu")
      ->required();
  CLI::App* minimize = app.add_subcommand("minimize", "search for small sphere stability quotients");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    for (CLI::App* sub : {constants, verify, sweep, minimize}) {
      if (sub->parsed()) o.command = sub->get_name();
    }
    if (const char* path = std::getenv(config_env); path != nullptr && *path != '\0') {
      std::set<std::string> given;
      for (const auto& [name, opt] : flags) {
        if (opt->count() > 0) given.insert(name);
      }
      apply_config(o, read_config(path), given);
    }
    const CommandOutput result = dispatch(o);
    emit(o, result, out);
    return result.exit_code;
  } catch (const UsageError& e) {
    err << program_name << ": " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << program_name << ": " << e.what() << '\n';
    return exit_usage;
  } catch (const std::domain_error& e) {
    err << program_name << ": " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << program_name << ": " << e.what() << '\n';
    return exit_numeric;
  }
}

}  // namespace strichartz::cli
