#pragma once

// Command dispatch for the sldlab tool. Argument parsing lives in
// tools/sldlab.cpp; everything here is callable in-process.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "sldlab/ambiguity.hpp"
#include "sldlab/blaschke.hpp"
#include "sldlab/capacity.hpp"
#include "sldlab/equivalence.hpp"
#include "sldlab/io.hpp"
#include "sldlab/rootfind.hpp"
#include "sldlab/version.hpp"

namespace sldlab::cli {

using io::json;

enum class ExitCode : int { ok = 0, error = 1, bound_violation = 2 };

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  double tol_circle = 1e-9;
  double tol_root = 1e-8;
  /// Dedupe and output-binning tolerance.
  double round = 1e-7;
  std::string json_path;
  std::string csv_path;
  std::uint64_t seed = 20240101;
  unsigned workers = 1;
  /// "m=A..B" for `gap`.
  std::string sweep;
  /// `transform`: identity, sqrt, or affine.
  std::string map = "identity";
  double affine_a = 1.0;
  double affine_b = 0.0;
};

inline void validate(const RunConfig& cfg) {
  static const std::vector<std::string> commands{"analyze", "equiv", "enumerate", "factor", "gap", "transform"};
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + cfg.command + "'");
  }
  if (!(cfg.tol_circle > 0.0 && cfg.tol_circle <= 1e-3)) {
    throw Error(ErrorCode::InvalidArgument, "--tol-circle must lie in (0, 1e-3]");
  }
  if (!(cfg.tol_root > 0.0 && cfg.tol_root <= 1e-4)) {
    throw Error(ErrorCode::InvalidArgument, "--tol-root must lie in (0, 1e-4]");
  }
  if (!(cfg.round > 0.0 && cfg.round <= 1e-3)) {
    throw Error(ErrorCode::InvalidArgument, "--round must lie in (0, 1e-3]");
  }
  if (cfg.workers < 1 || cfg.workers > 256) throw Error(ErrorCode::InvalidArgument, "--workers must lie in [1, 256]");
}

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

inline LogLevel log_level() {
  const char* v = std::getenv("SLD_LAB_LOG");
  if (v == nullptr) return LogLevel::quiet;
  const std::string s(v);
  if (s == "debug" || s == "2") return LogLevel::debug;
  if (s == "info" || s == "1") return LogLevel::info;
  return LogLevel::quiet;
}

inline void log(std::ostream& err, LogLevel level, const std::string& msg) {
  if (log_level() >= level) err << "[sldlab] " << msg << '\n';
}

namespace detail {

inline RootOptions root_options(const RunConfig& cfg) {
  RootOptions r;
  r.tol = cfg.tol_root;
  r.circle_band = cfg.tol_circle;
  r.seed = cfg.seed;
  return r;
}

inline AmbiguityOptions ambiguity_options(const RunConfig& cfg) {
  AmbiguityOptions a;
  a.roots = root_options(cfg);
  a.dedupe_tol = cfg.round;
  a.workers = cfg.workers;
  return a;
}

inline json config_json(const RunConfig& cfg) {
  return json{{"command", cfg.command},
              {"inputs", cfg.inputs},
              {"tol_circle", cfg.tol_circle},
              {"tol_root", cfg.tol_root},
              {"round", cfg.round},
              {"seed", cfg.seed},
              {"workers", cfg.workers},
              {"sweep", cfg.sweep},
              {"map", cfg.map}};
}

inline void require_inputs(const RunConfig& cfg, std::size_t n) {
  if (cfg.inputs.size() != n) {
    throw Error(ErrorCode::InvalidArgument,
                cfg.command + " expects " + std::to_string(n) + " input file(s), got " + std::to_string(cfg.inputs.size()));
  }
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

inline std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

/// Uniform time samples of every class, for plotting.
inline std::string class_samples_csv(const ClassSet& cs) {
  std::ostringstream s;
  s << "class,j,t,re,im,intensity\n";
  const int n = std::max(64, 8 * (2 * cs.source_m + 1));
  for (std::size_t c = 0; c < cs.representatives.size(); ++c) {
    const auto& p = cs.representatives[c];
    const auto samples = sample_grid(p, n);
    for (int j = 0; j < n; ++j) {
      const cplx y = samples[static_cast<std::size_t>(j)];
      s << c << ',' << j << ',' << fmt(j * p.period() / n) << ',' << fmt(y.real()) << ',' << fmt(y.imag()) << ','
        << fmt(std::norm(y)) << '\n';
    }
  }
  return s.str();
}

inline std::pair<int, int> parse_sweep(const std::string& s) {
  static const std::regex re(R"(^(?:m=)?(\d+)\.\.(\d+)$)");
  std::smatch mt;
  if (!std::regex_match(s, mt, re)) throw Error(ErrorCode::InvalidArgument, "--sweep expects m=A..B, got '" + s + "'");
  const int a = std::stoi(mt[1]), b = std::stoi(mt[2]);
  if (a < 1 || b < a || b > 8) throw Error(ErrorCode::InvalidArgument, "--sweep range must satisfy 1 <= A <= B <= 8");
  return {a, b};
}

/// Family used by `gap --sweep` without inputs: every intensity class of one
/// seeded generic signal of order m.
inline Constellation sweep_family(int m, const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(m));
  return flip_class_constellation(random_signal(m, rng), false, ambiguity_options(cfg));
}

struct Outcome {
  json result;
  ExitCode code = ExitCode::ok;
  std::string csv;
};

inline Outcome run_analyze(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const CoeffPoly f = io::poly_from_json(io::parse_file(cfg.inputs[0]));
  const RootMultiset r = find_roots(f, root_options(cfg));
  const OrbitDecomposition d = pair_reciprocal(r);
  const BlaschkeProduct b = from_inside_zeros(r);
  json factors = json::array();
  for (const auto& x : b.factors()) factors.push_back(json{{"zero", io::to_json(x.zero)}, {"exponent", x.exponent}});
  Outcome o;
  o.result = json{{"polynomial", io::to_json(f)},
                  {"roots", io::to_json(r)},
                  {"orbits", io::to_json(d)},
                  {"inside_blaschke", json{{"tau", io::to_json(b.tau())}, {"n0", b.n0()}, {"factors", factors}}}};
  return o;
}

inline Outcome run_equiv(const RunConfig& cfg) {
  require_inputs(cfg, 2);
  const CoeffPoly f = io::poly_from_json(io::parse_file(cfg.inputs[0]), "inputs[0]");
  const CoeffPoly g = io::poly_from_json(io::parse_file(cfg.inputs[1]), "inputs[1]");
  MagnitudeOptions mo;
  mo.roots = root_options(cfg);
  const auto structural = struct_magnitude_equiv(f, g, mo);
  const int n = std::max(1024, 4 * (std::max(f.degree(), 0) + std::max(g.degree(), 0)) + 1);
  const auto oracle = numeric_magnitude_equiv(f, g, n, 1e-6);
  Outcome o;
  json verdict = io::to_json(structural);
  o.result = json{{"verdict", verdict}, {"oracle", io::to_json(oracle)}, {"agree", structural.related == oracle.related}};
  o.result["degree_match"] = structural.related ? json(f.degree() == g.degree()) : json(nullptr);
  if (structural.related != oracle.related) o.code = ExitCode::bound_violation;
  return o;
}

inline Outcome class_outcome(const RunConfig& cfg, const ClassSet& cs) {
  const BoundReport cert = certify_bound(cs);
  Outcome o;
  o.result = json{{"classes", io::to_json(cs)}, {"certificate", io::to_json(cert)}};
  if (!cert.pass || cert.max_residual > 1e-8) o.code = ExitCode::bound_violation;
  if (!cfg.csv_path.empty()) o.csv = class_samples_csv(cs);
  return o;
}

inline Outcome run_enumerate(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const TrigPoly p = io::trig_from_json(io::parse_file(cfg.inputs[0]));
  return class_outcome(cfg, enumerate_classes(p, ambiguity_options(cfg)));
}

inline Outcome run_factor(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const AutocorrSeq s = io::autocorr_from_json(io::parse_file(cfg.inputs[0]));
  return class_outcome(cfg, factor_sld(s, ambiguity_options(cfg)));
}

inline Outcome run_gap(const RunConfig& cfg) {
  MiOptions mo;
  mo.binning_tol = cfg.round;
  Outcome o;
  std::vector<std::pair<std::string, Constellation>> items;
  for (const auto& path : cfg.inputs) items.emplace_back(path, io::constellation_from_json(io::parse_file(path)));

  if (!cfg.sweep.empty()) {
    const auto [lo, hi] = parse_sweep(cfg.sweep);
    if (items.empty()) {
      for (int m = lo; m <= hi; ++m) items.emplace_back("family:m=" + std::to_string(m), sweep_family(m, cfg));
    } else {
      std::erase_if(items, [lo = lo, hi = hi](const auto& it) { return it.second.m() < lo || it.second.m() > hi; });
    }
    std::ostringstream csv;
    csv << "m,I_xy,I_xs,per_dim_gap,bound\n";
    json rows = json::array();
    for (const auto& [name, c] : items) {
      const GapReport g = gap_experiment(c, mo);
      csv << g.m << ',' << fmt(g.I_xy) << ',' << fmt(g.I_xs) << ',' << fmt(g.per_dim_gap) << ',' << fmt(g.bound) << '\n';
      json row = io::to_json(g);
      row["source"] = name;
      rows.push_back(row);
      if (!g.pass) o.code = ExitCode::bound_violation;
    }
    o.csv = csv.str();
    o.result = json{{"rows", rows}};
    return o;
  }

  if (items.empty()) throw Error(ErrorCode::InvalidArgument, "gap expects constellation files or --sweep");
  json reports = json::array();
  for (const auto& [name, c] : items) {
    json r = io::to_json(gap_experiment(c, mo));
    r["source"] = name;
    if (!r["pass"].get<bool>()) o.code = ExitCode::bound_violation;
    reports.push_back(r);
  }
  o.result = items.size() == 1 ? reports[0] : json{{"reports", reports}};
  return o;
}

inline Outcome run_transform(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const AutocorrSeq s = io::autocorr_from_json(io::parse_file(cfg.inputs[0]));
  std::function<double(double)> phi, inv;
  if (cfg.map == "identity") {
    phi = inv = [](double x) { return x; };
  } else if (cfg.map == "sqrt") {
    // Rounding can leave zero intensities a hair below 0.
    phi = [](double x) { return std::sqrt(std::max(x, 0.0)); };
    inv = [](double y) { return y * y; };
  } else if (cfg.map == "affine") {
    const double a = cfg.affine_a, b = cfg.affine_b;
    if (a == 0.0) throw Error(ErrorCode::NonInvertibleOnRange, "affine map needs a != 0");
    phi = [a, b](double x) { return a * x + b; };
    inv = [a, b](double y) { return (y - b) / a; };
  } else {
    throw Error(ErrorCode::InvalidArgument, "--map must be identity, sqrt, or affine");
  }
  const int n = std::max(64, 8 * (4 * s.m() + 1));
  const auto samples = sample_intensity(s, n);
  const auto t = measurement_transform(samples, phi, inv);
  const AutocorrSeq recovered = autocorr_from_samples(t.recovered, s.m(), s.period());
  const auto opt = ambiguity_options(cfg);
  const ClassSet before = factor_sld(s, opt);
  const ClassSet after = factor_sld(recovered, opt);
  const bool invariant = same_classes(before, after, 1e-6);
  Outcome o;
  o.result = json{{"map", cfg.map},
                  {"samples", n},
                  {"max_roundtrip_error", t.max_roundtrip_error},
                  {"classes_before", before.exact_count},
                  {"classes_after", after.exact_count},
                  {"factorization_invariant", invariant}};
  if (!invariant) o.code = ExitCode::bound_violation;
  return o;
}

}  // namespace detail

/// Runs one command. The JSON report goes to cfg.json_path (stdout when
/// empty); CSV output, when produced, goes to cfg.csv_path, or to stdout for
/// `gap --sweep` without a CSV path.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    validate(cfg);
    log(err, LogLevel::info, "running " + cfg.command);
    detail::Outcome o;
    if (cfg.command == "analyze") o = detail::run_analyze(cfg);
    else if (cfg.command == "equiv") o = detail::run_equiv(cfg);
    else if (cfg.command == "enumerate") o = detail::run_enumerate(cfg);
    else if (cfg.command == "factor") o = detail::run_factor(cfg);
    else if (cfg.command == "gap") o = detail::run_gap(cfg);
    else o = detail::run_transform(cfg);

    const json report{{"tool", "sldlab"},
                      {"version", kVersion},
                      {"config", detail::config_json(cfg)},
                      {"status", o.code == ExitCode::ok ? "pass" : "bound_violation"},
                      {"result", o.result}};
    const bool sweep_to_stdout = cfg.command == "gap" && !cfg.sweep.empty() && cfg.csv_path.empty();
    if (sweep_to_stdout) {
      out << o.csv;
      if (!cfg.json_path.empty()) detail::write_text(cfg.json_path, report.dump(2) + "\n", out);
    } else {
      detail::write_text(cfg.json_path, report.dump(2) + "\n", out);
      if (!cfg.csv_path.empty() && !o.csv.empty()) detail::write_text(cfg.csv_path, o.csv, out);
    }
    log(err, LogLevel::info, "exit " + std::to_string(static_cast<int>(o.code)));
    return static_cast<int>(o.code);
  } catch (const Error& e) {
    err << "sldlab: " << e.what() << '\n';
    return static_cast<int>(ExitCode::error);
  } catch (const std::exception& e) {
    err << "sldlab: " << e.what() << '\n';
    return static_cast<int>(ExitCode::error);
  }
}

}  // namespace sldlab::cli
