#pragma once

// JSON encodings. Complex numbers are [re, im] pairs, angles radians,
// entropies bits.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sldlab/ambiguity.hpp"
#include "sldlab/capacity.hpp"
#include "sldlab/core.hpp"
#include "sldlab/equivalence.hpp"
#include "sldlab/error.hpp"
#include "sldlab/rootfind.hpp"

namespace sldlab::io {

using json = nlohmann::ordered_json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(std::span<const cplx> v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

namespace detail {

[[noreturn]] inline void mismatch(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaMismatch, "field '" + path + "': " + what);
}

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) mismatch(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) mismatch(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) mismatch(path, "expected a number");
  return j.get<double>();
}

inline int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) mismatch(path, "expected an integer");
  return j.get<int>();
}

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

}  // namespace detail

inline cplx complex_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) detail::mismatch(path, "expected [re, im]");
  return {detail::number(j[0], path + "[0]"), detail::number(j[1], path + "[1]")};
}

inline std::vector<cplx> complex_vector(const json& j, const std::string& path) {
  if (!j.is_array()) detail::mismatch(path, "expected an array of [re, im] pairs");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(complex_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline json to_json(const TrigPoly& p) {
  return json{{"m", p.m()}, {"period", p.period()}, {"coeffs", to_json(p.coeffs())}};
}

inline TrigPoly trig_from_json(const json& j, const std::string& path = "") {
  const int m = detail::integer(detail::field(j, "m", path), detail::join(path, "m"));
  double period = 1.0;
  if (j.contains("period")) period = detail::number(j["period"], detail::join(path, "period"));
  auto c = complex_vector(detail::field(j, "coeffs", path), detail::join(path, "coeffs"));
  if (m < 0) detail::mismatch(detail::join(path, "m"), "must be non-negative");
  if (c.size() != 2 * static_cast<std::size_t>(m) + 1) {
    detail::mismatch(detail::join(path, "coeffs"), "expected 2m+1 = " + std::to_string(2 * m + 1) + " entries");
  }
  if (!(period > 0.0)) detail::mismatch(detail::join(path, "period"), "must be positive");
  return TrigPoly(std::move(c), period);
}

inline json to_json(const AutocorrSeq& s) {
  return json{{"m", s.m()}, {"period", s.period()}, {"coeffs", to_json(s.coeffs())}};
}

inline AutocorrSeq autocorr_from_json(const json& j, const std::string& path = "") {
  const int m = detail::integer(detail::field(j, "m", path), detail::join(path, "m"));
  double period = 1.0;
  if (j.contains("period")) period = detail::number(j["period"], detail::join(path, "period"));
  auto c = complex_vector(detail::field(j, "coeffs", path), detail::join(path, "coeffs"));
  if (m < 0) detail::mismatch(detail::join(path, "m"), "must be non-negative");
  if (c.size() != 4 * static_cast<std::size_t>(m) + 1) {
    detail::mismatch(detail::join(path, "coeffs"), "expected 4m+1 = " + std::to_string(4 * m + 1) + " entries");
  }
  if (!(period > 0.0)) detail::mismatch(detail::join(path, "period"), "must be positive");
  return AutocorrSeq(std::move(c), period);
}

inline json to_json(const CoeffPoly& f) {
  return json{{"degree_bound", f.bound()}, {"coeffs", to_json(f.coeffs())}};
}

/// Accepts either a polynomial {"coeffs", optional "degree_bound"} or a
/// signal {"m", "coeffs"}, which is lifted.
inline CoeffPoly poly_from_json(const json& j, const std::string& path = "") {
  if (j.is_object() && j.contains("m")) return lift(trig_from_json(j, path));
  auto c = complex_vector(detail::field(j, "coeffs", path), detail::join(path, "coeffs"));
  if (j.contains("degree_bound")) {
    const int n = detail::integer(j["degree_bound"], detail::join(path, "degree_bound"));
    if (n < 0) detail::mismatch(detail::join(path, "degree_bound"), "must be non-negative");
    return CoeffPoly(std::move(c), n);
  }
  return CoeffPoly(std::move(c));
}

inline json to_json(const RootMultiset& r) {
  json roots = json::array();
  for (const auto& x : r.roots) {
    roots.push_back(json{{"location", to_json(x.location)},
                         {"multiplicity", x.multiplicity},
                         {"class", to_string(x.where)},
                         {"modulus", std::abs(x.location)},
                         {"cluster_diameter", x.cluster_diameter}});
  }
  return json{{"degree", r.degree},
              {"leading_coeff", to_json(r.leading_coeff)},
              {"origin_mult", r.origin_mult},
              {"circle_band", r.circle_band},
              {"residual", r.residual},
              {"roots", roots}};
}

inline json to_json(const OrbitDecomposition& d) {
  json orbits = json::array();
  for (const auto& o : d.orbits) {
    orbits.push_back(json{{"inside", to_json(o.inside)},
                          {"outside", to_json(o.outside())},
                          {"d_inside", o.d_inside},
                          {"d_outside", o.d_outside}});
  }
  json circle = json::array();
  for (const auto& c : d.on_circle) {
    circle.push_back(json{{"location", to_json(c.location)}, {"multiplicity", c.multiplicity}});
  }
  return json{{"orbits", orbits}, {"on_circle", circle}, {"origin_mult", d.origin_mult}};
}

inline json to_json(const EquivalenceVerdict& v) {
  json j{{"related", v.related}};
  j["kappa"] = v.kappa ? json(*v.kappa) : json(nullptr);
  j["phase"] = v.phase ? json(*v.phase) : json(nullptr);
  j["witness"] = v.witness.empty() ? json(nullptr) : json(v.witness);
  if (v.witness_point) j["witness_point"] = to_json(*v.witness_point);
  return j;
}

inline json to_json(const ClassSet& cs) {
  json reps = json::array();
  for (const auto& p : cs.representatives) reps.push_back(to_json(p));
  return json{{"source_m", cs.source_m},
              {"bound", cs.bound},
              {"exact_count", cs.exact_count},
              {"spec_count", cs.spec_count},
              {"source", to_json(cs.source)},
              {"representatives", reps}};
}

inline ClassSet class_set_from_json(const json& j, const std::string& path = "") {
  ClassSet cs;
  cs.source_m = detail::integer(detail::field(j, "source_m", path), detail::join(path, "source_m"));
  cs.bound = detail::field(j, "bound", path).get<std::uint64_t>();
  cs.exact_count = detail::field(j, "exact_count", path).get<std::size_t>();
  if (j.contains("spec_count")) cs.spec_count = j["spec_count"].get<std::size_t>();
  cs.source = autocorr_from_json(detail::field(j, "source", path), detail::join(path, "source"));
  const auto& reps = detail::field(j, "representatives", path);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    cs.representatives.push_back(trig_from_json(reps[i], detail::join(path, "representatives[" + std::to_string(i) + "]")));
  }
  return cs;
}

inline json to_json(const BoundReport& r) {
  return json{{"exact_count", r.exact_count},
              {"bound", r.bound},
              {"pass", r.pass},
              {"max_residual", r.max_residual},
              {"residuals", r.residuals}};
}

inline json to_json(const Constellation& c) {
  json pts = json::array();
  for (const auto& p : c.points()) {
    json s = to_json(p.signal);
    pts.push_back(json{{"probability", p.probability}, {"signal", s}});
  }
  return json{{"m", c.m()}, {"points", pts}};
}

/// {"points": [{"signal": TrigPoly, "probability": p}, ...]}; probabilities
/// default to uniform when every one is omitted.
inline Constellation constellation_from_json(const json& j, const std::string& path = "") {
  const auto& pts = detail::field(j, "points", path);
  if (!pts.is_array() || pts.empty()) detail::mismatch(detail::join(path, "points"), "expected a non-empty array");
  std::vector<Constellation::Point> out;
  bool any_prob = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string p = detail::join(path, "points[" + std::to_string(i) + "]");
    TrigPoly sig = trig_from_json(detail::field(pts[i], "signal", p), detail::join(p, "signal"));
    double prob = 0.0;
    if (pts[i].contains("probability")) {
      prob = detail::number(pts[i]["probability"], detail::join(p, "probability"));
      any_prob = true;
    }
    out.push_back({std::move(sig), prob});
  }
  if (!any_prob) {
    for (auto& p : out) p.probability = 1.0 / static_cast<double>(out.size());
  }
  try {
    return Constellation(std::move(out));
  } catch (const Error& e) {
    detail::mismatch(detail::join(path, "points"), e.what());
  }
}

inline json to_json(const GapReport& g) {
  auto num = [](double x) { return std::isnan(x) ? json(nullptr) : json(x); };
  return json{{"m", g.m},
              {"I_xy", g.I_xy},
              {"I_xs", g.I_xs},
              {"I_xz", num(g.I_xz)},
              {"H_z_given_s", num(g.H_z_given_s)},
              {"per_dim_gap", g.per_dim_gap},
              {"bound", g.bound},
              {"chain_rule_residual", g.chain_rule_residual},
              {"aux_chain_residual", g.aux_chain_residual},
              {"zero_dc_outputs", g.zero_dc_outputs},
              {"pass", g.pass}};
}

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

}  // namespace sldlab::io
