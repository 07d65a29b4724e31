#pragma once

// All roots of a complex polynomial with multiplicities, classified against
// the unit circle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "sldlab/core.hpp"
#include "sldlab/error.hpp"

namespace sldlab {

enum class CircleClass { inside, on_circle, outside };

constexpr const char* to_string(CircleClass c) {
  switch (c) {
    case CircleClass::inside: return "inside";
    case CircleClass::on_circle: return "on_circle";
    case CircleClass::outside: return "outside";
  }
  return "?";
}

struct RootOptions {
  /// Reconstruction tolerance, relative to the largest coefficient. Must lie in (0, 1e-4].
  double tol = 1e-8;
  /// Two approximations closer than cluster_radius * (1 + |a|) are one root.
  double cluster_radius = 1e-6;
  /// Half-width of the on-circle band around |a| = 1.
  double circle_band = 1e-9;
  /// Coefficients with |c| <= zero_tol * max|c| are treated as exact zeros.
  double zero_tol = 0.0;
  int max_iter = 200;
  std::uint64_t seed = 0x5eed5eedULL;
};

struct Root {
  cplx location;
  int multiplicity = 1;
  CircleClass where = CircleClass::inside;
  /// Spread of the raw approximations merged into this root (0 for simple roots).
  double cluster_diameter = 0.0;
};

/// f(z) = leading * z^origin_mult * prod (z - a)^d over `roots`.
struct RootMultiset {
  std::vector<Root> roots;
  int origin_mult = 0;
  int degree = 0;
  cplx leading_coeff{1.0, 0.0};
  double circle_band = 1e-9;
  /// Max coefficient mismatch of the reconstruction, relative to max|coeff|.
  double residual = 0.0;

  int total_multiplicity() const {
    int s = origin_mult;
    for (const auto& r : roots) s += r.multiplicity;
    return s;
  }

  /// d_f(a): multiplicity of the root nearest `a` within `radius`, else 0.
  int multiplicity_at(cplx a, double radius = 1e-6) const {
    if (a == cplx{}) return origin_mult;
    for (const auto& r : roots) {
      if (std::abs(r.location - a) <= radius * (1.0 + std::abs(a))) return r.multiplicity;
    }
    return 0;
  }
};

inline CircleClass classify(cplx a, double band) {
  const double r = std::abs(a);
  if (r < 1.0 - band) return CircleClass::inside;
  if (r > 1.0 + band) return CircleClass::outside;
  return CircleClass::on_circle;
}

/// a^{-*} = 1 / conj(a): reflection across the unit circle.
inline cplx conj_reciprocal(cplx a) {
  if (a == cplx{}) throw Error(ErrorCode::ZeroArgument, "0 has no conjugate reciprocal");
  return 1.0 / std::conj(a);
}

/// leading * z^origin * prod (z - a)^d, expanded to coefficients.
inline CoeffPoly reconstruct(const RootMultiset& r) {
  std::vector<cplx> c(static_cast<std::size_t>(r.origin_mult) + 1);
  c.back() = r.leading_coeff;
  for (const auto& root : r.roots) {
    for (int k = 0; k < root.multiplicity; ++k) {
      std::vector<cplx> next(c.size() + 1);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= root.location * c[i];
      }
      c = std::move(next);
    }
  }
  return CoeffPoly(std::move(c));
}

namespace detail {

/// Value and first derivative by Horner.
inline void horner2(const std::vector<cplx>& a, cplx z, cplx& p, cplx& dp) {
  p = a.back();
  dp = cplx{};
  for (std::size_t i = a.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[i];
  }
}

/// Rounding-error bound for Horner evaluation at |z|.
inline double horner_bound(const std::vector<double>& abs_a, double rz) {
  double s = abs_a.back();
  for (std::size_t i = abs_a.size() - 1; i-- > 0;) s = s * rz + abs_a[i];
  return 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(abs_a.size()) * s;
}

/// k-th derivative coefficients.
inline std::vector<cplx> derivative(const std::vector<cplx>& a, int k) {
  std::vector<cplx> d(a);
  for (int j = 0; j < k && d.size() > 1; ++j) {
    std::vector<cplx> next(d.size() - 1);
    for (std::size_t i = 1; i < d.size(); ++i) next[i - 1] = static_cast<double>(i) * d[i];
    d = std::move(next);
  }
  return d;
}

inline cplx horner(const std::vector<cplx>& a, cplx z) {
  cplx p{};
  for (auto it = a.rbegin(); it != a.rend(); ++it) p = p * z + *it;
  return p;
}

/// Ehrlich-Aberth simultaneous iteration on a polynomial with nonzero constant
/// and leading terms. Returns the approximations and whether all converged.
inline bool aberth(const std::vector<cplx>& a, std::vector<cplx>& z, const RootOptions& opt) {
  const auto n = a.size() - 1;
  std::vector<double> abs_a(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) abs_a[i] = std::abs(a[i]);

  // Starting circle radius from the geometric mean of root moduli.
  const double radius = std::pow(abs_a.front() / abs_a.back(), 1.0 / static_cast<double>(n));
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  const double offset = 0.4 + jitter(rng);
  z.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = kTwoPi * (static_cast<double>(k) + offset) / static_cast<double>(n) + jitter(rng);
    z[k] = std::polar(radius * (1.0 + jitter(rng)), ang);
  }

  std::vector<bool> done(n, false);
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      cplx p, dp;
      horner2(a, z[k], p, dp);
      if (std::abs(p) <= horner_bound(abs_a, std::abs(z[k]))) {
        done[k] = true;
        continue;
      }
      all_done = false;
      const cplx ratio = p / dp;
      cplx repulsion{};
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        done[k] = true;
        continue;
      }
      z[k] -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z[k])) done[k] = true;
    }
    if (all_done) return true;
  }
  return std::all_of(done.begin(), done.end(), [](bool d) { return d; });
}

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t i, std::size_t j) { parent[find(i)] = find(j); }
};

}  // namespace detail

/// Roots of `f` with multiplicities. Approximations whose inclusion disks
/// overlap, or that sit within the clustering radius, are merged; each
/// cluster is polished by one Newton step on the derivative of order
/// (multiplicity - 1).
inline RootMultiset find_roots(const CoeffPoly& f, const RootOptions& opt = {}) {
  if (!(opt.tol > 0.0) || opt.tol > 1e-4) {
    throw Error(ErrorCode::InvalidArgument, "root tolerance must lie in (0, 1e-4]");
  }
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "cannot factor the zero polynomial");

  const double fmax = f.max_abs_coeff();
  const double zero_cut = opt.zero_tol * fmax;
  auto negligible = [&](cplx c) { return c == cplx{} || std::abs(c) <= zero_cut; };

  int hi = f.bound();
  while (hi > 0 && negligible(f.coeff(hi))) --hi;
  int lo = 0;
  while (lo < hi && negligible(f.coeff(lo))) ++lo;

  RootMultiset out;
  out.degree = hi;
  out.origin_mult = lo;
  out.leading_coeff = f.coeff(hi);
  out.circle_band = opt.circle_band;

  std::vector<cplx> a(f.coeffs().begin() + lo, f.coeffs().begin() + hi + 1);
  const std::size_t n = a.size() - 1;
  if (n > 0) {
    std::vector<cplx> z;
    const bool converged = detail::aberth(a, z, opt);

    // Inclusion radii: n |p(z_k)| / |lc prod_{j!=k} (z_k - z_j)|.
    std::vector<double> abs_a(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) abs_a[i] = std::abs(a[i]);
    std::vector<double> incl(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double pk = std::max(std::abs(detail::horner(a, z[k])), detail::horner_bound(abs_a, std::abs(z[k])));
      double denom = abs_a.back();
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) denom *= std::abs(z[k] - z[j]);
      }
      incl[k] = denom > 0.0 ? static_cast<double>(n) * pk / denom : std::numeric_limits<double>::infinity();
    }

    detail::DisjointSet ds(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = std::abs(z[i] - z[j]);
        const double scale = 1.0 + std::max(std::abs(z[i]), std::abs(z[j]));
        if (d <= opt.cluster_radius * scale || d <= incl[i] + incl[j]) ds.unite(i, j);
      }
    }

    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t k = 0; k < n; ++k) groups[ds.find(k)].push_back(k);
    for (const auto& g : groups) {
      if (g.empty()) continue;
      cplx centroid{};
      for (auto k : g) centroid += z[k];
      centroid /= static_cast<double>(g.size());
      double diam = 0.0;
      for (auto i : g) {
        for (auto j : g) diam = std::max(diam, std::abs(z[i] - z[j]));
      }
      const int mult = static_cast<int>(g.size());
      // Polish: the (mult-1)-th derivative has a simple root here.
      const auto d0 = detail::derivative(a, mult - 1);
      const auto d1 = detail::derivative(a, mult);
      const cplx num = detail::horner(d0, centroid);
      const cplx den = detail::horner(d1, centroid);
      if (den != cplx{}) {
        const cplx step = num / den;
        if (std::isfinite(step.real()) && std::isfinite(step.imag()) &&
            std::abs(step) <= std::max(diam, opt.cluster_radius * (1.0 + std::abs(centroid)))) {
          centroid -= step;
        }
      }
      out.roots.push_back({centroid, mult, classify(centroid, opt.circle_band), diam});
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const Root& x, const Root& y) {
      if (std::abs(x.location) != std::abs(y.location)) return std::abs(x.location) < std::abs(y.location);
      return std::arg(x.location) < std::arg(y.location);
    });

    const CoeffPoly rebuilt = reconstruct(out);
    double worst = 0.0;
    for (int k = 0; k <= std::max(rebuilt.bound(), f.bound()); ++k) {
      worst = std::max(worst, std::abs(rebuilt.coeff(k) - f.coeff(k)));
    }
    out.residual = worst / fmax;
    if (out.residual > opt.tol) {
      throw Error(ErrorCode::NoConvergence,
                  std::string(converged ? "" : "iteration budget exhausted; ") +
                      "reconstruction residual " + std::to_string(out.residual) + " exceeds tol");
    }
  }
  return out;
}

inline RootMultiset find_roots(const CoeffPoly& f, double tol) {
  RootOptions opt;
  opt.tol = tol;
  return find_roots(f, opt);
}

/// One reciprocal orbit {a, a^{-*}} with its inside representative.
struct Orbit {
  cplx inside;
  int d_inside = 0;
  int d_outside = 0;
  cplx outside() const { return conj_reciprocal(inside); }
  int total() const { return d_inside + d_outside; }
};

struct OrbitDecomposition {
  std::vector<Orbit> orbits;
  std::vector<Root> on_circle;
  int origin_mult = 0;
};

/// Orbits shared by several root multisets. Entry i of the per-orbit vectors
/// refers to multiset i.
struct JointOrbit {
  cplx inside;
  std::vector<int> d_inside;
  std::vector<int> d_outside;
};

struct JointCircleRoot {
  cplx location;
  std::vector<int> mult;
};

struct JointOrbits {
  std::vector<JointOrbit> orbits;
  std::vector<JointCircleRoot> on_circle;
};

/// Groups the roots of every multiset into reciprocal orbits, matching
/// locations across multisets greedily within `radius * (1 + |a|)`.
inline JointOrbits joint_orbits(const std::vector<const RootMultiset*>& sets, double radius = 1e-6) {
  JointOrbits out;
  const std::size_t count = sets.size();
  auto near = [radius](cplx x, cplx y) { return std::abs(x - y) <= radius * (1.0 + std::abs(x)); };

  for (std::size_t s = 0; s < count; ++s) {
    for (const auto& r : sets[s]->roots) {
      if (r.where == CircleClass::on_circle) {
        auto it = std::find_if(out.on_circle.begin(), out.on_circle.end(),
                               [&](const JointCircleRoot& c) { return near(c.location, r.location); });
        if (it == out.on_circle.end()) {
          out.on_circle.push_back({r.location, std::vector<int>(count, 0)});
          it = std::prev(out.on_circle.end());
        }
        it->mult[s] += r.multiplicity;
        continue;
      }
      const bool in = r.where == CircleClass::inside;
      const cplx rep = in ? r.location : conj_reciprocal(r.location);
      // Nearest existing orbit within the matching radius.
      JointOrbit* best = nullptr;
      double best_d = std::numeric_limits<double>::infinity();
      for (auto& o : out.orbits) {
        const double d = std::abs(o.inside - rep);
        if (near(o.inside, rep) && d < best_d) {
          best = &o;
          best_d = d;
        }
      }
      if (best == nullptr) {
        out.orbits.push_back({rep, std::vector<int>(count, 0), std::vector<int>(count, 0)});
        best = &out.orbits.back();
      }
      (in ? best->d_inside : best->d_outside)[s] += r.multiplicity;
    }
  }
  return out;
}

/// Reciprocal-orbit decomposition of one multiset. With `assert_symmetric`
/// the spectrum of an autocorrelation lift is checked: equal multiplicity on
/// both sides of every orbit and even multiplicity on the circle.
inline OrbitDecomposition pair_reciprocal(const RootMultiset& r, bool assert_symmetric = false,
                                          double radius = 1e-6) {
  const auto joint = joint_orbits({&r}, radius);
  OrbitDecomposition out;
  out.origin_mult = r.origin_mult;
  for (const auto& o : joint.orbits) out.orbits.push_back({o.inside, o.d_inside[0], o.d_outside[0]});
  for (const auto& c : joint.on_circle) {
    out.on_circle.push_back({c.location, c.mult[0], CircleClass::on_circle, 0.0});
  }
  if (assert_symmetric) {
    for (const auto& o : out.orbits) {
      if (o.d_inside != o.d_outside) {
        throw Error(ErrorCode::AsymmetricSpectrum,
                    "orbit at |a|=" + std::to_string(std::abs(o.inside)) + " has multiplicities " +
                        std::to_string(o.d_inside) + " vs " + std::to_string(o.d_outside));
      }
    }
    for (const auto& c : out.on_circle) {
      if (c.multiplicity % 2 != 0) {
        throw Error(ErrorCode::AsymmetricSpectrum, "odd multiplicity on the unit circle");
      }
    }
  }
  return out;
}

}  // namespace sldlab
