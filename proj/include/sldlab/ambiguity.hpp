#pragma once

// Enumeration of the signals that share one square-law measurement: zero
// flipping across the unit circle plus the free power of z, and spectral
// factorization of a measured autocorrelation back to those signals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "sldlab/core.hpp"
#include "sldlab/equivalence.hpp"
#include "sldlab/error.hpp"
#include "sldlab/rootfind.hpp"

namespace sldlab {

/// How a flipped polynomial g redistributes the zeros of f: for each orbit
/// {a, a^{-*}} the number of copies kept at the inside point a (the rest sit
/// at a^{-*}), and the power of z.
struct FlipSpec {
  std::vector<int> inside_mult;
  int shift = 0;
};

/// Root structure of f reused across many flips.
struct FlipBasis {
  int bound = 0;
  int degree = 0;
  int origin_mult = 0;
  cplx leading{1.0, 0.0};
  std::vector<Orbit> orbits;
  std::vector<Root> on_circle;

  /// n - deg f + d_f(0): largest admissible power of z.
  int max_shift() const { return bound - degree + origin_mult; }

  FlipSpec identity() const {
    FlipSpec s;
    for (const auto& o : orbits) s.inside_mult.push_back(o.d_inside);
    s.shift = origin_mult;
    return s;
  }

  /// Number of distinct specs: (max_shift + 1) * prod (orbit total + 1).
  double spec_count() const {
    double c = static_cast<double>(max_shift() + 1);
    for (const auto& o : orbits) c *= static_cast<double>(o.total() + 1);
    return c;
  }
};

inline FlipBasis flip_basis(const CoeffPoly& f, const RootOptions& opt = {}, double match_radius = 1e-6) {
  const RootMultiset r = find_roots(f, opt);
  const OrbitDecomposition dec = pair_reciprocal(r, false, match_radius);
  FlipBasis b;
  b.bound = f.bound();
  b.degree = r.degree;
  b.origin_mult = r.origin_mult;
  b.leading = r.leading_coeff;
  b.orbits = dec.orbits;
  b.on_circle = dec.on_circle;
  return b;
}

inline void validate(const FlipBasis& b, const FlipSpec& s) {
  if (s.inside_mult.size() != b.orbits.size()) {
    throw Error(ErrorCode::InvalidSpec, "spec has " + std::to_string(s.inside_mult.size()) +
                                            " orbit choices for " + std::to_string(b.orbits.size()) + " orbits");
  }
  for (std::size_t i = 0; i < b.orbits.size(); ++i) {
    if (s.inside_mult[i] < 0 || s.inside_mult[i] > b.orbits[i].total()) {
      throw Error(ErrorCode::InvalidSpec, "orbit split out of range at orbit " + std::to_string(i));
    }
  }
  if (s.shift < 0 || s.shift > b.max_shift()) {
    throw Error(ErrorCode::InvalidSpec, "shift " + std::to_string(s.shift) + " outside [0, " +
                                            std::to_string(b.max_shift()) + "]");
  }
}

/// g = a_g z^shift prod (z - a)^k (z - a^{-*})^{total-k} prod_circle (z - b)^d,
/// with |a_g| fixed so that |f| = |g| on the circle: every copy moved from a
/// to a^{-*} contributes a factor |a| to the scale.
inline CoeffPoly flip(const FlipBasis& b, const FlipSpec& s) {
  validate(b, s);
  std::vector<cplx> c(static_cast<std::size_t>(s.shift) + 1);
  double log_scale = std::log(std::abs(b.leading));
  auto mul_root = [&c](cplx a) {
    std::vector<cplx> next(c.size() + 1);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= a * c[i];
    }
    c = std::move(next);
  };
  c.back() = cplx{1.0, 0.0};
  for (std::size_t i = 0; i < b.orbits.size(); ++i) {
    const Orbit& o = b.orbits[i];
    const int keep = s.inside_mult[i];
    for (int k = 0; k < keep; ++k) mul_root(o.inside);
    for (int k = 0; k < o.total() - keep; ++k) mul_root(o.outside());
    log_scale += static_cast<double>(o.d_inside - keep) * std::log(std::abs(o.inside));
  }
  for (const auto& r : b.on_circle) {
    for (int k = 0; k < r.multiplicity; ++k) mul_root(r.location);
  }
  const cplx scale = std::polar(std::exp(log_scale), std::arg(b.leading));
  for (auto& x : c) x *= scale;
  return CoeffPoly(std::move(c), b.bound);
}

inline CoeffPoly flip(const CoeffPoly& f, const FlipSpec& s, const RootOptions& opt = {}) {
  return flip(flip_basis(f, opt), s);
}

/// Index of the first coefficient above `rel_tol * sqrt(energy)`.
inline int leading_index(const TrigPoly& p, double rel_tol = 1e-9) {
  const double cut = rel_tol * std::sqrt(p.energy());
  for (int k = -p.m(); k <= p.m(); ++k) {
    if (std::abs(p.coeff(k)) > cut) return k;
  }
  return p.m() + 1;
}

/// exp(i phi) p with the lowest-index nonzero coefficient positive real.
inline TrigPoly canonicalize(const TrigPoly& p) {
  if (p.is_zero()) throw Error(ErrorCode::ZeroSignal, "the zero signal has no canonical phase");
  const int k = leading_index(p);
  const cplx b = p.coeff(k);
  std::vector<cplx> out(p.coeffs().begin(), p.coeffs().end());
  const cplx rot = std::conj(b) / std::abs(b);
  for (auto& x : out) x *= rot;
  out[static_cast<std::size_t>(k + p.m())] = cplx{std::abs(b), 0.0};
  return TrigPoly(std::move(out), p.period());
}

struct AmbiguityOptions {
  RootOptions roots;
  double match_radius = 1e-6;
  /// Dedupe tolerance, relative to sqrt(energy).
  double dedupe_tol = 1e-7;
  /// Cap on the number of flip specs visited.
  double spec_cap = 1048576.0;
  /// Worker threads for spec generation; results are merged in spec order.
  unsigned workers = 1;
};

/// Canonical representatives of the signals sharing one measurement.
struct ClassSet {
  std::vector<TrigPoly> representatives;
  AutocorrSeq source;
  int source_m = 0;
  /// 2^{2m+1}.
  std::uint64_t bound = 2;
  std::size_t exact_count = 0;
  /// Specs visited before deduplication.
  std::size_t spec_count = 0;
};

inline std::uint64_t class_bound(int m) { return std::uint64_t{1} << (2 * m + 1); }

/// max_k |c_k(rep) - c_k(source)| / c_0(source).
inline double autocorr_residual(const TrigPoly& rep, const AutocorrSeq& source) {
  const AutocorrSeq c = autocorrelation(rep);
  const int top = 2 * std::max(c.m(), source.m());
  double worst = 0.0;
  for (int k = -top; k <= top; ++k) worst = std::max(worst, std::abs(c.coeff(k) - source.coeff(k)));
  const double e = source.energy();
  return e > 0.0 ? worst / e : worst;
}

namespace detail {

/// Mixed-radix decoding of a spec index.
inline FlipSpec decode_spec(const FlipBasis& b, std::uint64_t index) {
  FlipSpec s;
  s.inside_mult.resize(b.orbits.size());
  for (std::size_t i = 0; i < b.orbits.size(); ++i) {
    const auto radix = static_cast<std::uint64_t>(b.orbits[i].total() + 1);
    s.inside_mult[i] = static_cast<int>(index % radix);
    index /= radix;
  }
  s.shift = static_cast<int>(index);
  return s;
}

/// Keeps the first of every group of phase-equivalent signals.
inline std::vector<TrigPoly> dedupe(std::vector<TrigPoly> items, double tol) {
  std::vector<TrigPoly> out;
  for (auto& p : items) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const TrigPoly& q) { return phase_equiv(q, p, tol).related; });
    if (!seen) out.push_back(std::move(p));
  }
  return out;
}

template <typename Fn>
std::vector<TrigPoly> generate(std::uint64_t count, unsigned workers, Fn&& make) {
  std::vector<TrigPoly> out(count);
  const unsigned w = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (w <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = make(i);
    return out;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      for (std::uint64_t i = t; i < count; i += w) out[i] = make(i);
    });
  }
  pool.clear();
  return out;
}

}  // namespace detail

/// Every class of signals with the same intensity as p, up to a phase offset.
inline ClassSet enumerate_classes(const TrigPoly& p, const AmbiguityOptions& opt = {}) {
  if (p.is_zero()) throw Error(ErrorCode::ZeroSignal, "cannot enumerate the zero signal");
  const FlipBasis basis = flip_basis(lift(p), opt.roots, opt.match_radius);
  const double count = basis.spec_count();
  if (count > opt.spec_cap) {
    throw Error(ErrorCode::CombinatorialBlowup,
                std::to_string(count) + " flip specs exceed the cap " + std::to_string(opt.spec_cap));
  }
  const auto n = static_cast<std::uint64_t>(count);
  auto candidates = detail::generate(n, opt.workers, [&](std::uint64_t i) {
    return canonicalize(unlift(flip(basis, detail::decode_spec(basis, i)), p.m(), p.period()));
  });

  ClassSet cs;
  cs.source = autocorrelation(p);
  cs.source_m = p.m();
  cs.bound = class_bound(p.m());
  cs.spec_count = candidates.size();
  cs.representatives = detail::dedupe(std::move(candidates), opt.dedupe_tol);
  cs.exact_count = cs.representatives.size();
  return cs;
}

/// All signals whose intensity is the measured `s`: one root per reciprocal
/// orbit of the lifted measurement in every way, half of each on-circle
/// multiplicity, and every admissible power of z.
inline ClassSet factor_sld(const AutocorrSeq& s, const AmbiguityOptions& opt = {},
                           double zero_tol = 1e-12, double intensity_tol = 1e-9) {
  if (s.is_zero()) throw Error(ErrorCode::ZeroSignal, "the zero measurement has only the zero preimage");
  const int m = s.m();
  const double c0 = s.energy();

  const int probes = std::max(64, 8 * (4 * m + 1));
  const auto intensity = sample_intensity(s, probes);
  const double low = *std::min_element(intensity.begin(), intensity.end());
  if (low < -intensity_tol * c0) {
    throw Error(ErrorCode::NegativeIntensity, "synthesized intensity reaches " + std::to_string(low));
  }

  std::vector<cplx> c(s.coeffs().begin(), s.coeffs().end());
  for (auto& x : c) {
    if (std::abs(x) <= zero_tol * c0) x = cplx{};
  }
  const CoeffPoly q(std::move(c), 4 * m);

  RootOptions ropt = opt.roots;
  RootMultiset r;
  OrbitDecomposition dec;
  try {
    r = find_roots(q, ropt);
    dec = pair_reciprocal(r, true, opt.match_radius);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::AsymmetricSpectrum) throw Error(ErrorCode::NotAnAutocorrelation, e.what());
    throw;
  }
  if (r.origin_mult + r.degree != 4 * m) {
    throw Error(ErrorCode::NotAnAutocorrelation, "lifted measurement is not palindromic in degree");
  }
  const int max_shift = r.origin_mult;

  double count = static_cast<double>(max_shift + 1);
  for (const auto& o : dec.orbits) count *= static_cast<double>(o.d_inside + 1);
  if (count > opt.spec_cap) {
    throw Error(ErrorCode::CombinatorialBlowup,
                std::to_string(count) + " factorizations exceed the cap " + std::to_string(opt.spec_cap));
  }

  auto make = [&](std::uint64_t index) {
    std::vector<cplx> poly{cplx{1.0, 0.0}};
    auto mul_root = [&poly](cplx a) {
      std::vector<cplx> next(poly.size() + 1);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i + 1] += poly[i];
        next[i] -= a * poly[i];
      }
      poly = std::move(next);
    };
    for (const auto& o : dec.orbits) {
      const auto radix = static_cast<std::uint64_t>(o.d_inside + 1);
      const int keep = static_cast<int>(index % radix);
      index /= radix;
      for (int k = 0; k < keep; ++k) mul_root(o.inside);
      for (int k = keep; k < o.d_inside; ++k) mul_root(o.outside());
    }
    for (const auto& root : dec.on_circle) {
      for (int k = 0; k < root.multiplicity / 2; ++k) mul_root(root.location);
    }
    const auto shift = static_cast<std::size_t>(index);
    std::vector<cplx> shifted(shift, cplx{});
    shifted.insert(shifted.end(), poly.begin(), poly.end());
    TrigPoly cand = unlift(CoeffPoly(std::move(shifted), 2 * m), m, s.period());
    const double e = cand.energy();
    return canonicalize(cand.scaled(std::sqrt(c0 / e)));
  };
  auto candidates = detail::generate(static_cast<std::uint64_t>(count), opt.workers, make);

  ClassSet cs;
  cs.source = s;
  cs.source_m = m;
  cs.bound = class_bound(m);
  cs.spec_count = candidates.size();
  cs.representatives = detail::dedupe(std::move(candidates), opt.dedupe_tol);
  cs.exact_count = cs.representatives.size();
  return cs;
}

struct BoundReport {
  std::size_t exact_count = 0;
  std::uint64_t bound = 0;
  bool pass = false;
  std::vector<double> residuals;
  double max_residual = 0.0;
};

inline BoundReport certify_bound(const ClassSet& cs) {
  BoundReport r;
  r.exact_count = cs.exact_count;
  r.bound = cs.bound;
  r.pass = cs.exact_count == cs.representatives.size() && cs.exact_count <= cs.bound;
  for (const auto& rep : cs.representatives) {
    r.residuals.push_back(autocorr_residual(rep, cs.source));
    r.max_residual = std::max(r.max_residual, r.residuals.back());
  }
  return r;
}

/// Set equality of two class sets under equality up to a phase offset.
inline bool same_classes(const ClassSet& a, const ClassSet& b, double tol = 1e-7) {
  if (a.representatives.size() != b.representatives.size()) return false;
  for (const auto& p : a.representatives) {
    const bool found = std::any_of(b.representatives.begin(), b.representatives.end(),
                                   [&](const TrigPoly& q) { return phase_equiv(p, q, tol).related; });
    if (!found) return false;
  }
  return true;
}

/// z^n conj(f(1/conj z)): every zero reflected across the circle.
inline CoeffPoly conj_reflect(const CoeffPoly& f) {
  std::vector<cplx> c(f.coeffs().rbegin(), f.coeffs().rend());
  for (auto& x : c) x = std::conj(x);
  return CoeffPoly(std::move(c), f.bound());
}

}  // namespace sldlab
