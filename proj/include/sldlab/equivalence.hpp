#pragma once

// Equality a.e., equality up to a phase offset, and the constant
// magnitude-ratio relation between polynomials on the unit circle.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sldlab/blaschke.hpp"
#include "sldlab/core.hpp"
#include "sldlab/error.hpp"
#include "sldlab/rootfind.hpp"

namespace sldlab {

struct EquivalenceVerdict {
  bool related = false;
  std::optional<double> kappa;
  std::optional<double> phase;
  /// Where the relation fails: a sample point or a mismatched orbit.
  std::string witness;
  std::optional<cplx> witness_point;
};

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  double r = std::fmod(a + pi, kTwoPi);
  if (r < 0) r += kTwoPi;
  r -= pi;
  return r >= pi ? r - kTwoPi : r;
}

namespace detail {

inline void require_same_period(const TrigPoly& p, const TrigPoly& q) {
  if (std::abs(p.period() - q.period()) > 1e-12 * std::max(p.period(), q.period())) {
    throw Error(ErrorCode::PeriodMismatch, "signals live on different periods");
  }
}

inline std::pair<TrigPoly, TrigPoly> common_order(const TrigPoly& p, const TrigPoly& q) {
  const int m = std::max(p.m(), q.m());
  return {p.padded(m), q.padded(m)};
}

}  // namespace detail

/// For trigonometric polynomials equality a.e. is coefficient equality;
/// `rel_tol` is relative to the square root of the larger energy.
inline bool ae_equal(const TrigPoly& p, const TrigPoly& q, double rel_tol = 1e-12) {
  detail::require_same_period(p, q);
  const auto [a, b] = detail::common_order(p, q);
  const double scale = std::sqrt(std::max(a.energy(), b.energy()));
  for (int k = -a.m(); k <= a.m(); ++k) {
    if (std::abs(a.coeff(k) - b.coeff(k)) > rel_tol * scale) return false;
  }
  return true;
}

/// Related iff q = exp(i phi) p; phi comes from the largest coefficient of p.
inline EquivalenceVerdict phase_equiv(const TrigPoly& p, const TrigPoly& q, double rel_tol = 1e-12) {
  detail::require_same_period(p, q);
  const auto [a, b] = detail::common_order(p, q);
  EquivalenceVerdict v;
  if (a.is_zero() || b.is_zero()) {
    v.related = a.is_zero() && b.is_zero();
    if (v.related) {
      v.phase = 0.0;
    } else {
      v.witness = "exactly one signal is zero";
    }
    return v;
  }
  int kmax = -a.m();
  for (int k = -a.m(); k <= a.m(); ++k) {
    if (std::abs(a.coeff(k)) > std::abs(a.coeff(kmax))) kmax = k;
  }
  const double phi = wrap_angle(std::arg(b.coeff(kmax) / a.coeff(kmax)));
  const TrigPoly rotated = a.scaled(std::polar(1.0, phi));
  const double scale = std::sqrt(std::max(a.energy(), b.energy()));
  for (int k = -a.m(); k <= a.m(); ++k) {
    if (std::abs(rotated.coeff(k) - b.coeff(k)) > rel_tol * scale) {
      v.witness = "coefficient k=" + std::to_string(k) + " does not follow the common phase";
      return v;
    }
  }
  v.related = true;
  v.phase = phi;
  return v;
}

struct MagnitudeOptions {
  RootOptions roots;
  /// Greedy cross-polynomial orbit matching radius.
  double match_radius = 1e-6;
};

/// Decides |f| = kappa |g| on the circle from the root structure: summed
/// multiplicities must agree on every reciprocal orbit and on-circle
/// multiplicities must agree exactly.
inline EquivalenceVerdict struct_magnitude_equiv(const CoeffPoly& f, const CoeffPoly& g,
                                                 const MagnitudeOptions& opt = {}) {
  if (f.is_zero() || g.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "both polynomials must be nonzero");
  const RootMultiset rf = find_roots(f, opt.roots);
  const RootMultiset rg = find_roots(g, opt.roots);
  const JointOrbits joint = joint_orbits({&rf, &rg}, opt.match_radius);

  EquivalenceVerdict v;
  for (const auto& o : joint.orbits) {
    const int sf = o.d_inside[0] + o.d_outside[0];
    const int sg = o.d_inside[1] + o.d_outside[1];
    if (sf != sg) {
      // Report an actual root location of the orbit.
      v.witness_point = o.d_inside[0] + o.d_inside[1] > 0 ? o.inside : conj_reciprocal(o.inside);
      v.witness = "orbit multiplicity sums differ: " + std::to_string(sf) + " vs " + std::to_string(sg);
      return v;
    }
  }
  for (const auto& c : joint.on_circle) {
    if (c.mult[0] != c.mult[1]) {
      v.witness_point = c.location;
      v.witness = "on-circle multiplicities differ: " + std::to_string(c.mult[0]) + " vs " +
                  std::to_string(c.mult[1]);
      return v;
    }
  }
  v.related = true;
  v.kappa = kappa_ratio(rf, rg, joint);
  return v;
}

/// Sampling oracle: kappa is the median of |f|/|g| over n circle points,
/// skipping near-zeros of g; related iff the max relative deviation <= tol.
inline EquivalenceVerdict numeric_magnitude_equiv(const CoeffPoly& f, const CoeffPoly& g, int n,
                                                  double tol = 1e-6) {
  if (f.is_zero() || g.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "both polynomials must be nonzero");
  const int needed = 4 * (std::max(f.degree(), 0) + std::max(g.degree(), 0)) + 1;
  if (n < needed) {
    throw Error(ErrorCode::InvalidArgument, "need at least " + std::to_string(needed) + " circle samples");
  }
  std::vector<cplx> zs(static_cast<std::size_t>(n));
  std::vector<double> fa(zs.size()), ga(zs.size());
  double gmax = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto i = static_cast<std::size_t>(j);
    zs[i] = std::polar(1.0, kTwoPi * j / n);
    fa[i] = std::abs(f(zs[i]));
    ga[i] = std::abs(g(zs[i]));
    gmax = std::max(gmax, ga[i]);
  }
  std::vector<std::size_t> used;
  std::vector<double> ratios;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (ga[i] <= 1e-8 * gmax) continue;
    used.push_back(i);
    ratios.push_back(fa[i] / ga[i]);
  }
  if (2 * used.size() < zs.size()) {
    throw Error(ErrorCode::DegenerateSampling, "more than half the samples sit on zeros of g");
  }
  std::vector<double> sorted(ratios);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = sorted.size() / 2;
  const double kappa = sorted.size() % 2 == 1 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);

  EquivalenceVerdict v;
  double worst = 0.0;
  std::size_t worst_i = 0;
  for (std::size_t r = 0; r < ratios.size(); ++r) {
    const double dev = kappa > 0.0 ? std::abs(ratios[r] / kappa - 1.0) : std::abs(ratios[r]);
    if (dev > worst) {
      worst = dev;
      worst_i = used[r];
    }
  }
  if (worst <= tol) {
    v.related = true;
    v.kappa = kappa;
  } else {
    v.witness = "relative deviation " + std::to_string(worst) + " at sample " + std::to_string(worst_i);
    v.witness_point = zs[worst_i];
  }
  return v;
}

/// For magnitude-related f and g: deg f == deg g, which holds exactly when
/// the origin multiplicities agree.
inline bool degree_match(const CoeffPoly& f, const CoeffPoly& g, const MagnitudeOptions& opt = {}) {
  if (!struct_magnitude_equiv(f, g, opt).related) {
    throw Error(ErrorCode::NotEquivalent, "polynomials do not have a constant magnitude ratio");
  }
  return f.degree() == g.degree();
}

/// d_f(0): number of vanishing low-order coefficients.
inline int origin_multiplicity(const CoeffPoly& f) {
  int k = 0;
  while (k <= f.bound() && f.coeff(k) == cplx{}) ++k;
  return k;
}

}  // namespace sldlab
