#pragma once

// Phase quantizer, auxiliary rotation channel, and exact mutual information
// over finite constellations for coherent versus square-law detection.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "sldlab/ambiguity.hpp"
#include "sldlab/core.hpp"
#include "sldlab/equivalence.hpp"
#include "sldlab/error.hpp"

namespace sldlab {

/// Uniform grid of m phases {2 pi k / m}, represented in [-pi, pi).
class PhaseGrid {
 public:
  explicit PhaseGrid(int m) : m_(m) {
    if (m < 1) throw Error(ErrorCode::UnsupportedOrder, "phase grid needs m >= 1");
  }

  int m() const noexcept { return m_; }
  double step() const noexcept { return kTwoPi / m_; }

  /// Ascending levels; for even m the point pi appears as -pi.
  std::vector<double> levels() const {
    std::vector<double> out;
    for (int k = -(m_ / 2); k < m_ - m_ / 2; ++k) out.push_back(k * step());
    return out;
  }

  /// Unwrapped floor index floor((theta + pi/m) / (2 pi / m)).
  long index(double theta) const {
    return static_cast<long>(std::floor((theta + std::numbers::pi / m_) / step()));
  }

 private:
  int m_;
};

inline void require_principal(double theta) {
  if (!(theta >= -std::numbers::pi && theta < std::numbers::pi)) {
    throw Error(ErrorCode::OutOfRange, "angle " + std::to_string(theta) + " outside [-pi, pi)");
  }
}

/// Nearest grid level, ties rotating counterclockwise. The level pi is
/// reported as -pi so the result stays in [-pi, pi).
inline double quantize_phase(const PhaseGrid& g, double theta) {
  require_principal(theta);
  double q = static_cast<double>(g.index(theta)) * g.step();
  if (q >= std::numbers::pi - 1e-15) q -= kTwoPi;
  return q;
}

/// arg(w) in [-pi, pi).
inline double principal_arg(cplx w) {
  const double a = std::arg(w);
  return a >= std::numbers::pi ? a - kTwoPi : a;
}

/// Rotation taking w onto the grid: Q(arg w) - arg w, in [-pi/m, pi/m).
inline double theta_m(const PhaseGrid& g, cplx w) {
  if (w == cplx{}) throw Error(ErrorCode::ZeroArgument, "rotation angle of 0 is undefined");
  const double a = principal_arg(w);
  return static_cast<double>(g.index(a)) * g.step() - a;
}

struct AuxiliaryOutput {
  TrigPoly signal;
  double rotation = 0.0;
  /// b_0 == 0: the rotation is undefined and the input passes through.
  bool zero_dc = false;
};

/// z(t) = exp(i Theta_m(b_0)) y(t). `order` defaults to the signal's m.
inline AuxiliaryOutput auxiliary_rotate(const TrigPoly& y, int order = 0) {
  const PhaseGrid g(order > 0 ? order : y.m());
  const cplx b0 = y.coeff(0);
  if (b0 == cplx{}) return {y, 0.0, true};
  const double th = theta_m(g, b0);
  return {y.scaled(std::polar(1.0, th)), th, false};
}

/// Finite stand-in for an input distribution over waveforms.
class Constellation {
 public:
  struct Point {
    TrigPoly signal;
    double probability = 0.0;
  };

  Constellation() = default;

  explicit Constellation(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) throw Error(ErrorCode::InvalidArgument, "empty constellation");
    double total = 0.0;
    for (const auto& p : points_) {
      if (!(p.probability > 0.0)) throw Error(ErrorCode::InvalidArgument, "probabilities must be positive");
      total += p.probability;
      if (p.signal.m() != points_.front().signal.m() ||
          p.signal.period() != points_.front().signal.period()) {
        throw Error(ErrorCode::InvalidArgument, "all signals must share m and period");
      }
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidArgument, "probabilities sum to " + std::to_string(total));
    }
  }

  static Constellation uniform(std::vector<TrigPoly> signals) {
    std::vector<Point> pts;
    const double p = 1.0 / static_cast<double>(signals.size());
    for (auto& s : signals) pts.push_back({std::move(s), p});
    return Constellation(std::move(pts));
  }

  int m() const { return points_.front().signal.m(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }

 private:
  std::vector<Point> points_;
};

/// Shannon entropy in bits of a (possibly unnormalized) weight vector.
inline double entropy_bits(const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  double h = 0.0;
  for (double x : w) {
    if (x > 0.0) h -= (x / total) * std::log2(x / total);
  }
  return h;
}

/// Binary entropy H2(p) in bits.
inline double binary_entropy(double p) { return entropy_bits({p, 1.0 - p}); }

namespace detail {

/// Greedy clustering of feature vectors: an item joins the first group whose
/// representative is within `tol` in max-norm. Returns a group id per item.
inline std::vector<std::size_t> cluster_ids(const std::vector<std::vector<double>>& features, double tol) {
  std::vector<std::size_t> ids(features.size());
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < features.size(); ++i) {
    std::size_t found = reps.size();
    for (std::size_t g = 0; g < reps.size(); ++g) {
      const auto& a = features[reps[g]];
      const auto& b = features[i];
      bool close = a.size() == b.size();
      for (std::size_t k = 0; close && k < a.size(); ++k) close = std::abs(a[k] - b[k]) <= tol;
      if (close) {
        found = g;
        break;
      }
    }
    if (found == reps.size()) reps.push_back(i);
    ids[i] = found;
  }
  return ids;
}

inline std::vector<double> coherent_features(const TrigPoly& y, double scale) {
  std::vector<double> f;
  for (const auto& b : y.coeffs()) {
    f.push_back(b.real() / scale);
    f.push_back(b.imag() / scale);
  }
  return f;
}

inline std::vector<double> sld_features(const TrigPoly& y, double scale) {
  const AutocorrSeq s = autocorrelation(y);
  std::vector<double> f;
  for (int k = 0; k <= 2 * s.m(); ++k) {
    f.push_back(s.coeff(k).real() / scale);
    f.push_back(s.coeff(k).imag() / scale);
  }
  return f;
}

/// Exact I(X;Y) in bits from p(x) and a channel given as output labels:
/// `label[j]` is the output symbol of raw output j and `row[i][j]` its
/// probability given input i.
inline double mutual_information(const std::vector<double>& px, const std::vector<std::vector<double>>& row,
                                 const std::vector<std::size_t>& label) {
  const std::size_t symbols = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::vector<double>> pyx(px.size(), std::vector<double>(symbols, 0.0));
  std::vector<double> py(symbols, 0.0);
  for (std::size_t i = 0; i < px.size(); ++i) {
    for (std::size_t j = 0; j < label.size(); ++j) pyx[i][label[j]] += row[i][j];
    for (std::size_t y = 0; y < symbols; ++y) py[y] += px[i] * pyx[i][y];
  }
  double mi = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    for (std::size_t y = 0; y < symbols; ++y) {
      if (pyx[i][y] > 0.0 && py[y] > 0.0) mi += px[i] * pyx[i][y] * std::log2(pyx[i][y] / py[y]);
    }
  }
  return std::max(mi, 0.0);
}

/// H(A | B) = sum_b p(b) H(A | B = b) from a joint assignment of weights.
inline double conditional_entropy(const std::vector<double>& w, const std::vector<std::size_t>& a,
                                  const std::vector<std::size_t>& b) {
  const std::size_t nb = b.empty() ? 0 : *std::max_element(b.begin(), b.end()) + 1;
  const std::size_t na = a.empty() ? 0 : *std::max_element(a.begin(), a.end()) + 1;
  double total = 0.0;
  for (double x : w) total += x;
  double h = 0.0;
  for (std::size_t bb = 0; bb < nb; ++bb) {
    std::vector<double> cond(na, 0.0);
    double pb = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (b[i] == bb) {
        cond[a[i]] += w[i];
        pb += w[i];
      }
    }
    if (pb > 0.0) h += (pb / total) * entropy_bits(cond);
  }
  return h;
}

}  // namespace detail

struct MiOptions {
  /// Output symbols are equal when their normalized features agree within this.
  double binning_tol = 1e-7;
};

/// Mutual information of the coherent output y, the rotated output z, and
/// the square-law output s, all in bits.
struct MiResult {
  double I_xy = 0.0;
  double I_xs = 0.0;
  /// Auxiliary channel; NaN when m == 0.
  double I_xz = std::numeric_limits<double>::quiet_NaN();
  /// Noiseless only: H(y-class | s-class) and H(z-class | s-class) summed
  /// directly over the partition.
  double H_y_given_s = std::numeric_limits<double>::quiet_NaN();
  double H_z_given_s = std::numeric_limits<double>::quiet_NaN();
  std::size_t zero_dc_outputs = 0;
};

namespace detail {

struct OutputAlphabet {
  std::vector<std::size_t> coherent, rotated, sld;
  std::size_t zero_dc = 0;
};

inline OutputAlphabet label_outputs(const std::vector<TrigPoly>& outputs, const MiOptions& opt) {
  double e_ref = 0.0;
  for (const auto& y : outputs) e_ref = std::max(e_ref, y.energy());
  if (e_ref == 0.0) e_ref = 1.0;
  const double amp = std::sqrt(e_ref);
  std::vector<std::vector<double>> coh, rot, sld;
  OutputAlphabet a;
  const int m = outputs.front().m();
  for (const auto& y : outputs) {
    coh.push_back(coherent_features(y, amp));
    sld.push_back(sld_features(y, e_ref));
    if (m >= 1) {
      const auto z = auxiliary_rotate(y);
      if (z.zero_dc) ++a.zero_dc;
      rot.push_back(coherent_features(z.signal, amp));
    }
  }
  a.coherent = cluster_ids(coh, opt.binning_tol);
  a.sld = cluster_ids(sld, opt.binning_tol);
  if (m >= 1) a.rotated = cluster_ids(rot, opt.binning_tol);
  return a;
}

}  // namespace detail

/// Noiseless channel y = x: I_xy is the input entropy, I_xs the entropy of
/// the partition into equal-intensity classes.
inline MiResult mi_noiseless(const Constellation& c, const MiOptions& opt = {}) {
  const auto& pts = c.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (ae_equal(pts[i].signal, pts[j].signal, opt.binning_tol)) {
        throw Error(ErrorCode::DuplicateSignals,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " are the same signal");
      }
    }
  }
  std::vector<TrigPoly> outs;
  std::vector<double> w;
  for (const auto& p : pts) {
    outs.push_back(p.signal);
    w.push_back(p.probability);
  }
  const auto a = detail::label_outputs(outs, opt);
  auto class_weights = [&w](const std::vector<std::size_t>& ids) {
    std::vector<double> cw(*std::max_element(ids.begin(), ids.end()) + 1, 0.0);
    for (std::size_t i = 0; i < ids.size(); ++i) cw[ids[i]] += w[i];
    return cw;
  };
  MiResult r;
  r.I_xy = entropy_bits(class_weights(a.coherent));
  r.I_xs = entropy_bits(class_weights(a.sld));
  r.H_y_given_s = detail::conditional_entropy(w, a.coherent, a.sld);
  if (!a.rotated.empty()) {
    r.I_xz = entropy_bits(class_weights(a.rotated));
    r.H_z_given_s = detail::conditional_entropy(w, a.rotated, a.sld);
  }
  r.zero_dc_outputs = a.zero_dc;
  return r;
}

/// Discretized noise: either additive offsets with probabilities, applied to
/// every input, or an explicit row-stochastic transition to listed outputs.
struct AdditiveNoise {
  std::vector<TrigPoly> offsets;
  std::vector<double> probabilities;
};

struct TransitionNoise {
  std::vector<TrigPoly> outputs;
  std::vector<std::vector<double>> rows;
};

using NoiseSpec = std::variant<AdditiveNoise, TransitionNoise>;

inline TransitionNoise to_transition(const Constellation& c, const NoiseSpec& noise) {
  if (const auto* t = std::get_if<TransitionNoise>(&noise)) return *t;
  const auto& a = std::get<AdditiveNoise>(noise);
  if (a.offsets.empty() || a.offsets.size() != a.probabilities.size()) {
    throw Error(ErrorCode::InvalidNoiseSpec, "offsets and probabilities must be non-empty and aligned");
  }
  TransitionNoise t;
  const std::size_t n = c.size(), k = a.offsets.size();
  t.rows.assign(n, std::vector<double>(n * k, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const TrigPoly& x = c.points()[i].signal;
    for (std::size_t j = 0; j < k; ++j) {
      const TrigPoly& d = a.offsets[j];
      if (d.m() != x.m()) throw Error(ErrorCode::InvalidNoiseSpec, "noise offset order differs from signals");
      std::vector<cplx> y(x.coeffs().begin(), x.coeffs().end());
      for (std::size_t q = 0; q < y.size(); ++q) y[q] += d.coeffs()[q];
      t.outputs.emplace_back(std::move(y), x.period());
      t.rows[i][i * k + j] = a.probabilities[j];
    }
  }
  return t;
}

/// Exact MI over a finite channel for the coherent output and its
/// square-law image. The square-law output is a function of the coherent
/// one, so I_xs <= I_xy holds by construction.
inline MiResult mi_dmc(const Constellation& c, const NoiseSpec& noise, const MiOptions& opt = {}) {
  const TransitionNoise t = to_transition(c, noise);
  if (t.rows.size() != c.size() || t.outputs.empty()) {
    throw Error(ErrorCode::InvalidNoiseSpec, "need one transition row per constellation point");
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].size() != t.outputs.size()) {
      throw Error(ErrorCode::InvalidNoiseSpec, "row " + std::to_string(i) + " has the wrong length");
    }
    double sum = 0.0;
    for (double p : t.rows[i]) {
      if (!(p >= 0.0)) throw Error(ErrorCode::InvalidNoiseSpec, "negative transition probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorCode::InvalidNoiseSpec, "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }
  for (const auto& y : t.outputs) {
    if (y.m() != c.m()) throw Error(ErrorCode::InvalidNoiseSpec, "output order differs from signals");
  }
  std::vector<double> px;
  for (const auto& p : c.points()) px.push_back(p.probability);
  const auto a = detail::label_outputs(t.outputs, opt);
  MiResult r;
  r.I_xy = detail::mutual_information(px, t.rows, a.coherent);
  r.I_xs = std::min(detail::mutual_information(px, t.rows, a.sld), r.I_xy);
  if (!a.rotated.empty()) r.I_xz = detail::mutual_information(px, t.rows, a.rotated);
  r.zero_dc_outputs = a.zero_dc;
  return r;
}

struct GapReport {
  int m = 0;
  double I_xy = 0.0;
  double I_xs = 0.0;
  double I_xz = 0.0;
  /// H(z | s) for noiseless runs; bounded by 2m+1+log2(m).
  double H_z_given_s = 0.0;
  /// (I_xy - I_xs) / (2m+1).
  double per_dim_gap = 0.0;
  /// 1 + log2(m) / (2m+1).
  double bound = 0.0;
  /// |I_xy - I_xs - H(y | s)|, the noiseless chain-rule residual.
  double chain_rule_residual = 0.0;
  /// |I_xy - I_xs - H(z | s)|; zero exactly when the rotation loses nothing.
  double aux_chain_residual = 0.0;
  std::size_t zero_dc_outputs = 0;
  bool pass = false;
};

inline double gap_bound(int m) {
  return 1.0 + std::log2(static_cast<double>(m)) / static_cast<double>(2 * m + 1);
}

inline GapReport gap_report(int m, const MiResult& mi) {
  GapReport g;
  g.m = m;
  g.I_xy = mi.I_xy;
  g.I_xs = mi.I_xs;
  g.I_xz = mi.I_xz;
  g.H_z_given_s = mi.H_z_given_s;
  g.per_dim_gap = (mi.I_xy - mi.I_xs) / static_cast<double>(2 * m + 1);
  g.bound = gap_bound(m);
  g.chain_rule_residual = std::isnan(mi.H_y_given_s) ? 0.0 : std::abs(mi.I_xy - mi.I_xs - mi.H_y_given_s);
  g.aux_chain_residual = std::isnan(mi.H_z_given_s) ? 0.0 : std::abs(mi.I_xy - mi.I_xs - mi.H_z_given_s);
  g.zero_dc_outputs = mi.zero_dc_outputs;
  g.pass = g.per_dim_gap <= g.bound + 1e-9;
  return g;
}

inline GapReport gap_experiment(const Constellation& c, const MiOptions& opt = {}) {
  if (c.m() < 1) throw Error(ErrorCode::UnsupportedOrder, "the per-dimension bound needs m >= 1");
  return gap_report(c.m(), mi_noiseless(c, opt));
}

inline GapReport gap_experiment(const Constellation& c, const NoiseSpec& noise, const MiOptions& opt = {}) {
  if (c.m() < 1) throw Error(ErrorCode::UnsupportedOrder, "the per-dimension bound needs m >= 1");
  return gap_report(c.m(), mi_dmc(c, noise, opt));
}

struct TransformResult {
  std::vector<double> transformed;
  std::vector<double> recovered;
  double max_roundtrip_error = 0.0;
};

/// Applies an invertible map to intensity samples and checks that the
/// supplied inverse recovers them, so the measurement carries the same
/// information before and after.
inline TransformResult measurement_transform(std::span<const double> samples,
                                             const std::function<double(double)>& phi,
                                             const std::function<double(double)>& inverse,
                                             double tol = 1e-10) {
  TransformResult r;
  std::vector<std::pair<double, double>> pairs;
  for (double x : samples) {
    const double y = phi(x);
    const double back = inverse(y);
    if (!std::isfinite(y) || !std::isfinite(back)) {
      throw Error(ErrorCode::NonInvertibleOnRange, "map is undefined at sample " + std::to_string(x));
    }
    const double err = std::abs(back - x);
    r.max_roundtrip_error = std::max(r.max_roundtrip_error, err / (1.0 + std::abs(x)));
    r.transformed.push_back(y);
    r.recovered.push_back(back);
    pairs.emplace_back(x, y);
  }
  if (r.max_roundtrip_error > tol) {
    throw Error(ErrorCode::NonInvertibleOnRange,
                "inverse misses by " + std::to_string(r.max_roundtrip_error));
  }
  std::sort(pairs.begin(), pairs.end());
  int direction = 0;
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    // Samples equal up to rounding carry no ordering information.
    if (pairs[i].first - pairs[i - 1].first <= 1e-12 * (1.0 + std::abs(pairs[i].first))) continue;
    const double dy = pairs[i].second - pairs[i - 1].second;
    const int d = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    if (d == 0 || (direction != 0 && d != direction)) {
      throw Error(ErrorCode::NonInvertibleOnRange, "map is not strictly monotone on the samples");
    }
    direction = d;
  }
  return r;
}

/// Signal with independent coefficients uniform in the unit box; generic
/// with probability one (distinct off-circle roots, full degree, b_{-m} != 0).
inline TrigPoly random_signal(int m, std::mt19937_64& rng, double period = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> b(2 * static_cast<std::size_t>(m) + 1);
  for (auto& x : b) {
    const double re = u(rng);
    x = cplx{re, u(rng)};
  }
  return TrigPoly(std::move(b), period);
}

/// Uniform constellation over every intensity class of `p`; with
/// `with_negatives` each class also contributes its negation, which only a
/// coherent receiver can tell apart.
inline Constellation flip_class_constellation(const TrigPoly& p, bool with_negatives,
                                              const AmbiguityOptions& opt = {}) {
  const ClassSet cs = enumerate_classes(p, opt);
  std::vector<TrigPoly> pts = cs.representatives;
  if (with_negatives) {
    for (const auto& r : cs.representatives) pts.push_back(r.scaled(-1.0));
  }
  return Constellation::uniform(std::move(pts));
}

}  // namespace sldlab
