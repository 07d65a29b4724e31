#pragma once

// Time-limited signals as truncated Fourier series, their square-law
// measurement, and the polynomial lift that connects the two.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "sldlab/error.hpp"

namespace sldlab {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Integer power by repeated squaring; ipow(z, 0) == 1 for every z.
inline cplx ipow(cplx z, int n) {
  cplx acc{1.0, 0.0};
  cplx base = n < 0 ? 1.0 / z : z;
  for (unsigned e = static_cast<unsigned>(n < 0 ? -n : n); e != 0; e >>= 1) {
    if (e & 1U) acc *= base;
    base *= base;
  }
  return acc;
}

/// exp(i 2 pi k t / period), with t reduced modulo the period.
inline cplx unit_tone(long k, double t, double period) {
  const double r = std::fmod(t, period);
  const double x = kTwoPi * static_cast<double>(k) * r / period;
  return {std::cos(x), std::sin(x)};
}

/// Truncated Fourier series sum_{k=-m..m} b_k exp(i 2 pi k t / T) on one period.
class TrigPoly {
 public:
  TrigPoly() : coeffs_(1, cplx{}) {}

  /// `coeffs` are ordered k = -m..m, so their count must be odd.
  explicit TrigPoly(std::vector<cplx> coeffs, double period = 1.0)
      : coeffs_(std::move(coeffs)), period_(period) {
    if (coeffs_.empty() || coeffs_.size() % 2 == 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "TrigPoly needs 2m+1 coefficients, got " + std::to_string(coeffs_.size()));
    }
    if (!(period_ > 0.0) || !std::isfinite(period_)) {
      throw Error(ErrorCode::InvalidArgument, "period must be positive and finite");
    }
    m_ = static_cast<int>(coeffs_.size() / 2);
  }

  static TrigPoly zero(int m, double period = 1.0) {
    return TrigPoly(std::vector<cplx>(2 * static_cast<std::size_t>(m) + 1), period);
  }

  int m() const noexcept { return m_; }
  double period() const noexcept { return period_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }

  /// b_k for k in [-m, m]; zero outside.
  cplx coeff(int k) const noexcept {
    if (k < -m_ || k > m_) return {};
    return coeffs_[static_cast<std::size_t>(k + m_)];
  }

  /// Sum of |b_k|^2, which is c_0 of the measurement.
  double energy() const noexcept {
    double e = 0.0;
    for (const auto& b : coeffs_) e += std::norm(b);
    return e;
  }

  bool is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx b) { return b == cplx{}; });
  }

  /// Same signal with order raised to `m` (zero-padded on both sides).
  TrigPoly padded(int m) const {
    if (m < m_) throw Error(ErrorCode::InvalidArgument, "cannot pad to a smaller order");
    std::vector<cplx> out(2 * static_cast<std::size_t>(m) + 1);
    std::copy(coeffs_.begin(), coeffs_.end(), out.begin() + (m - m_));
    return TrigPoly(std::move(out), period_);
  }

  TrigPoly scaled(cplx factor) const {
    std::vector<cplx> out(coeffs_);
    for (auto& b : out) b *= factor;
    return TrigPoly(std::move(out), period_);
  }

  friend bool operator==(const TrigPoly&, const TrigPoly&) = default;

 private:
  std::vector<cplx> coeffs_;
  int m_ = 0;
  double period_ = 1.0;
};

/// Polynomial in z with ascending coefficients and a degree bound n >= deg.
class CoeffPoly {
 public:
  CoeffPoly() : coeffs_(1, cplx{}) {}

  explicit CoeffPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(cplx{});
  }

  CoeffPoly(std::vector<cplx> coeffs, int degree_bound) : coeffs_(std::move(coeffs)) {
    if (degree_bound < 0) throw Error(ErrorCode::InvalidArgument, "negative degree bound");
    if (coeffs_.size() > static_cast<std::size_t>(degree_bound) + 1) {
      if (std::any_of(coeffs_.begin() + degree_bound + 1, coeffs_.end(),
                      [](cplx c) { return c != cplx{}; })) {
        throw Error(ErrorCode::DegreeTooLarge, "coefficients exceed the degree bound");
      }
    }
    coeffs_.resize(static_cast<std::size_t>(degree_bound) + 1);
  }

  /// Degree bound n; the coefficient vector always has n+1 entries.
  int bound() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  cplx coeff(int k) const noexcept {
    if (k < 0 || k > bound()) return {};
    return coeffs_[static_cast<std::size_t>(k)];
  }

  /// Index of the highest nonzero coefficient, -1 for the zero polynomial.
  int degree() const noexcept {
    for (int k = bound(); k >= 0; --k) {
      if (coeffs_[static_cast<std::size_t>(k)] != cplx{}) return k;
    }
    return -1;
  }

  bool is_zero() const noexcept { return degree() < 0; }

  double max_abs_coeff() const noexcept {
    double r = 0.0;
    for (const auto& c : coeffs_) r = std::max(r, std::abs(c));
    return r;
  }

  cplx operator()(cplx z) const noexcept {
    cplx acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  friend bool operator==(const CoeffPoly&, const CoeffPoly&) = default;

 private:
  std::vector<cplx> coeffs_;
};

/// Product of two polynomials; the degree bound is the sum of bounds.
inline CoeffPoly multiply(const CoeffPoly& a, const CoeffPoly& b) {
  std::vector<cplx> out(static_cast<std::size_t>(a.bound() + b.bound()) + 1);
  for (int i = 0; i <= a.bound(); ++i) {
    const cplx ai = a.coeff(i);
    if (ai == cplx{}) continue;
    for (int j = 0; j <= b.bound(); ++j) out[static_cast<std::size_t>(i + j)] += ai * b.coeff(j);
  }
  return CoeffPoly(std::move(out));
}

/// Square-law measurement coefficients c_{-2m..2m}, Hermitian-symmetric.
class AutocorrSeq {
 public:
  AutocorrSeq() : coeffs_(1, cplx{}) {}

  /// Validates Hermitian symmetry and c_0 >= 0 within `tol` times the largest
  /// coefficient, then symmetrizes exactly.
  explicit AutocorrSeq(std::vector<cplx> coeffs, double period = 1.0, double tol = 1e-9)
      : coeffs_(std::move(coeffs)), period_(period) {
    if (coeffs_.empty() || coeffs_.size() % 4 != 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "AutocorrSeq needs 4m+1 coefficients, got " + std::to_string(coeffs_.size()));
    }
    if (!(period_ > 0.0) || !std::isfinite(period_)) {
      throw Error(ErrorCode::InvalidArgument, "period must be positive and finite");
    }
    m_ = static_cast<int>(coeffs_.size() / 4);
    double scale = 0.0;
    for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
    const double slack = tol * std::max(scale, 1e-300);
    const int top = 2 * m_;
    for (int k = 0; k <= top; ++k) {
      const cplx pos = at(k);
      const cplx neg = at(-k);
      if (std::abs(pos - std::conj(neg)) > slack) {
        throw Error(ErrorCode::NotAnAutocorrelation,
                    "c_{-k} != conj(c_k) at k=" + std::to_string(k));
      }
      const cplx sym = 0.5 * (pos + std::conj(neg));
      set(k, sym);
      set(-k, std::conj(sym));
    }
    if (at(0).real() < -slack) {
      throw Error(ErrorCode::NotAnAutocorrelation, "c_0 must be non-negative");
    }
    set(0, cplx{std::max(at(0).real(), 0.0), 0.0});
  }

  int m() const noexcept { return m_; }
  double period() const noexcept { return period_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }

  /// c_k for k in [-2m, 2m]; zero outside.
  cplx coeff(int k) const noexcept {
    if (k < -2 * m_ || k > 2 * m_) return {};
    return at(k);
  }

  double energy() const noexcept { return at(0).real(); }

  bool is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
  }

  friend bool operator==(const AutocorrSeq&, const AutocorrSeq&) = default;

 private:
  cplx at(int k) const noexcept { return coeffs_[static_cast<std::size_t>(k + 2 * m_)]; }
  void set(int k, cplx v) noexcept { coeffs_[static_cast<std::size_t>(k + 2 * m_)] = v; }

  std::vector<cplx> coeffs_;
  int m_ = 0;
  double period_ = 1.0;
};

inline cplx eval_time(const TrigPoly& p, double t) {
  cplx acc{};
  for (int k = -p.m(); k <= p.m(); ++k) acc += p.coeff(k) * unit_tone(k, t, p.period());
  return acc;
}

/// Intensity s(t) = sum_k c_k exp(i 2 pi k t / T); real for a valid sequence.
inline double eval_intensity(const AutocorrSeq& s, double t) {
  double acc = s.coeff(0).real();
  for (int k = 1; k <= 2 * s.m(); ++k) acc += 2.0 * (s.coeff(k) * unit_tone(k, t, s.period())).real();
  return acc;
}

/// c_k = sum_l b_l conj(b_{l-k}); c_{-k} is set to conj(c_k) exactly.
inline AutocorrSeq autocorrelation(const TrigPoly& p) {
  const int m = p.m();
  std::vector<cplx> c(4 * static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= 2 * m; ++k) {
    cplx acc{};
    for (int l = std::max(k - m, -m); l <= std::min(k + m, m); ++l) {
      acc += p.coeff(l) * std::conj(p.coeff(l - k));
    }
    c[static_cast<std::size_t>(2 * m + k)] = acc;
    c[static_cast<std::size_t>(2 * m - k)] = std::conj(acc);
  }
  c[static_cast<std::size_t>(2 * m)] = cplx{p.energy(), 0.0};
  return AutocorrSeq(std::move(c), p.period(), 0.0);
}

/// P(z) = z^m sum_k b_k z^k, so b_k lands at degree k+m; bound 2m.
inline CoeffPoly lift(const TrigPoly& p) {
  return CoeffPoly(std::vector<cplx>(p.coeffs().begin(), p.coeffs().end()), 2 * p.m());
}

inline TrigPoly unlift(const CoeffPoly& f, int m, double period = 1.0) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "negative order");
  if (f.degree() > 2 * m) {
    throw Error(ErrorCode::DegreeTooLarge, "degree " + std::to_string(f.degree()) +
                                               " exceeds 2m=" + std::to_string(2 * m));
  }
  std::vector<cplx> b(2 * static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= 2 * m; ++k) b[static_cast<std::size_t>(k)] = f.coeff(k);
  return TrigPoly(std::move(b), period);
}

/// Q(z) = z^{2m} sum_k c_k z^k, degree bound 4m. Its roots are closed under
/// a -> 1/conj(a).
inline CoeffPoly autocorr_lift(const AutocorrSeq& s) {
  if (s.is_zero()) throw Error(ErrorCode::ZeroInput, "autocorrelation is identically zero");
  return CoeffPoly(std::vector<cplx>(s.coeffs().begin(), s.coeffs().end()), 4 * s.m());
}

inline std::vector<cplx> sample_grid(const TrigPoly& p, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = eval_time(p, j * p.period() / n);
  return out;
}

inline std::vector<double> sample_intensity(const AutocorrSeq& s, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = eval_intensity(s, j * s.period() / n);
  return out;
}

/// Recovers c_{-2m..2m} from N >= 4m+1 uniform intensity samples by a direct DFT.
inline AutocorrSeq autocorr_from_samples(std::span<const double> samples, int m,
                                         double period = 1.0) {
  const auto n = static_cast<long>(samples.size());
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "negative order");
  if (n < 4L * m + 1) {
    throw Error(ErrorCode::InvalidArgument, "need at least 4m+1 samples to resolve the measurement");
  }
  std::vector<cplx> c(4 * static_cast<std::size_t>(m) + 1);
  for (int k = -2 * m; k <= 2 * m; ++k) {
    cplx acc{};
    for (long j = 0; j < n; ++j) {
      const double x = -kTwoPi * static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(n);
      acc += samples[static_cast<std::size_t>(j)] * cplx{std::cos(x), std::sin(x)};
    }
    c[static_cast<std::size_t>(k + 2 * m)] = acc / static_cast<double>(n);
  }
  return AutocorrSeq(std::move(c), period, 1e-9);
}

}  // namespace sldlab
