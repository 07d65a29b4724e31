#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "sldlab/core.hpp"
#include "sldlab/error.hpp"
#include "sldlab/rootfind.hpp"

namespace sldlab {

/// B_a(z) = (a - z) / (1 - conj(a) z) for |a| < 1.
inline cplx factor_eval(cplx alpha, cplx z) {
  if (!(std::abs(alpha) < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "Blaschke factor needs |a| < 1");
  }
  const cplx den = 1.0 - std::conj(alpha) * z;
  if (std::abs(den) <= 1e-12) throw Error(ErrorCode::PoleEvaluation, "z is at the pole 1/conj(a)");
  return (alpha - z) / den;
}

/// tau * z^n0 * prod B_g(z)^n over the factors. The origin factor B_0(z) = -z
/// is kept as the separate power n0, any sign absorbed in tau.
class BlaschkeProduct {
 public:
  struct Factor {
    cplx zero;
    int exponent = 1;
  };

  BlaschkeProduct() = default;

  BlaschkeProduct(cplx tau, int n0, std::vector<Factor> factors, double circle_band = 1e-9)
      : tau_(tau), n0_(n0), factors_(std::move(factors)) {
    if (std::abs(std::abs(tau_) - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidArgument, "tau must be unimodular");
    }
    if (n0_ < 0) throw Error(ErrorCode::InvalidArgument, "negative origin power");
    for (const auto& f : factors_) {
      if (f.exponent < 1) throw Error(ErrorCode::InvalidArgument, "factor exponents must be positive");
      if (f.zero == cplx{}) {
        throw Error(ErrorCode::InvalidArgument, "origin zeros belong in n0, not in the factor list");
      }
      if (!(std::abs(f.zero) < 1.0 - circle_band)) {
        throw Error(ErrorCode::InvalidArgument,
                    "factor zero |g|=" + std::to_string(std::abs(f.zero)) + " is not strictly inside the disk");
      }
    }
  }

  cplx tau() const noexcept { return tau_; }
  int n0() const noexcept { return n0_; }
  const std::vector<Factor>& factors() const noexcept { return factors_; }

  /// Total number of zeros in the disk, counted with multiplicity.
  int order() const noexcept {
    int k = n0_;
    for (const auto& f : factors_) k += f.exponent;
    return k;
  }

  cplx operator()(cplx z) const {
    cplx acc = tau_ * ipow(z, n0_);
    for (const auto& f : factors_) acc *= ipow(factor_eval(f.zero, z), f.exponent);
    return acc;
  }

 private:
  cplx tau_{1.0, 0.0};
  int n0_ = 0;
  std::vector<Factor> factors_;
};

inline cplx product_eval(const BlaschkeProduct& b, cplx z) {
  if (std::abs(z) > 1.0 + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "Blaschke products are evaluated on the closed disk");
  }
  return b(z);
}

/// Product over the inside zeros of f with their multiplicities; on-circle
/// and outside zeros are ignored.
inline BlaschkeProduct from_inside_zeros(const RootMultiset& r) {
  std::vector<BlaschkeProduct::Factor> fs;
  for (const auto& root : r.roots) {
    if (root.where == CircleClass::inside) fs.push_back({root.location, root.multiplicity});
  }
  return BlaschkeProduct({1.0, 0.0}, r.origin_mult, std::move(fs), r.circle_band);
}

/// kappa = |a_f / a_g| * prod over orbits |a|^{d_f(a) - d_g(a)}, with a the
/// inside representative. Requires the orbit-sum condition on every orbit
/// and identical on-circle multiplicities.
inline double kappa_ratio(const RootMultiset& f, const RootMultiset& g, const JointOrbits& orbits) {
  double log_kappa = std::log(std::abs(f.leading_coeff)) - std::log(std::abs(g.leading_coeff));
  for (const auto& o : orbits.orbits) {
    const int sf = o.d_inside[0] + o.d_outside[0];
    const int sg = o.d_inside[1] + o.d_outside[1];
    if (sf != sg) {
      throw Error(ErrorCode::ConditionViolated,
                  "orbit multiplicity sums differ (" + std::to_string(sf) + " vs " + std::to_string(sg) + ")");
    }
    log_kappa += static_cast<double>(o.d_inside[0] - o.d_inside[1]) * std::log(std::abs(o.inside));
  }
  for (const auto& c : orbits.on_circle) {
    if (c.mult[0] != c.mult[1]) {
      throw Error(ErrorCode::ConditionViolated, "on-circle multiplicities differ");
    }
  }
  return std::exp(log_kappa);
}

inline double kappa_ratio(const RootMultiset& f, const RootMultiset& g, double radius = 1e-6) {
  return kappa_ratio(f, g, joint_orbits({&f, &g}, radius));
}

}  // namespace sldlab
