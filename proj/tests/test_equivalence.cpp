#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sldlab/capacity.hpp"
#include "sldlab/equivalence.hpp"

using namespace sldlab;

namespace {

constexpr cplx I{0.0, 1.0};

TrigPoly tp(std::vector<cplx> b) { return TrigPoly(std::move(b)); }

// Random polynomial of degree <= 10 through explicit roots, so flips can be
// built on the test side.
std::vector<cplx> random_roots(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.6, 1.6);
  std::vector<cplx> r;
  while (static_cast<int>(r.size()) < n) {
    const cplx a{u(rng), u(rng)};
    if (std::abs(a) > 1e-2 && std::abs(std::abs(a) - 1.0) > 1e-2) r.push_back(a);
  }
  return r;
}

std::vector<cplx> flip_some(std::mt19937_64& rng, std::vector<cplx> r) {
  std::uniform_int_distribution<int> coin(0, 1);
  for (auto& a : r) {
    if (coin(rng)) a = 1.0 / std::conj(a);
  }
  return r;
}

}  // namespace

TEST(AeEqual, Examples) {
  const TrigPoly p = tp({0.0, 1.0, 1.0});
  EXPECT_TRUE(ae_equal(p, p));
  EXPECT_FALSE(ae_equal(p, tp({0.0, 1.0, 1.0 + 1e-6})));
  EXPECT_TRUE(ae_equal(tp({0.0, 1.0, 0.0}), tp({0.0, 0.0, 1.0, 0.0, 0.0})));
  try {
    ae_equal(p, TrigPoly({0.0, 1.0, 1.0}, 2.0));
    FAIL() << "expected PeriodMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PeriodMismatch);
  }
}

TEST(PhaseEquiv, Examples) {
  const TrigPoly p = tp({0.3, 1.0 - I, 2.0});
  const auto a = phase_equiv(p, p.scaled(I));
  EXPECT_TRUE(a.related);
  ASSERT_TRUE(a.phase.has_value());
  EXPECT_NEAR(*a.phase, std::numbers::pi / 2, 1e-12);
  EXPECT_FALSE(a.kappa.has_value());

  const auto b = phase_equiv(tp({0.0, 1.0, 1.0}), tp({0.0, 1.0, -1.0}));
  EXPECT_FALSE(b.related);
  // The coefficient ratios are 1 and -1, so no single phase fits.
  EXPECT_NE(cplx(1.0) / cplx(1.0), cplx(-1.0) / cplx(1.0));

  const auto c = phase_equiv(p, p);
  EXPECT_TRUE(c.related);
  EXPECT_NEAR(*c.phase, 0.0, 1e-15);
}

TEST(PhaseEquiv, PhaseLiesInHalfOpenInterval) {
  const TrigPoly p = tp({1.0});
  const auto v = phase_equiv(p, p.scaled(-1.0));
  ASSERT_TRUE(v.related);
  EXPECT_GE(*v.phase, -std::numbers::pi);
  EXPECT_LT(*v.phase, std::numbers::pi);
}

TEST(StructMagnitudeEquiv, Examples) {
  const auto a = struct_magnitude_equiv(CoeffPoly({-2.0, 1.0}), CoeffPoly({-1.0, 2.0}));
  EXPECT_TRUE(a.related);
  EXPECT_NEAR(*a.kappa, 1.0, 1e-12);

  const auto b = struct_magnitude_equiv(CoeffPoly({-2.0, 1.0}), CoeffPoly({-3.0, 1.0}));
  EXPECT_FALSE(b.related);
  ASSERT_TRUE(b.witness_point.has_value());
  EXPECT_NEAR(std::abs(*b.witness_point - 2.0), 0.0, 1e-9);
  // Ratio differs between z = 1 and z = -1.
  EXPECT_GT(std::abs(1.0 / 2.0 - 3.0 / 4.0), 0.1);

  const auto sq = oracle::from_roots({I, I});
  const auto sq5 = oracle::from_roots({I, I}, 5.0);
  const auto c = struct_magnitude_equiv(CoeffPoly(sq5), CoeffPoly(sq));
  EXPECT_TRUE(c.related);
  EXPECT_NEAR(*c.kappa, 5.0, 1e-9);
  EXPECT_THROW(struct_magnitude_equiv(CoeffPoly({0.0}), CoeffPoly({1.0})), Error);
}

TEST(NumericMagnitudeEquiv, Examples) {
  const auto a = numeric_magnitude_equiv(CoeffPoly({-2.0, 1.0}), CoeffPoly({-1.0, 2.0}), 64);
  EXPECT_TRUE(a.related);
  EXPECT_NEAR(*a.kappa, 1.0, 1e-12);
  EXPECT_FALSE(numeric_magnitude_equiv(CoeffPoly({-2.0, 1.0}), CoeffPoly({-3.0, 1.0}), 64).related);
  const CoeffPoly f({0.2, -1.0 + I, 0.5, 3.0});
  const auto c = numeric_magnitude_equiv(f, f, 64);
  EXPECT_TRUE(c.related);
  EXPECT_NEAR(*c.kappa, 1.0, 1e-15);
  EXPECT_THROW(numeric_magnitude_equiv(f, f, 8), Error);
}

TEST(NumericMagnitudeEquiv, DegenerateSampling) {
  // |(z - 1)^80| falls below 1e-8 of its maximum on more than half the circle.
  const CoeffPoly g(oracle::from_roots(std::vector<cplx>(80, 1.0)));
  try {
    numeric_magnitude_equiv(CoeffPoly({1.0}), g, 400);
    FAIL() << "expected DegenerateSampling";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateSampling);
  }
  // A low-degree g leaves most samples usable.
  EXPECT_NO_THROW(numeric_magnitude_equiv(CoeffPoly({1.0}), CoeffPoly(oracle::from_roots({1.0, 1.0})), 64));
}

TEST(DegreeMatch, Examples) {
  EXPECT_TRUE(degree_match(CoeffPoly({-2.0, 1.0}), CoeffPoly({-1.0, 2.0})));
  EXPECT_EQ(origin_multiplicity(CoeffPoly({-2.0, 1.0})), 0);
  const CoeffPoly zf({0.0, -2.0, 1.0});
  EXPECT_FALSE(degree_match(zf, CoeffPoly({-1.0, 2.0})));
  EXPECT_EQ(origin_multiplicity(zf), 1);
  EXPECT_LE(oracle::circle_ratio_deviation({0.0, -2.0, 1.0}, {-0.5, 1.0}, 2.0, 1024), 1e-12);
  EXPECT_TRUE(degree_match(zf, zf));
  try {
    degree_match(CoeffPoly({-2.0, 1.0}), CoeffPoly({-3.0, 1.0}));
    FAIL() << "expected NotEquivalent";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotEquivalent);
  }
}

TEST(StructMagnitudeEquiv, AgreesWithSamplingOracle) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> deg(1, 10), kind(0, 2), origin(0, 2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int related = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = deg(rng);
    auto rf = random_roots(rng, n);
    std::vector<cplx> rg;
    const int k = kind(rng);
    if (k == 2) {
      rg = random_roots(rng, deg(rng));
    } else {
      rg = flip_some(rng, rf);
    }
    const cplx lf{u(rng), u(rng)};
    const cplx lg = k == 0 ? lf : cplx{u(rng), 1.0};
    const CoeffPoly f(oracle::from_roots(rf, lf + 0.1));
    auto gc = oracle::from_roots(rg, lg);
    gc.insert(gc.begin(), static_cast<std::size_t>(origin(rng)), cplx{});
    const CoeffPoly g(gc);
    const auto s = struct_magnitude_equiv(f, g);
    const int samples = 4 * (f.degree() + g.degree()) + 1 + 256;
    const auto o = numeric_magnitude_equiv(f, g, samples);
    ASSERT_EQ(s.related, o.related) << "trial " << trial;
    if (s.related) {
      ++related;
      EXPECT_NEAR(*s.kappa / *o.kappa, 1.0, 1e-6);
      EXPECT_LE(oracle::circle_ratio_deviation({f.coeffs().begin(), f.coeffs().end()}, {g.coeffs().begin(), g.coeffs().end()}, *s.kappa, 1024), 1e-8);
    }
  }
  EXPECT_GT(related, 200);
}

TEST(StructMagnitudeEquiv, RelationLaws) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto r = random_roots(rng, 6);
    const CoeffPoly f(oracle::from_roots(r, {u(rng), 1.0}));
    const CoeffPoly g(oracle::from_roots(flip_some(rng, r), {1.0, u(rng)}));
    const CoeffPoly h(oracle::from_roots(flip_some(rng, r), {u(rng), -1.0}));

    const auto ff = struct_magnitude_equiv(f, f);
    EXPECT_TRUE(ff.related);
    EXPECT_NEAR(*ff.kappa, 1.0, 1e-12);

    const auto fg = struct_magnitude_equiv(f, g);
    const auto gf = struct_magnitude_equiv(g, f);
    ASSERT_TRUE(fg.related && gf.related);
    EXPECT_NEAR(*fg.kappa * *gf.kappa, 1.0, 1e-9);

    const auto gh = struct_magnitude_equiv(g, h);
    const auto fh = struct_magnitude_equiv(f, h);
    ASSERT_TRUE(gh.related && fh.related);
    EXPECT_NEAR(*fg.kappa * *gh.kappa / *fh.kappa, 1.0, 1e-9);
  }
}

TEST(PhaseEquiv, ImpliesUnitMagnitudeRatioButNotConversely) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> th(-3.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const TrigPoly p = random_signal(1 + trial % 3, rng);
    const TrigPoly q = p.scaled(std::polar(1.0, th(rng)));
    ASSERT_TRUE(phase_equiv(p, q).related);
    const auto v = struct_magnitude_equiv(lift(p), lift(q));
    ASSERT_TRUE(v.related);
    EXPECT_NEAR(*v.kappa, 1.0, 1e-9);
  }
  // A flip of an off-circle root keeps |.| on the circle but is not a phase shift.
  const auto r = oracle::from_roots({0.5});
  const auto flipped = oracle::from_roots({2.0}, 0.5);
  const TrigPoly p = unlift(CoeffPoly(r, 2), 1);
  const TrigPoly q = unlift(CoeffPoly(flipped, 2), 1);
  const auto v = struct_magnitude_equiv(lift(p), lift(q));
  EXPECT_TRUE(v.related);
  EXPECT_NEAR(*v.kappa, 1.0, 1e-12);
  EXPECT_FALSE(phase_equiv(p, q).related);
}

TEST(DegreeMatch, EquivalentToOriginMultiplicity) {
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<int> origin(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = random_roots(rng, 5);
    auto fc = oracle::from_roots(r, 1.0);
    auto gc = oracle::from_roots(flip_some(rng, r), 2.0);
    fc.insert(fc.begin(), static_cast<std::size_t>(origin(rng)), cplx{});
    gc.insert(gc.begin(), static_cast<std::size_t>(origin(rng)), cplx{});
    const CoeffPoly f(fc), g(gc);
    EXPECT_EQ(degree_match(f, g), origin_multiplicity(f) == origin_multiplicity(g));
  }
}
