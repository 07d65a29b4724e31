#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sldlab/capacity.hpp"

using namespace sldlab;

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

TrigPoly tp(std::vector<cplx> b) { return TrigPoly(std::move(b)); }

}  // namespace

TEST(QuantizePhase, Examples) {
  EXPECT_EQ(quantize_phase(PhaseGrid(4), 0.0), 0.0);
  const double q = quantize_phase(PhaseGrid(4), 0.8);
  EXPECT_NEAR(q, kPi / 2, 1e-15);
  EXPECT_EQ(std::floor((0.8 + kPi / 4) / (kPi / 2)), 1.0);
  EXPECT_LE(std::abs(q - 0.8), kPi / 4);
  EXPECT_EQ(quantize_phase(PhaseGrid(2), -kPi / 2), 0.0);
}

TEST(QuantizePhase, Errors) {
  EXPECT_THROW(quantize_phase(PhaseGrid(4), kPi), Error);
  EXPECT_THROW(quantize_phase(PhaseGrid(4), -4.0), Error);
  try {
    PhaseGrid g(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedOrder);
  }
}

TEST(PhaseGrid, LevelsHaveSizeMAndLieInRange) {
  for (int m = 1; m <= 64; ++m) {
    const auto lv = PhaseGrid(m).levels();
    ASSERT_EQ(static_cast<int>(lv.size()), m);
    for (double l : lv) {
      EXPECT_GE(l, -kPi - 1e-15);
      EXPECT_LT(l, kPi);
    }
  }
}

TEST(QuantizePhase, NearestLevelProperty) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> th(-kPi, kPi);
  for (int m = 1; m <= 64; ++m) {
    const PhaseGrid g(m);
    const auto lv = g.levels();
    for (int i = 0; i < 10000; ++i) {
      const double t = th(rng);
      const double q = quantize_phase(g, t);
      // Distance on the circle, since pi is reported as -pi.
      const double d = std::abs(std::remainder(q - t, 2 * kPi));
      ASSERT_LE(d, kPi / m + 1e-12) << "m=" << m << " theta=" << t;
      ASSERT_TRUE(std::any_of(lv.begin(), lv.end(), [q](double l) { return std::abs(l - q) < 1e-12; }));
    }
  }
}

TEST(ThetaM, Examples) {
  EXPECT_EQ(theta_m(PhaseGrid(4), 1.0), 0.0);
  EXPECT_NEAR(theta_m(PhaseGrid(4), std::polar(1.0, 0.8)), kPi / 2 - 0.8, 1e-15);
  EXPECT_NEAR(kPi / 2 - 0.8, 0.7708, 1e-4);
  EXPECT_NEAR(theta_m(PhaseGrid(4), 5.0 * I), 0.0, 1e-15);
  EXPECT_THROW(theta_m(PhaseGrid(4), 0.0), Error);
}

TEST(ThetaM, RangeAndGridProperty) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> th(-kPi, kPi), r(0.1, 10.0);
  for (int m = 1; m <= 16; ++m) {
    const PhaseGrid g(m);
    for (int i = 0; i < 2000; ++i) {
      const cplx w = std::polar(r(rng), th(rng));
      const double t = theta_m(g, w);
      EXPECT_GE(t, -kPi / m - 1e-12);
      EXPECT_LT(t, kPi / m + 1e-12);
      const double a = std::arg(w * std::polar(1.0, t));
      const double k = a / g.step();
      EXPECT_NEAR(k, std::round(k), 1e-9);
    }
  }
}

TEST(AuxiliaryRotate, Examples) {
  const auto a = auxiliary_rotate(tp({0.2, 1.5, I}), 4);
  EXPECT_FALSE(a.zero_dc);
  EXPECT_EQ(a.signal, tp({0.2, 1.5, I}));

  const auto b = auxiliary_rotate(tp({0.0, std::polar(1.0, 0.8), 0.0}), 4);
  EXPECT_NEAR(std::abs(b.signal.coeff(0) - I), 0.0, 1e-15);

  const TrigPoly y = tp({0.3 - I, std::polar(2.0, 2.2), 0.7});
  const auto z = auxiliary_rotate(y, 4);
  const auto ys = sample_grid(y, 64), zs = sample_grid(z.signal, 64);
  for (std::size_t j = 0; j < ys.size(); ++j) EXPECT_NEAR(std::abs(ys[j]), std::abs(zs[j]), 1e-14);
}

TEST(AuxiliaryRotate, ZeroDcPassesThrough) {
  const TrigPoly y = tp({1.0, 0.0, I});
  const auto z = auxiliary_rotate(y);
  EXPECT_TRUE(z.zero_dc);
  EXPECT_EQ(z.signal, y);
}

TEST(AuxiliaryRotate, PreservesAutocorrelationExactly) {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 50; ++trial) {
    const TrigPoly y = random_signal(1 + trial % 5, rng);
    const auto z = auxiliary_rotate(y);
    const auto a = autocorrelation(y), b = autocorrelation(z.signal);
    for (int k = -2 * y.m(); k <= 2 * y.m(); ++k) {
      EXPECT_LE(std::abs(a.coeff(k) - b.coeff(k)), 1e-15 * (1.0 + a.energy()));
    }
  }
}

TEST(Constellation, Validation) {
  EXPECT_THROW(Constellation({{tp({1.0}), 0.5}, {tp({2.0}), 0.4}}), Error);
  EXPECT_THROW(Constellation({{tp({1.0}), 1.0}, {tp({2.0}), 0.0}}), Error);
  EXPECT_THROW(Constellation({{tp({1.0}), 0.5}, {tp({0.0, 1.0, 0.0}), 0.5}}), Error);
  EXPECT_NO_THROW(Constellation::uniform({tp({1.0}), tp({2.0}), tp({3.0})}));
}

TEST(MiNoiseless, Examples) {
  const auto a = mi_noiseless(Constellation::uniform({tp({1.0}), tp({-1.0})}));
  EXPECT_NEAR(a.I_xy, 1.0, 1e-12);
  EXPECT_NEAR(a.I_xs, 0.0, 1e-12);

  const auto b = mi_noiseless(Constellation::uniform({tp({1.0}), tp({2.0})}));
  EXPECT_NEAR(b.I_xy, 1.0, 1e-12);
  EXPECT_NEAR(b.I_xs, 1.0, 1e-12);

  const auto c = mi_noiseless(Constellation::uniform({tp({0.0, 1.0, 1.0}), tp({1.0, 1.0, 0.0}), tp({0.0, 2.0, 0.0})}));
  EXPECT_NEAR(c.I_xy, std::log2(3.0), 1e-12);
  EXPECT_NEAR(c.I_xs, oracle::entropy({2.0 / 3, 1.0 / 3}), 1e-12);
}

TEST(MiNoiseless, DuplicateSignals) {
  try {
    mi_noiseless(Constellation::uniform({tp({1.0}), tp({1.0})}));
    FAIL() << "expected DuplicateSignals";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateSignals);
  }
}

TEST(MiNoiseless, DataProcessingAndChainRule) {
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 1 + trial % 3;
    const TrigPoly p = random_signal(m, rng);
    auto cs = enumerate_classes(p);
    std::vector<TrigPoly> sigs(cs.representatives.begin(), cs.representatives.begin() + 1 + trial % cs.exact_count);
    sigs.push_back(random_signal(m, rng));
    std::vector<Constellation::Point> pts;
    double total = 0.0;
    for (auto& s : sigs) {
      pts.push_back({s, u(rng)});
      total += pts.back().probability;
    }
    for (auto& pt : pts) pt.probability /= total;
    double resum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) resum += pts[i].probability;
    pts.back().probability = 1.0 - resum;
    const auto r = mi_noiseless(Constellation(pts));
    EXPECT_LE(r.I_xs, r.I_xy + 1e-12);
    EXPECT_GE(r.I_xs, 0.0);
    EXPECT_NEAR(r.I_xy - r.I_xs, r.H_y_given_s, 1e-9);
    // No two inputs differ by a phase, so the rotation keeps them apart.
    EXPECT_NEAR(r.I_xy - r.I_xs, r.H_z_given_s, 1e-9);
    const auto g = gap_report(m, r);
    EXPECT_TRUE(g.pass);
  }
}

TEST(MiDmc, ZeroNoiseMatchesNoiseless) {
  const auto c = Constellation::uniform({tp({0.0, 1.0, 1.0}), tp({1.0, 1.0, 0.0}), tp({0.0, 2.0, 0.0})});
  const AdditiveNoise none{{tp({0.0, 0.0, 0.0})}, {1.0}};
  const auto a = mi_dmc(c, none);
  const auto b = mi_noiseless(c);
  EXPECT_NEAR(a.I_xy, b.I_xy, 1e-9);
  EXPECT_NEAR(a.I_xs, b.I_xs, 1e-9);
}

TEST(MiDmc, BinarySymmetricExamples) {
  const auto c = Constellation::uniform({tp({1.0}), tp({2.0})});
  auto bsc = [&](double eps) {
    return TransitionNoise{{tp({1.0}), tp({2.0})}, {{1.0 - eps, eps}, {eps, 1.0 - eps}}};
  };
  EXPECT_NEAR(mi_dmc(c, bsc(0.5)).I_xy, 0.0, 1e-12);
  const auto r = mi_dmc(c, bsc(0.11));
  EXPECT_NEAR(r.I_xy, 1.0 - oracle::entropy({0.11, 0.89}), 1e-12);
  EXPECT_NEAR(r.I_xy, 0.5, 0.01);
  EXPECT_LE(r.I_xs, r.I_xy);
}

TEST(MiDmc, InvalidNoiseSpec) {
  const auto c = Constellation::uniform({tp({1.0}), tp({2.0})});
  const TransitionNoise bad{{tp({1.0}), tp({2.0})}, {{0.5, 0.4}, {0.5, 0.5}}};
  try {
    mi_dmc(c, bad);
    FAIL() << "expected InvalidNoiseSpec";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidNoiseSpec);
  }
  EXPECT_THROW(mi_dmc(c, AdditiveNoise{{tp({0.0})}, {0.5, 0.5}}), Error);
}

TEST(MiDmc, DataProcessingUnderAdditiveNoise) {
  std::mt19937_64 rng(65);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 1 + trial % 2;
    std::vector<TrigPoly> sigs;
    for (int i = 0; i < 4; ++i) sigs.push_back(random_signal(m, rng));
    AdditiveNoise n;
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
      n.offsets.push_back(random_signal(m, rng).scaled(0.3));
      n.probabilities.push_back(u(rng));
      total += n.probabilities.back();
    }
    for (auto& p : n.probabilities) p /= total;
    const auto r = mi_dmc(Constellation::uniform(sigs), n);
    EXPECT_LE(r.I_xs, r.I_xy + 1e-12);
    EXPECT_LE(r.I_xy, 2.0 + 1e-12);
  }
}

TEST(GapExperiment, Examples) {
  const auto a = gap_experiment(Constellation::uniform(
      {tp({0.0, 1.0, 1.0}), tp({1.0, 1.0, 0.0}), tp({0.0, 2.0, 0.0}), tp({0.0, 3.0, 0.0})}));
  EXPECT_TRUE(a.pass);
  EXPECT_NEAR(a.bound, 1.0, 1e-15);

  const auto b = gap_experiment(Constellation::uniform({tp({0.0, 1.0, 1.0}), tp({1.0, 1.0, 0.0})}));
  EXPECT_NEAR(b.I_xy, 1.0, 1e-12);
  EXPECT_NEAR(b.I_xs, 0.0, 1e-12);
  EXPECT_NEAR(b.per_dim_gap, 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(b.pass);

  const auto c = gap_experiment(Constellation::uniform({tp({0.0, 1.0, 0.0}), tp({0.0, 2.0, 0.0}), tp({1.0, 2.0, 0.5})}));
  EXPECT_NEAR(c.per_dim_gap, 0.0, 1e-12);
  EXPECT_TRUE(c.pass);

  try {
    gap_experiment(Constellation::uniform({tp({1.0}), tp({2.0})}));
    FAIL() << "expected UnsupportedOrder";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedOrder);
  }
}

TEST(GapExperiment, BoundTermDecreases) {
  // log2(m)/(2m+1) peaks at m = 3 and falls toward 0 afterwards.
  EXPECT_LT(gap_bound(2), gap_bound(3));
  for (int m = 3; m < 40; ++m) EXPECT_LT(gap_bound(m + 1), gap_bound(m));
}

TEST(GapExperiment, FlipClassFamilyApproachesOneBit) {
  std::mt19937_64 rng(66);
  for (int m = 1; m <= 3; ++m) {
    const TrigPoly p = random_signal(m, rng);
    const auto g = gap_experiment(flip_class_constellation(p, false));
    EXPECT_NEAR(g.per_dim_gap, 2.0 * m / (2 * m + 1), 1e-9);
    EXPECT_TRUE(g.pass);
    const auto h = gap_experiment(flip_class_constellation(p, true));
    EXPECT_NEAR(h.per_dim_gap, 1.0, 1e-9);
    EXPECT_TRUE(h.pass);
  }
}

TEST(MeasurementTransform, Examples) {
  const TrigPoly p = tp({0.5, 1.0 - I, 0.25});
  const AutocorrSeq s = autocorrelation(p);
  const auto samples = sample_intensity(s, 32);
  const auto id = measurement_transform(samples, [](double x) { return x; }, [](double x) { return x; });
  EXPECT_EQ(id.transformed, samples);

  const auto sq = measurement_transform(samples, [](double x) { return std::sqrt(x); }, [](double x) { return x * x; });
  EXPECT_LE(sq.max_roundtrip_error, 1e-10);

  const auto af = measurement_transform(samples, [](double x) { return 3.0 * x + 1.0; },
                                        [](double x) { return (x - 1.0) / 3.0; });
  const auto before = factor_sld(autocorr_from_samples(samples, 1));
  const auto after = factor_sld(autocorr_from_samples(af.recovered, 1));
  EXPECT_TRUE(same_classes(before, after, 1e-6));
}

TEST(MeasurementTransform, NonInvertible) {
  const std::vector<double> samples{0.0, 1.0, 2.0, 3.0};
  try {
    measurement_transform(samples, [](double x) { return (x - 1.5) * (x - 1.5); },
                          [](double x) { return 1.5 + std::sqrt(x); });
    FAIL() << "expected NonInvertibleOnRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonInvertibleOnRange);
  }
  const std::vector<double> neg{-1.0, 1.0};
  EXPECT_THROW(measurement_transform(neg, [](double x) { return std::sqrt(x); }, [](double x) { return x * x; }),
               Error);
}

TEST(Entropy, MatchesDefinition) {
  EXPECT_NEAR(binary_entropy(0.11), oracle::entropy({0.11, 0.89}), 1e-15);
  EXPECT_NEAR(entropy_bits({1.0, 1.0, 1.0, 1.0}), 2.0, 1e-15);
  EXPECT_EQ(entropy_bits({1.0}), 0.0);
}
