#include "fitscape/metrics.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fitscape/error.hpp"
#include "oracles.hpp"

namespace fitscape::metrics {
namespace {

using S = Symbol;

const std::vector<double> kExample{0.3, 0.3, 0.3, 0.2, 0.2, 0.7, 0.7};
const std::vector<Symbol> kExampleSymbols{S::Zero, S::Zero, S::Neg, S::Zero, S::Pos, S::Zero};

std::vector<double> random_walk_values(std::mt19937_64& rng, std::size_t k) {
  // Quantised levels produce ties and plateaus alongside continuous noise.
  std::uniform_int_distribution<int> mode(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, 4);
  std::bernoulli_distribution stay(0.6);
  std::vector<double> v;
  const int m = mode(rng);
  double current = unit(rng);
  for (std::size_t i = 0; i < k; ++i) {
    if (i == 0 || !stay(rng)) current = m == 0 ? unit(rng) : level(rng) / 4.0;
    v.push_back(current);
  }
  return v;
}

std::string as_chars(const SymbolSequence& s) {
  std::string out;
  for (auto x : s.symbols) out += x == S::Neg ? 'n' : x == S::Pos ? 'p' : '0';
  return out;
}

TEST(DeltaSeries, ExampleWalk) {
  const auto d = delta_series(FitnessWalk(kExample));
  const auto expected = oracle::deltas(kExample);
  ASSERT_EQ(d.size(), 6U);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d[i], expected[i]);
  EXPECT_NEAR(d[2], -0.1, 1e-15);
  EXPECT_NEAR(d[4], 0.5, 1e-15);
}

TEST(DeltaSeries, TrivialPairs) {
  EXPECT_EQ(delta_series(FitnessWalk({0.5, 0.5})), std::vector<double>{0.0});
  EXPECT_EQ(delta_series(FitnessWalk({0.0, 1.0})), std::vector<double>{1.0});
}

TEST(DeltaSeries, RejectsShortWalk) {
  EXPECT_THROW((void)delta_series(FitnessWalk({0.4})), InvalidWalk);
}

TEST(FitnessWalk, RejectsEmptyAndOutOfRange) {
  EXPECT_THROW(FitnessWalk({}), InvalidWalk);
  EXPECT_THROW(FitnessWalk({0.2, 1.5}), InvalidWalk);
  EXPECT_THROW(FitnessWalk({-0.1}), InvalidWalk);
  EXPECT_THROW(FitnessWalk({std::nan("")}), InvalidWalk);
}

TEST(Symbolize, ExampleDeltas) {
  const auto s = symbolize(delta_series(FitnessWalk(kExample)), 0.0);
  EXPECT_EQ(s.symbols, kExampleSymbols);
  EXPECT_EQ(s.epsilon, 0.0);
}

TEST(Symbolize, BoundaryIsInclusive) {
  const std::vector<double> d{-0.1, 0.5};
  EXPECT_EQ(symbolize(d, 0.5).symbols, (std::vector<Symbol>{S::Zero, S::Zero}));
  EXPECT_EQ(symbolize(std::vector<double>{0.0}, 0.0).symbols, std::vector<Symbol>{S::Zero});
}

TEST(Symbolize, RejectsNegativeEpsilon) {
  EXPECT_THROW((void)symbolize(std::vector<double>{0.1}, -0.01), InvalidParameter);
  EXPECT_THROW((void)symbolize(std::vector<double>{0.1}, std::nan("")), InvalidParameter);
}

TEST(Autocorrelation, ExampleMatchesExactFraction) {
  const auto exact = oracle::autocorrelation_exact({3, 3, 3, 2, 2, 7, 7}, 1);
  EXPECT_EQ(exact, oracle::Fraction(517, 1414));
  EXPECT_NEAR(autocorrelation(FitnessWalk(kExample), 1), exact.value(), 1e-12);
}

TEST(Autocorrelation, ConstantWalkIsOne) {
  EXPECT_EQ(autocorrelation(FitnessWalk(std::vector<double>(10, 0.5)), 1), 1.0);
}

TEST(Autocorrelation, LinearWalkMatchesNaiveLoop) {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(i / 10.0);
  for (std::size_t s = 1; s < v.size(); ++s) {
    EXPECT_NEAR(autocorrelation(FitnessWalk(v), s), oracle::autocorrelation(v, s), 1e-12);
  }
}

TEST(Autocorrelation, RejectsLagOutsideRange) {
  const FitnessWalk w(kExample);
  EXPECT_THROW((void)autocorrelation(w, 0), InvalidParameter);
  EXPECT_THROW((void)autocorrelation(w, 7), InvalidParameter);
  EXPECT_NO_THROW((void)autocorrelation(w, 6));
}

TEST(Neutrality, ExampleWalk) {
  const FitnessWalk w(kExample);
  EXPECT_DOUBLE_EQ(neutrality_distance(w), 3.0 / 7.0);
  EXPECT_EQ(neutrality_volume(w), 3.0 / 7.0);
}

TEST(Neutrality, ConstantAndIncreasing) {
  const FitnessWalk flat(std::vector<double>(8, 0.25));
  EXPECT_EQ(neutrality_distance(flat), 1.0);
  EXPECT_EQ(neutrality_volume(flat), 1.0 / 8.0);
  const FitnessWalk up({0.1, 0.2, 0.3, 0.4, 0.5});
  EXPECT_EQ(neutrality_distance(up), 1.0 / 5.0);
  EXPECT_EQ(neutrality_volume(up), 1.0);
}

TEST(Neutrality, SingleValueWalk) {
  const FitnessWalk one({0.9});
  EXPECT_EQ(neutrality_distance(one), 1.0);
  EXPECT_EQ(neutrality_volume(one), 1.0);
}

TEST(InformationContent, ExampleSequence) {
  EXPECT_NEAR(information_content(kExampleSymbols), 0.8 * std::log(5.0) / std::log(6.0), 1e-12);
  EXPECT_NEAR(information_content(kExampleSymbols), 0.7186, 5e-5);
}

TEST(InformationContent, FlatAndAlternating) {
  EXPECT_EQ(information_content(std::vector<Symbol>(9, S::Zero)), 0.0);
  std::vector<Symbol> alt;
  for (int i = 0; i < 9; ++i) alt.push_back(i % 2 ? S::Neg : S::Pos);
  EXPECT_NEAR(information_content(alt), std::log(2.0) / std::log(6.0), 1e-12);
  EXPECT_NEAR(information_content(alt), oracle::information_content("pnpnpnpnp"), 1e-12);
}

TEST(InformationContent, RejectsShortSequence) {
  EXPECT_THROW((void)information_content(std::vector<Symbol>{S::Pos}), InvalidParameter);
  EXPECT_THROW((void)information_content(std::vector<Symbol>{}), InvalidParameter);
}

TEST(PartialInformationContent, ExampleSequence) {
  EXPECT_NEAR(partial_information_content(kExampleSymbols), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(oracle::partial_information_content("00n0p0"), 2.0 / 6.0);
}

TEST(PartialInformationContent, FlatAndAlternating) {
  EXPECT_EQ(partial_information_content(std::vector<Symbol>(5, S::Zero)), 0.0);
  EXPECT_EQ(partial_information_content(std::vector<Symbol>{S::Pos, S::Neg, S::Pos, S::Neg}), 1.0);
}

TEST(PartialInformationContent, ZerosAreDroppedBeforeCollapsing) {
  // Pos 0 Pos collapses to a single Pos once the zero is gone.
  EXPECT_EQ(partial_information_content(std::vector<Symbol>{S::Pos, S::Zero, S::Pos}), 1.0 / 3.0);
}

TEST(PartialInformationContent, RejectsEmpty) {
  EXPECT_THROW((void)partial_information_content(std::vector<Symbol>{}), InvalidParameter);
}

TEST(DensityBasinInformation, ExampleSequence) {
  EXPECT_NEAR(density_basin_information(kExampleSymbols), 0.2 * std::log(5.0) / std::log(3.0),
              1e-12);
  EXPECT_NEAR(density_basin_information(kExampleSymbols), 0.29300, 1e-5);
}

TEST(DensityBasinInformation, FlatAndAlternating) {
  EXPECT_EQ(density_basin_information(std::vector<Symbol>(6, S::Zero)), 0.0);
  EXPECT_EQ(density_basin_information(std::vector<Symbol>{S::Pos, S::Neg, S::Pos, S::Neg}), 0.0);
  EXPECT_THROW((void)density_basin_information(std::vector<Symbol>{S::Zero}), InvalidParameter);
}

TEST(ComputeAll, ExampleWalk) {
  const auto r = compute_all(FitnessWalk(kExample), 0.0, 1);
  EXPECT_EQ(r.nv, 3.0 / 7.0);
  EXPECT_NEAR(r.nd, 3.0 / 7.0, 1e-15);
  EXPECT_NEAR(r.ac, 517.0 / 1414.0, 1e-12);
  EXPECT_NEAR(r.ic, 0.8 * std::log(5.0) / std::log(6.0), 1e-12);
  EXPECT_NEAR(r.pic, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.dbi, 0.2 * std::log(5.0) / std::log(3.0), 1e-12);
}

TEST(ComputeAll, ConstantWalk) {
  const std::size_t k = 12;
  const auto r = compute_all(FitnessWalk(std::vector<double>(k, 0.0)));
  EXPECT_EQ(r, (MetricReport{1.0, 1.0, 1.0 / k, 0.0, 0.0, 0.0}));
}

TEST(ComputeAll, EpsilonOnlyAffectsSymbolMeasures) {
  const FitnessWalk w(kExample);
  const auto a = compute_all(w, 0.0);
  const auto b = compute_all(w, 0.2);
  EXPECT_EQ(a.ac, b.ac);
  EXPECT_EQ(a.nd, b.nd);
  EXPECT_EQ(a.nv, b.nv);
  EXPECT_NE(a.pic, b.pic);
  EXPECT_THROW((void)compute_all(w, -1.0), InvalidParameter);
  EXPECT_THROW((void)compute_all(FitnessWalk({0.5})), InvalidWalk);
}

TEST(ComputeAll, RandomWalksMatchNaiveImplementations) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_walk_values(rng, 1000);
    const FitnessWalk w(v);
    const auto r = compute_all(w, 0.0, 1);
    const auto sym = oracle::symbols(oracle::deltas(v), 0.0);
    EXPECT_NEAR(r.ac, oracle::autocorrelation(v, 1), 1e-9);
    EXPECT_NEAR(r.nd, oracle::neutrality_distance(v), 1e-9);
    EXPECT_NEAR(r.nv, oracle::neutrality_volume(v), 1e-9);
    EXPECT_NEAR(r.ic, oracle::information_content(sym), 1e-9);
    EXPECT_NEAR(r.pic, oracle::partial_information_content(sym), 1e-9);
    EXPECT_NEAR(r.dbi, oracle::density_basin_information(sym), 1e-9);
  }
}

// Properties over randomised walks.

TEST(MetricProperties, RunStructure) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> len(1, 60);
  for (int trial = 0; trial < 500; ++trial) {
    const auto v = random_walk_values(rng, len(rng));
    const FitnessWalk w(v);
    const double k = static_cast<double>(v.size());
    const double z = std::round(neutrality_volume(w) * k);
    const double t = std::round(neutrality_distance(w) * k);
    EXPECT_LE(z + t, k + 1.0);
    const auto runs = oracle::run_lengths(v);
    double total = 0.0;
    for (auto r : runs) total += static_cast<double>(r);
    EXPECT_DOUBLE_EQ(z * (total / static_cast<double>(runs.size())), k);
  }
}

TEST(MetricProperties, SymbolizeExtremes) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = oracle::deltas(random_walk_values(rng, 40));
    const auto s0 = symbolize(d, 0.0);
    double biggest = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] != 0.0) EXPECT_NE(s0.symbols[i], S::Zero);
      biggest = std::max(biggest, std::abs(d[i]));
    }
    for (auto s : symbolize(d, biggest).symbols) EXPECT_EQ(s, S::Zero);
  }
}

TEST(MetricProperties, SignSwapSymmetry) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = symbolize(delta_series(FitnessWalk(random_walk_values(rng, 50))), 0.0).symbols;
    std::vector<Symbol> flipped;
    for (auto x : s) flipped.push_back(static_cast<Symbol>(-static_cast<int>(x)));
    EXPECT_NEAR(information_content(s), information_content(flipped), 1e-12);
    EXPECT_NEAR(density_basin_information(s), density_basin_information(flipped), 1e-12);
  }
}

TEST(MetricProperties, MonotoneWalks) {
  for (std::size_t k : {3U, 8U, 40U}) {
    std::vector<double> up, down;
    for (std::size_t i = 0; i < k; ++i) {
      up.push_back(static_cast<double>(i) / static_cast<double>(k));
      down.push_back(1.0 - static_cast<double>(i) / static_cast<double>(k));
    }
    for (const auto& v : {up, down}) {
      const auto s = symbolize(delta_series(FitnessWalk(v)), 0.0).symbols;
      EXPECT_EQ(information_content(s), 0.0);
      EXPECT_EQ(density_basin_information(s), 0.0);
      EXPECT_DOUBLE_EQ(partial_information_content(s), 1.0 / static_cast<double>(s.size()));
    }
  }
}

TEST(MetricProperties, PicOfStrictAlternation) {
  std::vector<Symbol> s;
  for (int i = 0; i < 17; ++i) s.push_back(i % 2 ? S::Neg : S::Pos);
  EXPECT_EQ(partial_information_content(s), 1.0);
}

TEST(MetricProperties, AutocorrelationAffineInvariance) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> scale(0.05, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = random_walk_values(rng, 60);
    const double a = scale(rng);
    const double b = (1.0 - a) * scale(rng);
    std::vector<double> t;
    for (double x : v) t.push_back(a * x + b);
    EXPECT_NEAR(autocorrelation(FitnessWalk(v)), autocorrelation(FitnessWalk(t)), 1e-9);
  }
}

TEST(MetricProperties, RangesOverRandomWalks) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::size_t> len(2, 80);
  std::uniform_real_distribution<double> eps(0.0, 0.3);
  for (int trial = 0; trial < 10000; ++trial) {
    const FitnessWalk w(random_walk_values(rng, len(rng)));
    const auto r = compute_all(w, trial % 2 ? eps(rng) : 0.0);
    ASSERT_GE(r.ac, -1.0);
    ASSERT_LE(r.ac, 1.0);
    ASSERT_GT(r.nd, 0.0);
    ASSERT_LE(r.nd, 1.0);
    ASSERT_GT(r.nv, 0.0);
    ASSERT_LE(r.nv, 1.0);
    for (double x : {r.ic, r.pic, r.dbi}) {
      ASSERT_GE(x, 0.0);
      ASSERT_LE(x, 1.0 + 1e-12);
    }
  }
}

TEST(MetricProperties, Pure) {
  std::mt19937_64 rng(23);
  const FitnessWalk w(random_walk_values(rng, 500));
  const auto a = compute_all(w, 0.01, 3);
  const auto b = compute_all(w, 0.01, 3);
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(Oracle, SymbolsAgreeWithLibrary) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_walk_values(rng, 30);
    EXPECT_EQ(as_chars(symbolize(delta_series(FitnessWalk(v)), 0.1)),
              oracle::symbols(oracle::deltas(v), 0.1));
  }
}

}  // namespace
}  // namespace fitscape::metrics
