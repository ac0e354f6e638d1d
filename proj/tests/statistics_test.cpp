#include "lhd/statistics.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace lhd {
namespace {

Configuration reference_design() {
  return Configuration({3, 5}, {0, 1, 2,   //
                                1, 2, 1,   //
                                2, 0, 4,   //
                                3, 4, 3,   //
                                4, 3, 0});
}

// Mean and variance of (a-b)^2 over all unordered pairs of distinct values
// in {0..n-1}, by enumeration.
std::pair<double, double> gap_moments_brute(int n) {
  long double sum = 0, sum_sq = 0;
  std::int64_t count = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const long double y = static_cast<long double>(a - b) * (a - b);
      sum += y;
      sum_sq += y * y;
      ++count;
    }
  }
  const long double mean = sum / count;
  return {static_cast<double>(mean), static_cast<double>(sum_sq / count - mean * mean)};
}

TEST(MeanModel, MatchesClosedForm) {
  EXPECT_DOUBLE_EQ(mean_model(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(mean_model(3, 5), 15.0);  // reference design: 150 over 10 pairs
  EXPECT_DOUBLE_EQ(mean_model(30, 50), 12750.0);  // 30*50*51/6
  EXPECT_DOUBLE_EQ(mean_model(8, 20), 560.0);
}

TEST(MeanModel, AgreesWithEnumeratedGapMean) {
  for (int n = 2; n <= 40; ++n)
    EXPECT_NEAR(mean_model(1, n), gap_moments_brute(n).first, 1e-9) << "n " << n;
}

TEST(VarYExact, SmallCases) {
  EXPECT_DOUBLE_EQ(var_y_exact(2), 0.0);
  EXPECT_DOUBLE_EQ(var_y_exact(3), 2.0);  // gaps {1,4,1}: E(Y^2)=6, E(Y)=2
}

TEST(VarYExact, MatchesEnumerationUpTo200) {
  for (int n : {4, 5, 10, 17, 50, 200}) {
    const double brute = gap_moments_brute(n).second;
    EXPECT_NEAR(var_y_exact(n) / brute, 1.0, 1e-12) << "n " << n;
  }
  EXPECT_NEAR(var_y_exact(50), gap_moments_brute(50).second, 1e-9);
}

TEST(VarianceModel, ExactIsKTimesSingleDimension) {
  EXPECT_DOUBLE_EQ(variance_model(1, 2).exact, 0.0);
  EXPECT_DOUBLE_EQ(variance_model(6, 9).exact, 6 * var_y_exact(9));
}

TEST(VarianceModel, AsymptoticFormula) {
  // 7*10*100^4/180
  EXPECT_NEAR(variance_model(10, 100).asymptotic, 7e9 / 180.0, 1e-3);
}

TEST(VarianceModel, AsymptoticApproachesExactForLargeN) {
  const VarianceModel vm = variance_model(10, 100);
  EXPECT_NEAR(vm.asymptotic / vm.exact, 1.0, 0.05);
  // The agreement tightens as n grows.
  const VarianceModel vm2 = variance_model(10, 1000);
  EXPECT_NEAR(vm2.asymptotic / vm2.exact, 1.0, 0.005);
}

TEST(ClassifyRegime, PaperScaleExamples) {
  EXPECT_EQ(classify_regime(50, 40), RegimeLabel::unimodal);
  EXPECT_EQ(classify_regime(30, 50), RegimeLabel::bimodal);
  EXPECT_EQ(classify_regime(10, 100), RegimeLabel::spread);
}

TEST(ClassifyRegime, BoundariesFavorUnimodalThenSpread) {
  EXPECT_EQ(classify_regime(5, 5), RegimeLabel::unimodal);   // n == k
  EXPECT_EQ(classify_regime(5, 6), RegimeLabel::bimodal);
  EXPECT_EQ(classify_regime(5, 9), RegimeLabel::bimodal);
  EXPECT_EQ(classify_regime(5, 10), RegimeLabel::spread);    // n == 2k
  EXPECT_STREQ(to_string(classify_regime(5, 10)), "spread");
}

TEST(Histogram, WideBinHoldsEntireReferenceDesign) {
  const DistanceState state = build_distance_state(reference_design());
  const HistogramTable table = histogram(state, 30.0);
  ASSERT_EQ(table.counts.size(), 1u);
  EXPECT_EQ(table.counts[0], 10);
  EXPECT_DOUBLE_EQ(table.bin_edges[0], 3.0);
  EXPECT_DOUBLE_EQ(table.bin_edges[1], 33.0);
}

TEST(Histogram, CountsSumToPairCountAndEdgesIncrease) {
  const DistanceState state = build_distance_state(random_config({8, 20}, 11));
  const HistogramTable table = histogram(state, 12.5);
  std::int64_t total = 0;
  for (const std::int64_t c : table.counts) total += c;
  EXPECT_EQ(total, 190);
  ASSERT_EQ(table.bin_edges.size(), table.counts.size() + 1);
  for (std::size_t b = 0; b + 1 < table.bin_edges.size(); ++b)
    EXPECT_LT(table.bin_edges[b], table.bin_edges[b + 1]);
}

TEST(Histogram, MaximumLandsInLastBin) {
  // Values 3..29 with width 13: bins [3,16), [16,29), [29,42); 29 in the last.
  const DistanceState state = build_distance_state(reference_design());
  const HistogramTable table = histogram(state, 13.0);
  ASSERT_EQ(table.counts.size(), 3u);
  EXPECT_EQ(table.counts[0] + table.counts[1] + table.counts[2], 10);
  EXPECT_EQ(table.counts[2], 1);  // only the 29
  EXPECT_THROW(histogram(state, 0.0), std::invalid_argument);
}

TEST(Histogram, CsvLayout) {
  const DistanceState state = build_distance_state(reference_design());
  std::ostringstream out;
  write_histogram_csv(histogram(state, 30.0), out);
  EXPECT_EQ(out.str(), "bin_lo,bin_hi,count\n3,33,10\n");
}

TEST(InterquartileRange, ReferenceDesign) {
  // Sorted distances {3,9,11,11,12,14,18,19,24,29}: q1 = 11, q3 = 19.
  EXPECT_DOUBLE_EQ(interquartile_range(build_distance_state(reference_design())), 8.0);
}

TEST(EmpiricalMoments, MeanIsExactForAnySampleCount) {
  const InstanceSpec inst{7, 23};
  const Moments m = empirical_moments(inst, 3, 42);
  EXPECT_DOUBLE_EQ(m.mean, mean_model(inst.k, inst.n));
}

TEST(EmpiricalMoments, VarianceTracksModelOnSpreadInstance) {
  const InstanceSpec inst{10, 100};
  const Moments m = empirical_moments(inst, 50, 7);
  EXPECT_NEAR(m.variance / variance_model(inst.k, inst.n).asymptotic, 1.0, 0.10);
  EXPECT_NEAR(m.variance / variance_model(inst.k, inst.n).exact, 1.0, 0.10);
}

TEST(EmpiricalMoments, DegenerateInstanceHasZeroVariance) {
  const Moments m = empirical_moments({1, 2}, 4, 0);
  EXPECT_DOUBLE_EQ(m.mean, 1.0);
  EXPECT_DOUBLE_EQ(m.variance, 0.0);
}

TEST(EmpiricalMoments, RejectsZeroSamples) {
  EXPECT_THROW(empirical_moments({2, 4}, 0, 1), std::invalid_argument);
}

}  // namespace
}  // namespace lhd
