#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bforest/analysis.hpp"
#include "bforest/engine.hpp"
#include "test_util.hpp"

namespace bforest {
namespace {

TEST(Features, ConstantSegment) {
  const std::vector<double> v{2, 2, 2};
  const auto f = extract_features(v);
  EXPECT_EQ(f.mean, 2.0);
  EXPECT_EQ(f.variance, 0.0);
  EXPECT_EQ(f.skew, 0.0);
  EXPECT_EQ(f.kurtosis, 0.0);
  EXPECT_EQ(f.min, 2.0);
  EXPECT_EQ(f.max, 2.0);
  EXPECT_EQ(f.median, 2.0);
  EXPECT_EQ(f.p25, 2.0);
  EXPECT_EQ(f.p75, 2.0);
}

TEST(Features, OneToFour) {
  const std::vector<double> v{4, 1, 3, 2};
  const auto f = extract_features(v);
  EXPECT_DOUBLE_EQ(f.mean, 2.5);
  EXPECT_DOUBLE_EQ(f.variance, 1.25);
  EXPECT_NEAR(f.skew, 0.0, 1e-12);
  EXPECT_NEAR(f.kurtosis, 2.5625 / (1.25 * 1.25) - 3.0, 1e-12);
  EXPECT_EQ(f.min, 1.0);
  EXPECT_EQ(f.max, 4.0);
  EXPECT_DOUBLE_EQ(f.median, 2.5);
  EXPECT_DOUBLE_EQ(f.p25, 1.75);
  EXPECT_DOUBLE_EQ(f.p75, 3.25);
}

TEST(Features, EmptyThrows) {
  EXPECT_THROW(extract_features(std::vector<double>{}), std::invalid_argument);
}

// Long double moments and a rank-based percentile.
PatternFeatures oracle_features(std::vector<double> v) {
  const long double n = v.size();
  long double sum = 0;
  for (double x : v) sum += x;
  const long double mean = sum / n;
  long double m2 = 0, m3 = 0, m4 = 0;
  for (double x : v) {
    const long double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  std::sort(v.begin(), v.end());
  auto pct = [&](long double q) {
    const long double h = (n - 1) * q;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= v.size()) return static_cast<double>(v.back());
    return static_cast<double>(v[lo] + (h - lo) * (static_cast<long double>(v[lo + 1]) - v[lo]));
  };
  PatternFeatures f;
  f.mean = static_cast<double>(mean);
  f.variance = static_cast<double>(m2);
  f.skew = m2 > 0 ? static_cast<double>(m3 / std::pow(m2, 1.5L)) : 0.0;
  f.kurtosis = m2 > 0 ? static_cast<double>(m4 / (m2 * m2) - 3) : 0.0;
  f.min = v.front();
  f.max = v.back();
  f.median = pct(0.5L);
  f.p25 = pct(0.25L);
  f.p75 = pct(0.75L);
  return f;
}

void expect_close(double got, double want, double scale) {
  EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, scale));
}

TEST(Features, MatchBruteForceOracle) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    const double offset = static_cast<double>(rng() % 200) - 100.0;
    const double spread = 0.1 + static_cast<double>(rng() % 50);
    std::vector<double> v(n);
    for (auto& x : v) x = offset + spread * noise(rng);
    const auto got = extract_features(v);
    const auto want = oracle_features(v);
    const double s = std::abs(offset) + spread;
    expect_close(got.mean, want.mean, s);
    expect_close(got.variance, want.variance, s * s);
    expect_close(got.skew, want.skew, 1.0);
    expect_close(got.kurtosis, want.kurtosis, 1.0);
    EXPECT_EQ(got.min, want.min);
    EXPECT_EQ(got.max, want.max);
    expect_close(got.median, want.median, s);
    expect_close(got.p25, want.p25, s);
    expect_close(got.p75, want.p75, s);
    ASSERT_FALSE(::testing::Test::HasFailure()) << "trial " << trial;
  }
}

TEST(Percentile, Endpoints) {
  const std::vector<double> v{1, 5, 9};
  EXPECT_EQ(percentile_sorted(v, 0.0), 1.0);
  EXPECT_EQ(percentile_sorted(v, 1.0), 9.0);
  EXPECT_EQ(percentile_sorted(v, 0.75), 7.0);
  EXPECT_THROW(percentile_sorted(std::vector<double>{}, 0.5), std::invalid_argument);
}

TEST(SlidingWindow, StartsAndCount) {
  std::vector<double> series(10);
  for (std::size_t i = 0; i < series.size(); ++i) series[i] = static_cast<double>(i * i);
  const auto v = sliding_window_variances(series, 4, 0.5);
  ASSERT_EQ(v.size(), 4u);
  for (std::size_t k = 0; k < v.size(); ++k) {
    EXPECT_DOUBLE_EQ(v[k], population_variance(std::span<const double>(series).subspan(2 * k, 4)));
  }
}

TEST(SlidingWindow, MatchesNaiveOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 300;
    const std::size_t w = 2 + rng() % (n - 1);
    const double overlap = static_cast<double>(rng() % 10) / 10.0;
    std::vector<double> series(n);
    for (auto& x : series) x = static_cast<double>(rng() % 1000) / 7.0;
    const auto got = sliding_window_variances(series, w, overlap);

    const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(w * (1 - overlap) - 1e-9)));
    std::vector<double> want;
    for (std::size_t s = 0; s + w <= n; s += stride) {
      double mean = 0;
      for (std::size_t i = s; i < s + w; ++i) mean += series[i];
      mean /= w;
      double var = 0;
      for (std::size_t i = s; i < s + w; ++i) var += (series[i] - mean) * (series[i] - mean);
      want.push_back(var / w);
    }
    ASSERT_EQ(got.size(), want.size());
    ASSERT_EQ(got.size(), (n - w) / stride + 1);
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-9 * (1 + want[i]));
  }
}

TEST(SlidingWindow, RejectsBadArguments) {
  const std::vector<double> series(10, 1.0);
  EXPECT_THROW(sliding_window_variances(series, 1), std::invalid_argument);
  EXPECT_THROW(sliding_window_variances(series, 11), std::invalid_argument);
  EXPECT_THROW(sliding_window_variances(series, 4, 1.0), std::invalid_argument);
  EXPECT_THROW(sliding_window_variances(series, 4, -0.1), std::invalid_argument);
}

TEST(Summary, TukeyWhiskers) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 100};
  const auto s = summarize(v);
  EXPECT_EQ(s.p25, 3.0);
  EXPECT_EQ(s.median, 5.0);
  EXPECT_EQ(s.p75, 7.0);
  EXPECT_EQ(s.lower_whisker, 1.0);
  EXPECT_EQ(s.upper_whisker, 8.0);
}

// Flat series with one step; the behavior segment brackets the step.
TEST(CompareVariances, StepFixture) {
  std::vector<double> series(1000, 0.0);
  std::fill(series.begin() + 500, series.end(), 1.0);
  const std::vector<double> segment(series.begin() + 490, series.begin() + 510);
  const auto cmp = compare_variances({segment}, {series});
  EXPECT_EQ(cmp.window_length, 20u);
  EXPECT_DOUBLE_EQ(cmp.db_summary.median, 0.25);
  EXPECT_EQ(cmp.window_summary.median, 0.0);
  EXPECT_GE(cmp.db_summary.median, 2.0 * cmp.window_summary.median);
}

TEST(CompareVariances, SingleSegment) {
  const std::vector<double> series{0, 1, 0, 1, 0, 1, 0, 1};
  const auto cmp = compare_variances({{0, 1, 0, 1}}, {series});
  EXPECT_EQ(cmp.window_length, 4u);
  EXPECT_EQ(cmp.db_variances.size(), 1u);
  EXPECT_EQ(cmp.window_variances.size(), 3u);
  EXPECT_EQ(cmp.db_summary.lower_whisker, cmp.db_summary.upper_whisker);
}

TEST(CompareVariances, Errors) {
  EXPECT_THROW(compare_variances({}, {{1, 2, 3}}), std::invalid_argument);
  EXPECT_THROW(compare_variances({{1, 2, 3, 4, 5}}, {{1, 2}}), std::invalid_argument);
}

TEST(Synthetic, Deterministic) {
  SyntheticOptions opts;
  opts.seed = 42;
  const auto a = generate_synthetic(opts);
  const auto b = generate_synthetic(opts);
  ASSERT_EQ(a.frames.size(), b.frames.size());
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    EXPECT_EQ(a.frames[i].t, b.frames[i].t);
    EXPECT_EQ(a.frames[i].y, b.frames[i].y);
  }
  opts.seed = 43;
  EXPECT_NE(generate_synthetic(opts).frames[0].y, a.frames[0].y);
}

TEST(Synthetic, Layout) {
  SyntheticOptions opts;
  opts.bursts_per_type = 2;
  opts.noise_sigma = 0.0;
  const auto s = generate_synthetic(opts);
  EXPECT_EQ(s.frames.size(), 600u + 8u * 800u);
  EXPECT_EQ(s.burst_types, (std::vector<std::size_t>{0, 1, 2, 3, 0, 1, 2, 3}));
  EXPECT_EQ(s.burst_spans[0], (Span{600, 800}));
  EXPECT_EQ(s.frames[0].y, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(burst_type(2).high_channel, 1u);
  EXPECT_EQ(burst_type(1).high_wave, Waveform::Sine);
}

TEST(Synthetic, ZeroBurstsGiveEmptyForest) {
  SyntheticOptions opts;
  opts.bursts_per_type = 0;
  const auto s = generate_synthetic(opts);
  BehaviorForest forest;
  const auto stats = process_stream("s", s.frames, testing::synthetic_config(), forest);
  EXPECT_TRUE(forest.empty());
  EXPECT_EQ(stats.detected_db_count, 0u);
}

TEST(Synthetic, NoiselessRunHasFourPatterns) {
  SyntheticOptions opts;
  opts.noise_sigma = 0.0;
  opts.bursts_per_type = 3;
  const auto s = generate_synthetic(opts);
  BehaviorForest forest;
  const auto stats = process_stream("s", s.frames, testing::synthetic_config(), forest);
  EXPECT_EQ(forest.distinct_paths(), 4u);
  EXPECT_EQ(stats.detected_db_count, 12u);
  for (const auto& tp : forest.terminal_paths()) EXPECT_EQ(tp.terminal_count, 3u);
}

}  // namespace
}  // namespace bforest
