#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bforest/types.hpp"

namespace bforest {

// Nine descriptors of a segment's raw values. Variance is the population
// variance, kurtosis is excess kurtosis, percentiles interpolate linearly.
struct PatternFeatures {
  double mean = 0.0;
  double variance = 0.0;
  double skew = 0.0;
  double kurtosis = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
};

PatternFeatures extract_features(std::span<const double> values);

// q in [0, 1]; `sorted` must be ascending and non-empty.
double percentile_sorted(std::span<const double> sorted, double q);

double population_variance(std::span<const double> values);

// Windows start every ceil(window * (1 - overlap)) samples; a trailing partial
// window is dropped.
std::vector<double> sliding_window_variances(std::span<const double> series, std::size_t window,
                                             double overlap = 0.5);

// Box-plot summary with Tukey whiskers (most extreme data within 1.5 IQR).
struct FiveNumberSummary {
  double lower_whisker = 0.0;
  double p25 = 0.0;
  double median = 0.0;
  double p75 = 0.0;
  double upper_whisker = 0.0;
};

FiveNumberSummary summarize(std::span<const double> values);

struct VarianceComparison {
  std::size_t window_length = 0;
  std::vector<double> db_variances;
  std::vector<double> window_variances;
  FiveNumberSummary db_summary;
  FiveNumberSummary window_summary;
};

// Window length is the rounded mean segment length (at least 2). Series shorter
// than the window contribute no windows. Throws std::invalid_argument without
// segments or when no series is long enough.
VarianceComparison compare_variances(const std::vector<std::vector<double>>& db_segments,
                                     const std::vector<std::vector<double>>& series);

enum class Waveform { Sawtooth, Sine };

struct SyntheticOptions {
  std::uint64_t seed = 0;
  std::size_t bursts_per_type = 1;
  double amplitude_high = 1.0;
  double amplitude_low = 0.6;
  double noise_sigma = 0.05;
  std::size_t burst_length = 200;
  std::size_t gap_length = 600;
  double dt = 1.0;
};

// Burst type k in 0..3: the amplitude_high wave runs on channel 0 for k < 2 and
// on channel 1 otherwise; the other channel carries the other waveform at
// amplitude_low. Even k puts a sawtooth on the amplitude_high channel.
struct BurstType {
  Waveform high_wave;
  std::size_t high_channel;
};

BurstType burst_type(std::size_t k);

struct SyntheticSeries {
  std::vector<SampleFrame> frames;
  std::vector<std::size_t> burst_types;
  std::vector<Span> burst_spans;
};

// Gap, burst, gap, burst, ..., gap. Types cycle 0, 1, 2, 3.
SyntheticSeries generate_synthetic(const SyntheticOptions& options);

double waveform_value(Waveform wave, std::size_t k, std::size_t length);

}  // namespace bforest
