#include "bforest/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace bforest {

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double population_variance(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("variance of an empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0;
  for (double v : values) m2 += (v - mean) * (v - mean);
  return m2 / n;
}

PatternFeatures extract_features(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("cannot extract features of an empty segment");
  const double n = static_cast<double>(values.size());
  PatternFeatures f;
  f.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0, scale = 0.0;
  for (double v : values) {
    const double d = v - f.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
    scale = std::max(scale, std::abs(v));
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  f.variance = m2;
  // Rounding noise on a constant segment is not a shape.
  const double floor = 1e-12 * std::max(scale, 1e-300);
  if (m2 > floor * floor) {
    f.skew = m3 / std::pow(m2, 1.5);
    f.kurtosis = m4 / (m2 * m2) - 3.0;
  }

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  f.min = sorted.front();
  f.max = sorted.back();
  f.median = percentile_sorted(sorted, 0.5);
  f.p25 = percentile_sorted(sorted, 0.25);
  f.p75 = percentile_sorted(sorted, 0.75);
  return f;
}

std::vector<double> sliding_window_variances(std::span<const double> series, std::size_t window,
                                             double overlap) {
  if (window < 2) throw std::invalid_argument("window length must be >= 2");
  if (window > series.size()) throw std::invalid_argument("window longer than series");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("overlap must lie in [0, 1)");
  const auto stride = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(static_cast<double>(window) * (1.0 - overlap) - 1e-12)));
  std::vector<double> result;
  result.reserve((series.size() - window) / stride + 1);
  for (std::size_t start = 0; start + window <= series.size(); start += stride) {
    result.push_back(population_variance(series.subspan(start, window)));
  }
  return result;
}

FiveNumberSummary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("cannot summarize an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  FiveNumberSummary s;
  s.p25 = percentile_sorted(sorted, 0.25);
  s.median = percentile_sorted(sorted, 0.5);
  s.p75 = percentile_sorted(sorted, 0.75);
  const double iqr = s.p75 - s.p25;
  const double lo_fence = s.p25 - 1.5 * iqr;
  const double hi_fence = s.p75 + 1.5 * iqr;
  s.lower_whisker = *std::lower_bound(sorted.begin(), sorted.end(), lo_fence);
  s.upper_whisker = *std::prev(std::upper_bound(sorted.begin(), sorted.end(), hi_fence));
  return s;
}

VarianceComparison compare_variances(const std::vector<std::vector<double>>& db_segments,
                                     const std::vector<std::vector<double>>& series) {
  if (db_segments.empty()) throw std::invalid_argument("no recorded behaviors to compare");
  VarianceComparison cmp;
  double total = 0.0;
  for (const auto& seg : db_segments) {
    if (seg.empty()) throw std::invalid_argument("empty behavior segment");
    total += static_cast<double>(seg.size());
    cmp.db_variances.push_back(population_variance(seg));
  }
  cmp.window_length = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::llround(total / static_cast<double>(db_segments.size()))));
  for (const auto& s : series) {
    if (s.size() < cmp.window_length) continue;
    const auto v = sliding_window_variances(s, cmp.window_length, 0.5);
    cmp.window_variances.insert(cmp.window_variances.end(), v.begin(), v.end());
  }
  if (cmp.window_variances.empty()) throw std::invalid_argument("no series is as long as the window");
  cmp.db_summary = summarize(cmp.db_variances);
  cmp.window_summary = summarize(cmp.window_variances);
  return cmp;
}

BurstType burst_type(std::size_t k) {
  return BurstType{(k % 2 == 0) ? Waveform::Sawtooth : Waveform::Sine, (k % 4 < 2) ? 0u : 1u};
}

double waveform_value(Waveform wave, std::size_t k, std::size_t length) {
  const double phase = static_cast<double>(k) / static_cast<double>(length);
  if (wave == Waveform::Sine) return std::sin(2.0 * std::numbers::pi * phase);
  // Starts at zero, ramps to +1, drops to -1 at mid-period, ramps back to zero.
  const double shifted = phase + 0.5;
  return 2.0 * (shifted - std::floor(shifted)) - 1.0;
}

SyntheticSeries generate_synthetic(const SyntheticOptions& options) {
  if (options.noise_sigma < 0.0) throw std::invalid_argument("noise_sigma must be non-negative");
  if (options.burst_length < 2) throw std::invalid_argument("burst_length must be >= 2");
  SyntheticSeries out;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, options.noise_sigma > 0.0 ? options.noise_sigma : 1.0);

  const auto emit = [&](double y0, double y1) {
    SampleFrame frame;
    frame.t = static_cast<double>(out.frames.size()) * options.dt;
    frame.y = {y0, y1};
    if (options.noise_sigma > 0.0) {
      for (double& v : frame.y) v += noise(rng);
    }
    out.frames.push_back(std::move(frame));
  };
  const auto gap = [&] {
    for (std::size_t i = 0; i < options.gap_length; ++i) emit(0.0, 0.0);
  };

  gap();
  const std::size_t bursts = 4 * options.bursts_per_type;
  for (std::size_t b = 0; b < bursts; ++b) {
    const std::size_t type = b % 4;
    const BurstType shape = burst_type(type);
    const Waveform low_wave = shape.high_wave == Waveform::Sine ? Waveform::Sawtooth : Waveform::Sine;
    const std::size_t start = out.frames.size();
    for (std::size_t k = 0; k < options.burst_length; ++k) {
      const double high = options.amplitude_high * waveform_value(shape.high_wave, k, options.burst_length);
      const double low = options.amplitude_low * waveform_value(low_wave, k, options.burst_length);
      if (shape.high_channel == 0) {
        emit(high, low);
      } else {
        emit(low, high);
      }
    }
    out.burst_types.push_back(type);
    out.burst_spans.push_back(Span{start, out.frames.size()});
    gap();
  }
  return out;
}

}  // namespace bforest
