#include "bforest/types.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bforest/errors.hpp"

namespace bforest {

BreakpointSpec::BreakpointSpec(std::vector<std::vector<double>> channels)
    : channels_(std::move(channels)) {
  if (channels_.empty()) throw ConfigError("breakpoints: at least one channel required");
  for (std::size_t k = 0; k < channels_.size(); ++k) {
    const auto& list = channels_[k];
    if (list.empty()) {
      throw ConfigError("breakpoints: channel " + std::to_string(k) + " has an empty list");
    }
    for (std::size_t j = 0; j < list.size(); ++j) {
      if (!std::isfinite(list[j])) {
        throw ConfigError("breakpoints: channel " + std::to_string(k) + " has a non-finite value");
      }
      if (j > 0 && !(list[j - 1] < list[j])) {
        throw ConfigError("breakpoints: channel " + std::to_string(k) + " is not strictly ascending");
      }
    }
  }
}

BreakpointSpec BreakpointSpec::gaussian(std::span<const unsigned> alphabet_sizes) {
  std::vector<std::vector<double>> lists;
  lists.reserve(alphabet_sizes.size());
  for (unsigned alpha : alphabet_sizes) lists.push_back(gaussian_breakpoints(alpha));
  return BreakpointSpec(std::move(lists));
}

std::vector<std::size_t> BreakpointSpec::alphabet_sizes() const {
  std::vector<std::size_t> sizes;
  sizes.reserve(channels_.size());
  for (const auto& list : channels_) sizes.push_back(list.size() + 1);
  return sizes;
}

std::uint64_t BreakpointSpec::unified_alphabet_size() const {
  std::uint64_t total = 1;
  for (const auto& list : channels_) total *= list.size() + 1;
  return total;
}

void EngineConfig::validate() const {
  if (breakpoints.dims() == 0) throw ConfigError("config: breakpoints missing");
  if (breakpoints.unified_alphabet_size() > std::numeric_limits<Symbol>::max()) {
    throw ConfigError("config: unified alphabet does not fit a 32-bit symbol");
  }
  if (log_base < 2) throw ConfigError("config: log_base must be >= 2");
  if (relevance_threshold < 1) throw ConfigError("config: relevance_threshold must be >= 1");
  if (!(hysteresis_margin >= 0.0 && hysteresis_margin < 0.5)) {
    throw ConfigError("config: hysteresis_margin must lie in [0, 0.5)");
  }
  if (initiation_run < 1) throw ConfigError("config: initiation_run must be >= 1");
  if (termination_run < 2) throw ConfigError("config: termination_run must be >= 2");
  if (buffer_capacity < 2) throw ConfigError("config: buffer_capacity must be >= 2");
}

void StreamHandle::check_frame(const SampleFrame& frame) const {
  if (frame.y.size() != dims_) {
    throw FrameError("frame has " + std::to_string(frame.y.size()) + " channels, stream expects " +
                     std::to_string(dims_));
  }
  for (double v : frame.y) {
    if (std::isnan(v)) throw FrameError("frame contains NaN");
  }
  if (std::isnan(frame.t)) throw FrameError("frame timestamp is NaN");
}

StreamHandle validate_stream_header(std::size_t dims, const EngineConfig& config) {
  if (dims < 1) throw ConfigError("stream must have at least one channel");
  config.validate();
  if (config.breakpoints.dims() != dims) {
    throw ConfigError("dimension mismatch: stream has " + std::to_string(dims) +
                      " channels, config has " + std::to_string(config.breakpoints.dims()) +
                      " breakpoint lists");
  }
  return StreamHandle(dims, std::make_shared<const EngineConfig>(config));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  // Acklam's rational approximation followed by one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

std::vector<double> gaussian_breakpoints(unsigned alpha) {
  if (alpha < 2) throw ConfigError("alphabet size must be >= 2");
  std::vector<double> result(alpha - 1);
  for (unsigned j = 1; j < alpha; ++j) {
    result[j - 1] = normal_quantile(static_cast<double>(j) / alpha);
  }
  // Enforce exact antisymmetry; the quantile at 1/2 is exactly zero.
  for (unsigned j = 1; j <= (alpha - 1) / 2; ++j) {
    const double m = 0.5 * (result[alpha - 1 - j] - result[j - 1]);
    result[j - 1] = -m;
    result[alpha - 1 - j] = m;
  }
  if (alpha % 2 == 0) result[alpha / 2 - 1] = 0.0;
  return result;
}

}  // namespace bforest
