#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace bforest {

using Symbol = std::uint32_t;

// Half-open interval [start, end) of raw sample indices.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool empty() const { return end <= start; }
  bool contains(std::size_t i) const { return i >= start && i < end; }
  friend bool operator==(const Span&, const Span&) = default;
};

// One timestamped d-dimensional observation.
struct SampleFrame {
  double t = 0.0;
  std::vector<double> y;
};

// Per-channel ascending breakpoints. The sentinels -inf/+inf are implicit, so
// a channel with k breakpoints has alphabet size k + 1.
class BreakpointSpec {
 public:
  BreakpointSpec() = default;

  // Throws ConfigError on an empty channel list, an empty breakpoint list,
  // non-finite values or a list that is not strictly ascending.
  explicit BreakpointSpec(std::vector<std::vector<double>> channels);

  // Every channel uses the standard-normal quantiles for its alphabet size.
  static BreakpointSpec gaussian(std::span<const unsigned> alphabet_sizes);

  std::size_t dims() const { return channels_.size(); }
  std::span<const double> channel(std::size_t k) const { return channels_.at(k); }
  const std::vector<std::vector<double>>& channels() const { return channels_; }
  std::size_t alphabet_size(std::size_t k) const { return channels_.at(k).size() + 1; }
  std::vector<std::size_t> alphabet_sizes() const;
  // Size of the Cartesian-product alphabet after unification.
  std::uint64_t unified_alphabet_size() const;

  friend bool operator==(const BreakpointSpec&, const BreakpointSpec&) = default;

 private:
  std::vector<std::vector<double>> channels_;
};

// A symbol together with the raw samples it stands for.
struct SymbolicFrame {
  Symbol symbol = 0;
  Span raw_span;
  friend bool operator==(const SymbolicFrame&, const SymbolicFrame&) = default;
};

// Output of numerosity reduction. All copies produced from one constant run
// share raw_span and run_length_raw.
struct ReducedSymbol {
  Symbol symbol = 0;
  Span raw_span;
  std::size_t run_length_raw = 1;
  friend bool operator==(const ReducedSymbol&, const ReducedSymbol&) = default;
};

struct EngineConfig {
  BreakpointSpec breakpoints;
  unsigned log_base = 10;
  unsigned relevance_threshold = 5;
  // Fraction of the committed bin's width a value must penetrate past a
  // breakpoint before the committed symbol changes.
  double hysteresis_margin = 0.05;
  // Identical reduced symbols needed before a change opens a behavior.
  unsigned initiation_run = 2;
  // Identical reduced symbols that close a behavior.
  unsigned termination_run = 3;
  // Maximum number of raw frames retained for materializing segments.
  std::size_t buffer_capacity = 65536;

  // Throws ConfigError when an invariant does not hold.
  void validate() const;
};

// Immutable view of a configuration bound to a stream of fixed arity.
class StreamHandle {
 public:
  std::size_t dims() const { return dims_; }
  const EngineConfig& config() const { return *config_; }

  // Throws FrameError on wrong arity or non-finite values.
  void check_frame(const SampleFrame& frame) const;

 private:
  friend StreamHandle validate_stream_header(std::size_t, const EngineConfig&);
  StreamHandle(std::size_t dims, std::shared_ptr<const EngineConfig> config)
      : dims_(dims), config_(std::move(config)) {}

  std::size_t dims_;
  std::shared_ptr<const EngineConfig> config_;
};

StreamHandle validate_stream_header(std::size_t dims, const EngineConfig& config);

// The alpha - 1 finite quantiles of N(0, 1) at probabilities j / alpha.
std::vector<double> gaussian_breakpoints(unsigned alpha);

// Inverse of the standard normal CDF on (0, 1).
double normal_quantile(double p);

}  // namespace bforest
