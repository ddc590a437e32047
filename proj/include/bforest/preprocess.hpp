#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bforest/types.hpp"

namespace bforest {

// Bin index of `value` for half-open bins [b_{j-1}, b_j) with implicit
// -inf/+inf sentinels. Throws FrameError for NaN.
Symbol discretize(double value, std::span<const double> breakpoints);

// Suppresses symbol toggling around breakpoints. The committed symbol moves
// to a new bin only once the value has passed the crossed breakpoint by
// delta = margin * width(committed bin). Unbounded edge bins borrow the width
// of the nearest finite bin; with a single breakpoint the width is 1.
class HysteresisFilter {
 public:
  HysteresisFilter(std::vector<double> breakpoints, double margin);

  Symbol step(double value);
  Symbol step(double value, Symbol candidate);

  std::optional<Symbol> committed() const { return committed_; }
  double delta_for(Symbol bin) const;
  void reset() { committed_.reset(); }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> deltas_;
  std::optional<Symbol> committed_;
};

// Mixed-radix index of a symbol tuple: ((s1 * a2 + s2) * a3 + s3) ...
// Throws std::out_of_range if a symbol exceeds its alphabet.
Symbol unify(std::span<const Symbol> symbols, std::span<const std::size_t> alphabets);

// Inverse of unify.
std::vector<Symbol> split_unified(Symbol unified, std::span<const std::size_t> alphabets);

// max(1, ceil(log_base(run_length))), computed in integers.
std::size_t reduced_length(std::size_t run_length, unsigned base);

// Copies emitted for one closed constant run.
std::vector<ReducedSymbol> numerosity_reduce(Symbol symbol, Span run, unsigned base);

// The raw run that has not been closed yet.
struct PendingRun {
  Symbol symbol = 0;
  std::size_t start = 0;
  std::size_t length = 0;
};

// discretize -> hysteresis -> unify -> numerosity reduction for one stream.
// Not thread-safe; one instance per stream.
class Pipeline {
 public:
  explicit Pipeline(StreamHandle handle);

  // Appends reduced symbols for every run closed by this frame to `out`.
  void step(const SampleFrame& frame, std::vector<ReducedSymbol>& out);
  std::vector<ReducedSymbol> step(const SampleFrame& frame);

  // Closes the final run.
  void flush(std::vector<ReducedSymbol>& out);
  std::vector<ReducedSymbol> flush();

  // Symbol the unification stage produced for the last frame.
  std::optional<Symbol> last_unified() const;
  const std::optional<PendingRun>& pending() const { return pending_; }
  std::size_t samples_seen() const { return index_; }
  const StreamHandle& handle() const { return handle_; }

 private:
  StreamHandle handle_;
  std::vector<std::size_t> alphabets_;
  std::vector<HysteresisFilter> filters_;
  std::vector<Symbol> scratch_;
  std::optional<PendingRun> pending_;
  std::optional<double> last_t_;
  std::size_t index_ = 0;
};

}  // namespace bforest
