#pragma once

#include <optional>
#include <vector>

#include "bforest/types.hpp"

namespace bforest {

enum class Termination { PlateauReached, EndOfStream };

struct DiscoveredBehavior {
  // Root stationary symbol, transition symbols, first terminating symbol.
  std::vector<Symbol> path;
  // From the last sample of the root run to the first sample of the
  // terminating run; EndOfStream behaviors run to the end of the last run.
  Span raw_span;
  Termination termination = Termination::PlateauReached;
};

// State machine over the reduced symbol stream. A behavior opens when a symbol
// differs from a run of at least `initiation_run` identical symbols and closes
// when some symbol repeats `termination_run` times in a row.
class Detector {
 public:
  enum class Phase { Stationary, InBehavior };

  explicit Detector(unsigned initiation_run = 2, unsigned termination_run = 3);

  std::optional<DiscoveredBehavior> step(const ReducedSymbol& sym);
  std::optional<DiscoveredBehavior> flush();

  Phase phase() const { return phase_; }
  const std::vector<Symbol>& current_path() const { return path_; }
  std::optional<Symbol> last_symbol() const { return last_symbol_; }
  unsigned run_count() const { return run_count_; }

  // Earliest raw index a future behavior can still reference.
  std::size_t retain_from() const;

 private:
  unsigned initiation_run_;
  unsigned termination_run_;
  Phase phase_ = Phase::Stationary;

  // Stationary context.
  std::optional<Symbol> last_symbol_;
  unsigned run_count_ = 0;
  Span last_span_;

  // Open behavior.
  std::vector<Symbol> path_;
  unsigned tail_run_ = 0;
  std::size_t behavior_start_ = 0;
  Span tail_span_;
};

}  // namespace bforest
