#include "bforest/detector.hpp"

#include <cassert>
#include <stdexcept>

namespace bforest {

Detector::Detector(unsigned initiation_run, unsigned termination_run)
    : initiation_run_(initiation_run), termination_run_(termination_run) {
  if (initiation_run_ < 1) throw std::invalid_argument("initiation_run must be >= 1");
  if (termination_run_ < 2) throw std::invalid_argument("termination_run must be >= 2");
}

std::optional<DiscoveredBehavior> Detector::step(const ReducedSymbol& sym) {
  if (phase_ == Phase::Stationary) {
    if (last_symbol_ && *last_symbol_ == sym.symbol) {
      ++run_count_;
      last_span_ = sym.raw_span;
      return std::nullopt;
    }
    if (last_symbol_ && run_count_ >= initiation_run_) {
      phase_ = Phase::InBehavior;
      path_ = {*last_symbol_, sym.symbol};
      tail_run_ = 1;
      behavior_start_ = last_span_.end - 1;
      tail_span_ = sym.raw_span;
      return std::nullopt;
    }
    // Not enough stationary context: start over on the new symbol.
    last_symbol_ = sym.symbol;
    run_count_ = 1;
    last_span_ = sym.raw_span;
    return std::nullopt;
  }

  if (sym.symbol == path_.back()) {
    ++tail_run_;
  } else {
    tail_run_ = 1;
  }
  tail_span_ = sym.raw_span;

  if (tail_run_ < termination_run_) {
    path_.push_back(sym.symbol);
    return std::nullopt;
  }

  // The terminating symbol stays in the path exactly once.
  path_.resize(path_.size() - (termination_run_ - 2));
  DiscoveredBehavior db{std::move(path_), Span{behavior_start_, sym.raw_span.start + 1},
                        Termination::PlateauReached};
  assert(db.path.size() >= 2 && db.path[0] != db.path[1]);

  phase_ = Phase::Stationary;
  path_.clear();
  last_symbol_ = sym.symbol;
  run_count_ = termination_run_;
  last_span_ = sym.raw_span;
  tail_run_ = 0;
  return db;
}

std::optional<DiscoveredBehavior> Detector::flush() {
  if (phase_ != Phase::InBehavior) return std::nullopt;
  assert(path_.size() >= 2);
  DiscoveredBehavior db{std::move(path_), Span{behavior_start_, tail_span_.end},
                        Termination::EndOfStream};
  phase_ = Phase::Stationary;
  path_.clear();
  last_symbol_.reset();
  run_count_ = 0;
  tail_run_ = 0;
  return db;
}

std::size_t Detector::retain_from() const {
  if (phase_ == Phase::InBehavior) return behavior_start_;
  if (last_symbol_) return last_span_.end - 1;
  return 0;
}

}  // namespace bforest
