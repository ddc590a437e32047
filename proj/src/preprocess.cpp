#include "bforest/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bforest/errors.hpp"

namespace bforest {

Symbol discretize(double value, std::span<const double> breakpoints) {
  if (std::isnan(value)) throw FrameError("cannot discretize NaN");
  // Number of breakpoints <= value, i.e. the bin [b_{j-1}, b_j) containing value.
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), value);
  return static_cast<Symbol>(it - breakpoints.begin());
}

HysteresisFilter::HysteresisFilter(std::vector<double> breakpoints, double margin)
    : breakpoints_(std::move(breakpoints)) {
  const std::size_t bins = breakpoints_.size() + 1;
  deltas_.resize(bins);
  for (std::size_t j = 0; j < bins; ++j) {
    double width = 1.0;
    if (bins >= 3) {
      // Edge bins borrow the width of their finite neighbour.
      const std::size_t finite = std::clamp<std::size_t>(j, 1, bins - 2);
      width = breakpoints_[finite] - breakpoints_[finite - 1];
    }
    deltas_[j] = margin * width;
  }
}

double HysteresisFilter::delta_for(Symbol bin) const { return deltas_.at(bin); }

Symbol HysteresisFilter::step(double value) {
  return step(value, discretize(value, breakpoints_));
}

Symbol HysteresisFilter::step(double value, Symbol candidate) {
  if (!committed_) {
    committed_ = candidate;
    return candidate;
  }
  const Symbol current = *committed_;
  if (candidate == current) return current;
  const double delta = deltas_[current];
  Symbol next;
  if (candidate > current) {
    next = std::max(current, discretize(value - delta, breakpoints_));
  } else {
    next = std::min(current, discretize(value + delta, breakpoints_));
  }
  committed_ = next;
  return next;
}

Symbol unify(std::span<const Symbol> symbols, std::span<const std::size_t> alphabets) {
  if (symbols.size() != alphabets.size()) {
    throw std::invalid_argument("unify: symbol and alphabet counts differ");
  }
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    if (symbols[k] >= alphabets[k]) {
      throw std::out_of_range("unify: symbol " + std::to_string(symbols[k]) +
                              " out of range for alphabet " + std::to_string(alphabets[k]));
    }
    index = index * alphabets[k] + symbols[k];
  }
  return static_cast<Symbol>(index);
}

std::vector<Symbol> split_unified(Symbol unified, std::span<const std::size_t> alphabets) {
  std::vector<Symbol> symbols(alphabets.size());
  std::uint64_t rest = unified;
  for (std::size_t k = alphabets.size(); k-- > 0;) {
    symbols[k] = static_cast<Symbol>(rest % alphabets[k]);
    rest /= alphabets[k];
  }
  if (rest != 0) throw std::out_of_range("split_unified: symbol out of range");
  return symbols;
}

std::size_t reduced_length(std::size_t run_length, unsigned base) {
  if (base < 2) throw std::invalid_argument("reduced_length: base must be >= 2");
  // Smallest k with base^k >= run_length, clamped to at least one copy.
  std::size_t k = 0;
  std::uint64_t power = 1;
  while (power < run_length) {
    ++k;
    if (power > std::numeric_limits<std::uint64_t>::max() / base) break;
    power *= base;
  }
  return std::max<std::size_t>(1, k);
}

std::vector<ReducedSymbol> numerosity_reduce(Symbol symbol, Span run, unsigned base) {
  const std::size_t copies = reduced_length(run.size(), base);
  return std::vector<ReducedSymbol>(copies, ReducedSymbol{symbol, run, run.size()});
}

Pipeline::Pipeline(StreamHandle handle) : handle_(std::move(handle)) {
  const auto& spec = handle_.config().breakpoints;
  alphabets_ = spec.alphabet_sizes();
  filters_.reserve(spec.dims());
  for (std::size_t k = 0; k < spec.dims(); ++k) {
    const auto bp = spec.channel(k);
    filters_.emplace_back(std::vector<double>(bp.begin(), bp.end()),
                          handle_.config().hysteresis_margin);
  }
  scratch_.resize(spec.dims());
}

void Pipeline::step(const SampleFrame& frame, std::vector<ReducedSymbol>& out) {
  handle_.check_frame(frame);
  if (last_t_ && !(frame.t > *last_t_)) {
    throw FrameError("timestamps must strictly increase (sample " + std::to_string(index_) + ")");
  }
  for (std::size_t k = 0; k < filters_.size(); ++k) scratch_[k] = filters_[k].step(frame.y[k]);
  const Symbol unified = unify(scratch_, alphabets_);

  if (pending_ && pending_->symbol == unified) {
    ++pending_->length;
  } else {
    if (pending_) {
      const Span run{pending_->start, pending_->start + pending_->length};
      const auto copies = numerosity_reduce(pending_->symbol, run, handle_.config().log_base);
      out.insert(out.end(), copies.begin(), copies.end());
    }
    pending_ = PendingRun{unified, index_, 1};
  }
  last_t_ = frame.t;
  ++index_;
}

std::vector<ReducedSymbol> Pipeline::step(const SampleFrame& frame) {
  std::vector<ReducedSymbol> out;
  step(frame, out);
  return out;
}

void Pipeline::flush(std::vector<ReducedSymbol>& out) {
  if (!pending_) return;
  const Span run{pending_->start, pending_->start + pending_->length};
  const auto copies = numerosity_reduce(pending_->symbol, run, handle_.config().log_base);
  out.insert(out.end(), copies.begin(), copies.end());
  pending_.reset();
}

std::vector<ReducedSymbol> Pipeline::flush() {
  std::vector<ReducedSymbol> out;
  flush(out);
  return out;
}

std::optional<Symbol> Pipeline::last_unified() const {
  if (!pending_) return std::nullopt;
  return pending_->symbol;
}

}  // namespace bforest
