#include "bforest/selection.hpp"

#include <algorithm>
#include <string>

#include "bforest/errors.hpp"

namespace bforest {

const char* to_string(DecisionReason reason) {
  switch (reason) {
    case DecisionReason::Novel:
      return "novel";
    case DecisionReason::UnderThreshold:
      return "under_threshold";
    case DecisionReason::Discarded:
      return "discarded";
  }
  return "unknown";
}

Decision decide(const InsertionReceipt& receipt, const RelevancePolicy& policy) {
  if (receipt.created_new_node && policy.always_record_novel) {
    return {true, DecisionReason::Novel};
  }
  if (receipt.prior_terminal_count < policy.threshold) {
    return {true, DecisionReason::UnderThreshold};
  }
  return {false, DecisionReason::Discarded};
}

RawBuffer::RawBuffer(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

void RawBuffer::push(std::size_t index, SampleFrame frame) {
  entries_.emplace_back(index, std::move(frame));
  while (entries_.size() > capacity_) entries_.pop_front();
}

void RawBuffer::replace_last(std::size_t index, SampleFrame frame) {
  if (entries_.empty()) {
    push(index, std::move(frame));
    return;
  }
  entries_.back() = {index, std::move(frame)};
}

void RawBuffer::release_before(std::size_t index) {
  while (!entries_.empty() && entries_.front().first < index) entries_.pop_front();
}

std::vector<SampleFrame> RawBuffer::extract(Span span) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), span.start,
                             [](const auto& entry, std::size_t i) { return entry.first < i; });
  std::vector<SampleFrame> frames;
  frames.reserve(span.size());
  for (std::size_t i = span.start; i < span.end; ++i, ++it) {
    if (it == entries_.end() || it->first != i) {
      throw OverflowError("raw sample " + std::to_string(i) +
                          " is no longer buffered (capacity " + std::to_string(capacity_) + ")");
    }
    frames.push_back(it->second);
  }
  return frames;
}

std::optional<RecordedSegment> materialize(const std::string& stream_id, const DiscoveredBehavior& db,
                                           const Decision& decision, const InsertionReceipt& receipt,
                                           const RawBuffer& buffer) {
  if (!decision.record) return std::nullopt;
  RecordedSegment segment;
  segment.stream_id = stream_id;
  segment.raw_span = db.raw_span;
  segment.path = db.path;
  segment.reason = decision.reason;
  segment.occurrence_index = receipt.prior_terminal_count + 1;
  segment.samples = buffer.extract(db.raw_span);
  if (!segment.samples.empty()) {
    segment.start_t = segment.samples.front().t;
    segment.end_t = segment.samples.back().t;
  }
  return segment;
}

std::size_t SpanUnion::add(Span span) {
  if (span.empty()) return 0;
  std::size_t start = span.start;
  std::size_t end = span.end;
  std::size_t absorbed = 0;

  // First interval that could touch [start, end).
  auto it = intervals_.upper_bound(start);
  if (it != intervals_.begin()) {
    auto prev = std::prev(it);
    if (prev->second >= start) it = prev;
  }
  while (it != intervals_.end() && it->first <= end) {
    start = std::min(start, it->first);
    end = std::max(end, it->second);
    absorbed += it->second - it->first;
    it = intervals_.erase(it);
  }
  intervals_.emplace(start, end);
  const std::size_t added = (end - start) - absorbed;
  covered_ += added;
  return added;
}

void RunStats::merge(const RunStats& other) {
  detected_db_count += other.detected_db_count;
  recorded_db_count += other.recorded_db_count;
  novel_db_count += other.novel_db_count;
  total_sample_count += other.total_sample_count;
  distinct_paths = std::max(distinct_paths, other.distinct_paths);
  for (const auto& [stream, spans] : other.coverage) {
    auto& mine = coverage[stream];
    for (const auto& [start, end] : spans.intervals()) {
      recorded_sample_count += mine.add(Span{start, end});
    }
  }
}

RunStats accumulate_stats(RunStats stats, const std::string& stream_id, const Decision& decision,
                          const DiscoveredBehavior& db) {
  ++stats.detected_db_count;
  if (decision.record) {
    ++stats.recorded_db_count;
    if (decision.reason == DecisionReason::Novel) ++stats.novel_db_count;
    stats.recorded_sample_count += stats.coverage[stream_id].add(db.raw_span);
  }
  return stats;
}

}  // namespace bforest
