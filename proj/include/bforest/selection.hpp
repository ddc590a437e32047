#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bforest/detector.hpp"
#include "bforest/forest.hpp"
#include "bforest/types.hpp"

namespace bforest {

struct RelevancePolicy {
  unsigned threshold = 5;
  bool always_record_novel = true;
};

enum class DecisionReason { Novel, UnderThreshold, Discarded };

const char* to_string(DecisionReason reason);

struct Decision {
  bool record = false;
  DecisionReason reason = DecisionReason::Discarded;
};

// Novel if the insertion created a node, otherwise recorded while the count
// before this insertion is below the threshold.
Decision decide(const InsertionReceipt& receipt, const RelevancePolicy& policy);

// Bounded look-back store of raw frames keyed by stream index. Entries may be
// sparse: long stationary runs only keep their head and latest sample.
class RawBuffer {
 public:
  explicit RawBuffer(std::size_t capacity);

  void push(std::size_t index, SampleFrame frame);
  // Overwrite the most recent entry (used to collapse long constant runs).
  void replace_last(std::size_t index, SampleFrame frame);
  void release_before(std::size_t index);

  // Frames for every index in span; throws OverflowError if any was evicted.
  std::vector<SampleFrame> extract(Span span) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::deque<std::pair<std::size_t, SampleFrame>> entries_;
};

struct RecordedSegment {
  std::string stream_id;
  Span raw_span;
  double start_t = 0.0;
  double end_t = 0.0;
  std::vector<Symbol> path;
  DecisionReason reason = DecisionReason::Novel;
  // 1-based occurrence number of the path at recording time.
  std::uint64_t occurrence_index = 1;
  std::vector<SampleFrame> samples;
};

std::optional<RecordedSegment> materialize(const std::string& stream_id,
                                           const DiscoveredBehavior& db,
                                           const Decision& decision,
                                           const InsertionReceipt& receipt,
                                           const RawBuffer& buffer);

// Union of half-open intervals; add() returns how many indices were new.
class SpanUnion {
 public:
  std::size_t add(Span span);
  std::size_t covered() const { return covered_; }
  const std::map<std::size_t, std::size_t>& intervals() const { return intervals_; }

 private:
  std::map<std::size_t, std::size_t> intervals_;
  std::size_t covered_ = 0;
};

struct RunStats {
  std::uint64_t detected_db_count = 0;
  std::uint64_t recorded_db_count = 0;
  std::uint64_t novel_db_count = 0;
  std::uint64_t recorded_sample_count = 0;
  std::uint64_t total_sample_count = 0;
  // Distinct terminal paths in the forest at the end of the run.
  std::uint64_t distinct_paths = 0;
  std::map<std::string, SpanUnion> coverage;

  double recording_fraction() const {
    return total_sample_count == 0
               ? 0.0
               : static_cast<double>(recorded_sample_count) / static_cast<double>(total_sample_count);
  }

  void add_samples(std::uint64_t n) { total_sample_count += n; }
  // Combine stats of independent streams.
  void merge(const RunStats& other);
};

// Overlapping recorded spans of one stream are only counted once.
RunStats accumulate_stats(RunStats stats, const std::string& stream_id, const Decision& decision,
                          const DiscoveredBehavior& db);

// Totals across replay runs.
struct CumulativeStats {
  std::uint64_t recorded_sample_count = 0;
  std::uint64_t total_sample_count = 0;

  void add(const RunStats& run) {
    recorded_sample_count += run.recorded_sample_count;
    total_sample_count += run.total_sample_count;
  }
  double fraction() const {
    return total_sample_count == 0
               ? 0.0
               : static_cast<double>(recorded_sample_count) / static_cast<double>(total_sample_count);
  }
};

}  // namespace bforest
