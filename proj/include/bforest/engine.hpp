#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bforest/detector.hpp"
#include "bforest/forest.hpp"
#include "bforest/preprocess.hpp"
#include "bforest/selection.hpp"

namespace bforest {

// Everything the engine learned from one discovered behavior.
struct BehaviorEvent {
  DiscoveredBehavior behavior;
  InsertionReceipt receipt;
  Decision decision;
  std::optional<RecordedSegment> segment;
};

using EventSink = std::function<void(const BehaviorEvent&)>;

// Pipeline, detector and look-back buffer for one stream, feeding a shared
// forest. Streams sharing a forest must not run concurrently.
class StreamProcessor {
 public:
  StreamProcessor(std::string stream_id, const StreamHandle& handle, BehaviorForest& forest,
                  RelevancePolicy policy, RunStats& stats, EventSink sink = {});

  void push(const SampleFrame& frame);
  // Closes the final run and any open behavior.
  void finish();

  const Detector& detector() const { return detector_; }
  const RawBuffer& buffer() const { return buffer_; }

 private:
  void handle_symbols();
  void handle_behavior(DiscoveredBehavior db);

  std::string stream_id_;
  Pipeline pipeline_;
  Detector detector_;
  RawBuffer buffer_;
  BehaviorForest& forest_;
  RelevancePolicy policy_;
  RunStats& stats_;
  EventSink sink_;
  std::size_t long_run_limit_;
  std::vector<ReducedSymbol> symbols_;
  bool finished_ = false;
};

// Raw length above which a run yields at least termination_run copies.
std::size_t long_run_limit(const EngineConfig& config);

// Convenience: run one in-memory stream through a fresh processor.
RunStats process_stream(const std::string& stream_id, const std::vector<SampleFrame>& frames,
                        const EngineConfig& config, BehaviorForest& forest, EventSink sink = {});

}  // namespace bforest
