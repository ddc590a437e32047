#include "bforest/engine.hpp"

#include <limits>

namespace bforest {

std::size_t long_run_limit(const EngineConfig& config) {
  std::size_t limit = 1;
  for (unsigned i = 1; i < config.termination_run; ++i) {
    if (limit > std::numeric_limits<std::size_t>::max() / config.log_base) {
      return std::numeric_limits<std::size_t>::max() - 2;
    }
    limit *= config.log_base;
  }
  return limit;
}

StreamProcessor::StreamProcessor(std::string stream_id, const StreamHandle& handle,
                                 BehaviorForest& forest, RelevancePolicy policy, RunStats& stats,
                                 EventSink sink)
    : stream_id_(std::move(stream_id)),
      pipeline_(handle),
      detector_(handle.config().initiation_run, handle.config().termination_run),
      buffer_(handle.config().buffer_capacity),
      forest_(forest),
      policy_(policy),
      stats_(stats),
      sink_(std::move(sink)),
      long_run_limit_(long_run_limit(handle.config())) {}

void StreamProcessor::push(const SampleFrame& frame) {
  const std::size_t index = pipeline_.samples_seen();
  pipeline_.step(frame, symbols_);

  // A run longer than the limit can only be a root or a terminator, so only
  // its head and its latest sample are ever part of a recorded span.
  if (pipeline_.pending()->length > long_run_limit_ + 1) {
    buffer_.replace_last(index, frame);
  } else {
    buffer_.push(index, frame);
  }
  stats_.add_samples(1);

  handle_symbols();
  buffer_.release_before(detector_.retain_from());
}

void StreamProcessor::finish() {
  if (finished_) return;
  finished_ = true;
  pipeline_.flush(symbols_);
  handle_symbols();
  if (auto db = detector_.flush()) handle_behavior(std::move(*db));
  stats_.distinct_paths = forest_.distinct_paths();
}

void StreamProcessor::handle_symbols() {
  for (const auto& sym : symbols_) {
    if (auto db = detector_.step(sym)) handle_behavior(std::move(*db));
  }
  symbols_.clear();
}

void StreamProcessor::handle_behavior(DiscoveredBehavior db) {
  BehaviorEvent event;
  event.receipt = forest_.insert(db.path);
  event.decision = decide(event.receipt, policy_);
  event.segment = materialize(stream_id_, db, event.decision, event.receipt, buffer_);
  stats_ = accumulate_stats(std::move(stats_), stream_id_, event.decision, db);
  event.behavior = std::move(db);
  if (sink_) sink_(event);
}

RunStats process_stream(const std::string& stream_id, const std::vector<SampleFrame>& frames,
                        const EngineConfig& config, BehaviorForest& forest, EventSink sink) {
  RunStats stats;
  if (frames.empty()) {
    stats.distinct_paths = forest.distinct_paths();
    return stats;
  }
  const auto handle = validate_stream_header(frames.front().y.size(), config);
  StreamProcessor processor(stream_id, handle, forest, RelevancePolicy{config.relevance_threshold, true},
                            stats, std::move(sink));
  for (const auto& frame : frames) processor.push(frame);
  processor.finish();
  return stats;
}

}  // namespace bforest
