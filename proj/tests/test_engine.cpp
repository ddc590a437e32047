#include <gtest/gtest.h>

#include "bforest/engine.hpp"
#include "bforest/errors.hpp"
#include "test_util.hpp"

namespace bforest {
namespace {

using testing::example_runs;
using testing::frames_for_runs;
using testing::integer_symbol_config;

struct Collected {
  std::vector<BehaviorEvent> events;
  EventSink sink() {
    return [this](const BehaviorEvent& e) { events.push_back(e); };
  }
};

TEST(Engine, WorkedExampleRawFixture) {
  const auto config = integer_symbol_config(5);
  const auto frames = frames_for_runs(example_runs());
  BehaviorForest forest;
  Collected c;
  const auto stats = process_stream("example", frames, config, forest, c.sink());

  ASSERT_EQ(c.events.size(), 2u);
  EXPECT_EQ(c.events[0].behavior.path, (std::vector<Symbol>{1, 2, 3, 2, 1}));
  EXPECT_EQ(c.events[1].behavior.path, (std::vector<Symbol>{1, 2, 3, 4}));
  EXPECT_EQ(forest.node_count(), 6u);
  EXPECT_EQ(stats.detected_db_count, 2u);
  EXPECT_EQ(stats.recorded_db_count, 2u);
  EXPECT_EQ(stats.novel_db_count, 2u);
  EXPECT_EQ(stats.total_sample_count, frames.size());

  // First behavior: last sample of the 500-sample root run through the first
  // sample of the 50000-sample run.
  const auto& first = *c.events[0].segment;
  EXPECT_EQ(first.raw_span, (Span{499, 516}));
  // Second behavior: last sample of the long run through the end of the stream.
  const auto& second = *c.events[1].segment;
  EXPECT_EQ(second.raw_span, (Span{50514, frames.size()}));
  EXPECT_EQ(second.samples.size(), 16u);
  for (std::size_t i = 0; i < second.samples.size(); ++i) {
    EXPECT_EQ(second.samples[i].t, frames[second.raw_span.start + i].t);
  }
  EXPECT_EQ(stats.recorded_sample_count, 17u + 16u);
}

TEST(Engine, LongPlateauDoesNotNeedLargeBuffer) {
  auto config = integer_symbol_config(5);
  config.buffer_capacity = 200;
  // 50000-sample plateaus on both sides of the behavior.
  const auto frames = frames_for_runs({{1, 5}, {2, 1}, {3, 1}, {4, 5}, {2, 1}, {1, 5}});
  BehaviorForest forest;
  Collected c;
  EXPECT_NO_THROW(process_stream("long", frames, config, forest, c.sink()));
  ASSERT_EQ(c.events.size(), 2u);
  for (const auto& e : c.events) {
    ASSERT_TRUE(e.segment);
    EXPECT_EQ(e.segment->samples.size(), e.segment->raw_span.size());
  }
}

TEST(Engine, BehaviorLongerThanBufferOverflows) {
  auto config = integer_symbol_config(5);
  config.buffer_capacity = 8;
  BehaviorForest forest;
  EXPECT_THROW(process_stream("x", frames_for_runs(example_runs()), config, forest), OverflowError);
}

TEST(Engine, EmptyStream) {
  BehaviorForest forest;
  const auto stats = process_stream("e", {}, integer_symbol_config(5), forest);
  EXPECT_EQ(stats.detected_db_count, 0u);
  EXPECT_EQ(stats.recording_fraction(), 0.0);
  EXPECT_TRUE(forest.empty());
}

TEST(Engine, RepeatedStreamSaturates) {
  auto config = integer_symbol_config(5);
  config.relevance_threshold = 2;
  const auto frames = frames_for_runs(example_runs());
  BehaviorForest forest;
  std::vector<std::uint64_t> recorded;
  for (int run = 0; run < 4; ++run) {
    recorded.push_back(process_stream("example", frames, config, forest).recorded_db_count);
  }
  EXPECT_EQ(recorded, (std::vector<std::uint64_t>{2, 2, 0, 0}));
  EXPECT_EQ(forest.total_insertions(), 8u);
}

TEST(Engine, LongRunLimit) {
  auto config = integer_symbol_config(3);
  EXPECT_EQ(long_run_limit(config), 100u);
  config.termination_run = 4;
  config.log_base = 2;
  EXPECT_EQ(long_run_limit(config), 8u);
}

TEST(Engine, StreamHeaderMismatch) {
  BehaviorForest forest;
  std::vector<SampleFrame> frames{{0.0, {1.0, 2.0}}};
  EXPECT_THROW(process_stream("x", frames, integer_symbol_config(5), forest), ConfigError);
}

}  // namespace
}  // namespace bforest
