#include <gtest/gtest.h>

#include <random>

#include "bforest/detector.hpp"
#include "test_util.hpp"

namespace bforest {
namespace {

// Each symbol its own one-sample run unless repeated, in which case repeats
// share the run span (as numerosity reduction produces them).
std::vector<ReducedSymbol> as_reduced(const std::vector<Symbol>& symbols) {
  std::vector<ReducedSymbol> out;
  std::size_t next = 0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i > 0 && symbols[i] == symbols[i - 1]) {
      out.push_back(out.back());
      continue;
    }
    std::size_t j = i;
    while (j < symbols.size() && symbols[j] == symbols[i]) ++j;
    const std::size_t len = 10 * (j - i);  // arbitrary raw length
    out.push_back({symbols[i], Span{next, next + len}, len});
    next += len;
  }
  return out;
}

std::vector<DiscoveredBehavior> run_detector(const std::vector<ReducedSymbol>& input, unsigned init = 2,
                                             unsigned term = 3) {
  Detector detector(init, term);
  std::vector<DiscoveredBehavior> out;
  for (const auto& sym : input) {
    if (auto db = detector.step(sym)) out.push_back(*db);
  }
  if (auto db = detector.flush()) out.push_back(*db);
  return out;
}

TEST(Detector, WorkedExampleSequence) {
  const auto input = as_reduced(testing::example_symbols());
  const auto dbs = run_detector(input);
  ASSERT_EQ(dbs.size(), 2u);
  EXPECT_EQ(dbs[0].path, (std::vector<Symbol>{1, 2, 3, 2, 1}));
  EXPECT_EQ(dbs[0].termination, Termination::PlateauReached);
  EXPECT_EQ(dbs[1].path, (std::vector<Symbol>{1, 2, 3, 4}));
  EXPECT_EQ(dbs[1].termination, Termination::EndOfStream);

  // First DB: last sample of the leading 1-run through first sample of the 1-run.
  EXPECT_EQ(dbs[0].raw_span.start, input[2].raw_span.end - 1);
  EXPECT_EQ(dbs[0].raw_span.end, input[6].raw_span.start + 1);
  // Second DB: last sample of the long 1-run to the end of the stream.
  EXPECT_EQ(dbs[1].raw_span.start, input[10].raw_span.end - 1);
  EXPECT_EQ(dbs[1].raw_span.end, input[13].raw_span.end);
}

TEST(Detector, ConstantSequence) {
  EXPECT_TRUE(run_detector(as_reduced({5, 5, 5, 5})).empty());
}

TEST(Detector, SingleStepBehavior) {
  Detector detector;
  const auto input = as_reduced({5, 5, 7, 7, 7});
  for (std::size_t i = 0; i + 1 < input.size(); ++i) EXPECT_FALSE(detector.step(input[i]));
  EXPECT_EQ(detector.phase(), Detector::Phase::InBehavior);
  const auto db = detector.step(input.back());
  ASSERT_TRUE(db);
  EXPECT_EQ(db->path, (std::vector<Symbol>{5, 7}));
  EXPECT_EQ(db->termination, Termination::PlateauReached);
  EXPECT_EQ(detector.phase(), Detector::Phase::Stationary);
  EXPECT_FALSE(detector.flush());
}

TEST(Detector, NeedsTwoSymbolContextAtStart) {
  // A single leading symbol is not enough stationary context.
  EXPECT_TRUE(run_detector(as_reduced({5, 7, 7, 7})).empty());
  EXPECT_EQ(run_detector(as_reduced({5, 7, 7, 8, 8, 8})).size(), 1u);
}

TEST(Detector, RunOfTwoStaysInsidePath) {
  const auto dbs = run_detector(as_reduced({1, 1, 2, 2, 3, 1, 1, 1}));
  ASSERT_EQ(dbs.size(), 1u);
  EXPECT_EQ(dbs[0].path, (std::vector<Symbol>{1, 2, 2, 3, 1}));
}

TEST(Detector, FlushInStationaryPhaseEmitsNothing) {
  Detector detector;
  for (const auto& s : as_reduced({1, 1, 1})) detector.step(s);
  EXPECT_FALSE(detector.flush());
}

TEST(Detector, OpenPathIsEmittedAtFlush) {
  Detector detector;
  for (const auto& s : as_reduced({1, 1, 2, 3, 4})) detector.step(s);
  const auto db = detector.flush();
  ASSERT_TRUE(db);
  EXPECT_EQ(db->path, (std::vector<Symbol>{1, 2, 3, 4}));
  EXPECT_EQ(db->termination, Termination::EndOfStream);
}

// Reference implementation over run-length groups rather than a state machine.
struct RefBehavior {
  std::vector<Symbol> path;
  Span span;
  bool end_of_stream;
};

std::vector<RefBehavior> reference_detect(const std::vector<ReducedSymbol>& seq, unsigned init, unsigned term) {
  struct Run {
    Symbol symbol;
    unsigned count;
    Span span;
  };
  std::vector<Run> runs;
  for (const auto& s : seq) {
    if (!runs.empty() && runs.back().symbol == s.symbol) {
      ++runs.back().count;
      runs.back().span = s.raw_span;
    } else {
      runs.push_back({s.symbol, 1, s.raw_span});
    }
  }
  std::vector<RefBehavior> out;
  std::size_t pos = 0;
  while (pos + 1 < runs.size()) {
    if (runs[pos].count < init) {
      ++pos;
      continue;
    }
    RefBehavior db{{runs[pos].symbol}, {runs[pos].span.end - 1, 0}, false};
    std::size_t j = pos + 1;
    bool closed = false;
    for (; j < runs.size(); ++j) {
      if (runs[j].count >= term) {
        db.path.push_back(runs[j].symbol);
        db.span.end = runs[j].span.start + 1;
        closed = true;
        break;
      }
      db.path.insert(db.path.end(), runs[j].count, runs[j].symbol);
      db.span.end = runs[j].span.end;
    }
    db.end_of_stream = !closed;
    out.push_back(db);
    if (!closed) break;
    pos = j;
  }
  return out;
}

TEST(Detector, MatchesRunGroupReference) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> symbol(0, 4);
  std::uniform_int_distribution<int> copies(1, 5);
  for (int trial = 0; trial < 2000; ++trial) {
    const unsigned init = 1 + trial % 3;
    const unsigned term = 2 + trial % 3;
    std::vector<ReducedSymbol> seq;
    std::size_t next = 0;
    int prev = -1;
    const int runs = 1 + trial % 40;
    for (int r = 0; r < runs; ++r) {
      int s = symbol(rng);
      while (s == prev) s = symbol(rng);
      prev = s;
      const int k = copies(rng);
      const std::size_t len = 1 + static_cast<std::size_t>(rng() % 200);
      for (int c = 0; c < k; ++c) seq.push_back({static_cast<Symbol>(s), Span{next, next + len}, len});
      next += len;
    }
    const auto got = run_detector(seq, init, term);
    const auto want = reference_detect(seq, init, term);
    ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].path, want[i].path) << "trial " << trial;
      EXPECT_EQ(got[i].raw_span, want[i].span) << "trial " << trial;
      EXPECT_EQ(got[i].termination == Termination::EndOfStream, want[i].end_of_stream);
      ASSERT_GE(got[i].path.size(), 2u);
      EXPECT_NE(got[i].path[0], got[i].path[1]);
      EXPECT_LE(got[i].raw_span.end, next);
      EXPECT_LT(got[i].raw_span.start, got[i].raw_span.end);
      if (i > 0) EXPECT_LE(got[i - 1].raw_span.end, got[i].raw_span.start + 1);
    }
  }
}

}  // namespace
}  // namespace bforest
