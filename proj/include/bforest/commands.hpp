#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bforest/forest.hpp"
#include "bforest/selection.hpp"
#include "bforest/types.hpp"

namespace bforest {

struct DiscoverResult {
  std::vector<std::string> channel_names;
  RunStats stats;
  BehaviorForest forest;
  std::vector<RecordedSegment> segments;
};

// Streams every file (in order) through a forest seeded from `prior`.
DiscoverResult discover(const std::vector<std::filesystem::path>& inputs, const EngineConfig& config,
                        BehaviorForest prior = {});

// Writes segments.csv, segments/<id>.csv, stats.csv, forest.json and forest.dot.
void write_discover_outputs(const DiscoverResult& result, const EngineConfig& config,
                            const std::filesystem::path& out_dir);

// discover + write, optionally resuming from a snapshot file.
DiscoverResult cmd_discover(const std::vector<std::filesystem::path>& inputs, const EngineConfig& config,
                            const std::filesystem::path& out_dir,
                            const std::optional<std::filesystem::path>& snapshot);

struct ReplayRow {
  int run = 0;
  std::uint64_t recorded_db = 0;
  std::uint64_t detected_db = 0;
  std::uint64_t distinct_paths = 0;
  double recording_per_run = 0.0;
  double total_recording = 0.0;
};

struct ReplayResult {
  std::vector<ReplayRow> rows;
  BehaviorForest forest;
};

ReplayResult replay(const std::vector<std::filesystem::path>& inputs, const EngineConfig& config,
                    int runs, BehaviorForest prior = {});

void write_replay_table(const std::vector<ReplayRow>& rows, const std::filesystem::path& path);

// Reads a discover output directory and writes one feature row per pattern.
void cmd_features(const std::filesystem::path& discover_dir, const std::filesystem::path& out_file,
                  std::size_t channel);

// Writes variance_long.csv and variance_summary.csv.
void cmd_variance(const std::filesystem::path& discover_dir,
                  const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out_dir,
                  std::size_t channel);

void cmd_dot(const std::filesystem::path& snapshot, const std::filesystem::path& out_file);

}  // namespace bforest
