#include "bforest/commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "bforest/analysis.hpp"
#include "bforest/config.hpp"
#include "bforest/csv.hpp"
#include "bforest/engine.hpp"
#include "bforest/errors.hpp"

namespace bforest {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::string segment_file_name(std::size_t id) {
  char name[32];
  std::snprintf(name, sizeof name, "seg_%06zu.csv", id);
  return name;
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    nlohmann::json doc;
    in >> doc;
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

struct ManifestRow {
  std::string segment_id;
  std::string path;
};

std::vector<ManifestRow> read_manifest(const fs::path& dir) {
  std::ifstream in(dir / "segments.csv");
  if (!in) throw IoError("cannot open " + (dir / "segments.csv").string());
  std::vector<ManifestRow> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 9) throw IoError("segments.csv: malformed row '" + line + "'");
    rows.push_back({cells[0], cells[6]});
  }
  return rows;
}

std::vector<double> read_segment_channel(const fs::path& dir, const std::string& segment_id,
                                         std::size_t channel) {
  const auto table = read_timeseries(dir / "segments" / (segment_id + ".csv"));
  if (channel >= table.dims()) throw ConfigError("channel index out of range");
  return table.channel(channel);
}

}  // namespace

DiscoverResult discover(const std::vector<fs::path>& inputs, const EngineConfig& config,
                        BehaviorForest prior) {
  config.validate();
  DiscoverResult result;
  result.forest = std::move(prior);
  const RelevancePolicy policy{config.relevance_threshold, true};
  std::set<std::string> used_ids;

  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto table = read_timeseries(inputs[i]);
    if (result.channel_names.empty()) {
      result.channel_names = table.channel_names;
    } else if (table.dims() != result.channel_names.size()) {
      throw ConfigError("dimension mismatch: " + inputs[i].string() + " has " +
                        std::to_string(table.dims()) + " channels, expected " +
                        std::to_string(result.channel_names.size()));
    }
    std::string stream_id = inputs[i].stem().string();
    if (!used_ids.insert(stream_id).second) {
      stream_id += "#" + std::to_string(i);
      used_ids.insert(stream_id);
    }

    const auto handle = validate_stream_header(table.dims(), config);
    RunStats stream_stats;
    StreamProcessor processor(stream_id, handle, result.forest, policy, stream_stats,
                              [&](const BehaviorEvent& event) {
                                if (event.segment) result.segments.push_back(*event.segment);
                              });
    for (const auto& frame : table.frames) processor.push(frame);
    processor.finish();
    result.stats.merge(stream_stats);
  }
  result.stats.distinct_paths = result.forest.distinct_paths();
  return result;
}

void write_discover_outputs(const DiscoverResult& result, const EngineConfig& config,
                            const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir / "segments", ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  auto manifest = open_out(out_dir / "segments.csv");
  manifest << "segment_id,stream_id,start_index,end_index,start_t,end_t,path,reason,occurrence_index\n";
  std::vector<std::string> names = result.channel_names;
  for (std::size_t i = 0; i < result.segments.size(); ++i) {
    const auto& seg = result.segments[i];
    const std::string id = segment_file_name(i + 1);
    const std::string stem = id.substr(0, id.size() - 4);
    manifest << stem << ',' << seg.stream_id << ',' << seg.raw_span.start << ',' << seg.raw_span.end
             << ',' << format_number(seg.start_t) << ',' << format_number(seg.end_t) << ','
             << path_to_string(seg.path) << ',' << to_string(seg.reason) << ','
             << seg.occurrence_index << '\n';
    if (names.empty() && !seg.samples.empty()) {
      for (std::size_t k = 0; k < seg.samples.front().y.size(); ++k) names.push_back("y" + std::to_string(k));
    }
    write_timeseries(out_dir / "segments" / id, names, seg.samples);
  }

  auto stats = open_out(out_dir / "stats.csv");
  const auto& s = result.stats;
  stats << "detected_db,recorded_db,novel_db,distinct_paths,recorded_samples,total_samples,recording_fraction\n";
  stats << s.detected_db_count << ',' << s.recorded_db_count << ',' << s.novel_db_count << ','
        << s.distinct_paths << ',' << s.recorded_sample_count << ',' << s.total_sample_count << ','
        << format_number(s.recording_fraction()) << '\n';

  open_out(out_dir / "forest.json") << forest_snapshot(result.forest, config_hash(config)).dump(1) << '\n';
  open_out(out_dir / "forest.dot") << forest_to_dot(result.forest);
}

DiscoverResult cmd_discover(const std::vector<fs::path>& inputs, const EngineConfig& config,
                            const fs::path& out_dir, const std::optional<fs::path>& snapshot) {
  BehaviorForest prior;
  if (snapshot) prior = forest_restore(read_json(*snapshot), config_hash(config));
  auto result = discover(inputs, config, std::move(prior));
  write_discover_outputs(result, config, out_dir);
  return result;
}

ReplayResult replay(const std::vector<fs::path>& inputs, const EngineConfig& config, int runs,
                    BehaviorForest prior) {
  if (runs < 1) throw ConfigError("runs must be >= 1");
  ReplayResult result;
  result.forest = std::move(prior);
  CumulativeStats cumulative;
  for (int r = 1; r <= runs; ++r) {
    auto run = discover(inputs, config, std::move(result.forest));
    result.forest = std::move(run.forest);
    cumulative.add(run.stats);
    result.rows.push_back({r, run.stats.recorded_db_count, run.stats.detected_db_count,
                           run.stats.distinct_paths, run.stats.recording_fraction(), cumulative.fraction()});
  }
  return result;
}

void write_replay_table(const std::vector<ReplayRow>& rows, const fs::path& path) {
  auto out = open_out(path);
  out << "run,recorded_db,recording_per_run_pct,total_recording_pct,detected_db,distinct_paths\n";
  for (const auto& row : rows) {
    out << row.run << ',' << row.recorded_db << ',' << format_number(100.0 * row.recording_per_run) << ','
        << format_number(100.0 * row.total_recording) << ',' << row.detected_db << ','
        << row.distinct_paths << '\n';
  }
}

void cmd_features(const fs::path& discover_dir, const fs::path& out_file, std::size_t channel) {
  const auto rows = read_manifest(discover_dir);
  const auto forest = forest_restore(read_json(discover_dir / "forest.json"));

  auto out = open_out(out_file);
  out << "path_id,path,occurrence_count,mean,variance,skew,kurtosis,min,max,median,p25,p75\n";
  std::set<std::string> seen;
  for (const auto& row : rows) {
    if (!seen.insert(row.path).second) continue;
    const auto path = path_from_string(row.path);
    const auto node = forest.find(path);
    if (!node) throw IoError("path " + row.path + " missing from forest.json");
    const auto f = extract_features(read_segment_channel(discover_dir, row.segment_id, channel));
    out << *node << ',' << row.path << ',' << forest.node(*node).terminal_count;
    for (double v : {f.mean, f.variance, f.skew, f.kurtosis, f.min, f.max, f.median, f.p25, f.p75}) {
      out << ',' << format_number(v);
    }
    out << '\n';
  }
}

void cmd_variance(const fs::path& discover_dir, const std::vector<fs::path>& inputs, const fs::path& out_dir,
                  std::size_t channel) {
  std::vector<std::vector<double>> segments;
  for (const auto& row : read_manifest(discover_dir)) {
    segments.push_back(read_segment_channel(discover_dir, row.segment_id, channel));
  }
  std::vector<std::vector<double>> series;
  for (const auto& input : inputs) {
    const auto table = read_timeseries(input);
    if (channel >= table.dims()) throw ConfigError("channel index out of range");
    series.push_back(table.channel(channel));
  }
  if (segments.empty()) throw ConfigError("no recorded behaviors in " + discover_dir.string());
  const auto cmp = compare_variances(segments, series);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  auto longf = open_out(out_dir / "variance_long.csv");
  longf << "group,variance\n";
  for (double v : cmp.db_variances) longf << "db," << format_number(v) << '\n';
  for (double v : cmp.window_variances) longf << "window," << format_number(v) << '\n';

  auto summary = open_out(out_dir / "variance_summary.csv");
  summary << "group,count,window_length,lower_whisker,p25,median,p75,upper_whisker\n";
  const auto row = [&](const char* group, std::size_t n, const FiveNumberSummary& s) {
    summary << group << ',' << n << ',' << cmp.window_length << ',' << format_number(s.lower_whisker) << ','
            << format_number(s.p25) << ',' << format_number(s.median) << ',' << format_number(s.p75) << ','
            << format_number(s.upper_whisker) << '\n';
  };
  row("db", cmp.db_variances.size(), cmp.db_summary);
  row("window", cmp.window_variances.size(), cmp.window_summary);
}

void cmd_dot(const fs::path& snapshot, const fs::path& out_file) {
  const auto forest = forest_restore(read_json(snapshot));
  open_out(out_file) << forest_to_dot(forest);
}

}  // namespace bforest
