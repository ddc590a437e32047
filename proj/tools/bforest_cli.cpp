#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bforest/analysis.hpp"
#include "bforest/commands.hpp"
#include "bforest/config.hpp"
#include "bforest/csv.hpp"
#include "bforest/errors.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kConfig = 2,
  kIo = 3,
  kOverflow = 4,
  kData = 5,
};

constexpr const char* kExitCodes =
    "Exit codes: 0 success, 1 other error, 2 configuration error, 3 I/O error,\n"
    "            4 look-back buffer overflow, 5 malformed input data.";

struct Overrides {
  std::optional<unsigned> threshold;
  std::optional<unsigned> log_base;
  std::optional<double> hysteresis;

  void attach(CLI::App* app) {
    app->add_option("--threshold", threshold, "Relevance threshold (overrides config)");
    app->add_option("--log-base", log_base, "Numerosity-reduction log base (overrides config)");
    app->add_option("--hysteresis", hysteresis, "Hysteresis margin in [0, 0.5) (overrides config)");
  }

  bforest::EngineConfig load(const std::string& path) const {
    auto config = bforest::load_config(path);
    if (threshold) config.relevance_threshold = *threshold;
    if (log_base) config.log_base = *log_base;
    if (hysteresis) config.hysteresis_margin = *hysteresis;
    config.validate();
    return config;
  }
};

std::vector<fs::path> to_paths(const std::vector<std::string>& files) {
  return {files.begin(), files.end()};
}

void print_stats(const bforest::RunStats& s) {
  std::printf("detected %llu, recorded %llu (novel %llu), distinct paths %llu, recorded %.4f%% of %llu samples\n",
              static_cast<unsigned long long>(s.detected_db_count),
              static_cast<unsigned long long>(s.recorded_db_count),
              static_cast<unsigned long long>(s.novel_db_count),
              static_cast<unsigned long long>(s.distinct_paths), 100.0 * s.recording_fraction(),
              static_cast<unsigned long long>(s.total_sample_count));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavior Forest: online discovery and recording of dynamic behaviors in time series"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::string snapshot;
  std::vector<std::string> inputs;
  int runs = 1;
  std::size_t channel = 0;
  Overrides overrides;

  auto* discover = app.add_subcommand("discover", "Stream files through the engine and write recorded segments");
  discover->add_option("--config", config_path, "Config file (JSON)")->required();
  discover->add_option("--out", out, "Output directory")->required();
  discover->add_option("--snapshot", snapshot, "Prior forest snapshot to resume from");
  discover->add_option("inputs", inputs, "Input CSV files, processed in order");
  overrides.attach(discover);

  auto* replay = app.add_subcommand("replay", "Repeat the input set several times with a persistent forest");
  replay->add_option("--config", config_path, "Config file (JSON)")->required();
  replay->add_option("--out", out, "Output directory for replay.csv and forest.json")->required();
  replay->add_option("--runs", runs, "Number of runs")->check(CLI::PositiveNumber);
  replay->add_option("--snapshot", snapshot, "Prior forest snapshot");
  replay->add_option("inputs", inputs, "Input CSV files, processed in order");
  overrides.attach(replay);

  bforest::SyntheticOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Generate the two-channel synthetic four-pattern series");
  gen->add_option("--seed", gen_opts.seed, "Noise seed");
  gen->add_option("--out", out, "Output CSV file")->required();
  gen->add_option("--bursts", gen_opts.bursts_per_type, "Bursts per pattern type");
  gen->add_option("--noise", gen_opts.noise_sigma, "Gaussian noise sigma")->check(CLI::NonNegativeNumber);
  gen->add_option("--burst-length", gen_opts.burst_length, "Samples per burst");
  gen->add_option("--gap-length", gen_opts.gap_length, "Samples per stationary gap");

  std::string discover_dir;
  auto* features = app.add_subcommand("features", "Export nine-feature descriptors per discovered pattern");
  features->add_option("--in", discover_dir, "Output directory of a discover run")->required();
  features->add_option("--out", out, "Output CSV file")->required();
  features->add_option("--channel", channel, "Channel to describe");

  auto* variance = app.add_subcommand("variance", "Compare recorded-behavior variance with sliding windows");
  variance->add_option("--in", discover_dir, "Output directory of a discover run")->required();
  variance->add_option("--out", out, "Output directory")->required();
  variance->add_option("--channel", channel, "Channel to analyse");
  variance->add_option("inputs", inputs, "The full input series (same files given to discover)")->required();

  auto* dot = app.add_subcommand("dot", "Render a forest snapshot as Graphviz DOT");
  dot->add_option("--snapshot", snapshot, "Forest snapshot")->required();
  dot->add_option("--out", out, "Output .dot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (discover->parsed()) {
      const auto config = overrides.load(config_path);
      std::optional<fs::path> prior;
      if (!snapshot.empty()) prior = snapshot;
      const auto result = bforest::cmd_discover(to_paths(inputs), config, out, prior);
      print_stats(result.stats);
    } else if (replay->parsed()) {
      const auto config = overrides.load(config_path);
      bforest::BehaviorForest prior;
      if (!snapshot.empty()) {
        std::ifstream in(snapshot);
        prior = bforest::forest_restore(nlohmann::json::parse(in), bforest::config_hash(config));
      }
      const auto result = bforest::replay(to_paths(inputs), config, runs, std::move(prior));
      fs::create_directories(out);
      bforest::write_replay_table(result.rows, fs::path(out) / "replay.csv");
      std::ofstream(fs::path(out) / "forest.json")
          << bforest::forest_snapshot(result.forest, bforest::config_hash(config)).dump(1) << '\n';
      std::printf("%4s %12s %16s %18s\n", "run", "recorded_db", "recording/run %", "total recording %");
      for (const auto& row : result.rows) {
        std::printf("%4d %12llu %16.2f %18.2f\n", row.run, static_cast<unsigned long long>(row.recorded_db),
                    100.0 * row.recording_per_run, 100.0 * row.total_recording);
      }
    } else if (gen->parsed()) {
      const auto series = bforest::generate_synthetic(gen_opts);
      bforest::write_timeseries(fs::path(out), {"y0", "y1"}, series.frames);
    } else if (features->parsed()) {
      bforest::cmd_features(discover_dir, out, channel);
    } else if (variance->parsed()) {
      bforest::cmd_variance(discover_dir, to_paths(inputs), out, channel);
    } else if (dot->parsed()) {
      bforest::cmd_dot(snapshot, out);
    }
  } catch (const bforest::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const bforest::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const bforest::OverflowError& e) {
    std::cerr << "buffer overflow: " << e.what() << '\n';
    return kOverflow;
  } catch (const bforest::FrameError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOk;
}
