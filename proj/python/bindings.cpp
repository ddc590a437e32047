#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bforest/analysis.hpp"
#include "bforest/commands.hpp"
#include "bforest/config.hpp"
#include "bforest/detector.hpp"
#include "bforest/engine.hpp"
#include "bforest/errors.hpp"
#include "bforest/forest.hpp"
#include "bforest/preprocess.hpp"

namespace py = pybind11;
using namespace bforest;

namespace {

std::vector<SampleFrame> to_frames(const std::vector<double>& t, const std::vector<std::vector<double>>& y) {
  if (t.size() != y.size()) throw std::invalid_argument("t and y must have the same length");
  std::vector<SampleFrame> frames;
  frames.reserve(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) frames.push_back({t[i], y[i]});
  return frames;
}

py::dict stats_dict(const RunStats& s) {
  py::dict d;
  d["detected_db"] = s.detected_db_count;
  d["recorded_db"] = s.recorded_db_count;
  d["novel_db"] = s.novel_db_count;
  d["distinct_paths"] = s.distinct_paths;
  d["recorded_samples"] = s.recorded_sample_count;
  d["total_samples"] = s.total_sample_count;
  d["recording_fraction"] = s.recording_fraction();
  return d;
}

py::dict segment_dict(const RecordedSegment& seg) {
  py::dict d;
  d["stream_id"] = seg.stream_id;
  d["start_index"] = seg.raw_span.start;
  d["end_index"] = seg.raw_span.end;
  d["start_t"] = seg.start_t;
  d["end_t"] = seg.end_t;
  d["path"] = seg.path;
  d["reason"] = std::string(to_string(seg.reason));
  d["occurrence_index"] = seg.occurrence_index;
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  for (const auto& f : seg.samples) {
    t.push_back(f.t);
    y.push_back(f.y);
  }
  d["t"] = t;
  d["y"] = y;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Behavior forest discovery over multivariate time series";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<FrameError>(m, "FrameError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<OverflowError>(m, "BufferOverflowError", base.ptr());

  py::class_<EngineConfig>(m, "Config")
      .def_static(
          "from_json", [](const std::string& text) { return config_from_json(nlohmann::json::parse(text)); },
          py::arg("text"))
      .def_static("load", &load_config, py::arg("path"))
      .def("to_json", [](const EngineConfig& c) { return config_to_json(c).dump(); })
      .def("hash", &config_hash)
      .def_property_readonly("breakpoints", [](const EngineConfig& c) { return c.breakpoints.channels(); })
      .def_property_readonly("dims", [](const EngineConfig& c) { return c.breakpoints.dims(); })
      .def_readwrite("log_base", &EngineConfig::log_base)
      .def_readwrite("relevance_threshold", &EngineConfig::relevance_threshold)
      .def_readwrite("hysteresis_margin", &EngineConfig::hysteresis_margin)
      .def_readwrite("initiation_run", &EngineConfig::initiation_run)
      .def_readwrite("termination_run", &EngineConfig::termination_run)
      .def_readwrite("buffer_capacity", &EngineConfig::buffer_capacity)
      .def("validate", &EngineConfig::validate);

  m.def("gaussian_breakpoints", &gaussian_breakpoints, py::arg("alpha"));
  m.def(
      "discretize", [](double v, const std::vector<double>& bps) { return discretize(v, bps); }, py::arg("value"),
      py::arg("breakpoints"));
  m.def(
      "unify",
      [](const std::vector<Symbol>& s, const std::vector<std::size_t>& a) { return unify(s, a); },
      py::arg("symbols"), py::arg("alphabets"));
  m.def(
      "split_unified", [](Symbol u, const std::vector<std::size_t>& a) { return split_unified(u, a); },
      py::arg("unified"), py::arg("alphabets"));
  m.def("reduced_length", &reduced_length, py::arg("run_length"), py::arg("base"));

  py::class_<Detector>(m, "Detector")
      .def(py::init<unsigned, unsigned>(), py::arg("initiation_run") = 2, py::arg("termination_run") = 3)
      .def(
          "feed",
          [](Detector& d, const std::vector<Symbol>& symbols, bool flush) {
            std::vector<std::vector<Symbol>> paths;
            for (std::size_t i = 0; i < symbols.size(); ++i) {
              if (auto db = d.step({symbols[i], Span{i, i + 1}, 1})) paths.push_back(db->path);
            }
            if (flush) {
              if (auto db = d.flush()) paths.push_back(db->path);
            }
            return paths;
          },
          py::arg("symbols"), py::arg("flush") = true,
          "Feed reduced symbols and return the paths of completed behaviors.");

  py::class_<BehaviorForest>(m, "Forest")
      .def(py::init<>())
      .def(
          "insert",
          [](BehaviorForest& f, const std::vector<Symbol>& path) {
            const auto r = f.insert(path);
            return py::make_tuple(r.created_new_node, r.prior_terminal_count, r.path_id);
          },
          py::arg("path"), "Returns (created_new_node, prior_terminal_count, path_id).")
      .def_property_readonly("distinct_paths", &BehaviorForest::distinct_paths)
      .def_property_readonly("node_count", &BehaviorForest::node_count)
      .def_property_readonly("total_insertions", &BehaviorForest::total_insertions)
      .def("terminal_paths",
           [](const BehaviorForest& f) {
             std::vector<std::pair<std::vector<Symbol>, std::uint64_t>> out;
             for (const auto& tp : f.terminal_paths()) out.emplace_back(tp.path, tp.terminal_count);
             return out;
           })
      .def(
          "edge_weight",
          [](const BehaviorForest& f, const std::vector<Symbol>& path) -> std::optional<std::uint64_t> {
            const auto id = f.find(path);
            if (!id) return std::nullopt;
            return f.node(*id).edge_weight_in;
          },
          py::arg("path"))
      .def("to_dot", &forest_to_dot)
      .def(
          "snapshot", [](const BehaviorForest& f, const std::string& hash) { return forest_snapshot(f, hash).dump(); },
          py::arg("config_hash") = "")
      .def_static(
          "restore",
          [](const std::string& text, std::optional<std::string> expected_hash) {
            nlohmann::json doc;
            try {
              doc = nlohmann::json::parse(text);
            } catch (const nlohmann::json::exception& e) {
              throw IoError(e.what());
            }
            return forest_restore(doc, expected_hash);
          },
          py::arg("text"), py::arg("expected_hash") = std::nullopt)
      .def("__eq__", [](const BehaviorForest& a, const BehaviorForest& b) { return a == b; });

  m.def(
      "process_stream",
      [](const std::vector<double>& t, const std::vector<std::vector<double>>& y, const EngineConfig& config,
         BehaviorForest& forest, const std::string& stream_id) {
        py::list segments;
        const auto stats = process_stream(stream_id, to_frames(t, y), config, forest, [&](const BehaviorEvent& e) {
          if (e.segment) segments.append(segment_dict(*e.segment));
        });
        return py::make_tuple(stats_dict(stats), segments);
      },
      py::arg("t"), py::arg("y"), py::arg("config"), py::arg("forest"), py::arg("stream_id") = "stream",
      "Stream one series through the forest; returns (stats, recorded segments).");

  m.def(
      "discover",
      [](const std::vector<std::filesystem::path>& inputs, const EngineConfig& config,
         const std::optional<std::filesystem::path>& out_dir) {
        auto result = discover(inputs, config);
        if (out_dir) write_discover_outputs(result, config, *out_dir);
        py::list segments;
        for (const auto& seg : result.segments) segments.append(segment_dict(seg));
        return py::make_tuple(stats_dict(result.stats), segments, std::move(result.forest));
      },
      py::arg("inputs"), py::arg("config"), py::arg("out_dir") = std::nullopt);

  m.def(
      "replay",
      [](const std::vector<std::filesystem::path>& inputs, const EngineConfig& config, int runs) {
        const auto result = replay(inputs, config, runs);
        py::list rows;
        for (const auto& r : result.rows) {
          py::dict d;
          d["run"] = r.run;
          d["recorded_db"] = r.recorded_db;
          d["detected_db"] = r.detected_db;
          d["distinct_paths"] = r.distinct_paths;
          d["recording_per_run"] = r.recording_per_run;
          d["total_recording"] = r.total_recording;
          rows.append(d);
        }
        return py::make_tuple(rows, result.forest);
      },
      py::arg("inputs"), py::arg("config"), py::arg("runs"));

  m.def(
      "generate_synthetic",
      [](std::uint64_t seed, std::size_t bursts_per_type, double noise_sigma) {
        SyntheticOptions opts;
        opts.seed = seed;
        opts.bursts_per_type = bursts_per_type;
        opts.noise_sigma = noise_sigma;
        const auto s = generate_synthetic(opts);
        std::vector<double> t;
        std::vector<std::vector<double>> y;
        for (const auto& f : s.frames) {
          t.push_back(f.t);
          y.push_back(f.y);
        }
        return py::make_tuple(t, y, s.burst_types);
      },
      py::arg("seed") = 0, py::arg("bursts_per_type") = 1, py::arg("noise_sigma") = 0.05,
      "Returns (t, y, burst_types).");

  m.def(
      "extract_features",
      [](const std::vector<double>& v) {
        const auto f = extract_features(v);
        py::dict d;
        d["mean"] = f.mean;
        d["variance"] = f.variance;
        d["skew"] = f.skew;
        d["kurtosis"] = f.kurtosis;
        d["min"] = f.min;
        d["max"] = f.max;
        d["median"] = f.median;
        d["p25"] = f.p25;
        d["p75"] = f.p75;
        return d;
      },
      py::arg("values"));
  m.def(
      "sliding_window_variances",
      [](const std::vector<double>& s, std::size_t w, double overlap) { return sliding_window_variances(s, w, overlap); },
      py::arg("series"), py::arg("window"), py::arg("overlap") = 0.5);
}
