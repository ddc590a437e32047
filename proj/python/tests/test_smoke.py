import json
from pathlib import Path

import pytest

import bforest

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


def table_one_config():
    return bforest.Config.load(CONFIGS / "synthetic.json")


def test_detector_and_forest_fixture():
    paths = bforest.Detector().feed([1, 1, 1, 2, 3, 2, 1, 1, 1, 1, 1, 2, 3, 4])
    assert paths == [[1, 2, 3, 2, 1], [1, 2, 3, 4]]

    forest = bforest.Forest()
    for p in paths:
        forest.insert(p)
    assert forest.edge_weight([1, 2]) == 2
    assert forest.edge_weight([1, 2, 3, 4]) == 1
    assert forest.edge_weight([9]) is None
    assert forest.terminal_paths() == [([1, 2, 3, 2, 1], 1), ([1, 2, 3, 4], 1)]
    assert forest.insert([1, 2, 3, 4])[:2] == (False, 1)


def test_snapshot_round_trip_and_hash_check():
    forest = bforest.Forest()
    forest.insert([1, 2, 3])
    text = forest.snapshot("abc")
    assert bforest.Forest.restore(text, "abc") == forest
    with pytest.raises(bforest.ConfigError):
        bforest.Forest.restore(text, "other")
    with pytest.raises(bforest.IoError):
        bforest.Forest.restore("{broken")
    assert forest.to_dot().startswith("digraph BehaviorForest {")


def test_preprocessing_helpers():
    assert bforest.discretize(0.5, [-0.5, 0.5]) == 2
    assert bforest.discretize(0.49, [-0.5, 0.5]) == 1
    assert bforest.split_unified(bforest.unify([2, 1, 0], [3, 4, 2]), [3, 4, 2]) == [2, 1, 0]
    assert bforest.reduced_length(1, 10) == 1
    assert bforest.reduced_length(500, 10) == 3
    bps = bforest.gaussian_breakpoints(4)
    assert bps[1] == 0.0 and bps[0] == -bps[2]


def test_synthetic_stream_finds_four_patterns():
    t, y, types = bforest.generate_synthetic(seed=0, bursts_per_type=2)
    assert types == [0, 1, 2, 3, 0, 1, 2, 3]
    forest = bforest.Forest()
    stats, segments = bforest.process_stream(t, y, table_one_config(), forest)
    assert forest.distinct_paths == 4
    assert stats["detected_db"] == 8
    assert stats["recorded_db"] == len(segments) == 8
    assert {s["reason"] for s in segments} == {"novel", "under_threshold"}
    assert all(len(s["t"]) == s["end_index"] - s["start_index"] for s in segments)


def test_config_round_trip_and_validation():
    config = table_one_config()
    again = bforest.Config.from_json(config.to_json())
    assert again.hash() == config.hash()
    assert json.loads(config.to_json())["hysteresis_margin"] == pytest.approx(0.35)
    with pytest.raises(bforest.ConfigError):
        bforest.Config.from_json('{"alphabet_sizes": [4], "log_base": 1}')


def test_discover_and_replay_files(tmp_path):
    t, y, _ = bforest.generate_synthetic(seed=1, bursts_per_type=2)
    path = tmp_path / "syn.csv"
    with path.open("w") as fh:
        fh.write("t,a,b\n")
        for ti, (a, b) in zip(t, y):
            fh.write(f"{ti!r},{a!r},{b!r}\n")

    config = table_one_config()
    stats, segments, forest = bforest.discover([path], config, tmp_path / "out")
    assert (tmp_path / "out" / "segments.csv").exists()
    assert stats["recorded_db"] == len(segments)

    config.relevance_threshold = 1
    rows, forest = bforest.replay([path], config, 2)
    assert rows[1]["recorded_db"] == 0
    assert rows[1]["total_recording"] < rows[0]["total_recording"]

    with pytest.raises(bforest.IoError):
        bforest.discover([tmp_path / "missing.csv"], config)


def test_analysis_helpers():
    f = bforest.extract_features([1.0, 2.0, 3.0, 4.0])
    assert f["variance"] == pytest.approx(1.25)
    assert f["p25"] == pytest.approx(1.75)
    assert bforest.sliding_window_variances([0.0] * 10, 4) == [0.0] * 4
