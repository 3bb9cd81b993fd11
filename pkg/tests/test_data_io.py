"""
Tests for LIBSVM parsing and stream construction.
"""

from collections import Counter

import numpy as np
import pytest

from src.data_io.libsvm import format_libsvm_line, parse_libsvm_line, scan_libsvm, write_libsvm
from src.data_io.sample import Sample
from src.data_io.stream import Stream, StreamSpec, build_stream, infer_label_map
from src.enums.learner_enums import Task
from src.exceptions import IngestionError, ParseError


def test_parse_direct_read():
    sample = parse_libsvm_line("+1 1:0.5 3:2", 3)
    assert sample.label == 1.0
    assert sample.features.tolist() == [0.5, 0.0, 2.0]


def test_parse_ignores_comments_and_qid():
    sample = parse_libsvm_line("-1 qid:4 2:1.5 # trailing note", 2)
    assert sample.label == -1.0
    assert sample.features.tolist() == [0.0, 1.5]


@pytest.mark.parametrize(
    "line",
    ["2 4:1", "1 2:1 2:3", "1 3:1 2:1", "1 a:1", "x 1:1", "1 1:nan", "1 1"],
)
def test_parse_rejects_bad_records(line):
    with pytest.raises(ParseError) as info:
        parse_libsvm_line(line, 3, line_number=17)
    assert info.value.line_number == 17
    assert str(info.value).startswith("line 17:")


def test_formatted_line_reparses(rng):
    features = np.where(rng.random(6) < 0.5, 0.0, rng.normal(size=6))
    sample = parse_libsvm_line(format_libsvm_line(parse_libsvm_line("-1 2:0.25", 6)), 6)
    assert sample.features.tolist() == [0.0, 0.25, 0.0, 0.0, 0.0, 0.0]
    line = "1.0 " + " ".join(f"{i + 1}:{float(v)!r}" for i, v in enumerate(features) if v != 0)
    assert np.array_equal(parse_libsvm_line(line, 6).features, features)


def test_written_file_reads_back_exactly(rng, tmp_path):
    n, d = 1000, 8
    X = np.where(rng.random((n, d)) < 0.6, 0.0, rng.normal(size=(n, d)))
    y = rng.choice([-1.0, 1.0], size=n)
    path = tmp_path / "roundtrip.libsvm"
    write_libsvm(path, [Sample(features=x, label=float(label)) for x, label in zip(X, y)])

    features, labels = build_stream(StreamSpec(path=path, dim=d)).arrays()
    assert np.array_equal(features, X)
    assert np.array_equal(labels, y)


def test_scan_records_offsets_and_labels(libsvm_file):
    index = scan_libsvm(libsvm_file)
    assert len(index) == 120
    assert index.max_index == 4
    assert index.label_counts == Counter({0.0: 60, 1.0: 60})
    assert len(index.digest) == 64


def test_unseeded_stream_keeps_file_order(libsvm_file):
    stream = build_stream(StreamSpec(path=libsvm_file))
    labels = [sample.label for sample in stream]
    assert labels[:4] == [-1.0, 1.0, -1.0, 1.0]
    assert stream.label_map == {0.0: -1.0, 1.0: 1.0}
    assert stream.dim == 4


def test_seeded_stream_is_a_reproducible_permutation(libsvm_file):
    spec = StreamSpec(path=libsvm_file, shuffle_seed=9)
    first = [s.features.tolist() for s in build_stream(spec)]
    second = [s.features.tolist() for s in build_stream(spec)]
    assert first == second
    unshuffled = build_stream(StreamSpec(path=libsvm_file))
    assert first != [s.features.tolist() for s in unshuffled]
    shuffled_labels = Counter(s.label for s in build_stream(spec))
    assert shuffled_labels == Counter(s.label for s in unshuffled)


def test_prefix_and_skip_split_the_order(libsvm_file):
    stream = build_stream(StreamSpec(path=libsvm_file, shuffle_seed=2))
    head = [s.features.tolist() for s in stream.prefix(30)]
    tail = [s.features.tolist() for s in stream.skip(30)]
    assert head + tail == [s.features.tolist() for s in stream]


def test_build_stream_errors(tmp_path, libsvm_file):
    with pytest.raises(IngestionError):
        build_stream(StreamSpec(path=tmp_path / "missing.libsvm"))
    empty = tmp_path / "empty.libsvm"
    empty.write_text("# nothing here\n")
    with pytest.raises(IngestionError):
        build_stream(StreamSpec(path=empty))
    with pytest.raises(IngestionError):
        build_stream(StreamSpec(path=libsvm_file, dim=2))


def test_infer_label_map():
    assert infer_label_map(Counter({-1.0: 3, 1.0: 2})) == {-1.0: -1.0, 1.0: 1.0}
    assert infer_label_map(Counter({0.0: 3, 1.0: 2})) == {0.0: -1.0, 1.0: 1.0}
    assert infer_label_map(Counter({1.0: 2, 2.0: 5, 3.0: 5})) == {1.0: -1.0, 2.0: 1.0, 3.0: -1.0}


def test_regression_labels_pass_through():
    stream = Stream.from_arrays(np.eye(3), np.array([2.5, -7.0, 0.0]), task=Task.REGRESSION)
    assert [s.label for s in stream] == [2.5, -7.0, 0.0]
    assert stream.label_map is None


def test_explicit_label_map_overrides(libsvm_file):
    stream = build_stream(StreamSpec(path=libsvm_file, label_map={0.0: 1.0, 1.0: -1.0}))
    assert next(iter(stream)).label == 1.0


def test_subsample_is_a_seeded_subset_in_stream_order():
    X = np.arange(100, dtype=np.float64)[:, None]
    stream = Stream.from_arrays(X, np.ones(100))
    picked = [s.features[0] for s in stream.subsample(30, seed=4)]
    assert len(picked) == len(set(picked)) == 30
    assert picked == sorted(picked)
    assert picked == [s.features[0] for s in stream.subsample(30, seed=4)]
    assert stream.subsample(100, seed=4) is stream

    shuffled = [s.features[0] for s in stream.subsample(30, seed=4).reorder(1)]
    assert sorted(shuffled) == picked
    assert shuffled != picked
