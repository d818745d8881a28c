from datetime import UTC, datetime

import pandas as pd

from cqed_tempo.tests.fixtures_output import read_manifest

from .output_service import (
    RunManifest,
    RunRecord,
    tool_version,
    write_csv,
    write_json,
    write_manifest,
)


def test_csv_round_trips_floats_exactly(tmp_path):
    frame = pd.DataFrame({"x": [0.1, 1 / 3, 2.0**-40]})
    path = write_csv(frame, tmp_path / "nested" / "out.csv")

    pd.testing.assert_frame_equal(pd.read_csv(path), frame, check_exact=True)


def test_rewrite_leaves_no_temporary_files(tmp_path):
    write_json({"a": 1}, tmp_path / "meta.json")
    write_json({"a": 2}, tmp_path / "meta.json")

    assert [p.name for p in tmp_path.iterdir()] == ["meta.json"]
    assert (tmp_path / "meta.json").read_text() == '{\n  "a": 2\n}\n'


def test_manifest_round_trip(tmp_path):
    manifest = RunManifest(
        kind="sweep",
        config={"system": {"g_mev": 15.0}},
        started_at=datetime(2024, 1, 1, tzinfo=UTC),
        runs=[
            RunRecord(label="a", outputs=["a/spectrum.csv"], max_bond_dimension=4),
            RunRecord(label="b", status="failed", error="TempoError: boom"),
        ],
    )
    write_manifest(manifest, tmp_path)
    loaded = read_manifest(tmp_path)

    assert loaded == manifest
    assert [run.label for run in loaded.failed] == ["b"]


def test_tool_version_is_a_string():
    assert isinstance(tool_version(), str)
