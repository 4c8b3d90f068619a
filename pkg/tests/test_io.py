import struct

import numpy as np
import pytest

from slidefr.exceptions import SnapshotError
from slidefr.io import (
    MAGIC,
    CsvTable,
    build_manifest,
    parse_restart,
    read_manifest,
    read_restart,
    read_snapshot,
    read_table,
    serialize_restart,
    write_manifest,
    write_restart,
    write_snapshot,
    write_table,
    write_vtk,
)
from slidefr.solver.gas import conservative
from slidefr.types.events import RunStatus


@pytest.fixture
def state(rng):
    return rng.normal(size=(3, 4, 4, 5))


def test_restart_preserves_state_bits(state, tmp_path):
    path = write_restart(tmp_path / "run" / "restart.bin", state, 0.1 + 0.2, 17)
    back = read_restart(path)
    assert back.step == 17
    assert back.t == 0.1 + 0.2
    np.testing.assert_array_equal(back.state, state)


def test_restart_header_is_big_endian(state):
    data = serialize_restart(state, 1.5, 2)
    assert data[:4] == MAGIC
    assert struct.unpack_from("!H", data, 4) == (1,)
    assert struct.unpack_from("!Q", data, 6) == (2,)


def test_restart_rejects_wrong_shape():
    with pytest.raises(SnapshotError):
        serialize_restart(np.zeros((3, 4, 5, 5)), 0.0, 0)


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d[:10], "header"),
        (lambda d: b"XXXX" + d[4:], "magic"),
        (lambda d: d[:4] + b"\x00\x07" + d[6:], "version"),
        (lambda d: d[:-8], "payload"),
        (lambda d: d + b"\x00", "Trailing"),
    ],
)
def test_corrupt_restart(state, mutate, message):
    with pytest.raises(SnapshotError) as info:
        parse_restart(mutate(serialize_restart(state, 0.0, 0)), path="r.bin")
    assert message in str(info.value)
    assert info.value.path == "r.bin"


def test_missing_restart(tmp_path):
    with pytest.raises(SnapshotError):
        read_restart(tmp_path / "none.bin")


def test_snapshot_reproduces_values(inviscid, rng, tmp_path):
    x, y = rng.normal(size=(2, 2, 3, 3))
    q = conservative(1.0 + rng.random((2, 3, 3)), rng.normal(size=(2, 3, 3)), 0.1, 7.0 + rng.random((2, 3, 3)), inviscid)
    path = write_snapshot(tmp_path / "out" / "snap.dat", x, y, q, inviscid, 0.25)
    snap = read_snapshot(path)
    assert (snap.t, snap.elements, snap.n) == (0.25, 2, 3)
    np.testing.assert_array_equal(snap.column("x"), x.ravel())
    np.testing.assert_allclose(snap.column("v"), 0.1, rtol=1e-14)


def test_snapshot_with_wrong_row_count(inviscid, tmp_path):
    q = conservative(np.ones((1, 2, 2)), 0.0, 0.0, 1.0, inviscid)
    path = write_snapshot(tmp_path / "snap.dat", np.zeros((1, 2, 2)), np.zeros((1, 2, 2)), q, inviscid, 0.0)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(SnapshotError):
        read_snapshot(path)
    path.write_text("0 0 1 0 0 1\n")
    with pytest.raises(SnapshotError):
        read_snapshot(path)


def test_vtk_counts(inviscid, tmp_path):
    q = conservative(np.ones((2, 3, 3)), 0.0, 0.0, 1.0, inviscid)
    text = write_vtk(tmp_path / "f.vtk", np.zeros((2, 3, 3)), np.zeros((2, 3, 3)), q, inviscid, 1.0).read_text()
    assert "POINTS 18 double" in text
    assert "CELLS 8 40" in text
    assert text.count("SCALARS") == 4


def test_table_is_created_on_first_row(tmp_path):
    table = CsvTable(tmp_path / "t.csv", ["t", "value"])
    table.close()
    assert not table.path.exists()
    with CsvTable(tmp_path / "t.csv", ["t", "value"]) as table:
        table.append({"t": 0.1, "value": 3})
        table.append([0.2, 4])
        with pytest.raises(ValueError):
            table.append([1, 2, 3])
    assert table.rows == 2
    rows = read_table(tmp_path / "t.csv")
    assert rows == [{"t": "0.1", "value": "3"}, {"t": "0.2", "value": "4"}]


def test_write_table_uses_first_row_keys(tmp_path):
    path = write_table(tmp_path / "s.csv", [{"n": 3, "error": 1e-3}, {"n": 4, "error": 2e-5}])
    assert [row["error"] for row in read_table(path)] == ["0.001", "2e-05"]
    with pytest.raises(SnapshotError):
        read_table(tmp_path / "none.csv")


def test_manifest_round_trip(tmp_path):
    manifest = build_manifest({"solver": {"order": 3}}, RunStatus.FAILED, 1.5, 10, 0.1, ["b.csv", "a.dat"], error="boom")
    assert manifest["exit_code"] == 1
    assert manifest["artifacts"] == ["a.dat", "b.csv"]
    assert {"slidefr", "numpy", "scipy", "pydantic"} <= set(manifest["versions"])
    back = read_manifest(write_manifest(tmp_path / "manifest.json", manifest))
    assert back == manifest


def test_unreadable_manifest(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text("{not json")
    with pytest.raises(SnapshotError):
        read_manifest(path)
