"""CSV tables for diagnostics and studies."""

from __future__ import annotations

import csv
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Union

from ..exceptions import SnapshotError

__all__ = ["CsvTable", "write_table", "read_table"]


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    return value


class CsvTable:
    """
    Append-only CSV file with a fixed header.

    The file is created (and truncated) on the first row, so a table that
    never receives a row leaves no file behind.

    :param path: Output file
    :param columns: Column names
    """

    def __init__(self, path: Union[str, os.PathLike], columns: Sequence[str]) -> None:
        self.path = Path(path)
        self.columns = list(columns)
        self.rows = 0
        self._fp = None
        self._writer: Optional[csv.writer] = None  # type: ignore[valid-type]

    def _open(self) -> None:
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._fp = open(self.path, "w", newline="", encoding="utf-8")
        except OSError as exc:
            raise SnapshotError(f"Cannot open table: {exc}", path=str(self.path))
        self._writer = csv.writer(self._fp)
        self._writer.writerow(self.columns)

    def append(self, row: Union[Mapping[str, Any], Sequence[Any]]) -> None:
        """
        :raises SnapshotError: If the file cannot be written
        :raises ValueError: For a row of the wrong width
        """
        if isinstance(row, Mapping):
            values = [row.get(name, "") for name in self.columns]
        else:
            values = list(row)
        if len(values) != len(self.columns):
            raise ValueError(f"Row has {len(values)} values for {len(self.columns)} columns")
        if self._writer is None:
            self._open()
        self._writer.writerow([_cell(v) for v in values])
        self._fp.flush()
        self.rows += 1

    def close(self) -> None:
        if self._fp is not None:
            self._fp.close()
            self._fp = None
            self._writer = None

    def __enter__(self) -> CsvTable:
        return self

    def __exit__(self, *exc: Any) -> None:
        self.close()

    def __repr__(self) -> str:
        return f"CsvTable(path={str(self.path)!r}, columns={self.columns}, rows={self.rows})"


def write_table(path: Union[str, os.PathLike], rows: Iterable[Mapping[str, Any]], columns: Optional[Sequence[str]] = None) -> Path:
    """
    Write dict rows in one go; columns default to the first row's keys.

    :raises SnapshotError: If the file cannot be written
    """
    rows = list(rows)
    if columns is None:
        columns = list(rows[0]) if rows else []
    with CsvTable(path, columns) as table:
        for row in rows:
            table.append(row)
    return Path(path)


def read_table(path: Union[str, os.PathLike]) -> List[Dict[str, str]]:
    """
    :raises SnapshotError: If the file cannot be read
    """
    try:
        with open(path, "r", newline="", encoding="utf-8") as fp:
            return list(csv.DictReader(fp))
    except OSError as exc:
        raise SnapshotError(f"Cannot read table: {exc}", path=str(path))
