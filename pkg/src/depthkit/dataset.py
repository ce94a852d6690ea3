"""Samples, query points and result files.

CSV is the canonical format: comma separated, '.' decimal point, an optional
header row (detected when the first row is not numeric), and missing entries
written as an empty field or ``NA``. Floats are written with 17 significant
digits so that a write/load round trip is bit exact.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError

MISSING_TOKENS = {"", "NA", "na", "NaN", "nan"}


def _freeze(a):
    if a is not None:
        a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """An immutable n x d sample.

    ``points`` holds NaN at masked positions; ``missing_mask`` is True there.
    ``dissimilarity`` is an optional n x n matrix of ordinal dissimilarities.
    """

    points: np.ndarray
    ids: tuple = ()
    missing_mask: np.ndarray | None = None
    dissimilarity: np.ndarray | None = None
    columns: tuple = field(default=())

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DataError("empty dataset")
        n, d = pts.shape
        mask = None
        if self.missing_mask is not None:
            mask = np.array(self.missing_mask, dtype=bool, copy=True)
            if mask.shape != pts.shape:
                raise DataError("missing mask shape does not match points")
            pts[mask] = np.nan
        nan = np.isnan(pts)
        if nan.any():
            mask = nan if mask is None else (mask | nan)
        if mask is not None and not mask.any():
            mask = None
        finite = np.isfinite(pts) | (mask if mask is not None else False)
        if not np.all(finite):
            raise DataError("non-finite entries in dataset")
        ids = tuple(self.ids) if len(self.ids) else tuple(range(n))
        if len(ids) != n:
            raise DataError(f"got {len(ids)} ids for {n} points")
        dis = None
        if self.dissimilarity is not None:
            dis = validate_dissimilarity(self.dissimilarity)
            if dis.shape[0] != n:
                raise DataError("dissimilarity matrix size does not match the sample")
        object.__setattr__(self, "points", _freeze(pts))
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "missing_mask", _freeze(mask))
        object.__setattr__(self, "dissimilarity", _freeze(dis))
        object.__setattr__(self, "columns", tuple(self.columns))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def has_missing(self) -> bool:
        return self.missing_mask is not None

    def complete_points(self) -> np.ndarray:
        """The points array, refusing masked data."""
        if self.has_missing:
            raise DataError("this operation does not accept missing values")
        return self.points

    def with_dissimilarity(self, dissimilarity) -> "Dataset":
        return Dataset(self.points, self.ids, self.missing_mask, dissimilarity, self.columns)

    def __len__(self):
        return self.n

    def __repr__(self):
        extra = ", missing" if self.has_missing else ""
        extra += ", dissimilarity" if self.dissimilarity is not None else ""
        return f"Dataset(n={self.n}, d={self.d}{extra})"


def as_points(data, allow_missing: bool = False) -> np.ndarray:
    """Return an (n, d) float array from a Dataset or array-like."""
    if isinstance(data, Dataset):
        return data.points if allow_missing else data.complete_points()
    pts = np.asarray(data, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise DataError("empty dataset")
    if not allow_missing and not np.all(np.isfinite(pts)):
        raise DataError("this operation does not accept missing values")
    return pts


def as_query(y, d: int) -> np.ndarray:
    q = np.asarray(y, dtype=float).ravel()
    if q.size != d:
        raise DataError(f"query has dimension {q.size}, sample has dimension {d}")
    return q


def validate_dissimilarity(matrix, tol: float = 1e-12) -> np.ndarray:
    """Check a square, symmetric, nonnegative matrix with zero diagonal."""
    v = np.array(matrix, dtype=float, copy=True)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise DataError("dissimilarity matrix must be square")
    if not np.all(np.isfinite(v)):
        raise DataError("dissimilarity matrix has non-finite entries")
    if np.any(v < 0):
        raise DataError("negative dissimilarity")
    if np.abs(v - v.T).max(initial=0.0) > tol:
        raise DataError("asymmetric dissimilarity matrix")
    if np.any(np.diag(v) != 0):
        raise DataError("dissimilarity diagonal must be zero")
    off = ~np.eye(v.shape[0], dtype=bool)
    if np.any(v[off] <= 0):
        raise DataError("dissimilarity must be positive between distinct points")
    return 0.5 * (v + v.T)


def _parse_cell(text, row, col, path):
    t = text.strip()
    if t in MISSING_TOKENS:
        return np.nan
    try:
        return float(t)
    except ValueError:
        raise DataError(f"non-numeric cell {t!r}", row=row, column=col, path=path) from None


def _is_numeric_row(cells):
    for c in cells:
        t = c.strip()
        if t in MISSING_TOKENS:
            continue
        try:
            float(t)
        except ValueError:
            return False
    return True


def _read_csv_rows(path):
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if any(c.strip() for c in r)]
    except OSError as exc:
        raise DataError(f"cannot read file: {exc.strerror}", path=path) from exc
    return rows


def load_dataset(path, format: str | None = None, id_column: str | None = None) -> Dataset:
    """Load a sample from CSV or JSON.

    JSON files look like ``{"points": [[...], ...], "ids": [...]}`` with
    ``null`` for missing entries. In CSV, ``id_column`` names a header column
    holding point labels instead of coordinates.
    """
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".") or "csv").lower()
    if fmt == "json":
        return _load_json(path)
    if fmt != "csv":
        raise DataError(f"unsupported format {fmt!r}", path=path)
    rows = _read_csv_rows(path)
    if not rows:
        raise DataError("empty dataset", path=path)
    header = None
    first_line = 1
    if not _is_numeric_row(rows[0]):
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        first_line = 2
    if not rows:
        raise DataError("empty dataset", path=path)
    width = len(rows[0])
    id_idx = None
    if id_column is not None:
        if header is None or id_column not in header:
            raise DataError(f"id column {id_column!r} not found", path=path)
        id_idx = header.index(id_column)
    ids = []
    values = []
    for k, r in enumerate(rows):
        line = first_line + k
        if len(r) != width:
            raise DataError(f"inconsistent row width: expected {width} fields, got {len(r)}",
                            row=line, path=path)
        if header is not None and len(header) != width:
            raise DataError("header width does not match data", row=1, path=path)
        vals = []
        for j, cell in enumerate(r):
            if j == id_idx:
                ids.append(cell.strip())
                continue
            vals.append(_parse_cell(cell, line, j + 1, path))
        values.append(vals)
    pts = np.asarray(values, dtype=float)
    columns = tuple(h for j, h in enumerate(header) if j != id_idx) if header else ()
    mask = np.isnan(pts)
    return Dataset(pts, tuple(ids), mask if mask.any() else None, None, columns)


def _load_json(path):
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DataError(f"cannot read file: {exc.strerror}", path=path) from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc.msg}", row=exc.lineno, column=exc.colno, path=path) from exc
    if isinstance(obj, list):
        obj = {"points": obj}
    raw = obj.get("points")
    if not raw:
        raise DataError("empty dataset", path=path)
    width = len(raw[0]) if isinstance(raw[0], list) else 1
    values = []
    for i, r in enumerate(raw):
        r = r if isinstance(r, list) else [r]
        if len(r) != width:
            raise DataError("inconsistent row width", row=i + 1, path=path)
        row = []
        for j, v in enumerate(r):
            if v is None or v == "NA":
                row.append(np.nan)
            elif isinstance(v, (int, float)) and not isinstance(v, bool):
                row.append(float(v))
            else:
                raise DataError(f"non-numeric cell {v!r}", row=i + 1, column=j + 1, path=path)
        values.append(row)
    pts = np.asarray(values, dtype=float)
    mask = np.isnan(pts)
    ids = tuple(obj.get("ids", ()))
    dis = obj.get("dissimilarity")
    return Dataset(pts, ids, mask if mask.any() else None, dis)


def load_points(path, format: str | None = None) -> np.ndarray:
    """Load query points; missing coordinates come back as NaN."""
    ds = load_dataset(path, format)
    return np.array(ds.points)


def load_dissimilarity(path) -> np.ndarray:
    """Load and validate a square dissimilarity matrix from CSV."""
    path = Path(path)
    rows = _read_csv_rows(path)
    if rows and not _is_numeric_row(rows[0]):
        rows = rows[1:]
    if not rows:
        raise DataError("empty dissimilarity matrix", path=path)
    vals = [[_parse_cell(c, i + 1, j + 1, path) for j, c in enumerate(r)] for i, r in enumerate(rows)]
    widths = {len(r) for r in vals}
    if len(widths) != 1:
        raise DataError("inconsistent row width", path=path)
    return validate_dissimilarity(np.asarray(vals))


def format_float(x: float) -> str:
    if x is None or (isinstance(x, float) and np.isnan(x)):
        return "NA"
    return format(float(x), ".17g")


def save_dataset(ds: Dataset, path) -> None:
    """Write a Dataset as CSV with a header row."""
    path = Path(path)
    cols = ds.columns or tuple(f"x{j + 1}" for j in range(ds.d))
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for row in ds.points:
                w.writerow([format_float(v) for v in row])
    except OSError as exc:
        raise DataError(f"cannot write file: {exc.strerror}", path=path) from exc


@dataclass(frozen=True)
class DepthResult:
    """One computed depth value ready for output."""

    point_id: object
    notion: str
    method: str
    value: float
    elapsed_ns: int = 0
    raw: float | None = None


RESULT_HEADER = ("point_id", "notion", "method", "value", "elapsed_ns")


def _open_for_write(path):
    if path is None or str(path) == "-":
        import sys
        return sys.stdout, False
    try:
        return open(path, "w", newline=""), True
    except OSError as exc:
        raise DataError(f"cannot write file: {exc.strerror}", path=path) from exc


def write_results(results: Sequence[DepthResult], path) -> None:
    """Write depth results as CSV (``-`` or None writes to stdout)."""
    results = list(results)
    if not results:
        raise DataError("no results to write")
    fh, close = _open_for_write(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_HEADER)
        for r in results:
            w.writerow([r.point_id, r.notion, r.method, format_float(r.value), int(r.elapsed_ns)])
    finally:
        if close:
            fh.close()


def write_region(region, path) -> None:
    """Write a polygon region as ``vertex_index,x,y`` rows (counterclockwise).

    Member-set regions are written as ``index,point_id`` rows.
    """
    fh, close = _open_for_write(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        if region.kind == "polygon2d":
            w.writerow(("vertex_index", "x", "y"))
            for k, (x, y) in enumerate(region.vertices):
                w.writerow((k, format_float(x), format_float(y)))
        else:
            w.writerow(("index", "point_id"))
            ids = region.ids if region.ids is not None else region.members
            for i, pid in zip(region.members, ids):
                w.writerow((int(i), pid))
    finally:
        if close:
            fh.close()


def write_rows(rows: Iterable[dict], path, header: Sequence[str]) -> None:
    """Generic CSV writer used by the experiment harness."""
    fh, close = _open_for_write(path)
    try:
        w = csv.DictWriter(fh, fieldnames=list(header), lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: (format_float(v) if isinstance(v, float) else v) for k, v in r.items()})
    finally:
        if close:
            fh.close()
