"""Reading and writing clusterings and feature matrices.

Clustering files come in two layouts, chosen by column count:

* labels: one token per line; line ``i`` holds point ``i``'s cluster label.
* pairs: ``point_id<TAB>label`` per line; point ids are arbitrary strings,
  numbered ``1..n`` in order of first appearance.

Blank lines and lines starting with ``#`` are skipped in both.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .core import Clustering
from .errors import InvalidInputError
from .splitmerge import as_feature_matrix

__all__ = ["parse_clustering_file", "parse_clustering_lines", "write_clustering_file", "parse_features_file"]


class FileFormatError(InvalidInputError):
    """A clustering or feature file does not follow its format."""


def parse_clustering_lines(lines, source: str = "<input>") -> tuple[Clustering, list[str]]:
    """Parse clustering text; returns the clustering and the external point ids."""
    rows = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        rows.append((lineno, line.split("\t")))
    if not rows:
        raise FileFormatError(f"{source}: no clustering rows")
    width = len(rows[0][1])
    for lineno, fields in rows:
        if len(fields) != width or width > 2:
            raise FileFormatError(f"{source}:{lineno}: ragged row (expected {min(width, 2)} column(s))")
    if width == 1:
        labels = [fields[0].strip() for _, fields in rows]
        return Clustering(labels), [str(i) for i in range(1, len(labels) + 1)]
    seen: dict[str, int] = {}
    labels = []
    for lineno, (point, label) in rows:
        point = point.strip()
        if point in seen:
            raise FileFormatError(f"{source}:{lineno}: duplicate point id {point!r}")
        seen[point] = len(seen)
        labels.append(label.strip())
    return Clustering(labels), list(seen)


def parse_clustering_file(path) -> Clustering:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_clustering_lines(fh, str(path))[0]


def write_clustering_file(clustering: Clustering, path, point_ids=None) -> None:
    """Write the pairs layout with canonical labels."""
    ids = point_ids if point_ids is not None else range(1, clustering.n + 1)
    with Path(path).open("w", encoding="utf-8") as fh:
        for pid, lab in zip(ids, clustering.labels.tolist()):
            fh.write(f"{pid}\t{lab}\n")


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def parse_features_file(path) -> np.ndarray:
    """Comma-separated numeric rows, one per point; a non-numeric first row
    is treated as a header.
    """
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), 1) if r and any(c.strip() for c in r)]
    if rows and not all(_is_number(c) for c in rows[0][1]):
        rows = rows[1:]
    if not rows:
        raise FileFormatError(f"{path}: no feature rows")
    width = len(rows[0][1])
    data = []
    for lineno, row in rows:
        if len(row) != width:
            raise FileFormatError(f"{path}:{lineno}: ragged row ({len(row)} columns, expected {width})")
        try:
            values = [float(c) for c in row]
        except ValueError:
            raise FileFormatError(f"{path}:{lineno}: non-numeric cell") from None
        if not all(math.isfinite(v) for v in values):
            raise FileFormatError(f"{path}:{lineno}: non-finite value")
        data.append(values)
    return as_feature_matrix(data)
