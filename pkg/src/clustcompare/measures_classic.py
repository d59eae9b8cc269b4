"""Pair-counting, set-matching and information-theoretic similarities.

Every function takes ``(left, right)`` clusterings over the same points and
returns a :class:`MeasureScore`. All are symmetric in their arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import Clustering, ContingencyTable, _stats_from_table, contingency
from .errors import PreconditionError, UndefinedMeasureError

__all__ = [
    "MeasureScore",
    "rand_index",
    "van_dongen",
    "accuracy",
    "nmi",
    "mutual_information",
    "v_similarity",
    "k_measure",
    "pair_count",
]


@dataclass(frozen=True)
class MeasureScore:
    """A similarity value plus bookkeeping.

    ``normalized`` says whether the measure's range over all clustering
    pairs is exactly ``[0, 1]``. ``flags`` names any convention that was
    applied to produce ``value`` (degenerate 0/0 cases, warnings).
    """

    value: float
    measure_id: str
    normalized: bool
    flags: tuple[str, ...] = ()

    def __float__(self) -> float:
        return float(self.value)


def pair_count(sizes) -> int:
    """Number of within-cluster point pairs, ``sum C(s, 2)``."""
    s = np.asarray(sizes, dtype=np.int64)
    return int((s * (s - 1) // 2).sum())


def _rand_from_table(t: ContingencyTable) -> float:
    n = t.n
    total = n * (n - 1) // 2
    if total == 0:
        raise UndefinedMeasureError("Rand index needs at least two points")
    agree = total - pair_count(t.row_sizes) - pair_count(t.col_sizes) + 2 * pair_count(t.counts)
    return agree / total


def rand_index(left: Clustering, right: Clustering) -> MeasureScore:
    """Fraction of point pairs on which both clusterings agree."""
    return MeasureScore(_rand_from_table(contingency(left, right)), "rand", True)


def _row_col_max(t: ContingencyTable) -> tuple[int, int]:
    row_max = np.zeros(t.row_sizes.size, dtype=np.int64)
    col_max = np.zeros(t.col_sizes.size, dtype=np.int64)
    np.maximum.at(row_max, t.rows, t.counts)
    np.maximum.at(col_max, t.cols, t.counts)
    return int(row_max.sum()), int(col_max.sum())


def van_dongen(left: Clustering, right: Clustering) -> MeasureScore:
    t = contingency(left, right)
    r, c = _row_col_max(t)
    return MeasureScore((r + c) / (2 * t.n), "vandongen", False)


def matching_weight(t: ContingencyTable) -> int:
    """Weight of a maximum one-to-one matching between rows and columns."""
    table = t.dense()
    rows, cols = linear_sum_assignment(table, maximize=True)
    return int(table[rows, cols].sum())


def accuracy(left: Clustering, right: Clustering) -> MeasureScore:
    """Classification accuracy under the best one-to-one cluster mapping.

    Unmatched clusters (when the cluster counts differ) contribute nothing.
    """
    t = contingency(left, right)
    return MeasureScore(matching_weight(t) / t.n, "accuracy", False)


def mutual_information(left: Clustering, right: Clustering) -> MeasureScore:
    """Unnormalized mutual information in nats."""
    stats = _stats_from_table(contingency(left, right))
    return MeasureScore(stats.mutual_info, "mi", False)


def nmi(left: Clustering, right: Clustering) -> MeasureScore:
    """Mutual information divided by the larger marginal entropy.

    When both clusterings are the single-cluster partition the ratio is 0/0;
    the result is then 1 (they are equal) and flagged.
    """
    stats = _stats_from_table(contingency(left, right))
    denom = max(stats.h_left, stats.h_right)
    if denom == 0.0:
        return MeasureScore(1.0 if left == right else 0.0, "nmi", True, ("nmi-degenerate",))
    return MeasureScore(min(1.0, max(0.0, stats.mutual_info / denom)), "nmi", True)


def v_similarity(left: Clustering, right: Clustering) -> MeasureScore:
    """``1 - VI / log n``; 1 by convention when ``n = 1``."""
    t = contingency(left, right)
    if t.n == 1:
        return MeasureScore(1.0, "v", True, ("single-point",))
    vi = _stats_from_table(t).vi
    return MeasureScore(1.0 - vi / math.log(t.n), "v", True)


def k_measure(left: Clustering, right: Clustering, k: int) -> MeasureScore:
    """``1 - VI / log k^2`` for clusterings with at most ``k`` clusters.

    The bound ``VI <= 2 log k`` is only guaranteed for ``k <= sqrt(n)``;
    larger ``k`` is accepted but flagged.
    """
    if k < 2:
        raise PreconditionError("k must be at least 2")
    t = contingency(left, right)
    if max(t.row_sizes.size, t.col_sizes.size) > k:
        raise PreconditionError(
            f"k={k} is smaller than the cluster counts ({t.row_sizes.size}, {t.col_sizes.size})"
        )
    flags = ("k-exceeds-sqrt-n",) if k * k > t.n else ()
    vi = _stats_from_table(t).vi
    return MeasureScore(1.0 - vi / (2.0 * math.log(k)), "k", True, flags)
