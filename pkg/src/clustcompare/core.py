"""Set partitions of ``{1, ..., n}`` and the lattice operations on them.

A :class:`Clustering` stores one canonical label per point: clusters are
numbered ``0, 1, ...`` in order of the first point that belongs to them.
Two clusterings are equal exactly when their canonical labels are equal, so
equality never depends on how the caller spelled the cluster ids.

Point ids in every set-valued API are the integers ``1..n``. Cluster
indices (rows and columns of a :class:`ContingencyTable`, positions in
:attr:`Clustering.clusters`) are 0-based.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import pandas as pd

from .errors import DimensionError, EnumerationLimitError, InvalidInputError

__all__ = [
    "Clustering",
    "ContingencyTable",
    "Component",
    "EntropyStats",
    "from_labels",
    "from_clusters",
    "top",
    "bottom",
    "contingency",
    "meet",
    "join",
    "induced",
    "components",
    "entropy",
    "entropy_stats",
    "enumerate_clusterings",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 10


def _canonical(labels: np.ndarray) -> np.ndarray:
    if labels.size <= _SMALL_N:
        # a dict beats pd.factorize's fixed overhead on tiny inputs
        seen: dict = {}
        out = []
        for x in labels.tolist():
            if x is None or x != x:
                raise InvalidInputError("labels must not contain missing values")
            out.append(seen.setdefault(x, len(seen)))
        return np.array(out, dtype=np.int64)
    # pd.factorize is a hash-table pass; codes follow first appearance.
    codes, _ = pd.factorize(labels, sort=False)
    if codes.size and codes.min() < 0:
        raise InvalidInputError("labels must not contain missing values")
    return codes.astype(np.int64, copy=False)


class Clustering:
    """An immutable hard partition of the points ``1..n``.

    Build one with :func:`from_labels`, :func:`from_clusters`, :func:`top`
    or :func:`bottom`; the constructor accepts any per-point label sequence.
    """

    def __init__(self, labels: Iterable):
        if isinstance(labels, np.ndarray):
            arr = labels
        else:
            arr = np.empty(0, dtype=object) if labels is None else np.asarray(list(labels), dtype=object)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("labels must be a nonempty 1-d sequence")
        self._set_labels(_canonical(arr))

    @classmethod
    def _from_canonical(cls, labels: np.ndarray) -> Clustering:
        obj = cls.__new__(cls)
        obj._set_labels(np.asarray(labels, dtype=np.int64))
        return obj

    def _set_labels(self, labels: np.ndarray) -> None:
        labels.flags.writeable = False
        self._labels = labels
        self._k = int(labels.max()) + 1

    @property
    def n(self) -> int:
        return int(self._labels.size)

    @property
    def canonical_labels(self) -> np.ndarray:
        """Read-only per-point cluster index, first-appearance order."""
        return self._labels

    labels = canonical_labels

    @property
    def num_clusters(self) -> int:
        return self._k

    def __len__(self) -> int:
        return self._k

    @cached_property
    def sizes(self) -> np.ndarray:
        sizes = np.bincount(self._labels, minlength=self._k)
        sizes.flags.writeable = False
        return sizes

    @cached_property
    def _members(self) -> list[np.ndarray]:
        # 1-based point ids per cluster, each ascending.
        order = np.argsort(self._labels, kind="stable")
        return np.split(order + 1, np.cumsum(self.sizes)[:-1])

    @cached_property
    def clusters(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(int(i) for i in m) for m in self._members)

    def members(self, index: int) -> np.ndarray:
        """Ascending 1-based point ids of cluster ``index``."""
        return self._members[index]

    def as_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(self.clusters)

    def is_top(self) -> bool:
        return self._k == 1

    def is_bottom(self) -> bool:
        return self._k == self.n

    def refines(self, other: Clustering) -> bool:
        """True if every cluster of ``self`` lies inside a cluster of ``other``."""
        _check_same_n(self, other)
        return len(contingency(self, other)) == self._k

    def __eq__(self, other) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented
        return np.array_equal(self._labels, other._labels)

    def __hash__(self) -> int:
        return hash(self._labels.tobytes())

    def __repr__(self) -> str:
        if self.n <= 20:
            body = ", ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in self.clusters)
            return f"Clustering({{{body}}})"
        return f"Clustering(n={self.n}, clusters={self._k})"


def from_labels(labels: Iterable) -> Clustering:
    """Group points by label: point ``i`` (1-based) gets ``labels[i - 1]``."""
    return Clustering(labels)


def from_clusters(clusters: Iterable[Iterable[int]], n: int | None = None) -> Clustering:
    """Build a clustering from explicit point-id sets over ``1..n``."""
    clusters = [list(c) for c in clusters]
    if any(not c for c in clusters):
        raise InvalidInputError("clusters must be nonempty")
    total = sum(len(c) for c in clusters)
    if n is None:
        n = total
    labels = np.full(n, -1, dtype=np.int64)
    for idx, c in enumerate(clusters):
        ids = np.asarray(c, dtype=np.int64)
        if ids.min() < 1 or ids.max() > n:
            raise InvalidInputError(f"point ids must lie in 1..{n}")
        if np.any(labels[ids - 1] != -1) or len(np.unique(ids)) != ids.size:
            raise InvalidInputError("clusters must be pairwise disjoint")
        labels[ids - 1] = idx
    if total != n or np.any(labels < 0):
        raise InvalidInputError(f"clusters must cover exactly the points 1..{n}")
    return Clustering(labels)


def top(n: int) -> Clustering:
    """The single-cluster partition."""
    if n < 1:
        raise InvalidInputError("n must be positive")
    return Clustering._from_canonical(np.zeros(n, dtype=np.int64))


def bottom(n: int) -> Clustering:
    """The all-singletons partition."""
    if n < 1:
        raise InvalidInputError("n must be positive")
    return Clustering._from_canonical(np.arange(n, dtype=np.int64))


def _check_same_n(left: Clustering, right: Clustering) -> None:
    if left.n != right.n:
        raise DimensionError(f"clusterings cover different point counts: {left.n} vs {right.n}")


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Sparse overlap counts ``|L ∩ C|``; only nonempty cells are stored.

    Cell ``i`` is the ``i``-th cluster of the meet, so ``meet_labels`` maps each
    point to the cell it falls into.
    """

    row_sizes: np.ndarray
    col_sizes: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    counts: np.ndarray
    meet_labels: np.ndarray

    @property
    def n(self) -> int:
        return int(self.meet_labels.size)

    def __len__(self) -> int:
        return int(self.counts.size)

    @property
    def cells(self) -> dict[tuple[int, int], int]:
        return {
            (int(r), int(c)): int(v) for r, c, v in zip(self.rows, self.cols, self.counts)
        }

    def dense(self) -> np.ndarray:
        table = np.zeros((self.row_sizes.size, self.col_sizes.size), dtype=np.int64)
        table[self.rows, self.cols] = self.counts
        return table

    def transpose(self) -> ContingencyTable:
        """The table of ``(right, left)``; cell order is preserved."""
        return ContingencyTable(
            self.col_sizes, self.row_sizes, self.cols, self.rows, self.counts, self.meet_labels
        )

    def row_groups(self) -> list[np.ndarray]:
        """Cell counts of each row, in row order."""
        return _group(self.rows, self.counts, self.row_sizes.size)

    def col_groups(self) -> list[np.ndarray]:
        return _group(self.cols, self.counts, self.col_sizes.size)


def _group(keys: np.ndarray, values: np.ndarray, nkeys: int) -> list[np.ndarray]:
    if keys.size <= _SMALL_GROUP:
        groups: list[list[int]] = [[] for _ in range(nkeys)]
        for key, value in zip(keys.tolist(), values.tolist()):
            groups[key].append(value)
        return [np.array(g, dtype=np.int64) for g in groups]
    order = np.argsort(keys, kind="stable")
    bounds = np.cumsum(np.bincount(keys, minlength=nkeys))[:-1]
    return np.split(values[order], bounds)


_SMALL_GROUP = 64
_SMALL_N = 256


def contingency(left: Clustering, right: Clustering) -> ContingencyTable:
    """Overlap counts of every nonempty ``L ∩ C``, built in one pass.

    Each point's ``(left label, right label)`` key is looked up in a hash
    table; a new key opens a new cell, so cells come out in first-appearance
    order.
    """
    _check_same_n(left, right)
    kr = right.num_clusters
    if left.n <= _SMALL_N:
        index: dict[tuple[int, int], int] = {}
        meet_list = [
            index.setdefault(key, len(index))
            for key in zip(left.labels.tolist(), right.labels.tolist())
        ]
        meet_labels = np.array(meet_list, dtype=np.int64)
        pairs = np.array(list(index), dtype=np.int64).reshape(-1, 2)
        rows, cols = pairs[:, 0], pairs[:, 1]
        counts = np.bincount(meet_labels, minlength=len(index))
    else:
        keys = left.labels * kr + right.labels
        meet_labels, uniq = pd.factorize(keys, sort=False)
        meet_labels = meet_labels.astype(np.int64, copy=False)
        counts = np.bincount(meet_labels, minlength=uniq.size)
        rows, cols = uniq // kr, uniq % kr
    for arr in (meet_labels, counts):
        arr.flags.writeable = False
    return ContingencyTable(
        row_sizes=left.sizes,
        col_sizes=right.sizes,
        rows=rows,
        cols=cols,
        counts=counts,
        meet_labels=meet_labels,
    )


def meet(left: Clustering, right: Clustering) -> Clustering:
    """All nonempty pairwise intersections; refines both inputs."""
    return Clustering._from_canonical(contingency(left, right).meet_labels)


class _DisjointSet:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


def _join_from_table(left: Clustering, table: ContingencyTable) -> Clustering:
    kl = table.row_sizes.size
    ds = _DisjointSet(kl + table.col_sizes.size)
    for r, c in zip(table.rows.tolist(), table.cols.tolist()):
        ds.union(r, kl + c)
    roots = np.fromiter((ds.find(r) for r in range(kl)), dtype=np.int64, count=kl)
    return Clustering(roots[left.labels])


def join(left: Clustering, right: Clustering) -> Clustering:
    """Finest clustering refined by both inputs.

    Computed as the connected components of the cluster overlap graph, with
    a union-find over the ``|left| + |right|`` cluster vertices.
    """
    return _join_from_table(left, contingency(left, right))


def _as_subset(subset, n: int) -> np.ndarray:
    ids = np.unique(np.fromiter((int(i) for i in subset), dtype=np.int64))
    if ids.size == 0:
        raise InvalidInputError("subset must be nonempty")
    if ids[0] < 1 or ids[-1] > n:
        raise InvalidInputError(f"subset ids must lie in 1..{n}")
    return ids


def induced(clustering: Clustering, subset: Iterable[int]) -> Clustering:
    """The clustering ``{A ∩ C}`` restricted to ``subset``.

    The result is reindexed: its point ``j`` is the ``j``-th smallest id of
    ``subset``.
    """
    ids = _as_subset(subset, clustering.n)
    return Clustering(clustering.labels[ids - 1])


@dataclass(frozen=True)
class Component:
    """One connected piece of the bipartite overlap graph.

    ``left`` and ``right`` are the induced clusterings on ``points``, indexed
    like :func:`induced` (local point ``j`` is ``points[j - 1]``).
    """

    points: tuple[int, ...]
    left: Clustering
    right: Clustering

    @property
    def join_cluster(self) -> frozenset[int]:
        return frozenset(self.points)

    @property
    def size(self) -> int:
        return len(self.points)

    def to_global(self, local: Iterable[int]) -> frozenset[int]:
        return frozenset(self.points[j - 1] for j in local)


def components(left: Clustering, right: Clustering) -> list[Component]:
    """One :class:`Component` per cluster of ``join(left, right)``."""
    table = contingency(left, right)
    joined = _join_from_table(left, table)
    out = []
    for j in range(joined.num_clusters):
        ids = joined.members(j)
        out.append(
            Component(
                points=tuple(int(i) for i in ids),
                left=Clustering(left.labels[ids - 1]),
                right=Clustering(right.labels[ids - 1]),
            )
        )
    return out


def entropy(sizes, n: int | None = None) -> float:
    """Shannon entropy (nats) of a cluster-size vector; ``0 log 0 = 0``."""
    if len(sizes) <= _SMALL_GROUP:
        sizes = [int(s) for s in sizes if s > 0]
        total = sum(sizes) if n is None else n
        return -math.fsum(s / total * math.log(s / total) for s in sizes)
    sizes = np.asarray(sizes, dtype=np.float64)
    sizes = sizes[sizes > 0]
    if n is None:
        n = sizes.sum()
    p = sizes / n
    return float(-(p * np.log(p)).sum())


@dataclass(frozen=True)
class EntropyStats:
    h_left: float
    h_right: float
    h_joint: float
    mutual_info: float
    h_left_given_right: float
    h_right_given_left: float
    vi: float

    def swapped(self) -> EntropyStats:
        return EntropyStats(
            self.h_right,
            self.h_left,
            self.h_joint,
            self.mutual_info,
            self.h_right_given_left,
            self.h_left_given_right,
            self.vi,
        )


def _stats_from_table(table: ContingencyTable) -> EntropyStats:
    n = table.n
    hl = entropy(table.row_sizes, n)
    hr = entropy(table.col_sizes, n)
    hj = entropy(table.counts, n)
    mi = hl + hr - hj
    hl_r = hl - mi
    hr_l = hr - mi
    return EntropyStats(hl, hr, hj, mi, hl_r, hr_l, hl_r + hr_l)


def entropy_stats(left: Clustering, right: Clustering) -> EntropyStats:
    """Marginal, joint and conditional entropies plus MI and VI, in nats."""
    return _stats_from_table(contingency(left, right))


def bell(n: int) -> int:
    """Bell number via the Bell triangle."""
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[-1] if n >= 1 else 1


def enumerate_clusterings(n: int, cap: int = ENUMERATION_CAP) -> Iterator[Clustering]:
    """Yield every partition of ``1..n`` once, as restricted growth strings in
    lexicographic order (so ``top(n)`` comes first and ``bottom(n)`` last).
    """
    if n < 1:
        raise InvalidInputError("n must be positive")
    if n > cap:
        raise EnumerationLimitError(
            f"refusing to enumerate Bell({n}) = {bell(n)} partitions (cap {cap})"
        )
    rgs = [0] * n
    maxes = [0] * n
    while True:
        yield Clustering._from_canonical(np.array(rgs, dtype=np.int64))
        i = n - 1
        while i > 0 and rgs[i] == maxes[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        maxes[i] = max(maxes[i - 1], rgs[i])
        for j in range(i + 1, n):
            rgs[j] = 0
            maxes[j] = maxes[i]


def sqrt_floor_ceil(n: int) -> tuple[int, int]:
    r = math.isqrt(n)
    return r, r if r * r == n else r + 1
