"""Split/merge subcomponents and the similarities built from them.

Each cluster ``L`` of the left clustering is *split* into the induced
clustering ``right_L``; each cluster ``C`` of the right clustering is the
*merge* of the induced clustering ``left_C``. A subcomponent measure scores
one such (cluster, induced clustering) relation, and the product form
:func:`s_star` weights ``s(right|L) * s(left|C)`` by ``|L ∩ C| / n`` over
the cells of the contingency table.
"""

from __future__ import annotations

import math
import warnings
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .core import (
    Clustering,
    Component,
    ContingencyTable,
    _check_same_n,
    components,
    contingency,
    entropy,
    enumerate_clusterings,
)
from .errors import InvalidInputError
from .measures_classic import MeasureScore

__all__ = [
    "SplitGraph",
    "MergeGraph",
    "DerivationGraph",
    "SubcomponentPair",
    "SubcomponentMeasure",
    "SizeMeasure",
    "EntropyMeasure",
    "MaxOverlapMeasure",
    "EntropyBoundMeasure",
    "MSEMeasure",
    "as_feature_matrix",
    "split_set",
    "merge_set",
    "derivation_graph",
    "subcomponent_pairs",
    "s_entropy",
    "s_max",
    "s_mse",
    "s_star",
    "s_prime",
    "sh_measure",
    "s_star_by_pairs",
    "smse_measure",
    "register_subcomponent_measure",
    "get_subcomponent_measure",
    "SUBCOMPONENT_MEASURES",
]


# --------------------------------------------------------------------------
# graph structure


@dataclass(frozen=True)
class SplitGraph:
    source_cluster: frozenset[int]
    targets: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class MergeGraph:
    sources: tuple[frozenset[int], ...]
    target_cluster: frozenset[int]


@dataclass(frozen=True)
class DerivationGraph:
    """Tripartite graph ``left -> meet -> right``.

    ``split_edges`` holds ``(left index, meet index)`` pairs and
    ``merge_edges`` holds ``(meet index, right index)`` pairs; indices refer
    to the cluster order of the three clusterings.
    """

    left_part: Clustering
    middle_part: Clustering
    right_part: Clustering
    split_edges: tuple[tuple[int, int], ...]
    merge_edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class SubcomponentPair:
    meet_cluster: frozenset[int]
    split: SplitGraph
    merge: MergeGraph


def _partition_within(source: Clustering, other: Clustering, index: int) -> tuple[frozenset[int], ...]:
    ids = source.members(index)
    sub = other.labels[ids - 1]
    return tuple(frozenset(int(i) for i in ids[sub == lab]) for lab in dict.fromkeys(sub.tolist()))


def split_set(component: Component) -> list[SplitGraph]:
    """One split graph per left cluster of the component, in global point ids."""
    left, right = component.left, component.right
    return [
        SplitGraph(component.to_global(left.members(i)),
                   tuple(component.to_global(t) for t in _partition_within(left, right, i)))
        for i in range(left.num_clusters)
    ]


def merge_set(component: Component) -> list[MergeGraph]:
    left, right = component.left, component.right
    return [
        MergeGraph(tuple(component.to_global(s) for s in _partition_within(right, left, j)),
                   component.to_global(right.members(j)))
        for j in range(right.num_clusters)
    ]


def derivation_graph(left: Clustering, right: Clustering) -> DerivationGraph:
    t = contingency(left, right)
    middle = Clustering._from_canonical(t.meet_labels)
    cells = range(len(t))
    return DerivationGraph(
        left_part=left,
        middle_part=middle,
        right_part=right,
        split_edges=tuple((int(t.rows[m]), m) for m in cells),
        merge_edges=tuple((m, int(t.cols[m])) for m in cells),
    )


def subcomponent_pairs(left: Clustering, right: Clustering) -> list[SubcomponentPair]:
    """The unique split/merge pair of every meet cluster, in meet order."""
    t = contingency(left, right)
    middle = Clustering._from_canonical(t.meet_labels)
    splits = [
        SplitGraph(frozenset(int(i) for i in left.members(r)),
                   tuple(frozenset(int(i) for i in p) for p in _partition_within(left, right, r)))
        for r in range(left.num_clusters)
    ]
    merges = [
        MergeGraph(tuple(frozenset(int(i) for i in p) for p in _partition_within(right, left, c)),
                   frozenset(int(i) for i in right.members(c)))
        for c in range(right.num_clusters)
    ]
    return [
        SubcomponentPair(middle.clusters[m], splits[int(t.rows[m])], merges[int(t.cols[m])])
        for m in range(len(t))
    ]


# --------------------------------------------------------------------------
# subcomponent measures


def as_feature_matrix(features) -> np.ndarray:
    """Validate per-point features as a finite ``(n, d)`` float array."""
    arr = np.asarray(features, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InvalidInputError("features must be a nonempty (n, d) matrix")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("features must be finite")
    return arr


def _check_induced(cluster, induced: Clustering) -> np.ndarray:
    ids = np.unique(np.fromiter((int(i) for i in cluster), dtype=np.int64))
    if ids.size == 0 or ids.size != induced.n:
        raise InvalidInputError("induced clustering must partition the cluster")
    return ids


class SubcomponentMeasure:
    """Scores a cluster against a partition of it, in ``[0, 1]``.

    Subclasses implement :meth:`evaluate`, which returns the score and an
    optional flag naming a convention that was applied.
    """

    name = "custom"
    needs_features = False
    normalized = True

    def evaluate(self, cluster, induced: Clustering, features=None) -> tuple[float, str | None]:
        raise NotImplementedError

    def __call__(self, cluster, induced: Clustering, features=None) -> float:
        return self.evaluate(cluster, induced, features)[0]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class SizeMeasure(SubcomponentMeasure):
    """A subcomponent measure that only looks at the induced cluster sizes."""

    def from_sizes(self, sizes: np.ndarray) -> float:
        raise NotImplementedError

    def evaluate(self, cluster, induced, features=None):
        _check_induced(cluster, induced)
        return self.from_sizes(np.asarray(induced.sizes)), None


class EntropyMeasure(SizeMeasure):
    """``1 - H(induced) / log |A|``; a singleton cluster scores 1."""

    name = "entropy"

    def from_sizes(self, sizes):
        m = int(sizes.sum())
        if sizes.size == 1:
            return 1.0
        if sizes.size == m:
            return 0.0
        return 1.0 - entropy(sizes, m) / math.log(m)


class EntropyBoundMeasure(SizeMeasure):
    """``1 - H(induced) / log bound`` for a fixed ``bound``.

    With ``bound = k`` on both sides the mean form :func:`s_prime` equals
    ``k_measure(..., k)``.
    """

    normalized = False

    def __init__(self, bound: float):
        if bound <= 1:
            raise InvalidInputError("bound must exceed 1")
        self.bound = bound
        self.name = f"entropy_bound[{bound:g}]"

    def from_sizes(self, sizes):
        return 1.0 - entropy(sizes) / math.log(self.bound)


class MaxOverlapMeasure(SizeMeasure):
    """Largest induced cluster as a fraction of the cluster.

    Never reaches 0, so it is not subcomponent-normalized; with it on both
    sides :func:`s_prime` reproduces the van Dongen similarity.
    """

    name = "max"
    normalized = False

    def from_sizes(self, sizes):
        return int(sizes.max()) / int(sizes.sum())


class MSEMeasure(SubcomponentMeasure):
    """Within-part squared error over the whole-cluster squared error.

    Squared error is Euclidean distance to the arithmetic-mean center. If the
    cluster's points all coincide the ratio is 0/0; the score then falls back
    to :class:`EntropyMeasure` and is flagged ``mse-zero-variance``.
    """

    name = "mse"
    needs_features = True

    def evaluate(self, cluster, induced, features=None):
        ids = _check_induced(cluster, induced)
        if features is None:
            raise InvalidInputError("the mse measure needs a feature matrix")
        features = np.asarray(features, dtype=np.float64)
        if features.ndim == 1:
            features = features[:, None]
        if ids[-1] > features.shape[0]:
            raise InvalidInputError("features do not cover every point of the cluster")
        if induced.num_clusters == 1:
            return 1.0, None
        x = features[ids - 1]
        total = float(((x - x.mean(axis=0)) ** 2).sum())
        if total == 0.0:
            return _ENTROPY.from_sizes(np.asarray(induced.sizes)), "mse-zero-variance"
        k = induced.num_clusters
        counts = np.asarray(induced.sizes, dtype=np.float64)[:, None]
        sums = np.zeros((k, x.shape[1]))
        np.add.at(sums, induced.labels, x)
        centers = sums / counts
        within = float(((x - centers[induced.labels]) ** 2).sum())
        return min(1.0, within / total), None


_ENTROPY = EntropyMeasure()
_MAX = MaxOverlapMeasure()
_MSE = MSEMeasure()

SUBCOMPONENT_MEASURES: dict[str, SubcomponentMeasure] = {
    "entropy": _ENTROPY,
    "max": _MAX,
    "mse": _MSE,
}


def s_entropy(cluster, induced: Clustering) -> float:
    return _ENTROPY(cluster, induced)


def s_max(cluster, induced: Clustering) -> float:
    return _MAX(cluster, induced)


def s_mse(cluster, induced: Clustering, features) -> float:
    return _MSE(cluster, induced, features)


def _normalization_violations(measure: SubcomponentMeasure, max_size: int) -> list[str]:
    problems = []
    for m in range(1, max_size + 1):
        cluster = range(1, m + 1)
        features = np.arange(1, m + 1, dtype=np.float64)
        for part in enumerate_clusterings(m):
            value = measure(cluster, part, features)
            if part.is_top():
                ok = value == 1.0
            elif part.is_bottom():
                ok = value == 0.0
            else:
                ok = 0.0 < value < 1.0
            if not ok:
                problems.append(f"{part!r} of size {m} scores {value:g}")
    return problems


def register_subcomponent_measure(measure: SubcomponentMeasure, check_size: int = 6) -> None:
    """Make ``measure`` available by name.

    The measure is scored on every partition of up to ``check_size`` points;
    values that break subcomponent normalization produce a warning.
    """
    if check_size:
        problems = _normalization_violations(measure, check_size)
        if problems:
            warnings.warn(
                f"subcomponent measure {measure.name!r} is not normalized: "
                + "; ".join(problems[:3])
                + (f" (+{len(problems) - 3} more)" if len(problems) > 3 else ""),
                stacklevel=2,
            )
    SUBCOMPONENT_MEASURES[measure.name] = measure


def get_subcomponent_measure(name: str | SubcomponentMeasure) -> SubcomponentMeasure:
    if isinstance(name, SubcomponentMeasure):
        return name
    try:
        return SUBCOMPONENT_MEASURES[name]
    except KeyError:
        raise InvalidInputError(f"unknown subcomponent measure {name!r}") from None


# --------------------------------------------------------------------------
# clustering-level similarities


def _side_scores(
    source: Clustering,
    other: Clustering,
    groups: list[np.ndarray],
    measure: SubcomponentMeasure,
    features,
    flags: set[str],
) -> np.ndarray:
    """Score every cluster of ``source`` against its induced ``other``."""
    out = np.empty(source.num_clusters)
    if isinstance(measure, SizeMeasure):
        for i, sizes in enumerate(groups):
            out[i] = measure.from_sizes(sizes)
        return out
    for i in range(source.num_clusters):
        ids = source.members(i)
        value, flag = measure.evaluate(ids, Clustering(other.labels[ids - 1]), features)
        out[i] = value
        if flag:
            flags.add(flag)
    return out


def _prepare(left, right, split_measure, merge_measure, features):
    _check_same_n(left, right)
    split_measure = get_subcomponent_measure(split_measure)
    merge_measure = get_subcomponent_measure(merge_measure)
    if features is not None:
        features = as_feature_matrix(features)
        if features.shape[0] != left.n:
            raise InvalidInputError(
                f"feature matrix has {features.shape[0]} rows for {left.n} points"
            )
    elif split_measure.needs_features or merge_measure.needs_features:
        raise InvalidInputError("a feature matrix is required by the chosen measures")
    t = contingency(left, right)
    flags: set[str] = set()
    split_scores = _side_scores(left, right, t.row_groups(), split_measure, features, flags)
    merge_scores = _side_scores(right, left, t.col_groups(), merge_measure, features, flags)
    normalized = split_measure.normalized and merge_measure.normalized
    return t, split_scores, merge_scores, flags, normalized


def _star_id(split_measure, merge_measure) -> str:
    names = (get_subcomponent_measure(split_measure).name, get_subcomponent_measure(merge_measure).name)
    return {("entropy", "entropy"): "sh", ("mse", "mse"): "smse"}.get(names, "sstar")


def _star_sum(t: ContingencyTable, split_scores: np.ndarray, merge_scores: np.ndarray) -> float:
    terms = t.counts * split_scores[t.rows] * merge_scores[t.cols]
    return float(terms.sum() / t.n)


def s_star(
    left: Clustering,
    right: Clustering,
    split_measure: str | SubcomponentMeasure = "entropy",
    merge_measure: str | SubcomponentMeasure = "entropy",
    features=None,
) -> MeasureScore:
    """Product-form split-merge similarity.

    ``sum over nonempty L ∩ C of |L ∩ C| / n * s(right|L) * s(left|C)``.
    """
    t, ss, ms, flags, normalized = _prepare(left, right, split_measure, merge_measure, features)
    return MeasureScore(
        _star_sum(t, ss, ms), _star_id(split_measure, merge_measure), normalized, tuple(sorted(flags))
    )


def s_prime(
    left: Clustering,
    right: Clustering,
    split_measure: str | SubcomponentMeasure = "entropy",
    merge_measure: str | SubcomponentMeasure = "entropy",
    features=None,
) -> MeasureScore:
    """Arithmetic-mean form: half the size-weighted split scores plus half
    the size-weighted merge scores. Not subcomponent-consistent.
    """
    t, ss, ms, flags, normalized = _prepare(left, right, split_measure, merge_measure, features)
    value = 0.5 * float((t.row_sizes * ss).sum() / t.n) + 0.5 * float((t.col_sizes * ms).sum() / t.n)
    return MeasureScore(value, "sprime", normalized, tuple(sorted(flags)))


def sh_measure(left: Clustering, right: Clustering) -> MeasureScore:
    """Entropy-based split-merge similarity (S_H)."""
    return s_star(left, right, _ENTROPY, _ENTROPY)


def smse_measure(left: Clustering, right: Clustering, features) -> MeasureScore:
    return s_star(left, right, _MSE, _MSE, features)


def s_star_by_pairs(
    left: Clustering,
    right: Clustering,
    split_measure: str | SubcomponentMeasure = "entropy",
    merge_measure: str | SubcomponentMeasure = "entropy",
    features=None,
) -> float:
    """Evaluate S* component by component, then pair by pair.

    Independent of :func:`s_star`'s cell loop: each component's split and
    merge graphs are scored from their own point sets, and each meet cluster
    of the component contributes ``|M| / |J|`` times its pair's product.
    """
    split_measure = get_subcomponent_measure(split_measure)
    merge_measure = get_subcomponent_measure(merge_measure)
    n = left.n
    total = 0.0
    for comp in components(left, right):
        split_score = {
            g.source_cluster: split_measure(sorted(g.source_cluster), _local(g.targets, g.source_cluster), features)
            for g in split_set(comp)
        }
        merge_score = {
            g.target_cluster: merge_measure(sorted(g.target_cluster), _local(g.sources, g.target_cluster), features)
            for g in merge_set(comp)
        }
        inner = 0.0
        for lset, ls in split_score.items():
            for cset, cs in merge_score.items():
                overlap = len(lset & cset)
                if overlap:
                    inner += overlap / comp.size * ls * cs
        total += comp.size / n * inner
    return total


def _local(parts: Iterable[frozenset[int]], cluster: frozenset[int]) -> Clustering:
    ids = sorted(cluster)
    pos = {p: i for i, p in enumerate(ids)}
    labels = np.empty(len(ids), dtype=np.int64)
    for lab, part in enumerate(parts):
        for p in part:
            labels[pos[p]] = lab
    return Clustering(labels)
