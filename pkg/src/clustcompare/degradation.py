"""Series of clusterings that degrade from a true clustering to a worst one.

Phase one repeatedly halves the largest non-singleton cluster until every
point is alone. Phase two merges *true singletons* (points that are
singletons in the truth and still alone in the current clustering): two at a
time while at least two remain, and the last one with a random other cluster.
The series stops when no true singleton is left; at that point the current
clustering shares no cluster with the truth and its meet with the truth is
the all-singletons partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Clustering

__all__ = [
    "DegradationSeries",
    "binary_split_step",
    "binary_merge_step",
    "generate_series",
    "SPLIT",
    "MERGE",
]

SPLIT = "split"
MERGE = "merge"


@dataclass(frozen=True)
class DegradationSeries:
    truth: Clustering
    steps: tuple[tuple[str, Clustering], ...]
    seed: int
    num_splits: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "num_splits", sum(op == SPLIT for op, _ in self.steps))

    @property
    def num_merges(self) -> int:
        return len(self.steps) - self.num_splits

    @property
    def clusterings(self) -> list[Clustering]:
        """Step 0 (the truth) followed by every step's result."""
        return [self.truth] + [c for _, c in self.steps]

    @property
    def terminal(self) -> Clustering:
        return self.steps[-1][1] if self.steps else self.truth


def binary_split_step(current: Clustering) -> Clustering | None:
    """Halve the largest non-singleton cluster, or return ``None`` at bottom.

    Ties on size go to the cluster whose smallest point id is lowest; the
    first ``ceil(m / 2)`` ids (ascending) stay together, the rest form the
    new cluster.
    """
    sizes = current.sizes
    biggest = int(sizes.max())
    if biggest < 2:
        return None
    # canonical labels order clusters by smallest member
    target = int(np.flatnonzero(sizes == biggest)[0])
    ids = current.members(target)
    labels = np.array(current.labels)
    labels[ids[(biggest + 1) // 2:] - 1] = current.num_clusters
    return Clustering(labels)


def _true_singletons(current: Clustering, truth: Clustering) -> np.ndarray:
    alone = (truth.sizes[truth.labels] == 1) & (current.sizes[current.labels] == 1)
    return np.flatnonzero(alone) + 1


def binary_merge_step(
    current: Clustering, truth: Clustering, rng: np.random.Generator
) -> Clustering | None:
    """Merge true singletons; ``None`` once none are left.

    With two or more available the two smallest ids are merged. With exactly
    one, it joins a cluster drawn uniformly from all other clusters.
    """
    singles = _true_singletons(current, truth)
    if singles.size == 0:
        return None
    labels = np.array(current.labels)
    if singles.size >= 2:
        a, b = singles[:2]
        labels[b - 1] = labels[a - 1]
        return Clustering(labels)
    if current.num_clusters < 2:
        return None
    own = labels[singles[0] - 1]
    others = [c for c in range(current.num_clusters) if c != own]
    partner = others[int(rng.integers(len(others)))]
    labels[singles[0] - 1] = partner
    return Clustering(labels)


def generate_series(truth: Clustering, seed: int = 0) -> DegradationSeries:
    """Split down to the bottom clustering, then merge until exhausted."""
    rng = np.random.default_rng(seed)
    steps: list[tuple[str, Clustering]] = []
    current = truth
    while (nxt := binary_split_step(current)) is not None:
        steps.append((SPLIT, nxt))
        current = nxt
    while (nxt := binary_merge_step(current, truth, rng)) is not None:
        steps.append((MERGE, nxt))
        current = nxt
    return DegradationSeries(truth, tuple(steps), seed)
