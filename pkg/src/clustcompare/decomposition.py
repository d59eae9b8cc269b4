"""Component-based decomposition of clustering similarities.

A decomposable measure satisfies

    S(left, right) = sum_J w(J, n) * S(left_J, right_J) + b(join, n)

over the clusters ``J`` of the join. :func:`decompose` evaluates both sides
and reports the residual.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import NamedTuple

from .core import Clustering, components
from .errors import InvalidInputError, PreconditionError, UnsupportedDecompositionError
from .measures_classic import (
    accuracy,
    k_measure,
    mutual_information,
    rand_index,
    van_dongen,
    v_similarity,
)
from .splitmerge import sh_measure

__all__ = [
    "ComponentTerm",
    "DecompositionReport",
    "DECOMPOSABLE",
    "decompose",
    "verify_recomposition",
]

DECOMPOSABLE = ("rand", "mi", "v", "vandongen", "accuracy", "k", "sh")
JOIN_WEIGHTED = frozenset({"vandongen", "accuracy", "k", "sh"})


@dataclass(frozen=True)
class ComponentTerm:
    join_cluster: tuple[int, ...]
    score: float
    weight: float


@dataclass(frozen=True)
class DecompositionReport:
    measure_id: str
    components: tuple[ComponentTerm, ...]
    offset: float
    recomposed: float
    direct: float

    @property
    def residual(self) -> float:
        return abs(self.recomposed - self.direct)


class RecompositionCheck(NamedTuple):
    passed: bool
    residual: float


def _scorer(measure_id: str, k: int | None) -> Callable[[Clustering, Clustering], float]:
    if measure_id == "nmi":
        raise UnsupportedDecompositionError("nmi has no component-based decomposition")
    simple = {
        "rand": rand_index,
        "mi": mutual_information,
        "v": v_similarity,
        "vandongen": van_dongen,
        "accuracy": accuracy,
        "sh": sh_measure,
    }
    if measure_id == "k":
        if k is None:
            raise PreconditionError("measure 'k' needs a cluster bound k")
        return lambda a, b: k_measure(a, b, k).value
    if measure_id not in simple:
        raise InvalidInputError(f"unknown measure {measure_id!r}")
    fn = simple[measure_id]
    return lambda a, b: fn(a, b).value


def _weights(measure_id: str, sizes: list[int], n: int) -> tuple[list[float], float]:
    if measure_id == "rand":
        w = [s * (s - 1) / (n * (n - 1)) for s in sizes]
        return w, 1.0 - sum(w)
    if measure_id == "mi":
        w = [s / n for s in sizes]
        return w, math.log(n) - sum(s / n * math.log(s) for s in sizes)
    if measure_id == "v":
        if n == 1:
            return [0.0], 1.0
        w = [s * math.log(s) / (n * math.log(n)) for s in sizes]
        return w, 1.0 - sum(w)
    return [s / n for s in sizes], 0.0


def decompose(
    measure_id: str, left: Clustering, right: Clustering, k: int | None = None
) -> DecompositionReport:
    """Score each join component on its own and recombine with the measure's
    weights and offset.

    A single-point component is scored 1 (0 for ``mi``): both of its induced
    clusterings are the one partition of one point.
    """
    score = _scorer(measure_id, k)
    direct = score(left, right)
    comps = components(left, right)
    n = left.n
    weights, offset = _weights(measure_id, [c.size for c in comps], n)
    terms = []
    for comp, w in zip(comps, weights):
        if comp.size == 1:
            s = 0.0 if measure_id == "mi" else 1.0
        else:
            s = score(comp.left, comp.right)
        terms.append(ComponentTerm(comp.points, s, w))
    recomposed = math.fsum(t.weight * t.score for t in terms) + offset
    return DecompositionReport(measure_id, tuple(terms), offset, recomposed, direct)


def verify_recomposition(
    measure_id: str,
    left: Clustering,
    right: Clustering,
    tolerance: float = 1e-10,
    k: int | None = None,
) -> RecompositionCheck:
    report = decompose(measure_id, left, right, k)
    return RecompositionCheck(report.residual <= tolerance, report.residual)
