"""Compare a predicted clustering with a true clustering.

Classic similarities (Rand, van Dongen, accuracy, NMI, normalized VI, K)
sit beside the split-merge family, whose entropy instance ``sh_measure``
scores 1 only for the truth and 0 only for a worst clustering.
"""

from .core import (
    Clustering,
    Component,
    ContingencyTable,
    EntropyStats,
    bottom,
    components,
    contingency,
    entropy_stats,
    enumerate_clusterings,
    from_clusters,
    from_labels,
    induced,
    join,
    meet,
    top,
)
from .decomposition import DecompositionReport, decompose, verify_recomposition
from .degradation import DegradationSeries, binary_merge_step, binary_split_step, generate_series
from .errors import (
    ClusteringError,
    DimensionError,
    EnumerationLimitError,
    InvalidInputError,
    PreconditionError,
    UndefinedMeasureError,
    UnsupportedDecompositionError,
)
from .measures_classic import (
    MeasureScore,
    accuracy,
    k_measure,
    mutual_information,
    nmi,
    rand_index,
    v_similarity,
    van_dongen,
)
from .splitmerge import (
    SubcomponentMeasure,
    derivation_graph,
    merge_set,
    register_subcomponent_measure,
    s_entropy,
    s_max,
    s_mse,
    s_prime,
    s_star,
    sh_measure,
    smse_measure,
    split_set,
    subcomponent_pairs,
)

__version__ = "0.1.0"

__all__ = [
    "DecompositionReport",
    "decompose",
    "verify_recomposition",
    "DegradationSeries",
    "binary_merge_step",
    "binary_split_step",
    "generate_series",
    "Clustering",
    "Component",
    "ContingencyTable",
    "EntropyStats",
    "bottom",
    "components",
    "contingency",
    "entropy_stats",
    "enumerate_clusterings",
    "from_clusters",
    "from_labels",
    "induced",
    "join",
    "meet",
    "top",
    "ClusteringError",
    "DimensionError",
    "EnumerationLimitError",
    "InvalidInputError",
    "PreconditionError",
    "UndefinedMeasureError",
    "UnsupportedDecompositionError",
    "MeasureScore",
    "accuracy",
    "k_measure",
    "mutual_information",
    "nmi",
    "rand_index",
    "v_similarity",
    "van_dongen",
    "SubcomponentMeasure",
    "derivation_graph",
    "merge_set",
    "register_subcomponent_measure",
    "s_entropy",
    "s_max",
    "s_mse",
    "s_prime",
    "s_star",
    "sh_measure",
    "smse_measure",
    "split_set",
    "subcomponent_pairs",
    "__version__",
]
