"""Finest valid hierarchies under arbitrary similarity functions.

A cluster is valid when every within score strictly beats every score to
the outside; the valid clusters of a score table form a single hierarchy,
the finest one consistent with the data.  This package computes it two
ways - exhaustively for small item counts, and at scale by running a
generic agglomerative engine and trimming the invalid vertices - plus the
machinery to check which update rules make the two agree: condition
checkers, a fix-point test, and a seeded counterexample search.

Hot kernels run through a compiled extension when available; set
FINEHIER_PURE_KERNELS=1 to force the numpy fallback (see
``finehier.kernel_backend``).
"""

from ._kernels import BACKEND as kernel_backend
from .conditions import (
    ConditionViolation,
    check_condition_1,
    check_condition_2,
    check_condition_3,
    check_condition_4,
    check_fixpoint,
    replay_violation,
)
from .errors import (
    Asymmetric,
    DimensionMismatch,
    EmptyCluster,
    FinehierError,
    InputError,
    LaminarityViolation,
    MonotonicityViolation,
    NonFinite,
    NotUltrametric,
    RuleOrientationMismatch,
    RuleSymmetryError,
    SelfDominanceViolation,
    TooLarge,
)
from .linkage import run_linkage
from .matrix import (
    Orientation,
    PairMatrix,
    ScoreComparator,
    as_similarity_view,
    ingest_matrix,
)
from .oracle import (
    ENUMERATION_CAP,
    CounterexampleReport,
    finest_valid_hierarchy,
    maximality_check,
    search_counterexample,
)
from .prune import trim, trimmed_linkage
from .rules import (
    AVG_UNWEIGHTED,
    AVG_WEIGHTED,
    BUILTIN_RULES,
    CENTROID,
    COMPLETE,
    CONFORMING_RULES,
    MEDIAN,
    SINGLE,
    WARD,
    LinkageRule,
    apply_rule,
    custom_rule,
    lance_williams,
    rule_from_name,
)
from .tree import (
    Cluster,
    Hierarchy,
    MergeStep,
    MergeTrace,
    contains,
    hierarchy_from_clusters,
    lca,
)
from .ultrametric import (
    Dendrogram,
    UltrametricCheck,
    dendrogram_from_ultrametric,
    is_ultrametric,
    ultrametric_from_dendrogram,
)
from .validity import (
    ValidityReport,
    cluster_gap,
    hierarchy_validity_reports,
    is_strongly_valid_hierarchy,
    is_valid_cluster,
    is_valid_hierarchy,
    strong_gap,
    tree_gaps,
)

__version__ = "0.1.0"
