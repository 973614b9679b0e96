"""Optimal weighted minimax k-step function fitting by prune and search."""
from .anchored import (
    AnchorSide,
    AnchorSpec,
    SplitSolution,
    anchored_j_step,
    doubly_anchored_two_step,
    eval_g_h,
    left_anchored_two_step,
    right_anchored_two_step,
)
from .core import (
    CostModel,
    DomainError,
    InstanceError,
    PartitionScheme,
    PointSet,
    Segment,
    StepFunction,
    WeightedPoint,
    bisectors,
    critical_points,
    point_cost,
    set_cost,
)
from .kstep import (
    Diagnostics,
    FeasibilityWitness,
    FitReport,
    equal_size_partition,
    feasibility_test,
    find_big_partition,
    k_step,
    prune_big,
)
from .one_center import (
    PairClassification,
    Side,
    classify_pairs,
    prune_one_sixth,
    side_of_critical,
    weighted_one_center,
)

__version__ = "0.1.0"
