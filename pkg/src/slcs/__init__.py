"""Model checking and bisimulation for SLCS on finite quasi-discrete models."""

from slcs.bisim import (
    LiftedPathMatch,
    PointRelation,
    bisimilar,
    coarsest_bisimulation,
    coarsest_partition,
    is_converse_bisimulation,
    is_modal_bisimulation,
    lift_path_anchored,
    lift_path_forward,
    verify_path_preserving_on_walks,
)
from slcs.checker import Walk, models, oracle_sat_set, sat_set
from slcs.logic import desugar, parse, render
from slcs.model import Partition, QDModel, load_model, quotient

__all__ = [
    "LiftedPathMatch",
    "Partition",
    "PointRelation",
    "QDModel",
    "Walk",
    "bisimilar",
    "coarsest_bisimulation",
    "coarsest_partition",
    "desugar",
    "is_converse_bisimulation",
    "is_modal_bisimulation",
    "lift_path_anchored",
    "lift_path_forward",
    "load_model",
    "models",
    "oracle_sat_set",
    "parse",
    "quotient",
    "render",
    "sat_set",
    "verify_path_preserving_on_walks",
]
