"""Worked-example models shipped with the package.

``fig1_*``: a T0-separated three-cycle and a non-T0 model bisimilar to it.
``fig2_*``: a topological two-point model and a non-topological four-cycle.
``sec4_*``: a pair separated by the reachable-from operator but related by a
modal bisimulation.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from slcs.bisim import PointRelation, load_relation
from slcs.model import QDModel, load_model

MODELS = ("fig1_m1", "fig1_m2", "fig2_mtop", "fig2_msq", "sec4_m1", "sec4_m2")

# relation name -> (left model, right model)
RELATIONS = {
    "fig1_t0_relation": ("fig1_m1", "fig1_m2"),
    "fig2_relation": ("fig2_mtop", "fig2_msq"),
    "sec4_relation": ("sec4_m1", "sec4_m2"),
}


def fixture_path(name: str) -> Path:
    if name not in MODELS and name not in RELATIONS:
        raise KeyError(f"unknown fixture {name!r}")
    return Path(str(resources.files("slcs") / "fixtures" / f"{name}.json"))


def load(name: str) -> QDModel:
    if name not in MODELS:
        raise KeyError(f"unknown model fixture {name!r}")
    return load_model(fixture_path(name))


def load_rel(name: str) -> PointRelation:
    left, right = RELATIONS[name]
    return load_relation(fixture_path(name), load(left), load(right))
