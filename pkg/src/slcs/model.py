"""Finite quasi-discrete neighbourhood models.

A model is a directed graph whose edge relation is implicitly reflexive: the
minimal neighbourhood of a point is the point itself plus its successors.
Self-loops are therefore never stored.
"""

from __future__ import annotations

import itertools
import json
import logging
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

log = logging.getLogger(__name__)

PointSet = frozenset


class ModelError(Exception):
    pass


class PointNotInModel(ModelError, KeyError):
    def __init__(self, point: str):
        super().__init__(point)
        self.point = point

    def __str__(self) -> str:
        return f"point {self.point!r} is not in the model"


class ModelFormatError(ModelError, ValueError):
    pass


class InvalidPartition(ModelError, ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QDModel:
    """Immutable quasi-discrete model.

    ``points`` keeps insertion order, which is the iteration order used by every
    operation that produces ordered output.
    """

    points: tuple[str, ...]
    edges: frozenset[tuple[str, str]] = frozenset()
    valuation: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        points = tuple(self.points)
        if len(set(points)) != len(points):
            dupes = sorted({p for p in points if points.count(p) > 1})
            raise ModelFormatError(f"duplicate point ids: {dupes}")
        for p in points:
            if not isinstance(p, str) or not p:
                raise ModelFormatError(f"point ids must be non-empty strings, got {p!r}")
        known = set(points)
        edges = set()
        for edge in self.edges:
            x, y = edge
            for end in (x, y):
                if end not in known:
                    raise PointNotInModel(end)
            if x == y:
                log.warning("dropping stored self-loop on %r (reflexivity is implicit)", x)
                continue
            edges.add((x, y))
        valuation = {}
        for p, props in dict(self.valuation).items():
            if p not in known:
                raise PointNotInModel(p)
            valuation[p] = frozenset(props)
        valuation = {p: valuation.get(p, frozenset()) for p in points}

        succ: dict[str, list[str]] = {p: [] for p in points}
        pred: dict[str, list[str]] = {p: [] for p in points}
        order = {p: i for i, p in enumerate(points)}
        for x, y in sorted(edges, key=lambda e: (order[e[0]], order[e[1]])):
            succ[x].append(y)
            pred[y].append(x)

        object.__setattr__(self, "points", points)
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_succ", {p: tuple(v) for p, v in succ.items()})
        object.__setattr__(self, "_pred", {p: tuple(v) for p, v in pred.items()})

    def __eq__(self, other):
        if not isinstance(other, QDModel):
            return NotImplemented
        return (
            self.points == other.points
            and self.edges == other.edges
            and self.valuation == other.valuation
        )

    def __hash__(self):
        return hash((self.points, self.edges))

    def __len__(self):
        return len(self.points)

    def __contains__(self, point):
        return point in self._order

    def __repr__(self):
        return f"QDModel(points={len(self.points)}, edges={len(self.edges)})"

    def require(self, point: str) -> str:
        if point not in self._order:
            raise PointNotInModel(point)
        return point

    def require_all(self, points: Iterable[str]) -> frozenset[str]:
        s = frozenset(points)
        for p in s:
            self.require(p)
        return s

    def index(self, point: str) -> int:
        return self._order[self.require(point)]

    def successors(self, x: str) -> tuple[str, ...]:
        """Stored successors of ``x``, excluding ``x`` itself."""
        return self._succ[self.require(x)]

    def predecessors(self, x: str) -> tuple[str, ...]:
        return self._pred[self.require(x)]

    def props(self, x: str) -> frozenset[str]:
        return self.valuation[self.require(x)]

    def related(self, x: str, y: str) -> bool:
        """Membership in the reflexive edge relation R."""
        return x == y or (x, y) in self.edges

    def ordered(self, points: Iterable[str]) -> list[str]:
        """Sort ``points`` by model insertion order."""
        return sorted(points, key=self.index)

    def atoms(self) -> frozenset[str]:
        return frozenset().union(*self.valuation.values()) if self.points else frozenset()


def min_nbhd(m: QDModel, x: str) -> frozenset[str]:
    return frozenset((x, *m.successors(x)))


def closure(m: QDModel, a: Iterable[str]) -> frozenset[str]:
    a = m.require_all(a)
    out = set(a)
    for y in a:
        out.update(m.predecessors(y))
    return frozenset(out)


def point_closure(m: QDModel, x: str) -> frozenset[str]:
    """C({x}): the points whose minimal neighbourhood contains ``x``."""
    return frozenset((x, *m.predecessors(x)))


def interior(m: QDModel, a: Iterable[str]) -> frozenset[str]:
    a = m.require_all(a)
    return frozenset(x for x in a if min_nbhd(m, x) <= a)


def complement(m: QDModel, a: Iterable[str]) -> frozenset[str]:
    return frozenset(m.points) - m.require_all(a)


def semi_separated(m: QDModel, u: Iterable[str], v: Iterable[str]) -> bool:
    u, v = m.require_all(u), m.require_all(v)
    return not (closure(m, u) & v) and not (u & closure(m, v))


def is_connected(m: QDModel) -> bool:
    """Connectivity of the symmetrised edge relation.

    On quasi-discrete models two sets are semi-separated exactly when no edge
    runs between them in either direction, so this agrees with the bipartition
    definition (see :func:`is_connected_bruteforce`).
    """
    if not m.points:
        return True
    start = m.points[0]
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in itertools.chain(m.successors(x), m.predecessors(x)):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(m.points)


def is_connected_bruteforce(m: QDModel, limit: int = 16) -> bool:
    """Search every bipartition into two non-empty semi-separated sets."""
    n = len(m.points)
    if n > limit:
        raise ModelError(f"bipartition search limited to {limit} points, model has {n}")
    if n < 2:
        return True
    rest = m.points[1:]
    # pin points[0] into u so each bipartition is seen once
    for mask in range(2 ** (n - 1) - 1):
        u = {m.points[0]} | {p for i, p in enumerate(rest) if mask >> i & 1}
        v = set(m.points) - u
        if semi_separated(m, u, v):
            return False
    return True


@dataclass(frozen=True)
class SeparationReport:
    t0: bool
    t1: bool


def separation_report(m: QDModel) -> SeparationReport:
    t0 = not any((y, x) in m.edges for (x, y) in m.edges)
    return SeparationReport(t0=t0, t1=not m.edges)


def is_topological(m: QDModel) -> bool:
    """True iff the reflexive edge relation is transitive."""
    for x in m.points:
        for y in m.successors(x):
            for z in m.successors(y):
                if not m.related(x, z):
                    return False
    return True


def disjoint_union(m1: QDModel, m2: QDModel) -> QDModel:
    def tag(prefix, m):
        return (
            [prefix + p for p in m.points],
            [(prefix + x, prefix + y) for x, y in m.edges],
            {prefix + p: v for p, v in m.valuation.items()},
        )

    p1, e1, v1 = tag("L:", m1)
    p2, e2, v2 = tag("R:", m2)
    return QDModel(tuple(p1 + p2), frozenset(e1 + e2), {**v1, **v2})


@dataclass(frozen=True)
class Partition:
    """Disjoint, covering blocks over the points of ``model``."""

    model: QDModel
    blocks: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(self.model.ordered(b)) for b in self.blocks)
        seen: set[str] = set()
        for b in blocks:
            if not b:
                raise InvalidPartition("partition blocks must be non-empty")
            for p in b:
                self.model.require(p)
                if p in seen:
                    raise InvalidPartition(f"point {p!r} occurs in more than one block")
                seen.add(p)
        missing = set(self.model.points) - seen
        if missing:
            raise InvalidPartition(f"points not covered: {self.model.ordered(missing)}")
        blocks = tuple(sorted(blocks, key=lambda b: self.model.index(b[0])))
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "_block_of", {p: i for i, b in enumerate(blocks) for p in b})

    def block_index(self, x: str) -> int:
        return self._block_of[self.model.require(x)]

    def block_of(self, x: str) -> tuple[str, ...]:
        return self.blocks[self.block_index(x)]

    def same_block(self, x: str, y: str) -> bool:
        return self.block_index(x) == self.block_index(y)

    def __len__(self):
        return len(self.blocks)

    @classmethod
    def discrete(cls, m: QDModel) -> Partition:
        return cls(m, tuple((p,) for p in m.points))


def quotient(m: QDModel, part: Partition | Iterable[Iterable[str]]) -> QDModel:
    """Collapse each block to a single point named after its first member."""
    if not isinstance(part, Partition):
        part = Partition(m, tuple(tuple(b) for b in part))
    elif part.model != m:
        raise InvalidPartition("partition is over a different model")
    rep = {}
    valuation = {}
    for block in part.blocks:
        props = {m.props(p) for p in block}
        if len(props) != 1:
            raise InvalidPartition(f"block {list(block)} has non-uniform valuation")
        for p in block:
            rep[p] = block[0]
        valuation[block[0]] = props.pop()
    edges = {(rep[x], rep[y]) for x, y in m.edges if rep[x] != rep[y]}
    return QDModel(tuple(b[0] for b in part.blocks), frozenset(edges), valuation)


def find_isomorphism(m1: QDModel, m2: QDModel) -> dict[str, str] | None:
    """Exhaustive search for a valuation- and edge-preserving bijection.

    Candidates are restricted to points with equal valuation and degree, which
    keeps the search tractable for the small models it is meant for.
    """
    if len(m1) != len(m2) or len(m1.edges) != len(m2.edges):
        return None

    def key(m, p):
        return (m.props(p), len(m.successors(p)), len(m.predecessors(p)))

    candidates = [[q for q in m2.points if key(m2, q) == key(m1, p)] for p in m1.points]
    for image in itertools.product(*candidates):
        if len(set(image)) != len(image):
            continue
        f = dict(zip(m1.points, image))
        if all((f[x], f[y]) in m2.edges for x, y in m1.edges):
            return f
    return None


def is_isomorphic(m1: QDModel, m2: QDModel) -> bool:
    return find_isomorphism(m1, m2) is not None


# JSON I/O

_MODEL_KEYS = {"points", "edges", "valuation"}


def model_from_dict(data: Any) -> QDModel:
    if not isinstance(data, dict):
        raise ModelFormatError("model JSON must be an object")
    unknown = set(data) - _MODEL_KEYS
    if unknown:
        raise ModelFormatError(f"unknown keys in model JSON: {sorted(unknown)}")
    if "points" not in data:
        raise ModelFormatError("model JSON lacks 'points'")
    points = data["points"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise ModelFormatError("'points' must be an array of strings")
    edges = []
    for e in data.get("edges", []):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(p, str) for p in e)):
            raise ModelFormatError(f"edge must be a two-element string array, got {e!r}")
        edges.append(tuple(e))
    valuation = data.get("valuation", {})
    if not isinstance(valuation, dict):
        raise ModelFormatError("'valuation' must be an object")
    for p, props in valuation.items():
        if not isinstance(props, list) or not all(isinstance(a, str) for a in props):
            raise ModelFormatError(f"valuation of {p!r} must be an array of strings")
    return QDModel(tuple(points), frozenset(edges), valuation)


def model_to_dict(m: QDModel) -> dict:
    edges = [[x, y] for x in m.points for y in m.successors(x)]
    valuation = {p: sorted(m.props(p)) for p in m.points if m.props(p)}
    return {"points": list(m.points), "edges": edges, "valuation": valuation}


def load_model(path: str | Path) -> QDModel:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"{path}: malformed JSON: {exc}") from exc
    return model_from_dict(data)


def dump_model(m: QDModel) -> str:
    return json.dumps(model_to_dict(m), indent=2, ensure_ascii=False) + "\n"


def save_model(m: QDModel, path: str | Path) -> None:
    Path(path).write_text(dump_model(m), encoding="utf-8")
