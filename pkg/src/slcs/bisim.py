"""Bisimulations between quasi-discrete models.

Two variants are computed and checked here: ``"modal"`` (forth/back over the
reflexive edge relation) and ``"converse"`` (additionally forth/back over its
inverse).  The converse variant is the one that preserves every SLCS formula;
the modal one loses the reachable-from operator.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterator, Literal, NamedTuple

from slcs.checker import Walk, walks
from slcs.model import (
    ModelError,
    ModelFormatError,
    Partition,
    QDModel,
    disjoint_union,
    min_nbhd,
    point_closure,
)

log = logging.getLogger(__name__)

Variant = Literal["modal", "converse"]
VARIANTS = ("modal", "converse")


class BisimError(ModelError):
    pass


class LiftingError(BisimError):
    pass


class NotABisimulation(LiftingError):
    pass


class UnrelatedStart(LiftingError):
    pass


class ModelTooLarge(BisimError):
    pass


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


@dataclass(frozen=True)
class PointRelation:
    left: QDModel
    right: QDModel
    pairs: frozenset[tuple[str, str]]

    def __post_init__(self):
        pairs = frozenset((a, b) for a, b in self.pairs)
        for a, b in pairs:
            self.left.require(a)
            self.right.require(b)
        object.__setattr__(self, "pairs", pairs)
        image: dict[str, list[str]] = {p: [] for p in self.left.points}
        preimage: dict[str, list[str]] = {p: [] for p in self.right.points}
        for a, b in pairs:
            image[a].append(b)
            preimage[b].append(a)
        object.__setattr__(self, "_image", {k: tuple(sorted(v)) for k, v in image.items()})
        object.__setattr__(self, "_preimage", {k: tuple(sorted(v)) for k, v in preimage.items()})

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __iter__(self) -> Iterator[tuple[str, str]]:
        # left model order, then right model order
        return iter(sorted(self.pairs, key=lambda e: (self.left.index(e[0]), self.right.index(e[1]))))

    def __len__(self):
        return len(self.pairs)

    @property
    def is_empty(self) -> bool:
        return not self.pairs

    def image(self, x: str) -> tuple[str, ...]:
        """Right points related to ``x``, sorted by id."""
        return self._image[self.left.require(x)]

    def preimage(self, y: str) -> tuple[str, ...]:
        return self._preimage[self.right.require(y)]

    def inverse(self) -> PointRelation:
        return PointRelation(self.right, self.left, frozenset((b, a) for a, b in self.pairs))

    def union(self, other: PointRelation) -> PointRelation:
        if other.left != self.left or other.right != self.right:
            raise BisimError("relations are over different model pairs")
        return PointRelation(self.left, self.right, self.pairs | other.pairs)


@dataclass(frozen=True)
class Violation:
    condition: str
    pair: tuple[str, str]
    witness: str
    detail: str

    def __str__(self):
        return f"{self.condition} fails at {self.pair}: {self.detail}"


def _first_violation(z: PointRelation, conditions) -> Violation | None:
    m1, m2 = z.left, z.right
    for x1, x2 in z:
        if m1.props(x1) != m2.props(x2):
            return Violation(
                "atomic",
                (x1, x2),
                x1,
                f"valuations differ: {sorted(m1.props(x1))} vs {sorted(m2.props(x2))}",
            )
        for name, side, nbhd in conditions:
            if side == "left":
                ours, theirs, rel = nbhd(m1, x1), nbhd(m2, x2), z.image
            else:
                ours, theirs, rel = nbhd(m2, x2), nbhd(m1, x1), z.preimage
            for y in sorted(ours):
                if not set(rel(y)) & theirs:
                    return Violation(name, (x1, x2), y, f"{y!r} has no related counterpart")
    return None


_MODAL_CONDITIONS = (
    ("forth", "left", min_nbhd),
    ("back", "right", min_nbhd),
)
_CONVERSE_CONDITIONS = _MODAL_CONDITIONS + (
    ("converse-forth", "left", point_closure),
    ("converse-back", "right", point_closure),
)


def find_modal_violation(z: PointRelation) -> Violation | None:
    return _first_violation(z, _MODAL_CONDITIONS)


def find_converse_violation(z: PointRelation) -> Violation | None:
    return _first_violation(z, _CONVERSE_CONDITIONS)


def is_modal_bisimulation(z: PointRelation) -> bool:
    return find_modal_violation(z) is None


def is_converse_bisimulation(z: PointRelation) -> bool:
    return find_converse_violation(z) is None


def find_violation(z: PointRelation, variant: Variant) -> Violation | None:
    _check_variant(variant)
    return find_modal_violation(z) if variant == "modal" else find_converse_violation(z)


def is_bisimulation(z: PointRelation, variant: Variant) -> bool:
    return find_violation(z, variant) is None


def _neighbourhoods(m: QDModel, x: str) -> list[frozenset[str]]:
    """Every superset of the minimal neighbourhood of ``x``."""
    base = min_nbhd(m, x)
    rest = [p for p in m.points if p not in base]
    return [
        base | frozenset(extra)
        for k in range(len(rest) + 1)
        for extra in itertools.combinations(rest, k)
    ]


def is_nbhd_bisimulation_exhaustive(z: PointRelation, limit: int = 6) -> bool:
    """Check the neighbourhood conditions quantifying over all neighbourhoods.

    Exponential in model size, so refused above ``limit`` points per model.
    """
    for m in (z.left, z.right):
        if len(m) > limit:
            raise ModelTooLarge(f"exhaustive check limited to {limit} points, got {len(m)}")
    rel = z.pairs

    def matched(n_from, n_to, flip):
        if flip:
            return all(any((a, b) in rel for a in n_to) for b in n_from)
        return all(any((a, b) in rel for b in n_to) for a in n_from)

    for x1, x2 in z:
        if z.left.props(x1) != z.right.props(x2):
            return False
        nb1 = _neighbourhoods(z.left, x1)
        nb2 = _neighbourhoods(z.right, x2)
        # forth: every N2 has an N1 all of whose points relate into N2
        if not all(any(matched(n1, n2, False) for n1 in nb1) for n2 in nb2):
            return False
        # back: every N1 has an N2 all of whose points relate into N1
        if not all(any(matched(n2, n1, True) for n2 in nb2) for n1 in nb1):
            return False
    return True


# Coarsest bisimulations


def coarsest_partition(m: QDModel, variant: Variant = "converse") -> Partition:
    """Coarsest stable partition of ``m`` refining the valuation classes.

    Blocks are split until points in a block see the same set of blocks in
    their minimal neighbourhood (and, for ``"converse"``, in their closure).
    """
    _check_variant(variant)
    block = _renumber(m, {p: m.props(p) for p in m.points})
    count = len(set(block.values()))
    while True:
        sig = {}
        for x in m.points:
            s = (block[x], frozenset(block[y] for y in min_nbhd(m, x)))
            if variant == "converse":
                s += (frozenset(block[y] for y in point_closure(m, x)),)
            sig[x] = s
        block = _renumber(m, sig)
        new_count = len(set(block.values()))
        if new_count == count:
            break
        count = new_count
    groups: dict[int, list[str]] = {}
    for p in m.points:
        groups.setdefault(block[p], []).append(p)
    return Partition(m, tuple(tuple(g) for g in groups.values()))


def _renumber(m: QDModel, keys: dict) -> dict[str, int]:
    ids: dict[Any, int] = {}
    return {p: ids.setdefault(keys[p], len(ids)) for p in m.points}


class Coarsest(NamedTuple):
    partition: Partition
    relation: PointRelation


def coarsest_bisimulation(m1: QDModel, m2: QDModel, variant: Variant = "converse") -> Coarsest:
    """Largest bisimulation between ``m1`` and ``m2``.

    The partition lives on ``disjoint_union(m1, m2)`` (ids tagged ``L:``/``R:``);
    the relation holds the cross-model pairs sharing a block.
    """
    union = disjoint_union(m1, m2)
    part = coarsest_partition(union, variant)
    pairs = set()
    for b in part.blocks:
        lefts = [p[2:] for p in b if p.startswith("L:")]
        rights = [p[2:] for p in b if p.startswith("R:")]
        pairs.update(itertools.product(lefts, rights))
    return Coarsest(part, PointRelation(m1, m2, frozenset(pairs)))


def bisimilar(m1: QDModel, x1: str, m2: QDModel, x2: str, variant: Variant = "converse") -> bool:
    m1.require(x1)
    m2.require(x2)
    return (x1, x2) in coarsest_bisimulation(m1, m2, variant).relation


# Path lifting


@dataclass(frozen=True)
class LiftedPathMatch:
    """A walk and its lifting across ``relation``, related index by index."""

    source: Walk
    lifted: Walk
    relation: PointRelation
    anchor: int = 0

    def is_valid(self) -> bool:
        try:
            # Walk() re-checks the edge steps
            Walk(self.source.model, self.source.seq)
            Walk(self.lifted.model, self.lifted.seq)
        except ModelError:
            return False
        return (
            self.source.model == self.relation.left
            and self.lifted.model == self.relation.right
            and len(self.source) == len(self.lifted)
            and 0 <= self.anchor < len(self.source)
            and all(pair in self.relation for pair in zip(self.source, self.lifted))
        )


def _source_checks(z: PointRelation, source: Walk, n: int, x2: str) -> None:
    if source.model != z.left:
        raise BisimError("source walk must live in the relation's left model")
    if not 0 <= n < len(source):
        raise IndexError(f"anchor {n} outside walk of length {len(source)}")
    z.right.require(x2)
    if (source[n], x2) not in z:
        raise UnrelatedStart(f"{source[n]!r} and {x2!r} are not related")


def _lift_forward_from(z: PointRelation, source: Walk, q: list[str], start: int) -> None:
    for k in range(start, len(source) - 1):
        nxt = source[k + 1]
        options = sorted(y for y in min_nbhd(z.right, q[k]) if (nxt, y) in z)
        if not options:
            raise NotABisimulation(
                f"forth step fails: no successor of {q[k]!r} is related to {nxt!r}"
            )
        q.append(options[0])


def lift_path_forward(z: PointRelation, source: Walk, x2: str) -> LiftedPathMatch:
    """Lift ``source`` step by step from ``x2`` using the forth condition.

    Ties are broken by the lowest point id.  Only steps actually taken need a
    witness, so a relation that is not a full bisimulation may still lift some
    walks.
    """
    _source_checks(z, source, 0, x2)
    q = [x2]
    _lift_forward_from(z, source, q, 0)
    return LiftedPathMatch(source, Walk(z.right, q), z, 0)


def lift_path_anchored(z: PointRelation, source: Walk, n: int, x2: str) -> LiftedPathMatch:
    """Lift ``source`` so that index ``n`` lands on ``x2``.

    Indices after ``n`` use forth steps, indices before it converse steps
    (a predecessor, or the point itself, related to the previous source point).
    """
    _source_checks(z, source, n, x2)
    before = [x2]
    for k in range(n, 0, -1):
        prev = source[k - 1]
        options = sorted(y for y in point_closure(z.right, before[-1]) if (prev, y) in z)
        if not options:
            raise NotABisimulation(
                f"converse step fails: no predecessor of {before[-1]!r} is related to {prev!r}"
            )
        before.append(options[0])
    q = before[::-1]
    _lift_forward_from(z, source, q, n)
    return LiftedPathMatch(source, Walk(z.right, q), z, n)


# Bounded check of the path-preserving conditions


@dataclass(frozen=True)
class PathViolation:
    condition: int
    detail: str
    walk: tuple[str, ...] | None = None
    index: int | None = None

    def __str__(self):
        where = ""
        if self.walk is not None:
            where = f" (walk {' '.join(self.walk)}, index {self.index})"
        return f"condition {self.condition}: {self.detail}{where}"


def _interval_matched(z: PointRelation, p: Walk, n: int, q: Walk, m: int) -> bool:
    """Every interior index of q up to m has a related interior index of p up to n."""
    return all(any((p[kp], q[kq]) in z for kp in range(1, n)) for kq in range(1, m))


def _search_witness(z: PointRelation, p: Walk, n: int, max_len: int, anchored: bool, x2: str):
    """Exhaustive search for (q, m) when the constructive lift does not apply."""
    if anchored:
        starts = [y for y in z.image(p[0])]
    else:
        starts = [x2]
    for s in starts:
        for q in walks(z.right, max_len, start=s):
            for m in range(len(q)):
                if anchored:
                    ok = q[m] == x2
                else:
                    ok = (p[n], q[m]) in z
                if ok and _interval_matched(z, p, n, q, m):
                    if m == 0:
                        log.info("witness for %s at index %d uses m = 0", p.seq, n)
                    return q, m
    return None


def _check_direction(z: PointRelation, max_len: int, numbers: tuple[int, int, int]):
    forth_no, anchored_no, interval_no = numbers
    m1 = z.left
    matches = []

    for x1, x2 in z:
        for p in walks(m1, max_len, start=x1):
            try:
                q = lift_path_forward(z, p, x2).lifted
            except LiftingError:
                q = None
            for n in range(1, len(p)):
                if q is not None and (p[n], q[n]) in z:
                    matches.append((p, n, q, n))
                    continue
                found = _search_witness(z, p, n, max_len, anchored=False, x2=x2)
                if found is None:
                    return PathViolation(
                        forth_no, f"no path from {x2!r} matches up to index {n}", p.seq, n
                    ), None
                matches.append((p, n) + found)

    for p in walks(m1, max_len):
        for n in range(1, len(p)):
            for x2 in z.image(p[n]):
                try:
                    q = lift_path_anchored(z, p, n, x2).lifted
                except LiftingError:
                    q = None
                if q is not None:
                    matches.append((p, n, q, n))
                    continue
                found = _search_witness(z, p, n, max_len, anchored=True, x2=x2)
                if found is None:
                    return PathViolation(
                        anchored_no,
                        f"no path reaching {x2!r} from a point related to {p[0]!r}",
                        p.seq,
                        n,
                    ), None
                matches.append((p, n) + found)

    for p, n, q, m in matches:
        if not _interval_matched(z, p, n, q, m):
            return PathViolation(interval_no, "interval points are not matched", p.seq, n), None
    return None, matches


def find_path_preserving_violation(z: PointRelation, max_len: int) -> PathViolation | None:
    """First of the seven path-preserving conditions violated on walks of up to ``max_len`` points.

    The path relations are those induced by lifting: a walk at index ``n`` is
    paired with its lifting at the same index.  When no lift exists a bounded
    search for any matching walk is tried before reporting a violation.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be positive, got {max_len}")
    if z.is_empty:
        return PathViolation(0, "the point relation must be non-empty")
    v = find_modal_violation(z)
    if v is not None:
        return PathViolation(1, f"not a neighbourhood bisimulation: {v}")
    violation, _ = _check_direction(z, max_len, (2, 3, 4))
    if violation is not None:
        return violation
    violation, _ = _check_direction(z.inverse(), max_len, (5, 6, 7))
    return violation


def verify_path_preserving_on_walks(z: PointRelation, max_len: int) -> bool:
    return find_path_preserving_violation(z, max_len) is None


# Relation JSON


def relation_from_dict(data: Any, left: QDModel, right: QDModel) -> PointRelation:
    if not isinstance(data, dict):
        raise ModelFormatError("relation JSON must be an object")
    unknown = set(data) - {"pairs"}
    if unknown:
        raise ModelFormatError(f"unknown keys in relation JSON: {sorted(unknown)}")
    pairs = data.get("pairs")
    if not isinstance(pairs, list):
        raise ModelFormatError("'pairs' must be an array")
    out = []
    for e in pairs:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(p, str) for p in e)):
            raise ModelFormatError(f"pair must be a two-element string array, got {e!r}")
        out.append(tuple(e))
    return PointRelation(left, right, frozenset(out))


def relation_to_dict(z: PointRelation) -> dict:
    return {"pairs": [list(p) for p in z]}


def load_relation(path: str | Path, left: QDModel, right: QDModel) -> PointRelation:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"{path}: malformed JSON: {exc}") from exc
    return relation_from_dict(data, left, right)
