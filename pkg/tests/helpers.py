"""Random generators and brute-force oracles shared by the test modules.

The oracles here deliberately avoid the library's bisimulation code: they work
from the reflexive edge relation directly.
"""

from __future__ import annotations

import contextlib
import itertools
import random
import time

from hypothesis import strategies as st

from slcs.logic import (
    And,
    Atom,
    Bottom,
    Implies,
    Near,
    Not,
    Or,
    Prop,
    Reach,
    Surr,
    Top,
)
from slcs.model import QDModel

# Acceptance report

ACCEPTANCE: list[str] = []


@contextlib.contextmanager
def criterion(number: int, title: str):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({elapsed:.2f}s)"
        ACCEPTANCE.append(line)
        print(line)


# Random models


def random_model(rng: random.Random, n: int, atoms=("p0", "p1", "p2"), edge_prob=0.3, prefix="v") -> QDModel:
    points = tuple(f"{prefix}{i}" for i in range(n))
    edges = frozenset(
        (a, b) for a in points for b in points if a != b and rng.random() < edge_prob
    )
    valuation = {p: {a for a in atoms if rng.random() < 0.4} for p in points}
    return QDModel(points, edges, valuation)


def random_connected_model(rng: random.Random, n: int, **kw) -> QDModel:
    """A random model plus a random spanning tree of edges in random directions."""
    m = random_model(rng, n, **kw)
    edges = set(m.edges)
    pts = list(m.points)
    for i in range(1, n):
        j = rng.randrange(i)
        edges.add((pts[i], pts[j]) if rng.random() < 0.5 else (pts[j], pts[i]))
    return QDModel(m.points, frozenset(edges), m.valuation)


def expand_model(rng: random.Random, m: QDModel, prefix="w", max_copies=2) -> tuple[QDModel, dict[str, str]]:
    """Blow each point up into copies so that copy -> original is a converse bisimulation.

    Every stored edge x -> y becomes a set of copy edges in which each copy of x
    has some copy of y as successor and each copy of y some copy of x as
    predecessor.  Returns the new model and the copy -> original map.
    """
    copies = {x: [f"{prefix}{x}_{i}" for i in range(rng.randint(1, max_copies))] for x in m.points}
    origin = {c: x for x, cs in copies.items() for c in cs}
    edges = set()
    for x, y in m.edges:
        targets = {c: {rng.choice(copies[y])} for c in copies[x]}
        for cy in copies[y]:
            if not any(cy in t for t in targets.values()):
                targets[rng.choice(copies[x])].add(cy)
        for cx, ts in targets.items():
            edges.update((cx, t) for t in ts)
    for cs in copies.values():
        for a, b in itertools.permutations(cs, 2):
            if rng.random() < 0.3:
                edges.add((a, b))
    points = [c for x in m.points for c in copies[x]]
    rng.shuffle(points)
    valuation = {c: m.props(origin[c]) for c in points}
    return QDModel(tuple(points), frozenset(edges), valuation), origin


def perturb(rng: random.Random, m: QDModel) -> QDModel:
    """Toggle one random edge."""
    if len(m) < 2:
        return m
    a, b = rng.sample(m.points, 2)
    edges = set(m.edges) ^ {(a, b)}
    return QDModel(m.points, frozenset(edges), m.valuation)


def random_model_pair(rng: random.Random, max_points=8, atoms=("p0", "p1", "p2")) -> tuple[QDModel, QDModel]:
    """Pairs skewed towards having bisimilar points."""
    kind = rng.random()
    n1 = rng.randint(1, max(1, max_points // 2))
    m1 = random_model(rng, n1, atoms=atoms, edge_prob=rng.uniform(0.15, 0.5), prefix="a")
    if kind < 0.5:
        m2, _ = expand_model(rng, m1)
        if len(m2) > max_points:
            m2 = random_model(rng, max_points, atoms=atoms, prefix="b")
        if kind < 0.2:
            m2 = perturb(rng, m2)
    elif kind < 0.75:
        m2 = random_model(rng, rng.randint(1, max_points), atoms=atoms[:1], edge_prob=rng.uniform(0.15, 0.5), prefix="b")
        m1 = random_model(rng, rng.randint(1, max_points), atoms=atoms[:1], edge_prob=rng.uniform(0.15, 0.5), prefix="a")
    else:
        m2 = perturb(rng, QDModel(
            tuple("b" + p[1:] for p in m1.points),
            frozenset(("b" + x[1:], "b" + y[1:]) for x, y in m1.edges),
            {"b" + p[1:]: v for p, v in m1.valuation.items()},
        ))
    return m1, m2


@st.composite
def models(draw, min_points=1, max_points=5, atoms=("p", "q")):
    n = draw(st.integers(min_points, max_points))
    points = tuple(f"v{i}" for i in range(n))
    pairs = [(a, b) for a in points for b in points if a != b]
    edges = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    valuation = {p: draw(st.sets(st.sampled_from(atoms))) for p in points}
    return QDModel(points, frozenset(edges), valuation)


# Random formulas

ALL_BINARY = (And, Or, Implies, Reach, Prop, Surr)
CORE_BINARY = (And, Reach, Prop)


def random_formula(rng: random.Random, depth: int, atoms=("p0", "p1", "p2"), binary=ALL_BINARY, unary=(Not, Near), leaves=(Top, Bottom)):
    if depth == 0 or rng.random() < 0.25:
        if leaves and rng.random() < 0.15:
            return rng.choice(leaves)()
        return Atom(rng.choice(atoms))
    if rng.random() < 0.35:
        return rng.choice(unary)(random_formula(rng, depth - 1, atoms, binary, unary, leaves))
    kind = rng.choice(binary)
    return kind(
        random_formula(rng, depth - 1, atoms, binary, unary, leaves),
        random_formula(rng, depth - 1, atoms, binary, unary, leaves),
    )


def formulas(max_depth=3, atoms=("p", "q", "r")):
    leaf = st.one_of(st.sampled_from(atoms).map(Atom), st.just(Top()), st.just(Bottom()))

    def extend(sub):
        return st.one_of(
            st.builds(Not, sub),
            st.builds(Near, sub),
            *(st.builds(k, sub, sub) for k in ALL_BINARY),
        )

    return st.recursive(leaf, extend, max_leaves=2 ** max_depth)


# Bisimulation oracles over the reflexive edge relation


def _R(m: QDModel):
    return {(x, y) for x in m.points for y in m.points if x == y or (x, y) in m.edges}


def _neighbour_sets(r1, r2, x1, x2, variant):
    out = [({b for a, b in r1 if a == x1}, {b for a, b in r2 if a == x2})]
    if variant == "converse":
        out.append(({a for a, b in r1 if b == x1}, {a for a, b in r2 if b == x2}))
    return out


def _matched(rel, s1, s2) -> bool:
    return all(any((y1, y2) in rel for y2 in s2) for y1 in s1) and all(
        any((y1, y2) in rel for y1 in s1) for y2 in s2
    )


def oracle_is_bisimulation(m1: QDModel, m2: QDModel, rel, variant: str) -> bool:
    r1, r2 = _R(m1), _R(m2)
    rel = set(rel)
    for x1, x2 in rel:
        if m1.props(x1) != m2.props(x2):
            return False
        if not all(_matched(rel, s1, s2) for s1, s2 in _neighbour_sets(r1, r2, x1, x2, variant)):
            return False
    return True


def compatible_pairs(m1: QDModel, m2: QDModel):
    return [(a, b) for a in m1.points for b in m2.points if m1.props(a) == m2.props(b)]


def all_bisimulations(m1: QDModel, m2: QDModel, variant: str, limit=16):
    """Every bisimulation between m1 and m2, by subset enumeration.

    Pairs with different valuations can never occur, so only valuation-compatible
    pairs are enumerated.
    """
    cand = compatible_pairs(m1, m2)
    if len(cand) > limit:
        raise ValueError(f"{len(cand)} candidate pairs exceeds enumeration limit {limit}")
    for k in range(len(cand) + 1):
        for rel in itertools.combinations(cand, k):
            if oracle_is_bisimulation(m1, m2, rel, variant):
                yield frozenset(rel)


def largest_bisimulation_gfp(m1: QDModel, m2: QDModel, variant: str) -> frozenset:
    """Greatest fixpoint by deleting pairs that violate a condition."""
    r1, r2 = _R(m1), _R(m2)
    rel = set(compatible_pairs(m1, m2))
    changed = True
    while changed:
        changed = False
        for x1, x2 in sorted(rel):
            if not all(_matched(rel, s1, s2) for s1, s2 in _neighbour_sets(r1, r2, x1, x2, variant)):
                rel.discard((x1, x2))
                changed = True
    return frozenset(rel)
