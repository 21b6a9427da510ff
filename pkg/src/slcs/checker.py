"""SLCS satisfaction on quasi-discrete models.

:func:`sat_set` labels points by worklist fixpoints.  :func:`oracle_sat_set`
evaluates the path modalities by brute-force enumeration of walks and is kept
independent of it for cross-checking.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from slcs.logic import (
    And,
    AnyFormula,
    Atom,
    Formula,
    Near,
    Not,
    Prop,
    Reach,
    Top,
    as_formula,
    desugar,
)
from slcs.model import ModelError, QDModel, closure, min_nbhd


class InvalidWalk(ModelError, ValueError):
    pass


@dataclass(frozen=True)
class Walk:
    """A finite walk standing for the infinite path that stalls on its last point.

    ``walk[i]`` for ``i`` beyond the end returns the last point.
    """

    model: QDModel
    seq: tuple[str, ...]

    def __post_init__(self):
        seq = tuple(self.seq)
        object.__setattr__(self, "seq", seq)
        if not seq:
            raise InvalidWalk("walk must contain at least one point")
        for p in seq:
            self.model.require(p)
        for a, b in zip(seq, seq[1:]):
            if not self.model.related(a, b):
                raise InvalidWalk(f"no edge {a!r} -> {b!r}")

    def __len__(self):
        return len(self.seq)

    def __getitem__(self, i: int) -> str:
        if i < 0:
            raise IndexError("walk indices are natural numbers")
        return self.seq[min(i, len(self.seq) - 1)]

    def __iter__(self):
        return iter(self.seq)

    def __repr__(self):
        return f"Walk({list(self.seq)})"


def walks(m: QDModel, max_len: int, start: str | None = None) -> Iterator[Walk]:
    """All walks with at most ``max_len`` points, self-steps included."""
    for seq in _walk_seqs(m, max_len, start):
        yield Walk(m, seq)


def _walk_seqs(m: QDModel, max_len: int, start: str | None = None) -> Iterator[tuple[str, ...]]:
    starts = m.points if start is None else (m.require(start),)
    stack = [(p,) for p in reversed(starts)]
    while stack:
        seq = stack.pop()
        yield seq
        if len(seq) < max_len:
            last = seq[-1]
            for y in reversed((last, *m.successors(last))):
                stack.append(seq + (y,))


def sat_set(m: QDModel, f: AnyFormula) -> frozenset[str]:
    """The points of ``m`` satisfying ``f``."""
    return _eval(m, desugar(as_formula(f)))


def models(m: QDModel, x: str, f: AnyFormula) -> bool:
    return m.require(x) in sat_set(m, f)


def _eval(m: QDModel, f: Formula) -> frozenset[str]:
    if isinstance(f, Top):
        return frozenset(m.points)
    if isinstance(f, Atom):
        return frozenset(p for p in m.points if f.name in m.props(p))
    if isinstance(f, Not):
        return frozenset(m.points) - _eval(m, f.arg)
    if isinstance(f, And):
        return _eval(m, f.left) & _eval(m, f.right)
    if isinstance(f, Near):
        target = _eval(m, f.arg)
        return frozenset(x for x in m.points if min_nbhd(m, x) & target)
    if isinstance(f, Reach):
        return _grow(m, _eval(m, f.right), _eval(m, f.left), m.successors)
    if isinstance(f, Prop):
        return _grow(m, _eval(m, f.right), _eval(m, f.left), m.predecessors)
    raise TypeError(f"unexpected formula node {f!r}")


def _grow(m: QDModel, seed: frozenset[str], guard: frozenset[str], step) -> frozenset[str]:
    """Least superset of ``seed`` closed under ``step`` into ``guard`` points."""
    out = set(seed)
    queue = deque(m.ordered(seed))
    while queue:
        w = queue.popleft()
        for x in step(w):
            if x in guard and x not in out:
                out.add(x)
                queue.append(x)
    return frozenset(out)


class InvalidBound(ValueError):
    pass


def oracle_sat_set(m: QDModel, f: AnyFormula, bound: int) -> frozenset[str]:
    """Satisfaction with path modalities decided over all walks of up to ``bound`` points.

    Each walk is read as its stalling extension; the path index ``n`` ranges one
    step past the end of the walk so the stalled position is also quantified.
    Complete once ``bound >= len(m.points)``.
    """
    if bound < 1:
        raise InvalidBound(f"bound must be positive, got {bound}")
    return _oracle(m, desugar(as_formula(f)), bound, {})


def _oracle(m: QDModel, f: Formula, bound: int, memo: dict) -> frozenset[str]:
    if f in memo:
        return memo[f]
    pts = frozenset(m.points)
    if isinstance(f, Top):
        out = pts
    elif isinstance(f, Atom):
        out = frozenset(p for p in m.points if f.name in m.props(p))
    elif isinstance(f, Not):
        out = pts - _oracle(m, f.arg, bound, memo)
    elif isinstance(f, And):
        out = _oracle(m, f.left, bound, memo) & _oracle(m, f.right, bound, memo)
    elif isinstance(f, Near):
        # x lies in the closure of the target set
        out = closure(m, _oracle(m, f.arg, bound, memo))
    elif isinstance(f, (Reach, Prop)):
        phi = _oracle(m, f.left, bound, memo)
        psi = _oracle(m, f.right, bound, memo)
        out = set()
        for seq in _all_walks(m, bound):
            at = lambda i: seq[min(i, len(seq) - 1)]  # noqa: E731
            for n in range(len(seq) + 1):
                if isinstance(f, Reach):
                    # path starts at a psi-point, reaches x at n, phi on (0, n]
                    if at(0) in psi and all(at(i) in phi for i in range(1, n + 1)):
                        out.add(at(n))
                else:
                    # path from x reaches a psi-point at n, phi on [0, n)
                    if at(n) in psi and all(at(i) in phi for i in range(n)):
                        out.add(at(0))
        out = frozenset(out)
    else:
        raise TypeError(f"unexpected formula node {f!r}")
    memo[f] = out
    return out


@lru_cache(maxsize=256)
def _all_walks(m: QDModel, max_len: int) -> tuple[tuple[str, ...], ...]:
    return tuple(_walk_seqs(m, max_len))
