"""Congruence classes on N^q cut out by pure-difference binomials.

A move set ``W`` (columns of an integer matrix M) makes ``N^q`` into a graph
with an edge ``u -- v`` whenever ``u - v`` is plus or minus a move; the
connected components are the congruence classes of the ideal
``<t^{w+} - t^{w-}>``. Optionally a monomial ideal K is adjoined, in which
case every component that meets K collapses into a single monomial class.

Class exploration terminates without a degree bound: a finite class is
exhausted, and an infinite one eventually contains two comparable points
(Dickson's lemma), which in turn proves the class infinite because
``u ~ v`` with ``u = v + w`` forces ``v + k w`` into the class for all k.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

from . import _explore_py
from .lattice import IntMat, det, is_mixed_vector

Point = tuple[int, ...]

DEFAULT_NODE_CAP = 10**6

_fast_explore = None
if os.environ.get("BINODEC_PURE_PYTHON") != "1":
    try:
        from ._explore import explore as _fast_explore
    except ImportError:  # extension not built
        _fast_explore = None

KERNEL = "compiled" if _fast_explore is not None else "python"


def _kernel(gamma, moves, kgens, cap):
    if _fast_explore is not None:
        try:
            return _fast_explore(gamma, moves, kgens, cap)
        except OverflowError:  # coordinates beyond int64 or q > 62
            pass
    return _explore_py.explore(gamma, moves, kgens, cap)


class CongruenceError(ValueError):
    code = "congruence.error"


class IncompleteCatalogError(CongruenceError):
    code = "congruence.incomplete"

    def __init__(self, msg, certificate=None):
        super().__init__(msg)
        self.certificate = certificate


def canonical_key(p: Point) -> tuple[int, Point]:
    """Total degree first, then lexicographic."""
    return (sum(p), p)


def dominates(u: Sequence[int], v: Sequence[int]) -> bool:
    """``u >= v`` componentwise."""
    return all(a >= b for a, b in zip(u, v))


def points_of_degree(q: int, d: int) -> Iterator[Point]:
    """All of N^q with coordinate sum d, in increasing lexicographic order."""
    if q == 0:
        if d == 0:
            yield ()
        return
    if q == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in points_of_degree(q - 1, d - first):
            yield (first,) + rest


# -- data --------------------------------------------------------------------

@dataclass(frozen=True)
class MoveSet:
    moves: tuple[Point, ...]
    dimension: int

    def __iter__(self):
        return iter(self.moves)

    def __len__(self):
        return len(self.moves)

    def all_mixed(self) -> bool:
        return all(is_mixed_vector(w) for w in self.moves)


@dataclass(frozen=True)
class MonomialIdealSet:
    """Monomial ideal of N^q given by its minimal generators (an antichain)."""

    generators: tuple[Point, ...]
    dimension: int

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], dimension: int) -> "MonomialIdealSet":
        pts = sorted({tuple(int(x) for x in g) for g in gens}, key=canonical_key)
        for g in pts:
            if len(g) != dimension or min(g, default=0) < 0:
                raise ValueError(f"bad generator {g}")
        minimal: list[Point] = []
        for g in pts:  # canonical order puts divisors first
            if not any(dominates(g, h) for h in minimal):
                minimal.append(g)
        return cls(tuple(minimal), dimension)

    @classmethod
    def variable_powers(cls, dimension: int, e: int) -> "MonomialIdealSet":
        if e < 1:
            raise ValueError("power must be positive")
        return cls.from_generators(
            [tuple(e if i == j else 0 for i in range(dimension)) for j in range(dimension)], dimension
        )

    def __contains__(self, u: Sequence[int]) -> bool:
        return any(dominates(u, g) for g in self.generators)

    def __len__(self):
        return len(self.generators)

    def is_antichain(self) -> bool:
        gs = self.generators
        return all(not dominates(a, b) for a in gs for b in gs if a != b)

    def contains_variable_powers(self) -> bool:
        q = self.dimension
        return all(any(sum(g) == g[j] for g in self.generators) for j in range(q))


@dataclass(frozen=True)
class Bounded:
    elements: tuple[Point, ...]

    @property
    def representative(self) -> Point:
        return self.elements[0]


@dataclass(frozen=True)
class UnboundedWitness:
    """Two points of one class with ``u - v`` nonzero and nonnegative.

    ``path_u`` and ``path_v`` are move paths from the explored base point.
    """

    u: Point
    v: Point
    path_u: tuple[Point, ...]
    path_v: tuple[Point, ...]
    visited: int


@dataclass(frozen=True)
class MonomialClass:
    point: Point
    path: tuple[Point, ...]


@dataclass(frozen=True)
class BudgetExceeded:
    visited: int
    frontier: int


ClassReport = Union[Bounded, UnboundedWitness, MonomialClass, BudgetExceeded]


@dataclass(frozen=True)
class CompleteAtDegree:
    degree: int


@dataclass(frozen=True)
class Incomplete:
    max_degree: int
    reason: str = "degree budget exhausted"


Certificate = Union[CompleteAtDegree, Incomplete]


@dataclass(frozen=True)
class BoundedClassCatalog:
    moves: MoveSet
    K: MonomialIdealSet | None
    classes: tuple[Bounded, ...]
    certificate: Certificate
    _labels: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        labels = {p: i for i, c in enumerate(self.classes) for p in c.elements}
        object.__setattr__(self, "_labels", labels)

    @property
    def dimension(self) -> int:
        return self.moves.dimension

    @property
    def complete(self) -> bool:
        return isinstance(self.certificate, CompleteAtDegree)

    def label(self, u: Sequence[int]) -> int | None:
        """Index of the bounded class containing u; None if u is not in one."""
        return self._labels.get(tuple(u))

    def bounded_points(self) -> set[Point]:
        return set(self._labels)

    def sizes(self) -> list[int]:
        return [len(c.elements) for c in self.classes]


# -- operations ----------------------------------------------------------------

def moves_from_columns(M: IntMat) -> MoveSet:
    seen = []
    for j, col in enumerate(M.columns()):
        if not any(col):
            raise CongruenceError(f"column {j} of the move matrix is zero")
        if col not in seen:
            seen.append(col)
    return MoveSet(tuple(seen), M.nrows)


def neighbors(u: Sequence[int], moves: MoveSet) -> list[Point]:
    out = set()
    for w in moves:
        for s in (1, -1):
            v = tuple(a + s * b for a, b in zip(u, w))
            if min(v, default=0) >= 0:
                out.add(v)
    out.discard(tuple(u))
    return sorted(out, key=canonical_key)


def _path(order, parent, i) -> tuple[Point, ...]:
    path = []
    while i >= 0:
        path.append(order[i])
        i = parent[i]
    return tuple(reversed(path))


def explore_class(
    gamma: Sequence[int],
    moves: MoveSet,
    K: MonomialIdealSet | None = None,
    budget: int = DEFAULT_NODE_CAP,
) -> ClassReport:
    """Classify the congruence class of ``gamma``."""
    gamma = tuple(int(x) for x in gamma)
    if len(gamma) != moves.dimension or min(gamma, default=0) < 0:
        raise CongruenceError(f"{gamma} is not a point of N^{moves.dimension}")
    kgens = list(K.generators) if K is not None else []
    status, order, parent, a, b = _kernel(gamma, list(moves.moves), kgens, budget)
    if status == _explore_py.BOUNDED:
        return Bounded(tuple(sorted(order, key=canonical_key)))
    if status == _explore_py.WITNESS:
        return UnboundedWitness(order[a], order[b], _path(order, parent, a), _path(order, parent, b), len(order))
    if status == _explore_py.MONOMIAL:
        return MonomialClass(order[a], _path(order, parent, a))
    return BudgetExceeded(len(order), len(order) - a)


def bounded_catalog(
    moves: MoveSet,
    K: MonomialIdealSet | None = None,
    max_degree: int = 50,
    node_cap: int = DEFAULT_NODE_CAP,
) -> BoundedClassCatalog:
    """Enumerate bounded classes by increasing degree until a certificate degree.

    The points in infinite (or monomial) classes form an ideal of N^q, so a
    point dominating a known infinite point needs no exploration, and once a
    whole degree slice is infinite every higher degree is too.
    """
    q = moves.dimension
    infinite_seeds: list[Point] = []
    labels: dict[Point, int] = {}
    classes: list[Bounded] = []
    for d in range(max_degree + 1):
        all_infinite = True
        for p in points_of_degree(q, d):
            if p in labels:
                all_infinite = False
                continue
            if any(dominates(p, g) for g in infinite_seeds):
                continue
            rep = explore_class(p, moves, K, node_cap)
            if isinstance(rep, Bounded):
                for x in rep.elements:
                    labels[x] = len(classes)
                classes.append(rep)
                all_infinite = False
            elif isinstance(rep, BudgetExceeded):
                return BoundedClassCatalog(
                    moves, K, tuple(classes), Incomplete(d, f"node cap {node_cap} hit exploring {p}")
                )
            else:
                infinite_seeds.append(p)
        if all_infinite:
            return BoundedClassCatalog(moves, K, tuple(classes), CompleteAtDegree(d))
    return BoundedClassCatalog(moves, K, tuple(classes), Incomplete(max_degree))


def min_gens_unbounded_ideal(catalog: BoundedClassCatalog) -> MonomialIdealSet:
    """Minimal generators of the complement of the bounded points."""
    if not catalog.complete:
        raise IncompleteCatalogError("catalog has no completeness certificate", catalog.certificate)
    q = catalog.dimension
    bounded = catalog.bounded_points()
    units = [tuple(int(i == j) for i in range(q)) for j in range(q)]
    if not bounded:
        return MonomialIdealSet.from_generators([(0,) * q], q)
    candidates = {tuple(a + b for a, b in zip(s, e)) for s in bounded for e in units}
    gens = []
    for u in candidates:
        if u in bounded:
            continue
        if all(tuple(a - b for a, b in zip(u, e)) in bounded for e, x in zip(units, u) if x > 0):
            gens.append(u)
    ideal = MonomialIdealSet.from_generators(gens, q)
    assert len(ideal) == len(gens) and ideal.is_antichain()
    return ideal


def two_by_two_matrix(a: int, b: int, c: int, d: int) -> IntMat:
    return IntMat.from_rows([[a, b], [-c, -d]])


def representative_box(a: int, b: int, c: int, d: int) -> list[Point]:
    """Points of N^2 of which each bounded class of [[a, b], [-c, -d]] meets one."""
    s_max, t_max = (b, c) if a * d > b * c else (a, d)
    return [(s, t) for s in range(s_max) for t in range(t_max)]


def verify_representatives_2x2(a: int, b: int, c: int, d: int, max_degree: int = 200) -> bool:
    if min(a, b, c, d) <= 0:
        raise CongruenceError("a, b, c, d must be positive")
    if a * d == b * c:
        raise CongruenceError("ad = bc: the matrix is not invertible")
    M = two_by_two_matrix(a, b, c, d)
    assert det(M) != 0
    cat = bounded_catalog(moves_from_columns(M), max_degree=max_degree)
    if not cat.complete or len(cat.classes) != min(a * d, b * c):
        return False
    hits = [0] * len(cat.classes)
    for p in representative_box(a, b, c, d):
        lab = cat.label(p)
        if lab is None:
            return False
        hits[lab] += 1
    return all(h == 1 for h in hits)
