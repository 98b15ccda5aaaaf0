"""Series solutions of the constant-coefficient system I(M).

Each binomial ``d^{w+} - d^{w-}`` is read as a differential operator. A
solution supported on one M-subgraph is built by walking the subgraph and
solving the two-term relation each edge imposes on the coefficients.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Sequence

from .congruence import (
    Bounded,
    BoundedClassCatalog,
    ClassReport,
    IncompleteCatalogError,
    MoveSet,
    UnboundedWitness,
    canonical_key,
    moves_from_columns,
    points_of_degree,
)
from .lattice import IntMat

Point = tuple[int, ...]


class CycleInconsistencyError(RuntimeError):
    """Two edge paths force different values on one coefficient.

    Cannot happen for a correct subgraph; raised as a soundness alarm.
    """

    code = "series.cycle_inconsistent"

    def __init__(self, cycle, values):
        super().__init__(f"inconsistent coefficients around cycle {cycle}: {values}")
        self.cycle = cycle
        self.values = values


@dataclass(frozen=True)
class SeriesSolution:
    base_point: Point
    coefficients: dict  # Point -> Fraction, in canonical order
    complete: bool
    truncation_degree: int | None = None

    def support(self) -> list[Point]:
        return list(self.coefficients)

    def __getitem__(self, u: Point) -> Fraction:
        return self.coefficients.get(tuple(u), Fraction(0))


@dataclass(frozen=True)
class SolutionCheck:
    ok: bool
    checked: int
    excluded: int
    failures: tuple[tuple[Point, Point], ...]  # (move, monomial exponent) pairs


def _split(w: Sequence[int]) -> tuple[Point, Point]:
    return tuple(max(x, 0) for x in w), tuple(max(-x, 0) for x in w)


def falling(x: Sequence[int], a: Sequence[int]) -> int:
    """``x! / a!`` for ``x >= a`` componentwise (the coefficient of d^{x-a} x^x)."""
    return prod(prod(range(ai + 1, xi + 1)) for xi, ai in zip(x, a))


def _truncated_component(gamma: Point, moves: MoveSet, D: int) -> list[Point]:
    seen = {gamma}
    queue = deque([gamma])
    while queue:
        u = queue.popleft()
        for w in moves:
            for s in (1, -1):
                v = tuple(a + s * b for a, b in zip(u, w))
                if min(v, default=0) < 0 or sum(v) > D or v in seen:
                    continue
                seen.add(v)
                queue.append(v)
    return sorted(seen, key=canonical_key)


def solve_class(
    gamma: Sequence[int],
    M: IntMat,
    report: ClassReport,
    truncation_degree: int | None = None,
) -> SeriesSolution:
    """The solution with coefficient 1 at ``gamma`` supported on its class.

    For an unbounded class the support is cut to the points of degree at most
    ``truncation_degree`` reachable from gamma without exceeding that degree.
    """
    gamma = tuple(gamma)
    moves = moves_from_columns(M)
    if isinstance(report, Bounded):
        support = list(report.elements)
        complete, D = True, None
        if gamma not in set(support):
            raise ValueError(f"{gamma} is not in the reported class")
    elif isinstance(report, UnboundedWitness):
        if truncation_degree is None:
            raise ValueError("an unbounded class needs a truncation degree")
        if sum(gamma) > truncation_degree:
            raise ValueError("truncation degree below the base point")
        support = _truncated_component(gamma, moves, truncation_degree)
        complete, D = False, truncation_degree
    else:
        raise ValueError(f"no series solution for a {type(report).__name__} report")

    members = set(support)
    coeff: dict[Point, Fraction] = {gamma: Fraction(1)}
    parent: dict[Point, Point | None] = {gamma: None}
    queue = deque([gamma])
    while queue:
        x = queue.popleft()
        for w in moves:
            for s in (1, -1):
                y = tuple(a + s * b for a, b in zip(x, w))
                if y not in members:
                    continue
                # x and y are a + w+ and a + w- in some order, with a = min(x, y)
                a = tuple(min(p, r) for p, r in zip(x, y))
                val = coeff[x] * falling(x, a) / falling(y, a)
                if y in coeff:
                    if coeff[y] != val:
                        raise CycleInconsistencyError(
                            _cycle(parent, x, y), (coeff[y], val)
                        )
                    continue
                coeff[y] = val
                parent[y] = x
                queue.append(y)
    if len(coeff) != len(members):
        raise ValueError("support is not connected through moves")
    ordered = {u: coeff[u] for u in support}
    return SeriesSolution(gamma, ordered, complete, D)


def _cycle(parent, x, y):
    def up(z):
        path = []
        while z is not None:
            path.append(z)
            z = parent[z]
        return path

    px, py = up(x), up(y)
    common = set(px) & set(py)
    px = px[: next(i for i, z in enumerate(px) if z in common) + 1]
    py = py[: next(i for i, z in enumerate(py) if z in common)]
    return tuple(reversed(px)) + tuple(py) + (px[-1],)


def polynomial_basis(M: IntMat, catalog: BoundedClassCatalog) -> list[SeriesSolution]:
    if not catalog.complete:
        raise IncompleteCatalogError("polynomial basis needs a certified catalog", catalog.certificate)
    return [solve_class(c.representative, M, c) for c in catalog.classes]


def check_solution(M: IntMat, G: SeriesSolution) -> SolutionCheck:
    """Apply every operator term by term and collect nonzero coefficients.

    For a truncated G, terms that involve a coefficient of degree above the
    truncation are not determined by G and are counted in ``excluded``.
    """
    D = G.truncation_degree if not G.complete else None
    checked = excluded = 0
    failures = []
    for w in M.columns():
        wp, wm = _split(w)
        starts = set()
        for x in G.coefficients:
            for shift in (wp, wm):
                if all(a >= b for a, b in zip(x, shift)):
                    starts.add(tuple(a - b for a, b in zip(x, shift)))
        for a in sorted(starts, key=canonical_key):
            x = tuple(p + r for p, r in zip(a, wp))
            y = tuple(p + r for p, r in zip(a, wm))
            if D is not None and (sum(x) > D or sum(y) > D):
                excluded += 1
                continue
            checked += 1
            if G[x] * falling(x, a) - G[y] * falling(y, a) != 0:
                failures.append((tuple(w), a))
    return SolutionCheck(not failures, checked, excluded, tuple(failures))


def verify_solution(M: IntMat, G: SeriesSolution) -> bool:
    return check_solution(M, G).ok


def _rank_exact(rows: list[dict[int, Fraction]]) -> int:
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        while row:
            c = min(row)
            if c not in pivots:
                pivots[c] = row
                break
            prow = pivots[c]
            f = row[c] / prow[c]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(pivots)


def solution_space_dimension_oracle(M: IntMat, D: int) -> int:
    """Dimension of the polynomial solutions of degree <= D, by brute force.

    Solves the full linear system on the coefficients of a general polynomial
    of degree <= D. Since basis solutions have disjoint supports, this is the
    number of bounded classes lying entirely in degree <= D.
    """
    q = M.nrows
    monos = [u for d in range(D + 1) for u in points_of_degree(q, d)]
    index = {u: i for i, u in enumerate(monos)}
    rows = []
    for w in M.columns():
        wp, wm = _split(w)
        lo = min(sum(wp), sum(wm))
        for d in range(D - lo + 1):
            for a in points_of_degree(q, d):
                row: dict[int, Fraction] = {}
                x = tuple(p + r for p, r in zip(a, wp))
                y = tuple(p + r for p, r in zip(a, wm))
                if x in index:
                    row[index[x]] = row.get(index[x], 0) + Fraction(factorial_ratio(x, a))
                if y in index:
                    row[index[y]] = row.get(index[y], 0) - Fraction(factorial_ratio(y, a))
                if row:
                    rows.append(row)
    return len(monos) - _rank_exact(rows)


def factorial_ratio(x: Sequence[int], a: Sequence[int]) -> int:
    # written independently of ``falling`` on purpose
    num = prod(factorial(v) for v in x)
    den = prod(factorial(v) for v in a)
    return num // den
