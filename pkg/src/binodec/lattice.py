"""Exact integer linear algebra: normal forms, kernels, saturation, characters.

Everything here works over Python ints and ``fractions.Fraction``; there is
no floating point anywhere in this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence


class LatticeError(ValueError):
    """Raised on domain violations (rank deficiency, non-containment, ...)."""

    code = "lattice.error"


class RankDeficientError(LatticeError):
    code = "lattice.rank_deficient"


class NotContainedError(LatticeError):
    code = "lattice.not_contained"


class NotInDomainError(LatticeError):
    code = "lattice.not_in_domain"


@dataclass(frozen=True)
class IntMat:
    """Immutable integer matrix, stored row-major as a tuple of row tuples.

    ``ncols`` is kept explicitly so that matrices with zero rows still know
    their width (the empty cokernel of a square matrix is ``0 x n``).
    """

    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> "IntMat":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(rows, ncols)

    @classmethod
    def from_columns(cls, cols: Iterable[Sequence[int]], nrows: int | None = None) -> "IntMat":
        cols = [tuple(int(x) for x in c) for c in cols]
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMat":
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "IntMat":
        return IntMat(tuple(self.columns()), self.nrows)

    T = property(transpose)

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        oc = other.columns()
        return IntMat(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in oc) for r in self.rows),
            other.ncols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMat":
        return IntMat(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)


def _mat(rows: list[list[int]], ncols: int) -> IntMat:
    return IntMat(tuple(tuple(r) for r in rows), ncols)


def _identity_rows(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


# -- Hermite normal form -----------------------------------------------------

def _hnf_rows(a: list[list[int]], ncols: int) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style HNF in place on copies; returns (H, U) with U @ A = H."""
    a = [list(r) for r in a]
    m = len(a)
    u = _identity_rows(m)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            # smallest |entry|, then lowest row index
            piv = None
            for i in range(r, m):
                x = a[i][c]
                if x and (piv is None or abs(x) < abs(a[piv][c])):
                    piv = i
            if piv is None:
                break
            a[r], a[piv] = a[piv], a[r]
            u[r], u[piv] = u[piv], u[r]
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
                u[r] = [-x for x in u[r]]
            p = a[r][c]
            done = True
            for i in range(r + 1, m):
                x = a[i][c]
                if x:
                    f = x // p
                    a[i] = [y - f * z for y, z in zip(a[i], a[r])]
                    u[i] = [y - f * z for y, z in zip(u[i], u[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < m and a[r][c]:
            p = a[r][c]
            for i in range(r):
                f = a[i][c] // p
                if f:
                    a[i] = [y - f * z for y, z in zip(a[i], a[r])]
                    u[i] = [y - f * z for y, z in zip(u[i], u[r])]
            r += 1
    return a, u


def hnf(M: IntMat) -> tuple[IntMat, IntMat]:
    """Hermite normal form under left multiplication: ``U @ M == H``.

    H is in row echelon form with positive pivots and entries above each
    pivot reduced into ``[0, pivot)``. The rank is the number of nonzero rows.
    """
    h, u = _hnf_rows([list(r) for r in M.rows], M.ncols)
    return _mat(h, M.ncols), _mat(u, M.nrows)


def rank(M: IntMat) -> int:
    h, _ = _hnf_rows([list(r) for r in M.rows], M.ncols)
    return sum(1 for r in h if any(r))


# -- Smith normal form -------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    U: IntMat
    S: IntMat
    V: IntMat

    @property
    def invariant_factors(self) -> list[int]:
        n = min(self.S.shape)
        return [self.S[i, i] for i in range(n) if self.S[i, i]]


def snf(M: IntMat) -> SmithDecomposition:
    """Smith normal form ``U @ M @ V == S`` with the divisibility chain on S."""
    m, n = M.shape
    a = [list(r) for r in M.rows]
    u = _identity_rows(m)
    v = _identity_rows(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst -= f * row_src
        a[dst] = [x - f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):  # col_dst -= f * col_src
        for r in a:
            r[dst] -= f * r[src]
        for r in v:
            r[dst] -= f * r[src]

    for t in range(min(m, n)):
        while True:
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    x = a[i][j]
                    if x and (piv is None or abs(x) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, a[i][t] // p)
                    clean = clean and not a[i][t]
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, a[t][j] // p)
                    clean = clean and not a[t][j]
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if piv is None:
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return SmithDecomposition(_mat(u, m), _mat(a, n), _mat(v, n))


# -- rational helpers ----------------------------------------------------------

def solve_rational(M: IntMat, b: Sequence[int]) -> list[Fraction] | None:
    """Unique rational solution of ``M x = b`` for full-column-rank M, else None."""
    m, n = M.shape
    a = [[Fraction(x) for x in r] + [Fraction(y)] for r, y in zip(M.rows, b)]
    r = 0
    pivots = []
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(a[i][n] for i in range(r, m)):
        return None
    if r < n:
        raise RankDeficientError("matrix is not of full column rank")
    return [a[i][n] for i in range(n)]


def det(M: IntMat) -> int:
    n = M.nrows
    if n != M.ncols:
        raise ValueError("det of non-square matrix")
    a = [[Fraction(x) for x in r] for r in M.rows]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return int(d)


# -- lattices ----------------------------------------------------------------

@dataclass(frozen=True)
class LatticeBasis:
    """A sublattice of Z^n given by linearly independent basis columns.

    Construct through :func:`lattice_from_generators` to get the canonical
    (Hermite-reduced) basis, which makes equality of lattices plain ``==``.
    """

    ambient_dim: int
    basis: IntMat

    @property
    def rank(self) -> int:
        return self.basis.ncols

    def vectors(self) -> list[tuple[int, ...]]:
        return self.basis.columns()

    def coordinates(self, u: Sequence[int]) -> list[int] | None:
        """Integer coordinates of u in this basis, or None if u is not in the lattice."""
        if len(u) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        if self.rank == 0:
            return [] if not any(u) else None
        x = solve_rational(self.basis, u)
        if x is None or any(c.denominator != 1 for c in x):
            return None
        return [int(c) for c in x]

    def __contains__(self, u: Sequence[int]) -> bool:
        return self.coordinates(u) is not None


def lattice_from_generators(gens: Iterable[Sequence[int]], ambient_dim: int) -> LatticeBasis:
    rows = [list(g) for g in gens]
    h, _ = _hnf_rows(rows, ambient_dim)
    basis = [r for r in h if any(r)]
    return LatticeBasis(ambient_dim, IntMat.from_columns(basis, ambient_dim))


def column_lattice(B: IntMat) -> LatticeBasis:
    """The lattice ZB, checked to have B's columns independent."""
    if rank(B) != B.ncols:
        raise RankDeficientError("B does not have full column rank")
    return lattice_from_generators(B.columns(), B.nrows)


def kernel_basis(A: IntMat) -> LatticeBasis:
    """Basis of ker_Z(A) = {u in Z^n : A u = 0}; saturated by construction."""
    n = A.ncols
    h, u = _hnf_rows([list(r) for r in A.transpose().rows], A.nrows)
    gens = [u[i] for i in range(n) if not any(h[i])]
    return lattice_from_generators(gens, n)


def cokernel_matrix(B: IntMat) -> IntMat:
    """A with ``A @ B == 0`` whose rows span all integer y with ``y B = 0``.

    For B of full column rank m this has n - m rows (possibly zero).
    """
    n, m = B.shape
    h, u = _hnf_rows([list(r) for r in B.rows], m)
    if sum(1 for r in h if any(r)) != m:
        raise RankDeficientError("B does not have full column rank")
    rows = u[m:]
    hh, _ = _hnf_rows(rows, n)
    return _mat([r for r in hh if any(r)], n)


def saturation(L: LatticeBasis) -> LatticeBasis:
    """(QL) intersected with Z^n."""
    if L.rank == 0:
        return L
    return kernel_basis(cokernel_matrix(L.basis))


def _inclusion_coordinates(L_sub: LatticeBasis, L_sup: LatticeBasis) -> IntMat:
    if L_sub.ambient_dim != L_sup.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if L_sub.rank != L_sup.rank:
        raise LatticeError("lattices of different rank")
    cols = []
    for v in L_sub.vectors():
        x = L_sup.coordinates(v)
        if x is None:
            raise NotContainedError(f"vector {v} of the sublattice is not in the superlattice")
        cols.append(x)
    return IntMat.from_columns(cols, L_sup.rank)


def quotient_invariants(L_sub: LatticeBasis, L_sup: LatticeBasis) -> list[int]:
    """Invariant factors (all > 1) of the finite group L_sup / L_sub."""
    X = _inclusion_coordinates(L_sub, L_sup)
    return [d for d in snf(X).invariant_factors if d != 1]


def lattice_index(L_sub: LatticeBasis, L_sup: LatticeBasis) -> int:
    """Index via Gram determinants; independent of the Smith route."""
    g_sub = det(L_sub.basis.T @ L_sub.basis)
    g_sup = det(L_sup.basis.T @ L_sup.basis)
    ratio = Fraction(g_sub, g_sup)
    root = _isqrt_exact(ratio)
    return root


def _isqrt_exact(x: Fraction) -> int:
    from math import isqrt

    if x.denominator != 1:
        raise LatticeError("non-integral index")
    r = isqrt(x.numerator)
    if r * r != x.numerator:
        raise LatticeError("Gram ratio is not a square")
    return r


# -- roots of unity and characters ---------------------------------------------

@dataclass(frozen=True, order=True)
class RootOfUnity:
    """exp(2 pi i k / N), kept reduced: 0 <= k < N, gcd(k, N) = 1 (k = 0 means N = 1)."""

    k: int = 0
    N: int = 1

    def __post_init__(self):
        if self.N <= 0:
            raise ValueError("order must be positive")
        k = self.k % self.N
        g = gcd(k, self.N)
        if k == 0:
            object.__setattr__(self, "k", 0)
            object.__setattr__(self, "N", 1)
        else:
            object.__setattr__(self, "k", k // g)
            object.__setattr__(self, "N", self.N // g)

    @classmethod
    def from_fraction(cls, f: Fraction) -> "RootOfUnity":
        return cls(f.numerator, f.denominator)

    @property
    def angle(self) -> Fraction:
        return Fraction(self.k, self.N)

    @property
    def order(self) -> int:
        return self.N

    def is_one(self) -> bool:
        return self.k == 0

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity.from_fraction(self.angle + other.angle)

    def __pow__(self, e: int) -> "RootOfUnity":
        return RootOfUnity.from_fraction(self.angle * e)

    def inverse(self) -> "RootOfUnity":
        return self ** -1

    def as_pair(self) -> tuple[int, int]:
        return (self.k, self.N)

    def __repr__(self):
        return f"RootOfUnity({self.k}/{self.N})"


ONE = RootOfUnity()


@dataclass(frozen=True)
class PartialCharacter:
    domain: LatticeBasis
    values: tuple[RootOfUnity, ...]

    def __post_init__(self):
        if len(self.values) != self.domain.rank:
            raise ValueError("one value per basis vector required")

    def is_trivial(self) -> bool:
        return all(v.is_one() for v in self.values)

    def __call__(self, u: Sequence[int]) -> RootOfUnity:
        return evaluate_character(self, u)


def evaluate_character(rho: PartialCharacter, u: Sequence[int]) -> RootOfUnity:
    x = rho.domain.coordinates(u)
    if x is None:
        raise NotInDomainError(f"{tuple(u)} is not in the domain lattice")
    angle = sum((c * v.angle for c, v in zip(x, rho.values)), Fraction(0))
    return RootOfUnity.from_fraction(angle)


def characters_extending_trivial(L_sub: LatticeBasis, L_sup: LatticeBasis) -> list[PartialCharacter]:
    """All characters of L_sup that are trivial on L_sub.

    Goes through the Smith form ``U X V = S`` of the inclusion: the map
    ``y -> U y mod (d_1, ..., d_r)`` identifies L_sup / L_sub with the product
    of cyclic groups, and each character picks a residue k_i mod d_i.
    """
    X = _inclusion_coordinates(L_sub, L_sup)
    sd = snf(X)
    r = L_sup.rank
    diag = [sd.S[i, i] for i in range(r)]
    if any(d == 0 for d in diag):
        raise LatticeError("sublattice has smaller rank")
    active = [i for i in range(r) if diag[i] != 1]
    chars = []
    for ks in itertools.product(*(range(diag[i]) for i in active)):
        values = []
        for j in range(r):
            angle = sum((Fraction(k * sd.U[i, j], diag[i]) for k, i in zip(ks, active)), Fraction(0))
            values.append(RootOfUnity.from_fraction(angle))
        chars.append(PartialCharacter(L_sup, tuple(values)))
    return chars


def trivial_character(L: LatticeBasis) -> PartialCharacter:
    return PartialCharacter(L, (ONE,) * L.rank)


# -- mixedness ---------------------------------------------------------------

def _fm_feasible_point(ineqs: list[tuple[list[Fraction], Fraction]], nvars: int) -> list[Fraction] | None:
    """Fourier-Motzkin: find x with ``a . x >= b`` for all (a, b), or None."""
    stages = []
    cur = ineqs
    for var in range(nvars - 1, -1, -1):
        stages.append(cur)
        pos, neg, rest = [], [], []
        for a, b in cur:
            (pos if a[var] > 0 else neg if a[var] < 0 else rest).append((a, b))
        nxt = list(rest)
        for ap, bp in pos:
            for an, bn in neg:
                s, t = -an[var], ap[var]
                a = [s * x + t * y for x, y in zip(ap, an)]
                nxt.append((a, s * bp + t * bn))
        cur = _dedupe(nxt)
    if any(b > 0 for _, b in cur):
        return None
    x = [Fraction(0)] * nvars
    for var in range(nvars):
        cons = stages[nvars - 1 - var]
        lo, hi = None, None
        for a, b in cons:
            c = a[var]
            if c == 0:
                continue
            rhs = (b - sum(a[j] * x[j] for j in range(var))) / c
            if c > 0:
                lo = rhs if lo is None else max(lo, rhs)
            else:
                hi = rhs if hi is None else min(hi, rhs)
        if lo is not None and hi is not None and lo > hi:
            return None
        if lo is not None and lo > 0:
            x[var] = lo
        elif hi is not None and hi < 0:
            x[var] = hi
        else:
            x[var] = Fraction(0)
    return x


def _dedupe(ineqs):
    seen = {}
    for a, b in ineqs:
        scale = max([abs(x) for x in a] + [abs(b)])
        if scale == 0:
            continue
        key = (tuple(x / scale for x in a), b / scale)
        if not any(a):
            if b > 0:
                seen[key] = (a, b)
            continue
        seen.setdefault(key, (a, b))
    return list(seen.values())


def is_mixed_lattice(B: IntMat) -> tuple[bool, tuple[int, ...] | None]:
    """Whether every nonzero vector of ZB has both signs.

    Returns ``(True, None)`` or ``(False, w)`` with w a nonzero nonnegative
    vector of ZB. Decided by exact feasibility of ``B x >= 0, sum(B x) = 1``.
    """
    n, m = B.shape
    if rank(B) != m:
        raise RankDeficientError("B does not have full column rank")
    if m == 0:
        return True, None
    s = [sum(B[i, j] for i in range(n)) for j in range(m)]
    if not any(s):
        return True, None
    # eliminate x_e through the equality sum(Bx) = 1
    e = next(j for j in range(m) if s[j])
    others = [j for j in range(m) if j != e]

    def substitute(row):
        # row . x with x_e = (1 - sum_{j != e} s_j x_j) / s_e
        c = Fraction(row[e], s[e])
        return [Fraction(row[j]) - c * s[j] for j in others], c

    ineqs = []
    for i in range(n):
        a, const = substitute(B.rows[i])
        ineqs.append((a, -const))
    if not others:
        if all(b <= 0 for _, b in ineqs):
            y = {e: Fraction(1, s[e])}
        else:
            return True, None
    else:
        pt = _fm_feasible_point(_dedupe(ineqs) if ineqs else [], len(others))
        if pt is None:
            return True, None
        y = dict(zip(others, pt))
        y[e] = (1 - sum(s[j] * y[j] for j in others)) / s[e]
    x = [y[j] for j in range(m)]
    scale = lcm(*(f.denominator for f in x))
    xi = [int(f * scale) for f in x]
    g = gcd(*xi)
    xi = [c // g for c in xi]
    w = B.apply(xi)
    assert all(c >= 0 for c in w) and any(w)
    return False, w


def is_mixed_vector(v: Sequence[int]) -> bool:
    return any(x > 0 for x in v) and any(x < 0 for x in v)
