"""Lattice ideals, lattice basis ideals and their toral primary components.

Binomial ideals are never expanded into polynomial generating sets here.
A lattice ideal is carried as a lattice plus a partial character with a
membership predicate, and a toral component is carried as the data
``(B, J, rho, minimal generators of its monomial part)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .congruence import (
    DEFAULT_NODE_CAP,
    CompleteAtDegree,
    IncompleteCatalogError,
    MonomialIdealSet,
    bounded_catalog,
    min_gens_unbounded_ideal,
    moves_from_columns,
)
from .lattice import (
    IntMat,
    LatticeBasis,
    LatticeError,
    PartialCharacter,
    RootOfUnity,
    characters_extending_trivial,
    cokernel_matrix,
    column_lattice,
    det,
    evaluate_character,
    is_mixed_lattice,
    is_mixed_vector,
    kernel_basis,
    rank,
    saturation,
)

TORAL = "toral-verified"
UNVERIFIED = "unverified candidate"


class UnmixedLatticeError(LatticeError):
    code = "ideals.unmixed"

    def __init__(self, witness):
        super().__init__(f"ZB contains the nonnegative vector {tuple(witness)}")
        self.witness = tuple(witness)


class NotToralError(ValueError):
    code = "ideals.not_toral"


@dataclass(frozen=True)
class BinomialGen:
    """``t^u - coeff * t^v``; ``coeff=None`` encodes the monomial ``t^u``."""

    u: tuple[int, ...]
    v: tuple[int, ...]
    coeff: RootOfUnity | None = RootOfUnity()

    @property
    def is_monomial(self) -> bool:
        return self.coeff is None

    def is_pure_difference(self) -> bool:
        return (
            self.coeff is not None
            and self.coeff.is_one()
            and not any(a and b for a, b in zip(self.u, self.v))
        )


@dataclass(frozen=True)
class LatticeIdealHandle:
    L: LatticeBasis
    rho: PartialCharacter

    def __post_init__(self):
        if self.rho.domain != self.L:
            raise LatticeError("character domain differs from the lattice")


def check_convention(B: IntMat) -> None:
    """Full column rank and every nonzero vector of ZB mixed, else raise."""
    ok, witness = is_mixed_lattice(B)
    if not ok:
        raise UnmixedLatticeError(witness)


def lattice_basis_ideal(B: IntMat, check: bool = True) -> list[BinomialGen]:
    """One pure-difference binomial per column of B.

    With ``check=False`` the lattice mixedness test is skipped, which is what
    the square systems I(M) need (ZM has full rank and is never mixed).
    """
    if check:
        check_convention(B)
    gens = []
    for col in B.columns():
        if not any(col):
            raise LatticeError("zero column")
        gens.append(
            BinomialGen(tuple(max(x, 0) for x in col), tuple(max(-x, 0) for x in col))
        )
    return gens


def binomial_in_lattice_ideal(h: LatticeIdealHandle, g: BinomialGen) -> bool:
    if g.coeff is None:
        raise ValueError("monomials are never in a lattice ideal")
    w = tuple(a - b for a, b in zip(g.u, g.v))
    if w not in h.L:
        return False
    return evaluate_character(h.rho, w) == g.coeff


# -- block decompositions ------------------------------------------------------

@dataclass(frozen=True)
class BlockDecomposition:
    """Rows/columns of the mixed block M of B with a zero block to its right.

    ``J`` lists the rows outside M; ``M_block`` is ``B[rowsM, colsM]``.
    """

    rowsM: tuple[int, ...]
    colsM: tuple[int, ...]
    J: tuple[int, ...]
    M_block: IntMat
    n: int
    m: int

    @property
    def q(self) -> int:
        return len(self.rowsM)

    @property
    def p(self) -> int:
        return len(self.colsM)

    @property
    def cols_J(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.m) if j not in self.colsM)

    def B_J(self, B: IntMat) -> IntMat:
        return B.submatrix(self.J, self.cols_J)


def block_decompositions(B: IntMat, check: bool = True) -> list[BlockDecomposition]:
    """Zero-block decompositions of B with a column-mixed block M and q <= p.

    No irreducibility filter is applied, so the list may properly contain the
    decompositions giving associated primes of I(B).
    """
    if check:
        check_convention(B)
    n, m = B.shape
    out = [BlockDecomposition((), (), tuple(range(n)), IntMat.zeros(0, 0), n, m)]
    for q in range(2, n + 1):
        for rows in itertools.combinations(range(n), q):
            cols = tuple(j for j in range(m) if any(B[i, j] for i in rows))
            if len(cols) < q:
                continue
            Mb = B.submatrix(rows, cols)
            if not all(is_mixed_vector(c) for c in Mb.columns()):
                continue
            J = tuple(i for i in range(n) if i not in rows)
            out.append(BlockDecomposition(rows, cols, J, Mb, n, m))
    return out


def toral_filter(dec: BlockDecomposition) -> bool:
    if dec.q == 0:
        return True
    return dec.q == dec.p and det(dec.M_block) != 0


def decomposition_label(dec: BlockDecomposition) -> str:
    return TORAL if toral_filter(dec) else UNVERIFIED


def lattice_pair(B: IntMat, dec: BlockDecomposition) -> tuple[LatticeBasis, LatticeBasis]:
    """``(Z B_J, sat(Z B_J))`` inside Z^J."""
    BJ = dec.B_J(B)
    L = column_lattice(BJ) if BJ.ncols else kernel_basis(IntMat.identity(len(dec.J)))
    return L, saturation(L)


def characters_for_decomposition(B: IntMat, dec: BlockDecomposition) -> list[PartialCharacter]:
    L, S = lattice_pair(B, dec)
    return characters_extending_trivial(L, S)


def dimension_law(B: IntMat, dec: BlockDecomposition) -> tuple[int, int]:
    """``(#J - rank B_J, rank A_J)``; the first never falls below the second."""
    A = cokernel_matrix(B)
    BJ = dec.B_J(B)
    A_J = A.submatrix(range(A.nrows), dec.J)
    return len(dec.J) - (rank(BJ) if BJ.ncols else 0), rank(A_J) if A.nrows else 0


# -- toral components ---------------------------------------------------------

@dataclass(frozen=True)
class PrimaryComponentDescription:
    """A toral component ``I(B) + I_{rho,J} + <t^u : u in U>``.

    ``U_min_gens`` lives on the coordinates ``decomposition.rowsM`` (the
    complement of J), in that order.
    """

    B: IntMat
    decomposition: BlockDecomposition
    rho: PartialCharacter
    U_min_gens: MonomialIdealSet
    toral: bool = True
    K_used: MonomialIdealSet | None = None
    certificate_degree: int | None = None

    @property
    def J(self) -> tuple[int, ...]:
        return self.decomposition.J

    def lattice_ideal(self) -> LatticeIdealHandle:
        return LatticeIdealHandle(self.rho.domain, self.rho)


def toral_primary_component(
    B: IntMat,
    dec: BlockDecomposition,
    rho: PartialCharacter,
    e: int | None = None,
    d_max: int = 50,
    K: MonomialIdealSet | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
) -> PrimaryComponentDescription:
    """Assemble the component attached to ``(dec, rho)``.

    Without ``e`` (or ``K``) the monomial part is the unbounded ideal of the
    M-subgraphs. With ``e``, K defaults to the e-th powers of the variables
    outside J and the monomial part is read off the K-augmented congruence.
    """
    if not toral_filter(dec):
        raise NotToralError(f"decomposition with rows {dec.rowsM} is not toral")
    q = dec.q
    if q == 0:
        return PrimaryComponentDescription(
            B, dec, rho, MonomialIdealSet((), 0), certificate_degree=0
        )
    if K is None and e is not None:
        K = MonomialIdealSet.variable_powers(q, e)
    if K is not None:
        if K.dimension != q or not K.contains_variable_powers():
            raise ValueError("K must contain a power of every variable outside J")
    catalog = bounded_catalog(moves_from_columns(dec.M_block), K, d_max, node_cap)
    if not isinstance(catalog.certificate, CompleteAtDegree):
        raise IncompleteCatalogError(
            f"no certificate for rows {dec.rowsM} within degree {d_max}", catalog.certificate
        )
    return PrimaryComponentDescription(
        B,
        dec,
        rho,
        min_gens_unbounded_ideal(catalog),
        True,
        K,
        catalog.certificate.degree,
    )


def monomial_membership(comp: PrimaryComponentDescription, u: Sequence[int]) -> bool:
    if len(u) != comp.B.nrows:
        raise ValueError(f"expected a vector of length {comp.B.nrows}")
    proj = tuple(u[i] for i in comp.decomposition.rowsM)
    return proj in comp.U_min_gens


def toral_components(
    B: IntMat, e: int | None = None, d_max: int = 50, node_cap: int = DEFAULT_NODE_CAP
) -> list[PrimaryComponentDescription]:
    """Every toral component, ordered by (q, rows of M, character index)."""
    decs = [d for d in block_decompositions(B) if toral_filter(d)]
    decs.sort(key=lambda d: (d.q, d.rowsM))
    out = []
    for dec in decs:
        for rho in characters_for_decomposition(B, dec):
            out.append(toral_primary_component(B, dec, rho, e, d_max, node_cap=node_cap))
    return out


@dataclass(frozen=True)
class StabilizationScan:
    """Monomial parts for a range of powers e.

    ``stabilized`` only says the last two entries agree; it is evidence that
    e is large enough, not a proof.
    """

    entries: tuple[tuple[int, MonomialIdealSet], ...]
    agreements: tuple[bool, ...]

    @property
    def stabilized(self) -> bool:
        return bool(self.agreements) and self.agreements[-1]

    @property
    def first_stable_power(self) -> int | None:
        """Smallest e from which all later scanned entries agree."""
        if not self.stabilized:
            return None
        k = len(self.agreements)
        while k > 0 and self.agreements[k - 1]:
            k -= 1
        return self.entries[k][0]


def stabilization_scan(
    B: IntMat,
    dec: BlockDecomposition,
    rho: PartialCharacter,
    e_range: Iterable[int],
    d_max: int = 50,
) -> StabilizationScan:
    entries = []
    for e in e_range:
        comp = toral_primary_component(B, dec, rho, e=e, d_max=d_max)
        entries.append((e, comp.U_min_gens))
    agreements = tuple(a[1] == b[1] for a, b in zip(entries, entries[1:]))
    return StabilizationScan(tuple(entries), agreements)
