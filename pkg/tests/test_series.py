import random
from fractions import Fraction
from math import factorial, prod

import pytest

from binodec import congruence as cg
from binodec import series as ser
from binodec.lattice import IntMat

from corpus import CONCRETE_M, certified_corpus

MOVES = cg.moves_from_columns(CONCRETE_M)


def multinomial_power(n, q=3):
    """Coefficients of (x_1 + ... + x_q)^n."""
    return {
        u: Fraction(factorial(n), prod(factorial(x) for x in u))
        for u in cg.points_of_degree(q, n)
    }


@pytest.fixture(scope="module")
def corpus():
    return [(M, cat) for M, K, cat in certified_corpus(n_random=8) if K is None]


def test_constant_solution():
    rep = cg.explore_class((0, 0, 0), MOVES)
    G = ser.solve_class((0, 0, 0), CONCRETE_M, rep)
    assert G.coefficients == {(0, 0, 0): 1} and G.complete


def test_square_of_sum():
    rep = cg.explore_class((2, 0, 0), MOVES)
    G = ser.solve_class((2, 0, 0), CONCRETE_M, rep)
    assert G.coefficients == multinomial_power(2)
    assert ser.verify_solution(CONCRETE_M, G)


def test_truncated_exponential_tail():
    rep = cg.explore_class((4, 0, 0), MOVES)
    G = ser.solve_class((4, 0, 0), CONCRETE_M, rep, truncation_degree=6)
    assert not G.complete and G.truncation_degree == 6
    expected = {
        u: Fraction(24, prod(factorial(x) for x in u))
        for d in (4, 5, 6)
        for u in cg.points_of_degree(3, d)
    }
    assert G.coefficients == expected
    chk = ser.check_solution(CONCRETE_M, G)
    assert chk.ok and chk.checked > 0 and chk.excluded > 0


def test_solve_rejects_bad_reports():
    rep = cg.explore_class((4, 0, 0), MOVES)
    with pytest.raises(ValueError):
        ser.solve_class((4, 0, 0), CONCRETE_M, rep)
    with pytest.raises(ValueError):
        ser.solve_class((4, 0, 0), CONCRETE_M, rep, truncation_degree=3)
    with pytest.raises(ValueError):
        ser.solve_class((1, 0, 0), CONCRETE_M, cg.explore_class((2, 0, 0), MOVES))
    with pytest.raises(ValueError):
        ser.solve_class((1, 0), IntMat.from_rows([[1], [-1]]), cg.BudgetExceeded(1, 1))


def test_polynomial_basis_concrete():
    cat = cg.bounded_catalog(MOVES)
    basis = ser.polynomial_basis(CONCRETE_M, cat)
    assert len(basis) == 4
    for n, G in enumerate(basis):
        # renormalise at (n, 0, 0)
        scale = G[(n, 0, 0)]
        assert {u: c / scale for u, c in G.coefficients.items()} == multinomial_power(n)


def test_polynomial_basis_two_by_two():
    M = cg.two_by_two_matrix(1, 5, 1, 3)
    cat = cg.bounded_catalog(cg.moves_from_columns(M))
    basis = ser.polynomial_basis(M, cat)
    assert len(basis) == 3
    assert all(ser.verify_solution(M, G) for G in basis)


def test_polynomial_basis_rejects_incomplete():
    M = IntMat.from_rows([[1], [-1]])
    cat = cg.bounded_catalog(cg.moves_from_columns(M), max_degree=3)
    with pytest.raises(cg.IncompleteCatalogError):
        ser.polynomial_basis(M, cat)


def test_verify_rejects_non_solution():
    G = ser.SeriesSolution((1, 0, 0), {(1, 0, 0): Fraction(1)}, True)
    chk = ser.check_solution(CONCRETE_M, G)
    assert not chk.ok
    assert ((1, -1, 0), (0, 0, 0)) in chk.failures


def test_oracle_examples():
    assert ser.solution_space_dimension_oracle(CONCRETE_M, 3) == 4
    assert ser.solution_space_dimension_oracle(CONCRETE_M, 0) == 1
    assert ser.solution_space_dimension_oracle(cg.two_by_two_matrix(1, 5, 1, 3), 12) == 3


def test_cycle_alarm(monkeypatch):
    rep = cg.explore_class((2, 0, 0), MOVES)
    calls = iter(range(10**6))
    real = ser.falling
    monkeypatch.setattr(ser, "falling", lambda x, a: real(x, a) * (1 + next(calls) % 2))
    with pytest.raises(ser.CycleInconsistencyError) as exc:
        ser.solve_class((2, 0, 0), CONCRETE_M, rep)
    cyc = exc.value.cycle
    assert cyc[0] == cyc[-1] and len(cyc) >= 3


# -- invariants on the certified corpus -----------------------------------------------

def test_basis_invariants(corpus):
    rng = random.Random(2)
    for M, cat in corpus:
        basis = ser.polynomial_basis(M, cat)
        assert len(basis) == len(cat.classes)
        seen = set()
        for G, cls in zip(basis, cat.classes):
            assert set(G.support()) == set(cls.elements)
            assert G[cls.representative] == 1
            assert all(c != 0 for c in G.coefficients.values())
            assert ser.verify_solution(M, G)
            # lambda_u * u! is constant on the class
            consts = {c * prod(factorial(x) for x in u) for u, c in G.coefficients.items()}
            assert len(consts) == 1
            assert not (seen & set(G.support()))
            seen |= set(G.support())
            # uniqueness: solving from another point gives the same solution up to scale
            delta = rng.choice(cls.elements)
            H = ser.solve_class(delta, M, cls)
            s = H[cls.representative]
            assert {u: c / s for u, c in H.coefficients.items()} == G.coefficients


def test_oracle_agreement(corpus):
    for M, cat in corpus:
        D = cat.certificate.degree
        assert ser.solution_space_dimension_oracle(M, D) == len(cat.classes)


def test_factorial_helpers_agree():
    rng = random.Random(0)
    for _ in range(100):
        a = tuple(rng.randint(0, 6) for _ in range(3))
        x = tuple(v + rng.randint(0, 5) for v in a)
        assert ser.falling(x, a) == ser.factorial_ratio(x, a)
