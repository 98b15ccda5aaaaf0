import itertools
import random
from collections import deque

import pytest

from binodec import congruence as cg
from binodec.lattice import IntMat

from corpus import CONCRETE_M, certified_corpus, random_mixed_square, random_point

MOVES = cg.moves_from_columns(CONCRETE_M)


@pytest.fixture(scope="module")
def corpus():
    return certified_corpus(n_random=6)


def degree_bounded_component(gamma, moves, D):
    """Plain BFS restricted to degree <= D. Reaching degree D marks it as large."""
    seen = {gamma}
    queue = deque([gamma])
    while queue:
        u = queue.popleft()
        for w in moves:
            for s in (1, -1):
                v = tuple(a + s * b for a, b in zip(u, w))
                if min(v) < 0 or v in seen:
                    continue
                if sum(v) > D:
                    return None
                seen.add(v)
                queue.append(v)
    return seen


def valid_path(path, moves):
    for x, y in zip(path, path[1:]):
        diff = tuple(a - b for a, b in zip(y, x))
        if diff not in moves.moves and tuple(-c for c in diff) not in moves.moves:
            return False
        if min(y) < 0:
            return False
    return True


# -- moves and neighbours ------------------------------------------------------

def test_moves_from_concrete_matrix():
    assert set(MOVES.moves) == {(1, -1, 0), (-5, 1, 3), (0, -1, 1)}
    assert MOVES.all_mixed()


def test_moves_dedup_and_single():
    assert len(cg.moves_from_columns(IntMat.from_rows([[1], [-1]]))) == 1
    assert cg.moves_from_columns(IntMat.from_rows([[1, 1], [-1, -1]])).moves == ((1, -1),)


def test_moves_zero_column_rejected():
    with pytest.raises(cg.CongruenceError):
        cg.moves_from_columns(IntMat.from_rows([[1, 0], [-1, 0]]))


def test_neighbors():
    assert cg.neighbors((0, 0, 0), MOVES) == []
    assert cg.neighbors((1, 0, 0), MOVES) == [(0, 1, 0)]
    nb = cg.neighbors((5, 0, 0), MOVES)
    assert (4, 1, 0) in nb and (0, 1, 3) in nb
    assert nb == sorted(set(nb), key=cg.canonical_key)


# -- single classes --------------------------------------------------------------

def test_explore_zero():
    assert cg.explore_class((0, 0, 0), MOVES) == cg.Bounded(((0, 0, 0),))


def test_explore_degree_two_slice():
    rep = cg.explore_class((2, 0, 0), MOVES)
    assert isinstance(rep, cg.Bounded)
    assert set(rep.elements) == set(cg.points_of_degree(3, 2))
    assert rep.representative == (0, 0, 2)


def test_explore_unbounded_witness():
    rep = cg.explore_class((4, 0, 0), MOVES)
    assert isinstance(rep, cg.UnboundedWitness)
    diff = [a - b for a, b in zip(rep.u, rep.v)]
    assert min(diff) >= 0 and any(diff)
    for path, end in ((rep.path_u, rep.u), (rep.path_v, rep.v)):
        assert path[0] == (4, 0, 0) and path[-1] == end and valid_path(path, MOVES)


def test_explore_with_absorbing_ideal():
    moves = cg.MoveSet(((1, -1),), 2)
    K = cg.MonomialIdealSet.from_generators([(0, 2)], 2)
    assert cg.explore_class((1, 0), moves, K) == cg.Bounded(((0, 1), (1, 0)))
    rep = cg.explore_class((2, 0), moves, K)
    assert isinstance(rep, cg.MonomialClass) and rep.point in K
    assert valid_path(rep.path, moves)


def test_explore_budget():
    rep = cg.explore_class((50, 0), cg.MoveSet(((1, -1),), 2), budget=10)
    assert isinstance(rep, cg.BudgetExceeded) and rep.visited == 10


def test_explore_rejects_bad_points():
    with pytest.raises(cg.CongruenceError):
        cg.explore_class((1, -1, 0), MOVES)
    with pytest.raises(cg.CongruenceError):
        cg.explore_class((1, 0), MOVES)


# -- catalogs --------------------------------------------------------------------

def test_catalog_concrete():
    cat = cg.bounded_catalog(MOVES)
    assert cat.sizes() == [1, 3, 6, 10]
    assert cat.certificate == cg.CompleteAtDegree(4)
    assert [c.representative for c in cat.classes] == [(0, 0, 0), (0, 0, 1), (0, 0, 2), (0, 0, 3)]


def test_catalog_antidiagonals_incomplete():
    cat = cg.bounded_catalog(cg.MoveSet(((1, -1),), 2), max_degree=12)
    assert cat.certificate == cg.Incomplete(12)
    assert cat.sizes() == list(range(1, 14))


def test_catalog_node_cap_incomplete():
    cat = cg.bounded_catalog(cg.MoveSet(((1, -1),), 2), max_degree=30, node_cap=5)
    assert not cat.complete and "node cap" in cat.certificate.reason


def test_min_gens_concrete_and_oracle():
    cat = cg.bounded_catalog(MOVES)
    gens = cg.min_gens_unbounded_ideal(cat)
    assert sorted(gens.generators) == sorted(cg.points_of_degree(3, 4))
    assert len(gens) == 15 and gens.is_antichain()
    # brute-force minimal elements of the infinite-class set up to degree 6
    big = set()
    for d in range(7):
        for p in cg.points_of_degree(3, d):
            if degree_bounded_component(p, MOVES, 30) is None:
                big.add(p)
    minimal = {p for p in big if not any(q != p and cg.dominates(p, q) for q in big)}
    assert minimal == set(gens.generators)


def test_min_gens_single_zero_class():
    moves = cg.moves_from_columns(IntMat.from_rows([[1, 1], [-1, -2]]))
    cat = cg.bounded_catalog(moves)
    assert cat.sizes() == [1]
    assert set(cg.min_gens_unbounded_ideal(cat).generators) == {(1, 0), (0, 1)}


def test_min_gens_rejects_incomplete():
    cat = cg.bounded_catalog(cg.MoveSet(((1, -1),), 2), max_degree=3)
    with pytest.raises(cg.IncompleteCatalogError):
        cg.min_gens_unbounded_ideal(cat)


def test_monomial_ideal_set():
    K = cg.MonomialIdealSet.from_generators([(2, 1), (1, 0), (0, 3), (1, 1)], 2)
    assert set(K.generators) == {(1, 0), (0, 3)}
    assert (3, 0) in K and (0, 2) not in K
    assert K.contains_variable_powers()
    assert not cg.MonomialIdealSet.from_generators([(1, 1)], 2).contains_variable_powers()


@pytest.mark.parametrize("e,size", [(1, 1), (2, 4), (3, 10), (4, 20), (6, 20)])
def test_catalog_with_variable_powers(e, size):
    K = cg.MonomialIdealSet.variable_powers(3, e)
    cat = cg.bounded_catalog(MOVES, K)
    assert cat.complete and sum(cat.sizes()) == size
    gens = set(cg.min_gens_unbounded_ideal(cat).generators)
    assert gens == set(cg.points_of_degree(3, min(e, 4)))


# -- the 2x2 law -------------------------------------------------------------------

def test_two_by_two_examples():
    assert cg.verify_representatives_2x2(1, 5, 1, 3)
    assert len(cg.bounded_catalog(cg.moves_from_columns(cg.two_by_two_matrix(1, 5, 1, 3))).classes) == 3
    assert len(cg.bounded_catalog(cg.moves_from_columns(cg.two_by_two_matrix(2, 1, 1, 3))).classes) == 1
    with pytest.raises(cg.CongruenceError):
        cg.verify_representatives_2x2(1, 1, 1, 1)
    with pytest.raises(cg.CongruenceError):
        cg.verify_representatives_2x2(0, 1, 1, 1)


def test_two_by_two_law_up_to_six():
    bad = []
    for a, b, c, d in itertools.product(range(1, 7), repeat=4):
        if a * d != b * c and not cg.verify_representatives_2x2(a, b, c, d):
            bad.append((a, b, c, d))
    assert bad == []


# -- invariants ----------------------------------------------------------------------

def test_zero_class_with_mixed_moves():
    rng = random.Random(4)
    for _ in range(30):
        q = rng.randint(2, 4)
        moves = cg.moves_from_columns(random_mixed_square(rng, q))
        assert cg.explore_class((0,) * q, moves) == cg.Bounded(((0,) * q,))


def test_congruence_compatibility(corpus):
    rng = random.Random(8)
    checked = 0
    for M, K, cat in corpus:
        if K is not None:
            continue
        for cls in cat.classes:
            if len(cls.elements) < 2:
                continue
            for _ in range(5):
                u, v = rng.sample(cls.elements, 2)
                w = random_point(rng, cat.dimension, rng.randint(0, 3))
                uw = tuple(a + b for a, b in zip(u, w))
                vw = tuple(a + b for a, b in zip(v, w))
                ru, rv = cat.label(uw), cat.label(vw)
                assert ru == rv
                if ru is None:
                    assert not isinstance(cg.explore_class(uw, cat.moves), cg.Bounded)
                    assert not isinstance(cg.explore_class(vw, cat.moves), cg.Bounded)
                checked += 1
    assert checked > 50


def test_downward_closure(corpus):
    for M, K, cat in corpus:
        pts = cat.bounded_points()
        for u in pts:
            for i, x in enumerate(u):
                if x:
                    assert u[:i] + (x - 1,) + u[i + 1 :] in pts


def test_witness_validity_random():
    rng = random.Random(12)
    for _ in range(60):
        q = rng.randint(2, 4)
        moves = cg.moves_from_columns(random_mixed_square(rng, q))
        g = random_point(rng, q, rng.randint(0, 10))
        rep = cg.explore_class(g, moves)
        assert isinstance(rep, (cg.Bounded, cg.UnboundedWitness))
        if isinstance(rep, cg.UnboundedWitness):
            assert rep.u != rep.v and all(a >= b for a, b in zip(rep.u, rep.v))
            assert rep.path_u[0] == g == rep.path_v[0]
            assert valid_path(rep.path_u, moves) and valid_path(rep.path_v, moves)
        else:
            comp = degree_bounded_component(g, moves, max(sum(p) for p in rep.elements))
            assert comp == set(rep.elements)


def test_catalog_deterministic():
    a = cg.bounded_catalog(MOVES, cg.MonomialIdealSet.variable_powers(3, 3))
    b = cg.bounded_catalog(MOVES, cg.MonomialIdealSet.variable_powers(3, 3))
    assert a == b and repr(a) == repr(b)
