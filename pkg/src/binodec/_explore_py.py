"""Pure-Python class exploration kernel (reference and fallback).

Both this module and the compiled ``_explore`` expose ``explore`` with the
same signature and bit-identical results; ``congruence`` picks one at import.
"""

BOUNDED = 0
WITNESS = 1
MONOMIAL = 2
BUDGET = 3


def _in_ideal(p, kgens):
    for g in kgens:
        for a, b in zip(p, g):
            if a < b:
                break
        else:
            return True
    return False


def explore(gamma, moves, kgens, cap):
    """Breadth-first closure of ``gamma`` under ``+-moves`` inside N^q.

    Returns ``(status, order, parent, a, b)``. ``order`` lists visited points
    in discovery order and ``parent[i]`` is the index that discovered point i
    (-1 for gamma). For WITNESS, ``order[a] - order[b]`` is a nonzero vector of
    N^q; for MONOMIAL, ``order[a]`` lies in the monomial ideal ``kgens``.
    """
    gamma = tuple(gamma)
    q = len(gamma)
    order = [gamma]
    parent = [-1]
    if _in_ideal(gamma, kgens):
        return MONOMIAL, order, parent, 0, -1
    index = {gamma: 0}
    masks = []  # distinct support masks in first-seen order
    buckets = {}
    m0 = _mask(gamma)
    masks.append(m0)
    buckets[m0] = [0]
    head = 0
    while head < len(order):
        u = order[head]
        for w in moves:
            for sign in (1, -1):
                v = tuple(a + sign * b for a, b in zip(u, w))
                if min(v, default=0) < 0 or v in index:
                    continue
                if len(order) >= cap:
                    return BUDGET, order, parent, head, -1
                idx = len(order)
                index[v] = idx
                order.append(v)
                parent.append(head)
                if _in_ideal(v, kgens):
                    return MONOMIAL, order, parent, idx, -1
                mv = _mask(v)
                for mb in masks:
                    if mb & ~mv == 0:
                        for j in buckets[mb]:
                            x = order[j]
                            if all(a <= b for a, b in zip(x, v)):
                                return WITNESS, order, parent, idx, j
                    if mv & ~mb == 0:
                        for j in buckets[mb]:
                            x = order[j]
                            if all(a <= b for a, b in zip(v, x)):
                                return WITNESS, order, parent, j, idx
                if mv in buckets:
                    buckets[mv].append(idx)
                else:
                    masks.append(mv)
                    buckets[mv] = [idx]
        head += 1
    return BOUNDED, order, parent, -1, -1


def _mask(p):
    m = 0
    for i, a in enumerate(p):
        if a:
            m |= 1 << i
    return m
