# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled class exploration kernel; mirrors ``_explore_py.explore`` exactly."""

from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport int64_t, uint64_t



cdef enum:
    BOUNDED = 0
    WITNESS = 1
    MONOMIAL = 2
    BUDGET = 3


cdef inline uint64_t _mask(int64_t* p, int q) nogil:
    cdef uint64_t m = 0
    cdef int i
    for i in range(q):
        if p[i] != 0:
            m |= (<uint64_t>1) << i
    return m


cdef inline bint _leq(int64_t* x, int64_t* y, int q) nogil:
    cdef int i
    for i in range(q):
        if x[i] > y[i]:
            return False
    return True


cdef struct Bucket:
    uint64_t mask
    int64_t* items
    Py_ssize_t n
    Py_ssize_t cap


cdef class _State:
    cdef int64_t* pts
    cdef Py_ssize_t n
    cdef Py_ssize_t cap
    cdef int q
    cdef Bucket* buckets
    cdef Py_ssize_t nb
    cdef Py_ssize_t bcap

    def __cinit__(self, int q):
        self.q = q
        self.cap = 1024
        self.n = 0
        self.pts = <int64_t*>malloc(self.cap * (q if q > 0 else 1) * sizeof(int64_t))
        self.bcap = 16
        self.nb = 0
        self.buckets = <Bucket*>malloc(self.bcap * sizeof(Bucket))
        if self.pts == NULL or self.buckets == NULL:
            raise MemoryError()

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.buckets != NULL:
            for i in range(self.nb):
                free(self.buckets[i].items)
            free(self.buckets)
        free(self.pts)

    cdef int64_t* push(self, tuple v) except NULL:
        cdef Py_ssize_t i
        cdef int64_t* tmp
        if self.n == self.cap:
            self.cap *= 2
            tmp = <int64_t*>realloc(self.pts, self.cap * (self.q if self.q > 0 else 1) * sizeof(int64_t))
            if tmp == NULL:
                raise MemoryError()
            self.pts = tmp
        cdef int64_t* p = self.pts + self.n * self.q
        for i in range(self.q):
            p[i] = v[i]
        self.n += 1
        return p

    cdef int add_to_bucket(self, uint64_t m, Py_ssize_t idx) except -1:
        cdef Py_ssize_t b
        cdef Bucket* bk
        cdef void* tmp
        for b in range(self.nb):
            if self.buckets[b].mask == m:
                break
        else:
            if self.nb == self.bcap:
                self.bcap *= 2
                tmp = realloc(self.buckets, self.bcap * sizeof(Bucket))
                if tmp == NULL:
                    raise MemoryError()
                self.buckets = <Bucket*>tmp
            b = self.nb
            self.nb += 1
            self.buckets[b].mask = m
            self.buckets[b].n = 0
            self.buckets[b].cap = 16
            self.buckets[b].items = <int64_t*>malloc(16 * sizeof(int64_t))
            if self.buckets[b].items == NULL:
                raise MemoryError()
        bk = &self.buckets[b]
        if bk.n == bk.cap:
            bk.cap *= 2
            tmp = realloc(bk.items, bk.cap * sizeof(int64_t))
            if tmp == NULL:
                raise MemoryError()
            bk.items = <int64_t*>tmp
        bk.items[bk.n] = idx
        bk.n += 1
        return 0

    cdef (Py_ssize_t, Py_ssize_t) comparable(self, Py_ssize_t idx, uint64_t mv) nogil:
        """(bigger, smaller) indices of a comparable pair involving idx, or (-1, -1)."""
        cdef Py_ssize_t b, k, j
        cdef Bucket* bk
        cdef int q = self.q
        cdef int64_t* v = self.pts + idx * q
        for b in range(self.nb):
            bk = &self.buckets[b]
            if bk.mask & ~mv == 0:
                for k in range(bk.n):
                    j = bk.items[k]
                    if _leq(self.pts + j * q, v, q):
                        return (idx, j)
            if mv & ~bk.mask == 0:
                for k in range(bk.n):
                    j = bk.items[k]
                    if _leq(v, self.pts + j * q, q):
                        return (j, idx)
        return (-1, -1)


cdef bint _in_ideal(tuple p, list kgens):
    cdef tuple g
    cdef Py_ssize_t i
    for g in kgens:
        for i in range(len(g)):
            if <int64_t>p[i] < <int64_t>g[i]:
                break
        else:
            return True
    return False


def explore(gamma, moves, kgens, Py_ssize_t cap):
    cdef tuple g0 = tuple(gamma)
    cdef int q = len(g0)
    cdef list kg = [tuple(g) for g in kgens]
    cdef list order = [g0]
    cdef list parent = [-1]
    if _in_ideal(g0, kg):
        return MONOMIAL, order, parent, 0, -1
    if q > 62:
        raise OverflowError("dimension too large for the compiled kernel")

    cdef Py_ssize_t nm = len(moves)
    cdef int64_t* mv = <int64_t*>malloc((nm * q if nm * q > 0 else 1) * sizeof(int64_t))
    if mv == NULL:
        raise MemoryError()
    cdef int64_t* buf = <int64_t*>malloc((q if q > 0 else 1) * sizeof(int64_t))
    if buf == NULL:
        free(mv)
        raise MemoryError()

    cdef _State st = _State(q)
    cdef dict index = {g0: 0}
    cdef Py_ssize_t head = 0, idx, i, k, s
    cdef int64_t* u
    cdef int64_t* p
    cdef bint ok
    cdef int sign
    cdef tuple v
    cdef uint64_t m
    cdef (Py_ssize_t, Py_ssize_t) pair

    try:
        for k in range(nm):
            for i in range(q):
                mv[k * q + i] = moves[k][i]
        p = st.push(g0)
        st.add_to_bucket(_mask(p, q), 0)
        while head < st.n:
            for k in range(nm):
                for s in range(2):
                    sign = 1 if s == 0 else -1
                    u = st.pts + head * q
                    ok = True
                    for i in range(q):
                        buf[i] = u[i] + sign * mv[k * q + i]
                        if buf[i] < 0:
                            ok = False
                            break
                    if not ok:
                        continue
                    v = tuple([buf[i] for i in range(q)])
                    if v in index:
                        continue
                    if st.n >= cap:
                        return BUDGET, order, parent, head, -1
                    idx = st.n
                    index[v] = idx
                    order.append(v)
                    parent.append(head)
                    p = st.push(v)
                    if kg and _in_ideal(v, kg):
                        return MONOMIAL, order, parent, idx, -1
                    m = _mask(p, q)
                    pair = st.comparable(idx, m)
                    if pair[0] >= 0:
                        return WITNESS, order, parent, pair[0], pair[1]
                    st.add_to_bucket(m, idx)
            head += 1
        return BOUNDED, order, parent, -1, -1
    finally:
        free(mv)
        free(buf)
