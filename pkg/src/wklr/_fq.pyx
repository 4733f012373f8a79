# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled F_p kernels; same API as ``_fq_py``."""
from libc.stdlib cimport malloc, free

cdef enum:
    MAXD = 8
    MAXV = 8
    MAXS = 24


cdef inline int _mod(long x, int p):
    cdef long r = x % p
    return <int>(r + p if r < 0 else r)


cdef int _inv(int a, int p):
    cdef long r = 1, b = a % p
    cdef int e = p - 2
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return <int>r


def rref(rows, int p):
    cdef int nr = len(rows)
    if nr == 0:
        return ()
    cdef int n = len(rows[0])
    cdef int m[MAXS][MAXD]
    cdef int i, j, k, r = 0, col = 0, piv, c, inv, t
    if nr > MAXS or n > MAXD:
        from ._fq_py import rref as slow
        return slow(rows, p)
    for i in range(nr):
        for j in range(n):
            m[i][j] = _mod(rows[i][j], p)
    while r < nr and col < n:
        piv = -1
        for k in range(r, nr):
            if m[k][col]:
                piv = k
                break
        if piv < 0:
            col += 1
            continue
        if piv != r:
            for j in range(n):
                t = m[r][j]
                m[r][j] = m[piv][j]
                m[piv][j] = t
        inv = _inv(m[r][col], p)
        for j in range(n):
            m[r][j] = (m[r][j] * inv) % p
        for k in range(nr):
            if k != r and m[k][col]:
                c = m[k][col]
                for j in range(n):
                    m[k][j] = _mod(m[k][j] - c * m[r][j], p)
        r += 1
        col += 1
    return tuple(tuple(m[i][j] for j in range(n)) for i in range(r))


def reduce_vec(vec, basis, int p):
    cdef int n = len(vec)
    cdef int v[MAXD]
    cdef int j, k, c
    for j in range(n):
        v[j] = _mod(vec[j], p)
    for row in basis:
        k = 0
        while k < n and row[k] == 0:
            k += 1
        c = v[k]
        if c:
            for j in range(n):
                v[j] = _mod(v[j] - c * row[j], p)
    return tuple(v[j] for j in range(n))


def in_span(vec, basis, int p):
    return not any(reduce_vec(vec, basis, p))


def apply(mat, vec, int p):
    cdef long s
    out = []
    for row in mat:
        s = 0
        for a, b in zip(row, vec):
            s += a * b
        out.append(_mod(s, p))
    return tuple(out)


def image_in(mat, src_basis, tgt_basis, int p):
    for v in src_basis:
        if any(reduce_vec(apply(mat, v, p), tgt_basis, p)):
            return False
    return True


def line_reps(int n, basis, int p):
    cdef int lead_pos, code, total, c, k
    pivots = set()
    for row in basis:
        for k in range(n):
            if row[k]:
                pivots.add(k)
                break
    free_cols = [k for k in range(n) if k not in pivots]
    out = []
    for lead_pos in range(len(free_cols)):
        rest = free_cols[lead_pos + 1:]
        total = p ** len(rest)
        for code in range(total):
            v = [0] * n
            v[free_cols[lead_pos]] = 1
            c = code
            for k in rest:
                v[k] = c % p
                c //= p
            out.append(tuple(v))
    return out


def subspaces(int n, int k, int p):
    if k == 0:
        return [()]
    if k > n:
        return []
    seen = set()
    stack = [((), 0)]
    while stack:
        basis, depth = stack.pop()
        if depth == k:
            seen.add(basis)
            continue
        for v in line_reps(n, basis, p):
            stack.append((rref(basis + (v,), p), depth + 1))
    return sorted(seen)


# ------------------------------------------------------------------ flags

cdef struct FlagState:
    int p
    int nv
    int nsteps
    int dims[MAXV]
    int steps[MAXS]
    int *rank      # [(nsteps+1) * MAXV]
    int *rows      # [(nsteps+1) * MAXV * MAXD * MAXD]
    int nedges
    int *etail
    int *ehead
    int *mats      # [nedges * MAXD * MAXD]
    int *ncheck    # [nsteps]
    int *checks    # [nsteps * maxc * 3]
    int maxc


cdef inline int *_row(FlagState *s, int K, int v, int r):
    return s.rows + (((K * MAXV + v) * MAXD + r) * MAXD)


cdef int _reduce_into(FlagState *s, int K, int v, int *w):
    """Reduce w against F^K_v in place; return 1 if the result is nonzero."""
    cdef int r, j, k, c, n = s.dims[v]
    cdef int *row
    for r in range(s.rank[K * MAXV + v]):
        row = _row(s, K, v, r)
        k = 0
        while k < n and row[k] == 0:
            k += 1
        c = w[k]
        if c:
            for j in range(n):
                w[j] = (w[j] - c * row[j]) % s.p
                if w[j] < 0:
                    w[j] += s.p
    for j in range(n):
        if w[j]:
            return 1
    return 0


cdef int _check(FlagState *s, int e, int k, int m):
    cdef int t = s.etail[e], h = s.ehead[e]
    cdef int r, i, j
    cdef long acc
    cdef int w[MAXD]
    cdef int *row
    cdef int *mat = s.mats + e * MAXD * MAXD
    for r in range(s.rank[k * MAXV + t]):
        row = _row(s, k, t, r)
        for i in range(s.dims[h]):
            acc = 0
            for j in range(s.dims[t]):
                acc += mat[i * MAXD + j] * row[j]
            w[i] = <int>(acc % s.p)
        if _reduce_into(s, m, h, w):
            return 0
    return 1


cdef void _push(FlagState *s, int K, int v, int *vec):
    """F^{K+1} = F^K with ``vec`` (already reduced, leading entry 1) added at vertex v, kept in RREF."""
    cdef int u, r, j, n, c, lead, rk
    cdef int *src
    cdef int *dst
    for u in range(s.nv):
        rk = s.rank[K * MAXV + u]
        s.rank[(K + 1) * MAXV + u] = rk
        for r in range(rk):
            src = _row(s, K, u, r)
            dst = _row(s, K + 1, u, r)
            for j in range(s.dims[u]):
                dst[j] = src[j]
    n = s.dims[v]
    lead = 0
    while vec[lead] == 0:
        lead += 1
    rk = s.rank[K * MAXV + v]
    for r in range(rk):
        dst = _row(s, K + 1, v, r)
        c = dst[lead]
        if c:
            for j in range(n):
                dst[j] = (dst[j] - c * vec[j]) % s.p
                if dst[j] < 0:
                    dst[j] += s.p
    dst = _row(s, K + 1, v, rk)
    for j in range(n):
        dst[j] = vec[j]
    s.rank[(K + 1) * MAXV + v] = rk + 1


cdef long _rec(FlagState *s, int K):
    if K == s.nsteps:
        return 1
    cdef int v = s.steps[K]
    cdef int n = s.dims[v]
    cdef int piv[MAXD]
    cdef int freec[MAXD]
    cdef int nfree = 0, lp, nrest, code, total, c, j, r, k, q, ok
    cdef int vec[MAXD]
    cdef int *row
    cdef long acc = 0
    for j in range(n):
        piv[j] = 0
    for r in range(s.rank[K * MAXV + v]):
        row = _row(s, K, v, r)
        k = 0
        while k < n and row[k] == 0:
            k += 1
        piv[k] = 1
    for j in range(n):
        if not piv[j]:
            freec[nfree] = j
            nfree += 1
    for lp in range(nfree):
        nrest = nfree - lp - 1
        total = 1
        for j in range(nrest):
            total *= s.p
        for code in range(total):
            for j in range(n):
                vec[j] = 0
            vec[freec[lp]] = 1
            c = code
            for j in range(nrest):
                vec[freec[lp + 1 + j]] = c % s.p
                c //= s.p
            _push(s, K, v, vec)
            ok = 1
            for q in range(s.ncheck[K]):
                if not _check(s, s.checks[(K * s.maxc + q) * 3], s.checks[(K * s.maxc + q) * 3 + 1],
                              s.checks[(K * s.maxc + q) * 3 + 2]):
                    ok = 0
                    break
            if ok:
                acc += _rec(s, K + 1)
    return acc


def count_flags(int p, dims, steps, mats, checks):
    cdef FlagState s
    cdef int i, j, r, K, q
    cdef long out
    nsteps = len(steps)
    if len(dims) > MAXV or nsteps > MAXS or any(d > MAXD for d in dims):
        from ._fq_py import count_flags as slow
        return slow(p, dims, steps, mats, checks)
    s.p = p
    s.nv = len(dims)
    s.nsteps = nsteps
    for i in range(s.nv):
        s.dims[i] = dims[i]
    for i in range(nsteps):
        s.steps[i] = steps[i]
    s.nedges = len(mats)
    s.maxc = max([len(c) for c in checks] + [1])
    s.rank = <int *>malloc((nsteps + 1) * MAXV * sizeof(int))
    s.rows = <int *>malloc((nsteps + 1) * MAXV * MAXD * MAXD * sizeof(int))
    s.etail = <int *>malloc((s.nedges + 1) * sizeof(int))
    s.ehead = <int *>malloc((s.nedges + 1) * sizeof(int))
    s.mats = <int *>malloc((s.nedges + 1) * MAXD * MAXD * sizeof(int))
    s.ncheck = <int *>malloc((nsteps + 1) * sizeof(int))
    s.checks = <int *>malloc((nsteps + 1) * s.maxc * 3 * sizeof(int))
    try:
        for i in range(s.nv):
            s.rank[i] = 0
        for i, (t, h, mat) in enumerate(mats):
            s.etail[i] = t
            s.ehead[i] = h
            for r, row in enumerate(mat):
                for j, x in enumerate(row):
                    s.mats[i * MAXD * MAXD + r * MAXD + j] = x % p
        for K in range(nsteps):
            s.ncheck[K] = len(checks[K])
            for q, (e, k, m) in enumerate(checks[K]):
                s.checks[(K * s.maxc + q) * 3] = e
                s.checks[(K * s.maxc + q) * 3 + 1] = k
                s.checks[(K * s.maxc + q) * 3 + 2] = m
        out = _rec(&s, 0)
    finally:
        free(s.rank)
        free(s.rows)
        free(s.etail)
        free(s.ehead)
        free(s.mats)
        free(s.ncheck)
        free(s.checks)
    return out
