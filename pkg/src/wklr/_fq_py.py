"""Linear algebra over F_p on small dense vectors (reference implementation)."""


def rref(rows, p):
    """Reduced row echelon basis of the span of ``rows`` as a tuple of tuples."""
    m = [list(r) for r in rows]
    out = []
    if not m:
        return ()
    n = len(m[0])
    col = 0
    r = 0
    while r < len(m) and col < n:
        piv = -1
        for k in range(r, len(m)):
            if m[k][col] % p:
                piv = k
                break
        if piv < 0:
            col += 1
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][col] % p:
                c = m[k][col]
                m[k] = [(a - c * b) % p for a, b in zip(m[k], m[r])]
        r += 1
        col += 1
    for row in m[:r]:
        out.append(tuple(row))
    return tuple(out)


def _pivot(row):
    for k, x in enumerate(row):
        if x:
            return k
    return -1


def reduce_vec(vec, basis, p):
    v = [x % p for x in vec]
    for row in basis:
        k = _pivot(row)
        c = v[k]
        if c:
            v = [(a - c * b) % p for a, b in zip(v, row)]
    return tuple(v)


def in_span(vec, basis, p):
    return not any(reduce_vec(vec, basis, p))


def apply(mat, vec, p):
    return tuple(sum(a * b for a, b in zip(row, vec)) % p for row in mat)


def image_in(mat, src_basis, tgt_basis, p):
    for v in src_basis:
        if not in_span(apply(mat, v, p), tgt_basis, p):
            return False
    return True


def line_reps(n, basis, p):
    """One normalized vector for each line of ``F_p^n / span(basis)``."""
    pivots = {_pivot(r) for r in basis}
    free = [k for k in range(n) if k not in pivots]
    out = []
    for lead_pos, lead in enumerate(free):
        rest = free[lead_pos + 1:]
        total = p ** len(rest)
        for code in range(total):
            v = [0] * n
            v[lead] = 1
            c = code
            for k in rest:
                v[k] = c % p
                c //= p
            out.append(tuple(v))
    return out


def subspaces(n, k, p):
    """All ``k``-dimensional subspaces of ``F_p^n`` as RREF bases."""
    if k == 0:
        return [()]
    if k > n:
        return []
    out = []
    seen = set()

    def grow(basis, depth):
        if depth == k:
            if basis not in seen:
                seen.add(basis)
                out.append(basis)
            return
        for v in line_reps(n, basis, p):
            grow(rref(basis + (v,), p), depth + 1)

    grow((), 0)
    return sorted(out)


def count_flags(p, dims, steps, mats, checks):
    """Number of flags with the given step labels satisfying the incidence checks.

    ``mats[e] = (tail, head, matrix)``.  ``checks[K]`` lists ``(e, k, m)``:
    after ``K + 1`` steps are placed, ``f_e`` must map ``F^k_tail`` into ``F^m_head``.
    """
    nv = len(dims)
    flags = [[() for _ in range(nv)]]

    def ok(K):
        for e, k, m in checks[K]:
            t, h, mat = mats[e]
            if not image_in(mat, flags[k][t], flags[m][h], p):
                return False
        return True

    def rec(K):
        if K == len(steps):
            return 1
        v = steps[K]
        cur = flags[-1]
        total = 0
        for vec in line_reps(dims[v], cur[v], p):
            nxt = list(cur)
            nxt[v] = rref(cur[v] + (vec,), p)
            flags.append(nxt)
            if ok(K):
                total += rec(K + 1)
            flags.pop()
        return total

    return rec(0)
