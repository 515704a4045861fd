# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels; mirror ``_pykernels`` exactly."""
from libc.stdlib cimport malloc, free


def compose_signed(tuple p, tuple q):
    cdef Py_ssize_t i, n = len(q)
    cdef long x
    out = [0] * n
    for i in range(n):
        x = q[i]
        if x > 0:
            out[i] = p[x - 1]
        else:
            out[i] = -p[-x - 1]
    return tuple(out)


def closure(list gens, int degree, long limit):
    cdef Py_ssize_t i, j, g, ng = len(gens), n = degree
    cdef long x
    cdef long *buf = <long *> malloc(sizeof(long) * (ng * n + n + 1))
    cdef long *cur = buf + ng * n
    if buf == NULL:
        raise MemoryError()
    try:
        for g in range(ng):
            for j in range(n):
                buf[g * n + j] = gens[g][j]
        identity = tuple(range(1, degree + 1))
        seen = {identity}
        order = [identity]
        frontier = [identity]
        while frontier:
            nxt = []
            for item in frontier:
                for j in range(n):
                    cur[j] = item[j]
                for g in range(ng):
                    out = [0] * n
                    for j in range(n):
                        x = cur[j]
                        if x > 0:
                            out[j] = buf[g * n + x - 1]
                        else:
                            out[j] = -buf[g * n - x - 1]
                    y = tuple(out)
                    if y not in seen:
                        seen.add(y)
                        order.append(y)
                        nxt.append(y)
                        if len(order) > limit:
                            raise OverflowError(f"closure exceeds {limit} elements")
            frontier = nxt
        return order
    finally:
        free(buf)


cdef inline void _mul(long *a, long *b, long *c, int k, long mod) nogil:
    cdef int i, j, t
    cdef long s
    for i in range(k):
        for j in range(k):
            s = 0
            for t in range(k):
                s += a[i * k + t] * b[t * k + j]
            c[i * k + j] = s % mod


cdef int _inv(long *a, long *out, int k, long mod) nogil:
    cdef long m[4][8]
    cdef int i, j, r, col, piv
    cdef long u, f, tmp, e, base, p
    for i in range(k):
        for j in range(k):
            m[i][j] = a[i * k + j]
            m[i][k + j] = 1 if i == j else 0
    for col in range(k):
        piv = -1
        for r in range(col, k):
            if m[r][col] & 1:
                piv = r
                break
        if piv < 0:
            return 0
        if piv != col:
            for j in range(2 * k):
                tmp = m[col][j]
                m[col][j] = m[piv][j]
                m[piv][j] = tmp
        # inverse of an odd number mod 2^e by Newton iteration
        u = m[col][col]
        p = u
        for i in range(6):
            p = (p * (2 - u * p)) % mod
        if p < 0:
            p += mod
        for j in range(2 * k):
            m[col][j] = (m[col][j] * p) % mod
        for r in range(k):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                for j in range(2 * k):
                    e = (m[r][j] - f * m[col][j]) % mod
                    if e < 0:
                        e += mod
                    m[r][j] = e
    for i in range(k):
        for j in range(k):
            out[i * k + j] = m[i][k + j]
    return 1


cdef inline long _code(long *a, int kk, long mod) nogil:
    cdef long c = 0
    cdef int i
    for i in range(kk - 1, -1, -1):
        c = c * mod + a[i]
    return c


def mat_mul(tuple a, tuple b, int k, long mod):
    cdef long x[16]
    cdef long y[16]
    cdef long z[16]
    cdef int i
    for i in range(k * k):
        x[i] = a[i]
        y[i] = b[i]
    _mul(x, y, z, k, mod)
    return tuple([z[i] for i in range(k * k)])


def mat_inv(tuple a, int k, long mod):
    cdef long x[16]
    cdef long z[16]
    cdef int i
    for i in range(k * k):
        x[i] = a[i] % mod
    if not _inv(x, z, k, mod):
        return None
    return tuple([z[i] for i in range(k * k)])


def scan_normalizer(int k, long mod, gens, members, bases, long step):
    if k > 4:
        raise ValueError("compiled scan supports k <= 4")
    cdef int kk = k * k, i, s, ng = len(gens), ok
    cdef long span = mod // step
    cdef long g[16]
    cdef long gi[16]
    cdef long t1[16]
    cdef long t2[16]
    cdef long b[16]
    cdef long x[16]
    cdef long *sg = <long *> malloc(sizeof(long) * kk * max(ng, 1))
    codes = set()
    for m in members:
        for i in range(kk):
            t1[i] = m[i] % mod
        codes.add(_code(t1, kk, mod))
    found = []
    try:
        for s in range(ng):
            for i in range(kk):
                sg[s * kk + i] = gens[s][i] % mod
        for base in bases:
            for i in range(kk):
                b[i] = base[i]
                x[i] = 0
            while True:
                for i in range(kk):
                    g[i] = (b[i] + step * x[i]) % mod
                if _inv(g, gi, k, mod):
                    ok = 1
                    for s in range(ng):
                        _mul(g, sg + s * kk, t1, k, mod)
                        _mul(t1, gi, t2, k, mod)
                        if _code(t2, kk, mod) not in codes:
                            ok = 0
                            break
                    if ok:
                        found.append(tuple([g[i] for i in range(kk)]))
                # odometer over X, last entry fastest (matches itertools.product)
                i = kk - 1
                while i >= 0:
                    x[i] += 1
                    if x[i] < span:
                        break
                    x[i] = 0
                    i -= 1
                if i < 0:
                    break
        return found
    finally:
        free(sg)
