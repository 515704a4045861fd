"""Pure-Python reference kernels.

Same signatures as the compiled ``_ckernels`` module; used when the extension
is unavailable or ``PICARD_PURE_PYTHON`` is set.

Signed permutations are tuples of nonzero ints: entry ``i`` is
``sign * (image + 1)``.  Matrices are row-major tuples of residues.
"""
from itertools import product


def compose_signed(p, q):
    """Return p∘q (apply q first)."""
    out = []
    for x in q:
        if x > 0:
            out.append(p[x - 1])
        else:
            out.append(-p[-x - 1])
    return tuple(out)


def closure(gens, degree, limit):
    identity = tuple(range(1, degree + 1))
    seen = {identity}
    order = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose_signed(g, x)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
                    if len(order) > limit:
                        raise OverflowError(f"closure exceeds {limit} elements")
        frontier = nxt
    return order


def mat_mul(a, b, k, mod):
    return tuple(
        sum(a[i * k + t] * b[t * k + j] for t in range(k)) % mod
        for i in range(k) for j in range(k)
    )


def mat_inv(a, k, mod):
    """Inverse over Z/mod for mod a power of two; None if not invertible."""
    m = [list(a[i * k:(i + 1) * k]) + [int(i == j) for j in range(k)] for i in range(k)]
    for col in range(k):
        piv = next((r for r in range(col, k) if m[r][col] % 2), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        u = pow(m[col][col], -1, mod)
        m[col] = [(x * u) % mod for x in m[col]]
        for r in range(k):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % mod for x, y in zip(m[r], m[col])]
    return tuple(m[i][k + j] for i in range(k) for j in range(k))


def scan_normalizer(k, mod, gens, members, bases, step):
    """Matrices ``b + step*X`` (X entries in [0, mod//step)) normalizing a subgroup.

    ``members`` is the subgroup's element set, ``gens`` its generators.
    """
    members = set(members)
    span = range(mod // step)
    found = []
    for b in bases:
        for x in product(span, repeat=k * k):
            g = tuple((bi + step * xi) % mod for bi, xi in zip(b, x))
            gi = mat_inv(g, k, mod)
            if gi is None:
                continue
            if all(mat_mul(mat_mul(g, s, k, mod), gi, k, mod) in members for s in gens):
                found.append(g)
    return found
