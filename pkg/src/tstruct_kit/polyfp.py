"""Dense univariate polynomial arithmetic over F_p.

Polynomials are lists of ints (coefficient of x**i at index i), always
reduced mod p and trimmed.  Degrees here are tiny (bounded by endomorphism
dimensions), so the quadratic algorithms are fine.

The one nontrivial service is :func:`coprime_split`: given f, produce a
factorization f = u * v with gcd(u, v) = 1 and both factors proper, or None
if f is a power of a single irreducible.  That is exactly what exact
idempotent extraction through the Chinese remainder theorem needs; full
factorization is never required.
"""

from typing import List, Optional, Tuple

Poly = List[int]


def trim(f: Poly) -> Poly:
    while f and f[-1] == 0:
        f.pop()
    return f


def add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    out = [0] * n
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out[i] = (a + b) % p
    return trim(out)


def sub(f: Poly, g: Poly, p: int) -> Poly:
    return add(f, [(-c) % p for c in g], p)


def mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return trim(out)


def divmod_poly(f: Poly, g: Poly, p: int) -> Tuple[Poly, Poly]:
    g = trim(list(g))
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = trim(list(f))
    inv_lead = pow(g[-1], p - 2, p)
    q: Poly = [0] * max(0, len(f) - len(g) + 1)
    while len(f) >= len(g):
        shift = len(f) - len(g)
        c = (f[-1] * inv_lead) % p
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        trim(f)
    return trim(q), f


def gcd(f: Poly, g: Poly, p: int) -> Poly:
    f, g = trim(list(f)), trim(list(g))
    while g:
        f, g = g, divmod_poly(f, g, p)[1]
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [(c * inv) % p for c in f]
    return f


def xgcd(f: Poly, g: Poly, p: int) -> Tuple[Poly, Poly, Poly]:
    """Monic gcd d plus a, b with a*f + b*g = d."""
    r0, r1 = trim(list(f)), trim(list(g))
    a0, a1 = [1], []
    b0, b1 = [], [1]
    while r1:
        q, r = divmod_poly(r0, r1, p)
        r0, r1 = r1, r
        a0, a1 = a1, sub(a0, mul(q, a1, p), p)
        b0, b1 = b1, sub(b0, mul(q, b1, p), p)
    if r0:
        inv = pow(r0[-1], p - 2, p)
        r0 = [(c * inv) % p for c in r0]
        a0 = [(c * inv) % p for c in a0]
        b0 = [(c * inv) % p for c in b0]
    return r0, a0, b0


def deriv(f: Poly, p: int) -> Poly:
    return trim([(i * c) % p for i, c in enumerate(f)][1:])


def pow_mod(base: Poly, e: int, f: Poly, p: int) -> Poly:
    """base**e mod f."""
    result: Poly = [1]
    b = divmod_poly(list(base), f, p)[1]
    while e:
        if e & 1:
            result = divmod_poly(mul(result, b, p), f, p)[1]
        b = divmod_poly(mul(b, b, p), f, p)[1]
        e >>= 1
    return result


def _pth_root(f: Poly, p: int) -> Poly:
    # f = g(x**p) over F_p means f = g**p with the same coefficients.
    return trim([f[i] for i in range(0, len(f), p)])


_ROOT_SCAN_LIMIT = 1 << 17
_EDF_TRIES = 64


def _eval_at(f: Poly, a: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * a + c) % p
    return acc


def _equal_degree_split(f: Poly, k: int, p: int) -> Optional[Tuple[Poly, Poly]]:
    """Split f = product of >= 2 distinct irreducibles, all of degree k."""
    n = len(f) - 1
    if k == 1 and p <= _ROOT_SCAN_LIMIT:
        for a in range(p):
            if _eval_at(f, a, p) == 0:
                lin = [(-a) % p, 1]
                return lin, divmod_poly(f, lin, p)[0]
        return None
    import random

    rng = random.Random(0)
    for _ in range(_EDF_TRIES):
        h = trim([rng.randrange(p) for _ in range(n)])
        if len(h) - 1 < 1:
            continue
        g = gcd(h, f, p)
        if 0 < len(g) - 1 < n:
            return g, divmod_poly(f, g, p)[0]
        if p % 2 == 1:
            t = pow_mod(h, (p**k - 1) // 2, f, p)
            g = gcd(sub(t, [1], p), f, p)
        else:
            t: Poly = []
            power = divmod_poly(list(h), f, p)[1]
            for _ in range(k):
                t = add(t, power, p)
                power = divmod_poly(mul(power, power, p), f, p)[1]
            g = gcd(t, f, p)
        if 0 < len(g) - 1 < n:
            return g, divmod_poly(f, g, p)[0]
    return None


def _ddf_split(f: Poly, p: int) -> Optional[Tuple[Poly, Poly]]:
    """Coprime split of a squarefree f via distinct-degree gcds.

    When every irreducible factor has the same degree the distinct-degree
    sieve is blind, so the equal-degree search takes over.
    """
    n = len(f) - 1
    h: Poly = [0, 1]
    for k in range(1, n + 1):
        h = pow_mod(h, p, f, p)
        g = gcd(sub(h, [0, 1], p), f, p)
        dg = len(g) - 1
        if 0 < dg < n:
            return g, divmod_poly(f, g, p)[0]
        if dg == n:
            if n == k:
                return None
            return _equal_degree_split(f, k, p)
    return None


def coprime_split(f: Poly, p: int) -> Optional[Tuple[Poly, Poly]]:
    """Split f = u * v with gcd(u, v) = 1, both of positive degree.

    Returns None when no split was found.  That covers the case where f
    is a power of one irreducible (no split exists) and the rare case
    where the bounded equal-degree search gives up, so callers must not
    read None as a primality certificate.
    """
    f = trim(list(f))
    if len(f) - 1 < 2:
        return None
    d = deriv(f, p)
    if not d:
        # f = g(x**p) = g**p; any split of g lifts by taking p-th powers.
        g = _pth_root(f, p)
        split = coprime_split(g, p)
        if split is None:
            return None
        u, v = split
        up, vp = [1], [1]
        for _ in range(p):
            up = mul(up, u, p)
            vp = mul(vp, v, p)
        return up, vp
    c = gcd(f, d, p)
    if len(c) - 1 == 0:
        return _ddf_split(f, p)
    u = divmod_poly(f, c, p)[0]
    # Push shared factors to one side until the two parts are coprime.
    pside, qside = u, c
    while True:
        a = gcd(pside, qside, p)
        if len(a) - 1 == 0:
            break
        pside = mul(pside, a, p)
        qside = divmod_poly(qside, a, p)[0]
    if len(qside) - 1 > 0 and len(pside) - 1 > 0:
        return pside, qside
    # f is primary: f = q**e with q = squarefree part; split q if reducible.
    q = u
    split = _ddf_split(q, p) if len(q) - 1 >= 2 else None
    if split is None:
        return None
    g, hq = split
    e = (len(f) - 1) // (len(q) - 1)
    ge, he = [1], [1]
    for _ in range(e):
        ge = mul(ge, g, p)
        he = mul(he, hq, p)
    return ge, he


def crt_idempotent_poly(u: Poly, v: Poly, p: int) -> Poly:
    """g with g = 0 mod u, g = 1 mod v; g(x) is idempotent mod u*v."""
    d, a, b = xgcd(u, v, p)
    if len(d) - 1 != 0:
        raise ValueError("factors are not coprime")
    # a*u + b*v = 1, so a*u = 1 mod v and = 0 mod u.
    return divmod_poly(mul(a, u, p), mul(u, v, p), p)[1]
