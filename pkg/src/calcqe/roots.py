"""Univariate real root isolation over Q.

Dense coefficient lists are stored highest degree first.  Isolation uses
Descartes' rule of signs on the Möbius-transformed polynomial with plain
bisection (the Vincent-Collins-Akritas scheme).
"""
from __future__ import annotations

from gmpy2 import mpq

Dense = list  # list[mpq], highest degree first


def strip(f: Dense) -> Dense:
    i = 0
    while i < len(f) and not f[i]:
        i += 1
    return f[i:]


def degree(f: Dense) -> int:
    return len(f) - 1


def horner(f: Dense, x) -> mpq:
    acc = mpq(0)
    for c in f:
        acc = acc * x + c
    return acc


def sign_at(f: Dense, x) -> int:
    v = horner(f, x)
    return (v > 0) - (v < 0)


def deriv(f: Dense) -> Dense:
    n = len(f) - 1
    return [c * (n - i) for i, c in enumerate(f[:-1])]


def divmod_dense(f: Dense, g: Dense) -> tuple[Dense, Dense]:
    f = list(f)
    dg = len(g) - 1
    if dg < 0:
        raise ZeroDivisionError
    q = []
    lc = g[0]
    while len(f) - 1 >= dg and f:
        c = f[0] / lc
        q.append(c)
        for i in range(len(g)):
            f[i] -= c * g[i]
        f.pop(0)
    return q or [mpq(0)], strip(f)


def monic(f: Dense) -> Dense:
    return [c / f[0] for c in f]


def gcd_dense(f: Dense, g: Dense) -> Dense:
    f, g = strip(list(f)), strip(list(g))
    while g:
        _, r = divmod_dense(f, g)
        f, g = g, r
    return monic(f) if f else f


def squarefree_part(f: Dense) -> Dense:
    g = gcd_dense(f, deriv(f))
    if len(g) <= 1:
        return monic(f)
    q, r = divmod_dense(f, g)
    assert not r
    return monic(strip(q))


def cauchy_bound(f: Dense) -> mpq:
    """A power of two strictly exceeding the absolute value of every root."""
    lc = abs(f[0])
    m = max((abs(c) / lc for c in f[1:]), default=mpq(0))
    b = 1 + m
    p = mpq(1)
    while p <= b:
        p *= 2
    return p


def _taylor_shift(f: Dense, a) -> Dense:
    # f(x + a)
    g = list(f)
    n = len(g)
    for i in range(n):
        for j in range(1, n - i):
            g[j] += a * g[j - 1]
    return g


def descartes_count(f: Dense, a, b) -> int:
    """Sign variations bounding the number of roots of f in (a, b)."""
    n = len(f) - 1
    # g(x) = f(a + (b - a) x) maps (0, 1) onto (a, b)
    w = b - a
    g = _taylor_shift(f, a)
    scale = mpq(1)
    for i in range(n, -1, -1):
        g[i] *= scale
        scale *= w
    # (x + 1)^n g(1 / (x + 1)) maps (0, inf) onto (0, 1)
    h = _taylor_shift(list(reversed(g)), 1)
    count = 0
    last = 0
    for c in h:
        if c:
            s = 1 if c > 0 else -1
            if last and s != last:
                count += 1
            last = s
    return count


def isolate(f: Dense) -> tuple[list[mpq], list[tuple[mpq, mpq]]]:
    """Isolate the real roots of a square-free polynomial.

    Returns the rational roots found exactly and open isolating intervals
    ``(a, b)`` (rational endpoints, neither a root) for the remaining ones,
    each interval containing exactly one root.
    """
    f = strip(f)
    if len(f) <= 1:
        return [], []
    exact: list[mpq] = []
    if len(f) == 2:
        return [-f[1] / f[0]], []
    B = cauchy_bound(f)
    intervals: list[tuple[mpq, mpq]] = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        v = descartes_count(f, a, b)
        if v == 0:
            continue
        if v == 1:
            intervals.append((a, b))
            continue
        m = (a + b) / 2
        if horner(f, m) == 0:
            exact.append(m)
            eps = (b - a) / 4
            # shrink until m is the only root in [m - eps, m + eps]
            while horner(f, m - eps) == 0 or horner(f, m + eps) == 0 or descartes_count(f, m - eps, m + eps) != 1:
                eps /= 2
            stack.append((a, m - eps))
            stack.append((m + eps, b))
        else:
            stack.append((a, m))
            stack.append((m, b))
    return exact, intervals


def sturm_sequence(f: Dense) -> list[Dense]:
    seq = [strip(list(f)), strip(deriv(f))]
    while seq[-1] and len(seq[-1]) > 1:
        _, r = divmod_dense(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def sturm_count(f: Dense, a=None, b=None) -> int:
    """Number of distinct real roots of f in (a, b]; ``None`` means infinite."""
    seq = sturm_sequence(f)

    def variations(x, side) -> int:
        signs = []
        for g in seq:
            if x is None:
                lead = g[0]
                s = (lead > 0) - (lead < 0)
                if side < 0 and (len(g) - 1) % 2:
                    s = -s
            else:
                s = sign_at(g, x)
            if s:
                signs.append(s)
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    return variations(a, -1) - variations(b, 1)
