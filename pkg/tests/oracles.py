"""Brute-force references used to cross-check the exact algorithms."""

from __future__ import annotations

from math import gcd, isqrt

import numpy as np


def gl2_matrices(bound: int) -> np.ndarray:
    """All integer matrices with entries in [-bound, bound] and determinant +-1, as rows (m1, n1, m2, n2)."""
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    out = []
    for m1 in r:
        for n1 in r:
            if gcd(int(m1), int(n1)) != 1:
                continue
            m2, n2 = np.meshgrid(r, r, indexing="ij")
            det = m1 * n2 - n1 * m2
            mask = (det == 1) | (det == -1)
            k = int(mask.sum())
            out.append(np.column_stack([np.full(k, m1), np.full(k, n1), m2[mask], n2[mask]]))
    return np.concatenate(out)


def _canonical(X, Y, Z):
    g = np.gcd(np.gcd(np.abs(X), np.abs(Y)), np.abs(Z))
    s = np.sign(Z)
    return X * s // g, Y * s // g, Z * s // g


def _positive(c, d, D):
    """Exact sign test of c + d*sqrt(D) > 0, vectorized."""
    c2, d2 = c * c, d * d * D
    return ((c >= 0) & (d >= 0) & ((c > 0) | (d > 0))) | ((c >= 0) & (d < 0) & (c2 > d2)) | ((c < 0) & (d > 0) & (d2 > c2))


def witness_images(beta: tuple[int, int, int, int], mats: np.ndarray) -> set[tuple[int, int, int]]:
    """Canonical (u, v, w) of every alpha reachable from beta = (u+v sqrt D)/w by a bounded witness.

    A witness has m1 + beta n1 > 0 and alpha = (m2 + beta n2)/(m1 + beta n1).
    """
    u, v, w, D = beta
    m1, n1, m2, n2 = mats.T
    a, b = m2 * w + n2 * u, n2 * v
    c, d = m1 * w + n1 * u, n1 * v
    keep = _positive(c, d, D)
    a, b, c, d = a[keep], b[keep], c[keep], d[keep]
    X, Y, Z = _canonical(a * c - b * d * D, b * c - a * d, c * c - d * d * D)
    return set(zip(X.tolist(), Y.tolist(), Z.tolist()))


def bounded_automorphisms(alpha: tuple[int, int, int, int], bound: int) -> list[tuple[int, int, int, int]]:
    """Every (m1, n1, m2, n2) with entries in [-bound, bound], det +-1, m1 + alpha n1 > 0 and
    n1 alpha^2 + (m1 - n2) alpha - m2 = 0.

    Splitting the quadratic into rational and sqrt(D) parts leaves m1 free for each n1.
    """
    u, v, w, D = alpha
    out = []
    m1 = np.arange(-bound, bound + 1, dtype=np.int64)
    for n1 in range(-bound, bound + 1):
        # sqrt(D) part: 2uv n1 + s v w = 0 with s = m1 - n2
        if (2 * u * n1) % w:
            continue
        s = -2 * u * n1 // w
        rat = n1 * (u * u + v * v * D) + s * u * w
        if rat % (w * w):
            continue
        m2 = rat // (w * w)
        if abs(m2) > bound:
            continue
        n2 = m1 - s
        det = m1 * n2 - n1 * m2
        ok = (np.abs(n2) <= bound) & ((det == 1) | (det == -1)) & _positive(m1 * w + n1 * u, np.full_like(m1, n1 * v), D)
        out.extend((int(a), n1, m2, int(b)) for a, b in zip(m1[ok], n2[ok]))
    return out


def pell_brute(n: int, rhs: int, y_max: int):
    """Smallest (x, y) with x, y > 0 and x^2 - n y^2 = rhs, scanning y up to y_max."""
    for y in range(1, y_max + 1):
        t = n * y * y + rhs
        if t > 0:
            x = isqrt(t)
            if x * x == t:
                return x, y
    return None


def chakravala(n: int) -> tuple[int, int]:
    """Fundamental solution of x^2 - n y^2 = 1 by the cyclic method, independent of continued fractions."""
    a, b, k = isqrt(n), 1, 0
    if a * a == n:
        raise ValueError("square n")
    k = a * a - n
    while True:
        if k == 1:
            return a, b
        if k == -1:
            return a * a + n * b * b, 2 * a * b
        # choose m = -a/b mod |k| minimizing |m^2 - n|
        ak = abs(k)
        m0 = (-a * pow(b, -1, ak)) % ak if ak > 1 else 0
        root = isqrt(n)
        lo = m0 + ((root - m0) // ak) * ak
        m = min((c for c in (lo, lo + ak, lo - ak) if c > 0), key=lambda c: abs(c * c - n))
        a, b, k = (a * m + n * b) // ak, (a + b * m) // ak, (m * m - n) // k


def _icbrt(x: int) -> int:
    r = round(abs(x) ** (1 / 3)) if x < 2**60 else 1 << ((x.bit_length() + 2) // 3)
    while r**3 > x:
        r = (2 * r + x // (r * r)) // 3 if r**3 - x > 3 * r * r else r - 1
    while (r + 1) ** 3 <= x:
        r += 1
    return r


def unit_fundamental(n: int, rhs: int):
    """Fundamental (x, y) of x^2 - n y^2 = rhs derived from the unit group, or None.

    Every norm +-1 unit of Z[sqrt n] is a power of the +1 unit eps, so a -1
    solution squares to eps; +-4 solutions are halves of units eta with
    eta^3 or eta itself landing in Z[sqrt n].
    """
    X, Y = chakravala(n)
    if rhs == 1:
        return X, Y
    if rhs == -1:
        x2, r = divmod(X - 1, 2)
        x = isqrt(x2)
        if r or x * x != x2 or x == 0 or Y % (2 * x):
            return None
        return x, Y // (2 * x)
    # +4: eta = (a + b sqrt n)/2 with eta^k = eps for k in 1, 2, 3:
    # k = 3 gives a^3 - 3a = 2X, k = 2 gives a^2 = 2X + 2
    cands = [(2 * X, 2 * Y)]
    roots = [a for a in range(max(3, _icbrt(2 * X) - 2), _icbrt(2 * X) + 3) if a**3 - 3 * a == 2 * X]
    if isqrt(2 * X + 2) ** 2 == 2 * X + 2:
        roots.append(isqrt(2 * X + 2))
    for a in roots:
        b2, r = divmod(a * a - 4, n)
        b = isqrt(b2)
        if not r and b > 0 and b * b == b2:
            cands.append((a, b))
    plus4 = min(cands)
    if rhs == 4:
        return plus4
    # -4: zeta^2 = eta for zeta = (a + b sqrt n)/2 with a^2 - n b^2 = -4
    a2 = plus4[0] - 2
    a = isqrt(a2)
    if a * a != a2 or a == 0:
        return None
    b2, r = divmod(a * a + 4, n)
    b = isqrt(b2)
    if r or b * b != b2:
        return None
    return a, b


def pell_scan(n: int, rhs: int, y_max: int, chunk: int = 1 << 18):
    """Numpy scan for the smallest y <= y_max with n y^2 + rhs a positive square."""
    for start in range(1, y_max + 1, chunk):
        y = np.arange(start, min(start + chunk, y_max + 1), dtype=np.int64)
        t = n * y * y + rhs
        r = np.sqrt(np.maximum(t, 0).astype(np.float64)).astype(np.int64)
        hit = np.zeros(len(y), dtype=bool)
        for d in (-1, 0, 1):
            s = r + d
            hit |= (s > 0) & (s * s == t)
        idx = np.flatnonzero(hit)
        if len(idx):
            yy = int(y[idx[0]])
            return isqrt(n * yy * yy + rhs), yy
    return None
