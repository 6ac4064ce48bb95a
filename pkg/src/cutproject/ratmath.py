"""Rational linear algebra and integer lattice helpers.

Everything here works over ``fractions.Fraction`` (or plain ints), with no
floating point involved, so results are exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1, 1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def solve(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """One particular solution of A x = b, or None if inconsistent."""
    if not a:
        return [] if all(v == 0 for v in b) else None
    n = len(a[0])
    aug = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(a, b)]
    red, pivots = rref(aug)
    for row in red:
        if all(v == 0 for v in row[:-1]) and row[-1] != 0:
            return None
    x = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        if c == n:
            return None
        x[c] = red[r][-1]
    return x


def kernel(a: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of the right nullspace of A."""
    if not a:
        return []
    n = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def clear_denominators(v: list[Fraction]) -> list[int]:
    """Scale a rational vector to a primitive integer vector."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, k >= 1, computed exactly."""
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1) or k == 1:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are small)."""
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def lll_reduce(basis: list[list[int]], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """LLL reduction with exact rational Gram-Schmidt.

    Rows of ``basis`` are the lattice vectors; small dimensions only.
    """
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n <= 1:
        return b

    def gram_schmidt():
        star: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms: list[Fraction] = []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                if norms[j] == 0:
                    mu[i][j] = Fraction(0)
                    continue
                mu[i][j] = Fraction(sum(Fraction(x) * y for x, y in zip(b[i], star[j]))) / norms[j]
                v = [a - mu[i][j] * c for a, c in zip(v, star[j])]
            star.append(v)
            norms.append(sum(x * x for x in v))
        return star, mu, norms

    star, mu, norms = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                q = round(mu[k][j])
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                star, mu, norms = gram_schmidt()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            star, mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return b


def complete_unimodular(v: list[int]) -> list[list[int]]:
    """Complete a primitive integer vector to a unimodular matrix.

    Returns a square matrix U with first column v and |det U| = 1.
    """
    n = len(v)
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g != 1:
        raise ValueError("vector is not primitive")
    # Start from U = I with first column v; clear the gcd chain by 2x2
    # Bezout blocks acting on rows, tracking the inverse action on columns.
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        u[i][0] = v[i]
    # Row-reduce column 0 to +-e_k using Euclid; the accumulated row ops are
    # unimodular, so undoing them on the identity yields the completion.
    work = list(v)
    ops: list[tuple[int, int, int, int, int, int]] = []  # (i, j, a, b, c, d)
    piv = 0
    for j in range(1, n):
        a, b = work[piv], work[j]
        if b == 0:
            continue
        g2, x, y = _xgcd(a, b)
        # rows: new_piv = x*piv + y*j ; new_j = -(b/g2)*piv + (a/g2)*j
        p, q = -(b // g2), a // g2
        work[piv], work[j] = g2, 0
        ops.append((piv, j, x, y, p, q))
    if work[piv] < 0:
        ops.append((piv, piv, -1, 0, 0, -1))
        work[piv] = -work[piv]
    assert work[piv] == 1 and all(work[j] == 0 for j in range(n) if j != piv)
    # Apply inverse ops to identity columns to get the full unimodular matrix
    # with first column v: U = (product of op-inverses) applied to e-basis.
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for (i, j, a, bb, c, d) in reversed(ops):
        if i == j:
            for col in range(n):
                m[i][col] = -m[i][col]
            continue
        det = a * d - bb * c
        assert det in (1, -1)
        # inverse of [[a, b], [c, d]] is [[d, -b], [-c, a]] / det
        for col in range(n):
            ri, rj = m[i][col], m[j][col]
            m[i][col] = (d * ri - bb * rj) * det
            m[j][col] = (-c * ri + a * rj) * det
    # Columns of m: first column should be v.
    assert [m[i][0] for i in range(n)] == list(v)
    return m


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0
