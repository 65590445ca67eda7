"""Exact arithmetic over prime fields: linear algebra and univariate tools.

Matrices are numpy int64 arrays with entries reduced mod p.  All primes in
use are below 2^31, so a product of two reduced entries stays below 2^62
and row elimination never overflows int64.  Matrix products split one
factor into 16-bit halves so the accumulated dot products stay in range.

Polynomials are Python lists of ints, ascending powers, no trailing zeros
(the zero polynomial is the empty list).
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

import numpy as np

MAX_MODULUS = 2**31  # int64-safety bound for the elimination kernels


# ---------------------------------------------------------------------------
# scalars


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin, deterministic for anything below 3.3 * 10^24."""
    if n < 2:
        return False
    small = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    for q in small:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, p: int) -> int:
    """Legendre symbol in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod(a: int, p: int) -> Optional[int]:
    """A square root of a mod an odd prime p, or None for a non-residue.

    Primes congruent to 3 mod 4 use the one-exponentiation shortcut
    a^((p+1)/4); the general case falls back to Tonelli-Shanks.
    """
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
        return x
    # Tonelli-Shanks
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, x = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        x = x * b % p
    return x


# ---------------------------------------------------------------------------
# matrices mod p (numpy int64)


def _check_modulus(p: int) -> None:
    if p >= MAX_MODULUS:
        raise ValueError(f"modulus {p} too large for the int64 kernels")


def rref_mod(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (rref, pivot column list)."""
    _check_modulus(p)
    m = np.array(mat, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = m[r] * inv % p
        other = np.nonzero(m[:, c])[0]
        other = other[other != r]
        if other.size:
            m[other] = (m[other] - np.outer(m[other, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank_mod(mat: np.ndarray, p: int) -> int:
    return len(rref_mod(mat, p)[1])


def kernel_mod(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel, one vector per row, shape (nullity, cols)."""
    m, pivots = rref_mod(mat, p)
    return kernel_from_rref(m, pivots, p)


def kernel_from_rref(m: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Right-kernel basis read off an already reduced matrix."""
    cols = m.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-int(m[row, f])) % p
    return basis


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) % p via a 16-bit split of b; inner dim up to 2^15."""
    _check_modulus(p)
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if a.shape[-1] > 32768:
        raise ValueError("inner dimension too large for the overflow-free product")
    hi = b >> 16
    lo = b & 0xFFFF
    return ((a @ hi % p) * 65536 + a @ lo) % p


# ---------------------------------------------------------------------------
# univariate polynomials over GF(p)


def ptrim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def pdeg(f: Sequence[int]) -> int:
    return len(f) - 1  # zero polynomial gets -1


def padd(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % p
    return ptrim(out)


def pscale(f: Sequence[int], c: int, p: int) -> list[int]:
    c %= p
    return ptrim([a * c % p for a in f])


def pmul(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return ptrim(out)


def pdivmod(f: Sequence[int], g: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = pdeg(g)
    inv = pow(g[-1], -1, p)
    q = [0] * max(0, len(f) - dg)
    while pdeg(f) >= dg and f:
        k = pdeg(f) - dg
        c = f[-1] * inv % p
        q[k] = c
        for i, b in enumerate(g):
            f[i + k] = (f[i + k] - c * b) % p
        ptrim(f)
    return ptrim(q), f


def pmod(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    return pdivmod(f, g, p)[1]


def pgcd(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    a, b = ptrim(list(f)), ptrim(list(g))
    while b:
        a, b = b, pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def peval(f: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def pinterp(xs: Sequence[int], ys: Sequence[int], p: int) -> list[int]:
    """Lagrange interpolation through distinct nodes xs."""
    n = len(xs)
    poly: list[int] = []
    base = [1]
    # Newton form: build incrementally for O(n^2)
    coeffs: list[int] = []
    for i in range(n):
        val = peval(poly, xs[i], p)
        denom = peval(base, xs[i], p)
        c = (ys[i] - val) * pow(denom, -1, p) % p
        coeffs.append(c)
        poly = padd(poly, pscale(base, c, p), p)
        base = pmul(base, [(-xs[i]) % p, 1], p)
    return poly


def ppow_mod(f: Sequence[int], e: int, g: Sequence[int], p: int) -> list[int]:
    """f^e mod g over GF(p), by square and multiply."""
    result = [1]
    base = pmod(f, g, p)
    while e:
        if e & 1:
            result = pmod(pmul(result, base, p), g, p)
        base = pmod(pmul(base, base, p), g, p)
        e >>= 1
    return result


def divide_out_root(f: list[int], x0: int, p: int) -> tuple[list[int], int]:
    """Divide (x - x0)^k out of f for the maximal k; returns (quotient, k)."""
    k = 0
    lin = [(-x0) % p, 1]
    while f and peval(f, x0, p) == 0:
        f, rem = pdivmod(f, lin, p)
        assert not rem
        k += 1
    return f, k


def rational_roots(f: Sequence[int], p: int, rng: random.Random) -> list[int]:
    """All roots of f in GF(p), sorted; multiplicities not repeated."""
    f = ptrim(list(f))
    if not f or pdeg(f) == 0:
        return []
    x = [0, 1]
    xp = ppow_mod(x, p, f, p)
    h = pgcd(padd(xp, pscale(x, -1, p), p), f, p)
    roots: list[int] = []

    def split(g: list[int]) -> None:
        if pdeg(g) <= 0:
            return
        if pdeg(g) == 1:
            roots.append((-g[0]) * pow(g[1], -1, p) % p)
            return
        while True:
            c = rng.randrange(p)
            probe = ppow_mod([c, 1], (p - 1) // 2, g, p)
            probe = padd(probe, [-1], p)
            g1 = pgcd(probe, g, p)
            if 0 < pdeg(g1) < pdeg(g):
                split(g1)
                split(pdivmod(g, g1, p)[0])
                return

    split(h)
    return sorted(roots)


# ---------------------------------------------------------------------------
# resultants of binary forms via formal-degree bookkeeping


def _res_actual(f: list[int], g: list[int], p: int) -> int:
    """Resultant with respect to the actual degrees of f and g."""
    a, b = list(f), list(g)
    da, db = pdeg(a), pdeg(b)
    if da < 0 or db < 0:
        return 0
    sign = 1
    if da < db:
        a, b, da, db = b, a, db, da
        if (da * db) % 2 == 1:
            sign = -sign
    res = 1
    while True:
        if db == 0:
            res = res * pow(b[0], da, p) % p
            return res * sign % p
        r = pmod(a, b, p)
        dr = pdeg(r)
        if dr < 0:
            return 0
        res = res * pow(b[-1], da - dr, p) % p
        if (da * db) % 2 == 1:
            sign = -sign
        a, b, da, db = b, r, db, dr


def resultant_formal(f: Sequence[int], g: Sequence[int], n: int, m: int, p: int) -> int:
    """Resultant of binary forms of formal degrees n and m, given by their
    dehomogenized coefficient lists (ascending).  A drop in actual degree
    means a root at infinity; two simultaneous drops make the resultant 0,
    one drop contributes the other form's leading coefficient.
    """
    f = ptrim(list(c % p for c in f))
    g = ptrim(list(c % p for c in g))
    if not f or not g:
        return 0
    kf = n - pdeg(f)
    kg = m - pdeg(g)
    if kf < 0 or kg < 0:
        raise ValueError("formal degree below actual degree")
    if kf > 0 and kg > 0:
        return 0
    # Sylvester-determinant bookkeeping for roots at infinity: expanding
    # along the first column, a drop of k in f contributes (-1)^(k*m) times
    # lc(g)^k, while a drop of k in g contributes lc(f)^k with no sign.
    res = 1
    if kf > 0:
        res = pow(g[-1], kf, p)
        if (kf * m) % 2 == 1:
            res = -res % p
    if kg > 0:
        res = pow(f[-1], kg, p)
    return res * _res_actual(f, g, p) % p
