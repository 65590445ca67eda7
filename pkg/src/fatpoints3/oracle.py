"""Finite-field verification engine for the space classes.

The checkers in :mod:`fatpoints3.criteria` are combinatorial.  This module
provides independent numerical evidence over large prime fields:

* fix the smooth quadric surface ``xw = yz`` in projective 3-space, which
  the Segre map identifies with a product of two projective lines;
* draw a second random quadric and intersect: for a squarefree
  discriminant the intersection is a smooth quartic curve of genus one;
* sample base points on that curve, impose vanishing conditions exactly,
  and read dimensions off the rank of the condition matrix;
* probe the resulting spaces of forms for unassigned base points and for
  point pairs or tangent directions the forms fail to separate.

A firing probe is a verified witness, so probe evidence is one sided:
"fired" proves a defect, "did not fire" is only a sampling statement.
Two hunts go beyond random sampling.  When the curve degree of the class
(4d minus the sum of multiplicities) equals 1, a resultant hunt locates
the single forced base point on the curve; when it equals 2, a second
hunt builds a point pair on the curve that no form in the space can tell
apart.  Both witnesses are verified against the full space before they
are reported.

Everything is deterministic: all randomness is drawn from SHA-256 derived
per-purpose streams, so a (prime, seed) pair fixes the geometry, the
sampled points, and every probe, independent of call order.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import gfp
from .divclass import ThreefoldClass, edim3, format_class, vdim3

PRIMES = (2147483647, 1073741827, 1073741831)
DEFAULT_SEEDS = (0, 1, 2, 3, 4)
DEFAULT_POINTS = 16
DEFAULT_PROBES = 64
MAX_DEGREE = 16
MAX_MULT = 5

_QUAD_PAIRS = (
    (0, 0), (0, 1), (0, 2), (0, 3), (1, 1),
    (1, 2), (1, 3), (2, 2), (2, 3), (3, 3),
)
_QPOS = {pair: k for k, pair in enumerate(_QUAD_PAIRS)}


def derive_seed(*parts: object) -> int:
    """Deterministic 64-bit stream seed from a label and parameters."""
    blob = "|".join(str(part) for part in parts).encode("ascii")
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


# ---------------------------------------------------------------------------
# quadrics and the product-of-lines chart


def _qbar_coeffs(p: int) -> tuple[int, ...]:
    """The fixed quadric xw - yz as a coefficient vector."""
    q = [0] * 10
    q[_QPOS[(0, 3)]] = 1
    q[_QPOS[(1, 2)]] = p - 1
    return tuple(q)


def _quad_eval(q: Sequence[int], z: Sequence[int], p: int) -> int:
    total = 0
    for (i, j), c in zip(_QUAD_PAIRS, q):
        total += c * z[i] % p * z[j]
    return total % p


def _quad_grad(q: Sequence[int], z: Sequence[int], p: int) -> list[int]:
    g = [0, 0, 0, 0]
    for (i, j), c in zip(_QUAD_PAIRS, q):
        g[i] += c * z[j]
        g[j] += c * z[i]
    return [x % p for x in g]


def _segre_forms(q: Sequence[int], p: int) -> tuple[list[int], list[int], list[int]]:
    """Restriction of a quadric to the chart (s,t),(u,v) -> (su,sv,tu,tv).

    The pullback is A(s,t) u^2 + B(s,t) uv + C(s,t) v^2 with quadratic
    coefficient forms; each is returned as a list ascending in s (t = 1),
    formal degree 2.
    """
    g = lambda i, j: q[_QPOS[(i, j)]]
    a = [g(2, 2), g(0, 2), g(0, 0)]
    b = [g(2, 3), (g(0, 3) + g(1, 2)) % p, g(0, 1)]
    c = [g(3, 3), g(1, 3), g(1, 1)]
    return ([x % p for x in a], [x % p for x in b], [x % p for x in c])


def _form_eval(coeffs: Sequence[int], s: int, t: int, n: int, p: int) -> int:
    """Value of the degree-n binary form with ascending coefficients."""
    full = list(coeffs) + [0] * (n + 1 - len(coeffs))
    val = 0
    for i in range(n + 1):
        val = (val + full[i] * pow(s, i, p) % p * pow(t, n - i, p)) % p
    return val


def _squarefree_binary_form(f: Sequence[int], n: int, p: int) -> bool:
    """Squarefree test for a binary form via the resultant of its partials."""
    full = [c % p for c in f] + [0] * (n + 1 - len(f))
    fs = gfp.ptrim([i * full[i] % p for i in range(1, n + 1)])
    ft = gfp.ptrim([(n - i) * full[i] % p for i in range(n)])
    if not fs or not ft:
        return False
    return gfp.resultant_formal(fs, ft, n - 1, n - 1, p) != 0


def _norm_pair(a: int, b: int, p: int) -> tuple[int, int]:
    a %= p
    b %= p
    if b:
        return (a * pow(b, -1, p) % p, 1)
    if not a:
        raise ValueError("zero parameter pair")
    return (1, 0)


def _quad_roots(a: int, b: int, c: int, p: int) -> list[tuple[int, int]]:
    """Projective roots (u:v) of a u^2 + b uv + c v^2 over GF(p)."""
    a, b, c = a % p, b % p, c % p
    if a == 0 and b == 0 and c == 0:
        raise ValueError("identically zero fiber form")
    out: list[tuple[int, int]] = []
    if c:
        disc = (b * b - 4 * a * c) % p
        root = gfp.sqrt_mod(disc, p)
        if root is not None:
            inv2c = pow(2 * c, -1, p)
            v1 = (-b + root) * inv2c % p
            v2 = (-b - root) * inv2c % p
            out = [(1, v1)] if v1 == v2 else [(1, v1), (1, v2)]
    else:
        out.append((0, 1))
        if b:
            out.append((1, (-a) * pow(b, -1, p) % p))
    return sorted(out)


# ---------------------------------------------------------------------------
# the sampled geometry


@dataclass(frozen=True)
class DPoint:
    """A rational point of the sampled curve, in every chart we need."""

    st: tuple[int, int]
    uv: tuple[int, int]
    coords: tuple[int, int, int, int]
    chart: int
    affine: tuple[int, int, int]


def _make_dpoint(s: int, t: int, u: int, v: int, p: int) -> DPoint:
    st = _norm_pair(s, t, p)
    uv = _norm_pair(u, v, p)
    raw = (st[0] * uv[0] % p, st[0] * uv[1] % p, st[1] * uv[0] % p, st[1] * uv[1] % p)
    chart = next(k for k in range(4) if raw[k])
    inv = pow(raw[chart], -1, p)
    coords = tuple(c * inv % p for c in raw)
    affine = tuple(coords[j] for j in range(4) if j != chart)
    return DPoint(st, uv, coords, chart, affine)


@dataclass
class Geometry:
    """A fixed prime field, a random smooth curve, and points on it."""

    prime: int
    seed: int
    attempt: int
    qprime: tuple[int, ...]
    forms: tuple[list[int], list[int], list[int]]
    delta: list[int]
    points: tuple[DPoint, ...]
    _rows: dict = field(default_factory=dict, repr=False)


def _fiber_quadratic(geom: Geometry, s: int, t: int) -> tuple[int, int, int]:
    p = geom.prime
    a, b, c = geom.forms
    return (
        _form_eval(a, s, t, 2, p),
        _form_eval(b, s, t, 2, p),
        _form_eval(c, s, t, 2, p),
    )


def _smooth_at(geom: Geometry, pt: DPoint) -> bool:
    p = geom.prime
    jac = np.array(
        [_quad_grad(_qbar_coeffs(p), pt.coords, p), _quad_grad(geom.qprime, pt.coords, p)],
        dtype=np.int64,
    )
    return gfp.rank_mod(jac, p) == 2


def _curve_value(geom: Geometry, pt: DPoint) -> int:
    p = geom.prime
    if _quad_eval(_qbar_coeffs(p), pt.coords, p):
        return 1
    return _quad_eval(geom.qprime, pt.coords, p)


def _sample_curve_point(geom: Geometry, rng: random.Random) -> Optional[DPoint]:
    p = geom.prime
    for _ in range(512):
        k = rng.randrange(p + 1)
        s, t = ((1, 0) if k == p else (k, 1))
        a, b, c = _fiber_quadratic(geom, s, t)
        if a == 0 and b == 0 and c == 0:
            continue
        roots = _quad_roots(a, b, c, p)
        if not roots:
            continue
        u, v = roots[rng.randrange(len(roots))]
        pt = _make_dpoint(s, t, u, v, p)
        if _smooth_at(geom, pt):
            return pt
    return None


def build_geometry(prime: int, seed: int, npoints: int = DEFAULT_POINTS) -> Geometry:
    """Draw a smooth curve configuration with npoints sampled points.

    Retries with fresh randomness until the discriminant of the sampled
    curve is squarefree (which certifies smoothness) and enough distinct
    smooth rational points have been found.
    """
    if not gfp.is_probable_prime(prime):
        raise ValueError(f"{prime} is not prime")
    if prime < 65537 or prime >= gfp.MAX_MODULUS:
        raise ValueError("prime must lie in [65537, 2^31) for the exact kernels")
    for attempt in range(256):
        rng = random.Random(derive_seed("geometry", prime, seed, attempt))
        qprime = tuple(rng.randrange(prime) for _ in _QUAD_PAIRS)
        forms = _segre_forms(qprime, prime)
        a, b, c = forms
        delta = gfp.padd(
            gfp.pmul(b, b, prime),
            gfp.pscale(gfp.pmul(a, c, prime), -4, prime),
            prime,
        )
        if not _squarefree_binary_form(delta, 4, prime):
            continue
        geom = Geometry(prime, seed, attempt, qprime, forms, delta, ())
        prng = random.Random(derive_seed("points", prime, seed, attempt))
        points: list[DPoint] = []
        seen: set[tuple[int, ...]] = set()
        ok = True
        for _ in range(64 * npoints):
            if len(points) == npoints:
                break
            pt = _sample_curve_point(geom, prng)
            if pt is None:
                ok = False
                break
            if pt.coords in seen:
                continue
            if _curve_value(geom, pt):
                ok = False
                break
            seen.add(pt.coords)
            points.append(pt)
        if ok and len(points) == npoints:
            geom.points = tuple(points)
            return geom
    raise RuntimeError(f"no smooth configuration found for prime={prime} seed={seed}")


@lru_cache(maxsize=96)
def get_geometry(prime: int, seed: int, npoints: int = DEFAULT_POINTS) -> Geometry:
    return build_geometry(prime, seed, npoints)


# ---------------------------------------------------------------------------
# monomials, derivative rows, condition matrices


@lru_cache(maxsize=None)
def monomial_exponents(d: int) -> np.ndarray:
    """Exponent tuples of the degree-d monomials, graded-lex, as an array."""
    if d < 0:
        return np.zeros((0, 4), dtype=np.int64)
    tuples = [
        (a, b, c, d - a - b - c)
        for a in range(d, -1, -1)
        for b in range(d - a, -1, -1)
        for c in range(d - a - b, -1, -1)
    ]
    tuples.sort(reverse=True)
    return np.array(tuples, dtype=np.int64)


def _falling_table() -> np.ndarray:
    t = np.zeros((MAX_DEGREE + 1, MAX_MULT), dtype=np.int64)
    for e in range(MAX_DEGREE + 1):
        for a in range(MAX_MULT):
            if a <= e:
                v = 1
                for i in range(a):
                    v *= e - i
                t[e, a] = v
    return t


_FF = _falling_table()
_ALPHAS = sorted(
    (
        (i, j, k)
        for i in range(MAX_MULT)
        for j in range(MAX_MULT)
        for k in range(MAX_MULT)
        if i + j + k <= MAX_MULT - 1
    ),
    key=lambda a: (sum(a), a),
)


def _point_rows(geom: Geometry, idx: int, d: int) -> np.ndarray:
    """All vanishing-condition rows at one sampled point, orders 0..MAX_MULT-1.

    Row layout follows the graded order on derivative multi-indices, so the
    first C(m+2,3) rows are exactly the conditions for multiplicity m.
    """
    key = (idx, d)
    cached = geom._rows.get(key)
    if cached is not None:
        return cached
    p = geom.prime
    pt = geom.points[idx]
    exps = monomial_exponents(d)
    cols = [j for j in range(4) if j != pt.chart]
    ea = exps[:, cols]
    pw = np.ones((3, d + 1), dtype=np.int64)
    for j in range(3):
        for t in range(1, d + 1):
            pw[j, t] = pw[j, t - 1] * pt.affine[j] % p
    rows = np.empty((len(_ALPHAS), exps.shape[0]), dtype=np.int64)
    for ri, alpha in enumerate(_ALPHAS):
        acc = np.ones(exps.shape[0], dtype=np.int64)
        for j in range(3):
            e = ea[:, j]
            a = alpha[j]
            acc = acc * _FF[e, a] % p
            acc = acc * pw[j, np.maximum(e - a, 0)] % p
        rows[ri] = acc
    geom._rows[key] = rows
    return rows


def _mult_rows(m: int) -> int:
    return math.comb(m + 2, 3)


def conditions_matrix(geom: Geometry, clazz: ThreefoldClass) -> np.ndarray:
    """Stacked interpolation conditions for the class at the sampled points."""
    c = clazz.normalized()
    if any(m < 0 for m in c.mults):
        raise ValueError("negative multiplicity")
    if c.d < 0 or c.d > MAX_DEGREE:
        raise ValueError(f"degree {c.d} outside the supported range 0..{MAX_DEGREE}")
    if c.d >= geom.prime:
        raise ValueError("field characteristic too small for this degree")
    if any(m > MAX_MULT for m in c.mults):
        raise ValueError(f"multiplicity above the supported bound {MAX_MULT}")
    if c.r > len(geom.points):
        raise ValueError("geometry holds fewer sampled points than the class needs")
    ncols = monomial_exponents(c.d).shape[0]
    blocks = [_point_rows(geom, i, c.d)[: _mult_rows(m)] for i, m in enumerate(c.mults)]
    if not blocks:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.vstack(blocks)


@dataclass
class SystemData:
    """One exact interpolation computation for one class on one geometry."""

    clazz: ThreefoldClass
    prime: int
    seed: int
    n_cols: int
    n_rows: int
    rank: int
    h0: int
    dim: int
    h1: int
    vdim: int
    edim: int
    curve_degree: int
    kernel: np.ndarray
    geometry: Geometry

    def to_dict(self) -> dict:
        return {
            "class": format_class(self.clazz),
            "prime": self.prime,
            "seed": self.seed,
            "monomials": self.n_cols,
            "conditions": self.n_rows,
            "rank": self.rank,
            "h0": self.h0,
            "dim": self.dim,
            "h1": self.h1,
            "vdim": self.vdim,
            "edim": self.edim,
            "curve_degree": self.curve_degree,
        }


def solve_system(geom: Geometry, clazz: ThreefoldClass) -> SystemData:
    """Exact dimension of the class's space of forms on this geometry."""
    c = clazz.normalized()
    if any(m < 0 for m in c.mults):
        raise ValueError("negative multiplicity")
    if c.d < -3:
        raise ValueError("degree below -3 is outside the model")
    vd = vdim3(c)
    ed = edim3(c)
    e = 4 * c.d - sum(c.mults)
    if c.d < 0:
        data = SystemData(
            c, geom.prime, geom.seed, 0, 0, 0, 0, -1, -(vd + 1), vd, ed, e,
            np.zeros((0, 0), dtype=np.int64), geom,
        )
    else:
        mat = conditions_matrix(geom, c)
        red, pivots = gfp.rref_mod(mat, geom.prime)
        kernel = gfp.kernel_from_rref(red, pivots, geom.prime)
        rank = len(pivots)
        h0 = mat.shape[1] - rank
        data = SystemData(
            c, geom.prime, geom.seed, mat.shape[1], mat.shape[0], rank,
            h0, h0 - 1, h0 - (vd + 1), vd, ed, e, kernel, geom,
        )
    if data.dim < data.edim or data.h1 < 0:
        raise AssertionError(
            f"interpolation rank exceeded the condition count for {format_class(c)}"
        )
    return data


# ---------------------------------------------------------------------------
# evaluation helpers


def monomial_values(z: Sequence[int], d: int, p: int) -> np.ndarray:
    exps = monomial_exponents(d)
    pw = np.ones((4, d + 1), dtype=np.int64)
    for j in range(4):
        zj = z[j] % p
        for t in range(1, d + 1):
            pw[j, t] = pw[j, t - 1] * zj % p
    out = pw[0, exps[:, 0]]
    for j in range(1, 4):
        out = out * pw[j, exps[:, j]] % p
    return out


def derivative_values(z: Sequence[int], v: Sequence[int], d: int, p: int) -> np.ndarray:
    """Directional derivative of every degree-d monomial at z along v."""
    exps = monomial_exponents(d)
    pw = np.ones((4, d + 1), dtype=np.int64)
    for j in range(4):
        zj = z[j] % p
        for t in range(1, d + 1):
            pw[j, t] = pw[j, t - 1] * zj % p
    total = np.zeros(exps.shape[0], dtype=np.int64)
    for k in range(4):
        vk = v[k] % p
        if vk == 0:
            continue
        factor = exps[:, k] % p * vk % p
        prod = np.ones(exps.shape[0], dtype=np.int64)
        for j in range(4):
            drop = 1 if j == k else 0
            prod = prod * pw[j, np.maximum(exps[:, j] - drop, 0)] % p
        total = (total + factor * prod) % p
    return total


def section_values(kernel: np.ndarray, row: np.ndarray, p: int) -> np.ndarray:
    """Evaluate every basis form against a monomial (or derivative) row."""
    if kernel.size == 0:
        return np.zeros(kernel.shape[0], dtype=np.int64)
    return gfp.matmul_mod(kernel, row.reshape(-1, 1), p).ravel()


def _rank_le_1(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    a = a % p
    b = b % p
    if not a.any() or not b.any():
        return True
    i = int(np.nonzero(a)[0][0])
    if int(b[i]) == 0:
        return False
    lam = int(b[i]) * pow(int(a[i]), -1, p) % p
    return not ((a * lam - b) % p).any()


def _random_proj_point(rng: random.Random, p: int) -> tuple[int, int, int, int]:
    while True:
        z = tuple(rng.randrange(p) for _ in range(4))
        if any(z):
            return z


# ---------------------------------------------------------------------------
# resultant hunts on the curve


@lru_cache(maxsize=None)
def _bihom_indices(d: int) -> tuple[np.ndarray, np.ndarray]:
    exps = monomial_exponents(d)
    return exps[:, 2] + exps[:, 3], exps[:, 1] + exps[:, 3]


def bihom_matrix(coeffs: np.ndarray, d: int, p: int) -> np.ndarray:
    """Coefficient matrix of a degree-d form pulled back to the chart.

    Entry (i, j) multiplies s^(d-i) t^i u^(d-j) v^j.
    """
    rows, cols = _bihom_indices(d)
    phi = np.zeros((d + 1, d + 1), dtype=np.int64)
    np.add.at(phi, (rows, cols), coeffs % p)
    return phi % p


def hunt_common_zeros(
    geom: Geometry,
    sections: np.ndarray,
    d: int,
    assigned: Sequence[DPoint],
    exclude: frozenset,
    rng: random.Random,
) -> list[DPoint]:
    """Rational curve points, off the assigned set, where every form vanishes.

    Eliminates the fiber coordinate by a resultant against the curve
    equation, interpolated from 4d+1 exact evaluations; shared roots of two
    (occasionally three) random combinations cut the candidates down, the
    fibers of assigned points are divided out and re-checked through their
    partner points, and every candidate is verified against the full basis
    before being reported.  Output is therefore never a false positive.
    """
    p = geom.prime
    if sections.shape[0] == 0 or d < 1:
        return []
    xs = list(range(4 * d + 1))
    xpow = np.ones((len(xs), d + 1), dtype=np.int64)
    for n, x in enumerate(xs):
        acc = 1
        for i in range(d, -1, -1):
            xpow[n, i] = acc  # x^(d-i)
            acc = acc * x % p
    gamma_fibers = [_fiber_quadratic(geom, x, 1) for x in xs]

    def combo_resultant() -> Optional[list[int]]:
        for _ in range(8):
            cvec = np.array([rng.randrange(p) for _ in range(sections.shape[0])],
                            dtype=np.int64)
            gg = gfp.matmul_mod(cvec.reshape(1, -1), sections, p).ravel()
            if gg.any():
                break
        else:
            return None
        phi = bihom_matrix(gg, d, p)
        fibers = gfp.matmul_mod(xpow, phi, p)
        vals = []
        for n in range(len(xs)):
            gam = gfp.ptrim([gamma_fibers[n][0], gamma_fibers[n][1], gamma_fibers[n][2]])
            sec = gfp.ptrim([int(c) for c in fibers[n]])
            vals.append(gfp.resultant_formal(gam, sec, 2, d, p))
        poly = gfp.pinterp(xs, vals, p)
        return poly if poly else None

    polys = [combo_resultant() for _ in range(2)]
    polys = [q for q in polys if q is not None]
    if not polys:
        return []
    g = polys[0]
    for q in polys[1:]:
        g = gfp.pgcd(g, q, p)
    for pt in assigned:
        if pt.st[1] == 1:
            g, _ = gfp.divide_out_root(g, pt.st[0], p)
    if gfp.pdeg(g) > 2 * len(assigned) + 6:
        extra = combo_resultant()
        if extra is not None:
            g2 = gfp.pgcd(g, extra, p)
            for pt in assigned:
                if pt.st[1] == 1:
                    g2, _ = gfp.divide_out_root(g2, pt.st[0], p)
            g = g2
    roots = gfp.rational_roots(g, p, rng)

    fibers = [(x, 1) for x in roots] + [(1, 0)] + [pt.st for pt in assigned]
    assigned_coords = {pt.coords for pt in assigned}
    found: dict[tuple, DPoint] = {}
    for s, t in fibers:
        a, b, c = _fiber_quadratic(geom, s, t)
        if a == 0 and b == 0 and c == 0:
            continue
        for u, v in _quad_roots(a, b, c, p):
            z = _make_dpoint(s, t, u, v, p)
            if z.coords in assigned_coords or z.coords in exclude:
                continue
            ev = section_values(sections, monomial_values(z.coords, d, p), p)
            if not ev.any():
                found.setdefault(z.coords, z)
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------------------
# probes


@dataclass
class Witness:
    kind: str
    data: dict

    def to_dict(self) -> dict:
        return {"kind": self.kind, "data": self.data}


@dataclass
class ProbeReport:
    target: str
    fired: bool
    witnesses: list[Witness]
    checked: dict[str, int]
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "fired": self.fired,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "checked": dict(sorted(self.checked.items())),
            "notes": list(self.notes),
        }


def _zero_row_witness(
    kind: str, pts: list, evs: np.ndarray, extra: Optional[dict] = None
) -> Optional[Witness]:
    for i in range(evs.shape[0]):
        if not evs[i].any():
            data = {"point": list(map(int, pts[i]))}
            if extra:
                data.update(extra)
            return Witness(kind, data)
    return None


def probe_base_locus(
    geom: Geometry,
    clazz: ThreefoldClass,
    nprobes: int = DEFAULT_PROBES,
    sysd: Optional[SystemData] = None,
) -> ProbeReport:
    """Hunt for base points the class did not assign.

    Categories, cheapest decisive first: points on the line spanned by the
    two deepest assigned points, fresh points on the curve, generic points
    of the ambient space, and (only when the curve degree is exactly 1) the
    exact resultant hunt for the single forced curve point.
    """
    c = clazz.normalized()
    checked: dict[str, int] = {}
    if any(m < 0 for m in c.mults):
        return ProbeReport(
            "base-locus", True,
            [Witness("invalid-multiplicity", {"class": format_class(c)})], checked,
        )
    if sysd is None:
        sysd = solve_system(geom, c)
    p, d = geom.prime, c.d
    if sysd.h0 == 0:
        return ProbeReport(
            "base-locus", True,
            [Witness("empty-system", {"h0": 0})], checked,
        )
    kernel = sysd.kernel
    assigned = list(geom.points[: c.r])
    assigned_coords = {pt.coords for pt in assigned}
    tag = format_class(c)

    def batch_eval(points: list) -> np.ndarray:
        rows = np.stack([monomial_values(z, d, p) for z in points])
        return gfp.matmul_mod(rows, kernel.T, p)

    if c.r >= 1:
        rng = random.Random(derive_seed("probe-line", p, geom.seed, tag, nprobes))
        pts = []
        if c.r >= 2:
            p1, p2 = assigned[0].coords, assigned[1].coords
            for _ in range(nprobes):
                lam, mu = rng.randrange(1, p), rng.randrange(1, p)
                pts.append(tuple((lam * p1[j] + mu * p2[j]) % p for j in range(4)))
        else:
            p1 = assigned[0].coords
            for _ in range(4):
                direction = _random_proj_point(rng, p)
                for _ in range(max(1, nprobes // 4)):
                    lam = rng.randrange(1, p)
                    z = tuple((p1[j] + lam * direction[j]) % p for j in range(4))
                    if any(z):
                        pts.append(z)
        pts = [z for z in pts if z not in assigned_coords]
        if pts:
            checked["on-line"] = len(pts)
            w = _zero_row_witness("on-line", pts, batch_eval(pts), {"through": "deepest pair"})
            if w:
                return ProbeReport("base-locus", True, [w], checked)

    rng = random.Random(derive_seed("probe-curve", p, geom.seed, tag, nprobes))
    pts = []
    for _ in range(4 * nprobes):
        if len(pts) == nprobes:
            break
        z = _sample_curve_point(geom, rng)
        if z is not None and z.coords not in assigned_coords:
            pts.append(z.coords)
    if pts:
        checked["on-curve"] = len(pts)
        w = _zero_row_witness("on-curve", pts, batch_eval(pts))
        if w:
            return ProbeReport("base-locus", True, [w], checked)

    rng = random.Random(derive_seed("probe-generic", p, geom.seed, tag, nprobes))
    pts = []
    for _ in range(4 * nprobes):
        if len(pts) == nprobes:
            break
        z = _random_proj_point(rng, p)
        if z not in assigned_coords:
            pts.append(z)
    checked["generic"] = len(pts)
    w = _zero_row_witness("generic", pts, batch_eval(pts))
    if w:
        return ProbeReport("base-locus", True, [w], checked)

    notes: tuple[str, ...] = ()
    if sysd.curve_degree == 1 and d >= 1:
        rng = random.Random(derive_seed("probe-hunt", p, geom.seed, tag))
        found = hunt_common_zeros(geom, kernel, d, assigned, frozenset(), rng)
        checked["isolated-hunt"] = 1
        if found:
            z = found[0]
            return ProbeReport(
                "base-locus", True,
                [Witness("isolated-on-curve", {"point": list(map(int, z.coords))})],
                checked,
            )
        notes = ("exact hunt found no unassigned curve point",)

    return ProbeReport("base-locus", False, [], checked, notes)


def probe_separation(
    geom: Geometry,
    clazz: ThreefoldClass,
    nprobes: int = DEFAULT_PROBES,
    sysd: Optional[SystemData] = None,
) -> ProbeReport:
    """Hunt for point pairs or tangent directions the forms cannot separate.

    A witness is a pair (or a point with a tangent direction) whose joint
    evaluation matrix against the whole basis has rank at most 1.  The two
    curve-degree gated hunts cover the structurally forced failures: a
    degree-1 class has a base point (which defeats every pairing), and a
    degree-2 class identifies each curve point with a partner.
    """
    c = clazz.normalized()
    checked: dict[str, int] = {}
    if any(m < 0 for m in c.mults):
        return ProbeReport(
            "separation", True,
            [Witness("invalid-multiplicity", {"class": format_class(c)})], checked,
        )
    if sysd is None:
        sysd = solve_system(geom, c)
    p, d = geom.prime, c.d
    if sysd.h0 <= 1:
        return ProbeReport(
            "separation", True,
            [Witness("insufficient-sections", {"h0": sysd.h0})], checked,
        )
    kernel = sysd.kernel
    assigned = list(geom.points[: c.r])
    assigned_coords = {pt.coords for pt in assigned}
    tag = format_class(c)

    def ev(z: Sequence[int]) -> np.ndarray:
        return section_values(kernel, monomial_values(z, d, p), p)

    def pair_witness(kind: str, z1, z2, extra=None) -> Optional[Witness]:
        if _rank_le_1(ev(z1), ev(z2), p):
            data = {"pair": [list(map(int, z1)), list(map(int, z2))]}
            if extra:
                data.update(extra)
            return Witness(kind, data)
        return None

    # pairs on the line spanned by the two deepest assigned points
    if c.r >= 1:
        rng = random.Random(derive_seed("sep-line", p, geom.seed, tag, nprobes))
        pairs = []
        if c.r >= 2:
            p1, p2 = assigned[0].coords, assigned[1].coords
            for _ in range(nprobes):
                l1, l2 = rng.randrange(1, p), rng.randrange(1, p)
                if l1 == l2:
                    continue
                z1 = tuple((p1[j] + l1 * p2[j]) % p for j in range(4))
                z2 = tuple((p1[j] + l2 * p2[j]) % p for j in range(4))
                pairs.append((z1, z2))
        else:
            p1 = assigned[0].coords
            for _ in range(max(1, nprobes // 2)):
                direction = _random_proj_point(rng, p)
                l1, l2 = rng.randrange(1, p), rng.randrange(1, p)
                if l1 == l2:
                    continue
                z1 = tuple((p1[j] + l1 * direction[j]) % p for j in range(4))
                z2 = tuple((p1[j] + l2 * direction[j]) % p for j in range(4))
                pairs.append((z1, z2))
        pairs = [
            (z1, z2) for z1, z2 in pairs
            if z1 not in assigned_coords and z2 not in assigned_coords and z1 != z2
        ]
        checked["pair-on-line"] = len(pairs)
        for z1, z2 in pairs:
            w = pair_witness("pair-on-line", z1, z2)
            if w:
                return ProbeReport("separation", True, [w], checked)

    # random pairs: curve/curve, generic/generic, mixed
    def fresh_curve(rng: random.Random) -> Optional[tuple]:
        for _ in range(64):
            z = _sample_curve_point(geom, rng)
            if z is not None and z.coords not in assigned_coords:
                return z.coords
        return None

    for cat, mk1, mk2 in (
        ("pair-on-curve", fresh_curve, fresh_curve),
        ("pair-generic", _random_proj_point, _random_proj_point),
        ("pair-mixed", fresh_curve, _random_proj_point),
    ):
        rng = random.Random(derive_seed("sep-" + cat, p, geom.seed, tag, nprobes))
        count = 0
        for _ in range(nprobes):
            z1 = mk1(rng) if mk1 is not _random_proj_point else _random_proj_point(rng, p)
            z2 = mk2(rng) if mk2 is not _random_proj_point else _random_proj_point(rng, p)
            if z1 is None or z2 is None or z1 == z2:
                continue
            if z1 in assigned_coords or z2 in assigned_coords:
                continue
            count += 1
            w = pair_witness(cat, z1, z2)
            if w:
                checked[cat] = count
                return ProbeReport("separation", True, [w], checked)
        checked[cat] = count

    # tangent directions, generic and along the curve
    rng = random.Random(derive_seed("sep-tangent", p, geom.seed, tag, nprobes))
    count = 0
    for _ in range(nprobes):
        z = _random_proj_point(rng, p)
        if z in assigned_coords:
            continue
        v = _random_proj_point(rng, p)
        if _rank_le_1(np.array(z, dtype=np.int64), np.array(v, dtype=np.int64), p):
            continue
        count += 1
        dv = section_values(kernel, derivative_values(z, v, d, p), p)
        if _rank_le_1(ev(z), dv, p):
            checked["tangent-generic"] = count
            return ProbeReport(
                "separation", True,
                [Witness("tangent-generic",
                         {"point": list(map(int, z)), "direction": list(map(int, v))})],
                checked,
            )
    checked["tangent-generic"] = count

    rng = random.Random(derive_seed("sep-tangent-curve", p, geom.seed, tag, nprobes))
    count = 0
    for _ in range(nprobes):
        zpt = _sample_curve_point(geom, rng)
        if zpt is None or zpt.coords in assigned_coords:
            continue
        jac = np.array(
            [_quad_grad(_qbar_coeffs(p), zpt.coords, p),
             _quad_grad(geom.qprime, zpt.coords, p)],
            dtype=np.int64,
        )
        basis = gfp.kernel_mod(jac, p)
        zvec = np.array(zpt.coords, dtype=np.int64)
        v = None
        candidates = list(basis) + ([basis.sum(axis=0) % p] if basis.size else [])
        for cand in candidates:
            if cand.any() and not _rank_le_1(zvec, cand, p):
                v = tuple(int(x) for x in cand)
                break
        if v is None:
            continue
        count += 1
        dv = section_values(kernel, derivative_values(zpt.coords, v, d, p), p)
        if _rank_le_1(ev(zpt.coords), dv, p):
            checked["tangent-on-curve"] = count
            return ProbeReport(
                "separation", True,
                [Witness("tangent-on-curve",
                         {"point": list(map(int, zpt.coords)), "direction": list(v)})],
                checked,
            )
    checked["tangent-on-curve"] = count

    notes: list[str] = []
    # a forced base point defeats every pairing
    if sysd.curve_degree == 1 and d >= 1:
        rng = random.Random(derive_seed("sep-hunt-base", p, geom.seed, tag))
        found = hunt_common_zeros(geom, kernel, d, assigned, frozenset(), rng)
        checked["base-point-hunt"] = 1
        if found:
            z = found[0].coords
            other = _random_proj_point(random.Random(derive_seed("sep-pair", p, geom.seed, tag)), p)
            w = pair_witness("unseparated-base-point", z, other)
            if w:
                return ProbeReport("separation", True, [w], checked)
        notes.append("degree-1 hunt found no base point")

    # curve degree 2: each curve point has a partner no form separates
    if sysd.curve_degree == 2 and d >= 1:
        rng = random.Random(derive_seed("sep-conjugate", p, geom.seed, tag))
        tried = 0
        for _ in range(8):
            zpt = _sample_curve_point(geom, rng)
            if zpt is None or zpt.coords in assigned_coords:
                continue
            tried += 1
            w1 = ev(zpt.coords)
            if not w1.any():
                other = _random_proj_point(rng, p)
                w = pair_witness("unseparated-base-point", zpt.coords, other)
                if w:
                    checked["conjugate-hunt"] = tried
                    return ProbeReport("separation", True, [w], checked)
                continue
            coeff_kernel = gfp.kernel_mod(w1.reshape(1, -1), p)
            sub = gfp.matmul_mod(coeff_kernel, kernel, p)
            partners = hunt_common_zeros(
                geom, sub, d, assigned, frozenset([zpt.coords]), rng
            )
            for z2 in partners:
                w = pair_witness("conjugate-pair", zpt.coords, z2.coords)
                if w:
                    checked["conjugate-hunt"] = tried
                    return ProbeReport("separation", True, [w], checked)
            if tried >= 4:
                break
        checked["conjugate-hunt"] = tried
        notes.append("degree-2 hunt found no unseparated pair")

    return ProbeReport("separation", False, [], checked, tuple(notes))


# ---------------------------------------------------------------------------
# batteries


@dataclass
class TrialResult:
    prime: int
    seed: int
    dim: int
    h0: int
    h1: int
    rank: int
    n_rows: int
    n_cols: int

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "seed": self.seed,
            "dim": self.dim,
            "h0": self.h0,
            "h1": self.h1,
            "rank": self.rank,
            "conditions": self.n_rows,
            "monomials": self.n_cols,
        }


@dataclass
class ProbeSummary:
    fired: bool
    trials: tuple[tuple[int, int, bool], ...]
    first: Optional[ProbeReport]

    def to_dict(self) -> dict:
        return {
            "fired": self.fired,
            "trials": [
                {"prime": pr, "seed": sd, "fired": fl} for pr, sd, fl in self.trials
            ],
            "first_witness": self.first.to_dict() if self.first else None,
        }


@dataclass
class OracleReport:
    clazz: ThreefoldClass
    vdim: int
    edim: int
    curve_degree: int
    trials: tuple[TrialResult, ...]
    dim_min: int
    dim_max: int
    matches_expected: bool
    base: Optional[ProbeSummary]
    separation: Optional[ProbeSummary]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "class": format_class(self.clazz),
            "vdim": self.vdim,
            "edim": self.edim,
            "curve_degree": self.curve_degree,
            "trials": [t.to_dict() for t in self.trials],
            "dim_min": self.dim_min,
            "dim_max": self.dim_max,
            "matches_expected": self.matches_expected,
            "base_probes": self.base.to_dict() if self.base else None,
            "separation_probes": self.separation.to_dict() if self.separation else None,
        }


def run_battery(
    clazz: ThreefoldClass,
    primes: Sequence[int] = PRIMES,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    npoints: int = DEFAULT_POINTS,
    probes: int = 0,
) -> OracleReport:
    """Dimensions over every (prime, seed) pair, plus optional probes.

    Probe passes stop at the first firing geometry; the dimension pass
    always covers the full battery.
    """
    c = clazz.normalized()
    if any(m < 0 for m in c.mults):
        raise ValueError("negative multiplicity")
    need = max(npoints, c.r)
    systems: list[SystemData] = []
    trials: list[TrialResult] = []
    for prime in primes:
        for seed in seeds:
            geom = get_geometry(prime, seed, need)
            sysd = solve_system(geom, c)
            systems.append(sysd)
            trials.append(
                TrialResult(prime, seed, sysd.dim, sysd.h0, sysd.h1, sysd.rank,
                            sysd.n_rows, sysd.n_cols)
            )
    dims = [t.dim for t in trials]
    vd, ed = systems[0].vdim, systems[0].edim
    base = separation = None
    if probes > 0:
        base = _probe_pass(systems, c, probes, probe_base_locus)
        separation = _probe_pass(systems, c, probes, probe_separation)
    return OracleReport(
        c, vd, ed, systems[0].curve_degree, tuple(trials),
        min(dims), max(dims), all(x == ed for x in dims), base, separation,
    )


def _probe_pass(systems, clazz, nprobes, fn) -> ProbeSummary:
    flags: list[tuple[int, int, bool]] = []
    first: Optional[ProbeReport] = None
    for sysd in systems:
        report = fn(sysd.geometry, clazz, nprobes, sysd)
        flags.append((sysd.prime, sysd.seed, report.fired))
        if report.fired:
            first = report
            break
    return ProbeSummary(any(f for _, _, f in flags), tuple(flags), first)
