"""Brute-force reference computations, deliberately independent of meyerkit internals."""

import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np

mpmath.mp.prec = 300


def mp_value(a, b, D):
    return mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(D)


def mp_sign(a, b, D):
    a, b = Fraction(a), Fraction(b)
    if a == 0 and b == 0:
        return 0
    v = mp_value(a, b, D)
    return 1 if v > 0 else -1


def fibonacci_sweep(N, lo, hi, r, closed=True):
    """Indices (z0, z1) with |z_i| <= N, z0 + z1 phi in [lo, hi], |z0 + z1 phi'| <= r.

    Integer-only: 2x = (2 z0 + z1) + z1 sqrt5 and 2x* = (2 z0 + z1) - z1 sqrt5,
    everything scaled by a common denominator q.
    """
    lo, hi, r = Fraction(lo), Fraction(hi), Fraction(r)
    q = math.lcm(lo.denominator, hi.denominator, r.denominator)
    LO, HI, RR = int(2 * lo * q), int(2 * hi * q), int(2 * r * q)
    out = []
    for a in range(-N, N + 1):
        for b in range(-N, N + 1):
            u, v = (2 * a + b) * q, b * q
            if _sgn(u - LO, v) < 0 or _sgn(u - HI, v) > 0:
                continue
            if _sgn(u + RR, -v) < 0:
                continue
            s = _sgn(u - RR, -v)
            if s > 0 or (s == 0 and not closed):
                continue
            out.append((a, b))
    return out


def _sgn(u: int, v: int) -> int:
    # sign of u + v sqrt 5 via squares
    if v == 0:
        return (u > 0) - (u < 0)
    if u >= 0 and v > 0:
        return 1
    if u <= 0 and v < 0:
        return -1
    if u * u > 5 * v * v:
        return 1 if u > 0 else -1
    return 1 if v > 0 else -1


def rational_coords(rows, z):
    """Exact (a, b) rational parts of each row . z, summed by hand."""
    out = []
    for row in rows:
        a = sum((Fraction(e.a) * zi for e, zi in zip(row, z)), Fraction(0))
        b = sum((Fraction(e.b) * zi for e, zi in zip(row, z)), Fraction(0))
        out.append((a, b))
    return out


def brute_force_patch(scheme, window_half_widths, closed, box, N):
    """All indices with |z_i| <= N whose projections pass the window/box tests (mpmath signs)."""
    D = scheme.D if scheme.D != 1 else 2
    rows = scheme.basis.entries
    d = scheme.physical_dim
    found = set()
    for z in itertools.product(range(-N, N + 1), repeat=scheme.rank):
        coords = rational_coords(rows, z)
        ok = True
        for (a, b), (lo, hi) in zip(coords[:d], box):
            if mp_sign(a - lo, b, D) < 0 or mp_sign(a - hi, b, D) > 0:
                ok = False
                break
        if not ok:
            continue
        for (a, b), r in zip(coords[d:], window_half_widths):
            s_lo = mp_sign(a + r, b, D)
            s_hi = mp_sign(a - r, b, D)
            if s_lo < 0 or s_hi > 0 or (s_hi == 0 and not closed):
                ok = False
                break
        if ok:
            found.add(z)
    return found


def float_index_radius(scheme, window_half_widths, box):
    """Generous index radius from a floating inverse (independent of the exact bounds)."""
    B = np.array([[float(e) for e in row] for row in scheme.basis.entries])
    Binv = np.linalg.inv(B)
    ext = [max(abs(float(lo)), abs(float(hi))) for lo, hi in box] + [float(r) for r in window_half_widths]
    return int(math.ceil(np.max(np.abs(Binv) @ np.array(ext)))) * 2 + 3


def random_cover_instance(rng, dim, r=2):
    """Random finite sets in Z (dim 0) or Z^dim with covers F_i, X0 in F_i + X_i by construction."""
    if dim == 0:
        elem = lambda: rng.randint(-12, 12)
        add = lambda x, y: x + y
        sub = lambda x, y: x - y
    else:
        elem = lambda: tuple(rng.randint(-5, 5) for _ in range(dim))
        add = lambda x, y: tuple(a + b for a, b in zip(x, y))
        sub = lambda x, y: tuple(a - b for a, b in zip(x, y))
    X0 = list(dict.fromkeys(elem() for _ in range(rng.randint(1, 12))))
    Xs, Fs = [], []
    for _ in range(r):
        Xi = list(dict.fromkeys(elem() for _ in range(rng.randint(1, 8))))
        Fi = []
        for x in X0:
            if not any(sub(x, f) in Xi for f in Fi):
                Fi.append(sub(x, rng.choice(Xi)))
        Xs.append(Xi)
        Fs.append(Fi)
    Y = list(dict.fromkeys(elem() for _ in range(rng.randint(1, 6))))
    return X0, Xs, Fs, Y, add, sub
