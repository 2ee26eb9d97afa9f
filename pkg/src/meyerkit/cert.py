"""Covering and commensurability certificates over finite subsets of a group.

A :class:`FiniteGroupView` supplies the group operation as oracles, so the
same constructions run on integers, integer vectors, lattice indices or
free-group words. Every certificate can be re-checked with
:func:`recheck_cover`, which uses nothing but the oracles.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree


class Relation(str, enum.Enum):
    X_subset_FYYinv = "X_subset_FYYinv"
    X2_subset_FX = "X2_subset_FX"
    X_subset_FY = "X_subset_FY"


class CoverError(ValueError):
    """A precondition of a cover construction fails; ``element`` is uncovered."""

    def __init__(self, message: str, element=None):
        super().__init__(message)
        self.element = element


@dataclass(frozen=True)
class FiniteGroupView:
    op: Callable[[Any, Any], Any]
    inv: Callable[[Any], Any]
    identity: Any
    membership: Callable[[Any], bool] | None = None
    name: str = "group"

    def translate(self, f, xs: Iterable) -> set:
        return {self.op(f, x) for x in xs}


def integer_view() -> FiniteGroupView:
    return FiniteGroupView(lambda x, y: x + y, lambda x: -x, 0, name="Z")


def vector_view(n: int) -> FiniteGroupView:
    """Z^n with elements as integer tuples."""
    return FiniteGroupView(
        lambda x, y: tuple(a + b for a, b in zip(x, y)),
        lambda x: tuple(-a for a in x),
        (0,) * n,
        name=f"Z^{n}",
    )


def _to_json(x):
    if isinstance(x, tuple):
        return list(x)
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


@dataclass
class CoverCertificate:
    relation: Relation
    F: list
    verified: bool
    bound_claimed: str | None = None
    bound_satisfied: bool | None = None
    failures: list = field(default_factory=list)
    box: dict | None = None
    checked: int = 0
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "relation": self.relation.value,
            "F": [_to_json(f) for f in self.F],
            "verified": self.verified,
            "bound_claimed": self.bound_claimed,
            "bound_satisfied": self.bound_satisfied,
            "failures": [_to_json(x) for x in self.failures],
            "box": self.box,
            "checked": self.checked,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def recheck_cover(left: Iterable, F: Sequence, right_contains: Callable[[Any], bool], view: FiniteGroupView) -> list:
    """Elements ``x`` of ``left`` with no ``f`` in ``F`` such that ``f^-1 x`` is on the right."""
    inv_F = [view.inv(f) for f in F]
    return [x for x in left if not any(right_contains(view.op(fi, x)) for fi in inv_F)]


# ---------------------------------------------------------------------------
# Ruzsa covering


def ruzsa_cover(X: Sequence, Y: Sequence, view: FiniteGroupView) -> CoverCertificate:
    """Maximal family of disjoint translates ``fY`` (f in X, scan order); X in F Y Y^-1."""
    if not Y:
        raise ValueError("Y must be nonempty")
    F = []
    covered: set = set()
    for x in X:
        tx = view.translate(x, Y)
        if covered.isdisjoint(tx):
            F.append(x)
            covered |= tx
    YYinv = {view.op(y1, view.inv(y2)) for y1 in Y for y2 in Y}
    failures = recheck_cover(X, F, YYinv.__contains__, view)
    return CoverCertificate(Relation.X_subset_FYYinv, F, not failures, failures=failures, checked=len(X))


# ---------------------------------------------------------------------------
# intersections


def intersection_cover(X0: Sequence, Xs: Sequence[Sequence], Fs: Sequence[Sequence], view: FiniteGroupView) -> CoverCertificate:
    """F with |F| <= prod |F_i| and X0 in F . (cap_i X_i^-1 X_i), built tuple by tuple."""
    if len(Xs) != len(Fs) or not Xs:
        raise ValueError("need matching nonempty lists of sets X_i and covers F_i")
    sets = [set(Xi) for Xi in Xs]
    for i, (Xi, Fi) in enumerate(zip(sets, Fs)):
        bad = recheck_cover(X0, Fi, Xi.__contains__, view)
        if bad:
            raise CoverError(f"X0 is not inside F_{i + 1} X_{i + 1}: {bad[0]!r} uncovered", bad[0])

    X0_set = set(X0)
    F = []
    for ftuple in itertools.product(*Fs):
        common = view.translate(ftuple[0], Xs[0])
        for fi, Xi in zip(ftuple[1:], Xs[1:]):
            common &= view.translate(fi, Xi)
        if X0_set.isdisjoint(common):
            continue
        # representative: the identity when available, else the first hit of X0 in scan order
        x_f = view.identity if view.identity in common and view.identity in X0_set else next(x for x in X0 if x in common)
        if x_f not in F:
            F.append(x_f)

    diffs = None
    for Xi in Xs:
        d = {view.op(view.inv(x), y) for x in Xi for y in Xi}
        diffs = d if diffs is None else diffs & d
    failures = recheck_cover(X0, F, diffs.__contains__, view)
    bound = math.prod(len(Fi) for Fi in Fs)
    return CoverCertificate(
        Relation.X_subset_FY,
        F,
        not failures,
        bound_claimed=f"|F| <= prod |F_i| = {bound}",
        bound_satisfied=len(F) <= bound,
        failures=failures,
        checked=len(X0),
    )


# ---------------------------------------------------------------------------
# approximate-subgroup products


def product_cover_check(
    membership: Callable[[Any], bool], patch: Sequence, F: Sequence, view: FiniteGroupView
) -> CoverCertificate:
    """Every product of two patch elements lies in f . Lambda for some f in F (exact predicate)."""
    products = []
    seen = set()
    for lam in patch:
        for mu in patch:
            p = view.op(lam, mu)
            if p not in seen:
                seen.add(p)
                products.append(p)
    failures = recheck_cover(products, F, membership, view)
    return CoverCertificate(Relation.X2_subset_FX, list(F), not failures, failures=failures, checked=len(products))


# ---------------------------------------------------------------------------
# measurements


def _as_float_vec(x) -> tuple[float, ...]:
    if isinstance(x, (tuple, list)):
        return tuple(float(c) for c in x)
    return (float(x),)


@dataclass
class GapReport:
    gap: float | None
    witness: tuple | None
    distinct: int
    degenerate: bool
    power: int
    box: Any = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "gap": self.gap,
            "witness": [_to_json(w) for w in self.witness] if self.witness else None,
            "distinct_points": self.distinct,
            "degenerate": self.degenerate,
            "power": self.power,
            "box": self.box,
            "note": self.note,
        }


def sumset_power(points: Sequence, n: int, view: FiniteGroupView) -> list:
    """Distinct n-fold products of the given elements, in first-seen order."""
    if n < 1:
        raise ValueError("power must be >= 1")
    base = list(dict.fromkeys(points))
    current = list(base)
    for _ in range(n - 1):
        nxt = {}
        for x in current:
            for y in base:
                nxt.setdefault(view.op(x, y), None)
        current = list(nxt)
    return current


def min_gap(
    points: Sequence,
    n: int = 1,
    view: FiniteGroupView | None = None,
    embed: Callable[[Any], Sequence[float]] = _as_float_vec,
    box=None,
) -> GapReport:
    """Smallest positive Euclidean distance in the n-fold sumset of ``points``.

    Elements are compared exactly (hashing); ``embed`` gives their float
    coordinates for the distance measurement only.
    """
    if n > 1 and view is None:
        raise ValueError("a group view is needed for n > 1")
    degenerate = len(set(points)) != len(points)
    elems = sumset_power(points, n, view) if n > 1 else list(dict.fromkeys(points))
    note = ""
    if n > 1:
        note = f"sums taken among the {len(set(points))} given points only"
    if len(elems) < 2:
        return GapReport(None, None, len(elems), degenerate, n, box, "fewer than two distinct points")
    coords = np.array([embed(e) for e in elems], dtype=float)
    tree = cKDTree(coords)
    dist, idx = tree.query(coords, k=2)
    nearest = dist[:, 1]
    if np.any(nearest == 0):
        # two exactly distinct elements share a float embedding
        degenerate = True
        note = (note + "; " if note else "") + "float-coincident distinct points"
    order = np.lexsort((np.arange(len(elems)), nearest))
    i = int(order[0])
    j = int(idx[i, 1])
    i, j = min(i, j), max(i, j)
    return GapReport(float(nearest.min()), (elems[i], elems[j]), len(elems), degenerate, n, box, note)


@dataclass
class CoveringRadius:
    radius: float
    certified_radius: float
    worst_node: tuple[float, ...] | None
    grid_step: Fraction
    nodes: int

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "certified_radius": self.certified_radius,
            "worst_node": list(self.worst_node) if self.worst_node is not None else None,
            "grid_step": str(self.grid_step),
            "nodes": self.nodes,
        }


def covering_radius(points: Sequence, box, grid_step, embed: Callable = _as_float_vec) -> CoveringRadius:
    """Max distance from a grid node of ``box`` to the nearest point.

    ``points + closed ball(certified_radius)`` contains the box, where the
    certified radius adds the grid-cell diameter.
    """
    step = Fraction(grid_step)
    if step <= 0:
        raise ValueError("grid step must be positive")
    axes = []
    for lo, hi in box:
        lo, hi = Fraction(lo), Fraction(hi)
        count = int((hi - lo) // step)
        nodes = [float(lo + i * step) for i in range(count + 1)]
        if lo + count * step != hi:
            nodes.append(float(hi))
        axes.append(nodes)
    grid = np.array(list(itertools.product(*axes)), dtype=float)
    cell = float(step) * math.sqrt(len(axes))
    if not points:
        return CoveringRadius(math.inf, math.inf, None, step, len(grid))
    coords = np.array([embed(p) for p in points], dtype=float)
    dist, _ = cKDTree(coords).query(grid, k=1)
    worst = int(np.argmax(dist))
    r = float(dist[worst])
    return CoveringRadius(r, r + cell, tuple(grid[worst]), step, len(grid))


# ---------------------------------------------------------------------------
# Massicot-Wagner constants


@dataclass(frozen=True)
class PowerForm:
    """The exact number ``base**exponent + offset`` kept unexpanded."""

    base: int
    exponent: int
    offset: int = 0

    def value(self) -> Fraction:
        return Fraction(self.base) ** self.exponent + self.offset

    def log2(self) -> float:
        main = self.exponent * math.log2(self.base)
        if self.offset == 0:
            return main
        if abs(main) < 1000:
            return math.log2(float(self.value()))
        return main  # offset is negligible at this scale

    def __str__(self):
        if self.exponent == 0:
            s = "1"
        else:
            s = f"{self.base}^{self.exponent}" if self.exponent > 0 else f"{self.base}^({self.exponent})"
        if self.offset:
            s += f" + {self.offset}" if self.offset > 0 else f" - {-self.offset}"
        return s

    def to_json(self) -> dict:
        return {"base": self.base, "exponent": self.exponent, "offset": self.offset, "text": str(self)}


@dataclass(frozen=True)
class MassicotWagnerBound:
    K: int
    m: int
    n: int
    c: PowerForm
    cover_bound: PowerForm

    def to_json(self) -> dict:
        return {"K": self.K, "m": self.m, "n": self.n, "c": self.c.to_json(), "cover_bound": self.cover_bound.to_json()}


def mw_ratio(m: int) -> Fraction:
    return 1 / (1 - Fraction(1, 4 * m))


def massicot_wagner_bound(K: int, m: int) -> MassicotWagnerBound:
    """n = ceil(log K / log (1 - 1/4m)^-1), c = (2K)^-(2^n - 1), bound = 2K/c + 1.

    n is found by exact comparison of rational powers against K.
    """
    if not isinstance(K, int) or not isinstance(m, int) or K < 1 or m < 1:
        raise ValueError(f"K and m must be integers >= 1, got K={K!r}, m={m!r}")
    q = mw_ratio(m)
    n = 0
    power = Fraction(1)
    while power < K:
        power *= q
        n += 1
    c = PowerForm(2 * K, -(2**n - 1))
    bound = PowerForm(2 * K, 2**n, 1)
    return MassicotWagnerBound(K, m, n, c, bound)
