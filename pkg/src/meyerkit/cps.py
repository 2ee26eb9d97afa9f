"""Cut-and-project schemes with G = R^d, H = R^m and exact lattice bases.

A scheme stores a square ``(d+m) x k`` basis whose columns generate the
lattice; the top ``d`` rows are the physical projection and the bottom ``m``
rows the internal one. Windows are axis-aligned symmetric boxes with
rational half-widths. Every membership decision (window, box, products of
patch points) is exact; floats only appear in measured distances.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .exact import (
    RATIONAL,
    ExactMatrix,
    QuadraticNumber,
    check_field,
    field_rank,
    format_rational,
    inverse,
    parse_rational,
    rational_rank,
)

DENSITY_NOTE = (
    "density of the internal projection is not certified; only the necessary "
    "condition (every internal coordinate has a non-discrete image) is checked"
)

Box = tuple[tuple[Fraction, Fraction], ...]


class SchemeError(ValueError):
    """Malformed or invalid cut-and-project scheme."""


# ---------------------------------------------------------------------------
# schemes


@dataclass(frozen=True)
class CutProjectScheme:
    physical_dim: int
    internal_dim: int
    basis: ExactMatrix
    name: str = "scheme"

    def __post_init__(self):
        d, m = self.physical_dim, self.internal_dim
        if d < 1 or m < 0:
            raise SchemeError(f"bad dimensions d={d}, m={m}")
        rows, cols = self.basis.shape
        if rows != d + m or cols != d + m:
            raise SchemeError(f"basis must be {d + m}x{d + m}, got {rows}x{cols}")

    @property
    def D(self) -> int:
        return self.basis.D

    @property
    def rank(self) -> int:
        return self.physical_dim + self.internal_dim

    @property
    def physical_block(self) -> ExactMatrix:
        return self.basis.row_block(0, self.physical_dim)

    @property
    def internal_block(self) -> ExactMatrix:
        return self.basis.row_block(self.physical_dim, self.rank)

    def point(self, index: Sequence[int]) -> "LatticePoint":
        index = tuple(int(i) for i in index)
        if len(index) != self.rank:
            raise SchemeError(f"index of length {len(index)} for rank {self.rank}")
        return LatticePoint(index, self.physical_block.matvec(index), self.internal_block.matvec(index))

    def scaled(self, c) -> "CutProjectScheme":
        return CutProjectScheme(self.physical_dim, self.internal_dim, self.basis.scaled(c), self.name)

    # -- json ----------------------------------------------------------------
    @classmethod
    def from_json(cls, obj: dict) -> "CutProjectScheme":
        try:
            D = obj.get("sqrt")
            D = RATIONAL if D is None else check_field(int(D))
            d = int(obj["physical_dim"])
            m = int(obj["internal_dim"])
            rows = [[QuadraticNumber.from_json(e, D) for e in row] for row in obj["basis"]]
        except (KeyError, TypeError) as exc:
            raise SchemeError(f"malformed scheme: {exc}") from exc
        if any(len(r) != len(rows[0]) for r in rows):
            raise SchemeError("ragged basis")
        return cls(d, m, ExactMatrix.from_rows(rows, D), obj.get("name", "scheme"))

    @classmethod
    def load(cls, path) -> "CutProjectScheme":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "sqrt": None if self.D == RATIONAL else self.D,
            "physical_dim": self.physical_dim,
            "internal_dim": self.internal_dim,
            "basis": [[e.to_json() for e in row] for row in self.basis.entries],
        }


def fibonacci_scheme() -> CutProjectScheme:
    """The canonical R x R scheme: columns (1, 1) and (phi, phi') in Q(sqrt 5)."""
    h = Fraction(1, 2)
    rows = [
        [QuadraticNumber.of(1, 0, 5), QuadraticNumber.of(h, h, 5)],
        [QuadraticNumber.of(1, 0, 5), QuadraticNumber.of(h, -h, 5)],
    ]
    return CutProjectScheme(1, 1, ExactMatrix.from_rows(rows, 5), "fibonacci")


def integer_scheme(d: int = 1) -> CutProjectScheme:
    """Trivial scheme Z^d in R^d with no internal space."""
    return CutProjectScheme(d, 0, ExactMatrix.identity(d), f"Z{d}")


@dataclass(frozen=True)
class ValidationReport:
    lattice_full_rank: bool
    physical_injective: bool
    internal_dense_necessary: bool
    note: str = DENSITY_NOTE

    @property
    def ok(self) -> bool:
        return self.lattice_full_rank and self.physical_injective

    def failed_checks(self) -> list[str]:
        return [
            name
            for name in ("lattice_full_rank", "physical_injective", "internal_dense_necessary")
            if not getattr(self, name)
        ]

    def to_json(self) -> dict:
        return {
            "lattice_full_rank": self.lattice_full_rank,
            "physical_injective": self.physical_injective,
            "internal_dense_necessary": self.internal_dense_necessary,
            "note": self.note,
        }


def validate_scheme(s: CutProjectScheme) -> ValidationReport:
    k = s.rank
    full = field_rank(s.basis) == k
    injective = rational_rank(s.physical_block) == k
    # an internal coordinate whose entries span a 1-dim Q-space has a discrete image
    dense = all(
        rational_rank(s.internal_block.row_block(i, i + 1)) >= 2 for i in range(s.internal_dim)
    )
    return ValidationReport(full, injective, dense)


# ---------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class Window:
    half_widths: tuple[Fraction, ...]
    closed: bool = True

    def __post_init__(self):
        hw = tuple(Fraction(r) for r in self.half_widths)
        if any(r <= 0 for r in hw):
            raise ValueError("window half-widths must be positive")
        object.__setattr__(self, "half_widths", hw)

    @classmethod
    def box(cls, *half_widths, closed: bool = True) -> "Window":
        return cls(tuple(Fraction(r) for r in half_widths), closed)

    @classmethod
    def parse(cls, text: str, closed: bool = True) -> "Window":
        text = text.strip()
        if not text:
            return cls((), closed)
        return cls(tuple(parse_rational(t) for t in text.split(",")), closed)

    @property
    def dim(self) -> int:
        return len(self.half_widths)

    def contains(self, y: Sequence[QuadraticNumber]) -> bool:
        if len(y) != self.dim:
            raise ValueError("dimension mismatch")
        for yi, r in zip(y, self.half_widths):
            if yi < -r:
                return False
            if self.closed:
                if yi > r:
                    return False
            elif yi >= r:
                return False
        return True

    def to_json(self) -> dict:
        return {"half_widths": [format_rational(r) for r in self.half_widths], "closed": self.closed}

    def __str__(self):
        hi = "]" if self.closed else ")"
        return " x ".join(f"[-{format_rational(r)},{format_rational(r)}{hi}" for r in self.half_widths) or "{0}"


def _same_dim(W1: Window, W2: Window):
    if W1.dim != W2.dim:
        raise ValueError(f"window dimensions differ: {W1.dim} vs {W2.dim}")


def window_sumset(W1: Window, W2: Window) -> Window:
    _same_dim(W1, W2)
    return Window(tuple(a + b for a, b in zip(W1.half_widths, W2.half_widths)), W1.closed and W2.closed)


def window_subset(W1: Window, W2: Window) -> bool:
    _same_dim(W1, W2)
    if W1.closed and not W2.closed:
        return all(a < b for a, b in zip(W1.half_widths, W2.half_widths))
    return all(a <= b for a, b in zip(W1.half_widths, W2.half_widths))


def window_halve(W: Window) -> Window:
    return Window(tuple(r / 2 for r in W.half_widths), W.closed)


def window_intersection(W1: Window, W2: Window) -> Window:
    _same_dim(W1, W2)
    if W1.closed == W2.closed:
        return Window(tuple(min(a, b) for a, b in zip(W1.half_widths, W2.half_widths)), W1.closed)
    # per axis the tighter face decides; ties go to the half-open side
    closed_w, open_w = (W1, W2) if W1.closed else (W2, W1)
    flags = [c < o for c, o in zip(closed_w.half_widths, open_w.half_widths)]
    if len(set(flags)) > 1:
        raise ValueError("intersection mixes closed and half-open faces")
    hw = tuple(min(a, b) for a, b in zip(W1.half_widths, W2.half_widths))
    return Window(hw, all(flags))


# ---------------------------------------------------------------------------
# boxes


def parse_box(text: str) -> Box:
    parts = []
    for chunk in text.split(","):
        lo, sep, hi = chunk.partition("..")
        if not sep:
            raise ValueError(f"box component must look like lo..hi, got {chunk!r}")
        parts.append((parse_rational(lo), parse_rational(hi)))
    return tuple(parts)


def make_box(*bounds) -> Box:
    return tuple((Fraction(lo), Fraction(hi)) for lo, hi in bounds)


def box_is_empty(box: Box) -> bool:
    return any(lo > hi for lo, hi in box)


def in_box(x: Sequence[QuadraticNumber], box: Box) -> bool:
    return all(lo <= xi <= hi for xi, (lo, hi) in zip(x, box))


def box_to_json(box: Box) -> list:
    return [[format_rational(lo), format_rational(hi)] for lo, hi in box]


def scale_box(box: Box, n: int) -> Box:
    return tuple((lo * n, hi * n) for lo, hi in box)


# ---------------------------------------------------------------------------
# lattice points and patches


@dataclass(frozen=True)
class LatticePoint:
    index: tuple[int, ...]
    physical: tuple[QuadraticNumber, ...]
    internal: tuple[QuadraticNumber, ...]

    def __add__(self, other: "LatticePoint") -> "LatticePoint":
        return LatticePoint(
            tuple(a + b for a, b in zip(self.index, other.index)),
            tuple(a + b for a, b in zip(self.physical, other.physical)),
            tuple(a + b for a, b in zip(self.internal, other.internal)),
        )

    def __neg__(self) -> "LatticePoint":
        return LatticePoint(
            tuple(-a for a in self.index), tuple(-a for a in self.physical), tuple(-a for a in self.internal)
        )

    def __sub__(self, other: "LatticePoint") -> "LatticePoint":
        return self + (-other)

    def physical_float(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.physical)

    def internal_float(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.internal)

    def sort_key(self):
        return self.physical_float(), self.index

    def to_json(self) -> dict:
        return {
            "index": list(self.index),
            "physical": [x.to_json() for x in self.physical],
            "internal": [x.to_json() for x in self.internal],
        }


def star_map(p: LatticePoint) -> tuple[QuadraticNumber, ...]:
    """Internal coordinate of the lattice point over ``p.physical``.

    Physical injectivity makes this the unique lift, so the internal block
    image of the index is the value of the star map.
    """
    return p.internal


@dataclass
class ModelSetPatch:
    scheme: CutProjectScheme
    window: Window
    box: Box
    points: list[LatticePoint]
    index_bounds: tuple[tuple[int, int], ...] = ()

    def __len__(self):
        return len(self.points)

    def index_set(self) -> set[tuple[int, ...]]:
        return {p.index for p in self.points}

    def contains_index(self, z: Sequence[int]) -> bool:
        """Exact membership of a lattice element in the full (untruncated) model set."""
        return self.window.contains(self.scheme.internal_block.matvec(z))


class _IntegerForm:
    """Basis rows cleared to integers: entry = (A + B sqrt D) / L."""

    def __init__(self, M: ExactMatrix):
        self.D = M.D
        L = 1
        for row in M.entries:
            for e in row:
                L = math.lcm(L, e.a.denominator, e.b.denominator)
        self.L = L
        self.A = [[int(e.a * L) for e in row] for row in M.entries]
        self.B = [[int(e.b * L) for e in row] for row in M.entries]

    def eval(self, z) -> list[tuple[int, int]]:
        return [
            (sum(a * zi for a, zi in zip(ra, z)), sum(b * zi for b, zi in zip(rb, z)))
            for ra, rb in zip(self.A, self.B)
        ]

    def value(self, pair) -> QuadraticNumber:
        return QuadraticNumber(Fraction(pair[0], self.L), Fraction(pair[1], self.L), self.D)


def _isign(u: int, v: int, D: int) -> int:
    """Sign of u + v sqrt(D) for integers."""
    su = (u > 0) - (u < 0)
    sv = (v > 0) - (v < 0)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv
    return su if u * u > v * v * D else sv


def _ge(pair, bound: Fraction, L: int, D: int) -> int:
    """sign(value - bound) for value = (u + v sqrt D)/L."""
    q, p = bound.denominator, bound.numerator
    return _isign(pair[0] * q - p * L, pair[1] * q, D)


def _admit(pairs_phys, pairs_int, form_L, D, box, half_widths, closed) -> bool:
    for pair, (lo, hi) in zip(pairs_phys, box):
        if _ge(pair, lo, form_L, D) < 0 or _ge(pair, hi, form_L, D) > 0:
            return False
    for pair, r in zip(pairs_int, half_widths):
        if _ge(pair, -r, form_L, D) < 0:
            return False
        s = _ge(pair, r, form_L, D)
        if s > 0 or (s == 0 and not closed):
            return False
    return True


def index_bounds(s: CutProjectScheme, W: Window, box: Box) -> tuple[tuple[int, int], ...]:
    """Outer integer bounds on z from the exact inverse of the full system."""
    Binv = inverse(s.basis)
    intervals = list(box) + [(-r, r) for r in W.half_widths]
    bounds = []
    for row in Binv.entries:
        lo_sum = Fraction(0)
        hi_sum = Fraction(0)
        for c, (lo, hi) in zip(row, intervals):
            c_lo, c_hi = c.enclosure()
            prods = (c_lo * lo, c_lo * hi, c_hi * lo, c_hi * hi)
            lo_sum += min(prods)
            hi_sum += max(prods)
        bounds.append((math.floor(lo_sum), math.ceil(hi_sum)))
    return tuple(bounds)


def _enumerate_shard(args) -> list[LatticePoint]:
    s, W, box, bounds = args
    phys = _IntegerForm(s.physical_block)
    internal = _IntegerForm(s.internal_block) if s.internal_dim else None
    L_phys, L_int = phys.L, internal.L if internal else 1
    D = s.D
    out = []
    ranges = [range(lo, hi + 1) for lo, hi in bounds]
    for z in itertools.product(*ranges):
        pp = phys.eval(z)
        if not _admit(pp, (), L_phys, D, box, (), True):
            continue
        if internal is not None:
            ip = internal.eval(z)
            if not _admit((), ip, L_int, D, (), W.half_widths, W.closed):
                continue
            int_vals = tuple(internal.value(p) for p in ip)
        else:
            int_vals = ()
        out.append(LatticePoint(tuple(z), tuple(phys.value(p) for p in pp), int_vals))
    return out


def generate_patch(s: CutProjectScheme, W: Window, box: Box, jobs: int = 1) -> ModelSetPatch:
    """All lattice points with physical part in ``box`` and internal part in ``W``."""
    if W.dim != s.internal_dim:
        raise ValueError(f"window has dim {W.dim}, scheme internal dim is {s.internal_dim}")
    if len(box) != s.physical_dim:
        raise ValueError(f"box has dim {len(box)}, scheme physical dim is {s.physical_dim}")
    report = validate_scheme(s)
    if not report.ok:
        raise SchemeError(f"scheme fails validation: {', '.join(report.failed_checks())}")
    if box_is_empty(box):
        return ModelSetPatch(s, W, box, [], ())
    bounds = index_bounds(s, W, box)

    lo0, hi0 = bounds[0]
    jobs = max(1, min(jobs, hi0 - lo0 + 1))
    if jobs == 1:
        points = _enumerate_shard((s, W, box, bounds))
    else:
        # contiguous shards of the first index axis; merge order is fixed by the sort
        edges = [lo0 + (hi0 - lo0 + 1) * i // jobs for i in range(jobs + 1)]
        tasks = [
            (s, W, box, ((edges[i], edges[i + 1] - 1),) + bounds[1:])
            for i in range(jobs)
            if edges[i + 1] > edges[i]
        ]
        with ProcessPoolExecutor(max_workers=len(tasks)) as pool:
            points = [p for shard in pool.map(_enumerate_shard, tasks) for p in shard]
    points.sort(key=LatticePoint.sort_key)
    return ModelSetPatch(s, W, box, points, bounds)


# ---------------------------------------------------------------------------
# towers


@dataclass
class TowerLevel:
    level: int
    window: Window
    point_count: int
    inclusion_ok: bool  # W_n + W_n inside W_{n-1}
    pair_sums_checked: int
    pair_sum_failures: list
    nested_ok: bool  # level patch inside previous level patch
    degenerate: bool

    @property
    def ok(self) -> bool:
        return self.inclusion_ok and not self.pair_sum_failures and self.nested_ok and not self.degenerate

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "window": self.window.to_json(),
            "point_count": self.point_count,
            "inclusion_ok": self.inclusion_ok,
            "pair_sums_checked": self.pair_sums_checked,
            "pair_sum_failures": [list(map(list, f)) for f in self.pair_sum_failures],
            "nested_ok": self.nested_ok,
            "degenerate": self.degenerate,
        }


@dataclass
class WindowTower:
    base: Window
    windows: list[Window]  # W_1 .. W_N
    verified_depth: int


@dataclass
class TowerResult:
    tower: WindowTower
    patches: list[ModelSetPatch]  # levels 0..N
    levels: list[TowerLevel]

    @property
    def verified(self) -> bool:
        return self.tower.verified_depth == len(self.tower.windows) and all(l.ok for l in self.levels)


def good_model_tower(s: CutProjectScheme, W0: Window, depth: int, box: Box, jobs: int = 1) -> TowerResult:
    """Halving tower W_n = W0 / 2^n with exact checks of W_{n+1} + W_{n+1} in W_n."""
    if depth < 1:
        raise ValueError("tower depth must be >= 1")
    windows = [W0]
    for _ in range(depth):
        windows.append(window_halve(windows[-1]))
    patches = [generate_patch(s, W, box, jobs) for W in windows]
    zero_in_box = all(lo <= 0 <= hi for lo, hi in box)
    levels = []
    verified_depth = 0
    for n in range(1, depth + 1):
        W_prev, W_n = windows[n - 1], windows[n]
        inclusion_ok = window_subset(window_sumset(W_n, W_n), W_prev)
        pts = patches[n].points
        failures = []
        checked = 0
        for i, lam in enumerate(pts):
            for mu in pts[i:]:
                phys = tuple(a + b for a, b in zip(lam.physical, mu.physical))
                if not in_box(phys, box):
                    continue
                checked += 1
                internal = tuple(a + b for a, b in zip(lam.internal, mu.internal))
                if not W_prev.contains(internal):
                    failures.append((lam.index, mu.index))
        nested_ok = patches[n].index_set() <= patches[n - 1].index_set()
        degenerate = zero_in_box and not any(not any(p.index) for p in pts)
        level = TowerLevel(n, W_n, len(pts), inclusion_ok, checked, failures, nested_ok, degenerate)
        levels.append(level)
        if level.ok and verified_depth == n - 1:
            verified_depth = n
    return TowerResult(WindowTower(W0, windows[1:], verified_depth), patches, levels)


# ---------------------------------------------------------------------------
# graph discreteness


@dataclass(frozen=True)
class GraphGap:
    min_norm: float
    squared_norm: QuadraticNumber
    witness: tuple[int, ...]
    search_radius: int

    def to_json(self) -> dict:
        return {
            "min_norm": self.min_norm,
            "squared_norm": self.squared_norm.to_json(),
            "witness": list(self.witness),
            "search_radius": self.search_radius,
            "note": "minimum within the index search ball, not a certified global minimum",
        }


def graph_min_gap(s: CutProjectScheme, search_radius: int) -> GraphGap:
    """Shortest nonzero lattice vector (physical, internal) with |z|_inf <= radius."""
    if search_radius < 1:
        raise ValueError("search radius must be >= 1")
    form = _IntegerForm(s.basis)
    best = None
    best_z = None
    R = search_radius
    for z in itertools.product(range(-R, R + 1), repeat=s.rank):
        lead = next((c for c in z if c), 0)
        if lead <= 0:  # z and -z have the same norm; keep the positive representative
            continue
        sq = QuadraticNumber(Fraction(0), Fraction(0), s.D)
        for pair in form.eval(z):
            v = form.value(pair)
            sq = sq + v * v
        if best is None or sq < best:
            best, best_z = sq, z
    return GraphGap(math.sqrt(float(best)), best, best_z, R)


# ---------------------------------------------------------------------------
# commensurability of windows


def lattice_view(s: CutProjectScheme):
    from .cert import vector_view

    return vector_view(s.rank)


def _covers_point(y, centers, Wp: Window) -> bool:
    return any(Wp.contains(tuple(a - c for a, c in zip(y, ctr))) for ctr in centers)


def _uncovered_point(W: Window, centers, Wp: Window):
    """An exact point of W outside every translate ``c + Wp``, or None.

    Coordinates are compressed to the faces of W and of the translates;
    membership is constant on each open cell, so testing faces and cell
    midpoints decides the cover.
    """
    axes = []
    for i, r in enumerate(W.half_widths):
        lo, hi = QuadraticNumber.rational(-r), QuadraticNumber.rational(r)
        cuts = {lo, hi}
        for c in centers:
            for face in (c[i] - Wp.half_widths[i], c[i] + Wp.half_widths[i]):
                if lo < face < hi:
                    cuts.add(face)
        cuts = sorted(cuts)
        tests = list(cuts) + [(a + b) / 2 for a, b in zip(cuts, cuts[1:])]
        if not W.closed:
            tests = [t for t in tests if t != hi]
        axes.append(tests)
    for y in itertools.product(*axes):
        if not _covers_point(y, centers, Wp):
            return y
    return None


def _sample_grid(W: Window, Wp: Window) -> list[tuple[Fraction, ...]]:
    axes = []
    for r, rp in zip(W.half_widths, Wp.half_widths):
        step = rp / 2
        count = math.ceil(2 * r / step)
        axes.append(sorted({min(-r + i * step, r) for i in range(count + 1)}))
    return [tuple(p) for p in itertools.product(*axes)]


def internal_cover(W: Window, Wp: Window, candidates: Sequence[LatticePoint], max_iter: int = 1000):
    """Greedy choice of candidates whose star images translate Wp over all of W.

    Returns ``(chosen, complete)``.
    """
    if window_subset(W, Wp):
        return [None], True
    samples = _sample_grid(W, Wp)
    samples = [tuple(QuadraticNumber(x, Fraction(0)) for x in p) for p in samples]
    chosen: list[LatticePoint] = []
    centers = []
    uncovered = list(samples)
    for _ in range(max_iter):
        if not uncovered:
            gap = _uncovered_point(W, centers, Wp)
            if gap is None:
                return chosen, True
            uncovered = [gap]
        best, best_hits = None, []
        for cand in candidates:
            hits = [y for y in uncovered if Wp.contains(tuple(a - c for a, c in zip(y, cand.internal)))]
            if len(hits) > len(best_hits):
                best, best_hits = cand, hits
        if best is None:
            return chosen, False
        chosen.append(best)
        centers.append(best.internal)
        hit = set(best_hits)
        uncovered = [y for y in uncovered if y not in hit]
    return chosen, _uncovered_point(W, centers, Wp) is None


@dataclass
class CommensurabilityWitness:
    forward: "object"  # CoverCertificate: P(W) inside F . P(W')
    backward: "object"  # CoverCertificate: P(W') inside F . P(W)

    @property
    def verified(self) -> bool:
        return self.forward.verified and self.backward.verified

    def to_json(self) -> dict:
        return {"verified": self.verified, "forward": self.forward.to_json(), "backward": self.backward.to_json()}


def _one_direction(s, W, Wp, box, jobs, max_iter):
    from .cert import CoverCertificate, Relation, recheck_cover

    zero_index = (0,) * s.rank
    candidates = generate_patch(s, window_sumset(W, Wp), box, jobs).points
    # short lattice vectors first, so ties in the greedy step pick them
    candidates.sort(key=lambda p: (sum(x * x for x in p.physical_float()), p.index))
    chosen, complete = internal_cover(W, Wp, candidates, max_iter)
    F = [zero_index if c is None else c.index for c in chosen]
    left = [p.index for p in generate_patch(s, W, box, jobs).points]
    internal = s.internal_block

    def in_Wp(z):
        return Wp.contains(internal.matvec(z))

    failures = recheck_cover(left, F, in_Wp, lattice_view(s))
    notes = [f"verified on the physical box {box_to_json(box)} only"]
    if not complete:
        notes.append("greedy internal cover incomplete within the iteration budget")
    return CoverCertificate(
        Relation.X_subset_FY,
        F,
        complete and not failures,
        failures=failures,
        box={"physical": box_to_json(box), "left_window": W.to_json(), "right_window": Wp.to_json()},
        checked=len(left),
        notes=notes,
    )


def window_commensurability_witness(
    s: CutProjectScheme, W: Window, Wp: Window, box: Box, jobs: int = 1, max_iter: int = 1000
) -> CommensurabilityWitness:
    """Finite F with P(W) in F . P(W') and vice versa, checked exactly on the box."""
    _same_dim(W, Wp)
    return CommensurabilityWitness(
        _one_direction(s, W, Wp, box, jobs, max_iter),
        _one_direction(s, Wp, W, box, jobs, max_iter),
    )
