"""Reduced words in free groups, Brooks quasi-morphisms and their quasi-kernels.

Words are stored as strings over ``a..z`` with capitals for inverses
(``abAB`` is the commutator of a and b), which makes free reduction and
subword counting cheap. Generator ``i`` (1-based) is ``chr(ord('a') + i - 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .cert import CoverCertificate, FiniteGroupView, Relation

MAX_RANK = 26


class RankError(ValueError):
    pass


class DomainError(ValueError):
    """A lemma hypothesis (such as R > C(f)) does not hold."""


def _letter(i: int) -> str:
    c = chr(ord("a") + abs(i) - 1)
    return c if i > 0 else c.upper()


def _reduce(text: str) -> str:
    out: list[str] = []
    for ch in text:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True, slots=True)
class ReducedWord:
    text: str = ""
    rank: int = 2

    def __post_init__(self):
        if not 1 <= self.rank <= MAX_RANK:
            raise RankError(f"rank must be in 1..{MAX_RANK}")
        top = chr(ord("a") + self.rank - 1)
        for ch in self.text:
            if not ("a" <= ch.lower() <= top):
                raise ValueError(f"letter {ch!r} outside a free group of rank {self.rank}")
        for x, y in zip(self.text, self.text[1:]):
            if x == y.swapcase():
                raise ValueError(f"{self.text!r} is not reduced")

    @classmethod
    def parse(cls, text: str, rank: int = 2) -> "ReducedWord":
        """Parse and freely reduce; use :func:`parse_word` to learn whether reduction happened."""
        return cls(_reduce(text.strip()), rank)

    @classmethod
    def from_letters(cls, letters: Sequence[int], rank: int = 2) -> "ReducedWord":
        if any(l == 0 for l in letters):
            raise ValueError("letters are nonzero signed generator indices")
        return cls(_reduce("".join(_letter(l) for l in letters)), rank)

    @classmethod
    def identity(cls, rank: int = 2) -> "ReducedWord":
        return cls("", rank)

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple((ord(c) - ord("a") + 1) if c.islower() else -(ord(c) - ord("A") + 1) for c in self.text)

    def __len__(self):
        return len(self.text)

    def __str__(self):
        return self.text or "e"

    def __repr__(self):
        return f"ReducedWord({self.text!r})"

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return word_mul(self, other)

    def __invert__(self) -> "ReducedWord":
        return word_inv(self)

    def __pow__(self, n: int) -> "ReducedWord":
        return word_pow(self, n)


def parse_word(text: str, rank: int = 2) -> tuple[ReducedWord, bool]:
    """Word from text plus a flag telling whether free reduction changed it."""
    raw = text.strip()
    if raw in ("e", "1"):
        raw = ""
    reduced = _reduce(raw)
    return ReducedWord(reduced, rank), reduced != raw


def _check_rank(x: ReducedWord, y: ReducedWord):
    if x.rank != y.rank:
        raise RankError(f"rank mismatch: {x.rank} vs {y.rank}")


def _mul_text(x: str, y: str) -> str:
    # both reduced: cancellation happens only at the junction
    k = 0
    n = min(len(x), len(y))
    while k < n and x[-1 - k] == y[k].swapcase():
        k += 1
    return x[: len(x) - k] + y[k:]


def _inv_text(x: str) -> str:
    return x[::-1].swapcase()


def word_mul(x: ReducedWord, y: ReducedWord) -> ReducedWord:
    _check_rank(x, y)
    return ReducedWord(_mul_text(x.text, y.text), x.rank)


def word_inv(x: ReducedWord) -> ReducedWord:
    return ReducedWord(_inv_text(x.text), x.rank)


def word_pow(x: ReducedWord, n: int) -> ReducedWord:
    if n < 0:
        return word_pow(word_inv(x), -n)
    result = ""
    base = x.text
    while n:
        if n & 1:
            result = _mul_text(result, base)
        base = _mul_text(base, base)
        n >>= 1
    return ReducedWord(result, x.rank)


def free_group_view(rank: int = 2) -> FiniteGroupView:
    return FiniteGroupView(word_mul, word_inv, ReducedWord.identity(rank), name=f"F_{rank}")


def letter_order(rank: int) -> list[str]:
    """a < A < b < B < ..."""
    out = []
    for i in range(1, rank + 1):
        out += [_letter(i), _letter(-i)]
    return out


def iter_ball(rank: int, radius: int) -> Iterator[ReducedWord]:
    """Reduced words of length <= radius, breadth first, fixed letter order."""
    alphabet = letter_order(rank)
    level = [""]
    yield ReducedWord("", rank)
    for _ in range(radius):
        nxt = []
        for w in level:
            last = w[-1].swapcase() if w else None
            for ch in alphabet:
                if ch != last:
                    nxt.append(w + ch)
        for w in nxt:
            yield ReducedWord(w, rank)
        level = nxt


def ball(rank: int, radius: int) -> list[ReducedWord]:
    return list(iter_ball(rank, radius))


def ball_size(rank: int, radius: int) -> int:
    if radius == 0:
        return 1
    return 1 + sum(2 * rank * (2 * rank - 1) ** (n - 1) for n in range(1, radius + 1))


# ---------------------------------------------------------------------------
# Brooks quasi-morphisms


def _count(text: str, pattern: str) -> int:
    # overlapping occurrences as a contiguous subword
    n = 0
    i = text.find(pattern)
    while i >= 0:
        n += 1
        i = text.find(pattern, i + 1)
    return n


def count_occurrences(x: ReducedWord, w: ReducedWord) -> int:
    """Occurrences of ``w`` as a contiguous subword of ``x``; overlaps counted."""
    if not w.text:
        raise ValueError("pattern must be nonempty")
    return _count(x.text, w.text)


EXCLUDED_PATTERNS = {"", "a", "b", "A", "B"}


@dataclass(frozen=True)
class BrooksQM:
    """g -> o(g, w) - o(g, w^-1)."""

    w: ReducedWord
    winv: ReducedWord = field(init=False)

    def __post_init__(self):
        if not self.w.text:
            raise ValueError("the pattern word must be nonempty")
        object.__setattr__(self, "winv", word_inv(self.w))

    @classmethod
    def of(cls, text: str, rank: int = 2) -> "BrooksQM":
        return cls(ReducedWord.parse(text, rank))

    @property
    def length(self) -> int:
        return len(self.w)

    @property
    def rank(self) -> int:
        return self.w.rank

    @property
    def defect_bound(self) -> int:
        """Analytic bound 3(l - 1) on the defect."""
        return 3 * (self.length - 1)

    @property
    def non_meyer_pattern(self) -> bool:
        """False for the patterns excluded by the non-Meyer example (generators, e)."""
        return not (self.rank == 2 and self.w.text in EXCLUDED_PATTERNS)

    def value_text(self, g: str) -> int:
        return _count(g, self.w.text) - _count(g, self.winv.text)

    def __call__(self, g: ReducedWord) -> int:
        if g.rank != self.rank:
            raise RankError(f"rank mismatch: {g.rank} vs {self.rank}")
        return self.value_text(g.text)

    def __str__(self):
        return f"f_{self.w}"


def brooks_eval(f: BrooksQM, g: ReducedWord) -> int:
    return f(g)


@dataclass(frozen=True)
class ConjugatedQM:
    """g -> base(c g c^-1); a symmetric quasi-morphism at bounded distance from ``base``."""

    base: BrooksQM
    by: ReducedWord

    @property
    def rank(self) -> int:
        return self.base.rank

    @property
    def defect_bound(self) -> int:
        return self.base.defect_bound

    def value_text(self, g: str) -> int:
        c = self.by.text
        return self.base.value_text(_mul_text(_mul_text(c, g), _inv_text(c)))

    def __call__(self, g: ReducedWord) -> int:
        return self.value_text(g.text)

    def __str__(self):
        return f"{self.base}({self.by} . {self.by}^-1)"


# ---------------------------------------------------------------------------
# defect


@dataclass
class DefectResult:
    max_defect: int
    witness: tuple[ReducedWord, ReducedWord]
    analytic_bound: int
    radius: int
    pairs_checked: int
    complete: bool

    @property
    def within_bound(self) -> bool:
        return self.max_defect <= self.analytic_bound

    def to_json(self) -> dict:
        return {
            "max_defect": self.max_defect,
            "witness": [str(self.witness[0]), str(self.witness[1])],
            "analytic_bound": self.analytic_bound,
            "within_bound": self.within_bound,
            "radius": self.radius,
            "pairs_checked": self.pairs_checked,
            "complete": self.complete,
            "note": "empirical maximum over the ball; a lower bound for the true defect"
            + ("" if self.complete else " (pair budget exhausted)"),
        }


def defect_max(f, radius: int, budget: int | None = None) -> DefectResult:
    """Exhaustive max of |f(gh) - f(g) - f(h)| over reduced g, h of length <= radius."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    words = [w.text for w in iter_ball(f.rank, radius)]
    values = [f.value_text(w) for w in words]
    best, witness = 0, ("", "")
    checked = 0
    complete = True
    val = f.value_text
    for g, fg in zip(words, values):
        if budget is not None and checked >= budget:
            complete = False
            break
        for h, fh in zip(words, values):
            d = abs(val(_mul_text(g, h)) - fg - fh)
            if d > best:
                best, witness = d, (g, h)
        checked += len(words)
    r = f.rank
    return DefectResult(
        best, (ReducedWord(witness[0], r), ReducedWord(witness[1], r)), f.defect_bound, radius, checked, complete
    )


def homogenize_estimate(f, g: ReducedWord, N: int) -> Fraction:
    """f(g^N) / N, exactly."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return Fraction(f(word_pow(g, N)), N)


# ---------------------------------------------------------------------------
# quasi-kernels


@dataclass
class QuasiKernelPatch:
    qm: object
    R: Fraction
    radius: int
    words: list[ReducedWord]
    values: list[int]

    def __len__(self):
        return len(self.words)

    def contains(self, g: ReducedWord) -> bool:
        """Exact membership in the full quasi-kernel (no length truncation)."""
        return abs(self.qm(g)) <= self.R

    def to_lines(self) -> str:
        return "".join(f"{w}\t{v}\n" for w, v in zip(self.words, self.values))


def quasi_kernel_patch(f, R, radius: int) -> QuasiKernelPatch:
    R = Fraction(R)
    if R < 0:
        raise ValueError("R must be >= 0")
    words, values = [], []
    for g in iter_ball(f.rank, radius):
        v = f.value_text(g.text)
        if abs(v) <= R:
            words.append(g)
            values.append(v)
    return QuasiKernelPatch(f, R, radius, words, values)


def separated_values(values, gap: Fraction) -> list:
    """Greedy maximal subset of the sorted values with consecutive spacing >= gap."""
    chosen = []
    for v in sorted(set(values)):
        if not chosen or v - chosen[-1] >= gap:
            chosen.append(v)
    return chosen


def _separated_cover(left: list[str], f, R: Fraction, C: Fraction):
    """F inside ``left`` with f(F) maximal (R - C)/2-separated in f(left)."""
    delta = R - C
    vals = {}
    for x in left:
        vals.setdefault(f.value_text(x), x)  # first representative in scan order
    chosen = separated_values(vals, delta / 2)
    return [vals[v] for v in chosen]


def _cover_failures(left: list[str], F: list[str], f, R: Fraction) -> list[str]:
    inv_F = [(_inv_text(g), f.value_text(g)) for g in F]
    failures = []
    for x in left:
        fx = f.value_text(x)
        # try the closest value first; fall back to every element of F
        for gi, _ in sorted(inv_F, key=lambda t: abs(fx - t[1])):
            if abs(f.value_text(_mul_text(gi, x))) <= R:
                break
        else:
            failures.append(x)
    return failures


def quasi_kernel_bound(R, C) -> Fraction:
    R, C = Fraction(R), Fraction(C)
    return 2 * (2 * R + C) / (R - C + 2)


def quasi_kernel_cover(f, R, C_used, radius: int) -> CoverCertificate:
    """Finite F with Lambda^2 in F Lambda for the quasi-kernel of ``f`` at level R.

    F is taken inside Lambda^2 with f(F) a maximal (R - C)/2-separated set of
    f-values; every product of ball elements of Lambda is checked exactly.
    """
    R, C = Fraction(R), Fraction(C_used)
    if R <= C:
        raise DomainError(f"the quasi-kernel lemma needs R > C(f); got R={R}, C={C}")
    patch = quasi_kernel_patch(f, R, radius)
    elems = [w.text for w in patch.words]
    products = list(dict.fromkeys(_mul_text(x, y) for x in elems for y in elems))
    F = _separated_cover(products, f, R, C)
    failures = _cover_failures(products, F, f, R)
    bound = quasi_kernel_bound(R, C)
    return CoverCertificate(
        Relation.X2_subset_FX,
        [ReducedWord(g, f.rank) for g in F],
        not failures,
        bound_claimed=f"|F| <= 2(2R+C)/(R-C+2) = {bound}",
        bound_satisfied=len(F) <= bound,
        failures=[ReducedWord(x, f.rank) for x in failures],
        box={"radius": radius, "R": str(R), "C_used": str(C), "kernel_size": len(elems)},
        checked=len(products),
    )


@dataclass
class QMCommensurability:
    forward: CoverCertificate  # Lambda_2 inside F Lambda_1
    backward: CoverCertificate  # Lambda_1 inside F Lambda_2
    eta: int
    lemma_bound: Fraction

    @property
    def verified(self) -> bool:
        return self.forward.verified and self.backward.verified

    def to_json(self) -> dict:
        return {
            "verified": self.verified,
            "eta_lower_bound": self.eta,
            "lemma_bound": str(self.lemma_bound),
            "lemma_bound_satisfied": max(len(self.forward.F), len(self.backward.F)) <= self.lemma_bound,
            "forward": self.forward.to_json(),
            "backward": self.backward.to_json(),
        }


def _qk_direction(f_cov, R_cov, C_cov, left_words: list[str], R_left, eta, rank, radius) -> CoverCertificate:
    # cover left (a quasi-kernel patch of the other map) by translates of f_cov^-1[-R_cov, R_cov]
    if all(abs(f_cov.value_text(x)) <= R_cov for x in left_words):
        F = [""]
    else:
        F = _separated_cover(left_words, f_cov, R_cov, C_cov)
    failures = _cover_failures(left_words, F, f_cov, R_cov)
    bound = 2 * (R_left + eta) / (R_cov - C_cov + 2)
    return CoverCertificate(
        Relation.X_subset_FY,
        [ReducedWord(g, rank) for g in F],
        not failures,
        bound_claimed=f"|F| <= 2(R+eta)/(R'-C'+2) = {bound}",
        bound_satisfied=len(F) <= bound,
        failures=[ReducedWord(x, rank) for x in failures],
        box={"radius": radius, "eta": eta},
        checked=len(left_words),
    )


def qm_commensurability_witness(f1, R1, C1, f2, R2, C2, radius: int) -> QMCommensurability:
    """Witnesses that the quasi-kernels of two close quasi-morphisms are commensurable.

    ``eta`` is the largest |f1 - f2| seen on the ball, a lower bound of the
    true supremum; the lemma bound is evaluated with it.
    """
    R1, C1, R2, C2 = map(Fraction, (R1, C1, R2, C2))
    if R1 <= C1 or R2 <= C2:
        raise DomainError("commensurability of quasi-kernels needs R1 > C(f1) and R2 > C(f2)")
    if f1.rank != f2.rank:
        raise RankError("quasi-morphisms on different free groups")
    rank = f1.rank
    words = [w.text for w in iter_ball(rank, radius)]
    eta = max(abs(f1.value_text(g) - f2.value_text(g)) for g in words)
    lam1 = [g for g in words if abs(f1.value_text(g)) <= R1]
    lam2 = [g for g in words if abs(f2.value_text(g)) <= R2]
    forward = _qk_direction(f1, R1, C1, lam2, R2, eta, rank, radius)
    backward = _qk_direction(f2, R2, C2, lam1, R1, eta, rank, radius)
    lemma = max(2 * (R1 + eta) / (R2 - C2 + 2), 2 * (R2 + eta) / (R1 - C1 + 2))
    return QMCommensurability(forward, backward, eta, lemma)
