"""Exact arithmetic in Q and real quadratic fields Q(sqrt D), plus the small
amount of exact linear algebra needed to validate lattice bases.

Rationals are ``fractions.Fraction``. A :class:`QuadraticNumber` stores
``a + b*sqrt(D)`` with rational ``a``, ``b``. ``D == RATIONAL`` is the
sentinel for a purely rational field; such numbers always have ``b == 0``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

RATIONAL = 1  # field sentinel: no square root adjoined

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

# sqrt(D) is approximated as isqrt(D * 4**_SQRT_BITS) / 2**_SQRT_BITS for
# float views and interval enclosures.
_SQRT_BITS = 96


class FieldMismatchError(ValueError):
    """Arithmetic between numbers of two different quadratic fields."""


def parse_rational(text) -> Fraction:
    """Parse ``RAT := [sign] integer [ '/' positive-integer ]``.

    JSON integers are accepted as well. Decimals and exponents are rejected.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def check_field(D: int) -> int:
    if D == RATIONAL:
        return D
    if not isinstance(D, int) or not is_squarefree(D):
        raise ValueError(f"field parameter must be a squarefree integer >= 2, got {D!r}")
    return D


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sqrt_bounds(D: int, bits: int = _SQRT_BITS) -> tuple[Fraction, Fraction]:
    s = math.isqrt(D << (2 * bits))
    scale = 1 << bits
    lo = Fraction(s, scale)
    hi = lo if s * s == D << (2 * bits) else Fraction(s + 1, scale)
    return lo, hi


@dataclass(frozen=True, slots=True)
class QuadraticNumber:
    a: Fraction
    b: Fraction
    D: int = RATIONAL

    def __post_init__(self):
        # canonicalise without running the field check on every hot-path op
        if type(self.a) is not Fraction:
            object.__setattr__(self, "a", Fraction(self.a))
        if type(self.b) is not Fraction:
            object.__setattr__(self, "b", Fraction(self.b))
        if self.D == RATIONAL and self.b != 0:
            raise ValueError("rational field element with nonzero sqrt part")

    @classmethod
    def of(cls, a, b=0, D: int = RATIONAL) -> "QuadraticNumber":
        return cls(Fraction(a), Fraction(b), check_field(D))

    @classmethod
    def rational(cls, a, D: int = RATIONAL) -> "QuadraticNumber":
        return cls(Fraction(a), Fraction(0), D)

    # -- field bookkeeping -------------------------------------------------
    def _coerce(self, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            if other.D == self.D:
                return other
            if other.D == RATIONAL:
                return QuadraticNumber(other.a, other.b, self.D)
            if self.D == RATIONAL and self.b == 0:
                return other
            raise FieldMismatchError(f"cannot mix Q(sqrt {self.D}) and Q(sqrt {other.D})")
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(Fraction(other), Fraction(0), self.D)
        return NotImplemented

    def _field(self, other: "QuadraticNumber") -> int:
        return self.D if self.D != RATIONAL else other.D

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.D)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a - o.a, self.b - o.b, self._field(o))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        D = self._field(o)
        return QuadraticNumber(
            self.a * o.a + self.b * o.b * D, self.a * o.b + self.b * o.a, D
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``a^2 - b^2 D`` (product with the Galois conjugate)."""
        return self.a * self.a - self.b * self.b * self.D

    def inverse(self) -> "QuadraticNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        return QuadraticNumber(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # -- order ---------------------------------------------------------------
    def sign(self) -> int:
        return quad_sign(self)

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare QuadraticNumber with {type(other).__name__}")
        return quad_sign(self - o)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, QuadraticNumber):
            return NotImplemented
        if self.b == 0 and other.b == 0:
            return self.a == other.a
        return self.D == other.D and self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __abs__(self):
        return -self if quad_sign(self) < 0 else self

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    # -- views ---------------------------------------------------------------
    def __float__(self) -> float:
        if self.b == 0:
            return float(self.a)
        lo, _ = _sqrt_bounds(self.D)
        return float(self.a + self.b * lo)

    def enclosure(self) -> tuple[Fraction, Fraction]:
        """Rational lower/upper bounds on the real value (outer-rounded)."""
        if self.b == 0:
            return self.a, self.a
        lo, hi = _sqrt_bounds(self.D)
        ends = (self.a + self.b * lo, self.a + self.b * hi)
        return min(ends), max(ends)

    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "b": format_rational(self.b)}

    @classmethod
    def from_json(cls, obj, D: int = RATIONAL) -> "QuadraticNumber":
        if isinstance(obj, dict):
            a = parse_rational(obj.get("a", 0))
            b = parse_rational(obj.get("b", 0))
        else:
            a, b = parse_rational(obj), Fraction(0)
        if D == RATIONAL and b != 0:
            raise ValueError("sqrt part given for a scheme without 'sqrt'")
        return cls(a, b, D)

    def __repr__(self):
        if self.b == 0:
            return f"Q({format_rational(self.a)})"
        return f"Q({format_rational(self.a)} + {format_rational(self.b)}*sqrt{self.D})"

    def __str__(self):
        if self.b == 0:
            return format_rational(self.a)
        return f"{format_rational(self.a)}{'+' if self.b >= 0 else '-'}{format_rational(abs(self.b))}*sqrt({self.D})"


def quad_sign(x: QuadraticNumber) -> int:
    """Exact sign of ``a + b*sqrt(D)``."""
    sa, sb = _sign(x.a), _sign(x.b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # mixed signs: the larger of a^2 and b^2 D wins (they never tie for squarefree D)
    return sa if x.a * x.a > x.b * x.b * x.D else sb


def galois_conjugate(x: QuadraticNumber) -> QuadraticNumber:
    return QuadraticNumber(x.a, -x.b, x.D)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class ExactMatrix:
    entries: tuple[tuple[QuadraticNumber, ...], ...]
    D: int = RATIONAL

    def __post_init__(self):
        rows = tuple(tuple(self._lift(e) for e in row) for row in self.entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    def _lift(self, e) -> QuadraticNumber:
        if isinstance(e, QuadraticNumber):
            if e.D not in (self.D, RATIONAL) and not (e.b == 0):
                raise FieldMismatchError(f"entry from Q(sqrt {e.D}) in a Q(sqrt {self.D}) matrix")
            return QuadraticNumber(e.a, e.b, self.D)
        return QuadraticNumber(Fraction(e), Fraction(0), self.D)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], D: int = RATIONAL) -> "ExactMatrix":
        return cls(tuple(tuple(r) for r in rows), check_field(D))

    @classmethod
    def identity(cls, n: int, D: int = RATIONAL) -> "ExactMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], D)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row_block(self, start: int, stop: int) -> "ExactMatrix":
        return ExactMatrix(self.entries[start:stop], self.D)

    def scaled(self, c) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(e * c for e in row) for row in self.entries), self.D)

    def matvec(self, z: Sequence[int]) -> tuple[QuadraticNumber, ...]:
        out = []
        for row in self.entries:
            acc = QuadraticNumber(Fraction(0), Fraction(0), self.D)
            for e, zi in zip(row, z):
                if zi:
                    acc = acc + e * zi
            out.append(acc)
        return tuple(out)

    def split(self) -> list[list[Fraction]]:
        """Rational matrix with each row ``a + b sqrt D`` split into an a-row and a b-row."""
        out = []
        for row in self.entries:
            out.append([e.a for e in row])
            out.append([e.b for e in row])
        return out


def _rank_rows(rows: list[list], is_zero) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if not is_zero(rows[i][col])), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            if not is_zero(rows[i][col]):
                factor = rows[i][col] / p
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def rational_rank(M: ExactMatrix) -> int:
    """Rank over Q of the split matrix (each entry row split into a- and b-parts)."""
    return _rank_rows(M.split(), lambda x: x == 0)


def field_rank(M: ExactMatrix) -> int:
    """Rank over Q(sqrt D), which equals the rank over R."""
    return _rank_rows([list(r) for r in M.entries], lambda x: x.is_zero())


def inverse(M: ExactMatrix) -> ExactMatrix:
    """Exact inverse of a square matrix over Q(sqrt D) (Gauss-Jordan)."""
    n, c = M.shape
    if n != c:
        raise ValueError("inverse of a non-square matrix")
    zero = QuadraticNumber(Fraction(0), Fraction(0), M.D)
    one = QuadraticNumber(Fraction(1), Fraction(0), M.D)
    aug = [list(M.entries[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if not aug[i][col].is_zero()), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p_inv = aug[col][col].inverse()
        aug[col] = [x * p_inv for x in aug[col]]
        for i in range(n):
            if i != col and not aug[i][col].is_zero():
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return ExactMatrix(tuple(tuple(r[n:]) for r in aug), M.D)
