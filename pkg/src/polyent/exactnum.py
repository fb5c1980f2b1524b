"""Exact rational scalars and rational intervals.

Every coordinate in the exact pipeline is a :class:`fractions.Fraction`;
``Rational`` is an alias so signatures read in the problem's vocabulary.
Intervals carry endpoint openness explicitly, because orbits of essential
intervals are half-open and images of plateaus are single points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Union

from .errors import DomainError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, ``"p/q"`` strings and Fractions; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise DomainError(f"not an exact rational literal: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not an exact rational literal: {value!r}") from exc
    raise DomainError(f"cannot treat {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Canonical ``"p/q"`` (or ``"p"`` when q == 1)."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rat_cmp(a: Fraction, b: Fraction) -> int:
    """Three-way comparison: -1, 0 or 1."""
    # Fraction comparison cross-multiplies exactly.
    return (a > b) - (a < b)


@dataclass(frozen=True)
class RInterval:
    """A nonempty interval of rationals with explicit endpoint openness."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"empty interval: lo={self.lo} > hi={self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise DomainError("a degenerate interval must be closed at both ends")

    @classmethod
    def closed(cls, lo: RationalLike, hi: RationalLike) -> "RInterval":
        return cls(as_rational(lo), as_rational(hi), True, True)

    @classmethod
    def open(cls, lo: RationalLike, hi: RationalLike) -> "RInterval":
        return cls(as_rational(lo), as_rational(hi), False, False)

    @classmethod
    def point(cls, x: RationalLike) -> "RInterval":
        x = as_rational(x)
        return cls(x, x, True, True)

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, t: Fraction) -> bool:
        if t < self.lo or t > self.hi:
            return False
        if t == self.lo and not self.lo_closed:
            return False
        if t == self.hi and not self.hi_closed:
            return False
        return True

    __contains__ = contains

    def sample_point(self) -> Fraction:
        """A deterministic member: the left end when closed, else the midpoint."""
        return self.lo if self.lo_closed else self.midpoint

    def closure(self) -> "RInterval":
        return RInterval(self.lo, self.hi, True, True)

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_rational(self.lo)}, {format_rational(self.hi)}{right}"

    def to_json(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RInterval":
        return cls(
            as_rational(data["lo"]),
            as_rational(data["hi"]),
            bool(data.get("lo_closed", True)),
            bool(data.get("hi_closed", True)),
        )


def interval_subset(a: RInterval, b: RInterval) -> bool:
    """True iff every real of ``a`` lies in ``b``."""
    if a.lo < b.lo or (a.lo == b.lo and a.lo_closed and not b.lo_closed):
        return False
    if a.hi > b.hi or (a.hi == b.hi and a.hi_closed and not b.hi_closed):
        return False
    return True


def intersect(a: RInterval, b: RInterval) -> Optional[RInterval]:
    if a.lo > b.lo:
        lo, lo_closed = a.lo, a.lo_closed
    elif a.lo < b.lo:
        lo, lo_closed = b.lo, b.lo_closed
    else:
        lo, lo_closed = a.lo, a.lo_closed and b.lo_closed
    if a.hi < b.hi:
        hi, hi_closed = a.hi, a.hi_closed
    elif a.hi > b.hi:
        hi, hi_closed = b.hi, b.hi_closed
    else:
        hi, hi_closed = a.hi, a.hi_closed and b.hi_closed
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return None
    return RInterval(lo, hi, lo_closed, hi_closed)


def hull(a: RInterval, b: RInterval) -> RInterval:
    """Smallest interval containing both."""
    if a.lo < b.lo:
        lo, lo_closed = a.lo, a.lo_closed
    elif a.lo > b.lo:
        lo, lo_closed = b.lo, b.lo_closed
    else:
        lo, lo_closed = a.lo, a.lo_closed or b.lo_closed
    if a.hi > b.hi:
        hi, hi_closed = a.hi, a.hi_closed
    elif a.hi < b.hi:
        hi, hi_closed = b.hi, b.hi_closed
    else:
        hi, hi_closed = a.hi, a.hi_closed or b.hi_closed
    return RInterval(lo, hi, lo_closed, hi_closed)


def disjoint(a: RInterval, b: RInterval) -> bool:
    return intersect(a, b) is None


def subtract(pieces: Iterable[RInterval], removed: Iterable[RInterval]) -> List[RInterval]:
    """Set difference of two finite unions of intervals, sorted by left end."""
    current = sorted(pieces, key=lambda iv: (iv.lo, not iv.lo_closed))
    for cut in removed:
        nxt: List[RInterval] = []
        for iv in current:
            if intersect(iv, cut) is None:
                nxt.append(iv)
                continue
            # openness flips where the cut begins and ends
            left = _maybe(iv.lo, cut.lo, iv.lo_closed, not cut.lo_closed)
            right = _maybe(cut.hi, iv.hi, not cut.hi_closed, iv.hi_closed)
            nxt.extend(part for part in (left, right) if part is not None)
        current = sorted(nxt, key=lambda iv: (iv.lo, not iv.lo_closed))
    return current


def _maybe(lo, hi, lo_closed, hi_closed) -> Optional[RInterval]:
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return None
    return RInterval(lo, hi, lo_closed, hi_closed)


def merge_touching(pieces: Iterable[RInterval]) -> List[RInterval]:
    """Union of intervals as maximal connected components."""
    items = sorted(pieces, key=lambda iv: (iv.lo, not iv.lo_closed))
    out: List[RInterval] = []
    for iv in items:
        if out:
            last = out[-1]
            touching = iv.lo < last.hi or (iv.lo == last.hi and (iv.lo_closed or last.hi_closed))
            if touching:
                out[-1] = hull(last, iv)
                continue
        out.append(iv)
    return out
