"""Continuous piecewise-linear self-maps of [0, 1] with rational breakpoints.

A map is stored as its canonical breakpoint list: x strictly increasing from
0 to 1, every y in [0, 1], and no interior breakpoint collinear with its
neighbours.  Canonical form makes equality of maps equality of lists, and
keeps piece and lap counts honest after composition.
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceeded, DomainError, MapFormatError
from .exactnum import (
    ONE,
    ZERO,
    RInterval,
    as_rational,
    format_rational,
    intersect,
    merge_touching,
    subtract,
)

DEFAULT_PIECE_BUDGET = 200_000


class PLMap:
    """Piecewise-linear self-map of [0, 1]; immutable."""

    __slots__ = ("xs", "ys", "_hash")

    def __init__(self, breakpoints: Iterable[Tuple[object, object]]):
        pts = [(as_rational(x), as_rational(y)) for x, y in breakpoints]
        if len(pts) < 2:
            raise DomainError("a PL map needs at least two breakpoints")
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        if xs[0] != ZERO or xs[-1] != ONE:
            raise DomainError("breakpoints must start at x=0 and end at x=1")
        for a, b in zip(xs, xs[1:]):
            if not a < b:
                raise DomainError("breakpoint x-coordinates must be strictly increasing")
        for y in ys:
            if y < ZERO or y > ONE:
                raise DomainError(f"value {y} outside [0, 1]: not a self-map")
        xs, ys = _merge_collinear(xs, ys)
        self.xs: Tuple[Fraction, ...] = tuple(xs)
        self.ys: Tuple[Fraction, ...] = tuple(ys)
        self._hash = None

    @classmethod
    def _trusted(cls, xs: Sequence[Fraction], ys: Sequence[Fraction]) -> "PLMap":
        # skips validation; callers guarantee a valid self-map
        self = cls.__new__(cls)
        xs, ys = _merge_collinear(list(xs), list(ys))
        self.xs = tuple(xs)
        self.ys = tuple(ys)
        self._hash = None
        return self

    @classmethod
    def identity(cls) -> "PLMap":
        return cls([(0, 0), (1, 1)])

    @property
    def breakpoints(self) -> List[Tuple[Fraction, Fraction]]:
        return list(zip(self.xs, self.ys))

    @property
    def n_pieces(self) -> int:
        return len(self.xs) - 1

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.xs == other.xs and self.ys == other.ys

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.xs, self.ys))
        return self._hash

    def __repr__(self):
        pts = ", ".join(f"({format_rational(x)},{format_rational(y)})" for x, y in self.breakpoints)
        return f"PLMap[{pts}]"

    def __call__(self, t) -> Fraction:
        return evaluate(self, t)

    def slopes(self) -> List[Fraction]:
        return [
            (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
            for i in range(self.n_pieces)
        ]

    # -- float lowering, used only by the approximate oracle --------------
    def to_float_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return (
            np.array([float(x) for x in self.xs]),
            np.array([float(y) for y in self.ys]),
        )

    def float_callable(self):
        xs, ys = self.to_float_arrays()

        def fn(t):
            return np.interp(t, xs, ys)

        return fn

    # -- JSON ----------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "breakpoints": [
                {"x": format_rational(x), "y": format_rational(y)} for x, y in self.breakpoints
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "PLMap":
        try:
            raw = data["breakpoints"]
            pts = [(as_rational(str(p["x"])), as_rational(str(p["y"]))) for p in raw]
        except (KeyError, TypeError, DomainError) as exc:
            raise MapFormatError(f"malformed PL map: {exc}") from exc
        try:
            return cls(pts)
        except DomainError as exc:
            raise MapFormatError(str(exc)) from exc


def _merge_collinear(xs: List[Fraction], ys: List[Fraction]):
    if len(xs) <= 2:
        return xs, ys
    out_x = [xs[0]]
    out_y = [ys[0]]
    for j in range(1, len(xs) - 1):
        px, py = out_x[-1], out_y[-1]
        x, y = xs[j], ys[j]
        nx, ny = xs[j + 1], ys[j + 1]
        if (y - py) * (nx - x) != (ny - y) * (x - px):
            out_x.append(x)
            out_y.append(y)
    out_x.append(xs[-1])
    out_y.append(ys[-1])
    return out_x, out_y


def load_map(path) -> PLMap:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MapFormatError(f"{path}: invalid JSON ({exc})") from exc
    return PLMap.from_json(data)


def dump_map(f: PLMap, path) -> None:
    with open(path, "w") as fh:
        json.dump(f.to_json(), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# evaluation and composition


def evaluate(f: PLMap, t) -> Fraction:
    """Exact value of ``f`` at ``t``."""
    t = as_rational(t)
    if t < ZERO or t > ONE:
        raise DomainError(f"t={t} outside [0, 1]")
    return _eval(f.xs, f.ys, t)


def _eval(xs, ys, t):
    i = bisect_right(xs, t) - 1
    if i >= len(xs) - 1:
        return ys[-1]
    x0, x1 = xs[i], xs[i + 1]
    if t == x0:
        return ys[i]
    y0, y1 = ys[i], ys[i + 1]
    return y0 + (y1 - y0) * (t - x0) / (x1 - x0)


def compose(f: PLMap, g: PLMap, budget: int = DEFAULT_PIECE_BUDGET) -> PLMap:
    """The map ``f ∘ g`` (apply g first)."""
    fx, fy = f.xs, f.ys
    gx, gy = g.xs, g.ys
    out_x: List[Fraction] = []
    out_y: List[Fraction] = []
    limit = budget + 1
    for i in range(len(gx) - 1):
        x0, x1 = gx[i], gx[i + 1]
        y0, y1 = gy[i], gy[i + 1]
        out_x.append(x0)
        out_y.append(_eval(fx, fy, y0))
        if y0 != y1:
            lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
            a = bisect_right(fx, lo)
            b = bisect_left(fx, hi)
            if a < b:
                idx = range(a, b) if y0 < y1 else range(b - 1, a - 1, -1)
                scale = (x1 - x0) / (y1 - y0)
                for k in idx:
                    out_x.append(x0 + (fx[k] - y0) * scale)
                    out_y.append(fy[k])
        if len(out_x) > limit:
            raise BudgetExceeded(f"composition exceeds {budget} pieces")
    out_x.append(gx[-1])
    out_y.append(_eval(fx, fy, gy[-1]))
    return PLMap._trusted(out_x, out_y)


def iterate(f: PLMap, n: int, budget: int = DEFAULT_PIECE_BUDGET) -> PLMap:
    """``f`` composed with itself ``n`` times (``n = 0`` gives the identity)."""
    return Iterates(f, budget).power(n)


class Iterates:
    """Memoised powers of one map, built by repeated squaring."""

    def __init__(self, f: PLMap, budget: int = DEFAULT_PIECE_BUDGET):
        self.f = f
        self.budget = budget
        self._cache: Dict[int, PLMap] = {1: f}

    def power(self, n: int) -> PLMap:
        if n < 0:
            raise DomainError("negative iterate")
        if n == 0:
            return PLMap.identity()
        if n in self._cache:
            return self._cache[n]
        half = self.power(n // 2)
        sq = compose(half, half, self.budget)
        result = compose(self.f, sq, self.budget) if n % 2 else sq
        self._cache[n] = result
        return result


def reflect(f: PLMap) -> PLMap:
    """Conjugate by t -> 1 - t; swaps up and down behaviour."""
    pts = [(ONE - x, ONE - y) for x, y in reversed(f.breakpoints)]
    return PLMap._trusted([p[0] for p in pts], [p[1] for p in pts])


# ---------------------------------------------------------------------------
# images, extrema, preimages


def _interior_breakpoints(f: PLMap, lo: Fraction, hi: Fraction) -> List[int]:
    a = bisect_right(f.xs, lo)
    b = bisect_left(f.xs, hi)
    return list(range(a, b))


def image(f: PLMap, J: RInterval) -> RInterval:
    """Exact image ``f(J)`` for ``J ⊆ [0, 1]``, with endpoint openness."""
    if J.lo < ZERO or J.hi > ONE:
        raise DomainError(f"{J} is not inside [0, 1]")
    if J.is_degenerate:
        return RInterval.point(_eval(f.xs, f.ys, J.lo))
    v_lo = _eval(f.xs, f.ys, J.lo)
    v_hi = _eval(f.xs, f.ys, J.hi)
    inner = [f.ys[k] for k in _interior_breakpoints(f, J.lo, J.hi)]
    if not inner:
        inner = [_eval(f.xs, f.ys, J.midpoint)]
    every = [v_lo, v_hi] + inner
    attained = list(inner)
    if J.lo_closed:
        attained.append(v_lo)
    if J.hi_closed:
        attained.append(v_hi)
    lo, hi = min(every), max(every)
    if lo == hi:
        return RInterval.point(lo)
    return RInterval(lo, hi, lo in attained, hi in attained)


def max_on(f: PLMap, lo: Fraction, hi: Fraction) -> Fraction:
    """Maximum of ``f`` over the closed interval [lo, hi]."""
    vals = [_eval(f.xs, f.ys, lo), _eval(f.xs, f.ys, hi)]
    vals.extend(f.ys[k] for k in _interior_breakpoints(f, lo, hi))
    return max(vals)


def min_on(f: PLMap, lo: Fraction, hi: Fraction) -> Fraction:
    vals = [_eval(f.xs, f.ys, lo), _eval(f.xs, f.ys, hi)]
    vals.extend(f.ys[k] for k in _interior_breakpoints(f, lo, hi))
    return min(vals)


def preimages_in(f: PLMap, y: Fraction, J: RInterval) -> List[RInterval]:
    """Components of ``{t in J : f(t) = y}``, left to right."""
    y = as_rational(y)
    found: List[RInterval] = []
    for i in range(f.n_pieces):
        x0, x1 = f.xs[i], f.xs[i + 1]
        if x1 < J.lo or x0 > J.hi:
            continue
        y0, y1 = f.ys[i], f.ys[i + 1]
        if y0 == y1:
            if y0 == y:
                found.append(RInterval.closed(x0, x1))
            continue
        if min(y0, y1) <= y <= max(y0, y1):
            t = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            found.append(RInterval.point(t))
    clipped = []
    for comp in merge_touching(found):
        part = intersect(comp, J)
        if part is not None:
            clipped.append(part)
    return clipped


def leftmost_preimage(f: PLMap, y: Fraction, J: RInterval) -> Optional[Fraction]:
    comps = preimages_in(f, y, J)
    if not comps:
        return None
    return comps[0].sample_point()


# ---------------------------------------------------------------------------
# fixed and periodic points


def fixed_set(f: PLMap) -> List[RInterval]:
    """Maximal components of ``{t : f(t) = t}``, each closed, sorted."""
    parts: List[RInterval] = []
    for i in range(f.n_pieces):
        x0, x1 = f.xs[i], f.xs[i + 1]
        d0, d1 = f.ys[i] - x0, f.ys[i + 1] - x1
        if d0 == 0 and d1 == 0:
            parts.append(RInterval.closed(x0, x1))
        elif d0 == 0:
            parts.append(RInterval.point(x0))
        elif d1 == 0:
            parts.append(RInterval.point(x1))
        elif (d0 < 0) != (d1 < 0):
            parts.append(RInterval.point(x0 + d0 * (x1 - x0) / (d0 - d1)))
    return merge_touching(parts)


def _proper_divisors(p: int) -> List[int]:
    return [q for q in range(1, p) if p % q == 0]


def periodic_points(
    f: PLMap,
    p: int,
    budget: int = DEFAULT_PIECE_BUDGET,
    iterates: Optional[Iterates] = None,
) -> List[RInterval]:
    """Components of the set of points of exact period ``p``."""
    if p < 1:
        raise DomainError("period must be positive")
    its = iterates if iterates is not None else Iterates(f, budget)
    pts = fixed_set(its.power(p))
    for q in _proper_divisors(p):
        pts = subtract(pts, fixed_set(its.power(q)))
    return pts


def has_period(f: PLMap, p: int, budget: int = DEFAULT_PIECE_BUDGET,
               iterates: Optional[Iterates] = None) -> bool:
    return bool(periodic_points(f, p, budget, iterates))


# ---------------------------------------------------------------------------
# monotonicity and laps


def lap_count(f: PLMap) -> int:
    """Minimal number of intervals on which ``f`` is weakly monotone."""
    laps = 1
    direction = 0
    for i in range(f.n_pieces):
        dy = f.ys[i + 1] - f.ys[i]
        s = (dy > 0) - (dy < 0)
        if s == 0:
            continue
        if direction and s != direction:
            laps += 1
        direction = s
    return laps


@dataclass(frozen=True)
class LapProfile:
    laps: Tuple[int, ...]  # laps[k] is c_{k+1}

    def c(self, n: int) -> int:
        return self.laps[n - 1]

    def __len__(self):
        return len(self.laps)


def lap_numbers(f: PLMap, n_max: int, budget: int = DEFAULT_PIECE_BUDGET) -> LapProfile:
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    out = []
    g = f
    for n in range(1, n_max + 1):
        if n > 1:
            g = compose(f, g, budget)
        out.append(lap_count(g))
    return LapProfile(tuple(out))


def is_nondecreasing(f: PLMap) -> bool:
    return all(b >= a for a, b in zip(f.ys, f.ys[1:]))


def is_nonincreasing(f: PLMap) -> bool:
    return all(b <= a for a, b in zip(f.ys, f.ys[1:]))


def is_monotone(f: PLMap) -> bool:
    return is_nondecreasing(f) or is_nonincreasing(f)
