"""Exact constructors for the reference maps and the period-doubling operator."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .plmap import PLMap, evaluate

THIRD = Fraction(1, 3)
TWO_THIRDS = Fraction(2, 3)

KINDS = ("f0", "gn", "plateau", "tent", "identity", "doubled")


@dataclass(frozen=True)
class FamilySpec:
    """Names one map of the zoo.

    ``kind`` is one of ``f0``, ``gn``, ``plateau``, ``tent``, ``identity``
    or ``doubled``; ``n`` is the index for ``gn``; ``base`` and ``times``
    describe ``doubled`` (``times`` applications of the doubling operator).
    """

    kind: str
    n: int = 0
    base: Optional["FamilySpec"] = None
    times: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown family kind {self.kind!r}")
        if self.kind == "gn" and self.n < 0:
            raise DomainError("g_n needs n >= 0")
        if self.kind == "doubled":
            if self.base is None or self.times < 0:
                raise DomainError("doubled needs a base spec and times >= 0")

    @property
    def label(self) -> str:
        if self.kind == "gn":
            return f"g_{self.n}"
        if self.kind == "doubled":
            return f"Phi^{self.times}({self.base.label})"
        return self.kind


def f0() -> PLMap:
    """The reflection x -> 1 - x."""
    return PLMap([(0, 1), (1, 0)])


def identity() -> PLMap:
    return PLMap.identity()


def plateau() -> PLMap:
    """2x on [0, 1/2], constant 1 on [1/2, 1]."""
    return PLMap([(0, 0), (Fraction(1, 2), 1), (1, 1)])


def tent() -> PLMap:
    """The full tent map; it has a 3-cycle."""
    return PLMap([(0, 0), (Fraction(1, 2), 1), (1, 0)])


def gn(n: int) -> PLMap:
    """Representative of g_n: fixed points exactly i/n, graph above the diagonal.

    On [(i-1)/n, i/n] the graph rises linearly to height min(n, i+1)/n at the
    midpoint and falls back to (i/n, i/n); so g_n maps that segment onto
    [(i-1)/n, min(n, i+1)/n].  g_0 is the identity.
    """
    if n < 0:
        raise DomainError("g_n needs n >= 0")
    if n == 0:
        return identity()
    pts = [(Fraction(0), Fraction(0))]
    for i in range(1, n + 1):
        mid = Fraction(2 * i - 1, 2 * n)
        pts.append((mid, Fraction(min(n, i + 1), n)))
        pts.append((Fraction(i, n), Fraction(i, n)))
    return PLMap(pts)


def double(f: PLMap) -> PLMap:
    """Period-doubling operator.

    On [0, 1/3] the new map is 2/3 + f(3x)/3, on [2/3, 1] it is x - 2/3, and
    on the middle third it joins (1/3, 2/3 + f(1)/3) to (2/3, 0) linearly.
    Its second iterate restricted to [0, 1/3] is f rescaled by 1/3.
    """
    pts = [(x / 3, TWO_THIRDS + y / 3) for x, y in f.breakpoints]
    pts.append((TWO_THIRDS, Fraction(0)))
    pts.append((Fraction(1), THIRD))
    return PLMap(pts)


def doubled(f: PLMap, times: int) -> PLMap:
    for _ in range(times):
        f = double(f)
    return f


def make(spec: FamilySpec) -> PLMap:
    if spec.kind == "f0":
        return f0()
    if spec.kind == "gn":
        return gn(spec.n)
    if spec.kind == "plateau":
        return plateau()
    if spec.kind == "tent":
        return tent()
    if spec.kind == "identity":
        return identity()
    return doubled(make(spec.base), spec.times)


def conjugacy_holds(f: PLMap, t: Fraction) -> bool:
    """Check 3 * (double f)^2(t) == f(3t) at one rational t in [0, 1/3]."""
    phi = double(f)
    return 3 * evaluate(phi, evaluate(phi, t)) == evaluate(f, 3 * t)
