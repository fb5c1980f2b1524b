"""One-way horseshoe certificates: construction, exact verification, and the
separated sets they generate.

A one-way l-horseshoe for F = f^k is a list of pairwise disjoint closed
intervals A_1..A_l with F(A_i) containing A_j whenever i <= j, together with
a non-recurrent point of A_l.  Every such certificate forces
h_pol(f) >= l, and the nondecreasing itineraries through the A_i give an
explicit (n, eps)-separated set of size C(n+l-1, l).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import List, Optional, Sequence, Tuple

from .errors import (
    BudgetExceeded,
    DomainError,
    EmptyChain,
    InternalInvariantViolation,
    MapFormatError,
    NoSimpleCycleFound,
    PreimageSelectionFailure,
)
from .exactnum import RInterval, as_rational, disjoint, format_rational, interval_subset
from .fixstruct import UP, EssentialInterval, chain_is_valid, is_type1
from .plmap import (
    DEFAULT_PIECE_BUDGET,
    Iterates,
    PLMap,
    evaluate,
    image,
    leftmost_preimage,
    periodic_points,
)

DEFAULT_DOUBLING_CAP = 16
DEFAULT_RECURRENCE_HORIZON = 2000


@dataclass(frozen=True)
class HorseshoeCertificate:
    intervals: Tuple[RInterval, ...]
    iterate: int
    witness: Fraction

    @property
    def order(self) -> int:
        return len(self.intervals)

    def to_json(self) -> dict:
        return {
            "iterate": self.iterate,
            "intervals": [[format_rational(A.lo), format_rational(A.hi)] for A in self.intervals],
            "witness": format_rational(self.witness),
        }

    @classmethod
    def from_json(cls, data: dict) -> "HorseshoeCertificate":
        try:
            k = int(data["iterate"])
            ivs = tuple(RInterval.closed(a, b) for a, b in data["intervals"])
            w = as_rational(data["witness"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MapFormatError(f"bad certificate: {exc}") from exc
        if k < 1:
            raise MapFormatError("iterate must be a positive integer")
        return cls(ivs, k, w)


# Structured verification failures.

@dataclass(frozen=True)
class DisjointnessFailure:
    i: int
    j: int

    def __str__(self):
        return f"A_{self.i + 1} and A_{self.j + 1} intersect"


@dataclass(frozen=True)
class CoveringFailure:
    i: int
    j: int
    iterate: int

    def __str__(self):
        return f"f^{self.iterate}(A_{self.i + 1}) does not contain A_{self.j + 1}"


@dataclass(frozen=True)
class WitnessFailure:
    reason: str

    def __str__(self):
        return f"witness rejected: {self.reason}"


@dataclass(frozen=True)
class Verification:
    ok: bool
    failure: Optional[object] = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if self.failure is not None:
            out["failure"] = type(self.failure).__name__
            out["detail"] = str(self.failure)
        return out


def _covering_failure(F: PLMap, intervals: Sequence[RInterval], k: int):
    for i, A in enumerate(intervals):
        img = image(F, A)
        for j in range(i, len(intervals)):
            if not interval_subset(intervals[j], img):
                return CoveringFailure(i, j, k)
    return None


def _eventually_leaves(F: PLMap, w: Fraction, horizon: int) -> bool:
    """Exact check that the F-orbit of w is preperiodic and never returns to w."""
    seen = {w: 0}
    x = w
    for step in range(1, horizon + 1):
        x = evaluate(F, x)
        if x == w:
            return False
        if x in seen:
            # landed in a cycle that avoids w: w is isolated from its future orbit
            return True
        seen[x] = step
    return False


def verify_horseshoe(f: PLMap, cert: HorseshoeCertificate,
                     budget: int = DEFAULT_PIECE_BUDGET,
                     horizon: int = DEFAULT_RECURRENCE_HORIZON) -> Verification:
    """Exact re-check of a certificate under f^k and f^{2k}."""
    ivs = cert.intervals
    if not ivs:
        return Verification(False, WitnessFailure("certificate has no intervals"))
    for i, j in itertools.combinations(range(len(ivs)), 2):
        if not disjoint(ivs[i], ivs[j]):
            return Verification(False, DisjointnessFailure(i, j))
    its = Iterates(f, budget)
    F = its.power(cert.iterate)
    for k in (cert.iterate, 2 * cert.iterate):
        fail = _covering_failure(its.power(k), ivs, k)
        if fail is not None:
            return Verification(False, fail)
    w = cert.witness
    if w not in ivs[-1]:
        return Verification(False, WitnessFailure("witness lies outside the last interval"))
    if evaluate(F, w) == w:
        return Verification(False, WitnessFailure("witness is fixed by the iterate"))
    if evaluate(f, w) == w:
        return Verification(False, WitnessFailure("witness is a fixed point"))
    if _eventually_leaves(F, w, horizon):
        return Verification(True)
    # period 2 alone decides type 1, and then every non-fixed point is non-recurrent
    if is_type1(F, budget, probes=(2,)).verdict:
        return Verification(True)
    return Verification(False, WitnessFailure(
        "iterate is not type 1 and no finite escape of the witness orbit was found"))


def _source_half(I: EssentialInterval) -> RInterval:
    if I.orientation == UP:
        return RInterval.closed(I.a, I.midpoint)
    return RInterval.closed(I.midpoint, I.b)


def horseshoe_from_chain(f: PLMap, chain: Sequence[EssentialInterval],
                         doubling_cap: int = DEFAULT_DOUBLING_CAP,
                         budget: int = DEFAULT_PIECE_BUDGET) -> HorseshoeCertificate:
    """Certificate from a covering chain of essential intervals of a type-1 map.

    A_i joins the source of I_i to its midpoint; the iterate is found by
    doubling k until every required covering holds exactly.
    """
    if not chain:
        raise EmptyChain("a horseshoe needs at least one interval")
    if not chain_is_valid(f, list(chain)):
        raise DomainError("chain is not a covering chain of essential intervals of f")
    ivs = tuple(_source_half(I) for I in chain)
    witness = chain[-1].midpoint
    its = Iterates(f, budget)
    k = 1
    for _ in range(doubling_cap + 1):
        if _covering_failure(its.power(k), ivs, k) is None:
            cert = HorseshoeCertificate(ivs, k, witness)
            result = verify_horseshoe(f, cert, budget)
            if not result:
                raise InternalInvariantViolation(f"chain certificate failed: {result.failure}")
            return cert
        k *= 2
    raise BudgetExceeded(f"no covering iterate up to 2^{doubling_cap}")


def horseshoe_for_map(f: PLMap, n_budget: int = 4,
                      budget: int = DEFAULT_PIECE_BUDGET) -> Optional[HorseshoeCertificate]:
    """A maximal-order certificate for a map of finite type 2^n, iterate relative to f.

    Returns None when the entropy is zero (no horseshoe exists).
    """
    from .classify import POWER_OF_TWO, polynomial_entropy

    report = polynomial_entropy(f, n_budget, budget)
    if report.type.kind != POWER_OF_TWO:
        raise DomainError(f"map has type {report.type}; only finite 2^n types are handled")
    if report.h_pol == 0:
        return None
    g = Iterates(f, budget).power(report.iterate)
    inner = horseshoe_from_chain(g, report.chain.chain, budget=budget)
    cert = HorseshoeCertificate(inner.intervals, inner.iterate * report.iterate, inner.witness)
    if not verify_horseshoe(f, cert, budget):
        raise InternalInvariantViolation("lifted certificate failed verification")
    return cert


# Simple 2^n-cycles.

def _orbit(step, x: Fraction, limit: int) -> Optional[List[Fraction]]:
    pts = [x]
    y = step(x)
    while y != x:
        pts.append(y)
        if len(pts) > limit:
            return None
        y = step(y)
    return pts


def is_simple_cycle(f: PLMap, cycle: Sequence[Fraction]) -> bool:
    """Recursive simplicity: halves swapped by f and each half simple for f^2."""
    pts = sorted(set(cycle))

    def power_step(m):
        def step(x):
            for _ in range(m):
                x = evaluate(f, x)
            return x
        return step

    def simple(points, m):
        if len(points) <= 2:
            return True
        if len(points) % 2:
            return False
        step = power_step(m)
        half = len(points) // 2
        left, right = points[:half], points[half:]
        if {step(x) for x in left} != set(right) or {step(x) for x in right} != set(left):
            return False
        return simple(left, 2 * m) and simple(right, 2 * m)

    return simple(pts, 1)


def find_simple_cycle(f: PLMap, n: int, budget: int = DEFAULT_PIECE_BUDGET) -> List[Fraction]:
    """A simple cycle of exact period 2^n, sorted."""
    p = 2 ** n
    try:
        comps = periodic_points(f, p, budget)
    except BudgetExceeded as exc:
        raise NoSimpleCycleFound(f"period-{p} search exceeded the piece budget") from exc
    tried = set()
    for comp in comps:
        for x in (comp.sample_point(), comp.midpoint):
            if x in tried:
                continue
            orbit = _orbit(lambda t: evaluate(f, t), x, p)
            if orbit is None or len(orbit) != p:
                continue
            tried.update(orbit)
            if is_simple_cycle(f, orbit):
                return sorted(orbit)
    raise NoSimpleCycleFound(f"no simple cycle of period {p} among the exact periodic points")


def horseshoe_from_simple_cycle(f: PLMap, n: int,
                                budget: int = DEFAULT_PIECE_BUDGET) -> HorseshoeCertificate:
    """Order n-1 certificate for f^(2^n) built from nested middle intervals."""
    if n < 2:
        raise DomainError("a simple-cycle horseshoe needs n >= 2")
    P = find_simple_cycle(f, n, budget)
    its = Iterates(f, budget)
    F = its.power(2 ** n)
    intervals: List[RInterval] = []
    points = P
    while len(points) >= 4:
        half = len(points) // 2
        intervals.append(RInterval.closed(points[half - 1], points[half]))
        last_cycle = points
        points = points[half:]
    # at the deepest level F acts as phi^4 on a 4-cycle of phi; a point of M
    # sent to its minimum is non-recurrent
    M = intervals[-1]
    witness = leftmost_preimage(F, last_cycle[0], M)
    if witness is None:
        raise InternalInvariantViolation("middle interval does not reach the cycle minimum")
    cert = HorseshoeCertificate(tuple(intervals), 2 ** n, witness)
    result = verify_horseshoe(f, cert, budget)
    if not result:
        raise InternalInvariantViolation(f"simple-cycle certificate failed: {result.failure}")
    return cert


# Separated sets.

@dataclass(frozen=True)
class SeparatedWitness:
    n: int
    epsilon: Fraction
    points: Tuple[Fraction, ...]
    iterate: int = 1

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "iterate": self.iterate,
            "epsilon": format_rational(self.epsilon),
            "points": [format_rational(p) for p in self.points],
        }


def nondecreasing_words(k: int, ell: int):
    return itertools.combinations_with_replacement(range(ell), k)


def _gap(A: RInterval, B: RInterval) -> Fraction:
    if A.hi < B.lo:
        return B.lo - A.hi
    return A.lo - B.hi


def is_separated(F: PLMap, points: Sequence[Fraction], n: int, eps: Fraction) -> bool:
    """Exact (n, eps)-separation for F: every pair differs by > eps at some time < n."""
    trajs = []
    for x in points:
        t = [x]
        for _ in range(n - 1):
            t.append(evaluate(F, t[-1]))
        trajs.append(t)
    for a, b in itertools.combinations(trajs, 2):
        if not any(abs(u - v) > eps for u, v in zip(a, b)):
            return False
    return True


def separated_witness_from_horseshoe(f: PLMap, cert: HorseshoeCertificate, n: int,
                                     budget: int = DEFAULT_PIECE_BUDGET) -> SeparatedWitness:
    """One point per nondecreasing word of length < n, each steered into the witness.

    Separation is measured for F = f^k, the iterate named by the certificate.
    """
    if n < 1:
        raise DomainError("horizon n must be >= 1")
    F = Iterates(f, budget).power(cert.iterate)
    A = cert.intervals
    x = cert.witness
    gaps = [_gap(A[i], A[j]) for i, j in itertools.combinations(range(len(A)), 2)]
    y = x
    for _ in range(1, n):
        y = evaluate(F, y)
        gaps.append(abs(y - x))
    eps = min(gaps) / 2 if gaps else Fraction(1, 2)
    if eps <= 0:
        raise InternalInvariantViolation("certificate geometry gives no positive separation")
    pts: List[Fraction] = []
    for k in range(n):
        for word in nondecreasing_words(k, len(A)):
            y = x
            for s in reversed(word):
                y = leftmost_preimage(F, y, A[s])
                if y is None:
                    raise PreimageSelectionFailure(f"no preimage inside A_{s + 1} for word {word}")
            pts.append(y)
    if len(set(pts)) != len(pts) or not is_separated(F, pts, n, eps):
        raise InternalInvariantViolation("constructed set is not separated")
    return SeparatedWitness(n, eps, tuple(pts), cert.iterate)


# Counting.

def ndw_count(k: int, ell: int) -> int:
    """Number of nondecreasing words of length k over ell symbols."""
    if k < 0 or ell < 1:
        raise DomainError("need k >= 0 and ell >= 1")
    return comb(k + ell - 1, ell - 1)


def en_count(n: int, ell: int) -> int:
    """Size of the separated set: sum of ndw_count(k, ell) for k < n."""
    if n < 1 or ell < 1:
        raise DomainError("need n >= 1 and ell >= 1")
    closed = comb(n + ell - 1, ell)
    summed = sum(ndw_count(k, ell) for k in range(n))
    if closed != summed:
        raise InternalInvariantViolation("hockey-stick identity failed")
    return closed


def p2(m: int, s: int) -> int:
    """Ordered m-tuples of integers >= 2 summing to s."""
    if m < 1:
        return 1 if s == 0 else 0
    if s < 2 * m:
        return 0
    return comb(s - m - 1, m - 1)


def allowable_word_bound(n: int, alphabet_size: int, ell: int) -> int:
    """Upper bound on words of length n where every repeated symbol forms one
    contiguous block and at most ell symbols repeat.  Requires n > alphabet_size."""
    if n <= alphabet_size:
        raise DomainError("the bound is stated for n > alphabet size")
    if ell < 1:
        raise DomainError("ell must be >= 1")
    total = 0
    for i in range(1, alphabet_size + 1):
        inner = sum(comb(i, m) * p2(m, n - (i - m)) for m in range(1, min(i, ell) + 1))
        total += comb(alphabet_size, i) * factorial(i) * inner
    return total
