"""Essential intervals of a Sharkovskii-type-1 map and their covering DAG.

For a map whose periodic points are all fixed, the complement of the fixed
set splits into essential intervals (both endpoints fixed).  Each one is an
*up* or *down* interval, its orbit is a half-line-like interval pinned at the
source, and "orbit of I contains J" is a DAG whose longest path is the
polynomial entropy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import List, Optional, Tuple

from .errors import BudgetExceeded, InternalInvariantViolation, NotType1
from .exactnum import RInterval, format_rational, hull
from .plmap import (
    DEFAULT_PIECE_BUDGET,
    Iterates,
    PLMap,
    evaluate,
    fixed_set,
    image,
    max_on,
    periodic_points,
    preimages_in,
    reflect,
)

UP = "UP"
DOWN = "DOWN"

DEFAULT_HULL_STEPS = 100_000
TYPE1_PROBES = (2, 3, 4, 6)


@dataclass(frozen=True)
class Type1Check:
    """Outcome of the type-1 test; ``verdict`` is None when the budget ran out."""

    verdict: Optional[bool]
    witness: Optional[Fraction] = None
    period: Optional[int] = None

    def __bool__(self):
        return bool(self.verdict)


def is_type1(f: PLMap, budget: int = DEFAULT_PIECE_BUDGET,
             iterates: Optional[Iterates] = None,
             probes: Tuple[int, ...] = TYPE1_PROBES) -> Type1Check:
    """Decide whether every periodic point of ``f`` is fixed.

    Absence of period 2 already settles it (any other period forces period 2);
    the remaining probes are a cheap consistency check.
    """
    its = iterates if iterates is not None else Iterates(f, budget)
    try:
        for p in probes:
            comps = periodic_points(f, p, budget, its)
            if comps:
                return Type1Check(False, comps[0].sample_point(), p)
    except BudgetExceeded:
        return Type1Check(None)
    return Type1Check(True)


@dataclass(frozen=True)
class EssentialInterval:
    interval: RInterval
    orientation: str
    source: Fraction

    @property
    def a(self) -> Fraction:
        return self.interval.lo

    @property
    def b(self) -> Fraction:
        return self.interval.hi

    @property
    def midpoint(self) -> Fraction:
        return self.interval.midpoint

    @property
    def far_endpoint(self) -> Fraction:
        return self.b if self.orientation == UP else self.a

    def __str__(self):
        return f"{self.orientation} {self.interval}"

    def to_json(self) -> dict:
        return {
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "orientation": self.orientation,
            "source": format_rational(self.source),
        }


@dataclass(frozen=True)
class OrbitClosure:
    """Orbit of an essential interval: (x, z) or (x, z] for UP, mirrored for DOWN."""

    base: EssentialInterval
    far_end: Fraction
    attained: bool

    def as_interval(self) -> RInterval:
        if self.base.orientation == UP:
            return RInterval(self.base.source, self.far_end, False, self.attained)
        return RInterval(self.far_end, self.base.source, self.attained, False)

    def covers(self, other: EssentialInterval) -> bool:
        # other is open, so attainment of far_end never matters
        if self.base.orientation == UP:
            return self.base.source <= other.a and other.b <= self.far_end
        return self.far_end <= other.a and other.b <= self.base.source

    def to_json(self) -> dict:
        return {
            "interval": self.base.to_json(),
            "far_end": format_rational(self.far_end),
            "attained": self.attained,
            "orbit": str(self.as_interval()),
        }


@dataclass
class CoverDAG:
    nodes: List[EssentialInterval]
    edges: List[Tuple[int, int]]
    closures: List[OrbitClosure] = field(default_factory=list)

    def successors(self, i: int) -> List[int]:
        return [j for (k, j) in self.edges if k == i]

    def to_json(self) -> dict:
        return {
            "nodes": [n.to_json() for n in self.nodes],
            "edges": [list(e) for e in self.edges],
        }


def _require_type1(f: PLMap, budget: int) -> None:
    check = is_type1(f, budget)
    if check.verdict is None:
        raise BudgetExceeded("type-1 check exceeded the piece budget")
    if not check.verdict:
        raise NotType1(
            f"point {format_rational(check.witness)} has exact period {check.period}"
        )


def split_complement(f: PLMap):
    """Essential intervals plus boundary components of [0,1] minus Fix(f).

    A boundary component touches 0 or 1 at a non-fixed endpoint and is not
    essential; it is returned for diagnostics only.
    """
    fix = fixed_set(f)
    essential: List[EssentialInterval] = []
    boundary: List[RInterval] = []
    if fix[0].lo > 0:
        boundary.append(RInterval(Fraction(0), fix[0].lo, True, False))
    for left, right in zip(fix, fix[1:]):
        a, b = left.hi, right.lo
        mid = (a + b) / 2
        if evaluate(f, mid) > mid:
            essential.append(EssentialInterval(RInterval.open(a, b), UP, a))
        else:
            essential.append(EssentialInterval(RInterval.open(a, b), DOWN, b))
    if fix[-1].hi < 1:
        boundary.append(RInterval(fix[-1].hi, Fraction(1), False, True))
    return fix, essential, boundary


def essential_intervals(f: PLMap, check: bool = True,
                        budget: int = DEFAULT_PIECE_BUDGET) -> List[EssentialInterval]:
    """All essential intervals, left to right."""
    if check:
        _require_type1(f, budget)
    return split_complement(f)[1]


def _mirror(I: EssentialInterval) -> EssentialInterval:
    lo, hi = 1 - I.b, 1 - I.a
    flipped = UP if I.orientation == DOWN else DOWN
    src = 1 - I.source
    return EssentialInterval(RInterval.open(lo, hi), flipped, src)


def _up_orbit_far_end(f: PLMap, x: Fraction, y: Fraction, fix: List[RInterval],
                      max_steps: int) -> Tuple[Fraction, bool]:
    H = RInterval.open(x, y)
    for _ in range(max_steps):
        grown = hull(H, image(f, H))
        grown = RInterval(x, grown.hi, False, grown.hi_closed)
        if grown == H:
            return H.hi, H.hi_closed
        H = grown
        r = H.hi
        if evaluate(f, r) > r:
            # r sits in a component (c, p) where f > id; p is the next fixed point
            p = next(comp.lo for comp in fix if comp.lo > r)
            if max_on(f, x, p) <= p:
                hit = preimages_in(f, p, RInterval.open(x, p))
                return p, bool(hit)
    raise BudgetExceeded(f"orbit hull did not settle within {max_steps} steps")


def orbit_closure(f: PLMap, I: EssentialInterval, check: bool = True,
                  max_steps: int = DEFAULT_HULL_STEPS,
                  budget: int = DEFAULT_PIECE_BUDGET) -> OrbitClosure:
    """Exact far endpoint of Orb(I) and whether the orbit attains it."""
    if check:
        _require_type1(f, budget)
    if I.orientation == UP:
        z, attained = _up_orbit_far_end(f, I.a, I.b, fixed_set(f), max_steps)
        return OrbitClosure(I, z, attained)
    g = reflect(f)
    m = _mirror(I)
    z, attained = _up_orbit_far_end(g, m.a, m.b, fixed_set(g), max_steps)
    return OrbitClosure(I, 1 - z, attained)


def cover_dag(f: PLMap, check: bool = True,
              budget: int = DEFAULT_PIECE_BUDGET) -> CoverDAG:
    """Edges (i, j), i != j, meaning Orb(I_i) contains I_j."""
    nodes = essential_intervals(f, check, budget)
    closures = [orbit_closure(f, I, check=False) for I in nodes]
    edges = [
        (i, j)
        for i, cl in enumerate(closures)
        for j, J in enumerate(nodes)
        if i != j and cl.covers(J)
    ]
    dag = CoverDAG(nodes, edges, closures)
    _topological_order(dag)
    return dag


def _topological_order(dag: CoverDAG) -> List[int]:
    sorter = TopologicalSorter({i: set() for i in range(len(dag.nodes))})
    for i, j in dag.edges:
        sorter.add(j, i)
    try:
        return list(sorter.static_order())
    except CycleError as exc:
        raise InternalInvariantViolation(
            f"covering relation has a cycle {exc.args[1]}; impossible for a type-1 map"
        ) from exc


@dataclass(frozen=True)
class MaxChain:
    length: int
    chain: Tuple[EssentialInterval, ...]
    indices: Tuple[int, ...]


def longest_chain(dag: CoverDAG) -> MaxChain:
    """Longest path counted in nodes; ties go to the leftmost chain."""
    n = len(dag.nodes)
    if n == 0:
        return MaxChain(0, (), ())
    order = _topological_order(dag)
    succ = {i: sorted(dag.successors(i)) for i in range(n)}
    best = [1] * n
    nxt: List[Optional[int]] = [None] * n
    for i in reversed(order):
        for j in succ[i]:
            if best[j] + 1 > best[i]:
                best[i] = best[j] + 1
                nxt[i] = j
    length = max(best)
    start = min(i for i in range(n) if best[i] == length)
    path = [start]
    while nxt[path[-1]] is not None:
        path.append(nxt[path[-1]])
    return MaxChain(length, tuple(dag.nodes[i] for i in path), tuple(path))


def max_chain(f: PLMap, check: bool = True,
              budget: int = DEFAULT_PIECE_BUDGET) -> MaxChain:
    return longest_chain(cover_dag(f, check, budget))


def chain_is_valid(f: PLMap, chain: List[EssentialInterval]) -> bool:
    """Re-verify a claimed chain: distinct essential intervals, each covering the next."""
    known = set(essential_intervals(f, check=False))
    if len(set(chain)) != len(chain) or any(I not in known for I in chain):
        return False
    for I, J in zip(chain, chain[1:]):
        if not orbit_closure(f, I, check=False).covers(J):
            return False
    return True


def structure_report(f: PLMap, budget: int = DEFAULT_PIECE_BUDGET) -> dict:
    """JSON-ready summary of the fixed-point structure of a type-1 map."""
    _require_type1(f, budget)
    fix, essential, boundary = split_complement(f)
    dag = cover_dag(f, check=False)
    best = longest_chain(dag)
    return {
        "fixed_components": [str(c) for c in fix],
        "essential_intervals": [I.to_json() for I in essential],
        "boundary_components": [str(c) for c in boundary],
        "orbits": [cl.to_json() for cl in dag.closures],
        "edges": [list(e) for e in dag.edges],
        "max_chain": {
            "length": best.length,
            "chain": [I.to_json() for I in best.chain],
        },
    }
