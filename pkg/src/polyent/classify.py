"""Budgeted Sharkovskii-type classification and exact polynomial entropy.

A map of type 2^n has the same polynomial entropy as its 2^n-th iterate,
which is type 1, so the problem reduces to the longest covering chain of
essential intervals of that iterate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Union

from .errors import BudgetExceeded, InternalInvariantViolation, NotMonotone
from .exactnum import format_rational, merge_touching
from .fixstruct import MaxChain, is_type1, max_chain
from .plmap import (
    DEFAULT_PIECE_BUDGET,
    Iterates,
    PLMap,
    fixed_set,
    is_monotone,
    periodic_points,
)

POWER_OF_TWO = "POWER_OF_TWO"
AT_LEAST_2_INFINITY = "AT_LEAST_2_INFINITY"
UNKNOWN = "UNKNOWN"
INFINITE = "INFINITE"

NON_POWER_PROBES = (3, 5, 6, 12)
DEFAULT_N_BUDGET = 4


@dataclass(frozen=True)
class SharkovskiiType:
    kind: str
    n: Optional[int] = None
    period_found: Optional[int] = None
    witness: Optional[object] = None
    budget_used: Optional[int] = None

    def __str__(self):
        if self.kind == POWER_OF_TWO:
            return f"2^{self.n}"
        if self.kind == AT_LEAST_2_INFINITY:
            return ">= 2^inf"
        return "UNKNOWN"

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.n is not None:
            out["n"] = self.n
        if self.period_found is not None:
            out["period_found"] = self.period_found
        if self.witness is not None:
            out["witness"] = format_rational(self.witness)
        if self.budget_used is not None:
            out["budget_used"] = self.budget_used
        return out


def sharkovskii_type(f: PLMap, n_budget: int = DEFAULT_N_BUDGET,
                     budget: int = DEFAULT_PIECE_BUDGET,
                     iterates: Optional[Iterates] = None) -> SharkovskiiType:
    """Classify f by exact period probes.

    Periods 2^0 .. 2^(n_budget+1) are probed so that POWER_OF_TWO(n) can be
    certified for every n <= n_budget; any period from NON_POWER_PROBES
    places f at or beyond 2^infinity.  If every probed power is present and
    no non-power period turns up the answer is UNKNOWN: f may still be of
    type exactly 2^m for some m > n_budget.
    """
    if n_budget < 0:
        raise ValueError("n_budget must be >= 0")
    its = iterates if iterates is not None else Iterates(f, budget)
    for p in NON_POWER_PROBES:
        try:
            comps = periodic_points(f, p, budget, its)
        except BudgetExceeded:
            continue
        if comps:
            return SharkovskiiType(AT_LEAST_2_INFINITY, period_found=p,
                                   witness=comps[0].sample_point())
    top = None
    for n in range(n_budget + 2):
        try:
            present = bool(periodic_points(f, 2 ** n, budget, its))
        except BudgetExceeded:
            return SharkovskiiType(UNKNOWN, budget_used=n)
        if present:
            top = n
            continue
        # by Sharkovskii's ordering, a missing 2^n rules out every larger power
        return SharkovskiiType(POWER_OF_TWO, n=top)
    return SharkovskiiType(UNKNOWN, budget_used=n_budget + 1)


@dataclass
class EntropyReport:
    h_pol: Union[int, str]
    type: SharkovskiiType
    chain: Optional[MaxChain] = None
    iterate: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @property
    def decided(self) -> bool:
        return self.h_pol != UNKNOWN

    def to_json(self) -> dict:
        out = {"h_pol": self.h_pol, "type": self.type.to_json()}
        if self.chain is not None:
            out["evidence"] = {
                "iterate": self.iterate,
                "chain_length": self.chain.length,
                "chain": [I.to_json() for I in self.chain.chain],
            }
        elif self.type.kind == AT_LEAST_2_INFINITY:
            out["evidence"] = {
                "period": self.type.period_found,
                "point": format_rational(self.type.witness),
            }
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def polynomial_entropy(f: PLMap, n_budget: int = DEFAULT_N_BUDGET,
                       budget: int = DEFAULT_PIECE_BUDGET) -> EntropyReport:
    its = Iterates(f, budget)
    st = sharkovskii_type(f, n_budget, budget, its)
    if st.kind == AT_LEAST_2_INFINITY:
        return EntropyReport(INFINITE, st)
    if st.kind != POWER_OF_TWO:
        return EntropyReport(UNKNOWN, st, notes=["type not settled within budget"])
    k = 2 ** st.n
    try:
        g = its.power(k)
        check = is_type1(g, budget)
    except BudgetExceeded:
        return EntropyReport(UNKNOWN, st, notes=[f"f^{k} exceeded the piece budget"])
    if check.verdict is None:
        return EntropyReport(UNKNOWN, st, notes=[f"type-1 check on f^{k} exceeded budget"])
    if not check.verdict:
        raise InternalInvariantViolation(
            f"f^{k} has period {check.period} although f was certified type 2^{st.n}"
        )
    chain = max_chain(g, check=False, budget=budget)
    return EntropyReport(chain.length, st, chain=chain, iterate=k)


def periodic_set(f: PLMap, budget: int = DEFAULT_PIECE_BUDGET):
    """Per(f) as Fix(f^2), valid when f has type 1 or 2."""
    return merge_touching(fixed_set(Iterates(f, budget).power(2)))


def zero_entropy_check(f: PLMap, n_budget: int = DEFAULT_N_BUDGET,
                       budget: int = DEFAULT_PIECE_BUDGET) -> Optional[bool]:
    """True iff Per(f) is connected; None when it cannot be decided.

    Zero entropy forces type 1 or 2, so a period-4 point already answers
    False; otherwise Per(f) = Fix(f^2) exactly.
    """
    try:
        its = Iterates(f, budget)
        if periodic_points(f, 4, budget, its):
            return False
        comps = merge_touching(fixed_set(its.power(2)))
    except BudgetExceeded:
        return None
    return len(comps) == 1


def monotone_entropy(f: PLMap) -> int:
    """0 or 1 for a weakly monotone map, decided by connectivity of Per(f)."""
    if not is_monotone(f):
        raise NotMonotone("map is not weakly monotone")
    return 0 if len(periodic_set(f)) == 1 else 1
