"""Word complexity of symbol sequences and the counting bounds built from it.

The polynomial entropy of a subshift is the log-log growth rate of its
complexity function omega(n), the number of distinct length-n words.  Only a
finite prefix is ever available, so every estimate here is clamped to a
reliability horizon: the largest n whose factor count is small compared
with the prefix length.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import accumulate
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import InsufficientData, InternalInvariantViolation, MapFormatError, PrefixTooShort

log = logging.getLogger(__name__)

RELIABILITY_FACTOR = 50
SUPERPOLY_SLOPE_JUMP = 0.5
SUPERPOLY_RESIDUAL = 0.05
BRACKET_TOLERANCE = 0.3


@dataclass(frozen=True)
class SymbolSequence:
    symbols: bytes
    provenance: str = "FILE"

    def __post_init__(self):
        if not self.symbols:
            raise InsufficientData("empty symbol sequence")

    def __len__(self):
        return len(self.symbols)

    @property
    def alphabet_size(self) -> int:
        return max(self.symbols) + 1

    @classmethod
    def from_symbols(cls, symbols: Sequence[int], provenance: str = "FILE") -> "SymbolSequence":
        return cls(bytes(symbols), provenance)

    @classmethod
    def from_text(cls, text: str, provenance: str = "FILE") -> "SymbolSequence":
        text = "".join(text.split())
        if not text or not text.isdigit():
            raise MapFormatError("a sequence file holds one line of decimal digit symbols")
        return cls(bytes(int(c) for c in text), provenance)

    def to_text(self) -> str:
        return "".join(str(s) for s in self.symbols)


def load_sequence(path) -> SymbolSequence:
    return SymbolSequence.from_text(Path(path).read_text(), provenance=f"FILE({path})")


def periodic(pattern: str, length: int) -> SymbolSequence:
    reps = -(-length // len(pattern))
    return SymbolSequence.from_text((pattern * reps)[:length], provenance=f"PERIODIC({pattern})")


def constant(length: int, symbol: int = 0) -> SymbolSequence:
    return SymbolSequence(bytes([symbol]) * length, provenance=f"PERIODIC({symbol})")


def fibonacci_word(length: int) -> SymbolSequence:
    """Prefix of the fixed point of the substitution 0 -> 01, 1 -> 0."""
    word = b"\x00"
    while len(word) < length:
        word = b"".join(b"\x00\x01" if c == 0 else b"\x00" for c in word)
    return SymbolSequence(word[:length], provenance="STURMIAN(fibonacci)")


def sturmian(length: int, directive: Sequence[int] = (1,)) -> SymbolSequence:
    """Characteristic Sturmian word from standard words.

    s_{-1} = 1, s_0 = 0 and s_k = s_{k-1}^{d_k} s_{k-2}, with d_k cycling
    through ``directive`` (all entries >= 1).  directive (1,) is the
    Fibonacci word.
    """
    if not directive or any(d < 1 for d in directive):
        raise ValueError("directive entries must be >= 1")
    prev, cur = b"\x01", b"\x00"
    k = 0
    while len(cur) < length:
        d = directive[k % len(directive)]
        prev, cur = cur, cur * d + prev
        k += 1
    return SymbolSequence(cur[:length], provenance=f"STURMIAN({list(directive)})")


def random_sequence(length: int, alphabet: int = 2, seed: int = 0) -> SymbolSequence:
    rng = np.random.default_rng(seed)
    return SymbolSequence(bytes(rng.integers(0, alphabet, length).tolist()), provenance="RANDOM")


@dataclass(frozen=True)
class ComplexityProfile:
    omega: Tuple[int, ...]
    prefix_length: int
    alphabet_size: int

    @property
    def n_max(self) -> int:
        return len(self.omega) - 1

    @property
    def reliable_horizon(self) -> int:
        """Largest n whose factor count is at most prefix_length / 50."""
        good = [n for n, w in enumerate(self.omega) if self.prefix_length >= RELIABILITY_FACTOR * w]
        return good[-1] if good else 0

    def to_json(self) -> dict:
        return {
            "omega": list(self.omega),
            "prefix_length": self.prefix_length,
            "reliable_horizon": self.reliable_horizon,
        }


def complexity(seq: SymbolSequence, n_max: int) -> ComplexityProfile:
    """omega(0..n_max) counted on the finite prefix with a sliding window."""
    L = len(seq)
    if L < 2 * n_max:
        raise PrefixTooShort(f"prefix of length {L} cannot support n_max={n_max}")
    if L < RELIABILITY_FACTOR * n_max:
        log.warning("prefix length %d is short for n_max=%d; counts may be truncated", L, n_max)
    s = seq.symbols
    omega = [1]
    for n in range(1, n_max + 1):
        omega.append(len({s[i:i + n] for i in range(L - n + 1)}))
    return ComplexityProfile(tuple(omega), L, seq.alphabet_size)


@dataclass(frozen=True)
class SubshiftEstimate:
    estimate: float
    window: Tuple[int, int]
    residual: float
    reliable_horizon: int
    superpolynomial: bool

    def to_json(self) -> dict:
        return {
            "estimate": self.estimate,
            "window": list(self.window),
            "residual": self.residual,
            "reliable_horizon": self.reliable_horizon,
            "superpolynomial": self.superpolynomial,
            "note": "computed on a finite prefix; counts beyond the reliable horizon are ignored",
        }


def _loglog_fit(ns, values) -> Tuple[float, float]:
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    slope, icpt = np.polyfit(x, y, 1)
    return float(slope), float(np.sqrt(np.mean((y - slope * x - icpt) ** 2)))


def _top_window(top: int) -> Tuple[int, int]:
    hi = 1 << int(math.log2(top))
    return hi // 2, hi


def subshift_hpol_estimate(profile: ComplexityProfile) -> SubshiftEstimate:
    """Log-log slope of omega over the top dyadic window [N/2, N]."""
    top = min(profile.n_max, profile.reliable_horizon)
    if top < 8:
        raise InsufficientData(f"only {top} reliable lengths; need at least 8")
    lo, hi = _top_window(top)
    ns = list(range(lo, hi + 1))
    slope, resid = _loglog_fit(ns, [profile.omega[n] for n in ns])
    prev_ns = list(range(lo // 2, lo + 1))
    prev_slope, _ = _loglog_fit(prev_ns, [profile.omega[n] for n in prev_ns])
    # polynomial growth has a settling slope; exponential growth keeps steepening
    superpoly = slope - prev_slope > SUPERPOLY_SLOPE_JUMP or resid > SUPERPOLY_RESIDUAL
    return SubshiftEstimate(slope, (lo, hi), resid, profile.reliable_horizon, superpoly)


def dendrite_sep_lower(profile: ComplexityProfile, n: int) -> int:
    """omega(0) + ... + omega(2n): size of the branch-point separated set for horizon 2n."""
    if n < 0 or 2 * n > profile.n_max:
        raise InsufficientData(f"need omega up to {2 * n}, profile stops at {profile.n_max}")
    return list(accumulate(profile.omega))[2 * n]


@dataclass(frozen=True)
class DendriteBracket:
    lower_slope: float
    upper_value: float
    window: Tuple[int, int]

    def to_json(self) -> dict:
        return {"lower_slope": self.lower_slope, "upper_value": self.upper_value,
                "window": list(self.window)}


def dendrite_hpol_bracket(profile: ComplexityProfile) -> DendriteBracket:
    """(growth slope of the separated-set count, subshift estimate + 1)."""
    if profile.n_max < 16:
        raise InsufficientData("need omega up to at least 16")
    top = min(profile.n_max, profile.reliable_horizon) // 2
    if top < 4:
        raise InsufficientData("reliable horizon too short for the bracket")
    lo, hi = _top_window(top)
    ns = list(range(lo, hi + 1))
    lower, _ = _loglog_fit([2 * n for n in ns], [dendrite_sep_lower(profile, n) for n in ns])
    upper = subshift_hpol_estimate(profile).estimate + 1
    if lower > upper + BRACKET_TOLERANCE:
        raise InternalInvariantViolation(
            f"separated-set growth {lower:.3f} exceeds the product upper bound {upper:.3f}"
        )
    return DendriteBracket(lower, upper, (lo, hi))
