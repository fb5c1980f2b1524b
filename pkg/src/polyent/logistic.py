"""Polynomial entropy along the logistic family x -> lam * x * (1 - x).

Below the accumulation point of the period-doubling cascade the entropy is
read off from the attracting cycle, which is found by following the critical
orbit; at and beyond it the entropy is infinite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .classify import INFINITE, UNKNOWN, EntropyReport, polynomial_entropy
from .errors import DomainError
from .plmap import PLMap, lap_numbers

LAMBDA_INF = 3.5699456

FIXED_AT_ZERO = "FIXED_AT_ZERO"
CYCLE = "CYCLE"
UNDETECTED = "UNDETECTED"

LAP_TOLERANCE = 0.3


@dataclass(frozen=True)
class LogisticConfig:
    tol: float = 1e-9
    burn_in: int = 1_000_000
    max_period_exp: int = 10
    window: int = 64
    # cycles whose multiplier is within this of 1 sit too close to a
    # bifurcation for the numerics to be trusted
    attraction_margin: float = 1e-3
    lambda_inf: float = LAMBDA_INF


@dataclass(frozen=True)
class Attractor:
    kind: str
    period: Optional[int] = None
    orbit: Tuple[float, ...] = ()

    def __str__(self):
        if self.kind == CYCLE:
            return f"CYCLE({self.period})"
        return self.kind


@dataclass(frozen=True)
class LogisticVerdict:
    lam: float
    attractor: Attractor
    h_pol: Union[int, str]

    def to_json(self) -> dict:
        return {
            "lambda": self.lam,
            "attractor": self.attractor.kind,
            "period": self.attractor.period,
            "orbit": list(self.attractor.orbit),
            "h_pol": self.h_pol,
        }


def logistic_map(lam: float):
    """Vectorised f_lam, usable as a float map by the separated-set oracle."""
    return lambda x: lam * x * (1.0 - x)


def _check_lambda(lams: np.ndarray) -> None:
    if np.any((lams < 0) | (lams > 4)):
        raise DomainError("lambda must lie in [0, 4]")


def _burn_one(lam: float, burn_in: int) -> float:
    x = 0.5
    for _ in range(burn_in):
        x = lam * x * (1.0 - x)
    return x


def _burn(lams: np.ndarray, burn_in: int) -> np.ndarray:
    # same float operations in the same order either way; numpy only pays
    # off once there are enough parameters to amortise its call overhead
    if lams.size <= 16:
        return np.array([_burn_one(float(l), burn_in) for l in lams])
    x = np.full(lams.shape, 0.5)
    tmp = np.empty_like(x)
    for _ in range(burn_in):
        np.subtract(1.0, x, out=tmp)
        np.multiply(lams, x, out=x)
        np.multiply(x, tmp, out=x)
    return x


def _classify_orbit(lam: float, x: float, cfg: LogisticConfig) -> Attractor:
    if lam <= 1 and abs(x) < cfg.tol ** 0.5:
        # at lam = 1 the approach to 0 is only ~1/k; the fixed point is still 0
        return Attractor(FIXED_AT_ZERO, 1, (0.0,))
    orbit = [x]
    for _ in range(2 ** cfg.max_period_exp + cfg.window):
        orbit.append(lam * orbit[-1] * (1.0 - orbit[-1]))
    for e in range(cfg.max_period_exp + 1):
        p = 2 ** e
        if all(abs(orbit[i + p] - orbit[i]) < cfg.tol for i in range(cfg.window)):
            if p == 1 and abs(orbit[0]) < cfg.tol:
                return Attractor(FIXED_AT_ZERO, 1, (0.0,))
            mult = abs(float(np.prod([lam * (1.0 - 2.0 * y) for y in orbit[:p]])))
            if mult >= 1.0 - cfg.attraction_margin:
                return Attractor(UNDETECTED)
            return Attractor(CYCLE, p, tuple(sorted(orbit[:p])))
    return Attractor(UNDETECTED)


def detect_attracting_cycle(lam: float, cfg: Optional[LogisticConfig] = None) -> Attractor:
    """Follow the critical point 1/2 and look for the smallest period 2^n."""
    cfg = cfg or LogisticConfig()
    lams = np.array([float(lam)])
    _check_lambda(lams)
    return _classify_orbit(float(lam), float(_burn(lams, cfg.burn_in)[0]), cfg)


def _verdict(lam: float, att: Attractor, cfg: LogisticConfig) -> LogisticVerdict:
    if lam >= cfg.lambda_inf:
        return LogisticVerdict(lam, att, INFINITE)
    if att.kind == FIXED_AT_ZERO:
        return LogisticVerdict(lam, att, 0)
    if att.kind == CYCLE:
        n = att.period.bit_length() - 1
        # an attracting fixed point away from 0 still has 0 as a second fixed point
        return LogisticVerdict(lam, att, n + 1)
    return LogisticVerdict(lam, att, UNKNOWN)


def logistic_hpol(lam: float, cfg: Optional[LogisticConfig] = None) -> LogisticVerdict:
    cfg = cfg or LogisticConfig()
    return _verdict(float(lam), detect_attracting_cycle(lam, cfg), cfg)


def sweep(lams: Sequence[float], cfg: Optional[LogisticConfig] = None) -> List[LogisticVerdict]:
    """Verdicts for many parameters; the burn-in runs vectorised over lambda."""
    cfg = cfg or LogisticConfig()
    arr = np.asarray(lams, dtype=float)
    _check_lambda(arr)
    xs = _burn(arr, cfg.burn_in)
    return [_verdict(float(l), _classify_orbit(float(l), float(x), cfg), cfg) for l, x in zip(arr, xs)]


def parse_sweep(spec: str) -> np.ndarray:
    """"start:stop:step" -> inclusive grid of lambdas."""
    try:
        start, stop, step = (float(t) for t in spec.split(":"))
    except ValueError as exc:
        raise DomainError(f"sweep must look like start:stop:step, got {spec!r}") from exc
    if step <= 0 or stop < start:
        raise DomainError("sweep needs step > 0 and stop >= start")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


@dataclass
class LapBound:
    slope: float
    report: EntropyReport
    ok: bool
    laps: Tuple[int, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {"slope": self.slope, "h_pol": self.report.h_pol, "ok": self.ok,
                "laps": list(self.laps)}


def lap_bound_check(f: PLMap, n_max: int = 10) -> LapBound:
    """Check h_pol(f) <= 1 + growth exponent of the lap numbers c_n."""
    report = polynomial_entropy(f)
    if not isinstance(report.h_pol, int):
        raise DomainError(f"h_pol is {report.h_pol}; the lap bound needs a decided value")
    laps = lap_numbers(f, n_max).laps
    ns = np.arange(1, len(laps) + 1, dtype=float)
    slope = float(np.polyfit(np.log(ns), np.log(np.asarray(laps, dtype=float)), 1)[0])
    ok = report.h_pol <= 1 + slope + LAP_TOLERANCE
    return LapBound(slope, report, ok, tuple(laps))
