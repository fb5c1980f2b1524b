"""Floating-point estimate of polynomial entropy from greedy separated sets.

This path shares no code with the exact pipeline beyond float lowering of a
PLMap; it is meant to catch errors there, not to certify anything.

Candidates come from a seeded stratified grid refined by bisection wherever
the two ends of a cell drift more than eps/2 apart within the horizon; that
reaches the exponentially thin transient regions a plain grid misses.  The
greedy pass scans candidates in increasing order.  Over a table of (eps, n)
a cell whose greedy set is smaller than a neighbour's at coarser eps or
shorter horizon extends that neighbour's set instead, so the table is
monotone by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, InsufficientData
from .plmap import PLMap, fixed_set

FloatMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class OracleConfig:
    epsilons: Tuple[float, ...] = (0.1, 0.05, 0.02)
    horizons: Tuple[int, ...] = (12, 16, 24, 32, 48)
    grid_size: int = 512
    seed: int = 0
    max_candidates: int = 400_000

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilons)
        hor = tuple(int(n) for n in self.horizons)
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "horizons", hor)
        if not eps or any(e <= 0 for e in eps) or any(a <= b for a, b in zip(eps, eps[1:])):
            raise DomainError("epsilons must be positive and strictly decreasing")
        if not hor or hor[0] < 2 or any(a >= b for a, b in zip(hor, hor[1:])):
            raise DomainError("horizons must be >= 2 and strictly increasing")
        if self.grid_size < 2:
            raise DomainError("grid_size must be >= 2")


def lower(f: Union[PLMap, FloatMap]) -> FloatMap:
    """A vectorised float version of f."""
    if isinstance(f, PLMap):
        return f.float_callable()
    return f


def _seed_points(f) -> List[float]:
    # midpoints between fixed components: where the slow transients live
    if not isinstance(f, PLMap):
        return []
    comps = fixed_set(f)
    return [float((a.hi + b.lo) / 2) for a, b in zip(comps, comps[1:])]


def trajectories(F: FloatMap, x: np.ndarray, n: int) -> np.ndarray:
    """Rows are x, F(x), ..., F^{n-1}(x)."""
    out = np.empty((len(x), n))
    cur = np.asarray(x, dtype=float)
    for t in range(n):
        out[:, t] = cur
        cur = F(cur)
    return out


def _base_grid(cfg: OracleConfig) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed)
    N = cfg.grid_size
    jitter = (np.arange(N) + rng.random(N)) / N
    return np.concatenate(([0.0, 1.0], jitter))


def candidates(f, n: int, eps: float, cfg: OracleConfig) -> np.ndarray:
    """Sorted candidate pool for horizon n and scale eps."""
    F = lower(f)
    pts = np.unique(np.concatenate((_base_grid(cfg), _seed_points(f))))
    pts = pts[(pts >= 0) & (pts <= 1)]
    found = [pts]
    total = len(pts)
    a, b = pts[:-1], pts[1:]
    while len(a) and total < cfg.max_candidates:
        ta = trajectories(F, a, n)
        tb = trajectories(F, b, n)
        drift = np.abs(ta - tb).max(axis=1)
        wide = (b - a) > 4 * np.spacing(b)
        split = (drift > eps / 2) & wide
        if not split.any():
            break
        a, b = a[split], b[split]
        mid = a + (b - a) / 2
        room = cfg.max_candidates - total
        if len(mid) > room:
            a, b, mid = a[:room], b[:room], mid[:room]
        found.append(mid)
        total += len(mid)
        a, b = np.concatenate((a, mid)), np.concatenate((mid, b))
    return np.unique(np.concatenate(found))


def greedy_separated(F: FloatMap, pool: np.ndarray, n: int, eps: float,
                     seed_set: Optional[np.ndarray] = None) -> np.ndarray:
    """Greedy maximal (n, eps)-separated subset of seed_set plus pool.

    Points of seed_set (itself (n, eps)-separated) are admitted first, then
    pool is scanned in order; a point is admitted iff it is separated from
    everything admitted before it.  Admitting a point blocks its whole
    closed eps-ball in the sup metric on trajectories, which a KD-tree
    returns in one query.
    """
    seed_set = np.empty(0) if seed_set is None else np.asarray(seed_set, dtype=float)
    pool = np.setdiff1d(pool, seed_set)
    everything = np.concatenate((seed_set, pool))
    if len(everything) == 0:
        return everything
    tree = cKDTree(trajectories(F, everything, n))
    blocked = np.zeros(len(everything), dtype=bool)
    admitted: List[int] = []
    for i in range(len(everything)):
        if blocked[i] and i >= len(seed_set):
            continue
        admitted.append(i)
        blocked[tree.query_ball_point(tree.data[i], eps, p=np.inf)] = True
    return np.sort(everything[admitted])


def sep_count(f, n: int, eps: float, cfg: Optional[OracleConfig] = None) -> int:
    """Greedy lower bound on the size of an (n, eps)-separated set."""
    cfg = cfg or OracleConfig()
    return len(greedy_separated(lower(f), candidates(f, n, eps, cfg), n, eps))


def sep_table(f, cfg: Optional[OracleConfig] = None) -> Dict[Tuple[float, int], int]:
    """Counts on the whole (eps, n) grid, monotone in both directions."""
    cfg = cfg or OracleConfig()
    F = lower(f)
    sets: Dict[Tuple[float, int], np.ndarray] = {}
    for ei, eps in enumerate(cfg.epsilons):
        for ni, n in enumerate(cfg.horizons):
            prior = []
            if ei:
                prior.append(sets[(cfg.epsilons[ei - 1], n)])
            if ni:
                prior.append(sets[(eps, cfg.horizons[ni - 1])])
            pool = candidates(f, n, eps, cfg)
            best = greedy_separated(F, pool, n, eps)
            seed = max(prior, key=len) if prior else None
            if seed is not None and len(seed) > len(best):
                # a set separated at a coarser eps or shorter horizon stays
                # separated here, so extending it keeps the table monotone
                best = greedy_separated(F, pool, n, eps, seed)
            sets[(eps, n)] = best
    return {k: len(v) for k, v in sets.items()}


@dataclass
class SlopeEstimate:
    per_epsilon: List[Tuple[float, float, float]]
    headline: float
    table: Dict[Tuple[float, int], int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "headline": self.headline,
            "per_epsilon": [
                {"epsilon": e, "slope": s, "residual": r} for e, s, r in self.per_epsilon
            ],
        }

    def rows(self):
        """(epsilon, n, count) rows for CSV output."""
        return [(e, n, c) for (e, n), c in sorted(self.table.items(), key=lambda kv: (-kv[0][0], kv[0][1]))]


def fit_slope(ns: Sequence[int], counts: Sequence[int]) -> Tuple[float, float]:
    """Least-squares slope of log count against log n, with RMS residual."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    slope, icpt = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + icpt)) ** 2)))
    return float(slope), resid


def slope_estimate(f, cfg: Optional[OracleConfig] = None) -> SlopeEstimate:
    cfg = cfg or OracleConfig()
    if len(cfg.horizons) < 4:
        raise InsufficientData("need at least 4 horizons for a slope fit")
    table = sep_table(f, cfg)
    per = []
    for eps in cfg.epsilons:
        counts = [table[(eps, n)] for n in cfg.horizons]
        s, r = fit_slope(cfg.horizons, counts)
        per.append((eps, s, r))
    headline = per[-1][1]
    if math.isnan(headline):
        raise InsufficientData("slope fit failed")
    return SlopeEstimate(per, headline, table)
