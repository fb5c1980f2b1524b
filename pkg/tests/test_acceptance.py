"""Acceptance suite: one test per criterion, summarised at the end of the run."""

from __future__ import annotations

import itertools
import time
from math import comb

import pytest

from oracles import (
    allowable_count_backtrack,
    allowable_count_canonical,
    nondecreasing_words_enum,
    p2_enum,
)
from polyent.classify import (
    AT_LEAST_2_INFINITY,
    INFINITE,
    POWER_OF_TWO,
    polynomial_entropy,
    sharkovskii_type,
    zero_entropy_check,
)
from polyent.families import doubled, f0, gn, identity, plateau, tent
from polyent.fixstruct import chain_is_valid
from polyent.horseshoe import (
    HorseshoeCertificate,
    allowable_word_bound,
    en_count,
    horseshoe_from_chain,
    is_separated,
    ndw_count,
    p2,
    separated_witness_from_horseshoe,
    verify_horseshoe,
)
from polyent.logistic import lap_bound_check, parse_sweep, sweep
from polyent.plmap import iterate
from polyent.seporacle import OracleConfig, slope_estimate
from polyent.symbolic import (
    complexity,
    dendrite_hpol_bracket,
    sturmian,
    subshift_hpol_estimate,
)

# bifurcation parameters of the cascade, where numerics may honestly stall
BIFURCATIONS = (3.0, 3.449489742783178, 3.5440903596, 3.5644072661)


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@pytest.mark.acceptance(1, "chain length equals entropy on g_0..g_5")
def test_chain_equals_entropy_on_g_family():
    with Clock() as clock:
        for n in range(6):
            rep = polynomial_entropy(gn(n))
            assert rep.h_pol == n
            assert rep.chain.length == n
            assert chain_is_valid(iterate(gn(n), rep.iterate), list(rep.chain.chain))
    assert clock.elapsed < 5


@pytest.mark.acceptance(2, "doubling adds one to entropy and doubles the type")
def test_doubling_law():
    bases = {"f0": f0(), "g0": gn(0), "g1": gn(1), "g2": gn(2), "plateau": plateau()}
    with Clock() as clock:
        for name, f in bases.items():
            base = polynomial_entropy(f)
            assert base.type.kind == POWER_OF_TWO
            for k in (1, 2):
                rep = polynomial_entropy(doubled(f, k))
                assert rep.h_pol == base.h_pol + k, (name, k)
                assert rep.type.kind == POWER_OF_TWO
                assert 2 ** rep.type.n == 2 ** k * 2 ** base.type.n, (name, k)
    assert clock.elapsed < 60


@pytest.mark.acceptance(3, "type 2^n floor for doubled reflections")
def test_type_floor():
    for n in (1, 2, 3):
        rep = polynomial_entropy(doubled(f0(), n - 1))
        assert rep.type.kind == POWER_OF_TWO
        assert rep.type.n == n
        assert rep.h_pol == n - 1


@pytest.mark.acceptance(4, "horseshoe round trip on the 2-chain of g_2")
def test_horseshoe_round_trip():
    f = gn(2)
    with Clock() as clock:
        chain = polynomial_entropy(f).chain
        assert chain.length == 2
        cert = horseshoe_from_chain(f, chain.chain)
        assert verify_horseshoe(f, cert)
        for r in (1, 2):
            for idx in itertools.combinations(range(cert.order), r):
                ivs = tuple(cert.intervals[i] for i in idx)
                w = cert.witness if idx[-1] == cert.order - 1 else ivs[-1].hi
                assert verify_horseshoe(f, HorseshoeCertificate(ivs, cert.iterate, w)), idx
        assert verify_horseshoe(f, HorseshoeCertificate(cert.intervals, 2 * cert.iterate, cert.witness))
    assert clock.elapsed < 5


@pytest.mark.acceptance(5, "separated-set sizes and combinatorial counters")
def test_separated_sets_and_counters():
    for ell in (1, 2):
        f = gn(ell)
        cert = horseshoe_from_chain(f, polynomial_entropy(f).chain.chain)
        F = iterate(f, cert.iterate)
        for n in range(1, 11):
            w = separated_witness_from_horseshoe(f, cert, n)
            assert len(w.points) == comb(n + ell - 1, ell)
            assert len(set(w.points)) == len(w.points)
            assert is_separated(F, w.points, n, w.epsilon)
    for k in range(11):
        for ell in range(1, 11):
            assert ndw_count(k, ell) == nondecreasing_words_enum(k, ell)
    for n in range(1, 11):
        for ell in range(1, 11):
            assert en_count(n, ell) == sum(nondecreasing_words_enum(k, ell) for k in range(n))
    for m in range(11):
        for s in range(11):
            assert p2(m, s) == p2_enum(m, s)
    for alpha in range(1, 11):
        for n in range(alpha + 1, 11):
            for ell in range(1, alpha + 1):
                bound = allowable_word_bound(n, alpha, ell)
                assert bound == allowable_count_canonical(n, alpha, ell), (n, alpha, ell)
                if alpha <= 5:
                    assert bound == allowable_count_backtrack(n, alpha, ell), (n, alpha, ell)


@pytest.mark.acceptance(6, "zero-entropy criterion agrees with entropy")
def test_zero_entropy_criterion():
    for f in (identity(), f0(), gn(1), gn(2), doubled(f0(), 1)):
        verdict = zero_entropy_check(f)
        assert verdict is not None
        assert verdict == (polynomial_entropy(f).h_pol == 0)


@pytest.mark.acceptance(7, "full tent map is infinite through the period-3 probe")
def test_tent_infinite():
    st = sharkovskii_type(tent())
    assert st.kind == AT_LEAST_2_INFINITY
    assert st.period_found == 3
    assert polynomial_entropy(tent()).h_pol == INFINITE


@pytest.mark.acceptance(8, "separated-set oracle agrees with exact entropy")
def test_oracle_cross_validation():
    cfg = OracleConfig()
    with Clock() as clock:
        estimates = {}
        for name, f, h in (("identity", identity(), 0), ("g1", gn(1), 1), ("g2", gn(2), 2)):
            est = slope_estimate(f, cfg)
            estimates[name] = est
            assert abs(est.headline - h) <= 0.5, (name, est.headline)
            for eps in cfg.epsilons:
                row = [est.table[(eps, n)] for n in cfg.horizons]
                assert row == sorted(row), (name, eps)
            for n in cfg.horizons:
                col = [est.table[(eps, n)] for eps in cfg.epsilons]
                assert col == sorted(col), (name, n)
        again = slope_estimate(gn(1), cfg)
        assert again.table == estimates["g1"].table
        assert again.headline == estimates["g1"].headline
    assert clock.elapsed < 60


@pytest.mark.acceptance(9, "subshift complexity and dendrite bracket on a Sturmian word")
def test_subshift_formulas():
    with Clock() as clock:
        prof = complexity(sturmian(1 << 14), 64)
        assert prof.omega == tuple(n + 1 for n in range(65))
        est = subshift_hpol_estimate(prof)
        assert abs(est.estimate - 1) <= 0.2
        bracket = dendrite_hpol_bracket(prof)
        assert 1.7 <= bracket.lower_slope <= 2.3
        assert abs(bracket.upper_value - 2) <= 0.2
    assert clock.elapsed < 10


@pytest.mark.acceptance(10, "logistic verdict table and monotone sweep")
def test_logistic_table():
    anchors = {0.8: 0, 2.5: 1, 3.2: 2, 3.449: 2, 3.544: 3, 3.7: INFINITE}
    with Clock() as clock:
        got = {v.lam: v.h_pol for v in sweep(list(anchors))}
        assert got == anchors
        verdicts = sweep(parse_sweep("0:3.5699:0.005"))
        decided = [v.h_pol for v in verdicts if isinstance(v.h_pol, int)]
        assert decided == sorted(decided)
        for v in verdicts:
            if not isinstance(v.h_pol, int):
                assert min(abs(v.lam - b) for b in BIFURCATIONS) < 0.01, v.lam
    assert clock.elapsed < 30


@pytest.mark.acceptance(11, "lap-number upper bound holds, plateau needs the +1")
def test_lap_bound():
    for f in (identity(), plateau(), f0(), gn(1), gn(2), doubled(f0(), 1)):
        assert lap_bound_check(f).ok
    res = lap_bound_check(plateau())
    assert res.report.h_pol == 1
    assert res.slope == pytest.approx(0, abs=1e-12)
