from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pl_maps, rationals_in
from polyent.errors import BudgetExceeded, DomainError, MapFormatError
from polyent.exactnum import RInterval
from polyent.families import f0, gn, plateau, tent
from polyent.plmap import (
    Iterates,
    PLMap,
    compose,
    dump_map,
    evaluate,
    fixed_set,
    image,
    is_monotone,
    iterate,
    lap_count,
    lap_numbers,
    leftmost_preimage,
    load_map,
    periodic_points,
    preimages_in,
    reflect,
)

H = Fraction(1, 2)


def test_validation():
    with pytest.raises(DomainError):
        PLMap([(0, 0), (Fraction(1, 2), 2), (1, 1)])
    with pytest.raises(DomainError):
        PLMap([(0, 0), (Fraction(1, 2), 1)])
    with pytest.raises(DomainError):
        PLMap([(0, 0), (Fraction(1, 2), 1), (Fraction(1, 2), 0), (1, 1)])


def test_collinear_points_merged():
    f = PLMap([(0, 0), (Fraction(1, 3), Fraction(1, 3)), (1, 1)])
    assert f.breakpoints == [(0, 0), (1, 1)]
    assert f == PLMap.identity()


@given(pl_maps(), pl_maps(), rationals_in())
def test_compose_agrees_with_pointwise(f, g, t):
    assert evaluate(compose(f, g), t) == evaluate(f, evaluate(g, t))


@given(pl_maps(), pl_maps(), pl_maps())
@settings(max_examples=40)
def test_compose_associative(f, g, h):
    assert compose(f, compose(g, h)) == compose(compose(f, g), h)


@given(pl_maps(), st.integers(0, 6))
@settings(max_examples=40)
def test_iterate_matches_repeated_composition(f, n):
    g = PLMap.identity()
    for _ in range(n):
        g = compose(f, g)
    assert iterate(f, n) == g


@given(pl_maps())
def test_float_lowering_close_to_exact(f):
    ts = [Fraction(k, 37) for k in range(38)]
    F = f.float_callable()
    got = F(np.array([float(t) for t in ts]))
    want = np.array([float(evaluate(f, t)) for t in ts])
    assert np.allclose(got, want, atol=1e-12)


def test_known_compositions():
    assert compose(f0(), f0()) == PLMap.identity()
    assert compose(plateau(), plateau()).breakpoints == [(0, 0), (Fraction(1, 4), 1), (1, 1)]


def test_budget_enforced():
    with pytest.raises(BudgetExceeded):
        iterate(tent(), 12, budget=100)


def test_image_of_plateau_segment_is_point():
    assert image(plateau(), RInterval.closed(H, 1)) == RInterval.point(Fraction(1))
    assert image(gn(2), RInterval.closed(0, H)) == RInterval.closed(0, 1)


def test_image_open_interval_attains_interior_max():
    # the peak at 1/2 lies inside (0, 1), so 1 is attained
    assert image(tent(), RInterval.open(0, 1)) == RInterval(0, 1, False, True)


@given(pl_maps(), rationals_in(), rationals_in())
def test_image_contains_sampled_values(f, a, b):
    lo, hi = min(a, b), max(a, b)
    img = image(f, RInterval.closed(lo, hi))
    for k in range(9):
        t = lo + (hi - lo) * Fraction(k, 8)
        assert evaluate(f, t) in img


@given(pl_maps())
def test_fixed_set_membership(f):
    comps = fixed_set(f)
    pts = list(f.xs) + [Fraction(k, 101) for k in range(102)]
    for t in pts:
        assert (evaluate(f, t) == t) == any(t in c for c in comps)


def test_tent_three_cycles():
    comps = periodic_points(tent(), 3)
    pts = sorted(c.lo for c in comps)
    assert all(c.is_degenerate for c in comps)
    assert pts == sorted(Fraction(k) for k in ("2/9", "2/7", "4/9", "4/7", "6/7", "8/9"))
    for p in pts:
        assert evaluate(tent(), evaluate(tent(), evaluate(tent(), p))) == p


def test_f0_period_two_everywhere_but_center():
    comps = periodic_points(f0(), 2)
    assert [str(c) for c in comps] == ["[0, 1/2)", "(1/2, 1]"]


@given(pl_maps(), rationals_in())
def test_preimages_map_onto_target(f, y):
    for comp in preimages_in(f, y, RInterval.closed(0, 1)):
        assert evaluate(f, comp.sample_point()) == y
    x = leftmost_preimage(f, y, RInterval.closed(0, 1))
    if x is not None:
        assert evaluate(f, x) == y


@given(pl_maps(), rationals_in())
def test_reflect_conjugates(f, t):
    assert evaluate(reflect(f), 1 - t) == 1 - evaluate(f, t)


def test_lap_numbers():
    assert lap_count(tent()) == 2
    assert lap_count(plateau()) == 1
    assert lap_numbers(gn(2), 6).laps == (3, 5, 7, 9, 11, 13)
    assert lap_numbers(tent(), 5).laps == (2, 4, 8, 16, 32)


def test_monotone_detection():
    assert is_monotone(plateau())
    assert is_monotone(f0())
    assert not is_monotone(tent())


def test_json_round_trip(tmp_path):
    f = gn(3)
    path = tmp_path / "m.json"
    dump_map(f, path)
    assert load_map(path) == f
    data = json.loads(path.read_text())
    assert data["breakpoints"][1] == {"x": "1/6", "y": "2/3"}


def test_bad_json_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"breakpoints": [{"x": "0", "y": "0.5"}, {"x": "1", "y": "1"}]}')
    with pytest.raises(MapFormatError):
        load_map(path)
    path.write_text("not json")
    with pytest.raises(MapFormatError):
        load_map(path)


def test_iterates_cache_reuses_powers():
    its = Iterates(gn(2))
    assert its.power(4) is its.power(4)
    assert its.power(0) == PLMap.identity()


@given(pl_maps(), rationals_in(), rationals_in(), rationals_in())
def test_image_of_adjacent_union_is_hull(f, a, b, c):
    lo, mid, hi = sorted((a, b, c))
    whole = image(f, RInterval.closed(lo, hi))
    left = image(f, RInterval.closed(lo, mid))
    right = image(f, RInterval.closed(mid, hi))
    assert (whole.lo, whole.hi) == (min(left.lo, right.lo), max(left.hi, right.hi))


@given(pl_maps(), st.integers(1, 4))
@settings(max_examples=50)
def test_fixed_points_stay_fixed_under_iterates(f, p):
    fp = fixed_set(iterate(f, p))
    for comp in fixed_set(f):
        assert any(comp.lo in c and comp.hi in c for c in fp)


@given(pl_maps(max_pieces=4))
@settings(max_examples=40, deadline=None)
def test_laps_submultiplicative(f):
    laps = (1,) + lap_numbers(f, 6).laps
    for n in range(1, 4):
        for m in range(1, 4):
            assert laps[n + m] <= laps[n] * laps[m]
