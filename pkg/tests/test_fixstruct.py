from __future__ import annotations

import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import assume, given, settings

from oracles import interval_members, nondecreasing_maps, pl_maps, up_orbit_far_end
from polyent.errors import NotType1
from polyent.exactnum import RInterval
from polyent.families import double, f0, gn, identity, plateau
from polyent.fixstruct import (
    DOWN,
    UP,
    chain_is_valid,
    cover_dag,
    essential_intervals,
    is_type1,
    longest_chain,
    max_chain,
    orbit_closure,
    split_complement,
    structure_report,
)
from polyent.plmap import PLMap, evaluate, image, reflect

H = Fraction(1, 2)


def test_type1_examples():
    assert is_type1(identity())
    assert is_type1(gn(2))
    check = is_type1(f0())
    assert not check
    assert check.period == 2
    assert check.witness != H
    assert evaluate(f0(), evaluate(f0(), check.witness)) == check.witness


def test_essential_interval_examples():
    assert essential_intervals(identity()) == []
    (I,) = essential_intervals(gn(1))
    assert (I.a, I.b, I.orientation, I.source) == (0, 1, UP, 0)
    I1, I2 = essential_intervals(gn(2))
    assert (I1.a, I1.b, I2.a, I2.b) == (0, H, H, 1)
    assert I1.orientation == I2.orientation == UP


def test_not_type1_rejected():
    with pytest.raises(NotType1):
        essential_intervals(f0())
    with pytest.raises(NotType1):
        max_chain(double(f0()))


def test_down_interval_source_is_right_end():
    # x -> x^2-like shape: below the diagonal on (0, 1)
    f = PLMap([(0, 0), (H, Fraction(1, 4)), (1, 1)])
    (I,) = essential_intervals(f)
    assert I.orientation == DOWN
    assert I.source == 1
    cl = orbit_closure(f, I)
    assert cl.far_end == 0 and not cl.attained


def test_boundary_components_reported_separately():
    f = PLMap([(0, Fraction(1, 4)), (H, H), (1, H)])
    fix, essential, boundary = split_complement(f)
    assert [str(c) for c in fix] == ["[1/2, 1/2]"]
    assert essential == []
    assert len(boundary) == 2


def test_orbit_closure_examples():
    (I,) = essential_intervals(gn(1))
    cl = orbit_closure(gn(1), I)
    assert cl.far_end == 1
    # g_1 is realised here by the same graph as the plateau map, so 1 is hit
    assert cl.attained == up_orbit_far_end(gn(1), I.a, I.b)[1]
    I1, _ = essential_intervals(gn(2))
    assert orbit_closure(gn(2), I1).far_end == 1
    (P,) = essential_intervals(plateau())
    cl = orbit_closure(plateau(), P)
    assert (cl.far_end, cl.attained) == (1, True)


def test_cover_dag_examples():
    assert cover_dag(identity()).edges == []
    assert cover_dag(gn(2)).edges == [(0, 1)]
    assert sorted(cover_dag(gn(3)).edges) == [(0, 1), (0, 2), (1, 2)]


@pytest.mark.parametrize("n", range(0, 6))
def test_max_chain_on_gn(n):
    best = max_chain(gn(n))
    assert best.length == n
    assert chain_is_valid(gn(n), list(best.chain))


def test_max_chain_plateau():
    assert max_chain(plateau()).length == 1


def _closure_oracle(f, I):
    if I.orientation == UP:
        return up_orbit_far_end(f, I.a, I.b)
    z, hit = up_orbit_far_end(reflect(f), 1 - I.b, 1 - I.a)
    return 1 - z, hit


@given(nondecreasing_maps())
@settings(max_examples=150, deadline=None)
def test_orbit_closure_matches_closed_form_monotone(f):
    for I in essential_intervals(f):
        cl = orbit_closure(f, I)
        assert (cl.far_end, cl.attained) == _closure_oracle(f, I)


@given(pl_maps())
@settings(max_examples=150, deadline=None)
def test_orbit_closure_matches_closed_form_general(f):
    assume(is_type1(f).verdict)
    for I in essential_intervals(f, check=False):
        cl = orbit_closure(f, I, check=False)
        assert (cl.far_end, cl.attained) == _closure_oracle(f, I)


@given(pl_maps())
@settings(max_examples=100, deadline=None)
def test_closure_hull_is_invariant(f):
    assume(is_type1(f).verdict)
    for I in essential_intervals(f, check=False):
        cl = orbit_closure(f, I, check=False)
        lo, hi = sorted((I.source, cl.far_end))
        img = image(f, RInterval.closed(lo, hi))
        assert lo <= img.lo and img.hi <= hi
        if I.orientation == UP:
            assert cl.far_end >= I.b
        else:
            assert cl.far_end <= I.a


@given(pl_maps())
@settings(max_examples=100, deadline=None)
def test_same_side_rule(f):
    assume(is_type1(f).verdict)
    rng = random.Random(0)
    for I in essential_intervals(f, check=False):
        for t in interval_members(I.interval, 3):
            sign = (evaluate(f, t) > t) - (evaluate(f, t) < t)
            x = t
            for _ in range(rng.randint(1, 50)):
                x = evaluate(f, x)
                assert (x > t) - (x < t) == sign


@given(pl_maps())
@settings(max_examples=100, deadline=None)
def test_up_orbits_nested_or_disjoint(f):
    assume(is_type1(f).verdict)
    ups = [orbit_closure(f, I, check=False) for I in essential_intervals(f, check=False)
           if I.orientation == UP]
    for a in ups:
        for b in ups:
            A, B = a.as_interval(), b.as_interval()
            inter = A.lo < B.hi and B.lo < A.hi
            nested = (A.lo <= B.lo and B.hi <= A.hi) or (B.lo <= A.lo and A.hi <= B.hi)
            assert nested or not inter


def _nx_longest(dag):
    G = nx.DiGraph()
    G.add_nodes_from(range(len(dag.nodes)))
    G.add_edges_from(dag.edges)
    assert nx.is_directed_acyclic_graph(G)
    if not dag.nodes:
        return 0
    R = nx.transitive_reduction(G)
    return nx.dag_longest_path_length(R) + 1


@given(pl_maps(max_pieces=7))
@settings(max_examples=150, deadline=None)
def test_chain_length_against_transitive_reduction(f):
    assume(is_type1(f).verdict)
    dag = cover_dag(f, check=False)
    best = longest_chain(dag)
    assert best.length == _nx_longest(dag)
    assert chain_is_valid(f, list(best.chain))


@pytest.mark.parametrize("n", range(1, 6))
def test_gn_dag_matches_networkx(n):
    dag = cover_dag(gn(n))
    assert longest_chain(dag).length == _nx_longest(dag) == n


def test_chain_is_valid_rejects_bad_chains():
    I1, I2 = essential_intervals(gn(2))
    assert chain_is_valid(gn(2), [I1, I2])
    assert not chain_is_valid(gn(2), [I2, I1])
    assert not chain_is_valid(gn(2), [I1, I1])


def test_structure_report_shape():
    rep = structure_report(gn(2))
    assert rep["edges"] == [[0, 1]]
    assert rep["max_chain"]["length"] == 2
    assert rep["fixed_components"] == ["[0, 0]", "[1/2, 1/2]", "[1, 1]"]
