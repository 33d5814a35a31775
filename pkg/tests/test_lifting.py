import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import maps
from finlift.classes import is_iso
from finlift.lifting import (ALL_LIFT, Square, is_retract_of, is_retract_of_power, lift_witness, lifts,
                             lifts_naive, orthogonal_filter, power_obstruction, retraction_of)
from finlift.notation import parse_map as P
from finlift.space import MapF, antidiscrete, chain, discrete, map_universe, point, relabel, sierpinski

ROOT = P("{} --> {a}")
GLUE = P("{a,b} --> {a=b}")
INCL = P("{a} --> {a,b}")


def _relabel_map(f, pd, pc):
    """The same map after permuting domain points by pd and codomain points by pc."""
    dom, cod = relabel(f.dom, pd), relabel(f.cod, pc)
    vals = [0] * f.dom.n
    for x in range(f.dom.n):
        vals[pd[x]] = pc[f.values[x]]
    return MapF(dom, cod, tuple(vals))


def test_root_against_glue_and_inclusion():
    assert lifts(ROOT, GLUE)
    sq = lift_witness(ROOT, INCL)
    assert isinstance(sq, Square) and sq.commutes()
    assert sq.bottom.values == (1,)         # the point missed by the inclusion


def test_all_lift_is_falsy_singleton():
    assert lift_witness(ROOT, GLUE) is ALL_LIFT
    assert not ALL_LIFT


def test_small_universe_agrees_with_naive():
    U = map_universe(2)
    for f in U:
        for g in U:
            assert lifts(f, g) == lifts_naive(f, g)


@settings(max_examples=150)
@given(maps(), maps())
def test_agrees_with_naive(f, g):
    assert lifts(f, g) == lifts_naive(f, g)


@settings(max_examples=80)
@given(maps(), maps(), st.randoms(use_true_random=False))
def test_invariant_under_relabelling(f, g, rnd):
    def perm(n):
        p = list(range(n))
        rnd.shuffle(p)
        return p
    f2 = _relabel_map(f, perm(f.dom.n), perm(f.cod.n))
    g2 = _relabel_map(g, perm(g.dom.n), perm(g.cod.n))
    assert lifts(f, g) == lifts(f2, g2)


@settings(max_examples=80)
@given(maps())
def test_lifting_against_itself_forces_iso(f):
    assert lifts(f, f) == is_iso(f)


@settings(max_examples=80)
@given(maps(), maps())
def test_failing_square_commutes_and_has_no_diagonal(f, g):
    sq = lift_witness(f, g)
    if sq is ALL_LIFT:
        return
    assert sq.commutes()
    assert not lifts_naive(f, g)


def test_right_orthogonal_closed_under_retracts():
    U = map_universe(2)
    right = orthogonal_filter("r", [INCL], U)
    for g in U:
        if g not in right and any(is_retract_of(g, h) for h in right):
            pytest.fail(f"{g} is a retract of a member but not a member")


def test_retraction_maps_compose_to_identity():
    f = P("{a} --> {a->b}")
    g = P("{a} --> {a->b->c}")
    i0, i1, r0, r1 = retraction_of(f, g)
    assert i0.then(r0).values == (0,)
    assert i1.then(r1).values == tuple(range(f.cod.n))


def test_orthogonal_filter_side():
    U = map_universe(2)
    assert set(orthogonal_filter("l", [GLUE], U)) == {f for f in U if lifts(f, GLUE)}
    with pytest.raises(ValueError):
        orthogonal_filter("x", [GLUE], U)


def test_retract_of_power_examples():
    S = sierpinski()
    assert is_retract_of_power(chain(3), S)
    assert is_retract_of_power(point(), S)
    # a two-point antidiscrete space is not a retract of a power of Sierpinski space
    assert not is_retract_of_power(antidiscrete(2), S)
    # powers of S are connected, so two discrete points need a certificate
    assert power_obstruction(discrete(2), S) is not None
    assert not is_retract_of_power(discrete(2), S)


def test_random_pairs_size_three():
    rnd = random.Random(7)
    U = map_universe(3)
    for _ in range(300):
        f, g = rnd.choice(U), rnd.choice(U)
        assert lifts(f, g) == lifts_naive(f, g)
