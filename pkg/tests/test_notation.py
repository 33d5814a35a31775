import pytest
from hypothesis import given

from conftest import spaces
from finlift.errors import NotMonotone, ParseError
from finlift.notation import parse_map, parse_space, print_map, print_space
from finlift.space import (canonical_form, canonical_pair, discrete, empty, enumerate_spaces,
                           map_universe, point, sierpinski)


def test_glue_map():
    f = parse_map("{a,b} --> {a=b}")
    assert f.dom == discrete(2) and f.cod == point() and f.values == (0, 0)


def test_same_map_two_spellings():
    f = parse_map("{a} --> {a,b}")
    g = parse_map("{a} --> {b}")
    assert f.cod == g.cod == discrete(2)
    # b is listed first, so a becomes the second codomain point
    assert f.values == (0,) and g.values == (1,)
    assert canonical_pair(f) == canonical_pair(g)


def test_missing_domain_points_are_added():
    f = parse_map("{a,b} --> {a}")
    assert f.cod == discrete(2) and f.values == (0, 1)


def test_sierpinski_print():
    assert print_space(sierpinski()) == "{a->b}"
    assert print_space(empty()) == "{}"


def test_indistinguishable_chain():
    A = parse_space("{a<->b->c}")
    assert A.leq(0, 1) and A.leq(1, 0) and A.leq(0, 2) and not A.leq(2, 0)


def test_closed_subspace_generator_needs_image_relations():
    # written with the image relation x=y<->z=c the map is monotone
    f = parse_map("{x<->y<->z->c} --> {x=y<->z=c}")
    assert f.dom.n == 4 and f.cod.n == 2 and f.values == (0, 0, 1, 1)
    with pytest.raises(NotMonotone):
        parse_map("{x<->y<->z->c} --> {x=y,z=c}")
    assert parse_map("{x<->y<->z->c} --> {x=y,z=c}", strict=False) == f


def test_self_map_is_two_spaces():
    f = parse_map("{a->b} --> {a->b}")
    assert f.dom == f.cod and f.dom is not f.cod


@pytest.mark.parametrize("text,pos", [("{bad", 4), ("{a->}", 4), ("{a} -> {b}", 4), ("{a}}", 3),
                                      ("{a,b} --> {a=b} x", 16), ("{a$b}", 2)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as e:
        parse_map(text)
    assert e.value.pos == pos


@pytest.mark.parametrize("n", range(5))
def test_space_round_trip(n):
    for A in enumerate_spaces(n, "up_to_iso"):
        assert canonical_form(parse_space(print_space(A))) == canonical_form(A)


def test_map_round_trip():
    for f in map_universe(3):
        g = parse_map(print_map(f))
        assert canonical_pair(g) == canonical_pair(f)


@given(spaces())
def test_gluing_is_a_congruence(A):
    # renaming every point x to x=x_ leaves the space unchanged
    text = print_space(A)
    names = [f"p{i}" for i in range(A.n)]
    glued = print_space(A, names)
    extra = ",".join(f"{x}=q{x}" for x in names)
    if extra:
        glued = glued[:-1] + ("," if A.n else "") + extra + "}"
    assert canonical_form(parse_space(glued)) == canonical_form(parse_space(text))
