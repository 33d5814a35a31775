import itertools
import json

import pytest

from finlift.classes import Tri
from finlift.lifting import lifts
from finlift.notation import parse_map as P
from finlift.notation import print_map
from finlift.orbit import (ROOT, SINK, LedgerGap, class_of, edge_table, find_counterexample,
                           node_member, normal_forms, normalize, orbit_bfs, rewrites, rules,
                           sets_mode_verify, verify_all, verify_edge, walk)
from finlift.space import canonical_pair, map_universe

CLASSES = {
    "l": "DOMAIN_NONEMPTY", "r": "SURJECTIVE", "ll": "ISO", "lr": "DOMAIN_EMPTY_OR_ISO",
    "rl": "DISCRETE_EXTENSION", "rr": "SUBSPACE", "lll": "ALL", "rll": "PI0_SURJECTIVE_CLOPEN",
    "lrr": "HAS_SECTION", "rrr": "RRR_MEMBER", "lrrl": "DISJOINT_UNION_INCL", "lrrr": "INJECTIVE",
    "rllr": "RLLR_PARTIAL", "rrrr": "T1_FIBRES", "rllrr": "GENERIC_SECTION", "lrrrl": "QUOTIENT",
    "lrrrr": "SURJ_INDUCED", "rrrrl": "RRRRL_PARTIAL", "rllrrl": "CLOSED_SUBSPACE",
    "lrrrrr": "T0_FIBRES", "rllrrll": "DENSE_IMAGE",
}


@pytest.fixture(scope="module")
def graph():
    return orbit_bfs()


@pytest.mark.parametrize("word,node", [("lrl", "l"), ("rllrrr", "rrrr"), ("", ""), ("rrrl", "rr"),
                                       ("rlr", "r"), ("rrrrr", "ll"), ("llr", "lll"), ("lllr", "ll"),
                                       ("rllrrllr", "rllrrl"), ("lrrrrrr", "ll")])
def test_normalize_examples(word, node):
    assert normalize(word) == node


def test_normalize_rejects_other_letters():
    with pytest.raises(ValueError):
        normalize("lx")


def test_rules_do_not_grow_words():
    assert all(len(r.rhs) <= len(r.lhs) for r in rules())


def test_confluent_and_idempotent_up_to_twelve():
    for n in range(13):
        for t in itertools.product("lr", repeat=n):
            w = "".join(t)
            nf = normal_forms(w)
            assert len(nf) == 1, (w, nf)
            assert normalize(normalize(w)) == normalize(w)
            assert walk(w) == normalize(w)


def test_normal_forms_have_no_redex(graph):
    for v in graph.vertices:
        assert rewrites(v) == [] or v in SINK


def test_long_words_fall_into_the_sink():
    for s in ["", "l", "rll", "lrr"]:
        assert normalize(s + "l" * 6) in SINK
        assert normalize(s + "r" * 6) in SINK
        assert normalize(s + "l" * 6) != normalize(s + "l" * 7)


def test_unknown_vertex():
    with pytest.raises(LedgerGap):
        class_of("rrrrrrrrrl")


def test_node_count(graph):
    assert len(graph.nodes) == 21
    assert ROOT not in graph.nodes


def test_class_assignment(graph):
    assert {w: str(class_of(w)) for w in graph.nodes} == CLASSES


def test_edges_total(graph):
    for v in graph.vertices:
        assert {(v, "l"), (v, "r")} <= set(graph.edges)
    assert graph.edges == edge_table()


def test_twelve_two_cycles(graph):
    assert len(graph.two_cycles()) == 12
    assert len(graph.two_cycles(include_sink=True)) == 13


def test_two_six_cycles_share_path(graph):
    cycles = graph.simple_cycles(6)
    assert len(cycles) == 2
    for c in cycles:
        i = c.index("rrrr")
        rot = c[i:] + c[:i]
        assert rot[:3] == ["rrrr", "rrrrl", "rl"]


@pytest.mark.parametrize("letter", "lr")
def test_tree_after_removing_lll(graph, letter):
    assert graph.is_tree(letter, removed=("lll",))
    assert not graph.is_tree(letter, removed=())


def test_longest_cycle_free_path(graph):
    path = graph.longest_path(exclude=(ROOT,))
    assert len(path) == 11, " -> ".join(path)


def test_bipartite_by_parity(graph):
    for (u, _), v in graph.edges.items():
        if {u, v} & set(SINK) or u == ROOT:
            continue
        assert len(u) % 2 != len(v) % 2, (u, v)


def _members(node, U):
    return [f for f in U if node_member(node, f) == Tri.IN]


def _not_out(node, U):
    return {f for f in U if node_member(node, f) != Tri.OUT}


def test_parity_sides_ordered_by_derived_inclusions(graph):
    # P ⊆ P^lr and P ⊆ P^rl for every class P, so v ⊆ v.lr and v ⊆ v.rl
    U = map_universe(3)
    for v in graph.nodes:
        for suffix in ("lr", "rl"):
            w = normalize(v + suffix)
            if w == v:
                continue
            assert len(v) % 2 == len(w) % 2 or {v, w} & set(SINK)
            outside = set(_members(v, U)) - _not_out(w, U)
            assert not outside, (v, w, print_map(min(outside, key=U.index)))


def test_galois_property_on_two_cycles(graph):
    U = map_universe(2)
    for pair in graph.two_cycles():
        for v in pair:
            P0 = _members(v, U)
            left = [f for f in U if all(lifts(f, p) for p in P0)]
            right = [f for f in U if all(lifts(p, f) for p in P0)]
            lr = {f for f in U if all(lifts(p, f) for p in left)}
            rl = {f for f in U if all(lifts(f, p) for p in right)}
            assert set(P0) <= lr and set(P0) <= rl


def test_json_export(graph):
    data = json.loads(json.dumps(graph.to_json()))
    assert len(data["nodes"]) == 21 and len(data["edges"]) == 44
    assert {"word", "class", "partial"} == set(data["nodes"][0])
    assert {"from", "letter", "to", "citation"} == set(data["edges"][0])
    assert all(e["citation"] for e in data["edges"])


def test_dot_export(graph):
    dot = graph.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == 44


def test_root_edge_surjections():
    r = verify_edge(ROOT, "r", 2)
    assert r.ok and r.failed == 0 and r.unknown_skipped == 0 and r.checked == 44


def test_verify_all_size_two():
    reports = verify_all(2, timing=False)
    assert len(reports) == 44
    for r in reports:
        assert r.failed == 0, r.to_json()
        assert r.passed + r.failed + r.unknown_skipped == r.checked
        if r.unknown_skipped:
            target = r.subject.split("--> ")[1]
            assert target in ("rllr", "rrrrl", "rllrr"), r.subject


def test_reports_are_deterministic():
    a = [r.to_json() for r in verify_all(1, timing=False)]
    b = [r.to_json() for r in verify_all(1, timing=False, threads=2)]
    assert a == b


@pytest.mark.slow
def test_verify_all_size_three():
    for r in verify_all(3):
        assert r.failed == 0, r.to_json()


@pytest.mark.slow
def test_closed_subspace_to_dense_edge_has_no_unknowns():
    r = verify_edge("rllrr", "l", 3)
    assert r.ok and r.unknown_skipped == 0


def test_sets_mode():
    r = sets_mode_verify(3)
    assert r.failed == 0 and r.passed == r.checked
    assert "8 distinct classes" in r.notes


def test_counterexample_not_subspace():
    g, sq = find_counterexample(P("{a->b} --> {a=b}"), "rr", 3)
    assert canonical_pair(g) == canonical_pair(P("{a,b} --> {a=b}"))
    assert sq.commutes() and not lifts(g, P("{a->b} --> {a=b}"))


def test_counterexample_dense():
    f = P("{c} --> {o->c}")
    g, sq = find_counterexample(f, "rllrrll", 3)
    assert canonical_pair(g) == canonical_pair(f)


def test_counterexample_identity_is_none():
    f = P("{a->b} --> {a->b}")
    for v in CLASSES:
        if v not in ("rllr", "rrrrl"):
            assert find_counterexample(f, v, 2) is None
