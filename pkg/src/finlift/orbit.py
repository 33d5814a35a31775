"""The orbit of {{} --> {a}} under left and right orthogonal complement.

A word w over {l, r} names the class P^w obtained from P = {{} --> {a}} by
applying the letters left to right.  The rewrite ledger turns any word into
one of the 22 vertices (the root plus 21 orbit classes) of the Schreier graph
stored in ``data/top_orbit.json``.

Two kinds of rules are kept apart.  ``lrl -> l`` and ``rlr -> r`` hold for
every class and may fire anywhere in a word.  All other rules are identities
between specific classes of this orbit, so they only fire on a prefix.
"""

from __future__ import annotations

import json
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources

from .classes import ClassId, PARTIAL, Tri, is_in_class
from .errors import FinliftError
from .lifting import lift_witness, lifts
from .notation import print_map
from .space import MapF, canonical_pair, map_universe

ROOT = ""
SINK = ("ll", "lll")


class LedgerGap(FinliftError):
    """A word did not reduce to a vertex of the graph."""


class GraphInvariantError(FinliftError):
    pass


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: str
    anchor: str        # "infix" or "prefix"
    citation: str


@lru_cache(maxsize=None)
def _data() -> dict:
    with resources.files("finlift").joinpath("data/top_orbit.json").open(encoding="utf-8") as fh:
        return json.load(fh)


def rules() -> list[Rule]:
    return [Rule(**r) for r in _data()["rules"]]


def node_words() -> list[str]:
    """The 21 orbit classes, in breadth-first order; the root is not among them."""
    return [n["word"] for n in _data()["nodes"]]


def vertices() -> list[str]:
    return [ROOT] + node_words()


def edge_table() -> dict[tuple[str, str], str]:
    return {(e["from"], e["letter"]): e["to"] for e in _data()["edges"]}


def citation(node: str, letter: str) -> str:
    for e in _data()["edges"]:
        if e["from"] == node and e["letter"] == letter:
            return e["citation"]
    raise KeyError((node, letter))


def one_sided_edges() -> dict[tuple[str, str], str]:
    return {(e["from"], e["letter"]): e["reason"] for e in _data()["one_sided"]}


# ---------------------------------------------------------------- rewriting

def _check_word(w: str):
    bad = set(w) - {"l", "r"}
    if bad:
        raise ValueError(f"word {w!r} has letters outside {{l, r}}")


def rewrites(w: str) -> list[str]:
    """Every word reachable from w by one rule application."""
    out = []
    for rule in rules():
        if rule.anchor == "prefix":
            if w.startswith(rule.lhs):
                out.append(rule.rhs + w[len(rule.lhs):])
        else:
            start = w.find(rule.lhs)
            while start >= 0:
                out.append(w[:start] + rule.rhs + w[start + len(rule.lhs):])
                start = w.find(rule.lhs, start + 1)
    return out


@lru_cache(maxsize=None)
def normalize(w: str) -> str:
    _check_word(w)
    while True:
        nxt = rewrites(w)
        if not nxt:
            break
        w = nxt[0]
    if w not in set(vertices()):
        raise LedgerGap(f"word reduces to {w!r}, which is not a vertex of the graph")
    return w


def normal_forms(w: str) -> set[str]:
    """Irreducible words reachable from w under every order of rule application."""
    seen, out = {w}, set()
    todo = [w]
    while todo:
        u = todo.pop()
        nxt = rewrites(u)
        if not nxt:
            out.add(u)
        for v in nxt:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return out


def walk(w: str) -> str:
    """The vertex reached from the root by following the edge table."""
    _check_word(w)
    table = edge_table()
    v = ROOT
    for x in w:
        v = table[(v, x)]
    return v


# ---------------------------------------------------------------- graph

@dataclass
class SchreierGraph:
    root: str
    nodes: list[str]                       # orbit classes, root excluded
    edges: dict[tuple[str, str], str]

    @property
    def vertices(self) -> list[str]:
        return [self.root] + self.nodes

    def successors(self, v: str, letters: str = "lr") -> list[str]:
        return [self.edges[(v, x)] for x in letters]

    def two_cycles(self, include_sink: bool = False) -> list[tuple[str, str]]:
        pairs = set()
        for (u, _), v in self.edges.items():
            if u != v and u in self.successors(v):
                pair = tuple(sorted((u, v), key=lambda s: (len(s), s)))
                if include_sink or not set(pair) & set(SINK):
                    pairs.add(pair)
        return sorted(pairs, key=lambda p: (len(p[0]), p))

    def simple_cycles(self, length: int) -> list[list[str]]:
        """Directed simple cycles of the given length, each listed once starting at its least vertex."""
        order = {v: i for i, v in enumerate(self.vertices)}
        out = []

        def dfs(start, path):
            v = path[-1]
            for w in dict.fromkeys(self.successors(v)):
                if w == start and len(path) == length:
                    out.append(list(path))
                elif w not in path and order[w] > order[start] and len(path) < length:
                    dfs(start, path + [w])

        for s in self.vertices:
            dfs(s, [s])
        return out

    def longest_path(self, exclude: tuple[str, ...] = ()) -> list[str]:
        """A longest directed path without repeated vertices, avoiding ``exclude``."""
        allowed = [v for v in self.vertices if v not in exclude]
        best: list[str] = []

        def dfs(path, seen):
            nonlocal best
            if len(path) > len(best):
                best = list(path)
            for w in dict.fromkeys(self.successors(path[-1])):
                if w not in seen and w not in exclude:
                    seen.add(w)
                    path.append(w)
                    dfs(path, seen)
                    path.pop()
                    seen.discard(w)

        for s in allowed:
            dfs([s], {s})
        return best

    def is_tree(self, letter: str, removed: tuple[str, ...] = ("lll",)) -> bool:
        """Whether the undirected graph of ``letter`` edges is a tree once ``removed`` is deleted."""
        vs = [v for v in self.vertices if v not in removed]
        # a multigraph: u -> v and v -> u are two edges
        es = [(v, self.edges[(v, letter)]) for v in vs if self.edges[(v, letter)] not in removed]
        if any(a == b for a, b in es) or len(es) != len(vs) - 1:
            return False
        adj = {v: set() for v in vs}
        for a, b in es:
            adj[a].add(b)
            adj[b].add(a)
        seen, todo = {vs[0]}, [vs[0]]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(vs)

    def to_json(self) -> dict:
        data = _data()
        return {
            "root": data["root"],
            "nodes": [{"word": w, "class": str(class_of(w)), "partial": class_of(w) in PARTIAL}
                      for w in self.nodes],
            "edges": [{"from": u, "letter": x, "to": v, "citation": citation(u, x)}
                      for (u, x), v in self.edges.items()],
        }

    def to_dot(self) -> str:
        name = lambda w: f'"{w or "root"}"'
        lines = ["digraph orbit {", "  rankdir=LR;"]
        for w in self.vertices:
            label = f"{w or 'root'}\\n{class_of(w)}"
            shape = "doublecircle" if w == ROOT else "box"
            lines.append(f'  {name(w)} [label="{label}", shape={shape}];')
        for (u, x), v in self.edges.items():
            style = "solid" if x == "l" else "dashed"
            lines.append(f'  {name(u)} -> {name(v)} [label="{x}", style={style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def orbit_bfs() -> SchreierGraph:
    """Close the root under l and r via ``normalize``; check the result against the edge table."""
    table = edge_table()
    order, edges = [ROOT], {}
    todo = deque([ROOT])
    while todo:
        v = todo.popleft()
        for x in "lr":
            w = normalize(v + x)
            if table.get((v, x)) != w:
                raise GraphInvariantError(
                    f"{v or 'root'} --{x}--> {w!r} by rewriting, but the edge table says {table.get((v, x))!r}")
            edges[(v, x)] = w
            if w not in order:
                order.append(w)
                todo.append(w)
    g = SchreierGraph(ROOT, order[1:], edges)
    problems = []
    if len(g.nodes) != 21:
        problems.append(f"{len(g.nodes)} orbit classes, expected 21")
    if len(g.two_cycles()) != 12:
        problems.append(f"{len(g.two_cycles())} two-cycles outside the sink, expected 12")
    if problems:
        raise GraphInvariantError("; ".join(problems))
    return g


# ---------------------------------------------------------------- classes of nodes

_CLASS_OF = {n["word"]: ClassId(n["class"]) for n in _data()["nodes"]}
ROOT_CLASS = "ROOT_GENERATOR"


def class_of(node: str) -> ClassId | str:
    if node == ROOT:
        return ROOT_CLASS
    try:
        return _CLASS_OF[node]
    except KeyError:
        raise LedgerGap(f"{node!r} is not a vertex of the graph") from None


def node_member(node: str, f: MapF) -> Tri:
    if node == ROOT:
        return Tri.of(f.dom.n == 0 and f.cod.n == 1)
    return is_in_class(class_of(node), f)


# ---------------------------------------------------------------- verification

@dataclass
class VerifyReport:
    subject: str
    bound: int
    checked: int = 0
    passed: int = 0
    failed: int = 0
    unknown_skipped: int = 0
    witnesses: list = field(default_factory=list)
    millis: int | None = 0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return asdict(self)


def _square_json(sq) -> dict:
    return {"top": print_map(sq.top), "bottom": print_map(sq.bottom)}


class _Lifter:
    """Memoized lifting on canonical representatives."""

    def __init__(self):
        self.canon: dict[MapF, MapF] = {}
        self.memo: dict[tuple[MapF, MapF], bool] = {}

    def rep(self, f: MapF) -> MapF:
        c = self.canon.get(f)
        if c is None:
            c = self.canon[f] = canonical_pair(f)
        return c

    def lifts(self, f: MapF, g: MapF) -> bool:
        key = (self.rep(f), self.rep(g))
        r = self.memo.get(key)
        if r is None:
            r = self.memo[key] = lifts(*key)
        return r


def _members(node: str, universe, lifter: _Lifter) -> list[MapF]:
    seen, out = set(), []
    for g in universe:
        if node_member(node, g) == Tri.IN:
            c = lifter.rep(g)
            if c not in seen:
                seen.add(c)
                out.append(g)
    return out


def verify_edge(node: str, letter: str, n: int, witness_n: int | None = None,
                timing: bool = True) -> VerifyReport:
    """Check ``node --letter--> target`` over all maps between canonical spaces of size <= n.

    Soundness: a map in the target class lifts against every member of the node
    class (on the side given by ``letter``).  Completeness: a map outside the
    target class fails to lift against some member of the node class of size
    <= ``witness_n`` (default max(n + 1, 4)).  Larger witness pools are only
    built when a smaller one does not refute the map.
    """
    t0 = time.perf_counter()
    target = edge_table()[(node, letter)]
    witness_n = max(n + 1, 4) if witness_n is None else max(witness_n, n)
    rep = VerifyReport(f"{node or 'root'} --{letter}--> {target}", n)
    one_sided = one_sided_edges().get((node, letter))
    if one_sided:
        rep.notes.append(f"completeness not checkable at bounded size: {one_sided}")
    lifter = _Lifter()
    universe = map_universe(n)
    members = _members(node, universe, lifter)
    tiers: list[list[MapF]] = [members]

    def tier(i):
        while len(tiers) <= i:
            k = n + len(tiers)
            fresh = (g for g in map_universe(k) if max(g.dom.n, g.cod.n) == k)
            tiers.append(_members(node, fresh, lifter))
        return tiers[i]

    def ok(f, g):
        return lifter.lifts(f, g) if letter == "l" else lifter.lifts(g, f)

    def square(f, g):
        return lift_witness(f, g) if letter == "l" else lift_witness(g, f)

    for f in universe:
        rep.checked += 1
        m = node_member(target, f)
        if m == Tri.UNKNOWN:
            rep.unknown_skipped += 1
            continue
        if m == Tri.IN:
            bad = next((g for g in members if not ok(f, g)), None)
            if bad is None:
                rep.passed += 1
            else:
                rep.failed += 1
                rep.witnesses.append({"map": print_map(f), "kind": "soundness",
                                      "against": print_map(bad), "square": _square_json(square(f, bad))})
            continue
        if any(not ok(f, g) for i in range(witness_n - n + 1) for g in tier(i)):
            rep.passed += 1
        elif one_sided:
            rep.unknown_skipped += 1
        else:
            rep.failed += 1
            rep.witnesses.append({"map": print_map(f), "kind": "completeness",
                                  "against": None, "square": None})
    rep.millis = round((time.perf_counter() - t0) * 1000) if timing else None
    return rep


def _verify_one(args):
    node, letter, n, witness_n, timing = args
    return verify_edge(node, letter, n, witness_n, timing)


def verify_all(n: int, witness_n: int | None = None, threads: int = 1,
               timing: bool = True) -> list[VerifyReport]:
    jobs = [(u, x, n, witness_n, timing) for (u, x) in edge_table()]
    if threads <= 1:
        return [_verify_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_verify_one, jobs))


def find_counterexample(f: MapF, node: str, n: int):
    """A member g of the parent class and a failing square showing f is not in ``node``.

    ``node`` is reached from its breadth-first parent by one letter; if that
    letter is l, g is a parent member with f not lifting against g, otherwise
    g does not lift against f.  Returns None when f is in the class, when the
    node is the root, or when the universe of size <= n has no witness.
    """
    if node == ROOT or node_member(node, f) != Tri.OUT:
        return None
    parent, letter = _bfs_parent(node)
    for g in map_universe(n):
        if node_member(parent, g) != Tri.IN:
            continue
        sq = lift_witness(f, g) if letter == "l" else lift_witness(g, f)
        if sq:
            return g, sq
    return None


@lru_cache(maxsize=None)
def _parents() -> dict[str, tuple[str, str]]:
    out = {}
    todo = deque([ROOT])
    seen = {ROOT}
    table = edge_table()
    while todo:
        v = todo.popleft()
        for x in "lr":
            w = table[(v, x)]
            if w not in seen:
                seen.add(w)
                out[w] = (v, x)
                todo.append(w)
    return out


def _bfs_parent(node: str) -> tuple[str, str]:
    return _parents()[node]


# ---------------------------------------------------------------- sets

def _sets_identities():
    from .notation import parse_map as P
    root = P("{} --> {a}")
    incl = P("{a} --> {a,b}")
    glue = P("{a,b} --> {a=b}")
    glue_plus = P("{a,b} --> {a=b,c}")
    nothing = P("{} --> {}")
    return [
        ("domain nonempty", ClassId.DOMAIN_NONEMPTY, [("l", [root])]),
        ("surjections", ClassId.SURJECTIVE, [("l", [incl]), ("r", [root]), ("lrr", [root])]),
        ("injections", ClassId.INJECTIVE, [("l", [glue]), ("r", [glue]), ("rl", [root])]),
        ("isomorphisms", ClassId.ISO, [("l", [glue_plus]), ("lr", [nothing]), ("ll", [root])]),
        ("all maps", ClassId.ALL, [("l", [nothing]), ("r", [nothing]), ("lll", [root]), ("llr", [root])]),
        ("empty domain or isomorphism", ClassId.DOMAIN_EMPTY_OR_ISO, [("r", [glue_plus]), ("lr", [root])]),
        ("injective with nonempty domain, or isomorphism", (ClassId.INJECTIVE, ClassId.DOMAIN_NONEMPTY),
         [("l", [root, glue])]),
        ("surjective or empty domain", ClassId.SURJ_OR_EMPTY, [("r", [incl])]),
    ]


def _iterate(word: str, gens, universe, lifter: _Lifter) -> frozenset[MapF]:
    cls = list(gens)
    for x in word:
        if x == "l":
            cls = [u for u in universe if all(lifter.lifts(u, p) for p in cls)]
        else:
            cls = [u for u in universe if all(lifter.lifts(p, u) for p in cls)]
    return frozenset(cls)


def sets_mode_verify(n: int, timing: bool = True) -> VerifyReport:
    """Maps between discrete spaces of size <= n: the eight orthogonal classes of sets."""
    t0 = time.perf_counter()
    universe = map_universe(n, discrete_only=True)
    lifter = _Lifter()
    rep = VerifyReport("sets: eight classes", n)
    patterns = set()
    for name, cid, exprs in _sets_identities():
        cids = cid if isinstance(cid, tuple) else (cid,)
        expected = frozenset(f for f in universe if all(is_in_class(c, f) == Tri.IN for c in cids))
        patterns.add(expected)
        for word, gens in exprs:
            rep.checked += 1
            got = _iterate(word, gens, universe, lifter)
            patterns.add(got)
            if got == expected:
                rep.passed += 1
            else:
                rep.failed += 1
                diff = sorted(got ^ expected, key=universe.index)[0]
                rep.witnesses.append({"identity": f"({', '.join(print_map(g) for g in gens)})^{word} = {name}",
                                      "map": print_map(diff), "kind": "mismatch"})
    rep.checked += 1
    if len(patterns) == 8:
        rep.passed += 1
    else:
        rep.failed += 1
        rep.witnesses.append({"identity": "number of distinct classes", "kind": "count",
                              "map": None, "count": len(patterns)})
    rep.notes.append(f"{len(patterns)} distinct classes")
    rep.millis = round((time.perf_counter() - t0) * 1000) if timing else None
    return rep


def partial_class_report(n: int) -> dict:
    """How the three-valued RRRRL class sits against QUOTIENT on the universe; asserts nothing."""
    counts: dict[str, int] = {}
    for f in map_universe(n):
        key = f"RRRRL_PARTIAL={is_in_class(ClassId.RRRRL_PARTIAL, f).value},QUOTIENT={is_in_class(ClassId.QUOTIENT, f).value}"
        counts[key] = counts.get(key, 0) + 1
    return dict(sorted(counts.items()))
