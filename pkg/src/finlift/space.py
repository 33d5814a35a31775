"""Finite spaces as preorders.

A space on points ``0..n-1`` is stored as ``cl``: ``cl[x]`` is the bitmask of
the closure of ``{x}``.  ``leq(x, y)`` (written x ⤳ y) holds iff ``y`` lies in
that closure.  Closed sets are the subsets ``S`` with ``cl[x] ⊆ S`` for every
``x`` in ``S``; open sets are their complements.  Monotone maps are exactly the
continuous ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import InvalidSpace, NotMonotone, UniverseTooLarge
from .limits import limits


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def _close(cl: list[int]) -> list[int]:
    n = len(cl)
    for k in range(n):
        bk = 1 << k
        ck = cl[k]
        for i in range(n):
            if cl[i] & bk:
                cl[i] |= ck
    return cl


@dataclass(frozen=True, eq=False)
class Space:
    cl: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.cl)
        full = (1 << n) - 1
        for x, c in enumerate(self.cl):
            if not (c >> x) & 1:
                raise InvalidSpace(f"leq is not reflexive at point {x}")
            if c & ~full:
                raise InvalidSpace(f"closure of point {x} leaves the point set")
            for y in bits(c):
                if self.cl[y] & ~c:
                    raise InvalidSpace(f"leq is not transitive through {x} -> {y}")
        if self.labels is not None and len(self.labels) != n:
            raise InvalidSpace("label count does not match point count")

    def __eq__(self, other):
        return isinstance(other, Space) and self.cl == other.cl

    def __hash__(self):
        return hash(self.cl)

    def __repr__(self):
        from .notation import print_space
        return f"Space({print_space(self)!r})"

    @property
    def n(self) -> int:
        return len(self.cl)

    @property
    def full(self) -> int:
        return (1 << len(self.cl)) - 1

    def leq(self, x: int, y: int) -> bool:
        return bool((self.cl[x] >> y) & 1)

    @cached_property
    def nb(self) -> tuple[int, ...]:
        """nb[y]: the minimal open neighbourhood of y, i.e. {x : x ⤳ y}."""
        out = [0] * self.n
        for x, c in enumerate(self.cl):
            for y in bits(c):
                out[y] |= 1 << x
        return tuple(out)

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], labels=None) -> Space:
        cl = [1 << x for x in range(n)]
        for x, y in pairs:
            cl[x] |= 1 << y
        return cls(tuple(_close(cl)), tuple(labels) if labels is not None else None)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[bool]]) -> Space:
        return cls(tuple(to_mask(j for j, v in enumerate(r) if v) for r in rows))


def make_space(relations: Iterable[tuple[str, str]], points: Sequence[str]) -> Space:
    index: dict[str, int] = {}
    for p in points:
        if p in index:
            raise InvalidSpace(f"duplicate point name {p!r}")
        index[p] = len(index)
    pairs = []
    for a, b in relations:
        if a not in index or b not in index:
            raise InvalidSpace(f"relation ({a!r}, {b!r}) uses an unlisted point")
        pairs.append((index[a], index[b]))
    return Space.from_pairs(len(index), pairs, labels=points)


# ---------------------------------------------------------------- named spaces

def empty() -> Space:
    return Space(())


def point() -> Space:
    return Space((1,))


def discrete(n: int) -> Space:
    return Space(tuple(1 << x for x in range(n)))


def antidiscrete(n: int) -> Space:
    return Space(tuple((1 << n) - 1 for _ in range(n)))


def sierpinski() -> Space:
    """Point 0 is open, point 1 is closed."""
    return Space((0b11, 0b10))


def chain(n: int) -> Space:
    """0 ⤳ 1 ⤳ ... ⤳ n-1."""
    return Space(tuple(((1 << n) - 1) & ~((1 << x) - 1) for x in range(n)))


# ---------------------------------------------------------------- topology

def is_closed_mask(A: Space, s: int) -> bool:
    return all(A.cl[x] & ~s == 0 for x in bits(s))


def is_open_mask(A: Space, u: int) -> bool:
    return is_closed_mask(A, A.full & ~u)


def closure_mask(A: Space, s: int) -> int:
    out = 0
    for x in bits(s):
        out |= A.cl[x]
    return out


def interior_mask(A: Space, s: int) -> int:
    return A.full & ~closure_mask(A, A.full & ~s)


def closed_masks(A: Space) -> list[int]:
    return [s for s in range(1 << A.n) if is_closed_mask(A, s)]


def open_masks(A: Space) -> list[int]:
    return [u for u in range(1 << A.n) if is_open_mask(A, u)]


def opens(A: Space) -> set[frozenset[int]]:
    return {frozenset(bits(u)) for u in open_masks(A)}


def closure(A: Space, S: Iterable[int]) -> frozenset[int]:
    return frozenset(bits(closure_mask(A, to_mask(S))))


def component_masks(A: Space) -> list[int]:
    """Connected components, ordered by least point."""
    parent = list(range(A.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in range(A.n):
        for y in bits(A.cl[x]):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    comps: dict[int, int] = {}
    for x in range(A.n):
        comps[find(x)] = comps.get(find(x), 0) | (1 << x)
    return [comps[r] for r in sorted(comps)]


def indist_masks(A: Space) -> list[int]:
    """Classes of topologically indistinguishable points."""
    seen, out = 0, []
    for x in range(A.n):
        if not (seen >> x) & 1:
            c = A.cl[x] & A.nb[x]
            out.append(c)
            seen |= c
    return out


def clopen_masks(A: Space) -> list[int]:
    comps = component_masks(A)
    out = []
    for pick in range(1 << len(comps)):
        out.append(to_mask_union(c for i, c in enumerate(comps) if (pick >> i) & 1))
    return sorted(out)


def to_mask_union(masks: Iterable[int]) -> int:
    m = 0
    for x in masks:
        m |= x
    return m


def generic_points(A: Space) -> frozenset[int]:
    return frozenset(x for x in range(A.n) if A.cl[x] == A.full)


def is_poset(A: Space) -> bool:
    return all(A.cl[x] & A.nb[x] == 1 << x for x in range(A.n))


def is_discrete(A: Space) -> bool:
    return all(c == 1 << x for x, c in enumerate(A.cl))


# ---------------------------------------------------------------- partitions

@dataclass(frozen=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise InvalidSpace("empty block in partition")
            for x in b:
                if x in seen:
                    raise InvalidSpace(f"point {x} appears in two blocks")
                seen.add(x)
        if seen != set(range(len(seen))):
            raise InvalidSpace("partition does not cover 0..n-1")

    @classmethod
    def from_masks(cls, masks: Iterable[int]) -> Partition:
        return cls(tuple(tuple(bits(m)) for m in masks))

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self) -> list[int]:
        out = [0] * self.size
        for i, b in enumerate(self.blocks):
            for x in b:
                out[x] = i
        return out


def pi0(A: Space) -> Partition:
    return Partition.from_masks(component_masks(A))


# ---------------------------------------------------------------- maps

@dataclass(frozen=True)
class MapF:
    dom: Space
    cod: Space
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.dom.n:
            raise NotMonotone("value count does not match domain size")
        for v in self.values:
            if not 0 <= v < self.cod.n:
                raise NotMonotone(f"value {v} outside codomain")
        for x in range(self.dom.n):
            fx = self.cod.cl[self.values[x]]
            for y in bits(self.dom.cl[x]):
                if not (fx >> self.values[y]) & 1:
                    raise NotMonotone(f"{x} ⤳ {y} but images are not related")

    def __repr__(self):
        from .notation import print_map
        return f"MapF({print_map(self)!r})"

    def __call__(self, x: int) -> int:
        return self.values[x]

    @cached_property
    def image(self) -> int:
        return to_mask(self.values)

    def preimage(self, s: int) -> int:
        return to_mask(x for x, v in enumerate(self.values) if (s >> v) & 1)

    def fibre_mask(self, y: int) -> int:
        return to_mask(x for x, v in enumerate(self.values) if v == y)

    def then(self, g: MapF) -> MapF:
        """g ∘ self."""
        if g.dom != self.cod:
            raise InvalidSpace("maps are not composable")
        return MapF(self.dom, g.cod, tuple(g.values[v] for v in self.values))


def identity(A: Space) -> MapF:
    return MapF(A, A, tuple(range(A.n)))


def compose(g: MapF, f: MapF) -> MapF:
    return f.then(g)


def to_point(A: Space) -> MapF:
    return MapF(A, point(), (0,) * A.n)


def is_monotone(dom: Space, cod: Space, values: Sequence[int]) -> bool:
    return all(
        (cod.cl[values[x]] >> values[y]) & 1
        for x in range(dom.n) for y in bits(dom.cl[x])
    )


# ---------------------------------------------------------------- constructions

def subspace(A: Space, s: int) -> tuple[Space, MapF]:
    pts = list(bits(s))
    pos = {p: i for i, p in enumerate(pts)}
    cl = tuple(to_mask(pos[y] for y in bits(A.cl[p] & s)) for p in pts)
    labels = tuple(A.labels[p] for p in pts) if A.labels else None
    S = Space(cl, labels)
    return S, MapF(S, A, tuple(pts))


def fibre(f: MapF, y: int) -> Space:
    return subspace(f.dom, f.fibre_mask(y))[0]


def product(A: Space, B: Space) -> Space:
    if A.n * B.n > limits.product_points:
        raise UniverseTooLarge(f"product of {A.n} and {B.n} points exceeds cap {limits.product_points}")
    m = B.n
    cl = []
    for i in range(A.n):
        for j in range(m):
            row = 0
            bj = B.cl[j]
            for a in bits(A.cl[i]):
                row |= bj << (a * m)
            cl.append(row)
    return Space(tuple(cl))


def product_map(f: MapF, g: MapF) -> MapF:
    dom, cod = product(f.dom, g.dom), product(f.cod, g.cod)
    m = g.cod.n
    return MapF(dom, cod, tuple(f.values[i] * m + g.values[j]
                                for i in range(f.dom.n) for j in range(g.dom.n)))


def coproduct(A: Space, B: Space) -> Space:
    return Space(A.cl + tuple(c << A.n for c in B.cl))


def coproduct_inclusions(A: Space, B: Space) -> tuple[MapF, MapF]:
    S = coproduct(A, B)
    return (MapF(A, S, tuple(range(A.n))),
            MapF(B, S, tuple(range(A.n, A.n + B.n))))


def quotient(A: Space, P: Partition) -> tuple[Space, MapF]:
    if P.size != A.n:
        raise InvalidSpace("partition size does not match space")
    blk = P.block_of()
    cl = [1 << i for i in range(len(P.blocks))]
    for x in range(A.n):
        for y in bits(A.cl[x]):
            cl[blk[x]] |= 1 << blk[y]
    Q = Space(tuple(_close(cl)))
    return Q, MapF(A, Q, tuple(blk))


# ---------------------------------------------------------------- maps enumeration

def _check_map_cap(dom: Space, cod: Space):
    if cod.n ** dom.n > limits.map_count:
        raise UniverseTooLarge(
            f"Hom from {dom.n} to {cod.n} points: {cod.n}^{dom.n} exceeds cap {limits.map_count}")


def iter_monotone(dom: Space, cod: Space, domains: Sequence[int] | None = None,
                  fixed: dict[int, int] | None = None) -> Iterator[tuple[int, ...]]:
    """All monotone value tuples with values[x] in domains[x], lexicographically."""
    n = dom.n
    allowed = list(domains) if domains is not None else [cod.full] * n
    if fixed:
        for x, v in fixed.items():
            allowed[x] &= 1 << v
    # earlier points that must map below / above x
    above = [[p for p in range(x) if (dom.cl[p] >> x) & 1] for x in range(n)]
    below = [[p for p in range(x) if (dom.cl[x] >> p) & 1] for x in range(n)]
    ccl, cnb = cod.cl, cod.nb
    vals = [0] * n

    def rec(x):
        if x == n:
            yield tuple(vals)
            return
        m = allowed[x]
        for p in above[x]:
            m &= ccl[vals[p]]
        for p in below[x]:
            m &= cnb[vals[p]]
        for v in bits(m):
            vals[x] = v
            yield from rec(x + 1)

    return rec(0)


@lru_cache(maxsize=None)
def hom(dom: Space, cod: Space) -> tuple[tuple[int, ...], ...]:
    _check_map_cap(dom, cod)
    return tuple(iter_monotone(dom, cod))


def enumerate_maps(A: Space, B: Space) -> list[MapF]:
    return [MapF(A, B, v) for v in hom(A, B)]


# ---------------------------------------------------------------- canonical forms

def _invariants(A: Space) -> list[tuple]:
    base = [(bin(A.cl[x]).count("1"), bin(A.nb[x]).count("1")) for x in range(A.n)]
    # one refinement round: multiset of invariants above and below
    return [
        (base[x],
         tuple(sorted(base[y] for y in bits(A.cl[x]))),
         tuple(sorted(base[y] for y in bits(A.nb[x]))))
        for x in range(A.n)
    ]


def _orders(A: Space) -> Iterator[list[int]]:
    inv = _invariants(A)
    groups: dict[tuple, list[int]] = {}
    for x in range(A.n):
        groups.setdefault(inv[x], []).append(x)
    blocks = [groups[k] for k in sorted(groups)]
    for parts in itertools.product(*(itertools.permutations(b) for b in blocks)):
        yield [x for part in parts for x in part]


def _key(A: Space, order: Sequence[int]) -> int:
    key = 0
    for x in order:
        c = A.cl[x]
        for y in order:
            key = (key << 1) | ((c >> y) & 1)
    return key


def _reorder(A: Space, order: Sequence[int]) -> Space:
    pos = {p: i for i, p in enumerate(order)}
    return Space(tuple(to_mask(pos[y] for y in bits(A.cl[p])) for p in order))


def _best_orders(A: Space) -> tuple[int, list[list[int]]]:
    best, found = None, []
    for order in _orders(A):
        k = _key(A, order)
        if best is None or k < best:
            best, found = k, [order]
        elif k == best:
            found.append(order)
    return (best or 0), found


@lru_cache(maxsize=None)
def canonical_form(A: Space) -> Space:
    _, orders = _best_orders(A)
    return _reorder(A, orders[0]) if orders else A


def canonical_key(A: Space) -> tuple[int, int]:
    return (A.n, _best_orders(A)[0])


def canonical_pair(f: MapF) -> MapF:
    """A representative of f up to isomorphisms of domain and codomain."""
    _, dom_orders = _best_orders(f.dom)
    _, cod_orders = _best_orders(f.cod)
    dom_orders = dom_orders or [[]]
    cod_orders = cod_orders or [[]]
    best = None
    for co in cod_orders:
        cpos = {p: i for i, p in enumerate(co)}
        for do in dom_orders:
            vals = tuple(cpos[f.values[x]] for x in do)
            if best is None or vals < best[0]:
                best = (vals, do, co)
    vals, do, co = best
    return MapF(_reorder(f.dom, do), _reorder(f.cod, co), vals)


def is_isomorphic(A: Space, B: Space) -> bool:
    return A.n == B.n and canonical_form(A) == canonical_form(B)


def relabel(A: Space, perm: Sequence[int]) -> Space:
    """The space whose point perm[x] plays the role of old point x."""
    inv = [0] * A.n
    for x, p in enumerate(perm):
        inv[p] = x
    return _reorder(A, inv)


# ---------------------------------------------------------------- space enumeration

def _labelled(n: int) -> Iterator[Space]:
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    rel = [[1 if i == j else -1 for j in range(n)] for i in range(n)]

    def consistent(i, j):
        v = rel[i][j]
        for k in range(n):
            if v == 0:
                if rel[i][k] == 1 and rel[k][j] == 1:
                    return False
            else:
                if rel[j][k] == 1 and rel[i][k] == 0:
                    return False
                if rel[k][i] == 1 and rel[k][j] == 0:
                    return False
        return True

    def rec(t):
        if t == len(pairs):
            yield Space.from_matrix(rel)
            return
        i, j = pairs[t]
        for v in (0, 1):
            rel[i][j] = v
            if consistent(i, j):
                yield from rec(t + 1)
        rel[i][j] = -1

    yield from rec(0)


def _extensions(A: Space) -> Iterator[Space]:
    """All spaces obtained from A by adding one point (as the last point)."""
    n = A.n
    closed = closed_masks(A)
    opened = [A.full & ~s for s in closed]
    for C in closed:          # points in the closure of the new point
        for N in opened:      # points whose closure contains the new point
            if any(C & ~A.cl[x] for x in bits(N)):
                continue
            cl = [c | ((N >> x) & 1) << n for x, c in enumerate(A.cl)]
            cl.append(C | (1 << n))
            yield Space(tuple(cl))


@lru_cache(maxsize=None)
def _iso_classes(n: int) -> tuple[Space, ...]:
    if n == 0:
        return (empty(),)
    seen: dict[Space, tuple] = {}
    for A in _iso_classes(n - 1):
        for B in _extensions(A):
            c = canonical_form(B)
            if c not in seen:
                seen[c] = canonical_key(c)
    return tuple(sorted(seen, key=lambda s: seen[s]))


def enumerate_spaces(n: int, mode: str = "labelled") -> list[Space]:
    if mode == "labelled":
        if n > limits.labelled_max:
            raise UniverseTooLarge(f"labelled enumeration capped at {limits.labelled_max} points")
        return list(_labelled(n))
    if mode == "up_to_iso":
        if n > limits.iso_max:
            raise UniverseTooLarge(f"up-to-iso enumeration capped at {limits.iso_max} points")
        return list(_iso_classes(n))
    raise ValueError(f"unknown mode {mode!r}")


def canonical_spaces(max_n: int) -> list[Space]:
    return [A for n in range(max_n + 1) for A in enumerate_spaces(n, "up_to_iso")]


@lru_cache(maxsize=None)
def map_universe(max_n: int, discrete_only: bool = False) -> tuple[MapF, ...]:
    """Every map between canonical spaces of size <= max_n, in a fixed order."""
    spaces = [discrete(n) for n in range(max_n + 1)] if discrete_only else canonical_spaces(max_n)
    return tuple(MapF(A, B, v) for A in spaces for B in spaces for v in hom(A, B))
