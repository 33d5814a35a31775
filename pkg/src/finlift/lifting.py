"""Deciding the lifting property f ⋌ g, and retracts.

For f: A → B and g: C → D, f ⋌ g holds iff every commuting square

    A --top--> C
    |f         |g
    B --bot--> D

has a diagonal d: B → C with d∘f = top and g∘d = bot.  Squares are scanned
with ``top`` outermost and ``bot`` innermost, both in lexicographic order, so
the reported failing square is always the first one in that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PowerTooLarge, UniverseTooLarge
from .limits import limits
from .space import MapF, Space, bits, closed_masks, hom, iter_monotone, open_masks, to_point


@dataclass(frozen=True)
class Square:
    f: MapF
    g: MapF
    top: MapF
    bottom: MapF

    def commutes(self) -> bool:
        return self.top.then(self.g) == self.f.then(self.bottom)


class _AllLift:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ALL_LIFT"

    def __bool__(self):
        return False


ALL_LIFT = _AllLift()


def _fibres(g: MapF) -> list[int]:
    out = [0] * g.cod.n
    for x, v in enumerate(g.values):
        out[v] |= 1 << x
    return out


def _find_diagonal(B: Space, C: Space, domains: list[int]) -> tuple[int, ...] | None:
    if any(m == 0 for m in domains):
        return None
    return next(iter_monotone(B, C, domains), None)


def lift_witness(f: MapF, g: MapF) -> Square | _AllLift:
    A, B, C, D = f.dom, f.cod, g.dom, g.cod
    tops = hom(A, C)
    if not tops:
        return ALL_LIFT
    n_bot = len(hom(B, D))
    if len(tops) * n_bot > limits.square_count:
        raise UniverseTooLarge(
            f"{len(tops)} x {n_bot} candidate squares (Hom({A.n},{C.n}) x Hom({B.n},{D.n})) "
            f"exceed cap {limits.square_count}")
    gfib = _fibres(g)
    fv, gv = f.values, g.values
    for t in tops:
        # bottom is forced on the image of f
        bfix = [D.full] * B.n
        dfix = [C.full] * B.n
        ok = True
        for a in range(A.n):
            y = fv[a]
            bfix[y] &= 1 << gv[t[a]]
            dfix[y] &= 1 << t[a]
            if not bfix[y]:
                ok = False
                break
        if not ok:
            continue
        for b in iter_monotone(B, D, bfix):
            dom = [dfix[y] & gfib[b[y]] for y in range(B.n)]
            if _find_diagonal(B, C, dom) is None:
                return Square(f, g, MapF(A, C, t), MapF(B, D, b))
    return ALL_LIFT


def lifts(f: MapF, g: MapF) -> bool:
    return lift_witness(f, g) is ALL_LIFT


def lifts_naive(f: MapF, g: MapF) -> bool:
    """Reference implementation: every function tried, no pruning."""
    A, B, C, D = f.dom, f.cod, g.dom, g.cod

    def monotone(X, Y, vals):
        return all(not X.leq(x, y) or Y.leq(vals[x], vals[y])
                   for x in range(X.n) for y in range(X.n))

    tops = [t for t in itertools.product(range(C.n), repeat=A.n) if monotone(A, C, t)]
    bots = [b for b in itertools.product(range(D.n), repeat=B.n) if monotone(B, D, b)]
    diags = [d for d in itertools.product(range(C.n), repeat=B.n) if monotone(B, C, d)]
    for t in tops:
        for b in bots:
            if any(g.values[t[a]] != b[f.values[a]] for a in range(A.n)):
                continue
            if not any(all(d[f.values[a]] == t[a] for a in range(A.n))
                       and all(g.values[d[y]] == b[y] for y in range(B.n))
                       for d in diags):
                return False
    return True


def orthogonal_filter(side: str, generators: Sequence[MapF], universe: Iterable[MapF]) -> list[MapF]:
    if side == "l":
        return [u for u in universe if all(lifts(u, p) for p in generators)]
    if side == "r":
        return [u for u in universe if all(lifts(p, u) for p in generators)]
    raise ValueError(f"side must be 'l' or 'r', not {side!r}")


# ---------------------------------------------------------------- retracts of maps

def _is_identity(vals: Sequence[int]) -> bool:
    return all(v == i for i, v in enumerate(vals))


def retraction_of(f: MapF, g: MapF):
    """Maps (i_dom, i_cod, r_dom, r_cod) exhibiting f as a retract of g, or None."""
    A, B, C, D = f.dom, f.cod, g.dom, g.cod
    for i0 in hom(A, C):
        if len(set(i0)) != A.n:
            continue
        r0dom = [A.full] * C.n
        for a in range(A.n):
            r0dom[i0[a]] = 1 << a
        r0s = list(iter_monotone(C, A, r0dom))
        if not r0s:
            continue
        i1dom = [D.full] * B.n
        bad = False
        for a in range(A.n):
            y = f.values[a]
            i1dom[y] &= 1 << g.values[i0[a]]
            bad = bad or not i1dom[y]
        if bad:
            continue
        for i1 in iter_monotone(B, D, i1dom):
            if len(set(i1)) != B.n:
                continue
            for r0 in r0s:
                r1dom = [B.full] * D.n
                for b in range(B.n):
                    r1dom[i1[b]] &= 1 << b
                for c in range(C.n):
                    r1dom[g.values[c]] &= 1 << f.values[r0[c]]
                if any(m == 0 for m in r1dom):
                    continue
                r1 = next(iter_monotone(D, B, r1dom), None)
                if r1 is not None:
                    return (MapF(A, C, i0), MapF(B, D, i1), MapF(C, A, r0), MapF(D, B, r1))
    return None


def is_retract_of(f: MapF, g: MapF) -> bool:
    return retraction_of(f, g) is not None


# ---------------------------------------------------------------- retracts of powers

def _solve(n: int, edges: Sequence[tuple[int, int]], X: Space, domains: list[int]) -> list[int] | None:
    """A map v from points 0..n-1 to X, v[p] in domains[p], with v[p] ⤳ v[q] for each edge (p, q).

    Arc consistency on the edges, then smallest-domain-first branching.
    """
    out_e: list[list[int]] = [[] for _ in range(n)]
    in_e: list[list[int]] = [[] for _ in range(n)]
    for p, q in edges:
        out_e[p].append(q)
        in_e[q].append(p)
    cl, nb = X.cl, X.nb
    upc = {}
    dnc = {}

    def up(m):
        r = upc.get(m)
        if r is None:
            r = 0
            for v in bits(m):
                r |= cl[v]
            upc[m] = r
        return r

    def down(m):
        r = dnc.get(m)
        if r is None:
            r = 0
            for v in bits(m):
                r |= nb[v]
            dnc[m] = r
        return r

    def propagate(dom, work):
        while work:
            p = work.pop()
            m = dom[p]
            if not m:
                return False
            u, d = up(m), down(m)
            for q in out_e[p]:
                nq = dom[q] & u
                if nq != dom[q]:
                    if not nq:
                        return False
                    dom[q] = nq
                    work.add(q)
            for q in in_e[p]:
                nq = dom[q] & d
                if nq != dom[q]:
                    if not nq:
                        return False
                    dom[q] = nq
                    work.add(q)
        return True

    def rec(dom):
        best, size = -1, None
        for p in range(n):
            c = bin(dom[p]).count("1")
            if c > 1 and (size is None or c < size):
                best, size = p, c
                if c == 2:
                    break
        if best < 0:
            return [m.bit_length() - 1 for m in dom]
        for v in bits(dom[best]):
            nd = list(dom)
            nd[best] = 1 << v
            if propagate(nd, {best}):
                r = rec(nd)
                if r is not None:
                    return r
        return None

    dom = list(domains)
    if n and not propagate(dom, set(range(n))):
        return None
    if not n:
        return []
    return rec(dom)


def _power_edges(A: Space, k: int) -> list[tuple[int, int]]:
    m = A.n
    edges = []
    for idx in range(m ** k):
        digits = []
        r = idx
        for _ in range(k):
            digits.append(r % m)
            r //= m
        # digits[i] is coordinate k-1-i
        for i, a in enumerate(digits):
            w = m ** i
            for b in bits(A.cl[a] & ~(1 << a)):
                edges.append((idx, idx + (b - a) * w))
    return edges


def _ev(X: Space, A: Space, maps: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for x in range(X.n):
        idx = 0
        for h in maps:
            idx = idx * A.n + h[x]
        out.append(idx)
    return out


def _is_embedding(X: Space, A: Space, maps: Sequence[Sequence[int]]) -> bool:
    return all(X.leq(x, y) == all(A.leq(h[x], h[y]) for h in maps)
               for x in range(X.n) for y in range(X.n))


def _retracts_onto(X: Space, A: Space, maps: Sequence[Sequence[int]]) -> bool:
    k = len(maps)
    N = A.n ** k
    ev = _ev(X, A, maps)
    domains = [X.full] * N
    for x, p in enumerate(ev):
        if domains[p] != X.full and domains[p] != 1 << x:
            return False       # ev not injective
        domains[p] = 1 << x
    return _solve(N, _power_edges(A, k), X, domains) is not None


def one_point_extensions(X: Space):
    """Inclusions j: X → X ∪ {p}, one per admissible placement of the new point p."""
    n = X.n
    for C in closed_masks(X):
        for N in open_masks(X):
            if any(C & ~X.cl[x] for x in bits(N)):
                continue
            cl = [c | ((N >> x) & 1) << n for x, c in enumerate(X.cl)]
            cl.append(C | (1 << n))
            Y = Space(tuple(cl))
            yield MapF(X, Y, tuple(range(n)))


def power_obstruction(X: Space, A: Space) -> MapF | None:
    """An inclusion j with j ⋌ (A → •) but not j ⋌ (X → •), if one exists.

    Such a j certifies that X is not a retract of any power of A, because the
    spaces Z with j ⋌ (Z → •) are closed under products and retracts.
    """
    pa, px = to_point(A), to_point(X)
    for j in one_point_extensions(X):
        if lifts(j, pa) and not lifts(j, px):
            return j
    return None


def is_retract_of_power(X: Space, A: Space) -> bool:
    """Whether X → A^Hom(X,A), x ↦ (h(x))_h, has a monotone retraction.

    Decided by certificates: a retraction found for a sub-family of Hom(X, A)
    composes with a projection to give one for the whole family; a
    one-point-extension obstruction rules it out.  PowerTooLarge is raised when
    neither is found within ``limits.power_points``.
    """
    H = hom(X, A)
    if not _is_embedding(X, A, H):
        return False
    cap = limits.power_points
    chosen: list[tuple[int, ...]] = []
    for h in H:
        if _separates(X, A, chosen, h):
            chosen.append(h)
    rest = [h for h in H if h not in chosen]
    checked = False
    while True:
        if A.n ** len(chosen) <= cap:
            if _retracts_onto(X, A, chosen):
                return True
            if not rest:
                return False       # the full evaluation map has no retraction
        if not checked:
            checked = True
            if power_obstruction(X, A) is not None:
                return False
        if not rest or A.n ** (len(chosen) + 1) > cap:
            raise PowerTooLarge(
                f"{A.n}^{len(chosen) + 1} points exceed power cap {cap} and no obstruction was found")
        chosen.append(rest.pop(0))


def _separates(X: Space, A: Space, chosen, h) -> bool:
    """Whether h splits a pair that the family ``chosen`` identifies or wrongly orders."""
    for x in range(X.n):
        for y in range(X.n):
            if x == y or not all(A.leq(g[x], g[y]) for g in chosen):
                continue
            if not A.leq(h[x], h[y]):
                return True
            if all(g[x] == g[y] for g in chosen) and h[x] != h[y]:
                return True
    return False
