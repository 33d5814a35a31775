"""Membership predicates for named classes of maps between finite spaces.

Each entry of ``CATALOGUE`` pairs a ClassId with a predicate on a single map
and a short characterization.  Where a class is known to be an orthogonal of
explicit generators, the characterization names them; the test-suite checks
the predicate against the lifting engine.

Two classes are only bounded from both sides, so their predicates are
three-valued: RLLR_PARTIAL and RRRRL_PARTIAL.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .errors import PowerTooLarge
from .lifting import is_retract_of_power
from .space import (MapF, Space, antidiscrete, bits, closure_mask, component_masks,
                    indist_masks, is_closed_mask, is_poset, iter_monotone, map_universe,
                    product, sierpinski, to_mask)


class Tri(enum.Enum):
    IN = "IN"
    OUT = "OUT"
    UNKNOWN = "UNKNOWN"

    @classmethod
    def of(cls, b: bool) -> Tri:
        return cls.IN if b else cls.OUT


class ClassId(str, enum.Enum):
    SURJECTIVE = "SURJECTIVE"
    INJECTIVE = "INJECTIVE"
    DOMAIN_EMPTY_OR_ISO = "DOMAIN_EMPTY_OR_ISO"
    DOMAIN_NONEMPTY = "DOMAIN_NONEMPTY"
    ISO = "ISO"
    ALL = "ALL"
    INDUCED = "INDUCED"
    SUBSPACE = "SUBSPACE"
    CLOSED_SUBSPACE = "CLOSED_SUBSPACE"
    DENSE_IMAGE = "DENSE_IMAGE"
    QUOTIENT = "QUOTIENT"
    QUOTIENT_PLUS_DISCRETE = "QUOTIENT_PLUS_DISCRETE"
    SURJ_INDUCED = "SURJ_INDUCED"
    T1_FIBRES = "T1_FIBRES"
    T0_FIBRES = "T0_FIBRES"
    PI0_INJECTIVE = "PI0_INJECTIVE"
    PI0_SURJECTIVE_CLOPEN = "PI0_SURJECTIVE_CLOPEN"
    SURJ_OR_EMPTY = "SURJ_OR_EMPTY"
    HAS_SECTION = "HAS_SECTION"
    GENERIC_SECTION = "GENERIC_SECTION"
    DISJOINT_UNION_INCL = "DISJOINT_UNION_INCL"
    DISCRETE_EXTENSION = "DISCRETE_EXTENSION"
    SUBSPACE_PLUS_DISCRETE = "SUBSPACE_PLUS_DISCRETE"
    INDISTINGUISHABILITY_COMPONENTS = "INDISTINGUISHABILITY_COMPONENTS"
    RRR_MEMBER = "RRR_MEMBER"
    RLLR_PARTIAL = "RLLR_PARTIAL"
    RRRRL_PARTIAL = "RRRRL_PARTIAL"
    COMPLETE_LATTICE = "COMPLETE_LATTICE"

    def __str__(self):
        return self.value


PARTIAL = frozenset({ClassId.RLLR_PARTIAL, ClassId.RRRRL_PARTIAL})


# ---------------------------------------------------------------- building blocks

def is_surjective(f: MapF) -> bool:
    return f.image == f.cod.full


def is_injective(f: MapF) -> bool:
    return len(set(f.values)) == f.dom.n


def is_induced(f: MapF) -> bool:
    # the preimage topology is Alexandrov with specialisation x ⤳ y iff f(x) ⤳ f(y)
    v, D, C = f.values, f.dom, f.cod
    return all(D.leq(x, y) == C.leq(v[x], v[y]) for x in range(D.n) for y in range(D.n))


def is_iso(f: MapF) -> bool:
    return f.dom.n == f.cod.n and is_injective(f) and is_induced(f)


def is_subspace(f: MapF) -> bool:
    return is_injective(f) and is_induced(f)


def is_quotient(f: MapF) -> bool:
    return is_surjective(f) and _image_quotient(f)


def _image_quotient(f: MapF) -> bool:
    """The order on Im f is generated by the images of relations in the domain."""
    C = f.cod
    img = f.image
    reach = [1 << y if (img >> y) & 1 else 0 for y in range(C.n)]
    for x in range(f.dom.n):
        for y in bits(f.dom.cl[x]):
            reach[f.values[x]] |= 1 << f.values[y]
    changed = True
    while changed:
        changed = False
        for y in bits(img):
            r = reach[y]
            for z in bits(r):
                r |= reach[z]
            if r != reach[y]:
                reach[y], changed = r, True
    return all(reach[y] == C.cl[y] & img for y in bits(img))


def _splits_off(f: MapF) -> bool:
    """No relation between Im f and its complement, in either direction."""
    C, img = f.cod, f.image
    rest = C.full & ~img
    return all(C.cl[y] & rest == 0 for y in bits(img)) and all(C.cl[y] & img == 0 for y in bits(rest))


def _complement_discrete(f: MapF) -> bool:
    C = f.cod
    return all(C.cl[y] == 1 << y for y in bits(C.full & ~f.image))


def _fibres(f: MapF) -> list[int]:
    out = [0] * f.cod.n
    for x, v in enumerate(f.values):
        out[v] |= 1 << x
    return out


def find_section(f: MapF, generic: bool = False) -> tuple[int, ...] | None:
    fib = _fibres(f)
    if generic:
        X = f.dom
        fib = [to_mask(x for x in bits(F) if F & ~X.cl[x] == 0) for F in fib]
    if any(m == 0 for m in fib):
        return None
    return next(iter_monotone(f.cod, f.dom, fib), None)


def rrr_obstruction(f: MapF):
    """A point y and a set S violating the interpolation condition, or None.

    f is in the class iff for every y and every S ⊆ {s : f(s) ⤳ y}, putting
    T = {t : y ⤳ f(t) and s ⤳ t for all s in S}, some x over y has s ⤳ x ⤳ t
    for all s in S and t in T.  (T is taken maximal: a larger T only makes the
    condition harder.)
    """
    X, Y, v = f.dom, f.cod, f.values
    fib = _fibres(f)
    for y in range(Y.n):
        lower = [s for s in range(X.n) if Y.leq(v[s], y)]
        upper = to_mask(t for t in range(X.n) if Y.leq(y, v[t]))
        for pick in range(1 << len(lower)):
            above_S = X.full
            for i, s in enumerate(lower):
                if (pick >> i) & 1:
                    above_S &= X.cl[s]
            cand = fib[y] & above_S
            for t in bits(upper & above_S):
                cand &= X.nb[t]
            if not cand:
                return y, [s for i, s in enumerate(lower) if (pick >> i) & 1]
    return None


_SA = None


def sierpinski_times_antidiscrete() -> Space:
    global _SA
    if _SA is None:
        _SA = product(sierpinski(), antidiscrete(2))
    return _SA


def is_complete_lattice(A: Space) -> bool:
    """Top, bottom and pairwise meets and joins, for posets; the retract test otherwise.

    The order is read with x below y when y ⤳ x, so the top is the generic point.
    """
    if not is_poset(A):
        return is_retract_of_power(A, sierpinski_times_antidiscrete())
    n = A.n
    if n == 0:
        return False
    # join of x, y: least element above both, i.e. a z with z ⤳ x, z ⤳ y, maximal in ⤳ among those
    for x in range(n):
        for y in range(x + 1, n):
            ups = A.nb[x] & A.nb[y]
            downs = A.cl[x] & A.cl[y]
            if not any(A.nb[z] & ups == ups for z in bits(ups)):
                return False
            if not any(A.cl[z] & downs == downs for z in bits(downs)):
                return False
    return (any(A.cl[z] == A.full for z in range(n))
            and any(A.nb[z] == A.full for z in range(n)))


# ---------------------------------------------------------------- predicates

def _domain_empty_or_iso(f):
    return f.dom.n == 0 or is_iso(f)


def _domain_nonempty(f):
    return f.dom.n > 0 or f.cod.n == 0


def _closed_subspace(f):
    return is_subspace(f) and is_closed_mask(f.cod, f.image)


def _dense(f):
    return closure_mask(f.cod, f.image) == f.cod.full


def _qpd(f):
    return _splits_off(f) and _complement_discrete(f) and _image_quotient(f)


def _surj_induced(f):
    return is_surjective(f) and is_induced(f)


def _t1_fibres(f):
    X, v = f.dom, f.values
    return all(v[y] != v[x] for x in range(X.n) for y in bits(X.cl[x] & ~(1 << x)))


def _t0_fibres(f):
    X, v = f.dom, f.values
    return all(v[y] != v[x] for x in range(X.n) for y in bits(X.cl[x] & X.nb[x] & ~(1 << x)))


def _component_image(f, comp: int) -> int:
    return to_mask(f.values[x] for x in bits(comp))


def _pi0_injective(f):
    Ycomps = component_masks(f.cod)
    seen = set()
    for c in component_masks(f.dom):
        x = (c & -c).bit_length() - 1
        k = next(i for i, d in enumerate(Ycomps) if (d >> f.values[x]) & 1)
        if k in seen:
            return False
        seen.add(k)
    return True


def _pi0_surjective(f):
    return all(c & f.image for c in component_masks(f.cod))


def _surj_or_empty(f):
    return is_surjective(f) or f.dom.n == 0


def _has_section(f):
    return find_section(f) is not None


def _generic_section(f):
    return find_section(f, generic=True) is not None


def _disjoint_union_incl(f):
    return is_subspace(f) and _splits_off(f)


def _discrete_extension(f):
    return _disjoint_union_incl(f) and _complement_discrete(f)


def _subspace_plus_discrete(f):
    return is_induced(f) and _splits_off(f) and _complement_discrete(f)


def _indist_components(f):
    Y = f.cod
    for c in indist_masks(f.dom):
        x = (c & -c).bit_length() - 1
        if _component_image(f, c) != Y.cl[f.values[x]] & Y.nb[f.values[x]]:
            return False
    return True


def _rrr(f):
    return rrr_obstruction(f) is None


def _rllr(f):
    if not _closed_subspace(f):
        return Tri.OUT
    hull = sum(c for c in component_masks(f.cod) if c & f.image)
    return Tri.IN if hull == f.image else Tri.UNKNOWN


def _rrrrl(f):
    if not is_quotient(f):
        return Tri.OUT
    X = f.dom
    for F in _fibres(f):
        sub = [x for x in bits(F)]
        # connected within the fibre?
        reach = 1 << sub[0]
        grown = True
        while grown:
            grown = False
            for x in bits(reach):
                nxt = reach | ((X.cl[x] | X.nb[x]) & F)
                if nxt != reach:
                    reach, grown = nxt, True
        if reach != F:
            return Tri.UNKNOWN
    return Tri.IN


def _complete_lattice(f):
    if f.cod.n != 1:
        return False
    try:
        return is_complete_lattice(f.dom)
    except PowerTooLarge:
        return _rrr(f)


@dataclass(frozen=True)
class ClassSpec:
    id: ClassId
    description: str
    characterization: str
    predicate: Callable[[MapF], bool | Tri]

    def member(self, f: MapF) -> Tri:
        r = self.predicate(f)
        return r if isinstance(r, Tri) else Tri.of(r)


_SPECS = [
    (ClassId.SURJECTIVE, "surjective", "{} --> {a} on the left", is_surjective),
    (ClassId.INJECTIVE, "injective", "{a,b} --> {a=b} on the left; {a<->b} --> {a=b} on the right",
     is_injective),
    (ClassId.DOMAIN_EMPTY_OR_ISO, "empty domain, or an isomorphism",
     "({} --> {a})^lr", _domain_empty_or_iso),
    (ClassId.DOMAIN_NONEMPTY, "nonempty domain, or empty domain and codomain",
     "{} --> {a} on the right", _domain_nonempty),
    (ClassId.ISO, "isomorphism", "({} --> {a})^ll", is_iso),
    (ClassId.ALL, "every map", "({} --> {a})^lll", lambda f: True),
    (ClassId.INDUCED, "domain carries the preimage topology", "{a->b} --> {a=b} on the right",
     is_induced),
    (ClassId.SUBSPACE, "injective with induced topology",
     "{a->b} --> {a=b} and {a<->b} --> {a=b} on the right", is_subspace),
    (ClassId.CLOSED_SUBSPACE, "subspace with closed image",
     "{x<->y<->z->c} --> {x=y<->z=c} on the right", _closed_subspace),
    (ClassId.DENSE_IMAGE, "image is dense", "{c} --> {o->c} on the right", _dense),
    (ClassId.QUOTIENT, "surjective, codomain carries the quotient topology",
     "{a} --> {a<->b} and {a->b} --> {a<->b} on the right", is_quotient),
    (ClassId.QUOTIENT_PLUS_DISCRETE, "quotient onto the image, image split off a discrete rest",
     "{a->b} --> {a<->b} on the right", _qpd),
    (ClassId.SURJ_INDUCED, "surjective with induced topology",
     "{a} --> {a<->b} and {a->b} --> {a=b} on the right", _surj_induced),
    (ClassId.T1_FIBRES, "every fibre is T1", "{a->b} --> {a=b} on the left", _t1_fibres),
    (ClassId.T0_FIBRES, "every fibre is T0", "{a<->b} --> {a=b} on the left", _t0_fibres),
    (ClassId.PI0_INJECTIVE, "injective on connected components", "{a,b} --> {a=b} on the right",
     _pi0_injective),
    (ClassId.PI0_SURJECTIVE_CLOPEN, "image meets every nonempty clopen set",
     "{a} --> {a,b} on the right", _pi0_surjective),
    (ClassId.SURJ_OR_EMPTY, "surjective, or empty domain", "{a} --> {a,b} on the left",
     _surj_or_empty),
    (ClassId.HAS_SECTION, "has a continuous section", "({} --> {a})^lrr",
     _has_section),
    (ClassId.GENERIC_SECTION, "has a section through a generic point of each fibre",
     "({} --> {a})^rllrr", _generic_section),
    (ClassId.DISJOINT_UNION_INCL, "inclusion of a summand A --> A ⊔ B",
     "({} --> {a})^lrrl", _disjoint_union_incl),
    (ClassId.DISCRETE_EXTENSION, "inclusion A --> A ⊔ D with D discrete",
     "({} --> {a})^rl", _discrete_extension),
    (ClassId.SUBSPACE_PLUS_DISCRETE, "induced onto the image, image split off a discrete rest",
     "{u<->v->c<->d} --> {u<->v=c<->d} on the right", _subspace_plus_discrete),
    (ClassId.INDISTINGUISHABILITY_COMPONENTS,
     "each class of indistinguishable points maps onto such a class", "{a} --> {a<->b} on the left",
     _indist_components),
    (ClassId.RRR_MEMBER, "interpolation S ⤳ x ⤳ T solvable in each fibre",
     "({} --> {a})^rrr", _rrr),
    (ClassId.RLLR_PARTIAL, "between {closed subspaces equal to their clopen hull} and {closed subspaces}",
     "({} --> {a})^rllr", _rllr),
    (ClassId.RRRRL_PARTIAL, "between {quotients with connected fibres} and {quotients}",
     "({} --> {a})^rrrrl", _rrrrl),
    (ClassId.COMPLETE_LATTICE, "map to a point from a complete lattice (or retract of a power)",
     "retract of a power of {a->b} x {a<->b}", _complete_lattice),
]

CATALOGUE: dict[ClassId, ClassSpec] = {cid: ClassSpec(cid, d, c, p) for cid, d, c, p in _SPECS}


def is_in_class(c: ClassId | str, f: MapF) -> Tri:
    return CATALOGUE[ClassId(c)].member(f)


def classify(f: MapF) -> dict[ClassId, Tri]:
    return {cid: spec.member(f) for cid, spec in CATALOGUE.items()}


@dataclass
class Comparison:
    equal: bool
    witness: MapF | None
    unknown: int


def class_equal_on_universe(c1: ClassId | str, c2: ClassId | str, n: int) -> Comparison:
    unknown, witness = 0, None
    for f in map_universe(n):
        a, b = is_in_class(c1, f), is_in_class(c2, f)
        if Tri.UNKNOWN in (a, b):
            unknown += 1
        elif a != b and witness is None:
            witness = f
    return Comparison(witness is None, witness, unknown)
