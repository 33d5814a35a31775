"""Text syntax for finite spaces and maps.

    map    := space "-->" space
    space  := "{" [ chain { "," chain } ] "}"
    chain  := point { rel point }
    rel    := "->" | "<->" | "="
    point  := [A-Za-z0-9_]+

``a->b`` puts b in the closure of a, ``a<->b`` makes a and b indistinguishable,
``a=b`` names one point twice.  Whitespace is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import NotMonotone, ParseError
from .space import MapF, Space, _close, bits, is_monotone

_TOKEN = re.compile(r"\s*(-->|<->|->|=|\{|\}|,|[A-Za-z0-9_]+)")


def _tokens(text: str) -> list[tuple[str, int]]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


@dataclass
class SpaceExpr:
    """Chains as parsed: each chain alternates point names and relators."""
    chains: list[list[str]]

    def names(self) -> list[str]:
        seen: dict[str, None] = {}
        for ch in self.chains:
            for tok in ch[::2]:
                seen.setdefault(tok)
        return list(seen)


@dataclass
class MapExpr:
    domain: SpaceExpr
    codomain: SpaceExpr


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self):
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def expect(self, tok: str):
        if self.peek() != tok:
            got = self.peek()
            raise ParseError(f"expected {tok!r}, got {got!r}" if got else f"expected {tok!r}, got end of input",
                             self.text, self.pos())
        self.i += 1

    def name(self) -> str:
        t = self.peek()
        if t is None or not re.fullmatch(r"[A-Za-z0-9_]+", t):
            raise ParseError(f"expected point name, got {t!r}", self.text, self.pos())
        self.i += 1
        return t

    def space(self) -> SpaceExpr:
        self.expect("{")
        chains = []
        if self.peek() != "}":
            chains.append(self.chain())
            while self.peek() == ",":
                self.i += 1
                chains.append(self.chain())
        self.expect("}")
        return SpaceExpr(chains)

    def chain(self) -> list[str]:
        out = [self.name()]
        while self.peek() in ("->", "<->", "="):
            out.append(self.peek())
            self.i += 1
            out.append(self.name())
        return out

    def end(self):
        if self.i != len(self.toks):
            raise ParseError(f"trailing input {self.peek()!r}", self.text, self.pos())


def parse_space_expr(text: str) -> SpaceExpr:
    p = _Parser(text)
    e = p.space()
    p.end()
    return e


def parse_map_expr(text: str) -> MapExpr:
    p = _Parser(text)
    d = p.space()
    p.expect("-->")
    c = p.space()
    p.end()
    return MapExpr(d, c)


def _resolve(expr: SpaceExpr, extra: list[str] = ()) -> tuple[Space, dict[str, int]]:
    """Glue '=' names first, then add arrows between the glued classes."""
    names = expr.names()
    names += [x for x in extra if x not in names]
    parent = {x: x for x in names}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ch in expr.chains:
        for k in range(1, len(ch), 2):
            if ch[k] == "=":
                a, b = find(ch[k - 1]), find(ch[k + 1])
                if a != b:
                    # keep the earlier name as representative
                    if names.index(a) < names.index(b):
                        parent[b] = a
                    else:
                        parent[a] = b
    index: dict[str, int] = {}
    reps: list[str] = []
    for x in names:
        r = find(x)
        if r not in index:
            index[r] = len(reps)
            reps.append(r)
        index[x] = index[r]
    groups: dict[int, list[str]] = {}
    for x in names:
        groups.setdefault(index[x], []).append(x)
    labels = tuple("=".join(groups[i]) for i in range(len(reps)))
    cl = [1 << i for i in range(len(reps))]
    for ch in expr.chains:
        for k in range(1, len(ch), 2):
            a, b = index[ch[k - 1]], index[ch[k + 1]]
            if ch[k] in ("->", "<->"):
                cl[a] |= 1 << b
            if ch[k] == "<->":
                cl[b] |= 1 << a
    return Space(tuple(_close(cl)), labels), index


def parse_space(text: str) -> Space:
    return _resolve(parse_space_expr(text))[0]


def parse_map(text: str, strict: bool = True) -> MapF:
    """Parse ``dom --> cod``.

    Domain names missing from the codomain become isolated codomain points.
    With ``strict`` a domain relation whose image is not a codomain relation
    is an error; otherwise such image relations are added to the codomain.
    """
    e = parse_map_expr(text)
    dom, dindex = _resolve(e.domain)
    cod, cindex = _resolve(e.codomain, extra=e.domain.names())
    values = [None] * dom.n
    for name, i in dindex.items():
        v = cindex[name]
        if values[i] is not None and values[i] != v:
            raise ParseError(f"domain point {dom.labels[i]!r} has no single image in the codomain")
        values[i] = v
    if not is_monotone(dom, cod, values):
        if strict:
            raise NotMonotone(f"map {text.strip()!r} is not monotone; "
                              "list the image relations in the codomain")
        cl = list(cod.cl)
        for x in range(dom.n):
            for y in bits(dom.cl[x]):
                cl[values[x]] |= 1 << values[y]
        cod = Space(tuple(_close(cl)), cod.labels)
    return MapF(dom, cod, tuple(values))


# ---------------------------------------------------------------- printing

def _fresh_names(n: int) -> list[str]:
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    out = []
    for i in range(n):
        s, k = "", i
        while True:
            s = alphabet[k % 26] + s
            k = k // 26 - 1
            if k < 0:
                break
        out.append(s)
    return out


def _declarations(A: Space, names: list[str]) -> list[str]:
    """Transitive reduction: one '<->' chain per indistinguishability class, then cover arrows."""
    n = A.n
    rep = [0] * n
    classes: list[list[int]] = []
    for x in range(n):
        same = [y for y in range(x) if A.leq(x, y) and A.leq(y, x)]
        if same:
            rep[x] = rep[same[0]]
            classes[rep[x]].append(x)
        else:
            rep[x] = len(classes)
            classes.append([x])
    decls: list[str] = []
    mentioned = set()
    for cls in classes:
        if len(cls) > 1:
            decls.append("<->".join(names[x] for x in cls))
            mentioned.update(cls)
    k = len(classes)
    strictly = [[i != j and A.leq(classes[i][0], classes[j][0]) for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(k):
            if strictly[i][j] and not any(strictly[i][m] and strictly[m][j] for m in range(k)):
                decls.append(f"{names[classes[i][0]]}->{names[classes[j][0]]}")
                mentioned.update((classes[i][0], classes[j][0]))
    for x in range(n):
        if x not in mentioned:
            decls.append(names[x])
    return decls


def print_space(A: Space, names: list[str] | None = None) -> str:
    names = names or _fresh_names(A.n)
    return "{" + ",".join(_declarations(A, names)) + "}"


def print_map(f: MapF) -> str:
    """Codomain points are named a, b, ...; domain points are named after their images."""
    cnames = _fresh_names(f.cod.n)
    counts: dict[int, int] = {}
    dnames = []
    for v in f.values:
        k = counts.get(v, 0)
        counts[v] = k + 1
        dnames.append(cnames[v] if k == 0 else f"{cnames[v]}{k}")
    cod_decls = _declarations(f.cod, cnames)
    # glued domain points must be equated in the codomain text
    for v, k in sorted(counts.items()):
        if k > 1:
            cod_decls.append("=".join([cnames[v]] + [f"{cnames[v]}{i}" for i in range(1, k)]))
    return "{" + ",".join(_declarations(f.dom, dnames)) + "} --> {" + ",".join(cod_decls) + "}"
