"""finlift command line.

Exit codes: 0 true/pass, 1 false, 2 usage or parse error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import orbit
from .classes import PARTIAL, Tri, classify
from .errors import FinliftError, ParseError
from .lifting import ALL_LIFT, lift_witness
from .limits import limits
from .notation import parse_map, parse_space, print_map, print_space
from .space import canonical_form, enumerate_spaces, map_universe

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3


def _emit(obj, as_json: bool, text: str):
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


def _texts(args_texts: list[str], count: int) -> list[str]:
    """Map texts from the command line, topped up from stdin one per line."""
    texts = list(args_texts or [])
    if len(texts) < count:
        lines = [ln.strip() for ln in sys.stdin.read().splitlines() if ln.strip()]
        texts += lines[:count - len(texts)]
    if len(texts) != count:
        raise ParseError(f"expected {count} map text(s), got {len(texts)}")
    return texts


def _node(word: str) -> str:
    return "" if word in ("root", "''", '""', "-") else word


def _square_text(sq) -> dict:
    return {"top": print_map(sq.top), "bottom": print_map(sq.bottom)}


# ---------------------------------------------------------------- commands

def cmd_parse(args) -> int:
    (text,) = _texts(args.text, 1)
    if "-->" in text:
        f = parse_map(text, strict=not args.lenient)
        out = {"kind": "map", "dom_points": f.dom.n, "cod_points": f.cod.n,
               "values": list(f.values), "text": print_map(f)}
    else:
        A = parse_space(text)
        out = {"kind": "space", "points": A.n, "text": print_space(A),
               "canonical": print_space(canonical_form(A))}
    _emit(out, args.json, out["text"])
    return EXIT_TRUE


def cmd_lift(args) -> int:
    ftext, gtext = _texts(args.maps, 2)
    f, g = parse_map(ftext), parse_map(gtext)
    sq = lift_witness(f, g)
    ok = sq is ALL_LIFT
    out = {"f": print_map(f), "g": print_map(g), "lifts": ok}
    text = "true" if ok else "false"
    if not ok and args.witness:
        out["square"] = _square_text(sq)
        text += f"\n  top:    {out['square']['top']}\n  bottom: {out['square']['bottom']}"
    _emit(out, args.json, text)
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_classify(args) -> int:
    (text,) = _texts(args.map, 1)
    f = parse_map(text)
    member = classify(f)
    nodes = [w or "root" for w in orbit.orbit_bfs().vertices if orbit.node_member(w, f) == Tri.IN]
    out = {"map": print_map(f), "classes": {str(c): t.value for c, t in member.items()}, "nodes": nodes}
    lines = [f"{c}: {t.value}" + (" (partial class)" if c in PARTIAL else "") for c, t in member.items()]
    lines.append("orbit nodes: " + (", ".join(nodes) or "none"))
    _emit(out, args.json, "\n".join(lines))
    return EXIT_TRUE


def cmd_normalize(args) -> int:
    word = args.word
    nf = orbit.normalize(word)
    out = {"word": word, "normal_form": nf, "class": str(orbit.class_of(nf))}
    _emit(out, args.json, nf or "root")
    return EXIT_TRUE


def _parse_edge(spec: str) -> tuple[str, str]:
    node, sep, letter = spec.rpartition(":")
    if not sep or letter not in ("l", "r"):
        raise ParseError(f"edge must look like NODE:l or NODE:r, got {spec!r}")
    node = _node(node)
    if (node, letter) not in orbit.edge_table():
        raise ParseError(f"no edge {spec!r} in the orbit graph")
    return node, letter


def cmd_verify(args) -> int:
    timing = not args.no_timing
    if args.target == "all":
        reports = orbit.verify_all(args.max_size, args.witness_size, args.threads, timing)
    elif args.target == "sets":
        reports = [orbit.sets_mode_verify(args.max_size, timing)]
    else:
        node, letter = _parse_edge(args.target)
        reports = [orbit.verify_edge(node, letter, args.max_size, args.witness_size, timing)]
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True))
    else:
        for r in reports:
            ms = "" if r.millis is None else f" {r.millis} ms"
            status = "ok" if r.ok else "FAIL"
            print(f"{status:4} {r.subject}: {r.passed}/{r.checked} passed, {r.failed} failed, "
                  f"{r.unknown_skipped} unknown{ms}")
            for w in r.witnesses[:5]:
                print(f"     {w}")
    return EXIT_TRUE if all(r.ok for r in reports) else EXIT_VERIFY


def cmd_enumerate(args) -> int:
    if args.what == "spaces":
        mode = "labelled" if args.labelled else "up_to_iso"
        items = [print_space(A) for A in enumerate_spaces(args.n, mode)]
    else:
        items = [print_map(f) for f in map_universe(args.n)]
    out = {"what": args.what, "n": args.n, "labelled": args.labelled, "count": len(items)}
    if args.list:
        out["items"] = items
    text = str(len(items)) if not args.list else "\n".join(items + [f"count {len(items)}"])
    _emit(out, args.json, text)
    return EXIT_TRUE


def cmd_counterexample(args) -> int:
    (text,) = _texts(args.map, 1)
    f = parse_map(text)
    node = _node(args.node)
    m = orbit.node_member(node, f)
    found = orbit.find_counterexample(f, node, args.n)
    out = {"map": print_map(f), "node": node or "root", "membership": m.value, "witness": None}
    if found is not None:
        g, sq = found
        out["witness"] = {"against": print_map(g), **_square_text(sq)}
        text = f"against {out['witness']['against']}\n  top:    {out['witness']['top']}\n" \
               f"  bottom: {out['witness']['bottom']}"
    else:
        text = f"no witness ({m.value})"
    _emit(out, args.json, text)
    return EXIT_TRUE if found is not None else EXIT_FALSE


def cmd_export_graph(args) -> int:
    g = orbit.orbit_bfs()
    if args.format == "dot":
        sys.stdout.write(g.to_dot())
    else:
        print(json.dumps(g.to_json(), indent=2, sort_keys=True))
    return EXIT_TRUE


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finlift", description="Lifting properties of maps of finite spaces.")
    p.add_argument("--map-cap", type=int, default=limits.map_count, help="cap on |Hom(A,B)| (default %(default)s)")
    p.add_argument("--square-cap", type=int, default=limits.square_count,
                   help="cap on candidate squares per lifting query (default %(default)s)")
    p.add_argument("--power-cap", type=int, default=limits.power_points,
                   help="cap on points of a power A^k (default %(default)s)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", help="parse a space or map and print it back")
    s.add_argument("text", nargs="*")
    s.add_argument("--lenient", action="store_true", help="add missing image relations to the codomain")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("lift", help="decide f ⋌ g")
    s.add_argument("maps", nargs="*", metavar="MAP")
    s.add_argument("--witness", action="store_true", help="print the first failing square")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("classify", help="membership of a map in every class")
    s.add_argument("map", nargs="*")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("normalize", help="normal form of a word in l, r")
    s.add_argument("word")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("verify", help="check orbit edges on the bounded universe")
    s.add_argument("target", nargs="?", default="all", help="'all', 'sets' or NODE:LETTER such as rl:l or root:r")
    s.add_argument("--max-size", type=int, default=2)
    s.add_argument("--witness-size", type=int, default=None,
                   help="largest size searched for completeness witnesses (default max(n+1, 4))")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--no-timing", action="store_true", help="omit timings so output is byte-stable")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("enumerate", help="count spaces or maps")
    s.add_argument("what", choices=["spaces", "maps"])
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--labelled", action="store_true", help="labelled spaces instead of classes up to isomorphism")
    s.add_argument("--list", action="store_true", help="print every item")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("counterexample", help="a witness that a map is outside an orbit class")
    s.add_argument("node")
    s.add_argument("map", nargs="*")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("export-graph", help="the orbit graph as DOT or JSON")
    s.add_argument("--format", choices=["dot", "json"], default="json")
    s.set_defaults(func=cmd_export_graph)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_TRUE
    saved = dataclasses.replace(limits)
    limits.map_count = args.map_cap
    limits.square_count = args.square_cap
    limits.power_points = args.power_cap
    try:
        return args.func(args)
    except FinliftError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        for field in dataclasses.fields(limits):
            setattr(limits, field.name, getattr(saved, field.name))


if __name__ == "__main__":
    sys.exit(main())
