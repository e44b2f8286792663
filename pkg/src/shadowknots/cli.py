"""The ``shadowknots`` command.

Every subcommand builds a report with the fields ``command``, ``inputs``,
``result``, ``diagnostics`` and, where a reference answer exists,
``matches_paper``.  With ``--json`` the report is printed as JSON with
sorted keys, so identical inputs give byte-identical output; otherwise a
short human-readable rendering is printed.

Exit codes: 0 on success, 2 for bad input (including an unknown
subcommand or a malformed file), 3 when an internal invariant fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Dict, List, Optional, Sequence

from .alexander import alexander_poly, kn_alexander
from .banded import (BandedUnlinkDiagram, collapse_bound, gen_Kn, gen_twist_spun,
                     knot_group_of, parse_bud, serialize_bud, shadow_of)
from .egraph import DecoratedGraph, parse_egf, serialize_egf, validate
from .fpgroup import Presentation, format_word, gen, parse_presentation, tietze_simplify
from .homology import abelianization
from .knotshadow import (FAMILIES, CaseParams, KnotShadow, classify, kn_graph, knot_group,
                         normal_form, verify_case_grid)
from .moves import MoveKind, apply, load_rules, null_homotopic_edges, sites
from .vankampen import pi1_tree

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3

COMMANDS = ("validate", "pi1", "h1", "knot-group", "alexander", "classify", "move",
            "shadow", "bound", "gen", "verify")


class InputError(ValueError):
    """Bad user input: a missing flag, an unreadable file, a wrong file type."""


class InvariantError(AssertionError):
    """A computed object failed a self-check."""


class _Parser(argparse.ArgumentParser):
    """An argument parser that raises instead of exiting."""

    def error(self, message):
        raise InputError(message)


class Outcome:
    def __init__(self, result: Dict[str, object], text: List[str],
                 matches_paper: Optional[bool] = None, diagnostics: Sequence[str] = (),
                 code: int = EXIT_OK, file_output: bool = False):
        self.result = result
        self.file_output = file_output
        self.text = text
        self.matches_paper = matches_paper
        self.diagnostics = list(diagnostics)
        self.code = code


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _is_bud(path: str) -> bool:
    return path.endswith(".bud")


def _graph(path: Optional[str]) -> DecoratedGraph:
    if path is None:
        raise InputError("an .egf file is required")
    if _is_bud(path):
        raise InputError(f"{path} is a banded unlink diagram; this command needs an .egf file")
    return parse_egf(_read(path))


def _diagram(path: Optional[str]) -> BandedUnlinkDiagram:
    if path is None:
        raise InputError("a .bud file is required")
    if not _is_bud(path):
        raise InputError(f"{path} does not end in .bud")
    return parse_bud(_read(path))


def _knot_shadow(args) -> KnotShadow:
    if args.g is None:
        raise InputError("--g <int> is required for an .egf input")
    return KnotShadow(_graph(args.file), args.g, args.vertex_on_K)


def _presentation_lines(p: Presentation) -> List[str]:
    return [str(p), f"text: {p.to_text()}"]


def _pres_dict(p: Presentation) -> Dict[str, object]:
    return {"generators": list(p.generators),
            "relators": [format_word(r) for r in p.relators],
            "meridian": p.meridian, "text": p.to_text()}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> Outcome:
    report = validate(_graph(args.file), strict_simply_connected=args.strict)
    findings = [{"severity": f.severity, "code": f.code, "message": f.message, "site": f.site}
                for f in report.findings]
    text = ["ok" if report.ok else "invalid"]
    text += [f"{f['severity']} {f['code']}: {f['message']}" for f in findings]
    return Outcome({"ok": report.ok, "findings": findings}, text,
                   code=EXIT_OK if report.ok else EXIT_INPUT)


def cmd_pi1(args) -> Outcome:
    g = _graph(args.file)
    r = pi1_tree(g)
    simplified, certificate = tietze_simplify(r.presentation)
    ab = abelianization(r.presentation)
    table = {b: {"class": name, "h1_image": list(ab.image(gen(name)))}
             for b, name in sorted(r.boundary_classes.items())}
    text = _presentation_lines(r.presentation)
    text.append(f"simplified: {simplified}" + (" (trivial, certified)" if certificate else ""))
    text.append("boundary classes:")
    text += [f"  {b}: {row['class']}  H1 image {tuple(row['h1_image'])}"
             for b, row in table.items()]
    return Outcome({"presentation": _pres_dict(r.presentation),
                    "simplified": _pres_dict(simplified),
                    "trivial_certificate": certificate,
                    "boundary_classes": table}, text)


def cmd_h1(args) -> Outcome:
    if args.pres is not None:
        p = parse_presentation(args.pres, args.meridian)
        named = {s: s for s in p.generators}
    else:
        r = pi1_tree(_graph(args.file))
        p = r.presentation
        named = dict(sorted(r.boundary_classes.items()))
    ab = abelianization(p)
    images = {k: list(ab.image(gen(v))) for k, v in named.items()}
    text = [str(ab.group)]
    text += [f"  {k}: {tuple(v)}" for k, v in images.items()]
    return Outcome({"group": str(ab.group), "rank": ab.group.rank,
                    "torsion": list(ab.group.torsion), "orders": list(ab.orders),
                    "images": images}, text)


def _group_of(args) -> Presentation:
    if _is_bud(args.file or ""):
        return knot_group_of(_diagram(args.file))
    return knot_group(_knot_shadow(args))


def cmd_knot_group(args) -> Outcome:
    p = _group_of(args)
    simplified = tietze_simplify(p)[0]
    nf = normal_form(simplified)
    ab = abelianization(p)
    if not ab.group.is_infinite_cyclic:
        message = f"knot group has H1 = {ab.group}, expected Z"
        # a ribbon diagram always gives Z; a shadow with the wrong gleam is bad input
        raise InvariantError(message) if _is_bud(args.file or "") else InputError(message)
    text = _presentation_lines(p) + [f"normal form: {nf}"]
    return Outcome({"presentation": _pres_dict(p), "normal_form": str(nf),
                    "h1": str(ab.group)}, text)


def cmd_alexander(args) -> Outcome:
    if args.pres is not None:
        p = parse_presentation(args.pres, args.meridian)
        if p.meridian is None:
            raise InputError("--meridian is required when the presentation has no 'mu'")
    elif args.file is not None:
        # drops relators that reduce to the empty word before counting deficiency
        p = tietze_simplify(_group_of(args))[0]
    else:
        raise InputError("give a file or --pres")
    poly = alexander_poly(p)
    return Outcome({"polynomial": str(poly),
                    "coefficients": {str(e): c for e, c in poly.terms.items()}},
                   [str(poly)])


def cmd_classify(args) -> Outcome:
    ks = _knot_shadow(args)
    c = classify(ks)
    result = c.to_dict()
    return Outcome(result, [json.dumps(result, sort_keys=True, separators=(",", ":"))])


def cmd_move(args) -> Outcome:
    g = _graph(args.file)
    rules = load_rules(args.rules)
    kind = MoveKind(args.kind)
    justified = set(null_homotopic_edges(g))
    if args.justify:
        justified |= {e.strip() for e in args.justify.split(",") if e.strip()}
    found = sites(g, kind, args.inverse, justified, rules)
    listing = [s.describe() for s in found]
    if args.site is None:
        text = [f"{i}: {d}" for i, d in enumerate(listing)] or ["no sites"]
        return Outcome({"sites": listing}, text)
    if not 0 <= args.site < len(found):
        raise InputError(f"site {args.site} out of range; {len(found)} site(s) found")
    site = found[args.site]
    out = apply(g, kind, site, keep_K_side=args.keep, justified=justified, rules=rules)
    before = abelianization(pi1_tree(g).presentation).group
    after = abelianization(pi1_tree(out).presentation).group
    diagnostics = []
    if before != after:
        diagnostics.append(f"H1 changed from {before} to {after}")
    egf = serialize_egf(out)
    return Outcome({"site": listing[args.site], "egf": egf, "h1_before": str(before),
                    "h1_after": str(after)}, egf.rstrip("\n").splitlines(),
                   diagnostics=diagnostics)


def cmd_shadow(args) -> Outcome:
    d = _diagram(args.file)
    rep = shadow_of(d)
    lk_total = sum(rep.linking.values())
    if rep.gleam_sum_over_K.value != 2 * lk_total:
        raise InvariantError(f"gleam sum over K is {rep.gleam_sum_over_K}, "
                             f"but twice the total linking is {2 * lk_total}")
    result = rep.to_dict()
    text = [f"true vertices: {rep.true_vertices} "
            f"({rep.crossings} crossings, {rep.band_ends} band ends)",
            f"gleam sum over K: {rep.gleam_sum_over_K}",
            f"resolved components: {rep.resolved_component_count}",
            "regions:"]
    text += [f"  {r['id']} [{r['role']}] gleam {r['gleam']}" for r in result["regions"]]
    return Outcome(result, text)


def cmd_bound(args) -> Outcome:
    d = _diagram(args.file)
    rep = shadow_of(d)
    bound = collapse_bound(d, order_seed=args.seed)
    return Outcome({"true_vertices": rep.true_vertices, "collapse_bound": bound},
                   [f"true vertices: {rep.true_vertices}", f"collapse bound: {bound}"])


def cmd_gen(args) -> Outcome:
    params = args.params
    kind = args.kind_name

    def ints(count: int) -> List[int]:
        if len(params) != count:
            raise InputError(f"gen {kind} takes {count} integer argument(s)")
        try:
            return [int(x) for x in params]
        except ValueError:
            raise InputError(f"gen {kind}: arguments must be integers") from None

    if kind == "twist-spun":
        n, k = ints(2)
        d = gen_twist_spun(n, k)
        rep = shadow_of(d)
        bound = collapse_bound(d)
        matches = rep.true_vertices == 4 * n + 2 * k + 4 and bound == 4 * n + 1
        text = serialize_bud(d)
        lines = text.rstrip("\n").splitlines()
        lines.append(f"# true vertices {rep.true_vertices}, collapse bound {bound}")
        return Outcome({"bud": text, "true_vertices": rep.true_vertices,
                        "collapse_bound": bound}, lines, matches_paper=matches,
                       file_output=True)
    if kind == "kn":
        (n,) = ints(1)
        d = gen_Kn(n)
        poly = alexander_poly(knot_group_of(d))
        text = serialize_bud(d)
        lines = text.rstrip("\n").splitlines() + [f"# Alexander polynomial {poly}"]
        return Outcome({"bud": text, "alexander": str(poly)}, lines,
                       matches_paper=poly == kn_alexander(n), file_output=True)
    if kind == "kn-shadow":
        (n,) = ints(1)
        ks = kn_graph(n, args.m)
        text = f"# boundary gleam g = {ks.g}\n" + serialize_egf(ks.xprime)
        return Outcome({"egf": text, "g": ks.g}, text.rstrip("\n").splitlines(),
                       file_output=True)
    raise InputError(f"unknown generator {kind!r}; use twist-spun, kn or kn-shadow")


def cmd_verify(args) -> Outcome:
    families = list(FAMILIES) if args.family in (None, "all") else [args.family]
    if any(f not in FAMILIES for f in families):
        raise InputError(f"unknown family {args.family!r}; known: {', '.join(FAMILIES)}")
    bounds = CaseParams(max_param=args.max, max_g=args.g if args.g is not None else 3)
    reports = [verify_case_grid(f, bounds).to_dict() for f in families]
    matches = all(r["matches_paper"] for r in reports)
    text = [f"{r['family']}: {len(r['survivors'])} survivor(s) of {r['checked']}; "
            f"{r['conclusion']}; matches_paper={str(r['matches_paper']).lower()}"
            for r in reports]
    diagnostics = [f"{r['family']} disagrees with the expected conclusion"
                   for r in reports if not r["matches_paper"]]
    result: Dict[str, object] = reports[0] if len(reports) == 1 else {"families": reports}
    return Outcome(result, text, matches_paper=matches, diagnostics=diagnostics)


HANDLERS: Dict[str, Callable] = {
    "validate": cmd_validate, "pi1": cmd_pi1, "h1": cmd_h1, "knot-group": cmd_knot_group,
    "alexander": cmd_alexander, "classify": cmd_classify, "move": cmd_move,
    "shadow": cmd_shadow, "bound": cmd_bound, "gen": cmd_gen, "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# argument parsing and reporting
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized steps (collapse order)")

    parser = _Parser(prog="shadowknots", description="Shadow calculus for 2-knots.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def add(name: str, help_text: str, file_arg: str = "required"):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if file_arg == "required":
            p.add_argument("file")
        elif file_arg == "optional":
            p.add_argument("file", nargs="?")
        return p

    p = add("validate", "check an .egf graph")
    p.add_argument("--strict", action="store_true",
                   help="also require a certified simply connected polyhedron")
    add("pi1", "fundamental group of an .egf tree and its boundary classes")
    p = add("h1", "first homology of an .egf tree or a presentation", "optional")
    p.add_argument("--pres")
    p.add_argument("--meridian")
    for name, help_text in (("knot-group", "knot group of a shadow (.egf) or diagram (.bud)"),
                            ("alexander", "Alexander polynomial"),
                            ("classify", "classify a complexity-at-most-one shadow")):
        p = add(name, help_text, "optional" if name == "alexander" else "required")
        p.add_argument("--g", type=int)
        p.add_argument("--vertex-on-K", dest="vertex_on_K", action="store_true")
        if name == "alexander":
            p.add_argument("--pres")
            p.add_argument("--meridian")
    p = add("move", "list sites of a move or apply one")
    p.add_argument("--kind", required=True, choices=[k.value for k in MoveKind])
    p.add_argument("--site", type=int)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--keep", help="a vertex id in the component to keep")
    p.add_argument("--justify", help="comma-separated edge ids vouched for")
    p.add_argument("--rules", help="move-rule table replacing the built-in one")
    add("shadow", "shadow of a banded unlink diagram (.bud)")
    add("bound", "true vertices and collapse bound of a .bud diagram")
    p = add("gen", "generate a diagram or shadow", None)
    p.add_argument("kind_name", metavar="KIND", help="twist-spun | kn | kn-shadow")
    p.add_argument("params", nargs="*")
    p.add_argument("--m", type=int, default=0, help="one-sided Y12 count for kn-shadow")
    p = add("verify", "run the complexity-one case grid", None)
    p.add_argument("--family", help="family id, or 'all' (default)")
    p.add_argument("--max", type=int, default=3, help="largest family parameter")
    p.add_argument("--g", type=int, help="largest boundary gleam (default 3)")
    return parser


def _inputs(args) -> Dict[str, object]:
    skip = {"json", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None
            and v is not False and v != []}


def render(command: str, inputs: Dict[str, object], outcome: Outcome) -> str:
    report: Dict[str, object] = {"command": command, "inputs": inputs,
                                 "result": outcome.result, "diagnostics": outcome.diagnostics}
    if outcome.matches_paper is not None:
        report["matches_paper"] = outcome.matches_paper
    return json.dumps(report, sort_keys=True, indent=2)


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    want_json = "--json" in argv
    parser = build_parser()
    command = argv[0] if argv else None
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise InputError(f"a subcommand is required: {' | '.join(COMMANDS)}")
    except InputError as exc:
        return _fail(command, {}, str(exc), EXIT_INPUT, want_json, stdout, stderr)
    inputs = _inputs(args)
    try:
        outcome = HANDLERS[args.command](args)
    except AssertionError as exc:
        return _fail(args.command, inputs, f"internal invariant violated: {exc}",
                     EXIT_INVARIANT, args.json, stdout, stderr)
    except (ValueError, KeyError, LookupError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return _fail(args.command, inputs, str(message), EXIT_INPUT, args.json, stdout, stderr)
    if args.json:
        print(render(args.command, inputs, outcome), file=stdout)
    else:
        for line in outcome.text:
            print(line, file=stdout)
        if outcome.matches_paper is not None:
            # generated files stay parseable: the verdict becomes a comment
            prefix = "# " if outcome.file_output else ""
            print(f"{prefix}matches_paper: {str(outcome.matches_paper).lower()}", file=stdout)
        for line in outcome.diagnostics:
            print(f"note: {line}", file=stderr)
    return outcome.code


def _fail(command, inputs, message, code, want_json, stdout, stderr) -> int:
    if want_json:
        print(render(command or "", inputs, Outcome(None, [], diagnostics=[message])),
              file=stdout)
    else:
        print(f"shadowknots: error: {message}", file=stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
