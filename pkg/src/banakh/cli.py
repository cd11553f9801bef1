"""Command-line frontend: file-based workflows over the library modules.

Every subcommand is a thin adapter around one module operation.  Output is
canonical JSON on stdout (``--human`` switches to indented rendering); exit
codes are 0 for a true verdict / successful construction / null geometric
outcome, 1 for a false verdict with a machine-readable witness, and 2 for
usage or format errors (diagnostics on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import banakh_group
from .banakh_space import (AmbiguityViolation, BanakhLawViolation,
                           FragmentOracle, NoSuchRadius, SphereDeficiency,
                           embed_in_real_line, gps_locate, discrete_line,
                           orientation, segment_construct, verify_fragment)
from .graph_metric import (ExtensionExhausted, ExtensionPolicy, GraphMetric,
                           build_mu, extend_to_full)
from .monoid_algebra import (CLOSURES, MonoidDesc, MonoidMembershipError,
                             ddot_set, dzik_reduce, is_floppy, is_half_group)
from .serialize import (FormatError, buildspec_from_json,
                        certificate_from_json, certificate_to_json, dumps,
                        element_from_json, element_to_json,
                        fragment_from_json, fragment_to_json, graph_from_json,
                        graph_to_json, monoid_to_json, token_to_json,
                        value_from_json, value_to_json, _plain)
from .space_builder import BuildExhausted, SpecRejected, build, verify_certificate
from .values import format_rat, rat

__all__ = ["main"]


# ---------------------------------------------------------------------------
# small plumbing helpers
# ---------------------------------------------------------------------------


def _emit(obj, args, path=None) -> None:
    text = (json.dumps(obj, sort_keys=True, indent=2)
            if getattr(args, "human", False) else dumps(obj)) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _rat_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(part) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational list {text!r}: {exc}") from exc


def _parse_value(text: str):
    if text.lstrip().startswith("{"):
        return value_from_json(json.loads(text))
    return value_from_json(text)


def _add_monoid_flags(sp) -> None:
    sp.add_argument("--gens", help="comma-separated positive rationals (finitely generated)")
    sp.add_argument("--cone", help="comma-separated generators (group-cone: all non-negative combinations)")
    sp.add_argument("--monoid", help="closure id, one of: " + ", ".join(sorted(CLOSURES)))


def _monoid_from_args(args) -> MonoidDesc:
    picked = [flag for flag in (args.gens, args.cone, args.monoid)
              if flag is not None]
    if len(picked) != 1:
        raise FormatError("give exactly one of --gens, --cone, --monoid")
    if args.gens is not None:
        return MonoidDesc.fingen(_rat_list(args.gens))
    if args.cone is not None:
        return MonoidDesc.groupcone(_rat_list(args.cone))
    if args.monoid not in CLOSURES:
        raise FormatError(f"unknown closure id {args.monoid!r}; "
                          "known: " + ", ".join(sorted(CLOSURES)))
    return MonoidDesc.closure(args.monoid)


def _dot_text(g: GraphMetric) -> str:
    lines = ["graph G {"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for (u, v), w in sorted(g.edges.items()):
        lines.append(f'  "{u}" -- "{v}" [label="{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    fragment = fragment_from_json(_load_json(args.fragment))
    report = verify_fragment(fragment)
    ok = report.metric_ok and report.banakh_consistent
    _emit({"metric_ok": report.metric_ok,
           "banakh_consistent": report.banakh_consistent,
           "incomplete_spheres": _plain(report.incomplete_spheres),
           "violations": _plain(report.violations)}, args)
    return 0 if ok else 1


def cmd_embed(args) -> int:
    fragment = fragment_from_json(_load_json(args.fragment))
    result = embed_in_real_line(fragment)
    if result.embeddable:
        _emit({"embeddable": True,
               "coords": {p: value_to_json(c) for p, c in result.coords.items()}},
              args)
        return 0
    _emit({"embeddable": False, "obstruction": list(result.obstruction)}, args)
    return 1


def cmd_halfgroup(args) -> int:
    monoid = _monoid_from_args(args)
    bound = rat(args.bound) if args.bound else None
    verdict, witness = is_half_group(monoid, bound)
    if verdict is None:
        print("verdict inconclusive: raise --bound above the conductor",
              file=sys.stderr)
        return 2
    if verdict:
        _emit({"verdict": True}, args)
        return 0
    a, b = witness
    _emit({"verdict": False,
           "witness": f"{format_rat(b - a)} = {format_rat(b)}-{format_rat(a)} not in M"},
          args)
    return 1


def cmd_floppy(args) -> int:
    monoid = _monoid_from_args(args)
    verdict, witness = is_floppy(monoid, args.window and rat(args.window))
    payload = {"verdict": verdict}
    if witness is not None:
        payload["witness"] = format_rat(witness)
    _emit(payload, args)
    return 0 if verdict else 1


def cmd_ddot(args) -> int:
    monoid = _monoid_from_args(args)
    values = ddot_set(monoid, rat(args.window), args.denom_bound)
    if getattr(args, "human", False):
        sys.stdout.write("{" + ", ".join(format_rat(v) for v in values) + "}\n")
    else:
        _emit({"ddot": [format_rat(v) for v in values]}, args)
    return 0


def cmd_dzik(args) -> int:
    member = None
    if any(flag is not None for flag in (args.gens, args.cone, args.monoid)):
        member = _monoid_from_args(args).member
    try:
        result = dzik_reduce(args.a, args.b, args.p, member=member)
    except MonoidMembershipError as exc:
        _emit({"error": "membership", "element": exc.element}, args)
        return 1
    _emit({"value": result.value, "trace": [list(pair) for pair in result.trace]},
          args)
    return 0


def cmd_mu(args) -> int:
    monoid = _monoid_from_args(args)
    g = build_mu(monoid, rat(args.r), rat(args.window), args.denom_bound)
    if args.dot:
        text = _dot_text(g)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    _emit(graph_to_json(g), args, path=args.out)
    return 0


def cmd_extend(args) -> int:
    g = graph_from_json(_load_json(args.graph))
    try:
        result = extend_to_full(g, ExtensionPolicy(seed=args.seed,
                                                   max_backtracks=args.budget))
    except ExtensionExhausted as exc:
        _emit({"error": "extension-exhausted", "pair": list(exc.pair),
               "backtracks": exc.backtracks}, args)
        return 1
    payload = {"graph": graph_to_json(result.full),
               "assignments": [[u, v, value_to_json(w)]
                               for (u, v), w in sorted(result.assignments.items())],
               "backtracks": result.backtracks}
    _emit(payload, args, path=args.out)
    return 0


def cmd_line(args) -> int:
    fragment = fragment_from_json(_load_json(args.fragment))
    oracle = FragmentOracle(fragment)
    try:
        points = discrete_line(oracle, args.a, args.b, args.n)
    except (SphereDeficiency, NoSuchRadius) as exc:
        _emit({"line": None, "reason": str(exc)}, args)
        return 1
    _emit({"line": list(points)}, args)
    return 0


def cmd_gps(args) -> int:
    fragment = fragment_from_json(_load_json(args.fragment))
    oracle = FragmentOracle(fragment)
    try:
        point = gps_locate(oracle, args.a, args.b,
                           _parse_value(args.ra), _parse_value(args.rb))
    except BanakhLawViolation as exc:
        _emit({"error": "two-point-intersection", "detail": str(exc)}, args)
        return 1
    _emit({"point": point}, args)
    return 0


def cmd_orient(args) -> int:
    fragment = fragment_from_json(_load_json(args.fragment))
    oracle = FragmentOracle(fragment)
    sense = orientation(oracle, args.origin, args.x, args.y)
    _emit({"orientation": sense.name.lower()}, args)
    return 0


def cmd_segment(args) -> int:
    fragment = fragment_from_json(_load_json(args.fragment))
    oracle = FragmentOracle(fragment)
    try:
        point = segment_construct(oracle, args.x, args.y, _parse_value(args.r))
    except (SphereDeficiency, NoSuchRadius) as exc:
        _emit({"point": None, "reason": str(exc)}, args)
        return 0
    except AmbiguityViolation as exc:
        _emit({"error": "ambiguous-extension", "detail": str(exc)}, args)
        return 1
    _emit({"point": point}, args)
    return 0


def cmd_group(args) -> int:
    task = args.task
    if task == "dist":
        x = element_from_json(_load_json(args.paths[0]))
        y = element_from_json(_load_json(args.paths[1]))
        _emit(token_to_json(banakh_group.dist_token(x, y)), args)
        return 0
    if task == "sphere":
        c = element_from_json(_load_json(args.paths[0]))
        t = banakh_group.DistToken(element_from_json(_load_json(args.paths[1])))
        members = banakh_group.GroupOracle(args.lattice).sphere(c, t)
        _emit({"sphere": [element_to_json(m) for m in members]}, args)
        return 0
    if task == "normeq":
        x = element_from_json(_load_json(args.paths[0]))
        y = element_from_json(_load_json(args.paths[1]))
        verdict = banakh_group.norm_equal(x, y)
        _emit({"norm_equal": verdict}, args)
        return 0 if verdict else 1
    if task == "hnorm":
        x = element_from_json(_load_json(args.paths[0]))
        cert = banakh_group.h_norm_certificate(x)
        _emit(_plain(cert), args)
        return 0 if cert["holds"] else 1
    if task == "solve":
        coeffs = _rat_list(args.coeffs or "")
        if len(coeffs) != 6:
            raise FormatError("--coeffs needs a1,a2,a3,b1,b2,b3")
        result = banakh_group.solve_norm_equation(*coeffs)
        _emit({"infinite": result.infinite,
               "solutions": [format_rat(t) for t in result.solutions]}, args)
        return 0
    raise FormatError(f"unknown group task {task!r}")


def cmd_build(args) -> int:
    spec = buildspec_from_json(_load_json(args.spec), seed=args.seed)
    try:
        fragment, cert = build(spec)
    except BuildExhausted as exc:
        _emit({"error": "build-exhausted", "stage": exc.stage,
               "pair": _plain(exc.pair)}, args)
        return 1
    payload = {"fragment": fragment_to_json(fragment),
               "certificate": certificate_to_json(cert)}
    _emit(payload, args, path=args.out)
    return 0


def cmd_certify(args) -> int:
    doc = _load_json(args.fragment)
    if not isinstance(doc, dict) or "fragment" not in doc or "certificate" not in doc:
        raise FormatError("expected a build output with 'fragment' and 'certificate'")
    fragment = fragment_from_json(doc["fragment"])
    cert = certificate_from_json(doc["certificate"])
    spec_obj = _load_json(args.spec)
    spec = buildspec_from_json(spec_obj, seed=spec_obj.get("seed", cert.seed))
    report = verify_certificate(fragment, spec, cert)
    _emit(_plain(report), args)
    return 0 if report["all_ok"] else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="banakh",
        description="Exact arithmetic for two-point-sphere metric geometry.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def new(name, handler, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--human", action="store_true",
                        help="indented output instead of canonical JSON")
        sp.set_defaults(func=handler)
        return sp

    sp = new("verify", cmd_verify, "check a fragment's metric and sphere axioms")
    sp.add_argument("fragment")

    sp = new("embed", cmd_embed, "exact real-line embedding or an obstruction")
    sp.add_argument("fragment")

    sp = new("halfgroup", cmd_halfgroup, "is ±M a group under addition?")
    _add_monoid_flags(sp)
    sp.add_argument("--bound", help="search cap (rational)")

    sp = new("floppy", cmd_floppy, "floppiness verdict for a monoid")
    _add_monoid_flags(sp)
    sp.add_argument("--window", help="optional window (rational)")

    sp = new("ddot", cmd_ddot, "two-term-indecomposable members up to a window")
    _add_monoid_flags(sp)
    sp.add_argument("--window", required=True)
    sp.add_argument("--denom-bound", type=int, default=64, dest="denom_bound")

    sp = new("dzik", cmd_dzik, "p-free gcd by the descending pair reduction")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    _add_monoid_flags(sp)

    sp = new("mu", cmd_mu, "windowed difference graph of a scaled monoid")
    _add_monoid_flags(sp)
    sp.add_argument("--r", required=True, help="radius (rational)")
    sp.add_argument("--window", required=True)
    sp.add_argument("--denom-bound", type=int, default=64, dest="denom_bound")
    sp.add_argument("--out")
    sp.add_argument("--dot", action="store_true",
                    help="emit a DOT graph description instead of JSON")

    sp = new("extend", cmd_extend, "complete a floppy graph to a full metric")
    sp.add_argument("graph")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--budget", type=int, default=1000)
    sp.add_argument("--out")

    sp = new("line", cmd_line, "discrete line through two fragment points")
    sp.add_argument("fragment")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("-n", type=int, required=True)

    sp = new("gps", cmd_gps, "locate a point from two anchor distances")
    sp.add_argument("fragment")
    sp.add_argument("--a", required=True)
    sp.add_argument("--ra", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--rb", required=True)

    sp = new("orient", cmd_orient, "ray orientation of two points from an origin")
    sp.add_argument("fragment")
    sp.add_argument("--origin", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)

    sp = new("segment", cmd_segment, "extend a segment beyond its endpoint")
    sp.add_argument("fragment")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--r", required=True)

    sp = new("group", cmd_group, "symbolic free-group geometry tasks")
    sp.add_argument("task", choices=["dist", "sphere", "normeq", "hnorm", "solve"])
    sp.add_argument("paths", nargs="*")
    sp.add_argument("--lattice", choices=["H", "L"], default="L")
    sp.add_argument("--coeffs", help="a1,a2,a3,b1,b2,b3 for solve")

    sp = new("build", cmd_build, "run the staged fragment construction")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")

    sp = new("certify", cmd_certify, "re-verify a build output against its spec")
    sp.add_argument("fragment")
    sp.add_argument("spec")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"malformed JSON: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except SpecRejected as exc:
        print(f"spec rejected: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, IndexError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
