"""Command-line front end: ``tropilift <subcommand> ...``.

Exit codes: 0 success, 1 invalid input, 2 refused computation.
Graphs and morphisms come from ``--graph``/``--morphism`` files, from
``--fixture NAME[:a,b,...]``, or from a JSON document on stdin.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import fixtures as fx
from . import io
from .errors import NotHarmonicError, RefusedComputation, TropiliftError, ValidationError
from .graph import MetricGraph, canonical_divisor, first_betti, fmt_q, genus
from .harmonic import (Morphism, degree, is_effective, is_finite, is_harmonic, ramification,
                       riemann_hurwitz_check, validate_morphism)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


class _Out:
    """Result payload plus an optional object to render as DOT."""

    def __init__(self, data, dot=None, text=None):
        self.data, self.dot, self.text = data, dot, text


# -- input helpers ----------------------------------------------------------

def _read(path, stdin):
    if path in (None, "-"):
        return stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _fixture(spec):
    name, _, rest = spec.partition(":")
    args = [a for a in rest.split(",") if a] if rest else []
    try:
        return fx.get(name, *args)
    except KeyError as exc:
        raise ValidationError(str(exc.args[0])) from None


def _graph(args, stdin) -> MetricGraph:
    if getattr(args, "fixture", None):
        obj = _fixture(args.fixture)
        if isinstance(obj, Morphism):
            raise ValidationError(f"fixture {args.fixture!r} is a morphism, not a graph")
        return obj
    data = io.load_json(_read(getattr(args, "graph", None), stdin))
    if isinstance(data, dict) and "morphism" in data:
        return io.parse_bundle(data).source
    return io.parse_graph(data)


def _morphism(args, stdin) -> Morphism:
    if getattr(args, "fixture", None):
        obj = _fixture(args.fixture)
        if not isinstance(obj, Morphism):
            raise ValidationError(f"fixture {args.fixture!r} is a graph, not a morphism")
        return obj
    graphs = getattr(args, "graphs", None)
    data = io.load_json(_read(getattr(args, "morphism", None), stdin))
    if graphs:
        S = io.parse_graph(io.load_json(_read(graphs[0], stdin)))
        T = io.parse_graph(io.load_json(_read(graphs[1], stdin)))
        return io.parse_morphism(data, S, T)
    return io.parse_bundle(data)


def _divisor(spec, m, stdin):
    if spec is None:
        raise ValidationError("--divisor is required")
    text = spec if spec.lstrip().startswith("[") else _read(spec, stdin)
    return io.parse_divisor(io.load_json(text), m)


def _budget(spec):
    from .gonality import SearchBudget
    if spec in (None, "default"):
        return SearchBudget.default()
    try:
        return SearchBudget(node_limit=int(spec)).capped()
    except ValueError:
        raise ValidationError(f"--budget must be 'default' or a positive integer, got {spec!r}") from None


# -- subcommands ------------------------------------------------------------

def cmd_genus(args, stdin):
    m = _graph(args, stdin)
    return _Out({"genus": genus(m), "first_betti": first_betti(m)}, m)


def cmd_canonical(args, stdin):
    m = _graph(args, stdin)
    K = canonical_divisor(m)
    return _Out({"canonical": io.serialize_divisor(K), "degree": K.degree()}, m)


def cmd_rank(args, stdin):
    from .divisors import rank_metric, weighted_rank
    m = _graph(args, stdin)
    D = _divisor(args.divisor, m, stdin)
    r = weighted_rank(m, m.genus, D) if args.weighted else rank_metric(m, D)
    return _Out({"rank": r, "degree": D.degree(), "weighted": args.weighted}, m)


def cmd_check_morphism(args, stdin):
    phi = _morphism(args, stdin)
    diag = validate_morphism(phi)
    out = {"valid": not diag, "diagnostics": diag}
    if not diag:
        harm = is_harmonic(phi)
        out.update(harmonic=harm, finite=is_finite(phi))
        if harm:
            out.update(degree=degree(phi), effective=is_effective(phi),
                       riemann_hurwitz=riemann_hurwitz_check(phi))
    return _Out(out, phi)


def cmd_ramification(args, stdin):
    phi = _morphism(args, stdin)
    R, r = ramification(phi)
    return _Out({"R": io.serialize_divisor(R), "r": dict(sorted(r.items()))}, phi)


def cmd_hurwitz(args, stdin):
    from .hurwitz import HurwitzQuery, expected_R, hurwitz_count, hurwitz_number
    q = HurwitzQuery(args.gs, args.gt, args.d, tuple(args.mu or ()), args.char)
    n = hurwitz_count(q, args.method)
    h = hurwitz_number(q, args.method)
    data = {"value": fmt_q(h), "tuples": n,
            "R": expected_R(q), "d": q.d, "g_source": q.g_source, "g_target": q.g_target,
            "partitions": [list(p) for p in q.mus], "char": q.char_p}
    return _Out(data, text=f"{data['value']}\ntuples: {n}\n")


def cmd_liftable(args, stdin):
    from .lifting import genus_relaxed_lift, liftable_augmented
    phi = _morphism(args, stdin)
    ok, reports = liftable_augmented(phi, char_p=args.char)
    out = {"liftable": ok,
           "obstructed": [r.vertex for r in reports if r.verdict == "obstructed"],
           "vertices": [r.as_dict() for r in reports]}
    if args.relax_genus is not None:
        out["relaxed_source_genus"] = genus_relaxed_lift(phi, g_max=args.relax_genus,
                                                         char_p=args.char)
    return _Out(out, phi)


def cmd_gluing_count(args, stdin):
    from .gluing import (FiniteAbelianGroup, GroupHom, count_lifts, e1_from_morphism,
                         rho_from_vertex_actions, tate_gluing_data)
    phi = _morphism(args, stdin)
    if args.e0:
        data = io.load_json(_read(args.e0, stdin))
        io._need(data, dict, "")
        if "vertex_orders" in data:
            E0, rho = rho_from_vertex_actions(phi, data["vertex_orders"],
                                              data.get("restriction", {}))
        elif "orders" in data and "rho" in data:
            E0 = FiniteAbelianGroup(data["orders"])
            rho = GroupHom(E0, e1_from_morphism(phi), data["rho"])
        else:
            raise ValidationError("e0 file needs 'vertex_orders' (+ 'restriction') "
                                  "or 'orders' + 'rho'")
    elif args.fixture and args.fixture.upper().startswith("TATE2ISOGENY"):
        _, E0, rho = tate_gluing_data(phi)
    else:
        raise ValidationError("--e0 is required")
    return _Out(count_lifts(phi, E0, rho).as_dict(), phi)


def cmd_jacobian(args, stdin):
    from .jacobian import CriticalGroup, JacobianMap
    obj = None
    if args.fixture:
        obj = _fixture(args.fixture)
    elif args.morphism:
        obj = _morphism(args, stdin)
    else:
        obj = _graph(args, stdin)
    if isinstance(obj, MetricGraph):
        if args.check:
            raise ValidationError("--check needs a morphism")
        J = CriticalGroup(obj)
        return _Out({"order": J.order, "factors": J.factors,
                     "spanning_trees": J.spanning_trees}, obj)
    Jm = JacobianMap(obj)
    out = {"source_order": Jm.src.order, "source_factors": Jm.src.factors,
           "target_order": Jm.tgt.order, "target_factors": Jm.tgt.factors}
    if args.check == "surjective":
        out["check"], out["result"] = "surjective", Jm.is_surjective_pushforward()
    elif args.check == "adjoint":
        out["check"], out["result"] = "adjoint", Jm.adjointness_check()
    else:
        out["coker_pushforward"] = Jm.coker_pushforward_order()
        out["ker_pullback"] = len(Jm.kernel_pullback())
    text = None
    if args.check:
        text = ("true" if out["result"] else "false") + "\n"
    return _Out(out, obj, text)


def cmd_hyperelliptic(args, stdin):
    from .hyperelliptic import liftable_hyperelliptic
    m = _graph(args, stdin)
    rep = liftable_hyperelliptic(m, report=True)
    out = {"hyperelliptic": rep.hyperelliptic, "liftable": rep.liftable}
    if rep.involution is not None:
        s = rep.involution
        out["involution"] = {v: w for v, w in sorted(s.vmap.items()) if v != w}
        out["kappa"] = dict(sorted(rep.kappa.items()))
    return _Out(out, m)


def cmd_gonality(args, stdin):
    from .gonality import gonality_witness
    m = _graph(args, stdin)
    d, phi = gonality_witness(m, d_max=args.dmax, budget=_budget(args.budget))
    out = {"d": d, "complete": False}
    if phi is not None:
        out["witness"] = io.serialize_bundle(phi)
    return _Out(out, phi if phi is not None else m)


def cmd_obstruct(args, stdin):
    from .gonality import lift_obstructed_gonality
    phi = _morphism(args, stdin)
    return _Out(lift_obstructed_gonality(None, None, phi, args.char), phi)


def cmd_fixtures(args, stdin):
    if args.list or not args.name:
        return _Out({"fixtures": sorted(fx.CATALOG)})
    obj = _fixture(args.name if not args.args else f"{args.name}:{args.args}")
    if isinstance(obj, Morphism):
        return _Out(io.serialize_bundle(obj), obj)
    return _Out(io.serialize_graph(obj), obj)


# -- plumbing ---------------------------------------------------------------

def self_check():
    """Validate every catalog fixture; raises on the first failure."""
    from .graph import validate_model
    for name in fx.CATALOG:
        obj = fx.get(name)
        diag = validate_morphism(obj) if isinstance(obj, Morphism) else validate_model(obj)
        if diag:
            raise AssertionError(f"fixture {name} invalid: {diag}")


def _add_graph_src(p):
    p.add_argument("--graph", help="graph JSON file ('-' for stdin)")
    p.add_argument("--fixture", help="catalog fixture, e.g. BANANA:1,2,2")


def _add_morphism_src(p):
    p.add_argument("--morphism", help="morphism or bundle JSON file ('-' for stdin)")
    p.add_argument("--graphs", nargs=2, metavar=("SRC", "TGT"),
                   help="source and target graph files when --morphism is bare")
    p.add_argument("--fixture", help="catalog fixture, e.g. RIBET")


def build_parser():
    p = _Parser(prog="tropilift", description="Metric graphs, harmonic morphisms and lifting.")
    p.add_argument("--format", choices=("json", "text", "dot"), default="json")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("genus", help="genus and first Betti number")
    _add_graph_src(s)
    s.set_defaults(func=cmd_genus)

    s = sub.add_parser("canonical", help="canonical divisor")
    _add_graph_src(s)
    s.set_defaults(func=cmd_canonical)

    s = sub.add_parser("rank", help="rank of a divisor")
    _add_graph_src(s)
    s.add_argument("--divisor", help="divisor JSON file or inline JSON list")
    s.add_argument("--weighted", action="store_true", help="use vertex genera (virtual cycles)")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("check-morphism", help="validate a morphism")
    _add_morphism_src(s)
    s.set_defaults(func=cmd_check_morphism)

    s = sub.add_parser("ramification", help="ramification divisor")
    _add_morphism_src(s)
    s.set_defaults(func=cmd_ramification)

    s = sub.add_parser("hurwitz", help="Hurwitz number")
    s.add_argument("--gs", type=int, required=True, help="source genus")
    s.add_argument("--gt", type=int, required=True, help="target genus")
    s.add_argument("--d", type=int, required=True, help="degree")
    s.add_argument("--mu", action="append", help="branch partition, e.g. 2,2 (repeatable)")
    s.add_argument("--char", type=int, default=0)
    s.add_argument("--method", choices=("auto", "dp", "brute"), default="auto")
    s.set_defaults(func=cmd_hurwitz)

    s = sub.add_parser("liftable", help="vertex-wise lifting test")
    _add_morphism_src(s)
    s.add_argument("--char", type=int, default=0)
    s.add_argument("--relax-genus", type=int, metavar="GMAX")
    s.set_defaults(func=cmd_liftable)

    s = sub.add_parser("gluing-count", help="count lifts from gluing data")
    _add_morphism_src(s)
    s.add_argument("--e0", help="JSON with vertex_orders/restriction or orders/rho")
    s.set_defaults(func=cmd_gluing_count)

    s = sub.add_parser("jacobian", help="Jacobian order or morphism checks")
    s.add_argument("--graph")
    s.add_argument("--morphism")
    s.add_argument("--graphs", nargs=2, metavar=("SRC", "TGT"))
    s.add_argument("--fixture")
    s.add_argument("--check", choices=("surjective", "adjoint"))
    s.set_defaults(func=cmd_jacobian)

    s = sub.add_parser("hyperelliptic", help="hyperelliptic involution and liftability")
    _add_graph_src(s)
    s.set_defaults(func=cmd_hyperelliptic)

    s = sub.add_parser("gonality", help="bounded search for maps to trees")
    _add_graph_src(s)
    s.add_argument("--dmax", type=int, default=4)
    s.add_argument("--budget", default="default", help="'default' or a node limit")
    s.set_defaults(func=cmd_gonality)

    s = sub.add_parser("obstruct", help="Hurwitz obstructions of a witness morphism")
    _add_morphism_src(s)
    s.add_argument("--graph", help="ignored; the witness carries its source")
    s.add_argument("--char", type=int, default=0)
    s.set_defaults(func=cmd_obstruct)

    s = sub.add_parser("fixtures", help="print a built-in fixture as JSON")
    s.add_argument("--name")
    s.add_argument("--args", help="comma-separated fixture arguments")
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_fixtures)
    return p


def _text(data, indent=""):
    lines = []
    for k, v in data.items():
        if isinstance(v, dict) and v and all(not isinstance(x, (dict, list)) for x in v.values()):
            lines.append(f"{indent}{k}: " + ", ".join(f"{a}={b}" for a, b in v.items()))
        elif isinstance(v, (dict, list)):
            lines.append(f"{indent}{k}: {io.dumps(v).strip() if v else v}".replace("\n", " "))
        else:
            lines.append(f"{indent}{k}: {str(v).lower() if isinstance(v, bool) else v}")
    return "\n".join(lines) + "\n"


def run(argv=None, stdin=None, stdout=None, stderr=None):
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if os.environ.get("TROPILIFT_SELFTEST"):
        self_check()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out = args.func(args, stdin)
    except RefusedComputation as exc:
        stderr.write(f"refused: {exc}\n")
        return 2
    except (ValidationError, NotHarmonicError, TropiliftError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    if args.format == "dot":
        if out.dot is None:
            stderr.write("error: this command has no DOT rendering\n")
            return 1
        stdout.write(io.morphism_to_dot(out.dot) if isinstance(out.dot, Morphism)
                     else io.graph_to_dot(out.dot))
    elif args.format == "text":
        stdout.write(out.text if out.text is not None else _text(out.data))
    else:
        stdout.write(io.dumps(out.data))
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
