"""Command line entry point ``canonlab``.

Exit codes: 0 = no violations, 2 = violations found, 1 = usage or
validation error.  Every command prints JSON on stdout.
"""
import argparse
import json
import sys

from . import __version__, linalg
from .corpus import FAMILIES, CorpusSpec, default_corpus, generate
from .curve import check_valid, connectivity, curve_from_dict, curve_to_dict, numerical_connectivity
from .errors import CanonlabError
from .geometry import simple_secant_search
from .multiplication import k_normality
from .sections import (
    TwistDivisor,
    canonical_bundle,
    h1_by_duality,
    restrict_bundle,
    sections_basis,
)
from .verifier import (
    CurveContext,
    Instance,
    Statement,
    VerifyConfig,
    emit_report,
    instances_for,
    run_corpus,
    summarize,
    verify,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _load_curves(path):
    """A curve description, or a corpus description (has a "family" key)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "family" in data:
        return generate(_corpus_spec_from_dict(data))
    return [check_valid(curve_from_dict(data))]


def _load_curve(path):
    curves = _load_curves(path)
    if len(curves) != 1:
        raise UsageError(f"{path} describes {len(curves)} curves; this command needs exactly one")
    return curves[0]


def _int_range(text):
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    v = int(text)
    return v, v


def _int_tuple(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _corpus_spec_from_dict(d):
    genus = d.get("genus", (3, 8))
    if isinstance(genus, str):
        genus = _int_range(genus)
    elif isinstance(genus, int):
        genus = (genus, genus)
    return CorpusSpec(d["family"], tuple(genus), tuple(d.get("genera", ())),
                      d.get("n_components", 2), d.get("delta", 3), d.get("n_nodes", 0),
                      d.get("max_vertices", 8), d.get("count", 1), d.get("seed", 0))


def _parse_twist(items):
    """``comp:t[:m]`` entries, repeated or comma separated."""
    entries = []
    for item in items or ():
        for part in item.split(","):
            part = part.strip()
            if not part:
                continue
            bits = part.split(":")
            if len(bits) not in (2, 3):
                raise UsageError(f"bad twist entry {part!r}; expected comp:t[:m]")
            entries.append({"comp": bits[0], "t": bits[1], "m": int(bits[2]) if len(bits) == 3 else 1})
    return TwistDivisor.from_list(entries)


# ------------------------------------------------------------------ commands


def cmd_build(args):
    curves = _load_curves(args.spec)
    out = [curve_to_dict(c) for c in curves]
    _emit(out[0] if len(out) == 1 else out)
    return 0


def cmd_genus(args):
    c = _load_curve(args.spec)
    _emit({"curve": c.name, "genus": c.genus, "components": len(c.components), "nodes": len(c.nodes),
           "self_nodes": {cid: c.self_node_count(cid) for cid in c.component_ids}})
    return 0


def cmd_connectivity(args):
    c = _load_curve(args.spec)
    m, split = connectivity(c)
    num = numerical_connectivity(c)
    _emit({"curve": c.name,
           "connectivity": m if isinstance(m, int) else "inf",
           "numerical_connectivity": num if isinstance(num, int) else "inf",
           "three_connected": m >= 3,
           "witness": split.to_dict() if split is not None else None})
    return 0


def cmd_sections(args):
    c = _load_curve(args.spec)
    twist = _parse_twist(args.twist)
    if args.on:
        ids = [x for x in args.on.split(",") if x]
        bundle = restrict_bundle(c, ids, args.k, twist)
    else:
        bundle = canonical_bundle(c, args.k).with_twist(twist)
    basis = sections_basis(bundle)
    out = {"bundle": bundle.to_dict(), "description": bundle.describe(), "degree": bundle.degree,
           "p_a": bundle.Z.genus, "h0": basis.h0, "h1": basis.h1,
           "h1_duality": h1_by_duality(bundle)}
    if args.basis:
        out["basis"] = basis.to_dict()
    _emit(out)
    return 0


def cmd_normality(args):
    c = _load_curve(args.spec)
    report = k_normality(c, args.max_k)
    _emit({"curve": c.name, "genus": c.genus, **report.to_dict()})
    return 0


def cmd_secant(args):
    c = _load_curve(args.spec)
    res = simple_secant_search(c, args.budget, args.seed)
    _emit({"curve": c.name, "genus": c.genus, "budget": args.budget, "seed": args.seed,
           **res.to_dict()})
    return 0


def _config(args):
    return VerifyConfig(
        k_max=args.k_max,
        max_decompositions=args.max_decompositions,
        divisor_degrees=_int_tuple(args.degrees),
        secant_budget=args.budget,
        seed=args.seed,
        include_timings=args.timings,
    )


def _finish(certs, summary, report_path):
    if report_path:
        emit_report(certs, report_path, summary)
    _emit(summary)
    return 2 if summary["violations"] else 0


def cmd_verify(args):
    statement = Statement.parse(args.statement)
    config = _config(args)
    linalg.MODP_AUDIT.reset()
    certs = []
    for index, curve in enumerate(_load_curves(args.spec)):
        ctx = CurveContext(curve, config)
        explicit = args.decomposition or args.divisor or args.k is not None
        if explicit:
            A = None
            if args.decomposition:
                A = tuple(x for x in args.decomposition.split("|")[0].split(",") if x)
            E = _parse_twist(args.divisor) if args.divisor else None
            inst = Instance(curve, "custom", index, config.seed, A=A, E=E, D=E, k=args.k,
                            R=args.bundle, L=args.bundle, M=args.pencil)
            insts = [inst]
        else:
            insts = instances_for(statement, ctx, "custom", index, config.seed)
        certs.extend(verify(statement, inst, ctx).to_dict() for inst in insts)
    summary = summarize(certs)
    prime = linalg.modp_prime()
    summary["modp"] = None if prime is None else linalg.MODP_AUDIT.summary()
    summary["config"] = config.to_dict()
    return _finish(certs, summary, args.report)


def cmd_corpus(args):
    if args.family == "default":
        specs = default_corpus(args.seed)
    else:
        specs = [CorpusSpec(args.family, _int_range(args.genus), _int_tuple(args.genera or ""),
                            args.components, args.delta, args.nodes, args.max_vertices, args.count,
                            args.seed)]
    statements = [s for s in (args.statements or "").split(",") if s] or None
    linalg.MODP_AUDIT.reset()
    certs, summary = run_corpus(specs, statements, config=_config(args), workers=args.workers)
    return _finish(certs, summary, args.report)


# ------------------------------------------------------------------ parser


def _add_verify_options(p):
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-max", type=int, default=5, dest="k_max")
    p.add_argument("--budget", type=int, default=200, help="simple secant trials")
    p.add_argument("--degrees", default="2,3,4", help="divisor degrees, comma separated")
    p.add_argument("--max-decompositions", type=int, default=12, dest="max_decompositions")
    p.add_argument("--timings", action="store_true", help="record wall times (breaks byte determinism)")


def build_parser():
    parser = _Parser(prog="canonlab", description="Exact canonical-normality checks on nodal curves.")
    parser.add_argument("--version", action="version", version=f"canonlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="validate a curve or corpus description and print it")
    p.add_argument("spec")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("genus", help="arithmetic genus")
    p.add_argument("spec")
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("connectivity", help="m-connectivity with a minimal split")
    p.add_argument("spec")
    p.set_defaults(func=cmd_connectivity)

    p = sub.add_parser("sections", help="h0 and h1 of omega^k(T), optionally restricted")
    p.add_argument("spec")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--twist", action="append", help="comp:t[:m], repeatable or comma separated")
    p.add_argument("--on", help="restrict to the subcurve with these component ids")
    p.add_argument("--basis", action="store_true", help="include the basis")
    p.set_defaults(func=cmd_sections)

    p = sub.add_parser("normality", help="coranks of H0(omega)^k -> H0(omega^k)")
    p.add_argument("spec")
    p.add_argument("--max-k", type=int, default=3, dest="max_k")
    p.set_defaults(func=cmd_normality)

    p = sub.add_parser("secant", help="search for a simple (g-2)-secant")
    p.add_argument("spec")
    p.add_argument("--budget", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_secant)

    p = sub.add_parser("verify", help="verify one statement on a curve")
    p.add_argument("--statement", required=True, choices=[s.name for s in Statement], metavar="NAME")
    p.add_argument("--spec", required=True)
    p.add_argument("--decomposition", help="A side as C1,C2 (text after '|' is ignored: B is the rest)")
    p.add_argument("--divisor", action="append", help="E (or D) as comp:t[:m] entries")
    p.add_argument("--k", type=int)
    p.add_argument("--bundle", help="named bundle for R or L, e.g. omega_X^2")
    p.add_argument("--pencil", help="named bundle for M")
    _add_verify_options(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", help="verify statements over a generated corpus")
    p.add_argument("--family", default="default", choices=FAMILIES + ("default",))
    p.add_argument("--genus", default="3..8", help="range lo..hi (binary family)")
    p.add_argument("--genera", help="comma separated genera (chain, four_component)")
    p.add_argument("--components", type=int, default=2)
    p.add_argument("--delta", type=int, default=3)
    p.add_argument("--nodes", type=int, default=0)
    p.add_argument("--max-vertices", type=int, default=8, dest="max_vertices")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--statements", help="comma separated statement names (default: all)")
    p.add_argument("--workers", type=int, default=1)
    _add_verify_options(p)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CanonlabError, UsageError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"canonlab: error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
