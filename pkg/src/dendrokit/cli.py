"""Command-line front end.

Verbs: tree, faces, horn, spine, interior, shuffles, tensor, cert,
operad, nerve, bv.  Trees are named from the catalog, read from
@file.json, or piped with "-"; operads likewise ("terminal" and
"initial" are built in).  Exit codes: 0 success, 1 usage or input
error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import anodyne, bv, catalog, dendsets, faces, operads, tensor, trees
from .anodyne import AnodyneCertificate, CertBuildError
from .bv import BVError
from .dendsets import FinDendSet
from .operads import FiniteOperad, OperadError
from .trees import Tree

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY = 2

WORKERS_ENV = "DENDROKIT_WORKERS"


class CLIError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(message)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_tree(token: str) -> Tree:
    """Catalog name, @file.json, or '-' for stdin."""
    if token == "-" or token.startswith("@"):
        text = _read_text(token if token == "-" else token[1:])
        return trees.from_json(text)
    named = catalog.named_trees()
    if token in named:
        return named[token]
    raise CLIError(
        f"unknown tree {token!r}; use a catalog name ({', '.join(sorted(named))}), "
        "@file.json, or -"
    )


def load_operad(token: str) -> FiniteOperad:
    if token == "terminal":
        return operads.terminal_closed()
    if token == "initial":
        return operads.initial_closed()
    if token == "-" or token.startswith("@"):
        text = _read_text(token if token == "-" else token[1:])
        return FiniteOperad.from_json_obj(json.loads(text))
    raise CLIError(f"unknown operad {token!r}; use terminal, initial, @file.json, or -")


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_json(args, obj) -> None:
    _emit(args, json.dumps(obj, indent=2))


def _split(values) -> list[str]:
    out: list[str] = []
    for v in values or []:
        out.extend(x for x in v.split(",") if x)
    return out


def _workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise CLIError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise CLIError(f"{WORKERS_ENV} must be positive")
    return n


# ---------------------------------------------------------------- tree


def cmd_tree(args) -> int:
    if args.list:
        for name in sorted(catalog.named_trees()):
            print(name)
        return EXIT_OK
    if args.tree is None:
        raise CLIError("tree: need a tree argument (or --list)")
    T = load_tree(args.tree)
    contracted = _split(args.contract)
    if contracted:
        T = trees.contract(T, set(contracted))
    if args.closure:
        T = trees.closure(T)
    if args.chop_stumps:
        T = trees.chop_stumps(T)
    if args.info:
        print(f"root: {T.root}")
        print(f"edges: {' '.join(T.edges)}")
        print(f"vertices: {' '.join(T.vertices)}")
        print(f"leaves: {' '.join(T.leaves)}")
        print(f"stumps: {' '.join(T.stumps)}")
        print(f"inner: {' '.join(T.inner_edges)}")
        print(f"very-inner: {' '.join(faces.very_inner_edges(T))}")
        print(f"closed: {str(T.is_closed).lower()}")
        print(f"open: {str(T.is_open).lower()}")
        return EXIT_OK
    if args.format == "dot":
        _emit(args, trees.to_dot(T, set(_split(args.mark))))
    else:
        _emit(args, trees.to_json(T))
    return EXIT_OK


# --------------------------------------------------------------- faces


def cmd_faces(args) -> int:
    T = load_tree(args.tree)
    fs = faces.elementary_faces(T, args.site)
    if args.format == "json":
        _emit_json(
            args,
            [
                {"kind": f.kind, "edge": f.index, "source": trees.to_json_obj(f.source)}
                for f in fs
            ],
        )
    else:
        for f in fs:
            print(f"{f.kind} {f.index}")
    return EXIT_OK


def cmd_horn(args) -> int:
    T = load_tree(args.tree)
    omit = _split(args.omit)
    if not omit:
        raise CLIError("horn: need at least one --omit face")
    X = faces.horn(T, omit, args.site)
    if args.count:
        _emit(args, str(len(X)))
    else:
        _emit(args, X.to_json())
    return EXIT_OK


def cmd_spine(args) -> int:
    T = load_tree(args.tree)
    X = faces.spine(T, args.site)
    if args.count:
        _emit(args, str(len(X)))
    else:
        _emit(args, X.to_json())
    return EXIT_OK


def cmd_interior(args) -> int:
    T = load_tree(args.tree)
    X = dendsets.interior(T)
    if args.count_maximal:
        _emit(args, str(len(X.maximal_members())))
    else:
        _emit(args, X.to_json())
    return EXIT_OK


# -------------------------------------------------------------- tensor


def cmd_shuffles(args) -> int:
    factors = [load_tree(args.left), load_tree(args.right)]
    shs = tensor.shuffles(factors)
    if args.count:
        _emit(args, str(len(shs)))
    else:
        _emit_json(args, [d.to_json_obj() for d in shs])
    return EXIT_OK


def cmd_tensor(args) -> int:
    factors = [load_tree(t) for t in args.nfold]
    if len(factors) < 2:
        raise CLIError("tensor: need at least two factors")
    if args.left_assoc:
        X = tensor.left_assoc_tensor(factors)
    else:
        X = tensor.nfold_tensor(factors)
    if args.count_maximal:
        _emit(args, str(len(X.maximal_members())))
    else:
        _emit(args, X.to_json())
    return EXIT_OK


# ---------------------------------------------------------------- cert


def _build_certificate(args) -> AnodyneCertificate:
    goal = args.goal
    if goal == "spine":
        return anodyne.build_via("spine", load_tree(_required(args, "tree")))
    if goal == "multi-horn":
        return anodyne.build_via(
            "multi-horn", load_tree(_required(args, "tree")), _split(args.edges)
        )
    if goal == "extended-horn":
        return anodyne.build_via(
            "extended-horn",
            load_tree(_required(args, "tree")),
            _split(args.edges),
            _split(args.extra),
        )
    if goal == "corner":
        return anodyne.build_via(
            "corner",
            load_tree(_required(args, "left")),
            _required(args, "edge"),
            load_tree(_required(args, "right")),
        )
    if goal == "partial-horn":
        return anodyne.build_inner_anodyne(
            "partial-horn",
            load_tree(_required(args, "tree")),
            _required(args, "edge"),
            _split(args.missing_stumps),
        )
    if goal == "grafting":
        return anodyne.build_inner_anodyne("grafting", load_tree(_required(args, "tree")))
    if goal == "interval-tower":
        return anodyne.build_inner_anodyne("interval-tower", args.stages)
    raise CLIError(f"unknown goal {goal!r}")


def _required(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise CLIError(f"cert build {args.goal}: --{name.replace('_', '-')} is required")
    return value


def cmd_cert_build(args) -> int:
    cert = _build_certificate(args)
    _emit(args, cert.to_json())
    return EXIT_OK


def cmd_cert_verify(args) -> int:
    cert = AnodyneCertificate.from_json(_read_text(args.file))
    report = anodyne.verify(cert)
    if report.ok:
        print(
            f"ok: {cert.overall_class}, {len(cert.steps)} steps, "
            f"end {len(report.end)} members"
        )
        return EXIT_OK
    where = f"step {report.step}" if report.step is not None else f"prelim {report.prelim}"
    print(f"FAIL at {where}: {report.reason}", file=sys.stderr)
    return EXIT_VERIFY


def _sweep_one(T: Tree, goals: list[str]) -> list[tuple[str, bool, str]]:
    out = []
    if "spine" in goals:
        report = anodyne.verify(anodyne.spine_certificate(T))
        out.append(("spine", report.ok, report.reason))
    if "horns" in goals:
        for e in faces.very_inner_edges(T):
            report = anodyne.verify(anodyne.multi_horn_certificate(T, [e]))
            out.append((f"horn {e}", report.ok, report.reason))
    return out


def cmd_cert_sweep(args) -> int:
    goals = _split(args.goals) or ["spine", "horns"]
    for g in goals:
        if g not in ("spine", "horns"):
            raise CLIError(f"unknown sweep goal {g!r}; have horns, spine")
    ts = trees.all_closed_trees(args.max_vertices)
    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        results = list(pool.map(lambda T: _sweep_one(T, goals), ts))
    built = sum(len(r) for r in results)
    bad = [
        (i, tag, reason)
        for i, r in enumerate(results)
        for tag, ok, reason in r
        if not ok
    ]
    for i, tag, reason in bad:
        print(f"FAIL tree {i} {tag}: {reason}", file=sys.stderr)
    print(f"trees {len(ts)} certificates {built} failed {len(bad)}")
    return EXIT_VERIFY if bad else EXIT_OK


# -------------------------------------------------------------- operad


def cmd_operad_random(args) -> int:
    import random as _random

    rng = _random.Random(args.seed)
    make = operads.random_open_operad if args.open else operads.random_closed_operad
    P = make(rng, args.colours, args.arity, args.generators)
    _emit_json(args, P.to_json_obj())
    return EXIT_OK


def cmd_operad_check(args) -> int:
    P = load_operad(args.operad)
    try:
        operads.check_axioms(P)
    except OperadError as err:
        print(f"FAIL: {err}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"axioms ok ({len(P.all_operations())} operations, {len(P.colours)} colours)")
    return EXIT_OK


def cmd_operad_restrict(args) -> int:
    _emit_json(args, operads.restrict_open(load_operad(args.operad)).to_json_obj())
    return EXIT_OK


def cmd_operad_coreflect(args) -> int:
    G = operads.coreflect_closed(load_operad(args.operad), args.arity_bound)
    _emit_json(args, G.to_json_obj())
    return EXIT_OK


def cmd_operad_closure(args) -> int:
    Q, report = operads.closure_bounded(load_operad(args.operad), args.bound)
    print(f"stable: {str(report.all_stable).lower()}", file=sys.stderr)
    _emit_json(args, Q.to_json_obj())
    return EXIT_OK


def cmd_operad_matching(args) -> int:
    P = load_operad(args.operad)
    sig = (tuple(_split([args.inputs])), args.output)
    keys, canonical = operads.matching_object(P, sig)

    def fam(key) -> str:
        return "<" + "|".join("".join(map(str, I)) + ":" + q.name for I, q in key) + ">"

    _emit_json(
        args,
        {
            "families": [fam(k) for k in keys],
            "canonical": {p.name: fam(k) for p, k in sorted(canonical.items())},
        },
    )
    return EXIT_OK


# --------------------------------------------------------------- nerve


def cmd_nerve_count(args) -> int:
    P = load_operad(args.operad)
    T = load_tree(args.tree)
    _emit(args, str(len(operads.nerve_dendrices(P, T))))
    return EXIT_OK


def cmd_nerve_fill(args) -> int:
    P = load_operad(args.operad)
    T = load_tree(args.tree)
    tokens = _split(args.omit)
    if not tokens:
        raise CLIError("nerve fill: need at least one --omit face")
    omit = [faces.parse_face_index(T, tok) for tok in tokens]
    assignments = operads.horn_assignments(P, T, omit, args.site)
    unfilled = sum(
        1 for a in assignments if not operads.horn_filling(P, T, omit, a, args.site)
    )
    print(f"assignments {len(assignments)} unfilled {unfilled}")
    return EXIT_VERIFY if unfilled else EXIT_OK


# ------------------------------------------------------------------ bv


def cmd_bv_dims(args) -> int:
    T = load_tree(args.tree)
    table = bv.profile_table(T, args.variant)
    if args.format == "json":
        _emit_json(args, [[[list(ins), out], dim] for (ins, out), dim in table])
    else:
        for (ins, out), dim in table:
            print(f"({','.join(ins)};{out}) {dim}")
    return EXIT_OK


def cmd_bv_index(args) -> int:
    T = load_tree(args.tree)
    edges = bv.cube_index(T, tuple(_split([args.inputs])), args.output, args.variant)
    _emit(args, " ".join(edges))
    return EXIT_OK


def cmd_bv_tower(args) -> int:
    stages = bv.interval_cube_tower(args.stages)
    if args.format == "json":
        _emit_json(args, [s.dim for s in stages])
    else:
        for k, s in enumerate(stages, start=1):
            print(f"stage {k}: dim {s.dim}")
    return EXIT_OK


# -------------------------------------------------------------- parser


def _add_out(p) -> None:
    p.add_argument("-o", "--out", help="write to a file instead of stdout")


def _add_site(p, default: str) -> None:
    p.add_argument("--site", choices=dendsets.SITES, default=default)


def build_parser() -> _Parser:
    p = _Parser(prog="dendrokit", description=__doc__)
    sub = p.add_subparsers(dest="verb", metavar="verb", required=True)

    q = sub.add_parser("tree", help="display or convert a tree")
    q.add_argument("tree", nargs="?")
    q.add_argument("--list", action="store_true", help="list catalog names")
    q.add_argument("--info", action="store_true", help="print edge roles")
    q.add_argument("--format", choices=("json", "dot"), default="json")
    q.add_argument("--mark", action="append", help="vertices drawn as open circles")
    q.add_argument("--contract", action="append", help="inner edges to contract first")
    q.add_argument("--closure", action="store_true", help="then cap every leaf")
    q.add_argument("--chop-stumps", action="store_true", help="then remove every stump")
    _add_out(q)
    q.set_defaults(func=cmd_tree)

    q = sub.add_parser("faces", help="list elementary faces")
    q.add_argument("tree")
    _add_site(q, "closed")
    q.add_argument("--format", choices=("text", "json"), default="text")
    _add_out(q)
    q.set_defaults(func=cmd_faces)

    q = sub.add_parser("horn", help="horn subobject omitting the given faces")
    q.add_argument("tree")
    q.add_argument("--omit", action="append", help="face token: inner:e, top:f, edge:e, root")
    _add_site(q, "closed")
    q.add_argument("--count", action="store_true")
    _add_out(q)
    q.set_defaults(func=cmd_horn)

    q = sub.add_parser("spine", help="union of the corollas at all vertices")
    q.add_argument("tree")
    _add_site(q, "closed")
    q.add_argument("--count", action="store_true")
    _add_out(q)
    q.set_defaults(func=cmd_spine)

    q = sub.add_parser("interior", help="open part of a closed tree")
    q.add_argument("tree")
    q.add_argument("--count-maximal", action="store_true")
    _add_out(q)
    q.set_defaults(func=cmd_interior)

    q = sub.add_parser("shuffles", help="maximal dendrices of a binary tensor")
    q.add_argument("--left", required=True)
    q.add_argument("--right", required=True)
    q.add_argument("--count", action="store_true")
    _add_out(q)
    q.set_defaults(func=cmd_shuffles)

    q = sub.add_parser("tensor", help="tensor product of several trees")
    q.add_argument("--nfold", nargs="+", required=True, metavar="TREE")
    q.add_argument("--left-assoc", action="store_true", help="iterate binary tensors")
    q.add_argument("--count-maximal", action="store_true")
    _add_out(q)
    q.set_defaults(func=cmd_tensor)

    q = sub.add_parser("cert", help="build, verify, or sweep extension certificates")
    csub = q.add_subparsers(dest="cert_verb", metavar="action", required=True)

    b = csub.add_parser("build", help="build a certificate for a named goal")
    b.add_argument(
        "goal",
        choices=(
            "spine",
            "multi-horn",
            "extended-horn",
            "corner",
            "partial-horn",
            "grafting",
            "interval-tower",
        ),
    )
    b.add_argument("--tree", help="subject tree (spine, horns, partial-horn, grafting)")
    b.add_argument("--edges", action="append", help="very inner edges to fill")
    b.add_argument("--extra", action="append", help="extra omitted inner edges")
    b.add_argument("--left", help="corner: tree carrying the horn")
    b.add_argument("--edge", help="corner / partial-horn: the filled edge")
    b.add_argument("--right", help="corner: tree carrying the boundary")
    b.add_argument("--missing-stumps", action="append", help="partial-horn: omitted tops")
    b.add_argument("--stages", type=int, default=1, help="interval-tower height")
    _add_out(b)
    b.set_defaults(func=cmd_cert_build)

    v = csub.add_parser("verify", help="check a certificate file ('-' for stdin)")
    v.add_argument("file")
    v.set_defaults(func=cmd_cert_verify)

    s = csub.add_parser("sweep", help="build and verify over all small closed trees")
    s.add_argument("--max-vertices", type=int, default=4)
    s.add_argument("--goals", action="append", help="horns, spine (default both)")
    s.set_defaults(func=cmd_cert_sweep)

    q = sub.add_parser("operad", help="finite coloured operads and their adjunctions")
    osub = q.add_subparsers(dest="operad_verb", metavar="action", required=True)

    r = osub.add_parser("random", help="endomorphism suboperad from a seeded RNG")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--open", action="store_true", help="no constants instead of unital")
    r.add_argument("--colours", type=int, default=2)
    r.add_argument("--arity", type=int, default=2)
    r.add_argument("--generators", type=int, default=3)
    _add_out(r)
    r.set_defaults(func=cmd_operad_random)

    c = osub.add_parser("check", help="run the exhaustive axiom checker")
    c.add_argument("operad")
    c.set_defaults(func=cmd_operad_check)

    c = osub.add_parser("restrict", help="drop the constants of a unital operad")
    c.add_argument("operad")
    _add_out(c)
    c.set_defaults(func=cmd_operad_restrict)

    c = osub.add_parser("coreflect", help="unital coreflection of an open operad")
    c.add_argument("operad")
    c.add_argument("--arity-bound", type=int)
    _add_out(c)
    c.set_defaults(func=cmd_operad_coreflect)

    c = osub.add_parser("closure", help="bounded unital closure of an open operad")
    c.add_argument("operad")
    c.add_argument("--bound", type=int, required=True)
    _add_out(c)
    c.set_defaults(func=cmd_operad_closure)

    c = osub.add_parser("matching", help="constant-substitution families at a signature")
    c.add_argument("operad")
    c.add_argument("--inputs", required=True, help="comma-separated input colours")
    c.add_argument("--output", required=True)
    _add_out(c)
    c.set_defaults(func=cmd_operad_matching)

    q = sub.add_parser("nerve", help="dendrices of an operad nerve")
    nsub = q.add_subparsers(dest="nerve_verb", metavar="action", required=True)

    n = nsub.add_parser("count", help="number of dendrices of a given shape")
    n.add_argument("operad")
    n.add_argument("--tree", required=True)
    _add_out(n)
    n.set_defaults(func=cmd_nerve_count)

    n = nsub.add_parser("fill", help="try to fill every assignment of a horn")
    n.add_argument("operad")
    n.add_argument("--tree", required=True)
    n.add_argument("--omit", action="append")
    _add_site(n, "closed")
    n.set_defaults(func=cmd_nerve_fill)

    q = sub.add_parser("bv", help="cube-length resolutions")
    bsub = q.add_subparsers(dest="bv_verb", metavar="action", required=True)

    d = bsub.add_parser("dims", help="cube dimension of every profile")
    d.add_argument("tree")
    d.add_argument("--variant", choices=(bv.OPEN, bv.CLOSED), default=bv.CLOSED)
    d.add_argument("--format", choices=("text", "json"), default="text")
    _add_out(d)
    d.set_defaults(func=cmd_bv_dims)

    d = bsub.add_parser("index", help="length-carrying edges of one profile")
    d.add_argument("tree")
    d.add_argument("--inputs", required=True, help="comma-separated input edges")
    d.add_argument("--output", required=True)
    d.add_argument("--variant", choices=(bv.OPEN, bv.CLOSED), default=bv.CLOSED)
    _add_out(d)
    d.set_defaults(func=cmd_bv_index)

    d = bsub.add_parser("tower", help="interval cube tower dimensions")
    d.add_argument("stages", type=int)
    d.add_argument("--format", choices=("text", "json"), default="text")
    _add_out(d)
    d.set_defaults(func=cmd_bv_tower)

    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CLIError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    except (CertBuildError, OperadError, BVError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


def main(argv=None) -> None:
    raise SystemExit(run(argv))


if __name__ == "__main__":
    main()
