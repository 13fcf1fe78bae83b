"""Command-line front end.

Exit codes: 0 success / verified, 1 refuted (or an unreducible point),
2 usage or schema error, 3 xi rejected, 4 degenerate cone without --quotient.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import io
from .cones import PolyCone, QuadCone, lineality_space, project_quotient
from .domains import (
    DegenerateConeError,
    WorkbenchError,
    XiRejected,
    default_xi,
    dirichlet_domain,
    lift_degenerate,
    reduce_point,
    side_pairings,
    verify_weak_domain,
    with_status,
)
from .exact import DimensionError, det, fmt_mat, fmt_vec, inertia, vec
from .groups import preserves_cone, word_bfs

log = logging.getLogger("conebench")

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_XI, EXIT_DEGENERATE = 0, 1, 2, 3, 4


def _csv(text: str):
    text = text.strip()
    if not text:
        return ()
    try:
        return vec(p.strip() for p in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a comma-separated rational vector: {text!r}")


def _show(v) -> str:
    return "(" + ", ".join(fmt_vec(v)) + ")"


def _show_mat(m) -> str:
    return "[" + ", ".join("[" + ", ".join(fmt_vec(r)) + "]" for r in m) + "]"


def _emit(args, doc: dict, text: str) -> None:
    if args.out:
        io.write_json(args.out, doc)
    if args.format == "json" and not args.out:
        sys.stdout.write(io.dumps(doc))
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _load(args) -> dict:
    ref = args.input or args.path
    if ref is None:
        raise io.SchemaError("no input given (use --input PATH or a fixture name)")
    return io.read_input(ref)


def cmd_describe(args) -> int:
    spec = io.spec_from_json(_load(args))
    c, g = spec.cone, spec.group
    lin = lineality_space(c)
    doc = {"dim": spec.lattice_dim, "lineality": [fmt_vec(w) for w in lin], "non_degenerate": not lin}
    lines = [f"dim: {spec.lattice_dim}"]
    if isinstance(c, QuadCone):
        pos, negc, _ = inertia(c.Q)
        doc.update(cone_class="quadratic", signature=[pos, negc], Q=fmt_mat(c.Q), selector=fmt_vec(c.selector))
        lines.append(f"cone: quadratic, signature ({pos}, {negc}), selector {_show(c.selector)}")
    else:
        doc.update(cone_class="polyhedral", generators=[fmt_vec(v) for v in c.generators],
                   facets=[fmt_vec(v) for v in c.facets])
        lines.append(f"cone: polyhedral, {len(c.generators)} generators, {len(c.facets)} facets")
        lines += [f"  generator {_show(v)}" for v in c.generators]
        lines += [f"  facet     {_show(v)} >= 0" for v in c.facets]
    lines.append(f"lineality: dim {len(lin)} {' '.join(_show(w) for w in lin)}".rstrip())
    lines.append("non-degenerate: " + ("yes (contains no affine line)" if not lin else "no (contains an affine line)"))
    gens = []
    lines.append(f"group: {len(g.generators)} generator(s)")
    for i, name in enumerate(g.names):
        m = g.generators[i]
        ok = preserves_cone(g.word([(i, 1)]), c)
        gens.append({"name": name, "matrix": fmt_mat(m), "det": str(det(m)), "preserves_cone": ok})
        lines.append(f"  {name} = {_show_mat(m)} det {det(m)} preserves cone: {'yes' if ok else 'NO'}")
    doc["group"] = gens
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def _build_candidate(spec, args):
    depth = args.depth if args.depth is not None else (spec.depth or 4)
    if getattr(args, "quotient", False) or spec.xi_quotient is not None:
        xq = args.xi if args.xi is not None else spec.xi_quotient
        if xq is None:
            raise io.SchemaError("--quotient needs --xi in V/W coordinates")
        return lift_degenerate(spec.cone, spec.group, xq, depth)
    xi = args.xi if args.xi is not None else (spec.xi or default_xi(spec.cone))
    return dirichlet_domain(spec.cone, spec.group, xi, depth, spec.pairing)


def cmd_domain(args) -> int:
    spec = io.spec_from_json(_load(args))
    cand = _build_candidate(spec, args)
    doc = io.candidate_to_json(cand)
    pi = cand.pi
    text = [f"domain at depth {cand.depth}, xi {_show(cand.xi)}"]
    text += [f"  generator {_show(g)}" for g in pi.generators]
    text += [f"  lineality {_show(w)}" for w in pi.lineality_basis]
    text += [f"  facet     {_show(n)} >= 0" for n in pi.facets]
    if args.format == "json" or args.out:
        _emit(args, doc, "\n".join(text))
    else:
        sys.stdout.write("\n".join(text) + "\n")
    return EXIT_OK


def _candidate_from_input(args):
    doc = _load(args)
    if "spec" in doc and "lattice_dim" not in doc:
        doc = doc["spec"]
    if "pi" not in doc:
        raise io.SchemaError("input has no candidate domain 'pi' (run the domain command first)")
    return io.load_candidate(doc)


def cmd_verify(args) -> int:
    cand = _candidate_from_input(args)
    depth = args.depth if args.depth is not None else 4
    status = verify_weak_domain(cand, depth, args.samples, args.seed)
    pairings = side_pairings(with_status(cand, status), depth) if status.verified else None
    doc = io.certificate_to_json(cand, status, pairings)
    text = f"{status.kind} (depth {status.depth}, samples {status.samples}, seed {status.seed})"
    if status.refuted:
        ce = io.status_to_json(status)["counterexample"]
        text += f"\ncounterexample: {ce.get('reason')}"
        if "word" in ce:
            text += f" word {ce['word']['word']}"
        if "point" in ce:
            text += f" point ({', '.join(ce['point'])})"
    _emit(args, doc, text)
    return EXIT_OK if status.verified else EXIT_REFUTED


def cmd_reduce(args) -> int:
    doc = _load(args)
    spec = io.spec_from_json(doc)
    if spec.pi is not None:
        cand = io.load_candidate(doc.get("spec", doc))
    else:
        cand = _build_candidate(spec, args)
    if args.point is None:
        raise io.SchemaError("reduce needs --point")
    trace = reduce_point(cand, args.point, args.budget)
    out = io.trace_to_json(trace)
    text = f"word {trace.word}\noutput {', '.join(fmt_vec(trace.output))}"
    if not trace.complete:
        text += "\nbudget exhausted: point not reduced into the domain"
    _emit(args, out, text)
    return EXIT_OK if trace.complete else EXIT_REFUTED


def cmd_quotient(args) -> int:
    spec = io.spec_from_json(_load(args))
    w = lineality_space(spec.cone)
    q = project_quotient(spec.cone, w)
    induced = [q.induced(m) for m in spec.group.generators]
    doc = {
        "kernel": [fmt_vec(v) for v in q.kernel_basis],
        "projection": fmt_mat(q.projection),
        "lift": fmt_mat(q.lift),
        "cone": io.cone_to_json(q.cone),
        "induced_group": {"generators": [fmt_mat(m) for m in induced], "names": list(spec.group.names)},
    }
    lines = [f"W: dim {len(q.kernel_basis)} {' '.join(_show(v) for v in q.kernel_basis)}".rstrip(),
             f"V/W: dim {len(q.projection)}"]
    if isinstance(q.cone, PolyCone):
        lines += [f"  generator {_show(g)}" for g in q.cone.generators]
        lines += [f"  lineality {_show(v)}" for v in q.cone.lineality_basis]
    lines += [f"  {name} acts as {_show_mat(m)}" for name, m in zip(spec.group.names, induced)]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_orbit(args) -> int:
    spec = io.spec_from_json(_load(args))
    depth = args.depth if args.depth is not None else 4
    rep = word_bfs(spec.group, depth)
    doc = {"depth": depth, "truncated": rep.truncated, "elements": [io.word_to_json(w) for w in rep.elements]}
    lines = [f"{len(rep.elements)} elements to depth {depth}" + (" (truncated)" if rep.truncated else "")]
    lines += [f"  {w}: {_show_mat(w.matrix)}" for w in rep.elements]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_pairings(args) -> int:
    cand = _candidate_from_input(args)
    depth = args.depth if args.depth is not None else 4
    rep = side_pairings(cand, depth)
    doc = io.pairings_to_json(rep)
    lines = [f"{len(rep.pairings)} side pairing(s)"]
    lines += [f"  {p.gamma}: facet {_show(p.facet)} -> {_show(p.image_facet)}" for p in rep.pairings]
    lines += [f"  boundary of C: {_show(n)}" for n in rep.boundary_facets]
    lines += [f"  unmatched: {_show(n)}" for n in rep.unmatched_facets]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


COMMANDS = {
    "describe": cmd_describe,
    "domain": cmd_domain,
    "verify": cmd_verify,
    "reduce": cmd_reduce,
    "quotient": cmd_quotient,
    "orbit": cmd_orbit,
    "pairings": cmd_pairings,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", nargs="?", help="spec/candidate JSON file or fixture name")
    common.add_argument("--input", help="spec/candidate JSON file or fixture name")
    common.add_argument("--xi", type=_csv)
    common.add_argument("--point", type=_csv)
    common.add_argument("--depth", type=int)
    common.add_argument("--samples", type=int, default=500)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--budget", type=int, default=10_000)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out")
    common.add_argument("--quotient", action="store_true", help="lift a domain from V/W (degenerate cones)")
    parser = argparse.ArgumentParser(prog="conebench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    level = os.environ.get("WORKBENCH_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING) if not level.isdigit() else int(level),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except XiRejected as exc:
        print(f"xi rejected: {exc}", file=sys.stderr)
        return EXIT_XI
    except DegenerateConeError as exc:
        print(f"{exc} (pass --quotient with --xi in V/W coordinates)", file=sys.stderr)
        return EXIT_DEGENERATE
    except (io.SchemaError, DimensionError, WorkbenchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
