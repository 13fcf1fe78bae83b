"""JSON interchange: specs, candidates, certificates and the fixture gallery.

All rationals are strings ``"p/q"``; output is written with sorted keys so
golden files diff cleanly.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema

from .cones import ConeRef, PolyCone, QuadCone, _from_spanning, cone_from_facets
from .domains import (
    STANDARD,
    QUADRATIC,
    DomainCandidate,
    PairingReport,
    ReductionTrace,
    Status,
    UNVERIFIED,
    default_pairing,
    lift_degenerate,
)
from .exact import fmt_mat, fmt_vec, mat, vec
from .groups import GroupSpec, Word


class SchemaError(ValueError):
    pass


_SCHEMA = None


def schema() -> dict:
    global _SCHEMA
    if _SCHEMA is None:
        _SCHEMA = json.loads(resources.files("conebench").joinpath("schema.json").read_text())
    return _SCHEMA


def validate(doc: dict) -> None:
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"schema violation at /{'/'.join(map(str, exc.absolute_path))}: {exc.message}") from None


# -- cones -----------------------------------------------------------------

def cone_to_json(c: ConeRef) -> dict:
    if isinstance(c, QuadCone):
        return {"dim": c.dim, "type": "quadratic", "Q": fmt_mat(c.Q), "selector": fmt_vec(c.selector)}
    return {
        "dim": c.dim,
        "type": "polyhedral",
        "generators": [fmt_vec(g) for g in c.generators],
        "facets": [fmt_vec(n) for n in c.facets],
        "lineality": [fmt_vec(w) for w in c.lineality_basis],
    }


def cone_from_json(doc: dict, dim: Optional[int] = None) -> ConeRef:
    dim = doc.get("dim", dim)
    try:
        if doc["type"] == "quadratic":
            q = mat(doc["Q"])
            return QuadCone(len(q) if dim is None else dim, q, vec(doc["selector"]))
        gens = [vec(g) for g in doc.get("generators", [])]
        lin = [vec(w) for w in doc.get("lineality", [])]
        if dim is None:
            sample = gens or lin or [vec(n) for n in doc.get("facets", [])]
            if not sample:
                raise SchemaError("cannot infer cone dimension")
            dim = len(sample[0])
        if "generators" in doc or "lineality" in doc:
            if not gens and not lin:
                raise SchemaError("cone has no generators")
            return _from_spanning(gens, lin, dim)
        return cone_from_facets(doc.get("facets", []), dim)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"invalid cone: {exc}") from None


# -- groups and words ------------------------------------------------------

def group_to_json(g: GroupSpec) -> dict:
    return {"generators": [fmt_mat(m) for m in g.generators], "names": list(g.names)}


def group_from_json(doc: dict, dim: int) -> GroupSpec:
    gens = doc.get("generators", [])
    names = doc.get("names") or [f"g{i}" for i in range(len(gens))]
    try:
        return GroupSpec.build(gens, names, dim)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"invalid group: {exc}") from None


def word_to_json(w: Word) -> dict:
    return {"word": str(w), "letters": [list(l) for l in w.letters], "matrix": fmt_mat(w.matrix)}


def _jsonable(value):
    if isinstance(value, Word):
        return word_to_json(value)
    if isinstance(value, tuple) and all(hasattr(a, "denominator") for a in value):
        return fmt_vec(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def status_to_json(s: Status) -> dict:
    out = {"status": s.kind}
    for key in ("depth", "samples", "seed"):
        if getattr(s, key) is not None:
            out[key] = getattr(s, key)
    if s.counterexample is not None:
        out["counterexample"] = _jsonable(s.counterexample)
    return out


def status_from_json(doc: Optional[dict]) -> Status:
    if not doc:
        return Status()
    return Status(doc.get("status", UNVERIFIED), doc.get("depth"), doc.get("samples"), doc.get("seed"),
                  doc.get("counterexample"))


def pairings_to_json(report: PairingReport) -> dict:
    return {
        "pairings": [
            {"facet": fmt_vec(p.facet), "gamma": word_to_json(p.gamma), "image_facet": fmt_vec(p.image_facet)}
            for p in report.pairings
        ],
        "boundary_facets": [fmt_vec(n) for n in report.boundary_facets],
        "unmatched_facets": [fmt_vec(n) for n in report.unmatched_facets],
    }


def trace_to_json(t: ReductionTrace) -> dict:
    return {
        "input": fmt_vec(t.input),
        "word": word_to_json(t.word),
        "output": fmt_vec(t.output),
        "pairings_evaluated": t.pairings_evaluated,
        "complete": t.complete,
    }


# -- workbench specs and candidates ----------------------------------------

@dataclass(frozen=True)
class WorkbenchSpec:
    lattice_dim: int
    cone: ConeRef
    group: GroupSpec
    pairing: str
    xi: Optional[tuple] = None
    pi: Optional[PolyCone] = None
    depth: Optional[int] = None
    status: Status = Status()
    xi_quotient: Optional[tuple] = None

    def candidate(self, xi=None, depth: int = 4) -> DomainCandidate:
        """The externally supplied ``pi`` as an unverified candidate."""
        from .domains import default_xi

        if self.pi is None:
            raise SchemaError("spec has no pi")
        xi = vec(xi) if xi is not None else (self.xi or default_xi(self.cone))
        return DomainCandidate(self.pi, xi, self.depth or depth, self.group, self.cone, self.pairing, self.status)


def spec_from_json(doc: dict) -> WorkbenchSpec:
    if "spec" in doc and "lattice_dim" not in doc:
        doc = doc["spec"]
    validate(doc)
    d = doc["lattice_dim"]
    cone = cone_from_json(doc["cone"], d)
    if cone.dim != d:
        raise SchemaError(f"cone dimension {cone.dim} != lattice_dim {d}")
    group = group_from_json(doc.get("group", {}), d)
    pairing = doc.get("pairing", default_pairing(cone))
    if pairing == QUADRATIC and not isinstance(cone, QuadCone):
        raise SchemaError("pairing 'quadratic-form' requires a quadratic cone")
    xi = vec(doc["xi"]) if "xi" in doc else None
    if xi is not None and len(xi) != d:
        raise SchemaError("xi has wrong length")
    pi = None
    if "pi" in doc:
        pi = cone_from_json(doc["pi"], d)
        if not isinstance(pi, PolyCone) or pi.dim != d:
            raise SchemaError("pi must be a polyhedral cone of dimension lattice_dim")
    xq = None
    if "quotient" in doc:
        xq = vec(doc["quotient"]["xi"])
    return WorkbenchSpec(d, cone, group, pairing, xi, pi, doc.get("depth"), status_from_json(doc.get("status")), xq)


def load_candidate(doc: dict) -> DomainCandidate:
    spec = spec_from_json(doc)
    if spec.xi_quotient is not None:
        cand = lift_degenerate(spec.cone, spec.group, spec.xi_quotient, spec.depth or 4)
        if spec.pi is not None and not cand.pi.same_set(spec.pi):
            raise SchemaError("stored pi does not match the lifted quotient domain")
        return DomainCandidate(cand.pi, cand.xi, cand.depth, cand.group, cand.cone, cand.pairing,
                               spec.status, cand.quotient)
    return spec.candidate()


def candidate_to_json(c: DomainCandidate) -> dict:
    out = {
        "lattice_dim": c.cone.dim,
        "cone": cone_to_json(c.cone),
        "group": group_to_json(c.group),
        "pairing": c.pairing,
        "xi": fmt_vec(c.xi),
        "depth": c.depth,
        "pi": cone_to_json(c.pi),
        "status": status_to_json(c.status),
    }
    if c.quotient is not None:
        q = c.quotient.quotient
        out["quotient"] = {
            "xi": fmt_vec(c.quotient.candidate.xi),
            "kernel": [fmt_vec(w) for w in q.kernel_basis],
            "projection": fmt_mat(q.projection),
            "lift": fmt_mat(q.lift),
            "pi": cone_to_json(c.quotient.candidate.pi),
        }
    return out


def certificate_to_json(c: DomainCandidate, status: Status, pairings: Optional[PairingReport] = None) -> dict:
    out = status_to_json(status)
    out["pi"] = cone_to_json(c.pi)
    out["pairings"] = pairings_to_json(pairings)["pairings"] if pairings is not None else []
    return out


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path, doc) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
    os.replace(tmp, path)


# -- fixtures --------------------------------------------------------------

def fixture_names() -> list:
    root = resources.files("conebench").joinpath("fixtures")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> dict:
    root = resources.files("conebench").joinpath("fixtures")
    path = root.joinpath(f"{name}.json")
    if not path.is_file():
        raise SchemaError(f"no fixture named {name!r}")
    return json.loads(path.read_text(encoding="utf-8"))


def read_input(ref: str) -> dict:
    """Load a JSON file, or a shipped fixture by name (``fibonacci`` or ``fixture:fibonacci``)."""
    if ref.startswith("fixture:"):
        return load_fixture(ref[len("fixture:"):])
    p = Path(ref)
    if p.is_file():
        try:
            return json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{ref}: invalid JSON ({exc})") from None
    if ref in fixture_names():
        return load_fixture(ref)
    raise SchemaError(f"no such file or fixture: {ref}")
