"""JSON schemas for instance documents and their parts.

Scalars serialize as integers over GF(p) and as "a/b" strings over the
rationals.  Parse errors carry slash-separated paths into the document.
"""

from __future__ import annotations

import json

import numpy as np

from .algebra import StructureAlgebra
from .bimodule import Bimodule, LeftModule
from .crossed import TwistedPartialAction
from .gmod import GradedModule
from .graded import GradedRing
from .groups import group_from_json, group_to_json
from .linalg import field_from_json, field_to_json
from .semiperfect import IdempotentFrame

DOCUMENT_VERSION = "1"


class DocumentError(ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


def _vec_to_json(field, v):
    return [field.scalar_to_json(x) for x in v]


def _vec_from_json(field, doc, path):
    if not isinstance(doc, list):
        raise DocumentError(path, "expected a list of scalars")
    return field.asarray([field.scalar_from_json(x) for x in doc])


def _mat_to_json(field, m):
    return [[field.scalar_to_json(x) for x in row] for row in np.asarray(m)]


def _mat_from_json(field, doc, path):
    if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
        raise DocumentError(path, "expected a list of scalar rows")
    return field.asarray([[field.scalar_from_json(x) for x in row] for row in doc])


def _elem_key(group, g):
    if hasattr(group, "order"):
        return str(int(g))
    return ",".join(str(x) for x in g)


def _elem_from_key(group, key, path):
    try:
        if hasattr(group, "order"):
            return group.element_from_json(int(key))
        return group.element_from_json([int(x) for x in key.split(",")])
    except (ValueError, TypeError) as exc:
        raise DocumentError(path, f"bad group element {key!r}: {exc}")


# ---------------------------------------------------------------------------


def algebra_to_json(alg: StructureAlgebra):
    f = alg.field
    return {
        "field": field_to_json(f),
        "dim": alg.dim,
        "basis": list(alg.basis_names),
        "mul": [[_vec_to_json(f, alg.table[i, j]) for j in range(alg.dim)]
                for i in range(alg.dim)],
        "unit": _vec_to_json(f, alg.unit),
    }


def algebra_from_json(doc, path="/algebra"):
    for key in ("field", "dim", "mul", "unit"):
        if key not in doc:
            raise DocumentError(path, f"missing key {key!r}")
    try:
        field = field_from_json(doc["field"])
    except ValueError as exc:
        raise DocumentError(path + "/field", str(exc))
    dim = doc["dim"]
    table = [[_vec_from_json(field, doc["mul"][i][j], f"{path}/mul/{i}/{j}")
              for j in range(dim)] for i in range(dim)]
    unit = _vec_from_json(field, doc["unit"], path + "/unit")
    try:
        return StructureAlgebra(field, table, unit, basis_names=doc.get("basis"))
    except ValueError as exc:
        raise DocumentError(path, str(exc))


def graded_to_json(g: GradedRing):
    return {
        "group": group_to_json(g.group),
        "degrees": [g.group.element_to_json(d) for d in g.degrees],
    }


def graded_from_json(alg, doc, path="/grading"):
    for key in ("group", "degrees"):
        if key not in doc:
            raise DocumentError(path, f"missing key {key!r}")
    try:
        grp = group_from_json(doc["group"])
    except (ValueError, KeyError) as exc:
        raise DocumentError(path + "/group", str(exc))
    try:
        degrees = [grp.element_from_json(d) for d in doc["degrees"]]
        return GradedRing(alg, grp, degrees)
    except ValueError as exc:
        raise DocumentError(path, str(exc))


def tpa_to_json(t: TwistedPartialAction):
    f = t.base.field
    out = {
        "idem": {_elem_key(t.group, g): _vec_to_json(f, v) for g, v in t.idem.items()},
        "alpha": {_elem_key(t.group, g): _mat_to_json(f, m) for g, m in t.alpha.items()},
        "degrees": [t.group.element_to_json(g) for g in t.degrees],
    }
    if t.omega:
        out["omega"] = {
            f"{_elem_key(t.group, g)}|{_elem_key(t.group, h)}": {
                "value": _vec_to_json(f, v),
                "inverse": _vec_to_json(f, t.omega_inv_of(g, h)),
            }
            for (g, h), v in t.omega.items()
        }
    return out


def tpa_from_json(base, group, doc, path="/tpa"):
    f = base.field
    idem = {}
    for key, v in doc.get("idem", {}).items():
        g = _elem_from_key(group, key, f"{path}/idem/{key}")
        idem[g] = _vec_from_json(f, v, f"{path}/idem/{key}")
    alpha = {}
    for key, m in doc.get("alpha", {}).items():
        g = _elem_from_key(group, key, f"{path}/alpha/{key}")
        alpha[g] = _mat_from_json(f, m, f"{path}/alpha/{key}")
    omega, omega_inv = {}, {}
    for key, entry in doc.get("omega", {}).items():
        gk, hk = key.split("|")
        g = _elem_from_key(group, gk, f"{path}/omega/{key}")
        h = _elem_from_key(group, hk, f"{path}/omega/{key}")
        omega[(g, h)] = _vec_from_json(f, entry["value"], f"{path}/omega/{key}/value")
        omega_inv[(g, h)] = _vec_from_json(f, entry["inverse"],
                                           f"{path}/omega/{key}/inverse")
    degrees = None
    if "degrees" in doc:
        degrees = [group.element_from_json(d) for d in doc["degrees"]]
    return TwistedPartialAction(base, group, idem, alpha, omega, omega_inv,
                                degrees=degrees)


def graded_module_to_json(m: GradedModule):
    f = m.field
    return {
        "degrees": [m.graded.group.element_to_json(d) for d in m.degrees],
        "action": [_mat_to_json(f, a) for a in m.acts],
    }


def graded_module_from_json(graded, doc, path):
    f = graded.algebra.field
    degrees = [graded.group.element_from_json(d) for d in doc["degrees"]]
    acts = [_mat_from_json(f, a, f"{path}/action/{i}") for i, a in enumerate(doc["action"])]
    try:
        return GradedModule(graded, degrees, acts)
    except ValueError as exc:
        raise DocumentError(path, str(exc))


def left_module_to_json(m: LeftModule):
    f = m.ring.field
    return {"action": [_mat_to_json(f, a) for a in m.acts]}


def left_module_from_json(ring, doc, path):
    f = ring.field
    acts = [_mat_from_json(f, a, f"{path}/action/{i}") for i, a in enumerate(doc["action"])]
    try:
        return LeftModule(ring, acts)
    except ValueError as exc:
        raise DocumentError(path, str(exc))


def bimodule_to_json(m: Bimodule):
    f = m.ring.field
    return {
        "dim": m.dim,
        "left": [_mat_to_json(f, a) for a in m.left],
        "right": [_mat_to_json(f, a) for a in m.right],
    }


def frame_to_json(frame: IdempotentFrame):
    f = frame.ring.field
    out = {"E": [_vec_to_json(f, e) for e in frame.E]}
    if frame.completion is not None:
        out["completion"] = [_vec_to_json(f, e) for e in frame.completion]
        out["assignment"] = list(frame.assignment)
    return out


def frame_from_json(ring, doc, path="/frame"):
    f = ring.field
    if "E" not in doc:
        raise DocumentError(path, "missing key 'E'")
    es = [_vec_from_json(f, e, f"{path}/E/{i}") for i, e in enumerate(doc["E"])]
    completion = None
    assignment = None
    if "completion" in doc:
        completion = [_vec_from_json(f, e, f"{path}/completion/{i}")
                      for i, e in enumerate(doc["completion"])]
        assignment = doc.get("assignment")
    try:
        return IdempotentFrame(ring, es, completion=completion, assignment=assignment)
    except ValueError as exc:
        raise DocumentError(path, str(exc))


# ---------------------------------------------------------------------------
# documents


class Instance:
    """Parsed instance document: algebra plus optional layers."""

    def __init__(self, algebra, graded=None, tpa=None, modules=None,
                 left_modules=None, frame_doc=None, tasks=None):
        self.algebra = algebra
        self.graded = graded
        self.tpa = tpa
        self.modules = modules or {}
        self.left_modules = left_modules or {}
        self.frame_doc = frame_doc
        self.tasks = tasks or []


def document_to_json(instance_parts):
    """Assemble a canonical document from the given parts dict."""
    out = {"version": DOCUMENT_VERSION}
    out.update(instance_parts)
    return out


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def parse_document(doc) -> Instance:
    if not isinstance(doc, dict):
        raise DocumentError("/", "document must be a JSON object")
    if doc.get("version") != DOCUMENT_VERSION:
        raise DocumentError("/version", f"unsupported version {doc.get('version')!r}")
    if "algebra" not in doc:
        raise DocumentError("/", "missing key 'algebra'")
    alg = algebra_from_json(doc["algebra"])
    graded = None
    if "grading" in doc:
        graded = graded_from_json(alg, doc["grading"])
    tpa = None
    if "tpa" in doc:
        grp = graded.group if graded is not None else group_from_json(
            doc.get("group", doc["tpa"].get("group", {"finite": {"table": [[0]], "identity": 0}})))
        if "group" in doc:
            grp = group_from_json(doc["group"])
        tpa = tpa_from_json(alg, grp, doc["tpa"])
    modules = {}
    left_modules = {}
    if graded is not None:
        for name, mdoc in doc.get("modules", {}).items():
            modules[name] = graded_module_from_json(graded, mdoc, f"/modules/{name}")
        r, _ = graded.R_corner()
        for name, mdoc in doc.get("left_modules", {}).items():
            left_modules[name] = left_module_from_json(r, mdoc, f"/left_modules/{name}")
    return Instance(alg, graded, tpa, modules, left_modules,
                    doc.get("frame"), doc.get("tasks"))
