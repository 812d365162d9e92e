"""JSON problem documents: schema, parsing and exact serialisation.

Numbers are exact: integers, ``"p/q"`` strings, or ``{"re": x, "im": y}`` for
Gaussian rationals.  Matrices are row-major arrays of arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import jsonschema

from .centralfibre import CentralFibreModel, Stratum
from .errors import InputError
from .exactla import Gauss, Matrix, Subspace, to_scalar
from .hodge import HodgeFiltration, Polarization
from .monodromy import MonodromyOperator, log_unipotent
from .nodal import NodalConfiguration

SCHEMA_VERSION = 1

_rational = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*[-+]?\d+\s*(/\s*\d+\s*)?$"},
    ]
}
_scalar = {
    "oneOf": [
        _rational,
        {
            "type": "object",
            "properties": {"re": _rational, "im": _rational},
            "additionalProperties": False,
        },
    ]
}
_matrix = {"type": "array", "items": {"type": "array", "items": _scalar}}
_rational_matrix = {"type": "array", "items": {"type": "array", "items": _rational}}
_hodge_grid = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}, "minItems": 1}

MONODROMY_PAYLOAD = {
    "type": "object",
    "properties": {
        "T": _rational_matrix,
        "N": _rational_matrix,
        "Q": _rational_matrix,
        "alpha": {"type": "array", "items": _scalar, "minItems": 1},
        "F": {"type": "object", "patternProperties": {r"^\d+$": _matrix}, "additionalProperties": False},
        "description": {"type": "string"},
    },
    "required": ["Q", "alpha"],
    "oneOf": [{"required": ["T"]}, {"required": ["N"]}],
    "additionalProperties": False,
}

FIBRE_PAYLOAD = {
    "type": "object",
    "properties": {
        "components": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {"id": {"type": "string"}, "hodge": _hodge_grid},
                "required": ["id", "hodge"],
                "additionalProperties": False,
            },
        },
        "strata": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "string"},
                    "components": {"type": "array", "items": {"type": "string"}, "minItems": 2},
                    "hodge": _hodge_grid,
                    "faces": {"type": "array", "items": {"type": "string"}},
                },
                "required": ["id", "components", "hodge"],
                "additionalProperties": False,
            },
        },
        "restriction_maps": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "p": {"type": "integer", "minimum": 0},
                    "q": {"type": "integer", "minimum": 1},
                    "matrix": _rational_matrix,
                },
                "required": ["p", "q", "matrix"],
                "additionalProperties": False,
            },
        },
        "description": {"type": "string"},
    },
    "required": ["components"],
    "additionalProperties": False,
}

NODAL_PAYLOAD = {
    "type": "object",
    "properties": {
        "nodes": {"type": "integer", "minimum": 1},
        "k": {"type": "integer"},
        "description": {"type": "string"},
    },
    "required": ["nodes"],
    "additionalProperties": False,
}

PAIRED_PAYLOAD = {
    "type": "object",
    "properties": {
        "orbit": MONODROMY_PAYLOAD,
        "fibre": FIBRE_PAYLOAD,
        "nodal": NODAL_PAYLOAD,
        "description": {"type": "string"},
    },
    "required": ["orbit"],
    "oneOf": [{"required": ["fibre"]}, {"required": ["nodal"]}],
    "additionalProperties": False,
}

DOCUMENT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "mode": {"enum": ["monodromy", "central_fibre", "nodal", "paired"]},
        "n": {"type": "integer", "minimum": 1},
        "payload": {"type": "object"},
    },
    "required": ["schema_version", "mode", "n", "payload"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"mode": {"const": m}}}, "then": {"properties": {"payload": s}}}
        for m, s in (
            ("monodromy", MONODROMY_PAYLOAD),
            ("central_fibre", FIBRE_PAYLOAD),
            ("nodal", NODAL_PAYLOAD),
            ("paired", PAIRED_PAYLOAD),
        )
    ],
}


class DocumentError(InputError):
    """Malformed document; ``location`` is a JSON path or ``line:col``."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


# ---------------------------------------------------------------------------
# scalars


def scalar_from_json(x):
    if isinstance(x, dict):
        return to_scalar(Gauss(Fraction(str(x.get("re", 0)).replace(" ", "")), Fraction(str(x.get("im", 0)).replace(" ", ""))))
    if isinstance(x, str):
        return Fraction(x.replace(" ", ""))
    if isinstance(x, bool) or not isinstance(x, int):
        raise DocumentError(f"not an exact scalar: {x!r}")
    return Fraction(x)


def _rational_to_json(q: Fraction):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def scalar_to_json(x):
    x = to_scalar(x)
    if isinstance(x, Gauss):
        return {"re": _rational_to_json(x.re), "im": _rational_to_json(x.im)}
    return _rational_to_json(x)


def matrix_to_json(m: Matrix) -> list:
    return [[scalar_to_json(x) for x in r] for r in m.rows]


def vector_to_json(v) -> list:
    return [scalar_to_json(x) for x in v]


def to_jsonable(obj: Any):
    """Recursively convert exact values and containers to JSON types."""
    if isinstance(obj, (Fraction, Gauss)) and not isinstance(obj, bool):
        return scalar_to_json(obj)
    if isinstance(obj, Matrix):
        return matrix_to_json(obj)
    if isinstance(obj, Subspace):
        return [vector_to_json(v) for v in obj.vectors]
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


# ---------------------------------------------------------------------------
# documents


@dataclass(frozen=True)
class ProblemDocument:
    mode: str
    n: int
    payload: dict
    orbit: Any = None
    fibre: CentralFibreModel | None = None
    nodal: NodalConfiguration | None = None

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "mode": self.mode, "n": self.n, "payload": self.payload}


def _path(err: jsonschema.ValidationError) -> str:
    return "/".join(str(p) for p in err.absolute_path) or "<document>"


def validate(doc: dict) -> None:
    """Schema validation; raises :class:`DocumentError` naming the field."""
    validator = jsonschema.Draft202012Validator(DOCUMENT_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(list(e.absolute_path)), str(e.absolute_path)))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise DocumentError(err.message, _path(err))


def _matrix(rows, where: str) -> Matrix:
    try:
        return Matrix([[scalar_from_json(x) for x in r] for r in rows])
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(str(exc), where) from exc


def parse_orbit(payload: dict, n: int, where: str = "payload"):
    from .orbit import OrbitProblem

    if "T" in payload:
        T = _matrix(payload["T"], f"{where}/T")
        if not T.is_integral():
            raise DocumentError("monodromy T must have integer entries", f"{where}/T")
        op = log_unipotent(T, n)
    else:
        N = _matrix(payload["N"], f"{where}/N")
        if not N.is_square():
            raise DocumentError("N must be square", f"{where}/N")
        op = MonodromyOperator.from_log(N, n)
    Q = Polarization(n, _matrix(payload["Q"], f"{where}/Q"))
    alpha = tuple(scalar_from_json(x) for x in payload["alpha"])
    F = None
    if "F" in payload:
        d = op.dim
        bases = {}
        for key, rows in payload["F"].items():
            p = int(key)
            if not 1 <= p <= n:
                raise DocumentError(f"F^{p} is outside 1..{n}", f"{where}/F/{key}")
            vecs = [tuple(scalar_from_json(x) for x in r) for r in rows]
            if any(len(v) != d for v in vecs):
                raise DocumentError(f"basis vectors of F^{p} must have length {d}", f"{where}/F/{key}")
            bases[p] = vecs
        try:
            F = HodgeFiltration.from_bases(n, d, bases, top=n)
        except ValueError as exc:
            raise DocumentError(str(exc), f"{where}/F") from exc
    return OrbitProblem(n, op, Q, alpha, F)


def parse_fibre(payload: dict, n: int) -> CentralFibreModel:
    comps = [Stratum(0, c["id"], tuple(map(tuple, c["hodge"]))) for c in payload["components"]]
    strata = [
        Stratum(len(s["components"]) - 1, s["id"], tuple(map(tuple, s["hodge"])), tuple(s["components"]),
                tuple(s["faces"]) if "faces" in s else None)
        for s in payload.get("strata", [])
    ]
    maps = {}
    for k, entry in enumerate(payload.get("restriction_maps", [])):
        maps[(entry["p"], entry["q"])] = _matrix(entry["matrix"], f"restriction_maps/{k}/matrix")
    return CentralFibreModel(n, tuple(comps), tuple(strata), maps)


def parse_nodal(payload: dict, n: int) -> NodalConfiguration:
    return NodalConfiguration(n, payload["nodes"], payload.get("k", 0))


def parse_document(doc: dict) -> ProblemDocument:
    """Validate and build the exact objects a document describes."""
    validate(doc)
    mode, n, payload = doc["mode"], doc["n"], doc["payload"]
    orbit = fibre = nodal = None
    if mode == "monodromy":
        orbit = parse_orbit(payload, n)
    elif mode == "central_fibre":
        fibre = parse_fibre(payload, n)
    elif mode == "nodal":
        nodal = parse_nodal(payload, n)
    else:
        orbit = parse_orbit(payload["orbit"], n, "payload/orbit")
        if "fibre" in payload:
            fibre = parse_fibre(payload["fibre"], n)
        else:
            nodal = parse_nodal(payload["nodal"], n)
    return ProblemDocument(mode, n, payload, orbit, fibre, nodal)


def loads(text: str) -> ProblemDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    return parse_document(doc)


def load(path: str) -> ProblemDocument:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# ---------------------------------------------------------------------------
# building documents from objects


def orbit_payload(prob, use_T: bool | None = None) -> dict:
    """Payload for an orbit problem; ``T`` is used when it is integral."""
    T = prob.op.T
    if use_T is None:
        use_T = T.is_integral()
    out = {"T": matrix_to_json(T)} if use_T else {"N": matrix_to_json(prob.N)}
    out["Q"] = matrix_to_json(prob.Q.Q)
    out["alpha"] = vector_to_json(prob.alpha)
    if prob.F is not None:
        out["F"] = {str(p): [vector_to_json(v) for v in prob.F[p].vectors] for p in range(1, prob.weight_n + 1)}
    return out


def fibre_payload(model: CentralFibreModel) -> dict:
    out = {"components": [{"id": c.component_id, "hodge": [list(r) for r in c.hodge_numbers]} for c in model.components]}
    strata = []
    for s in model.incidence:
        entry = {"id": s.component_id, "components": list(s.members), "hodge": [list(r) for r in s.hodge_numbers]}
        if s.faces is not None:
            entry["faces"] = list(s.faces)
        strata.append(entry)
    if strata:
        out["strata"] = strata
    if model.restriction_maps:
        out["restriction_maps"] = [
            {"p": p, "q": q, "matrix": matrix_to_json(m)} for (p, q), m in sorted(model.restriction_maps.items())
        ]
    return out


def document(mode: str, n: int, payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "mode": mode, "n": n, "payload": payload}
