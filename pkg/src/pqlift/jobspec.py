"""Job files: parsing and canonical serialisation.

A job is one JSON document::

    {
      "mode": "fan",
      "fan": {"rays": [{"id": "E", "u": [0, 0]}, ...],
              "triangles": [["E", "u1", "u2"], ...]},
      "omega": {"u1": 1, "u2": "3/2"},
      "F": {"u1": 1, "u3": -1},
      "basepoint": {"triangle": 0, "mu": [0, 0], "lambda": [0, 0], "nu3": 0},
      "flags": {"allow_non_kaehler": false, "require_closed": false}
    }

or, with ``"mode": "web"``, a ``"web"`` object holding ``vertices``
(``id``, optional ``mu`` and ``label``), ``edges`` (``from``, ``to``, ``r``,
``t``, ``s``) and ``rays`` (``at``, ``direction``, optional ``r``); its
basepoint names a ``vertex`` instead of a triangle.

Rationals are JSON integers or strings such as ``"3/2"``.  Floating point
literals are rejected.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .errors import ParseError
from .lattice import LatticeVec2, QPoint

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class _FloatLiteral:
    def __init__(self, text):
        self.text = text


def _reject_constant(name):
    return _FloatLiteral(name)


@dataclass(frozen=True)
class VertexSpec:
    id: str
    mu: Optional[QPoint] = None
    label: Optional[str] = None


@dataclass(frozen=True)
class EdgeSpec:
    source: str
    target: str
    r: LatticeVec2
    t: Fraction
    s: Optional[Fraction] = None


@dataclass(frozen=True)
class RaySpec:
    at: str
    direction: LatticeVec2
    r: Optional[LatticeVec2] = None


@dataclass(frozen=True)
class FanPayload:
    rays: tuple[tuple[str, LatticeVec2], ...]
    triangles: tuple[tuple[str, str, str], ...]


@dataclass(frozen=True)
class WebPayload:
    vertices: tuple[VertexSpec, ...]
    edges: tuple[EdgeSpec, ...]
    rays: tuple[RaySpec, ...]


@dataclass(frozen=True)
class Basepoint:
    triangle: Union[int, tuple[str, str, str], None] = None
    vertex: Optional[str] = None
    mu: Optional[QPoint] = None
    lam: Optional[QPoint] = None
    nu3: Optional[Fraction] = None


@dataclass(frozen=True)
class Flags:
    allow_non_kaehler: bool = False
    require_closed: bool = False


@dataclass(frozen=True)
class JobSpec:
    mode: str
    fan: Optional[FanPayload] = None
    web: Optional[WebPayload] = None
    omega: tuple[tuple[str, Fraction], ...] = ()
    F: tuple[tuple[str, int], ...] = ()
    basepoint: Basepoint = field(default_factory=Basepoint)
    flags: Flags = field(default_factory=Flags)
    description: Optional[str] = None


# -- parsing -----------------------------------------------------------------


def _expect(cond, message, loc):
    if not cond:
        raise ParseError(message, loc)


def _keys(obj, loc, required=(), optional=()):
    _expect(isinstance(obj, dict), "expected an object", loc)
    missing = [k for k in required if k not in obj]
    _expect(not missing, f"missing required field(s) {missing}", loc)
    unknown = sorted(set(obj) - set(required) - set(optional))
    _expect(not unknown, f"unknown field(s) {unknown}", loc)


def parse_rational(value, loc) -> Fraction:
    if isinstance(value, _FloatLiteral):
        hint = ""
        try:
            exact = Fraction(value.text)
            hint = f'; write the exact rational "{exact}"'
        except (ValueError, ZeroDivisionError):
            pass
        raise ParseError(f"float literal {value.text} not allowed{hint}", loc)
    if isinstance(value, bool):
        raise ParseError("expected a rational number, got a boolean", loc)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if _RATIONAL.match(text):
            num, _, den = text.partition("/")
            if den and int(den) == 0:
                raise ParseError(f"zero denominator in {value!r}", loc)
            return Fraction(int(num), int(den) if den else 1)
        raise ParseError(
            f"{value!r} is not an exact rational; use an integer or 'p/q'", loc
        )
    raise ParseError(f"expected a rational number, got {type(value).__name__}", loc)


def parse_integer(value, loc) -> int:
    q = parse_rational(value, loc)
    _expect(q.denominator == 1, f"expected an integer, got {q}", loc)
    return q.numerator


def _pair(value, loc, conv):
    _expect(isinstance(value, list) and len(value) == 2, "expected a pair [x, y]", loc)
    return conv(value[0], f"{loc}[0]"), conv(value[1], f"{loc}[1]")


def _lattice(value, loc):
    return LatticeVec2(*_pair(value, loc, parse_integer))


def _qpoint(value, loc):
    return QPoint(*_pair(value, loc, parse_rational))


def _string(value, loc):
    _expect(isinstance(value, str) and value != "", "expected a non-empty string", loc)
    return value


def _bool(value, loc):
    _expect(isinstance(value, bool), "expected true or false", loc)
    return value


def _parse_fan(obj, loc):
    _keys(obj, loc, required=("rays", "triangles"))
    _expect(isinstance(obj["rays"], list), "expected a list", f"{loc}.rays")
    rays = []
    for i, r in enumerate(obj["rays"]):
        rl = f"{loc}.rays[{i}]"
        _keys(r, rl, required=("id", "u"))
        rays.append((_string(r["id"], f"{rl}.id"), _lattice(r["u"], f"{rl}.u")))
    ids = {rid for rid, _ in rays}
    _expect(isinstance(obj["triangles"], list), "expected a list", f"{loc}.triangles")
    tris = []
    for i, t in enumerate(obj["triangles"]):
        tl = f"{loc}.triangles[{i}]"
        _expect(isinstance(t, list) and len(t) == 3, "expected three ray ids", tl)
        for j, rid in enumerate(t):
            _string(rid, f"{tl}[{j}]")
            _expect(rid in ids, f"unknown ray id {rid!r}", f"{tl}[{j}]")
        tris.append(tuple(t))
    return FanPayload(tuple(rays), tuple(tris))


def _parse_web(obj, loc):
    _keys(obj, loc, required=("vertices", "edges", "rays"))
    for key in ("vertices", "edges", "rays"):
        _expect(isinstance(obj[key], list), "expected a list", f"{loc}.{key}")
    vertices = []
    for i, v in enumerate(obj["vertices"]):
        vl = f"{loc}.vertices[{i}]"
        _keys(v, vl, required=("id",), optional=("mu", "label"))
        vertices.append(
            VertexSpec(
                _string(v["id"], f"{vl}.id"),
                _qpoint(v["mu"], f"{vl}.mu") if v.get("mu") is not None else None,
                _string(v["label"], f"{vl}.label") if v.get("label") is not None else None,
            )
        )
    ids = {v.id for v in vertices}
    edges = []
    for i, e in enumerate(obj["edges"]):
        el = f"{loc}.edges[{i}]"
        _keys(e, el, required=("from", "to", "r", "t"), optional=("s",))
        for end in ("from", "to"):
            _expect(e[end] in ids, f"unknown vertex id {e[end]!r}", f"{el}.{end}")
        edges.append(
            EdgeSpec(
                e["from"],
                e["to"],
                _lattice(e["r"], f"{el}.r"),
                parse_rational(e["t"], f"{el}.t"),
                parse_rational(e["s"], f"{el}.s") if e.get("s") is not None else None,
            )
        )
    rays = []
    for i, r in enumerate(obj["rays"]):
        rl = f"{loc}.rays[{i}]"
        _keys(r, rl, required=("at", "direction"), optional=("r",))
        _expect(r["at"] in ids, f"unknown vertex id {r['at']!r}", f"{rl}.at")
        rays.append(
            RaySpec(
                r["at"],
                _lattice(r["direction"], f"{rl}.direction"),
                _lattice(r["r"], f"{rl}.r") if r.get("r") is not None else None,
            )
        )
    return WebPayload(tuple(vertices), tuple(edges), tuple(rays))


def _parse_coeffs(obj, loc, ids, integral):
    _expect(isinstance(obj, dict), "expected an object mapping ray ids to numbers", loc)
    out = []
    for rid, raw in obj.items():
        _expect(rid in ids, f"unknown ray id {rid!r}", f"{loc}.{rid}")
        value = parse_rational(raw, f"{loc}.{rid}")
        if integral:
            _expect(
                value.denominator == 1,
                f"F must be integral (integral periods); got {value}",
                f"{loc}.{rid}",
            )
            value = int(value)
        out.append((rid, value))
    return tuple(out)


def _parse_basepoint(obj, loc, mode):
    triangle_ok = ("triangle",) if mode == "fan" else ()
    vertex_ok = ("vertex",) if mode == "web" else ()
    _keys(obj, loc, optional=(*triangle_ok, *vertex_ok, "mu", "lambda", "nu3"))
    triangle = None
    if obj.get("triangle") is not None:
        raw = obj["triangle"]
        if isinstance(raw, list):
            _expect(len(raw) == 3, "expected three ray ids", f"{loc}.triangle")
            triangle = tuple(_string(x, f"{loc}.triangle") for x in raw)
        else:
            triangle = parse_integer(raw, f"{loc}.triangle")
    return Basepoint(
        triangle=triangle,
        vertex=_string(obj["vertex"], f"{loc}.vertex") if obj.get("vertex") is not None else None,
        mu=_qpoint(obj["mu"], f"{loc}.mu") if obj.get("mu") is not None else None,
        lam=_qpoint(obj["lambda"], f"{loc}.lambda") if obj.get("lambda") is not None else None,
        nu3=parse_rational(obj["nu3"], f"{loc}.nu3") if obj.get("nu3") is not None else None,
    )


def parse_document(doc) -> JobSpec:
    loc = "$"
    _keys(
        doc,
        loc,
        required=("mode",),
        optional=("fan", "web", "omega", "F", "basepoint", "flags", "description"),
    )
    mode = doc["mode"]
    _expect(mode in ("fan", "web"), f"mode must be 'fan' or 'web', got {mode!r}", "$.mode")

    fan = web = None
    omega = F = ()
    if mode == "fan":
        _expect("fan" in doc, "fan mode needs a 'fan' object", loc)
        _expect("web" not in doc, "fan mode takes no 'web' object", "$.web")
        fan = _parse_fan(doc["fan"], "$.fan")
        ids = {rid for rid, _ in fan.rays}
        _expect("omega" in doc, "fan mode needs 'omega' coefficients", loc)
        omega = _parse_coeffs(doc["omega"], "$.omega", ids, integral=False)
        F = _parse_coeffs(doc.get("F", {}), "$.F", ids, integral=True)
    else:
        _expect("web" in doc, "web mode needs a 'web' object", loc)
        for key in ("fan", "omega", "F"):
            _expect(key not in doc, f"web mode takes no '{key}'; put t and s on the edges", f"$.{key}")
        web = _parse_web(doc["web"], "$.web")

    basepoint = _parse_basepoint(doc.get("basepoint", {}), "$.basepoint", mode)
    raw_flags = doc.get("flags", {})
    _keys(raw_flags, "$.flags", optional=("allow_non_kaehler", "require_closed"))
    flags = Flags(
        allow_non_kaehler=_bool(raw_flags.get("allow_non_kaehler", False), "$.flags.allow_non_kaehler"),
        require_closed=_bool(raw_flags.get("require_closed", False), "$.flags.require_closed"),
    )
    description = doc.get("description")
    if description is not None:
        _expect(isinstance(description, str), "expected a string", "$.description")
    return JobSpec(mode, fan, web, omega, F, basepoint, flags, description)


def parse_text(text: str) -> JobSpec:
    try:
        doc = json.loads(text, parse_float=_FloatLiteral, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return parse_document(doc)


def parse_input(source: Union[str, Path]) -> JobSpec:
    """Parse a job from a path, or from JSON text if ``source`` starts with ``{``."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        return parse_text(source)
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8 text") from None
    return parse_text(text)


# -- serialisation -----------------------------------------------------------


def q(value) -> str:
    return str(Fraction(value))


def _qpair(p):
    return [q(p.x), q(p.y)]


def _ipair(v):
    return [v.x, v.y]


def job_to_document(spec: JobSpec) -> dict:
    doc = {"mode": spec.mode}
    if spec.description is not None:
        doc["description"] = spec.description
    if spec.fan is not None:
        doc["fan"] = {
            "rays": [{"id": rid, "u": _ipair(u)} for rid, u in spec.fan.rays],
            "triangles": [list(t) for t in spec.fan.triangles],
        }
        doc["omega"] = {rid: q(c) for rid, c in spec.omega}
        doc["F"] = {rid: c for rid, c in spec.F}
    if spec.web is not None:
        vertices = []
        for v in spec.web.vertices:
            item = {"id": v.id}
            if v.mu is not None:
                item["mu"] = _qpair(v.mu)
            if v.label is not None:
                item["label"] = v.label
            vertices.append(item)
        edges = []
        for e in spec.web.edges:
            item = {"from": e.source, "to": e.target, "r": _ipair(e.r), "t": q(e.t)}
            if e.s is not None:
                item["s"] = q(e.s)
            edges.append(item)
        rays = []
        for r in spec.web.rays:
            item = {"at": r.at, "direction": _ipair(r.direction)}
            if r.r is not None:
                item["r"] = _ipair(r.r)
            rays.append(item)
        doc["web"] = {"vertices": vertices, "edges": edges, "rays": rays}
    bp = {}
    b = spec.basepoint
    if b.triangle is not None:
        bp["triangle"] = list(b.triangle) if isinstance(b.triangle, tuple) else b.triangle
    if b.vertex is not None:
        bp["vertex"] = b.vertex
    if b.mu is not None:
        bp["mu"] = _qpair(b.mu)
    if b.lam is not None:
        bp["lambda"] = _qpair(b.lam)
    if b.nu3 is not None:
        bp["nu3"] = q(b.nu3)
    if bp:
        doc["basepoint"] = bp
    doc["flags"] = {
        "allow_non_kaehler": spec.flags.allow_non_kaehler,
        "require_closed": spec.flags.require_closed,
    }
    return doc


def dump_job(spec: JobSpec) -> str:
    return json.dumps(job_to_document(spec), indent=2, ensure_ascii=False) + "\n"
