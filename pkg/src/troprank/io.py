"""JSON instance files.

Every file is a JSON object with a ``type`` of ``subdivision``,
``param_curve`` or ``skeleton``.  Rationals are written as "p/q" strings
(or "p" for integers); plain JSON integers are accepted on input, floats
never are.  See the README for the full grammar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import ParseError
from .param import Edge, End, EndMarking, ParamCurve, VertexEdge, VertexVertex
from .skeleton import Cycle, SkeletonCurve
from .subdivision import Subdivision, TropicalPolynomial


@dataclass
class SubdivisionFile:
    subdivision: Subdivision
    coefficients: TropicalPolynomial | None = None
    name: str | None = None
    claims: dict = field(default_factory=dict)


@dataclass
class ParamCurveFile:
    curve: ParamCurve
    identifications: tuple = ()
    marking: EndMarking | None = None
    name: str | None = None
    claims: dict = field(default_factory=dict)


@dataclass
class SkeletonFile:
    skeleton: SkeletonCurve
    name: str | None = None
    claims: dict = field(default_factory=dict)


Instance = SubdivisionFile | ParamCurveFile | SkeletonFile


# ----------------------------------------------------------------- scalars

def parse_rational(v: Any, where: str) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise ParseError(f"{where}: expected an integer or a \"p/q\" string, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        text = v.strip()
        num, _, den = text.partition("/")
        try:
            if not num.lstrip("-").isdigit() or (den and not den.isdigit()):
                raise ValueError
            return Fraction(int(num), int(den) if den else 1)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: {v!r} is not a rational of the form p/q") from None
    raise ParseError(f"{where}: expected a rational, got {type(v).__name__}")


def format_rational(x) -> str:
    return str(Fraction(x))


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{where}: expected an integer, got {v!r}")
    return v


def _list(v: Any, where: str) -> list:
    if not isinstance(v, list):
        raise ParseError(f"{where}: expected an array")
    return v


def _obj(v: Any, where: str) -> dict:
    if not isinstance(v, dict):
        raise ParseError(f"{where}: expected an object")
    return v


def _ints(v, where):
    return tuple(_int(x, f"{where}[{i}]") for i, x in enumerate(_list(v, where)))


def _rats(v, where):
    return tuple(parse_rational(x, f"{where}[{i}]") for i, x in enumerate(_list(v, where)))


def _get(d: dict, key: str, where: str):
    if key not in d:
        raise ParseError(f"{where}: missing field {key!r}")
    return d[key]


# ----------------------------------------------------------------- parsing

def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from None
    data = _obj(data, "document")
    kind = _get(data, "type", "document")
    name = data.get("name")
    claims = _obj(data.get("claims", {}), "claims")
    if kind == "subdivision":
        return _parse_subdivision(data, name, claims)
    if kind == "param_curve":
        return _parse_param(data, name, claims)
    if kind == "skeleton":
        return _parse_skeleton(data, name, claims)
    raise ParseError(f"unknown document type {kind!r}")


def load(path) -> Instance:
    return loads(Path(path).read_text())


def _parse_subdivision(d, name, claims) -> SubdivisionFile:
    n = _int(_get(d, "dimension", "subdivision"), "dimension")
    verts = [_ints(v, f"vertices[{i}]") for i, v in enumerate(_list(_get(d, "vertices", "subdivision"), "vertices"))]
    for i, v in enumerate(verts):
        if len(v) != n:
            raise ParseError(f"vertices[{i}]: expected {n} coordinates")
    cells = [_ints(c, f"cells[{i}]") for i, c in enumerate(_list(_get(d, "cells", "subdivision"), "cells"))]
    s = Subdivision(n, tuple(verts), tuple(cells))
    coeffs = None
    if d.get("coefficients") is not None:
        cs = _rats(d["coefficients"], "coefficients")
        if len(cs) != len(verts):
            raise ParseError(f"coefficients: expected {len(verts)} values, got {len(cs)}")
        coeffs = TropicalPolynomial(cs)
    return SubdivisionFile(s, coeffs, name, claims)


def _parse_param(d, name, claims) -> ParamCurveFile:
    n = _int(_get(d, "dimension", "param_curve"), "dimension")
    nodes = [_rats(p, f"nodes[{i}]") for i, p in enumerate(_list(_get(d, "nodes", "param_curve"), "nodes"))]
    edges = []
    for i, e in enumerate(_list(d.get("edges", []), "edges")):
        w = f"edges[{i}]"
        e = _obj(e, w)
        a, b = _ints(_get(e, "nodes", w), w + ".nodes")
        edges.append(Edge(a, b, _ints(_get(e, "direction", w), w + ".direction"),
                          _int(e.get("weight", 1), w + ".weight"), parse_rational(_get(e, "length", w), w + ".length")))
    ends = []
    for i, r in enumerate(_list(d.get("ends", []), "ends")):
        w = f"ends[{i}]"
        r = _obj(r, w)
        ends.append(End(_int(_get(r, "node", w), w + ".node"), _ints(_get(r, "direction", w), w + ".direction"),
                        _int(r.get("weight", 1), w + ".weight")))
    idents = []
    for i, x in enumerate(_list(d.get("identifications", []), "identifications")):
        w = f"identifications[{i}]"
        x = _obj(x, w)
        kind = _get(x, "kind", w)
        if kind == "vertex-vertex":
            a, b = _ints(_get(x, "nodes", w), w + ".nodes")
            idents.append(VertexVertex(a, b))
        elif kind == "vertex-edge":
            idents.append(VertexEdge(_int(_get(x, "node", w), w + ".node"), _int(_get(x, "edge", w), w + ".edge")))
        else:
            raise ParseError(f"{w}: unknown identification kind {kind!r}")
    marking = None
    if d.get("markers") is not None:
        ms = []
        for i, m in enumerate(_list(d["markers"], "markers")):
            w = f"markers[{i}]"
            m = _obj(m, w)
            ms.append((_int(_get(m, "end", w), w + ".end"), _rats(_get(m, "point", w), w + ".point")))
        marking = EndMarking(tuple(ms))
    curve = ParamCurve(n, tuple(nodes), tuple(edges), tuple(ends))
    return ParamCurveFile(curve, tuple(idents), marking, name, claims)


def _parse_skeleton(d, name, claims) -> SkeletonFile:
    nodes = [_rats(p, f"nodes[{i}]") for i, p in enumerate(_list(_get(d, "nodes", "skeleton"), "nodes"))]
    edges = [_ints(e, f"edges[{i}]") for i, e in enumerate(_list(d.get("edges", []), "edges"))]
    for i, e in enumerate(edges):
        if len(e) != 2:
            raise ParseError(f"edges[{i}]: expected a node pair")
    rays = []
    for i, r in enumerate(_list(d.get("rays", []), "rays")):
        w = f"rays[{i}]"
        r = _obj(r, w)
        rays.append((_int(_get(r, "node", w), w + ".node"), _ints(_get(r, "direction", w), w + ".direction")))
    cycles = None
    if d.get("cycles") is not None:
        cycles = []
        for i, c in enumerate(_list(d["cycles"], "cycles")):
            w = f"cycles[{i}]"
            c = _obj(c, w)
            cycles.append(Cycle(_ints(_get(c, "nodes", w), w + ".nodes"), _rats(_get(c, "normal", w), w + ".normal"),
                                parse_rational(_get(c, "offset", w), w + ".offset")))
        cycles = tuple(cycles)
    return SkeletonFile(SkeletonCurve(tuple(nodes), tuple(edges), tuple(rays), cycles), name, claims)


# ----------------------------------------------------------- serialization

def _emit(fields: list[tuple[str, Any]]) -> str:
    lines = [f"  {json.dumps(k)}: {json.dumps(v, separators=(', ', ': '))}" for k, v in fields if v is not None]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def _rl(vec) -> list[str]:
    return [format_rational(x) for x in vec]


def dumps(inst: Instance) -> str:
    if isinstance(inst, SubdivisionFile):
        s = inst.subdivision
        return _emit([
            ("type", "subdivision"), ("name", inst.name), ("dimension", s.n),
            ("vertices", [list(v) for v in s.vertices]),
            ("cells", [list(c.vertex_indices) for c in s.cells]),
            ("coefficients", _rl(inst.coefficients.coefficients) if inst.coefficients is not None else None),
            ("claims", inst.claims or None),
        ])
    if isinstance(inst, ParamCurveFile):
        c = inst.curve
        idents = []
        for x in inst.identifications:
            if isinstance(x, VertexVertex):
                idents.append({"kind": "vertex-vertex", "nodes": [x.a, x.b]})
            else:
                idents.append({"kind": "vertex-edge", "node": x.node, "edge": x.edge})
        return _emit([
            ("type", "param_curve"), ("name", inst.name), ("dimension", c.n),
            ("nodes", [_rl(p) for p in c.positions]),
            ("edges", [{"nodes": [e.a, e.b], "direction": list(e.direction), "weight": e.weight,
                        "length": format_rational(e.length)} for e in c.edges]),
            ("ends", [{"node": r.node, "direction": list(r.direction), "weight": r.weight} for r in c.ends]),
            ("identifications", idents or None),
            ("markers", [{"end": i, "point": _rl(p)} for i, p in inst.marking.markers]
             if inst.marking is not None else None),
            ("claims", inst.claims or None),
        ])
    if isinstance(inst, SkeletonFile):
        k = inst.skeleton
        return _emit([
            ("type", "skeleton"), ("name", inst.name),
            ("nodes", [_rl(p) for p in k.nodes]),
            ("edges", [list(e) for e in k.edges]),
            ("rays", [{"node": v, "direction": list(d)} for v, d in k.rays]),
            ("cycles", [{"nodes": list(c.nodes), "normal": _rl(c.normal), "offset": format_rational(c.offset)}
                        for c in k.cycles] if k.cycles is not None else None),
            ("claims", inst.claims or None),
        ])
    raise TypeError(f"cannot serialise {type(inst).__name__}")


def dump(inst: Instance, path) -> None:
    Path(path).write_text(dumps(inst))
