"""JSON (de)serialization for graphs, drawings, automorphisms and groups.

Formats::

    graph:       {"name": str, "n": int, "edges": [[u, v], ...]}
    drawing:     {"graph": name, "positions": [[x, y], ...]}
    automorphism {"graph": name, "kind": "rotational"|"axial", "k": int, "mapping": [...]}
    group:       {"graph": name, "kind": "axial2"|"cyclic"|"dihedral", "order": size,
                  "elements": [automorphism-without-graph, ...]}

``order`` of a group is its size including the identity.
"""

from __future__ import annotations

import json
import math

from .errors import GraphMismatch, ParseError, ValidationError
from .graph import (
    AXIAL,
    AXIAL2,
    CYCLIC,
    DIHEDRAL,
    ROTATIONAL,
    Automorphism,
    AutomorphismGroup,
    Drawing,
    Graph,
    validate_automorphism,
)


def _parse(data):
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("utf-8")
    if isinstance(data, str):
        try:
            return json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from exc
    return data


def _require(obj, key, types, what):
    if not isinstance(obj, dict):
        raise ParseError(f"{what} must be a JSON object")
    if key not in obj:
        raise ParseError("missing", field=key)
    val = obj[key]
    if not isinstance(val, types) or isinstance(val, bool) and bool not in types:
        raise ParseError(f"expected {types[0].__name__}, got {type(val).__name__}", field=key)
    return val


def _int_list(vals, fieldname):
    out = []
    for i, x in enumerate(vals):
        if isinstance(x, bool) or not isinstance(x, int):
            raise ParseError(f"entry {i} is not an integer", field=fieldname)
        out.append(x)
    return out


def graph_from_dict(obj) -> Graph:
    n = _require(obj, "n", (int,), "graph")
    edges = _require(obj, "edges", (list,), "graph")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise ParseError("expected str", field="name")
    pairs = []
    for i, e in enumerate(edges):
        if not isinstance(e, list) or len(e) != 2:
            raise ParseError(f"edge {i} is not a pair", field="edges")
        pairs.append(_int_list(e, "edges"))
    try:
        return Graph(n, pairs, name=name)
    except ValidationError as exc:
        raise ParseError(str(exc), field="edges" if "edge" in str(exc) or "loop" in str(exc) else "n") from exc


def load_graph(data) -> Graph:
    return graph_from_dict(_parse(data))


def _check_graph_name(obj, graph, what):
    name = obj.get("graph")
    if name is not None and not isinstance(name, str):
        raise ParseError("expected str", field="graph")
    if graph is not None and name is not None and graph.name and name != graph.name:
        raise GraphMismatch(f"{what} is for graph {name!r}, not {graph.name!r}")
    return name


def load_drawing(data, graph: Graph) -> Drawing:
    obj = _parse(data)
    _check_graph_name(obj, graph, "drawing")
    pos = _require(obj, "positions", (list,), "drawing")
    rows = []
    for i, p in enumerate(pos):
        if not isinstance(p, list) or len(p) != 2:
            raise ParseError(f"position {i} is not an [x, y] pair", field="positions")
        for c in p:
            if isinstance(c, bool) or not isinstance(c, (int, float)):
                raise ParseError(f"position {i} has a non-numeric coordinate", field="positions")
        rows.append([float(p[0]), float(p[1])])
    if len(rows) != graph.n:
        raise GraphMismatch(
            f"drawing has {len(rows)} positions but graph {graph.name!r} has {graph.n} vertices"
        )
    return Drawing(graph, rows)


def _element_from_dict(obj, graph, where):
    kind = _require(obj, "kind", (str,), where)
    if kind not in (ROTATIONAL, AXIAL):
        raise ParseError(f"unknown element kind {kind!r}", field="kind")
    mapping = _int_list(_require(obj, "mapping", (list,), where), "mapping")
    k = obj.get("k")
    if k is not None and (isinstance(k, bool) or not isinstance(k, int)):
        raise ParseError("expected int", field="k")
    return validate_automorphism(graph, mapping, kind=kind, k=k)


def load_automorphism(data, graph: Graph) -> Automorphism:
    obj = _parse(data)
    _check_graph_name(obj, graph, "automorphism")
    return _element_from_dict(obj, graph, "automorphism")


def load_group(data, graph: Graph) -> AutomorphismGroup:
    obj = _parse(data)
    _check_graph_name(obj, graph, "group")
    kind = _require(obj, "kind", (str,), "group")
    if kind not in (AXIAL2, CYCLIC, DIHEDRAL):
        raise ParseError(f"unknown group kind {kind!r}", field="kind")
    order = _require(obj, "order", (int,), "group")
    elements = _require(obj, "elements", (list,), "group")
    els = [_element_from_dict(e, graph, "group element") for e in elements]
    return AutomorphismGroup(graph, tuple(els), kind, order)


def graph_to_dict(g: Graph) -> dict:
    return {"name": g.name, "n": g.n, "edges": [list(e) for e in g.edges]}


def drawing_to_dict(d: Drawing) -> dict:
    return {"graph": d.graph.name, "positions": [[float(x), float(y)] for x, y in d.positions]}


def automorphism_to_dict(a: Automorphism, with_graph=True) -> dict:
    out = {}
    if with_graph:
        out["graph"] = a.graph.name
    out["kind"] = a.kind
    if a.is_rotational:
        out["k"] = a.order
    out["mapping"] = list(a.mapping)
    return out


def group_to_dict(grp: AutomorphismGroup) -> dict:
    return {
        "graph": grp.graph.name,
        "kind": grp.group_kind,
        "order": grp.size,
        "elements": [automorphism_to_dict(e, with_graph=False) for e in grp.elements],
    }


def dumps(obj, indent=None, digits=None) -> str:
    """Serialize a model object (or plain structure) to JSON.

    Floats are written at full precision unless ``digits`` is given.
    """
    if isinstance(obj, Graph):
        d = graph_to_dict(obj)
    elif isinstance(obj, Drawing):
        d = drawing_to_dict(obj)
    elif isinstance(obj, Automorphism):
        d = automorphism_to_dict(obj)
    elif isinstance(obj, AutomorphismGroup):
        d = group_to_dict(obj)
    else:
        d = obj
    if digits is not None:
        d = round_floats(d, digits)
    return json.dumps(d, indent=indent)


def round_floats(obj, digits=9):
    """Round every float in a JSON-like structure to ``digits`` significant digits."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return obj
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    return obj
