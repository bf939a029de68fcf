"""JSON and DOT serialization with canonical rational strings.

Every rational is written as str(Fraction): an integer string or "p/q" in
lowest terms with positive denominator.  Floats are rejected on input, so
a round trip through JSON never loses exactness.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Sequence

from .complexes import PolyComplex, SkeletonGraph
from .errors import DomainError
from .flow import Network, network
from .geometry import ExtPoint
from .metrics import DirectedDistance, validate_distance
from .trees import OrientedTree, Realization, SplitTerm

# -- rationals -----------------------------------------------------------------


def fraction_to_str(x: Fraction) -> str:
    return str(x)


def str_to_fraction(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise DomainError("InputParseError", f"exact rational required, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise DomainError("InputParseError", f"not a rational: {value!r}")
    raise DomainError("InputParseError", f"not a rational: {value!r}")


def _expect(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise DomainError("InputParseError", f"{where}: missing field {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise DomainError("InputParseError", f"{where}: field {key!r} has the wrong type")
    return value


# -- distance matrices ---------------------------------------------------------


def distance_to_json(mu: DirectedDistance) -> dict:
    return {
        "labels": list(mu.labels),
        "matrix": [[fraction_to_str(v) for v in row] for row in mu.entries],
    }


def distance_from_json(obj) -> DirectedDistance:
    matrix = _expect(obj, "matrix", list, "distance")
    labels = obj.get("labels") if isinstance(obj, dict) else None
    if labels is not None and not isinstance(labels, list):
        raise DomainError("InputParseError", "distance: labels must be a list")
    rows = []
    for row in matrix:
        if not isinstance(row, list):
            raise DomainError("InputParseError", "distance: matrix rows must be lists")
        rows.append([str_to_fraction(v) for v in row])
    return validate_distance(rows, labels)


# -- points --------------------------------------------------------------------


def point_to_json(p: ExtPoint) -> dict:
    labels = p.ground.labels
    return {
        "col": {labels[i]: fraction_to_str(v) for i, v in enumerate(p.col)},
        "row": {labels[i]: fraction_to_str(v) for i, v in enumerate(p.row)},
    }


def point_from_json(mu: DirectedDistance, obj) -> ExtPoint:
    col = _expect(obj, "col", dict, "point")
    row = _expect(obj, "row", dict, "point")
    labels = mu.labels
    for side, name in ((col, "col"), (row, "row")):
        if set(side) != set(labels):
            raise DomainError("InputParseError", f"point: {name} must assign every label exactly once")
    return ExtPoint(
        mu.ground,
        tuple(str_to_fraction(col[s]) for s in labels),
        tuple(str_to_fraction(row[s]) for s in labels),
    )


# -- networks ------------------------------------------------------------------


def network_to_json(net: Network) -> dict:
    return {
        "vertices": list(net.vertices),
        "edges": [{"tail": t, "head": h, "cap": c} for t, h, c in net.edges],
        "terminals": list(net.terminals),
    }


def network_from_json(obj) -> Network:
    vertices = _expect(obj, "vertices", list, "network")
    edges = _expect(obj, "edges", list, "network")
    terminals = _expect(obj, "terminals", list, "network")
    triples = []
    for e in edges:
        tail = _expect(e, "tail", str, "network edge")
        head = _expect(e, "head", str, "network edge")
        cap = _expect(e, "cap", int, "network edge")
        if isinstance(cap, bool):
            raise DomainError("InputParseError", "network edge: cap must be an integer")
        triples.append((tail, head, cap))
    return network(vertices, triples, terminals)


# -- realizations --------------------------------------------------------------


def realization_to_json(r: Realization) -> dict:
    return {
        "vertices": list(r.tree.vertices),
        "edges": [
            {"tail": t, "head": h, "length": fraction_to_str(w)} for t, h, w in r.tree.arcs
        ],
        "terminals": list(r.terminals),
        "subtrees": {s: list(sub) for s, sub in zip(r.terminals, r.subtrees)},
    }


def realization_from_json(obj) -> Realization:
    vertices = _expect(obj, "vertices", list, "realization")
    edges = _expect(obj, "edges", list, "realization")
    terminals = _expect(obj, "terminals", list, "realization")
    subtrees = _expect(obj, "subtrees", dict, "realization")
    arcs = []
    for e in edges:
        tail = _expect(e, "tail", str, "realization edge")
        head = _expect(e, "head", str, "realization edge")
        length = str_to_fraction(_expect(e, "length", None, "realization edge"))
        arcs.append((tail, head, length))
    tree = OrientedTree(tuple(vertices), tuple(arcs))
    if set(subtrees) != set(terminals):
        raise DomainError("InputParseError", "realization: one subtree per terminal")
    subs = tuple(tuple(subtrees[s]) for s in terminals)
    return Realization(tree, tuple(terminals), subs)


def splits_to_json(terms: Sequence[SplitTerm]) -> list:
    return [
        {
            "side_a": list(term.side_a),
            "side_b": list(term.side_b),
            "coeff": fraction_to_str(term.coeff),
        }
        for term in terms
    ]


# -- complexes and skeletons -----------------------------------------------------


def complex_to_json(comp: PolyComplex) -> dict:
    return {
        "which": comp.which,
        "labels": list(comp.ground_labels),
        "dim": comp.dim,
        "vertices": [point_to_json(p) for p in comp.vertices],
        "faces": [
            {
                "dim": f.dim,
                "vertices": list(f.vertex_ids),
                "tight_pairs": [
                    [comp.ground_labels[s], comp.ground_labels[t]] for s, t in f.edges
                ],
            }
            for f in comp.faces
        ],
        "maximal_faces": comp.maximal_faces(),
    }


def skeleton_to_json(skel: SkeletonGraph) -> dict:
    return {
        "vertices": [point_to_json(p) for p in skel.vertices],
        "arcs": [
            {"tail": i, "head": j, "length": fraction_to_str(w)} for i, j, w in skel.arcs
        ],
    }


# -- DOT -----------------------------------------------------------------------

_PALETTE = (
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
    "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080",
)


def skeleton_to_dot(skel: SkeletonGraph) -> str:
    lines = ["digraph skeleton {"]
    for i in range(len(skel.vertices)):
        lines.append(f'  v{i} [label="v{i}"];')
    for i, j, w in skel.arcs:
        lines.append(f'  v{i} -> v{j} [label="{w}"];')
    lines.append("}")
    return "\n".join(lines)


def realization_to_dot(r: Realization) -> str:
    colors: Dict[str, List[str]] = {v: [] for v in r.tree.vertices}
    for k, sub in enumerate(r.subtrees):
        for v in sub:
            colors[v].append(_PALETTE[k % len(_PALETTE)])
    lines = ["digraph realization {", "  node [style=filled];"]
    for v in r.tree.vertices:
        hosted = [s for s, sub in zip(r.terminals, r.subtrees) if v in sub]
        label = v if not hosted else f"{v}\\n{{{','.join(hosted)}}}"
        fill = colors[v][0] if colors[v] else "#dddddd"
        lines.append(f'  "{v}" [label="{label}", fillcolor="{fill}"];')
    for t, h, w in r.tree.arcs:
        lines.append(f'  "{t}" -> "{h}" [label="{w}"];')
    lines.append("}")
    return "\n".join(lines)


# -- generic report conversion ----------------------------------------------------


def to_jsonable(value):
    """Recursively convert report structures into plain JSON values."""
    if isinstance(value, Fraction):
        return fraction_to_str(value)
    if isinstance(value, DirectedDistance):
        return distance_to_json(value)
    if isinstance(value, ExtPoint):
        return point_to_json(value)
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2)
