"""Multiflow maximization and its metric-extension dual, exactly.

The primal packs flow onto directed paths between distinct terminals,
weighted by the terminal distance; the dual minimizes the capacity-weighted
total length of a directed metric on the whole vertex set that extends the
terminal distance.  Both are solved as exact LPs and always meet, and the
verification routines additionally realize the dual optimum inside the
tight span (tight extensions) or inside the tropical polytope's balanced
section (cyclically tight extensions, Eulerian networks).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import DomainError
from .geometry import (
    ExtPoint,
    Fiber,
    canonical_points,
    canonical_section_membership,
    dinf,
    in_qplus,
    in_tight_span,
    is_balanced,
    retract_to_qplus,
    retract_to_section,
    retract_to_tight_span,
)
from .lp import linear_program, solve
from .metrics import DirectedDistance, cycle_length, distance_from_entries, is_metric

F0 = Fraction(0)

PATH_ENUM_CAP = 10


@dataclass(frozen=True)
class Network:
    """Directed network with integer capacities and a terminal set.

    Parallel edges are merged by summing their capacities at construction;
    self-loops are rejected.
    """

    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str, int], ...]
    terminals: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise DomainError("InvalidNetwork", "duplicate vertex name")
        vs = set(self.vertices)
        seen = set()
        for tail, head, cap in self.edges:
            if tail not in vs or head not in vs:
                raise DomainError("InvalidNetwork", f"edge {tail!r}->{head!r} uses unknown vertex")
            if tail == head:
                raise DomainError("InvalidNetwork", f"self-loop at {tail!r}")
            if not isinstance(cap, int) or cap < 0:
                raise DomainError("InvalidNetwork", "capacities must be nonnegative integers")
            if (tail, head) in seen:
                raise DomainError("InvalidNetwork", f"unmerged parallel edge {tail!r}->{head!r}")
            seen.add((tail, head))
        if len(self.terminals) < 2:
            raise DomainError("InvalidNetwork", "need at least two terminals")
        if len(set(self.terminals)) != len(self.terminals):
            raise DomainError("InvalidNetwork", "duplicate terminal")
        for s in self.terminals:
            if s not in vs:
                raise DomainError("InvalidNetwork", f"terminal {s!r} is not a vertex")

    def capacity(self, tail: str, head: str) -> int:
        for t, h, c in self.edges:
            if (t, h) == (tail, head):
                return c
        return 0


def network(vertices, edges, terminals) -> Network:
    """Build a network, merging parallel edges by capacity sum."""
    merged: Dict[Tuple[str, str], int] = {}
    order: List[Tuple[str, str]] = []
    for tail, head, cap in edges:
        if (tail, head) not in merged:
            merged[(tail, head)] = 0
            order.append((tail, head))
        merged[(tail, head)] += cap
    return Network(
        tuple(vertices),
        tuple((t, h, merged[(t, h)]) for t, h in order),
        tuple(terminals),
    )


@dataclass(frozen=True)
class Multiflow:
    """Path flow: one nonnegative value per S-path."""

    paths: Tuple[Tuple[str, ...], ...]
    values: Tuple[Fraction, ...]

    def respects_capacities(self, net: Network) -> bool:
        load: Dict[Tuple[str, str], Fraction] = {}
        for path, lam in zip(self.paths, self.values):
            if lam < 0:
                return False
            for a, b in zip(path, path[1:]):
                load[(a, b)] = load.get((a, b), F0) + lam
        return all(load.get((t, h), F0) <= c for t, h, c in net.edges)


def enumerate_s_paths(net: Network, cap: int = PATH_ENUM_CAP) -> List[Tuple[str, ...]]:
    """All vertex-simple directed paths joining two distinct terminals.

    Intermediate vertices may be terminals; a path just may not revisit
    a vertex.
    """
    if len(net.vertices) > cap:
        raise DomainError("NetworkTooLarge", f"|V|={len(net.vertices)} exceeds cap {cap}")
    out: Dict[str, List[str]] = {v: [] for v in net.vertices}
    for tail, head, _ in net.edges:
        out[tail].append(head)
    for v in out:
        out[v].sort()
    terminals = set(net.terminals)
    paths: List[Tuple[str, ...]] = []

    def walk(prefix: List[str], used: set) -> None:
        here = prefix[-1]
        for nxt in out[here]:
            if nxt in used:
                continue
            if nxt in terminals and nxt != prefix[0]:
                paths.append(tuple(prefix) + (nxt,))
            prefix.append(nxt)
            used.add(nxt)
            walk(prefix, used)
            used.discard(nxt)
            prefix.pop()

    for s in sorted(terminals):
        walk([s], {s})
    paths.sort()
    return paths


def _require_terminal_match(net: Network, mu: DirectedDistance) -> None:
    if set(net.terminals) != set(mu.labels):
        raise DomainError("GroundSetMismatch", "network terminals must carry the distance labels")


def max_multiflow(net: Network, mu: DirectedDistance) -> Tuple[Fraction, Multiflow]:
    """Maximize the mu-weighted total flow over all S-path packings."""
    _require_terminal_match(net, mu)
    paths = enumerate_s_paths(net)
    if not paths:
        return F0, Multiflow((), ())
    rows = []
    rhs = []
    for tail, head, c in net.edges:
        rows.append(tuple(
            Fraction(1) if (tail, head) in zip(path, path[1:]) else F0
            for path in paths
        ))
        rhs.append(Fraction(c))
    objective = tuple(mu.value(path[0], path[-1]) for path in paths)
    sol = solve(linear_program(objective, rows, ["<="] * len(rows), rhs, maximize=True))
    assert sol.status == "optimal", "path LP is feasible (zero flow) and capacity-bounded"
    kept = [(path, lam) for path, lam in zip(paths, sol.x) if lam > 0]
    flow = Multiflow(tuple(p for p, _ in kept), tuple(l for _, l in kept))
    assert flow.respects_capacities(net)
    return sol.value, flow


@dataclass(frozen=True)
class MetricExtension:
    """Directed metric on the network vertices agreeing with mu on terminals."""

    mu: DirectedDistance
    d: DirectedDistance

    def __post_init__(self):
        if not set(self.mu.labels) <= set(self.d.labels):
            raise DomainError("NotAnExtension", "extension must cover all terminals")
        if not is_metric(self.d):
            raise DomainError("NotAnExtension", "extension must be a directed metric")
        for s in self.mu.labels:
            for t in self.mu.labels:
                if self.d.value(s, t) != self.mu.value(s, t):
                    raise DomainError(
                        "NotAnExtension",
                        f"boundary value at ({s!r},{t!r}) differs from mu",
                    )

    def point_of(self, x: str) -> ExtPoint:
        """The canonical image d_x in the ambient coordinate space of mu."""
        col = tuple(self.d.value(s, x) for s in self.mu.labels)
        row = tuple(self.d.value(x, t) for t in self.mu.labels)
        return ExtPoint(self.mu.ground, col, row)


def _as_extension(mu: DirectedDistance, d: Union[MetricExtension, DirectedDistance]) -> MetricExtension:
    if isinstance(d, MetricExtension):
        if d.mu.labels != mu.labels or d.mu.entries != mu.entries:
            raise DomainError("NotAnExtension", "extension was built for a different distance")
        return d
    return MetricExtension(mu, d)


def dual_metric_lp(net: Network, mu: DirectedDistance) -> Tuple[Fraction, MetricExtension]:
    """Minimize capacity-weighted total length over metric extensions of mu."""
    _require_terminal_match(net, mu)
    if not is_metric(mu):
        raise DomainError("NotAMetric", "the dual LP ranges over extensions of a metric")
    verts = net.vertices
    pairs = [(x, y) for x in verts for y in verts if x != y]
    index = {pair: k for k, pair in enumerate(pairs)}
    nvar = len(pairs)

    objective = [F0] * nvar
    for tail, head, c in net.edges:
        objective[index[(tail, head)]] += Fraction(c)

    rows, senses, rhs = [], [], []
    for x in verts:
        for y in verts:
            for z in verts:
                if len({x, y, z}) < 3:
                    continue
                row = [F0] * nvar
                row[index[(x, y)]] += 1
                row[index[(y, z)]] += 1
                row[index[(x, z)]] -= 1
                rows.append(tuple(row))
                senses.append(">=")
                rhs.append(F0)
    for s in mu.labels:
        for t in mu.labels:
            if s == t:
                continue
            row = [F0] * nvar
            row[index[(s, t)]] = Fraction(1)
            rows.append(tuple(row))
            senses.append("==")
            rhs.append(mu.value(s, t))

    sol = solve(linear_program(objective, rows, senses, rhs, maximize=False))
    assert sol.status == "optimal", "shortest-path extension certifies feasibility"
    entries = [
        [sol.x[index[(x, y)]] if x != y else F0 for y in verts]
        for x in verts
    ]
    ext = MetricExtension(mu, distance_from_entries(entries, verts))
    return sol.value, ext


def network_objective(net: Network, d: DirectedDistance) -> Fraction:
    return sum((Fraction(c) * d.value(tail, head) for tail, head, c in net.edges), F0)


# -- tightness ------------------------------------------------------------------


def is_tight_extension(mu: DirectedDistance, d) -> bool:
    """Does x -> d_x isometrically embed the extension into the tight span?"""
    ext = _as_extension(mu, d)
    points = {x: ext.point_of(x) for x in ext.d.labels}
    for p in points.values():
        if not in_tight_span(mu, p):
            return False
    for x in ext.d.labels:
        for y in ext.d.labels:
            if x != y and dinf(points[x], points[y]) != ext.d.value(x, y):
                return False
    return True


def tighten_extension(mu: DirectedDistance, d) -> MetricExtension:
    """Pull the extension onto the tight span until it is tight.

    Each sweep maps x to the retraction of d_x and reads distances back;
    the result never exceeds the input anywhere, so the capacity objective
    never grows.  A fixpoint is reached after few sweeps.
    """
    ext = _as_extension(mu, d)
    labels = ext.d.labels
    for _ in range(len(labels) + 2):
        points = [retract_to_tight_span(mu, ext.point_of(x)) for x in labels]
        entries = [
            [dinf(points[i], points[j]) if i != j else F0 for j in range(len(labels))]
            for i in range(len(labels))
        ]
        new_d = distance_from_entries(entries, labels)
        if new_d.entries == ext.d.entries:
            return ext
        ext = MetricExtension(mu, new_d)
    raise AssertionError("tightening failed to reach a fixpoint")


def is_cyclically_tight_extension(mu: DirectedDistance, d) -> bool:
    """Tight, lands in the nonnegative tropical part, and is balanced."""
    ext = _as_extension(mu, d)
    if not is_tight_extension(mu, ext):
        return False
    points = [ext.point_of(x) for x in ext.d.labels]
    if not all(in_qplus(mu, p) for p in points):
        return False
    ok, _ = is_balanced(points)
    return ok


# -- Eulerian decomposition ------------------------------------------------------


def is_eulerian(net: Network) -> bool:
    balance: Dict[str, int] = {v: 0 for v in net.vertices}
    for tail, head, c in net.edges:
        balance[tail] += c
        balance[head] -= c
    return all(b == 0 for b in balance.values())


def eulerian_decompose(net: Network) -> Optional[List[Tuple[str, ...]]]:
    """Write the capacity vector as a sum of directed-cycle characteristic vectors.

    Returns None when some vertex is unbalanced.
    """
    if not is_eulerian(net):
        return None
    residual: Dict[Tuple[str, str], int] = {
        (tail, head): c for tail, head, c in net.edges if c > 0
    }
    cycles: List[Tuple[str, ...]] = []
    while residual:
        start = min(residual)[0]
        walk = [start]
        position = {start: 0}
        while True:
            here = walk[-1]
            nxt = min(h for (t, h) in residual if t == here)
            if nxt in position:
                cycle = tuple(walk[position[nxt]:])
                break
            position[nxt] = len(walk)
            walk.append(nxt)
        pivot = cycle.index(min(cycle))
        cycle = cycle[pivot:] + cycle[:pivot]
        step = min(residual[e] for e in _cycle_edges(cycle))
        for e in _cycle_edges(cycle):
            residual[e] -= step
            if residual[e] == 0:
                del residual[e]
        cycles.extend([cycle] * step)
    return cycles


def _cycle_edges(cycle: Tuple[str, ...]) -> List[Tuple[str, str]]:
    return [(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]


# -- end-to-end verification -----------------------------------------------------


def verify_minmax(net: Network, mu: DirectedDistance, mode: str = "T") -> dict:
    """Check the exact min-max relation and realize the dual optimum geometrically.

    Mode T realizes the tightened dual optimum inside the tight span; mode Q
    requires an Eulerian network and realizes it inside the canonical balanced
    section, fiber-anchored at the terminals.
    """
    if mode not in ("T", "Q"):
        raise DomainError("UsageError", "mode must be T or Q")
    if not is_metric(mu):
        raise DomainError("NotAMetric", "verification assumes a directed metric")
    cycles = None
    if mode == "Q":
        cycles = eulerian_decompose(net)
        if cycles is None:
            raise DomainError("NotEulerian", "mode Q needs capacity-balanced vertices")

    max_val, flow = max_multiflow(net, mu)
    min_val, ext = dual_metric_lp(net, mu)
    assert max_val == min_val, "multiflow maximum must meet the extension minimum"
    report = {
        "mode": mode,
        "max": max_val,
        "min": min_val,
        "equal": True,
        "flow_paths": [
            {"path": list(p), "value": lam} for p, lam in zip(flow.paths, flow.values)
        ],
        "extension": ext.d,
    }

    if mode == "T":
        tight = tighten_extension(mu, ext)
        assert is_tight_extension(mu, tight)
        assert network_objective(net, tight.d) == min_val
        for s in mu.labels:
            assert tight.point_of(s) == canonical_points(mu, s)[0]
        report["tight_objective"] = network_objective(net, tight.d)
        report["tight_extension"] = tight.d
        return report

    total = sum((cycle_length(ext.d, cyc) for cyc in cycles), F0)
    assert total == network_objective(net, ext.d), "cycle decomposition must cover the objective"
    rho = {}
    for x in ext.d.labels:
        p = retract_to_tight_span(mu, ext.point_of(x))
        p = retract_to_qplus(mu, p)
        rho[x] = retract_to_section(mu, p)
    assert all(canonical_section_membership(mu, p) for p in rho.values())
    ok, _ = is_balanced(list(rho.values()))
    assert ok, "a section-valued family must be balanced"
    for s in mu.labels:
        assert Fiber(rho[s]) == Fiber(canonical_points(mu, s)[0]), "terminal fibers must anchor at mu_s"
    report["cycles"] = cycles
    report["cycle_total"] = total
    report["balanced"] = True
    return report
