"""Geometry of directed tight spans.

Points live in R^(2n): a column part indexed by the ground set and a row part
indexed by a second copy of it.  The coupling constraints

    p(s^c) + p(t^r) >= mu(s, t)        for all s, t

carve out the polyhedron Pi; intersecting with the nonnegative orthant gives
P.  The directed tight span T is the set of points of P that cannot be
decreased coordinatewise inside P, and Q is the analogous minimal set of Pi.
Q+ = Q intersected with the orthant is a subcomplex of T.  Everything here is
exact: coordinates are Fractions, comparisons are equalities.

Main tools:

- dinf_plus / dinf: the asymmetric sup-distances making T a directed metric
  space;
- equality_graph: the bipartite graph of tight couplings at a point, which
  governs minimality and local dimension;
- classify_membership: where a point sits relative to Pi, P, T, Q+;
- canonical_points: the distance rows/columns of an element and the two
  one-sided minimal representatives, all landing in T when expected;
- retract_ray and the two nonexpansive retractions (P onto T, T onto Q+);
- balance of point sets, balanced sections of Q over the tropical quotient,
  and the interval-based extension of a balanced set to further fibers;
- geodesic_polyline: exact geodesics through pointwise retraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import DomainError
from .metrics import DirectedDistance, Element, GroundSet

F0 = Fraction(0)


class Membership(Enum):
    OUTSIDE = "outside"
    PI_ONLY = "Pi_only"
    P_NOT_T = "P_not_T"
    T_NOT_QPLUS = "T_not_Qplus"
    QPLUS = "Qplus"
    Q_NOT_NONNEG = "Q_not_nonneg"


@dataclass(frozen=True)
class ExtPoint:
    """Rational vector with a column part and a row part over a ground set."""

    ground: GroundSet
    col: Tuple[Fraction, ...]
    row: Tuple[Fraction, ...]

    def __post_init__(self):
        n = self.ground.n
        if len(self.col) != n or len(self.row) != n:
            raise DomainError(
                "LengthMismatch",
                f"point parts have lengths {len(self.col)}/{len(self.row)}, expected {n}/{n}",
            )

    @property
    def n(self) -> int:
        return self.ground.n

    def coords(self) -> Tuple[Fraction, ...]:
        return self.col + self.row

    def add_scaled(self, v: "ExtPoint", t: Fraction) -> "ExtPoint":
        return ExtPoint(
            self.ground,
            tuple(a + t * b for a, b in zip(self.col, v.col)),
            tuple(a + t * b for a, b in zip(self.row, v.row)),
        )

    def fiber_shift(self, t: Fraction) -> "ExtPoint":
        """Translate along the all-ones line: +t on columns, -t on rows."""
        return ExtPoint(
            self.ground,
            tuple(a + t for a in self.col),
            tuple(a - t for a in self.row),
        )

    def key(self) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
        return (self.col, self.row)


def point(mu_or_ground, col, row) -> ExtPoint:
    ground = mu_or_ground.ground if isinstance(mu_or_ground, DirectedDistance) else mu_or_ground
    return ExtPoint(ground, tuple(Fraction(c) for c in col), tuple(Fraction(r) for r in row))


@dataclass(frozen=True)
class Fiber:
    """A point of Q modulo translation along the all-ones line.

    Two fibers are equal when their representatives differ by a multiple of
    (+1 columns, -1 rows); the canonical representative shifts the minimum
    row coordinate to zero.
    """

    representative: ExtPoint

    def canonical(self) -> ExtPoint:
        return self.representative.fiber_shift(min(self.representative.row))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fiber):
            return NotImplemented
        return self.canonical().key() == other.canonical().key()

    def __hash__(self) -> int:
        return hash(self.canonical().key())


@dataclass(frozen=True)
class EqualityGraph:
    """Bipartite graph on column and row copies; edges are tight couplings."""

    n: int
    edges: frozenset  # pairs (s, t): column s joined to row t

    def isolated_cols(self) -> frozenset:
        covered = {s for s, _ in self.edges}
        return frozenset(s for s in range(self.n) if s not in covered)

    def isolated_rows(self) -> frozenset:
        covered = {t for _, t in self.edges}
        return frozenset(t for t in range(self.n) if t not in covered)

    def components(self) -> List[Tuple[frozenset, frozenset]]:
        """Connected components as (column set, row set), isolated vertices
        appearing as singletons.  Deterministic order: by smallest member."""
        adj_c = {s: set() for s in range(self.n)}
        adj_r = {t: set() for t in range(self.n)}
        for s, t in self.edges:
            adj_c[s].add(t)
            adj_r[t].add(s)
        seen_c, seen_r = set(), set()
        comps = []
        for start in range(self.n):
            for side in ("c", "r"):
                if side == "c" and start in seen_c:
                    continue
                if side == "r" and start in seen_r:
                    continue
                cols, rows = set(), set()
                stack = [(side, start)]
                while stack:
                    kind, v = stack.pop()
                    if kind == "c":
                        if v in cols:
                            continue
                        cols.add(v)
                        seen_c.add(v)
                        stack.extend(("r", t) for t in adj_c[v])
                    else:
                        if v in rows:
                            continue
                        rows.add(v)
                        seen_r.add(v)
                        stack.extend(("c", s) for s in adj_r[v])
                comps.append((frozenset(cols), frozenset(rows)))
        return comps


# -- distances ---------------------------------------------------------------


def dinf_plus(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    """One-sided sup-distance: largest positive part of q - p."""
    if len(p) != len(q):
        raise DomainError("LengthMismatch", f"vector lengths {len(p)} vs {len(q)}")
    if len(p) == 0:
        raise DomainError("LengthMismatch", "vectors must be nonempty")
    return max(max(b - a for a, b in zip(p, q)), F0)


def dinf(p: ExtPoint, q: ExtPoint) -> Fraction:
    """Directed sup-distance: column increase from p to q, row increase back."""
    if p.ground != q.ground:
        raise DomainError("GroundSetMismatch", "points live over different ground sets")
    return max(dinf_plus(p.col, q.col), dinf_plus(q.row, p.row))


def norm_pair(p: ExtPoint) -> Fraction:
    """dinf(0, p) + dinf(p, 0) written as a norm of the coordinate vector."""
    up = max(max(max(x, F0) for x in p.col), max(max(-x, F0) for x in p.row))
    dn = max(max(max(-x, F0) for x in p.col), max(max(x, F0) for x in p.row))
    return up + dn


# -- membership --------------------------------------------------------------


def _tight_edges(mu: DirectedDistance, p: ExtPoint) -> frozenset:
    n = mu.n
    return frozenset(
        (s, t)
        for s in range(n)
        for t in range(n)
        if p.col[s] + p.row[t] == mu.entries[s][t]
    )


def _in_pi(mu: DirectedDistance, p: ExtPoint) -> bool:
    n = mu.n
    return all(
        p.col[s] + p.row[t] >= mu.entries[s][t] for s in range(n) for t in range(n)
    )


def _nonneg(p: ExtPoint) -> bool:
    return all(x >= 0 for x in p.coords())


def equality_graph(mu: DirectedDistance, p: ExtPoint) -> EqualityGraph:
    """Tight couplings at p; p must satisfy all coupling constraints."""
    _check_ground(mu, p)
    if not _in_pi(mu, p):
        raise DomainError("NotInPolyhedron", "point violates a coupling constraint")
    return EqualityGraph(mu.n, _tight_edges(mu, p))


def _check_ground(mu: DirectedDistance, p: ExtPoint):
    if mu.ground != p.ground:
        raise DomainError("GroundSetMismatch", "point and distance ground sets differ")


def classify_membership(mu: DirectedDistance, p: ExtPoint) -> Membership:
    """Exact location of p relative to Pi, P, T, Q+.

    Minimality in P needs every positive coordinate covered by a tight
    coupling; minimality in Pi needs every coordinate covered.
    """
    _check_ground(mu, p)
    if not _in_pi(mu, p):
        return Membership.OUTSIDE
    k = EqualityGraph(mu.n, _tight_edges(mu, p))
    iso_c, iso_r = k.isolated_cols(), k.isolated_rows()
    fully_covered = not iso_c and not iso_r
    if _nonneg(p):
        if fully_covered:
            return Membership.QPLUS
        if all(p.col[s] == 0 for s in iso_c) and all(p.row[t] == 0 for t in iso_r):
            return Membership.T_NOT_QPLUS
        return Membership.P_NOT_T
    if fully_covered:
        return Membership.Q_NOT_NONNEG
    return Membership.PI_ONLY


def in_tight_span(mu: DirectedDistance, p: ExtPoint) -> bool:
    return classify_membership(mu, p) in (Membership.T_NOT_QPLUS, Membership.QPLUS)


def in_qplus(mu: DirectedDistance, p: ExtPoint) -> bool:
    return classify_membership(mu, p) is Membership.QPLUS


# -- canonical points --------------------------------------------------------


def canonical_points(mu: DirectedDistance, s: Element) -> Tuple[ExtPoint, ExtPoint, ExtPoint]:
    """The distance point of s and its two one-sided minimal companions.

    Returns (mu_s, mu_s_in, mu_s_out) where

        mu_s(t^c)     = mu(t, s)                 mu_s(t^r)     = mu(s, t)
        mu_s_in(t^c)  = mu(t, s)                 mu_s_in(t^r)  = max_u mu(u,t) - mu(u,s)
        mu_s_out(t^c) = max_u mu(t,u) - mu(s,u)  mu_s_out(t^r) = mu(s, t)

    The in/out variants always land in the tight span with both s-coordinates
    zero; for a directed metric all three coincide.
    """
    i = mu.ground.index_of(s)
    n, e = mu.n, mu.entries
    col = tuple(e[t][i] for t in range(n))
    row = tuple(e[i][t] for t in range(n))
    in_row = tuple(max(e[u][t] - e[u][i] for u in range(n)) for t in range(n))
    out_col = tuple(max(e[t][u] - e[i][u] for u in range(n)) for t in range(n))
    g = mu.ground
    return (
        ExtPoint(g, col, row),
        ExtPoint(g, col, in_row),
        ExtPoint(g, out_col, row),
    )


# -- local dimension ---------------------------------------------------------


def face_dimension(mu: DirectedDistance, p: ExtPoint):
    """Dimension of the face of T containing p in its relative interior.

    Equals the number of connected components of the equality graph touching
    no zero coordinate of p; each such component contributes the direction
    (+1 on its columns, -1 on its rows).  Returns (dim, directions) with
    directions a list of (column tuple, row tuple) index pairs.
    """
    _check_ground(mu, p)
    if not in_tight_span(mu, p):
        raise DomainError("NotInTightSpan", "face dimension is defined on the tight span")
    k = EqualityGraph(mu.n, _tight_edges(mu, p))
    free = []
    for cols, rows in k.components():
        if any(p.col[s] == 0 for s in cols) or any(p.row[t] == 0 for t in rows):
            continue
        free.append((tuple(sorted(cols)), tuple(sorted(rows))))
    free.sort()
    return len(free), free


# -- retractions -------------------------------------------------------------


def retract_ray(
    mu: DirectedDistance, p: ExtPoint, v: ExtPoint, amax: Optional[Fraction] = None
) -> ExtPoint:
    """Move from p along v as far as P allows, capped at amax.

    With amax None the direction must hit a constraint eventually, which is
    guaranteed when v has a negative component.
    """
    _check_ground(mu, p)
    if not (_in_pi(mu, p) and _nonneg(p)):
        raise DomainError("NotInP", "ray retraction starts from a point of P")
    bounds: List[Fraction] = []
    n = mu.n
    for i, (x, d) in enumerate(zip(p.coords(), v.coords())):
        if d < 0:
            bounds.append(x / -d)
    for s in range(n):
        for t in range(n):
            delta = v.col[s] + v.row[t]
            if delta < 0:
                slack = p.col[s] + p.row[t] - mu.entries[s][t]
                bounds.append(slack / -delta)
    if not bounds and amax is None:
        raise DomainError("UnboundedDirection", "direction never leaves P and no cap given")
    eps = min(bounds) if bounds else amax
    if amax is not None and amax < eps:
        eps = amax
    return p.add_scaled(v, eps)


def _unit(ground: GroundSet, side: str, index: int, sign: int) -> ExtPoint:
    n = ground.n
    col = [F0] * n
    row = [F0] * n
    if side == "c":
        col[index] = Fraction(sign)
    else:
        row[index] = Fraction(sign)
    return ExtPoint(ground, tuple(col), tuple(row))


def retract_to_tight_span(mu: DirectedDistance, p: ExtPoint) -> ExtPoint:
    """Nonexpansive retraction of P onto the tight span.

    For each element, last label first, drop the row coordinate as far as
    possible and then the column coordinate.  A coordinate stops at zero or
    when a coupling becomes tight; tight couplings never loosen again, so a
    single sweep lands in T.
    """
    _check_ground(mu, p)
    if not (_in_pi(mu, p) and _nonneg(p)):
        raise DomainError("NotInP", "retraction is defined on P")
    g = mu.ground
    for i in reversed(range(mu.n)):
        p = retract_ray(mu, p, _unit(g, "r", i, -1))
        p = retract_ray(mu, p, _unit(g, "c", i, -1))
    return p


def _proper_subsets(n: int) -> List[Tuple[int, ...]]:
    """Nonempty proper subsets of range(n), by cardinality then lexicographic,
    so that no subset precedes one of its supersets."""
    out = []
    for k in range(1, n):
        out.extend(combinations(range(n), k))
    return out


def _subset_direction(ground: GroundSet, subset: Tuple[int, ...], side: str) -> ExtPoint:
    n = ground.n
    inside = set(subset)
    one = Fraction(1)
    if side == "c":
        col = tuple(one if s in inside else F0 for s in range(n))
        row = tuple(Fraction(-1) for _ in range(n))
    else:
        col = tuple(Fraction(-1) for _ in range(n))
        row = tuple(one if t in inside else F0 for t in range(n))
    return ExtPoint(ground, col, row)


def retract_to_qplus(mu: DirectedDistance, p: ExtPoint) -> ExtPoint:
    """Cyclically nonexpansive retraction of the tight span onto Q+.

    Sweeps the column directions (+1 on a subset of columns, -1 on all rows)
    over all nonempty proper subsets in inclusion-compatible order, then the
    symmetric row directions.  Fixes Q+ pointwise.
    """
    _check_ground(mu, p)
    if not in_tight_span(mu, p):
        raise DomainError("NotInTightSpan", "retraction onto Q+ starts from the tight span")
    subsets = _proper_subsets(mu.n)
    for a in subsets:
        p = retract_ray(mu, p, _subset_direction(mu.ground, a, "c"))
    for a in subsets:
        p = retract_ray(mu, p, _subset_direction(mu.ground, a, "r"))
    return p


# -- balance and sections ----------------------------------------------------


def _strictly_less(a: Sequence[Fraction], b: Sequence[Fraction]) -> bool:
    return all(x < y for x, y in zip(a, b))


def is_balanced(points: Sequence[ExtPoint]):
    """No point strictly dominated by another on columns, none on rows.

    Returns (True, None) or (False, (i, j)) for the first ordered index pair
    with points[i]^c < points[j]^c or points[i]^r < points[j]^r.
    """
    pts = list(points)
    for i, p in enumerate(pts):
        for j, q in enumerate(pts):
            if i == j:
                continue
            if p.ground != q.ground:
                raise DomainError("GroundSetMismatch", "balance needs a common ground set")
            if _strictly_less(p.col, q.col) or _strictly_less(p.row, q.row):
                return False, (i, j)
    return True, None


def _require_in_q(mu: DirectedDistance, p: ExtPoint):
    if classify_membership(mu, p) not in (Membership.QPLUS, Membership.Q_NOT_NONNEG):
        raise DomainError("NotInQ", "point is not a minimal element of the coupling polyhedron")


def retract_to_section(mu: DirectedDistance, p: ExtPoint, anchors: Optional[Sequence[ExtPoint]] = None) -> ExtPoint:
    """Representative of p's fiber on a balanced section of Q.

    Without anchors this is the canonical section: shift so the minimum row
    coordinate is zero.  With anchors (a balanced subset of Q), the fiber is
    met in the interval of translates balanced against every anchor, and the
    lower endpoint is returned; anchors on p's own fiber pin the answer.
    """
    _require_in_q(mu, p)
    if anchors is None:
        return p.fiber_shift(min(p.row))
    return extend_to_balanced_section(mu, anchors, [Fiber(p)])[0]


def canonical_section_membership(mu: DirectedDistance, p: ExtPoint) -> bool:
    """Member of Q+ whose minimum row coordinate is zero."""
    return classify_membership(mu, p) is Membership.QPLUS and min(p.row) == 0


@dataclass
class BalanceInterval:
    """Closed interval of fiber translates, endpoints None for unbounded."""

    lower: Optional[Fraction] = None
    upper: Optional[Fraction] = None

    def intersect(self, lo: Optional[Fraction], hi: Optional[Fraction]) -> "BalanceInterval":
        lower = self.lower if lo is None else (lo if self.lower is None else max(self.lower, lo))
        upper = self.upper if hi is None else (hi if self.upper is None else min(self.upper, hi))
        return BalanceInterval(lower, upper)

    def is_empty(self) -> bool:
        return self.lower is not None and self.upper is not None and self.lower > self.upper


def extend_to_balanced_section(
    mu: DirectedDistance, anchors: Sequence[ExtPoint], queries: Sequence[Fiber]
) -> List[ExtPoint]:
    """Extend a balanced subset of Q across the queried fibers.

    Each query contributes the translate interval [min, max] of (q - p)^c per
    current anchor q; the intersection is never empty (a Helly property of
    intervals), and the lower endpoint is chosen.  When every anchor lies in
    Q+, answers are kept in Q+ as well.  Answers join the anchor set
    immediately, so the returned points are mutually balanced too.
    """
    current = list(anchors)
    for q in current:
        _require_in_q(mu, q)
    ok, pair = is_balanced(current)
    if not ok:
        raise DomainError("NotBalanced", f"anchor pair {pair} is unbalanced")
    qplus_mode = all(classify_membership(mu, q) is Membership.QPLUS for q in current)
    answers: List[ExtPoint] = []
    for fiber in queries:
        p0 = fiber.representative
        _require_in_q(mu, p0)
        interval = BalanceInterval()
        for q in current:
            diffs = [qc - pc for pc, qc in zip(p0.col, q.col)]
            interval = interval.intersect(min(diffs), max(diffs))
        if qplus_mode:
            interval = interval.intersect(max(-c for c in p0.col), min(p0.row))
        if interval.is_empty() or interval.lower is None:
            raise DomainError("EmptyIntersection", "no balanced representative on the fiber")
        ans = p0.fiber_shift(interval.lower)
        answers.append(ans)
        current.append(ans)
    return answers


# -- geodesics ---------------------------------------------------------------


def geodesic_polyline(mu: DirectedDistance, p: ExtPoint, q: ExtPoint, k: int) -> List[ExtPoint]:
    """Retract the segment from p to q back into the tight span.

    Returns k+1 points; consecutive dinf lengths always sum to dinf(p, q)
    exactly, for every k >= 1.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    for x in (p, q):
        if not in_tight_span(mu, x):
            raise DomainError("NotInTightSpan", "geodesics run between tight span points")
    diff = ExtPoint(
        p.ground,
        tuple(b - a for a, b in zip(p.col, q.col)),
        tuple(b - a for a, b in zip(p.row, q.row)),
    )
    out = []
    for i in range(k + 1):
        x = p.add_scaled(diff, Fraction(i, k))
        out.append(retract_to_tight_span(mu, x))
    return out
