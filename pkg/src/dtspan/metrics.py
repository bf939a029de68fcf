"""Directed distances on finite ground sets.

A directed distance is a square matrix of nonnegative rationals with zero
diagonal; symmetry is not assumed, and neither is the triangle inequality
unless the matrix is a directed metric.  This module holds the matrix types
plus the scalar-level machinery built on them:

- validation and the directed triangle-inequality test,
- cycle lengths and congruence of two distances by a potential,
- the quadruple condition characterizing one-dimensional tight spans,
- the sextuple condition characterizing tropical rank at most two,
- the two-part test for metrics realizable on an oriented tree with
  single-vertex subtrees.

All witnesses returned by the condition checkers are the lexicographically
smallest violating index tuples, so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Dict, Optional, Sequence, Tuple, Union

from .errors import DomainError

Element = Union[str, int]
# A potential maps ground-set labels to rationals; used for congruence.
Potential = Dict[str, Fraction]
# A cyclic sequence of elements; consecutive pairs plus the wrap-around pair
# are the steps of the cycle.
CyclicSequence = Tuple[Element, ...]

_PERM3 = tuple(permutations(range(3)))


@dataclass(frozen=True)
class GroundSet:
    """Ordered finite set of distinct labels."""

    labels: Tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) < 1:
            raise DomainError("NonSquare", "ground set must have at least one element")
        if len(set(self.labels)) != len(self.labels):
            raise DomainError("DuplicateLabel", f"duplicate labels in {self.labels}")

    @property
    def n(self) -> int:
        return len(self.labels)

    def index_of(self, element: Element) -> int:
        """Resolve a label or integer index to an index."""
        if isinstance(element, int):
            if not 0 <= element < self.n:
                raise DomainError("IndexOutOfRange", f"index {element} out of range for n={self.n}")
            return element
        try:
            return self.labels.index(element)
        except ValueError:
            raise DomainError("UnknownElement", f"element {element!r} not in ground set") from None


@dataclass(frozen=True)
class DirectedDistance:
    """Nonnegative rational matrix with zero diagonal over a ground set."""

    ground: GroundSet
    entries: Tuple[Tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return self.ground.n

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.ground.labels

    def value(self, s: Element, t: Element) -> Fraction:
        return self.entries[self.ground.index_of(s)][self.ground.index_of(t)]

    def transpose(self) -> "DirectedDistance":
        n = self.n
        return DirectedDistance(
            self.ground,
            tuple(tuple(self.entries[j][i] for j in range(n)) for i in range(n)),
        )

    def restrict(self, elements: Sequence[Element]) -> "DirectedDistance":
        """Principal submatrix on the given elements, in the given order."""
        idx = [self.ground.index_of(e) for e in elements]
        ground = GroundSet(tuple(self.labels[i] for i in idx))
        return DirectedDistance(
            ground, tuple(tuple(self.entries[i][j] for j in idx) for i in idx)
        )


def as_fraction(x) -> Fraction:
    """Exact conversion; rejects floats so no rounding can sneak in."""
    if isinstance(x, float):
        raise DomainError("InputParseError", f"float {x!r} rejected; use int or 'p/q' string")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise DomainError("InputParseError", f"cannot parse rational {x!r}") from None
    raise DomainError("InputParseError", f"cannot convert {type(x).__name__} to rational")


def validate_distance(matrix: Sequence[Sequence], labels: Optional[Sequence[str]] = None) -> DirectedDistance:
    """Build a DirectedDistance, rejecting malformed input.

    Checks squareness, nonnegativity, and zero diagonal.  Labels default to
    x0, x1, ... when not given.
    """
    n = len(matrix)
    if n == 0:
        raise DomainError("NonSquare", "empty matrix")
    rows = []
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise DomainError("NonSquare", f"row {i} has length {len(row)}, expected {n}")
        rows.append(tuple(as_fraction(x) for x in row))
    for i in range(n):
        if rows[i][i] != 0:
            raise DomainError("NonzeroDiagonal", f"entry ({i},{i}) is {rows[i][i]}, expected 0")
        for j in range(n):
            if rows[i][j] < 0:
                raise DomainError("NegativeEntry", f"entry ({i},{j}) is {rows[i][j]}")
    if labels is None:
        labels = tuple(f"x{i}" for i in range(n))
    ground = GroundSet(tuple(labels))
    if ground.n != n:
        raise DomainError("NonSquare", f"{ground.n} labels for a {n}x{n} matrix")
    return DirectedDistance(ground, tuple(rows))


def distance_from_entries(entries, labels=None) -> DirectedDistance:
    """Shorthand used throughout the tests."""
    return validate_distance(entries, labels)


def is_metric(mu: DirectedDistance) -> bool:
    """All ordered triangle inequalities mu(x,y) + mu(y,z) >= mu(x,z)."""
    n, e = mu.n, mu.entries
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if e[x][y] + e[y][z] < e[x][z]:
                    return False
    return True


def cycle_length(d: DirectedDistance, cycle: Sequence[Element]) -> Fraction:
    """Sum of d along consecutive steps of the cycle, wrap-around included."""
    if len(cycle) < 1:
        raise DomainError("IndexOutOfRange", "cycle must have at least one point")
    idx = [d.ground.index_of(c) for c in cycle]
    total = Fraction(0)
    for a, b in zip(idx, idx[1:] + idx[:1]):
        total += d.entries[a][b]
    return total


def congruence_witness(d: DirectedDistance, d2: DirectedDistance) -> Optional[Potential]:
    """Potential alpha with d(x,y) = d2(x,y) - alpha(x) + alpha(y), or None.

    Normalized so alpha vanishes at the first label.  Congruence preserves
    every cycle length, and holds as soon as it holds on all 3-element cycles.
    """
    if d.ground != d2.ground:
        raise DomainError("GroundSetMismatch", "congruence needs a common ground set")
    n = d.n
    alpha = [d.entries[0][x] - d2.entries[0][x] for x in range(n)]
    for x in range(n):
        for y in range(n):
            if d.entries[x][y] != d2.entries[x][y] - alpha[x] + alpha[y]:
                return None
    return {d.labels[x]: alpha[x] for x in range(n)}


def check_path_condition(mu: DirectedDistance) -> Tuple[bool, Optional[Tuple[int, int, int, int]]]:
    """Quadruple condition equivalent to the tight span being at most a segment.

    For every (s,t,u,v), with repeats allowed:
        mu(s,u) + mu(t,v) <= max{mu(s,v) + mu(t,u), mu(s,u), mu(s,v), mu(t,u), mu(t,v)}
    Returns (True, None) or (False, first violating quadruple).
    """
    e = mu.entries
    for s, t, u, v in product(range(mu.n), repeat=4):
        lhs = e[s][u] + e[t][v]
        rhs = max(e[s][v] + e[t][u], e[s][u], e[s][v], e[t][u], e[t][v])
        if lhs > rhs:
            return False, (s, t, u, v)
    return True, None


def check_tree_condition(mu: DirectedDistance) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    """Sextuple condition equivalent to tropical rank at most two.

    For every (x,y,z,u,v,w), with repeats allowed, the diagonal sum
    mu(x,u) + mu(y,v) + mu(z,w) must not exceed the best of the other five
    ways to match {x,y,z} with {u,v,w}.  Brute force over n**6 tuples.
    """
    e = mu.entries
    for x, y, z, u, v, w in product(range(mu.n), repeat=6):
        rows = (x, y, z)
        cols = (u, v, w)
        lhs = e[x][u] + e[y][v] + e[z][w]
        best = max(
            e[rows[0]][cols[p[0]]] + e[rows[1]][cols[p[1]]] + e[rows[2]][cols[p[2]]]
            for p in _PERM3[1:]
        )
        if lhs > best:
            return False, (x, y, z, u, v, w)
    return True, None


def check_directed_tree_metric(mu: DirectedDistance) -> bool:
    """Test whether a directed metric is a directed tree metric.

    Two parts, both necessary and together sufficient:
    (i)  the symmetrization mu + mu^T satisfies the four-point condition;
    (ii) for every triple, both cyclic orders have the same total length.
    """
    if not is_metric(mu):
        raise DomainError("NotAMetric", "directed tree metrics are defined for metrics only")
    n, e = mu.n, mu.entries
    sig = [[e[i][j] + e[j][i] for j in range(n)] for i in range(n)]
    for s, t, u, v in product(range(n), repeat=4):
        if sig[s][t] + sig[u][v] > max(sig[s][u] + sig[t][v], sig[s][v] + sig[t][u]):
            return False
    for x, y, z in product(range(n), repeat=3):
        if e[x][y] + e[y][z] + e[z][x] != e[z][y] + e[y][x] + e[x][z]:
            return False
    return True
