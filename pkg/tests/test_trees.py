"""Oriented-tree realizations: validation, evaluation, the three realization
classes with their round trips, and the split decomposition."""

import random
from fractions import Fraction

import pytest

from dtspan import (
    DomainError,
    OrientedTree,
    Realization,
    SplitTerm,
    check_directed_tree_metric,
    check_path_condition,
    check_tree_condition,
    congruence_witness,
    distance_from_entries,
    evaluate_realization,
    realize_directed_tree_metric,
    realize_path,
    realize_tree,
    recombine_splits,
    split_decomposition,
    splits_pairwise_compatible,
)
from dtspan.trees import (
    KINDS,
    is_directed_path,
    random_realization,
    tree_distance,
)

F1 = Fraction(1)


def _path(*lengths):
    names = tuple(f"u{i}" for i in range(len(lengths) + 1))
    arcs = tuple(
        (names[i], names[i + 1], Fraction(l)) for i, l in enumerate(lengths)
    )
    return OrientedTree(names, arcs)


@pytest.mark.parametrize(
    "vertices, arcs, code",
    [
        ((), (), "NotATree"),
        (("a", "a"), (), "NotATree"),
        (("a", "b"), (("a", "a", F1),), "NotATree"),
        (("a", "b"), (), "NotATree"),  # edge count off by one
        (("a", "b", "c", "d"), (("a", "b", F1), ("c", "d", F1), ("a", "b", F1)), "NotATree"),
        (("a", "b"), (("a", "z", F1),), "UnknownVertex"),
        (("a", "b"), (("z", "b", F1),), "UnknownVertex"),
        (("a", "b"), (("a", "b", Fraction(-1)),), "NegativeEntry"),
    ],
)
def test_oriented_tree_validation(vertices, arcs, code):
    with pytest.raises(DomainError) as err:
        OrientedTree(vertices, arcs)
    assert err.value.code == code


def test_realization_validation():
    tree = _path(1, 2)
    ok = Realization(tree, ("a", "b"), (("u0",), ("u2",)))
    assert ok.subtree_of("b") == ("u2",)
    cases = [
        ((("u0",),), ("a", "b"), "LengthMismatch"),
        ((("u0",), ("u2",)), ("a", "a"), "DuplicateLabel"),
        (((), ("u2",)), ("a", "b"), "EmptySubtree"),
        ((("zz",), ("u2",)), ("a", "b"), "UnknownVertex"),
        ((("u0", "u0"), ("u2",)), ("a", "b"), "DuplicateLabel"),
        ((("u0", "u2"), ("u1",)), ("a", "b"), "DisconnectedSubtree"),
    ]
    for subtrees, terminals, code in cases:
        with pytest.raises(DomainError) as err:
            Realization(tree, terminals, subtrees)
        assert err.value.code == code
    zero_edge = OrientedTree(("a", "b"), (("a", "b", Fraction(0)),))
    with pytest.raises(DomainError) as err:
        Realization(zero_edge, ("s",), (("a",),))
    assert err.value.code == "NonpositiveLength"


def test_tree_distance_is_one_way():
    tree = _path(1, 2)
    assert tree_distance(tree, "u0", "u2") == 3
    assert tree_distance(tree, "u2", "u0") == 0
    assert tree_distance(tree, "u1", "u1") == 0
    steps = tree.path_steps("u0", "u2")
    assert steps == [(F1, True), (Fraction(2), True)]
    assert tree.path_steps("u2", "u0") == [(Fraction(2), False), (F1, False)]
    with pytest.raises(DomainError) as err:
        tree_distance(tree, "u0", "zz")
    assert err.value.code == "UnknownVertex"


def test_is_directed_path():
    assert is_directed_path(OrientedTree(("a",), ()))
    assert is_directed_path(_path(1, 1, 2))
    zig = OrientedTree(("a", "b", "c"), (("a", "b", F1), ("c", "b", F1)))
    assert not is_directed_path(zig)
    star = OrientedTree(
        ("m", "a", "b", "c"), (("m", "a", F1), ("m", "b", F1), ("m", "c", F1))
    )
    assert not is_directed_path(star)


def test_evaluate_realization_frozen():
    tree = OrientedTree(("v0", "v1"), (("v0", "v1", F1),))
    r = Realization(tree, ("a", "b"), (("v0",), ("v1",)))
    mu = evaluate_realization(r)
    assert mu.labels == ("a", "b")
    assert mu.entries == ((Fraction(0), F1), (Fraction(0), Fraction(0)))


def test_realize_path_collapses_duplicates():
    # two indistinguishable elements share a vertex in the realization
    dup = distance_from_entries([[0, 1, 1], [0, 0, 0], [0, 0, 0]], ("a", "b", "c"))
    r = realize_path(dup)
    assert is_directed_path(r.tree)
    assert r.subtree_of("b") == r.subtree_of("c")
    assert evaluate_realization(r).entries == dup.entries


REALIZERS = {
    "directed_path": realize_path,
    "path_subtrees": realize_tree,
    "singleton": realize_directed_tree_metric,
}


@pytest.mark.parametrize("kind", KINDS)
def test_round_trip(kind):
    realize = REALIZERS[kind]
    for n in range(1, 6):
        for seed in range(6):
            r = random_realization(kind, n, seed)
            mu = evaluate_realization(r)
            back = realize(mu)
            assert evaluate_realization(back).entries == mu.entries
            assert back.terminals == mu.labels
            # structural promises of each class
            if kind == "directed_path":
                assert is_directed_path(back.tree)
            if kind == "singleton":
                assert all(len(sub) == 1 for sub in back.subtrees)
            # evaluated matrices satisfy the matching characterization
            if kind == "directed_path":
                ok, _ = check_path_condition(mu)
                assert ok
            ok, _ = check_tree_condition(mu)
            assert ok
            if kind == "singleton":
                assert check_directed_tree_metric(mu)


def test_random_realization_deterministic():
    a = random_realization("path_subtrees", 4, 17)
    b = random_realization("path_subtrees", 4, 17)
    assert a == b
    with pytest.raises(DomainError) as err:
        random_realization("hedge", 3, 0)
    assert err.value.code == "UsageError"
    with pytest.raises(DomainError) as err:
        random_realization("singleton", 0, 0)
    assert err.value.code == "UsageError"


def test_singleton_metrics_congruent_to_symmetrization():
    # a directed tree metric differs from a symmetric tree metric only by
    # a vertex potential
    rng = random.Random(29)
    for _ in range(40):
        n = rng.randint(2, 5)
        r = random_realization("singleton", n, rng.randrange(10**6))
        mu = evaluate_realization(r)
        sym_entries = [
            [
                (mu.entries[i][j] + mu.entries[j][i]) / 2
                for j in range(mu.n)
            ]
            for i in range(mu.n)
        ]
        sym = distance_from_entries(sym_entries, mu.labels)
        assert congruence_witness(mu, sym) is not None


def test_split_decomposition_round_trip():
    rng = random.Random(37)
    for _ in range(40):
        n = rng.randint(1, 5)
        r = random_realization("singleton", n, rng.randrange(10**6))
        mu = evaluate_realization(r)
        terms = split_decomposition(r)
        assert splits_pairwise_compatible(terms)
        rec = recombine_splits(terms, mu.labels)
        assert rec.entries == mu.entries
        for t in terms:
            assert t.coeff > 0
            assert set(t.side_a) | set(t.side_b) <= set(mu.labels)


def test_split_decomposition_needs_singletons():
    tree = _path(1, 2)
    r = Realization(tree, ("a", "b"), (("u0", "u1"), ("u2",)))
    with pytest.raises(DomainError) as err:
        split_decomposition(r)
    assert err.value.code == "NonSingletonSubtrees"


def test_split_term_validation():
    with pytest.raises(DomainError) as err:
        SplitTerm((), ("a",), F1)
    assert err.value.code == "EmptySplitSide"
    with pytest.raises(DomainError) as err:
        SplitTerm(("a",), ("a",), F1)
    assert err.value.code == "DuplicateLabel"
    with pytest.raises(DomainError) as err:
        SplitTerm(("a",), ("b",), Fraction(-1))
    assert err.value.code == "NegativeEntry"


def test_incompatible_splits_detected():
    # crossing bipartitions of four labels
    t1 = SplitTerm(("a", "b"), ("c", "d"), F1)
    t2 = SplitTerm(("a", "c"), ("b", "d"), F1)
    assert not splits_pairwise_compatible([t1, t2])
    t3 = SplitTerm(("a",), ("b", "c", "d"), F1)
    assert splits_pairwise_compatible([t1, t3])


def test_realization_gates():
    all_one = distance_from_entries([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(DomainError) as err:
        realize_path(all_one)
    assert err.value.code == "DimensionTooHigh"
    with pytest.raises(DomainError) as err:
        realize_directed_tree_metric(
            distance_from_entries([[0, 1, 3], [9, 0, 1], [9, 9, 0]])
        )
    assert err.value.code == "NotAMetric"
    # rank 3 needs five points; direct sum of one-way pairs plus coupling
    rng = random.Random(47)
    found = False
    for _ in range(400):
        n = 4
        entries = [
            [0 if i == j else Fraction(rng.randint(0, 5)) for j in range(n)]
            for i in range(n)
        ]
        mu = distance_from_entries(entries)
        from dtspan import tropical_rank

        if tropical_rank(mu) > 2:
            with pytest.raises(DomainError) as err:
                realize_tree(mu)
            assert err.value.code == "RankTooHigh"
            found = True
            break
    assert found
