"""Oracle suite for the Mobius / capacity / Choquet layer.

Randomized cross-checks between the 2-additive shortcuts and the exhaustive
set-function definitions, on instance sizes where the exponential forms are
still cheap.
"""

import itertools

import numpy as np
import pytest

from hisort.errors import DimensionMismatch, TooLarge, UnknownLeaf
from hisort.hierarchy import flat_hierarchy
from hisort.mobius import (Capacity, Mobius2Additive, capacity_from_mobius,
                           capacity_to_mobius, choquet_2additive, choquet_general,
                           choquet_node, interaction_node, interaction_numerator,
                           mobius_to_capacity, node_capacity, pair_key,
                           restricted_vector, shapley_node, shapley_numerator)

N_TRIALS = 1000


def random_mobius(rng, n_leaves, leaves=None):
    """A valid (monotone, normalized) random 2-additive Mobius map.

    Pair masses are capped at min(single)/(n-1) per endpoint, which keeps every
    monotonicity condition slack before the final rescale.
    """
    leaves = tuple(leaves) if leaves is not None else tuple(f"g{i}" for i in range(n_leaves))
    singles = dict(zip(leaves, rng.uniform(0.05, 1.0, n_leaves)))
    pairs = {}
    for a, b in itertools.combinations(leaves, 2):
        cap = min(singles[a], singles[b]) / max(n_leaves - 1, 1)
        pairs[(a, b)] = rng.uniform(-cap, cap)
    total = sum(singles.values()) + sum(pairs.values())
    return Mobius2Additive({k: v / total for k, v in singles.items()},
                           {k: v / total for k, v in pairs.items()})


def test_pair_key_is_order_free():
    assert pair_key("b", "a") == ("a", "b") == pair_key("a", "b")
    with pytest.raises(ValueError):
        pair_key("a", "a")


def test_random_mobius_generator_is_valid():
    rng = np.random.default_rng(11)
    for _ in range(200):
        m = random_mobius(rng, int(rng.integers(2, 7)))
        assert m.is_normalized(tol=1e-9)
        assert m.is_monotone(tol=1e-12)


def test_capacity_roundtrip():
    """mobius -> capacity -> exhaustive Mobius inverse recovers the map, size > 2 terms vanish."""
    rng = np.random.default_rng(12)
    for _ in range(N_TRIALS):
        m = random_mobius(rng, int(rng.integers(2, 6)))
        mu = capacity_from_mobius(m)
        assert mu.is_valid(tol=1e-9)
        back = capacity_to_mobius(mu)
        for subset, value in back.items():
            if len(subset) == 1:
                (t,) = subset
                assert value == pytest.approx(m.singleton[t], abs=1e-10)
            elif len(subset) == 2:
                assert value == pytest.approx(m.pair_value(*sorted(subset)), abs=1e-10)
            else:
                assert abs(value) < 1e-9


def test_choquet_min_form_matches_rank_definition():
    rng = np.random.default_rng(13)
    for _ in range(N_TRIALS):
        m = random_mobius(rng, int(rng.integers(2, 6)))
        mu = capacity_from_mobius(m)
        x = dict(zip(m.leaves, rng.uniform(0.0, 1.0, len(m.leaves))))
        assert choquet_2additive(m, x) == pytest.approx(choquet_general(mu, x), abs=1e-10)


def test_choquet_handles_ties_in_evaluations():
    rng = np.random.default_rng(14)
    for _ in range(200):
        m = random_mobius(rng, 4)
        levels = rng.uniform(0.0, 1.0, 2)
        x = {t: float(levels[i % 2]) for i, t in enumerate(m.leaves)}
        mu = capacity_from_mobius(m)
        assert choquet_2additive(m, x) == pytest.approx(choquet_general(mu, x), abs=1e-10)


def test_choquet_bounds_and_idempotence():
    rng = np.random.default_rng(15)
    for _ in range(300):
        m = random_mobius(rng, int(rng.integers(2, 6)))
        x = dict(zip(m.leaves, rng.uniform(0.0, 1.0, len(m.leaves))))
        value = choquet_2additive(m, x)
        assert min(x.values()) - 1e-10 <= value <= max(x.values()) + 1e-10
        c = float(rng.uniform(0, 1))
        flat = {t: c for t in m.leaves}
        assert choquet_2additive(m, flat) == pytest.approx(c, abs=1e-10)


def test_choquet_monotone_in_each_coordinate():
    rng = np.random.default_rng(16)
    for _ in range(300):
        m = random_mobius(rng, 4)
        x = dict(zip(m.leaves, rng.uniform(0.0, 1.0, 4)))
        t = m.leaves[int(rng.integers(4))]
        y = dict(x)
        y[t] = min(1.0, x[t] + float(rng.uniform(0, 0.5)))
        assert choquet_2additive(m, y) >= choquet_2additive(m, x) - 1e-10


def test_shapley_partition_of_unity():
    """Importance indices over a node's children sum to one, at every node."""
    rng = np.random.default_rng(17)
    hier = flat_hierarchy(("a", "b", "c", "d"))
    for _ in range(N_TRIALS):
        m = random_mobius(rng, 4, leaves=("a", "b", "c", "d"))
        total = sum(shapley_node(m, hier, hier.root.id, t) for t in ("a", "b", "c", "d"))
        assert total == pytest.approx(1.0, abs=1e-9)


def test_shapley_partition_of_unity_hierarchical(eu_hierarchy):
    """Same property on the two-level tree, for the root's macro children."""
    rng = np.random.default_rng(18)
    leaves = eu_hierarchy.leaves
    for _ in range(200):
        m = random_mobius(rng, len(leaves), leaves=leaves)
        for node in eu_hierarchy.non_elementary:
            children = [c.id for c in eu_hierarchy.node(node).children]
            total = sum(shapley_node(m, eu_hierarchy, node, c) for c in children)
            assert total == pytest.approx(1.0, abs=1e-9)


def test_node_restriction_matches_padded_global_choquet(eu_hierarchy):
    rng = np.random.default_rng(19)
    leaves = eu_hierarchy.leaves
    for _ in range(200):
        m = random_mobius(rng, len(leaves), leaves=leaves)
        x = dict(zip(leaves, rng.uniform(0, 1, len(leaves))))
        for node in ("Ec", "Gov", "Fin"):
            padded = restricted_vector(x, leaves, eu_hierarchy.leaves_under(node))
            expect = choquet_2additive(m, padded) / node_capacity(m, eu_hierarchy, node)
            assert choquet_node(m, x, eu_hierarchy, node) == pytest.approx(expect, abs=1e-12)


def test_interaction_numerator_is_cross_mass(eu_hierarchy):
    m = Mobius2Additive(
        {t: 1 / 11 for t in eu_hierarchy.leaves},
        {("GDPc", "D/GDP"): 0.02, ("GDPc", "I/GDP"): 0.01, ("CAR/GDP", "CAB/GDP"): -0.01})
    # GDPc sits under Ec, D/GDP under Gov: only that pair crosses Ec x Gov.
    assert interaction_numerator(m, eu_hierarchy, "Global", "Ec", "Gov") == pytest.approx(0.02)
    assert interaction_numerator(m, eu_hierarchy, "Global", "Ec", "Fin") == pytest.approx(0.0)
    # within-Fin pair is the Fin x Fin "cross" mass seen from the node above? No:
    # both children are leaves of Fin itself, so at node Fin the pair is cross mass.
    assert interaction_numerator(m, eu_hierarchy, "Fin", "CAR/GDP", "CAB/GDP") == pytest.approx(-0.01)


def test_shapley_numerator_splits_cross_pairs(eu_hierarchy):
    m = Mobius2Additive(
        {t: 1 / 11 for t in eu_hierarchy.leaves},
        {("GDPc", "D/GDP"): 0.02})
    ec_leaves = eu_hierarchy.leaves_under("Ec")
    expect = len(ec_leaves) / 11 + 0.01  # own singles + half the crossing pair
    assert shapley_numerator(m, eu_hierarchy, "Global", "Ec") == pytest.approx(expect)


def test_errors_on_bad_inputs(eu_hierarchy):
    m = Mobius2Additive({"a": 0.5, "b": 0.5})
    with pytest.raises(UnknownLeaf):
        mobius_to_capacity(m, {"a", "zzz"})
    with pytest.raises(DimensionMismatch):
        choquet_2additive(m, {"a": 1.0})
    with pytest.raises(UnknownLeaf):
        Mobius2Additive({"a": 1.0}, {("a", "b"): 0.1})
    big = Mobius2Additive({f"g{i}": 1 / 13 for i in range(13)})
    with pytest.raises(TooLarge):
        capacity_from_mobius(big)
    with pytest.raises(UnknownLeaf):
        shapley_numerator(m, eu_hierarchy, "Global", "nope")


def test_capacity_validity_detection():
    leaves = ("a", "b")
    bad = Capacity(leaves, {frozenset(): 0.0, frozenset("a"): 0.8,
                            frozenset("b"): 0.5, frozenset(leaves): 0.7})
    assert not bad.is_valid()  # mu({a}) > mu({a,b}) breaks monotonicity
    good = Capacity(leaves, {frozenset(): 0.0, frozenset("a"): 0.4,
                             frozenset("b"): 0.5, frozenset(leaves): 1.0})
    assert good.is_valid()
