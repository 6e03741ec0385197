"""Capacities, 2-additive Mobius representations, Choquet integrals and importance indices."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations

from .errors import DegenerateNode, DimensionMismatch, TooLarge, UnknownLeaf
from .hierarchy import CriterionHierarchy

#: lower bound on the capacity of the leaves under a non-root node; the hierarchical
#: Choquet value divides by this capacity, so zero must be kept away explicitly.
NODE_CAPACITY_FLOOR = 1e-6

ORACLE_LEAF_BOUND = 12


def pair_key(a: str, b: str) -> tuple[str, str]:
    if a == b:
        raise ValueError(f"pair with repeated leaf {a!r}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Mobius2Additive:
    """Mobius coefficients of a 2-additive capacity: one value per leaf and per leaf pair.

    Missing pair entries are zero. Construction does not check monotonicity or
    normalization; use `is_normalized` / `is_monotone` (inference emits the
    corresponding constraints itself).
    """

    singleton: dict[str, float]
    pair: dict[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self):
        canon = {pair_key(*k): float(v) for k, v in self.pair.items()}
        for a, b in canon:
            if a not in self.singleton or b not in self.singleton:
                raise UnknownLeaf(f"pair ({a!r}, {b!r}) references an unknown leaf")
        object.__setattr__(self, "pair", canon)
        object.__setattr__(self, "singleton", {k: float(v) for k, v in self.singleton.items()})

    @property
    def leaves(self) -> tuple[str, ...]:
        return tuple(self.singleton)

    def pair_value(self, a: str, b: str) -> float:
        return self.pair.get(pair_key(a, b), 0.0)

    def total_mass(self) -> float:
        return sum(self.singleton.values()) + sum(self.pair.values())

    def is_normalized(self, tol: float = 1e-9) -> bool:
        return abs(self.total_mass() - 1.0) <= tol

    def is_monotone(self, tol: float = 1e-9) -> bool:
        """2-additive monotonicity: m({t}) plus any subset of its pair terms stays >= 0.

        The binding subset per leaf is the set of negative pair terms, so only
        that one needs checking.
        """
        for t in self.singleton:
            worst = self.singleton[t] + sum(
                v for k, v in self.pair.items() if t in k and v < 0
            )
            if worst < -tol:
                return False
        return True

    def capacity_of(self, subset) -> float:
        """mu(S) = sum of Mobius terms inside S."""
        return mobius_to_capacity(self, subset)


@dataclass(frozen=True)
class Capacity:
    """Explicit set function on subsets of leaves; test-oracle scale only."""

    leaves: tuple[str, ...]
    values: dict[frozenset, float]

    def __call__(self, subset) -> float:
        key = frozenset(subset)
        unknown = key - set(self.leaves)
        if unknown:
            raise UnknownLeaf(f"unknown leaves {sorted(unknown)}")
        return self.values[key]

    def is_valid(self, tol: float = 1e-9) -> bool:
        if abs(self(()) ) > tol or abs(self(self.leaves) - 1.0) > tol:
            return False
        for subset in self.values:
            for t in self.leaves:
                if t not in subset and self.values[subset] > self.values[subset | {t}] + tol:
                    return False
        return True


def _subsets(items):
    items = tuple(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def mobius_to_capacity(m: Mobius2Additive, subset) -> float:
    """mu(S) for a 2-additive Mobius map: singletons in S plus pairs within S."""
    subset = set(subset)
    unknown = subset - set(m.singleton)
    if unknown:
        raise UnknownLeaf(f"unknown leaves {sorted(unknown)}")
    total = sum(m.singleton[t] for t in subset)
    total += sum(v for (a, b), v in m.pair.items() if a in subset and b in subset)
    return total


def capacity_to_mobius(mu: Capacity, leaf_bound: int = ORACLE_LEAF_BOUND) -> dict[frozenset, float]:
    """General Mobius inverse m(R) = sum_{T subseteq R} (-1)^{|R|-|T|} mu(T)."""
    if len(mu.leaves) > leaf_bound:
        raise TooLarge(f"{len(mu.leaves)} leaves exceeds the oracle bound {leaf_bound}")
    out: dict[frozenset, float] = {}
    for subset in _subsets(mu.leaves):
        r = len(subset)
        acc = 0.0
        for t_sub in _subsets(subset):
            acc += (-1) ** (r - len(t_sub)) * mu(t_sub)
        out[frozenset(subset)] = acc
    return out


def capacity_from_mobius(m: Mobius2Additive, leaf_bound: int = ORACLE_LEAF_BOUND) -> Capacity:
    if len(m.singleton) > leaf_bound:
        raise TooLarge(f"{len(m.singleton)} leaves exceeds the oracle bound {leaf_bound}")
    leaves = tuple(m.singleton)
    values = {frozenset(s): mobius_to_capacity(m, s) for s in _subsets(leaves)}
    return Capacity(leaves, values)


def choquet_general(mu: Capacity, x: dict[str, float]) -> float:
    """Rank-based Choquet integral: sort ascending and accumulate capacity of upper sets."""
    if set(x) != set(mu.leaves):
        raise DimensionMismatch("evaluation vector does not cover the capacity's leaves")
    order = sorted(mu.leaves, key=lambda t: x[t])
    total = 0.0
    prev = 0.0
    for i, t in enumerate(order):
        upper = frozenset(order[i:])
        total += mu(upper) * (x[t] - prev)
        prev = x[t]
    return total


def choquet_2additive(m: Mobius2Additive, x: dict[str, float]) -> float:
    """Ch(x) = sum m({t}) x_t + sum m({t_i, t_j}) min(x_i, x_j)."""
    if set(x) != set(m.singleton):
        raise DimensionMismatch("evaluation vector does not cover the model's leaves")
    total = sum(m.singleton[t] * x[t] for t in m.singleton)
    total += sum(v * min(x[a], x[b]) for (a, b), v in m.pair.items())
    return total


def restricted_vector(x: dict[str, float], leaves, subset) -> dict[str, float]:
    """The fictitious alternative: x inside the subset, zero elsewhere."""
    subset = set(subset)
    return {t: (x[t] if t in subset else 0.0) for t in leaves}


def node_capacity(m: Mobius2Additive, hierarchy: CriterionHierarchy, node_id: str) -> float:
    return mobius_to_capacity(m, hierarchy.leaves_under(node_id))


def choquet_node(m: Mobius2Additive, x: dict[str, float], hierarchy: CriterionHierarchy,
                 node_id: str, floor: float = NODE_CAPACITY_FLOOR) -> float:
    """Choquet value of an alternative restricted to the leaves under a node.

    Equals Ch(x zero-padded outside the node) / mu(leaves under the node).
    """
    mu_r = node_capacity(m, hierarchy, node_id)
    if mu_r < floor:
        raise DegenerateNode(node_id, mu_r)
    padded = restricted_vector(x, m.leaves, hierarchy.leaves_under(node_id))
    return choquet_2additive(m, padded) / mu_r


def shapley_numerator(m: Mobius2Additive, hierarchy: CriterionHierarchy,
                      node_id: str, child_id: str) -> float:
    """Numerator of the hierarchical Shapley importance of a direct child of a node.

    Own singleton and pair mass plus half the pair mass crossing to sibling leaves.
    """
    node = hierarchy.node(node_id)
    if child_id not in {c.id for c in node.children}:
        raise UnknownLeaf(f"{child_id!r} is not a direct child of {node_id!r}")
    inside = set(hierarchy.leaves_under(child_id))
    siblings = set(hierarchy.leaves_under(node_id)) - inside
    total = sum(m.singleton[t] for t in inside)
    for (a, b), v in m.pair.items():
        if a in inside and b in inside:
            total += v
        elif (a in inside and b in siblings) or (b in inside and a in siblings):
            total += v / 2.0
    return total


def shapley_node(m: Mobius2Additive, hierarchy: CriterionHierarchy, node_id: str,
                 child_id: str, floor: float = NODE_CAPACITY_FLOOR) -> float:
    """Importance of a direct child of a node; sums to 1 over the node's children."""
    mu_r = node_capacity(m, hierarchy, node_id)
    if mu_r < floor:
        raise DegenerateNode(node_id, mu_r)
    return shapley_numerator(m, hierarchy, node_id, child_id) / mu_r


def interaction_numerator(m: Mobius2Additive, hierarchy: CriterionHierarchy,
                          node_id: str, child1: str, child2: str) -> float:
    """Numerator of the signed interaction of two distinct children: the cross pair mass."""
    node = hierarchy.node(node_id)
    child_ids = {c.id for c in node.children}
    if child1 not in child_ids or child2 not in child_ids:
        raise UnknownLeaf(f"{child1!r}/{child2!r} are not both children of {node_id!r}")
    if child1 == child2:
        raise ValueError("interaction needs two distinct children")
    left = set(hierarchy.leaves_under(child1))
    right = set(hierarchy.leaves_under(child2))
    return sum(
        v for (a, b), v in m.pair.items()
        if (a in left and b in right) or (a in right and b in left)
    )


def interaction_node(m: Mobius2Additive, hierarchy: CriterionHierarchy, node_id: str,
                     child1: str, child2: str, floor: float = NODE_CAPACITY_FLOOR) -> float:
    """Signed interaction strength between two macro-criteria under the same node."""
    mu_r = node_capacity(m, hierarchy, node_id)
    if mu_r < floor:
        raise DegenerateNode(node_id, mu_r)
    return interaction_numerator(m, hierarchy, node_id, child1, child2) / mu_r
