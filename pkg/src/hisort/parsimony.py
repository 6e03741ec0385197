"""Minimal sets of interacting criteria pairs, enumerated by mixed-binary programs.

Each leaf pair gets a binary switch g; the rows m >= -g and m <= g force the
pair's Mobius coefficient to zero whenever its switch is off. Minimizing the
number of active switches with eps held at least delta yields the minimum
number of interacting pairs needed to reproduce the decision maker's
statements. Enumeration pins the cardinality to that minimum and excludes
each found support with a no-good cut until the program turns infeasible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .elicitation import DEFAULT_DELTA, EPS, CompatibleModel, ConstraintSystem, pvar
from .errors import NodeLimit, NotCompatible
from .lp import EQ, GE, LE, DEFAULT_NODE_LIMIT, LinearProgram, Status
from .mobius import pair_key

MAX_SETS = 64

SIGN_TOL = 1e-9


def gvar(a: str, b: str) -> str:
    a, b = pair_key(a, b)
    return f"g[{a}|{b}]"


@dataclass(frozen=True)
class MinimalSet:
    pairs: tuple[tuple[str, str], ...]
    signs: dict[tuple[str, str], str]
    witness: CompatibleModel

    def to_dict(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "signs": {f"{a}|{b}": s for (a, b), s in self.signs.items()},
        }


@dataclass(frozen=True)
class MinimalSetsReport:
    gamma_star: int
    sets: tuple[MinimalSet, ...]
    core: frozenset[tuple[str, str]]
    complete: bool

    def to_dict(self) -> dict:
        return {
            "gamma_star": self.gamma_star,
            "sets": [s.to_dict() for s in self.sets],
            "core": sorted(f"{a}|{b}" for a, b in self.core),
            "complete": self.complete,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def interaction_signs(witness: CompatibleModel, pairs, tol: float = SIGN_TOL) -> dict:
    """Sign of the witness's Mobius coefficient per pair: '+', '-' or '0'."""
    out = {}
    for a, b in pairs:
        v = witness.mobius.pair_value(a, b)
        out[pair_key(a, b)] = "+" if v > tol else ("-" if v < -tol else "0")
    return out


def _switched_program(cs: ConstraintSystem, eps_star: float, delta: float) -> LinearProgram:
    program = cs.build_program()
    switches = {}
    for a, b in cs.pair_keys:
        g = program.add_variable(gvar(a, b), binary=True)
        program.add_constraint({pvar(a, b): 1.0, g: 1.0}, GE, 0.0)
        program.add_constraint({pvar(a, b): 1.0, g: -1.0}, LE, 0.0)
        switches[(a, b)] = g
    program.add_constraint({EPS: 1.0}, GE, delta)
    program.add_constraint({EPS: 1.0}, LE, eps_star)
    program.set_objective({g: 1.0 for g in switches.values()}, maximize=False)
    return program


def _support(cs: ConstraintSystem, assignment: dict) -> tuple[tuple[str, str], ...]:
    return tuple(p for p in cs.pair_keys if round(assignment[gvar(*p)]) == 1)


def _witness_for(cs: ConstraintSystem, pairs) -> CompatibleModel:
    """Best-eps model restricted to the given interacting pairs."""
    outside = set(cs.pair_keys) - {pair_key(*p) for p in pairs}
    check = cs.check_compatibility(zero_pairs=outside)
    if not check.compatible:
        raise NotCompatible("reported pair set does not support a compatible model")
    return cs.extract_model(check.result.assignment)


def find_first_minimal_set(cs: ConstraintSystem, delta: float = DEFAULT_DELTA,
                           node_limit: int = DEFAULT_NODE_LIMIT):
    """Minimum number of interacting pairs, one optimal support, and its witness."""
    base = cs.check_compatibility()
    if not base.compatible:
        raise NotCompatible(f"statements admit no compatible model (eps* = {base.epsilon_star})")
    program = _switched_program(cs, base.epsilon_star, delta)
    result = program.solve_milp(node_limit=node_limit)
    if result.status is not Status.OPTIMAL:
        raise NotCompatible("interaction-minimization program is infeasible at eps >= delta")
    gamma_star = round(result.objective)
    support = _support(cs, result.assignment)
    witness = _witness_for(cs, support)
    return gamma_star, support, witness


def enumerate_minimal_sets(cs: ConstraintSystem, delta: float = DEFAULT_DELTA,
                           max_sets: int = MAX_SETS,
                           node_limit: int = DEFAULT_NODE_LIMIT,
                           include_next_cardinality: bool = False) -> MinimalSetsReport:
    """All pair supports of minimum cardinality, with signs and the shared core."""
    gamma_star, _, _ = find_first_minimal_set(cs, delta, node_limit)
    if gamma_star == 0:
        return MinimalSetsReport(0, (), frozenset(), True)

    base = cs.check_compatibility()
    sets: list[MinimalSet] = []
    complete = True

    def sweep(cardinality: int, forbidden: list[tuple[tuple[str, str], ...]]):
        nonlocal complete
        program = _switched_program(cs, base.epsilon_star, delta)
        program.add_constraint({gvar(*p): 1.0 for p in cs.pair_keys}, EQ, float(cardinality))
        program.set_objective({EPS: 1.0}, maximize=True)
        for prev in forbidden:
            program.add_constraint({gvar(*p): 1.0 for p in prev}, LE, float(len(prev) - 1))
        while True:
            if len(sets) >= max_sets:
                complete = False
                return
            try:
                result = program.solve_milp(node_limit=node_limit)
            except NodeLimit:
                complete = False
                return
            if result.status is not Status.OPTIMAL:
                return
            support = _support(cs, result.assignment)
            witness = _witness_for(cs, support)
            sets.append(MinimalSet(support, interaction_signs(witness, support), witness))
            program.add_constraint({gvar(*p): 1.0 for p in support}, LE,
                                   float(len(support) - 1))

    sweep(gamma_star, [])
    if include_next_cardinality and complete:
        sweep(gamma_star + 1, [s.pairs for s in sets])

    minimum_sets = [s for s in sets if len(s.pairs) == gamma_star]
    core = frozenset.intersection(*(frozenset(s.pairs) for s in minimum_sets))
    return MinimalSetsReport(gamma_star, tuple(sets), core, complete)
