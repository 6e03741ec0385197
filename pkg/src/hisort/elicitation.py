"""Translation of preference statements into linear constraints over (Mobius, thresholds, eps).

Threshold variables are kept in *scaled* form: for node r and class h the
variable is b~_h = b_h * mu(leaves under r). The hierarchical rule
Ch_r(a) >= b_h divides by mu(leaves under r), so scaling both sides makes
every row linear in the Mobius coefficients. Unscaled thresholds are
recovered by dividing the witness values back.

Monotonicity of the 2-additive capacity is imposed through the exact
compact form: per leaf t an auxiliary variable n_tj <= min(0, m({t,j}))
for every other leaf j and the row m({t}) + sum_j n_tj >= 0. Feasible
points project exactly onto the exponential family "for every subset of
the other leaves"; `monotonicity_rows_exact` generates that family for
oracle-scale checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (EmptyInterior, InvalidClassIndex, NotCompatible,
                     UnknownEntity, UnsupportedStatement)
from .hierarchy import CriterionHierarchy
from .lp import EQ, GE, LE, LinearProgram, SolveResult, Status
from .mobius import (NODE_CAPACITY_FLOOR, Mobius2Additive, mobius_to_capacity,
                     pair_key)
from .statements import (AssignAtLeast, AssignAtMost, AssignExact,
                         AssignInterval, EquallyImportant, Indifference,
                         MoreImportant, NegativeInteraction, PairwisePreference,
                         PositiveInteraction, PreferenceStatement)
from .tables import NormalizedTable

#: floor used for eps when sampling models and inside parsimony MILPs.
DEFAULT_DELTA = 1e-4

EPS = "eps"


def mvar(leaf: str) -> str:
    return f"m[{leaf}]"


def pvar(a: str, b: str) -> str:
    a, b = pair_key(a, b)
    return f"mp[{a}|{b}]"


def bvar(node: str, h: int) -> str:
    return f"b[{node}|{h}]"


def _nvar(leaf: str, other: str) -> str:
    return f"n[{leaf}|{other}]"


@dataclass(frozen=True)
class SortingSpec:
    """Class counts per non-elementary node."""

    classes: dict[str, int]

    def __post_init__(self):
        for node, p in self.classes.items():
            if p < 2:
                raise InvalidClassIndex(f"node {node!r} needs at least 2 classes, got {p}")

    def class_count(self, node: str) -> int:
        try:
            return self.classes[node]
        except KeyError:
            raise UnknownEntity(f"no sorting defined at node {node!r}") from None

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(self.classes)

    @classmethod
    def uniform(cls, hierarchy: CriterionHierarchy, p: int) -> "SortingSpec":
        return cls({n: p for n in hierarchy.non_elementary})


Row = tuple[dict[str, float], str, float]


def _add(acc: dict[str, float], coeffs: dict[str, float], scale: float = 1.0) -> dict[str, float]:
    for name, value in coeffs.items():
        acc[name] = acc.get(name, 0.0) + scale * value
    return acc


@dataclass(frozen=True)
class CompatibleModel:
    """A concrete (Mobius, scaled thresholds) instance satisfying a constraint system."""

    mobius: Mobius2Additive
    thresholds: dict[str, np.ndarray]  # node -> scaled b~_0 .. b~_p

    def unscaled_thresholds(self, hierarchy: CriterionHierarchy) -> dict[str, np.ndarray]:
        out = {}
        for node, scaled in self.thresholds.items():
            mu_r = mobius_to_capacity(self.mobius, hierarchy.leaves_under(node))
            out[node] = scaled / mu_r
        return out

    def assign(self, x: dict[str, float], hierarchy: CriterionHierarchy, node: str,
               tol: float = 1e-6) -> int:
        """Class of an alternative at a node: threshold rule on the scaled axis, top class closed.

        A value within `tol` of a threshold counts as being above it; witnesses
        from the solver sit exactly on their binding lower threshold, up to the
        solver's feasibility tolerance.
        """
        from .mobius import choquet_2additive, restricted_vector

        padded = restricted_vector(x, self.mobius.leaves, hierarchy.leaves_under(node))
        value = choquet_2additive(self.mobius, padded)
        scaled = self.thresholds[node]
        p = len(scaled) - 1
        for h in range(1, p):
            if value < scaled[h] - tol:
                return h
        return p


@dataclass(frozen=True)
class CompatibilityResult:
    epsilon_star: float | None
    compatible: bool
    result: SolveResult


class ConstraintSystem:
    """The assembled constraint rows for one (statements, sorting spec, table) triple.

    `core_rows` hold every row over the Mobius / threshold / eps variables;
    monotonicity is attached separately when a program is built so that the
    sampler can use its compact nonlinear form instead.
    """

    def __init__(self, hierarchy: CriterionHierarchy, spec: SortingSpec,
                 table: NormalizedTable, statements: list[PreferenceStatement],
                 delta_node: float = NODE_CAPACITY_FLOOR):
        self.hierarchy = hierarchy
        self.spec = spec
        self.table = table
        self.statements = list(statements)
        self.delta_node = delta_node
        if set(table.columns) != set(hierarchy.leaves):
            raise UnknownEntity("normalized table columns do not match the hierarchy leaves")
        for node in spec.nodes:
            if hierarchy.node(node).is_leaf:
                raise UnknownEntity(f"cannot sort at elementary criterion {node!r}")
        self._rows: list[Row] = []
        self._build_technical_rows()
        for statement in self.statements:
            self._translate(statement)

    # -- linear expressions --------------------------------------------------

    def choquet_coeffs(self, alternative: str, node: str) -> dict[str, float]:
        """Coefficients of Ch(a zero-padded outside the node) as a function of m."""
        if alternative not in self.table.alternatives:
            raise UnknownEntity(f"unknown alternative {alternative!r}")
        x = self.table.row(alternative)
        return self._choquet_from_values(x, node)

    def _choquet_from_values(self, x: dict[str, float], node: str) -> dict[str, float]:
        leaves = self.hierarchy.leaves_under(node)
        coeffs = {mvar(t): x[t] for t in leaves}
        for i, a in enumerate(leaves):
            for b in leaves[i + 1:]:
                coeffs[pvar(a, b)] = min(x[a], x[b])
        return coeffs

    def optimum_choquet_coeffs(self, node: str) -> dict[str, float]:
        """Ch of the per-column best profile under the node: the scaled top threshold."""
        best = {t: float(self.table.column(t).max()) for t in self.hierarchy.leaves}
        return self._choquet_from_values(best, node)

    def node_capacity_coeffs(self, node: str) -> dict[str, float]:
        leaves = self.hierarchy.leaves_under(node)
        coeffs = {mvar(t): 1.0 for t in leaves}
        for i, a in enumerate(leaves):
            for b in leaves[i + 1:]:
                coeffs[pvar(a, b)] = 1.0
        return coeffs

    def threshold_coeffs(self, node: str, h: int) -> dict[str, float]:
        """Scaled threshold b~_h as a linear expression (b~_0 = 0, b~_p = Ch of the optimum)."""
        p = self.spec.class_count(node)
        if not 0 <= h <= p:
            raise InvalidClassIndex(f"threshold index {h} out of range for node {node!r}")
        if h == 0:
            return {}
        if h == p:
            return self.optimum_choquet_coeffs(node)
        return {bvar(node, h): 1.0}

    def shapley_numerator_coeffs(self, node: str, child: str) -> dict[str, float]:
        children = {c.id for c in self.hierarchy.node(node).children}
        if child not in children:
            raise UnknownEntity(f"{child!r} is not a direct child of {node!r}")
        inside = set(self.hierarchy.leaves_under(child))
        siblings = set(self.hierarchy.leaves_under(node)) - inside
        coeffs = {mvar(t): 1.0 for t in inside}
        inside_list = sorted(inside)
        for i, a in enumerate(inside_list):
            for b in inside_list[i + 1:]:
                coeffs[pvar(a, b)] = 1.0
        for a in inside:
            for b in siblings:
                coeffs[pvar(a, b)] = coeffs.get(pvar(a, b), 0.0) + 0.5
        return coeffs

    def interaction_numerator_coeffs(self, node: str, child1: str, child2: str) -> dict[str, float]:
        children = {c.id for c in self.hierarchy.node(node).children}
        if child1 not in children or child2 not in children or child1 == child2:
            raise UnknownEntity(f"{child1!r}, {child2!r} must be distinct children of {node!r}")
        left = self.hierarchy.leaves_under(child1)
        right = self.hierarchy.leaves_under(child2)
        coeffs: dict[str, float] = {}
        for a in left:
            for b in right:
                coeffs[pvar(a, b)] = 1.0
        return coeffs

    # -- row assembly --------------------------------------------------------

    def _row(self, coeffs: dict[str, float], relation: str, rhs: float) -> None:
        self._rows.append(({k: v for k, v in coeffs.items() if v != 0.0}, relation, rhs))

    def _build_technical_rows(self):
        leaves = self.hierarchy.leaves
        norm = {mvar(t): 1.0 for t in leaves}
        for i, a in enumerate(leaves):
            for b in leaves[i + 1:]:
                norm[pvar(a, b)] = 1.0
        self._row(norm, EQ, 1.0)
        # capacity floor under every non-root internal node (leaf floors are variable bounds)
        for node in self.hierarchy.non_elementary:
            if node == self.hierarchy.root.id:
                continue
            self._row(self.node_capacity_coeffs(node), GE, self.delta_node)
        # threshold ordering with shared strictness eps, on the scaled axis
        for node in self.spec.nodes:
            p = self.spec.class_count(node)
            for h in range(1, p + 1):
                row = _add(dict(self.threshold_coeffs(node, h)), self.threshold_coeffs(node, h - 1), -1.0)
                row = _add(row, {EPS: -1.0})
                self._row(row, GE, 0.0)

    def _assignment_rows(self, alternative: str, node: str, lo: int, hi: int):
        """Ch(a_r) >= b~_{lo-1} and Ch(a_r) < b~_{hi} (weak at the top class)."""
        p = self.spec.class_count(node)
        if not (1 <= lo <= hi <= p):
            raise InvalidClassIndex(f"classes [{lo}, {hi}] out of range 1..{p} at {node!r}")
        ch = self.choquet_coeffs(alternative, node)
        if lo > 1:
            row = _add(dict(ch), self.threshold_coeffs(node, lo - 1), -1.0)
            self._row(row, GE, 0.0)
        if hi < p:
            row = _add(dict(ch), self.threshold_coeffs(node, hi), -1.0)
            row = _add(row, {EPS: 1.0})
            self._row(row, LE, 0.0)
        else:
            row = _add(dict(ch), self.threshold_coeffs(node, p), -1.0)
            self._row(row, LE, 0.0)

    def _translate(self, statement: PreferenceStatement):
        s = statement
        if isinstance(s, AssignExact):
            self._assignment_rows(s.alternative, s.node, s.cls, s.cls)
        elif isinstance(s, AssignInterval):
            self._assignment_rows(s.alternative, s.node, s.lo, s.hi)
        elif isinstance(s, AssignAtLeast):
            p = self.spec.class_count(s.node)
            if not 1 <= s.cls <= p:
                raise InvalidClassIndex(f"class {s.cls} out of range at {s.node!r}")
            if s.cls > 1:
                row = _add(dict(self.choquet_coeffs(s.alternative, s.node)),
                           self.threshold_coeffs(s.node, s.cls - 1), -1.0)
                self._row(row, GE, 0.0)
        elif isinstance(s, AssignAtMost):
            p = self.spec.class_count(s.node)
            if not 1 <= s.cls <= p:
                raise InvalidClassIndex(f"class {s.cls} out of range at {s.node!r}")
            row = _add(dict(self.choquet_coeffs(s.alternative, s.node)),
                       self.threshold_coeffs(s.node, s.cls), -1.0)
            if s.cls < p:
                row = _add(row, {EPS: 1.0})
            self._row(row, LE, 0.0)
        elif isinstance(s, PairwisePreference):
            row = _add(dict(self.choquet_coeffs(s.better, s.node)),
                       self.choquet_coeffs(s.worse, s.node), -1.0)
            row = _add(row, {EPS: -1.0})
            self._row(row, GE, 0.0)
        elif isinstance(s, Indifference):
            row = _add(dict(self.choquet_coeffs(s.a, s.node)),
                       self.choquet_coeffs(s.b, s.node), -1.0)
            self._row(row, EQ, 0.0)
        elif isinstance(s, MoreImportant):
            row = _add(dict(self.shapley_numerator_coeffs(s.node, s.more)),
                       self.shapley_numerator_coeffs(s.node, s.less), -1.0)
            row = _add(row, {EPS: -1.0})
            self._row(row, GE, 0.0)
        elif isinstance(s, EquallyImportant):
            row = _add(dict(self.shapley_numerator_coeffs(s.node, s.a)),
                       self.shapley_numerator_coeffs(s.node, s.b), -1.0)
            self._row(row, EQ, 0.0)
        elif isinstance(s, PositiveInteraction):
            row = _add(dict(self.interaction_numerator_coeffs(s.node, s.a, s.b)), {EPS: -1.0})
            self._row(row, GE, 0.0)
        elif isinstance(s, NegativeInteraction):
            row = _add(dict(self.interaction_numerator_coeffs(s.node, s.a, s.b)), {EPS: 1.0})
            self._row(row, LE, 0.0)
        else:
            raise UnsupportedStatement(f"cannot translate {type(s).__name__}")

    # -- views ---------------------------------------------------------------

    @property
    def core_rows(self) -> tuple[Row, ...]:
        return tuple(self._rows)

    @property
    def pair_keys(self) -> tuple[tuple[str, str], ...]:
        """Every leaf pair in canonical (lexicographic) orientation."""
        leaves = self.hierarchy.leaves
        return tuple(pair_key(a, b) for i, a in enumerate(leaves) for b in leaves[i + 1:])

    def threshold_vars(self) -> tuple[tuple[str, int], ...]:
        return tuple(
            (node, h)
            for node in self.spec.nodes
            for h in range(1, self.spec.class_count(node))
        )

    def variable_bounds(self) -> dict[str, tuple[float | None, float | None]]:
        bounds: dict[str, tuple[float | None, float | None]] = {}
        for t in self.hierarchy.leaves:
            bounds[mvar(t)] = (self.delta_node, 1.0)
        for a, b in self.pair_keys:
            bounds[pvar(a, b)] = (-1.0, 1.0)
        for node, h in self.threshold_vars():
            bounds[bvar(node, h)] = (0.0, 1.0)
        bounds[EPS] = (None, None)
        return bounds

    # -- programs ------------------------------------------------------------

    def build_program(self, extra_rows: tuple[Row, ...] = (),
                      zero_pairs: set[tuple[str, str]] | None = None) -> LinearProgram:
        """Materialize the rows as a solvable program (monotonicity in compact form).

        `zero_pairs` pins the listed pair coefficients to zero, restricting the
        model to the remaining interactions.
        """
        program = LinearProgram()
        zero_pairs = {pair_key(*p) for p in (zero_pairs or set())}
        for name, (lb, ub) in self.variable_bounds().items():
            program.add_variable(name, lb=lb, ub=ub)
        for a, b in zero_pairs:
            program.add_constraint({pvar(a, b): 1.0}, EQ, 0.0, label=f"zero_{a}_{b}")
        leaves = self.hierarchy.leaves
        for t in leaves:
            acc = {mvar(t): 1.0}
            for j in leaves:
                if j == t:
                    continue
                n = _nvar(t, j)
                program.add_variable(n, lb=-1.0, ub=0.0)
                program.add_constraint({n: 1.0, pvar(t, j): -1.0}, LE, 0.0)
                acc[n] = 1.0
            program.add_constraint(acc, GE, 0.0, label=f"mono_{t}")
        for coeffs, relation, rhs in tuple(self._rows) + tuple(extra_rows):
            program.add_constraint(coeffs, relation, rhs)
        program.set_objective({EPS: 1.0}, maximize=True)
        return program

    def check_compatibility(self, extra_rows: tuple[Row, ...] = (),
                            zero_pairs: set[tuple[str, str]] | None = None) -> CompatibilityResult:
        """Maximize eps; compatible iff feasible with a strictly positive optimum."""
        result = self.build_program(extra_rows, zero_pairs).solve_lp()
        if result.status is not Status.OPTIMAL:
            return CompatibilityResult(None, False, result)
        return CompatibilityResult(result.objective, result.objective > 0.0, result)

    def extract_model(self, assignment: dict[str, float]) -> CompatibleModel:
        singleton = {t: assignment[mvar(t)] for t in self.hierarchy.leaves}
        pair = {(a, b): assignment[pvar(a, b)] for a, b in self.pair_keys}
        m = Mobius2Additive(singleton, pair)
        thresholds = {}
        for node in self.spec.nodes:
            p = self.spec.class_count(node)
            values = [0.0]
            for h in range(1, p):
                values.append(assignment[bvar(node, h)])
            top = sum(v * assignment[k] for k, v in self.optimum_choquet_coeffs(node).items())
            values.append(top)
            thresholds[node] = np.array(values)
        return CompatibleModel(m, thresholds)

    def witness_model(self) -> CompatibleModel:
        check = self.check_compatibility()
        if not check.compatible:
            raise NotCompatible(f"no compatible model (eps* = {check.epsilon_star})")
        return self.extract_model(check.result.assignment)


def translate(statements: list[PreferenceStatement], spec: SortingSpec,
              table: NormalizedTable, hierarchy: CriterionHierarchy,
              delta_node: float = NODE_CAPACITY_FLOOR) -> ConstraintSystem:
    return ConstraintSystem(hierarchy, spec, table, statements, delta_node)


def check_compatibility(cs: ConstraintSystem) -> CompatibilityResult:
    return cs.check_compatibility()


def witness_model(cs: ConstraintSystem) -> CompatibleModel:
    return cs.witness_model()


def monotonicity_rows_exact(hierarchy: CriterionHierarchy, leaf_cap: int = 16) -> list[Row]:
    """The exponential monotonicity family; oracle use for small leaf counts."""
    from itertools import chain, combinations

    leaves = hierarchy.leaves
    if len(leaves) > leaf_cap:
        raise ValueError(f"{len(leaves)} leaves exceeds the exact-family cap {leaf_cap}")
    rows: list[Row] = []
    for t in leaves:
        others = [j for j in leaves if j != t]
        for subset in chain.from_iterable(combinations(others, r) for r in range(len(others) + 1)):
            coeffs = {mvar(t): 1.0}
            for j in subset:
                coeffs[pvar(t, j)] = 1.0
            rows.append((coeffs, GE, 0.0))
    return rows


# -- weighted-sum baseline ---------------------------------------------------


def wvar(leaf: str) -> str:
    return f"w[{leaf}]"


def wbvar(h: int) -> str:
    return f"wb[{h}]"


class WeightedSumSystem:
    """Root-level weighted-sum baseline: weight simplex, thresholds fixed to [0, 1]."""

    def __init__(self, spec: SortingSpec, table: NormalizedTable,
                 hierarchy: CriterionHierarchy, statements: list[PreferenceStatement]):
        self.hierarchy = hierarchy
        self.table = table
        root = hierarchy.root.id
        self.p = spec.class_count(root)
        self._rows: list[Row] = []
        for h in range(1, self.p + 1):
            row = _add(dict(self._threshold(h)), self._threshold(h - 1), -1.0)
            row = _add(row, {EPS: -1.0})
            self._rows.append((row, GE, 0.0))
        for s in statements:
            if isinstance(s, AssignExact) and s.node == root:
                lo = hi = s.cls
            elif isinstance(s, AssignInterval) and s.node == root:
                lo, hi = s.lo, s.hi
            else:
                raise UnsupportedStatement(
                    "the weighted-sum baseline accepts root-level assignment examples only"
                )
            if not 1 <= lo <= hi <= self.p:
                raise InvalidClassIndex(f"classes [{lo}, {hi}] out of range 1..{self.p}")
            ws = self._ws_coeffs(s.alternative)
            if lo > 1:
                self._rows.append((_add(dict(ws), self._threshold(lo - 1), -1.0), GE, 0.0))
            row = _add(dict(ws), self._threshold(hi), -1.0)
            if hi < self.p:
                row = _add(row, {EPS: 1.0})
            self._rows.append((row, LE, 0.0))

    def _ws_coeffs(self, alternative: str) -> dict[str, float]:
        if alternative not in self.table.alternatives:
            raise UnknownEntity(f"unknown alternative {alternative!r}")
        x = self.table.row(alternative)
        return {wvar(t): x[t] for t in self.hierarchy.leaves}

    def _threshold(self, h: int) -> dict[str, float]:
        if h == 0:
            return {}
        if h == self.p:
            return {"wb_top": 1.0}  # constant 1, kept as a pinned variable
        return {wbvar(h): 1.0}

    @property
    def core_rows(self) -> tuple[Row, ...]:
        return tuple(self._rows)

    def variable_bounds(self) -> dict[str, tuple[float | None, float | None]]:
        bounds = {wvar(t): (0.0, 1.0) for t in self.hierarchy.leaves}
        for h in range(1, self.p):
            bounds[wbvar(h)] = (0.0, 1.0)
        bounds["wb_top"] = (1.0, 1.0)
        bounds[EPS] = (None, None)
        return bounds

    def build_program(self) -> LinearProgram:
        program = LinearProgram()
        for name, (lb, ub) in self.variable_bounds().items():
            program.add_variable(name, lb=lb, ub=ub)
        program.add_constraint({wvar(t): 1.0 for t in self.hierarchy.leaves}, EQ, 1.0,
                               label="simplex")
        for coeffs, relation, rhs in self._rows:
            program.add_constraint(coeffs, relation, rhs)
        program.set_objective({EPS: 1.0}, maximize=True)
        return program

    def check_compatibility(self) -> CompatibilityResult:
        result = self.build_program().solve_lp()
        if result.status is not Status.OPTIMAL:
            return CompatibilityResult(None, False, result)
        return CompatibilityResult(result.objective, result.objective > 0.0, result)


def check_ws_compatibility(statements: list[PreferenceStatement], spec: SortingSpec,
                           table: NormalizedTable,
                           hierarchy: CriterionHierarchy) -> CompatibilityResult:
    return WeightedSumSystem(spec, table, hierarchy, statements).check_compatibility()
