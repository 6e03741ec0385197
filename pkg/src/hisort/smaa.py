"""Stochastic acceptability over sampled compatible models, and loss-based final assignments."""

from __future__ import annotations

import csv
import json
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .elicitation import (DEFAULT_DELTA, ConstraintSystem, CompatibleModel,
                          bvar, mvar, pvar)
from .errors import EmptyInterior, InvalidDistance, NotCompatible
from .lp import EQ, LE, LinearProgram, Status
from .sampling import Polytope, hit_and_run, polytope_from_system

DISTANCE_IDS = ("unit", "absolute", "sqrt")


class ModelSample(Sequence):
    """Array-backed sequence of sampled compatible models."""

    def __init__(self, cs: ConstraintSystem, polytope: Polytope, states: np.ndarray):
        self.cs = cs
        self.polytope = polytope
        self.states = states
        self._index = {name: j for j, name in enumerate(polytope.names)}

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, i) -> CompatibleModel:
        state = self.states[i]
        assignment = {pvar(a, b): 0.0 for a, b in self.cs.pair_keys}
        assignment.update({name: float(state[j]) for name, j in self._index.items()})
        return self.cs.extract_model(assignment)

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self._index[name]]

    def _node_setup(self, node: str):
        cs = self.cs
        leaves = set(cs.hierarchy.leaves_under(node))
        p = cs.spec.class_count(node)
        coeff = np.zeros((self.polytope.dimension, len(cs.table.alternatives)))
        for k, alt in enumerate(cs.table.alternatives):
            x = cs.table.row(alt)
            for t in leaves:
                coeff[self._index[mvar(t)], k] = x[t]
            for a, b in cs.pair_keys:
                key = pvar(a, b)
                if a in leaves and b in leaves and key in self._index:
                    coeff[self._index[key], k] = min(x[a], x[b])
        threshold_cols = [self._index[bvar(node, h)] for h in range(1, p)]
        return coeff, threshold_cols, p

    def class_matrix(self, node: str) -> np.ndarray:
        """Class of every alternative under every sampled model: shape (n, |A|)."""
        coeff, threshold_cols, p = self._node_setup(node)
        values = self.states @ coeff  # (n, |A|)
        classes = np.ones(values.shape, dtype=np.int64)
        for col in threshold_cols:
            classes += values >= self.states[:, [col]]
        return np.minimum(classes, p)


def sample_models(cs: ConstraintSystem, n: int, seed: int,
                  delta: float = DEFAULT_DELTA, zero_pairs=None,
                  thin: int | None = None) -> ModelSample:
    """n hit-and-run draws from the compatible polytope with eps pinned to delta."""
    if n < 1:
        raise ValueError("need n >= 1 samples")
    check = cs.check_compatibility(zero_pairs=set(zero_pairs) if zero_pairs else None)
    if not check.compatible:
        raise NotCompatible(f"no compatible model (eps* = {check.epsilon_star})")
    if check.epsilon_star <= delta:
        raise EmptyInterior(
            f"eps* = {check.epsilon_star} leaves no room above the floor {delta}"
        )
    polytope = polytope_from_system(cs, delta=delta, zero_pairs=zero_pairs)
    states = hit_and_run(polytope, n, seed, thin=thin)
    return ModelSample(cs, polytope, states)


@dataclass(frozen=True)
class CAIMatrix:
    """Per node: class acceptability frequencies, one row per alternative."""

    alternatives: tuple[str, ...]
    frequencies: dict[str, np.ndarray]  # node -> (|A|, p_node)

    def row(self, alternative: str, node: str) -> np.ndarray:
        return self.frequencies[node][self.alternatives.index(alternative)]

    def argmax_class(self, alternative: str, node: str) -> int:
        return int(np.argmax(self.row(alternative, node))) + 1

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(self.frequencies)

    def to_csv(self, path) -> None:
        header = ["alternative"]
        for node in self.nodes:
            header += [f"{node}_C{h}" for h in range(1, self.frequencies[node].shape[1] + 1)]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for i, alt in enumerate(self.alternatives):
                row = [alt]
                for node in self.nodes:
                    row += [repr(float(v)) for v in self.frequencies[node][i]]
                writer.writerow(row)

    def to_dict(self) -> dict:
        return {
            "alternatives": list(self.alternatives),
            "cai": {node: m.tolist() for node, m in self.frequencies.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_block(cls, alternatives, node: str, matrix) -> "CAIMatrix":
        matrix = np.asarray(matrix, dtype=float)
        return cls(tuple(alternatives), {node: matrix})


def compute_cai(models: ModelSample, nodes=None) -> CAIMatrix:
    """Empirical class frequencies over the sampled models."""
    if len(models) < 1:
        raise ValueError("need at least one model")
    cs = models.cs
    nodes = tuple(nodes) if nodes is not None else cs.spec.nodes
    out = {}
    n = len(models)
    for node in nodes:
        p = cs.spec.class_count(node)
        classes = models.class_matrix(node)
        freq = np.empty((classes.shape[1], p))
        for k in range(classes.shape[1]):
            freq[k] = np.bincount(classes[:, k] - 1, minlength=p) / n
        out[node] = freq
    return CAIMatrix(cs.table.alternatives, out)


def most_frequent_classification(models: ModelSample, node: str):
    """The modal full assignment vector at a node and its empirical frequency."""
    classes = models.class_matrix(node)
    vectors, counts = np.unique(classes, axis=0, return_counts=True)
    best = int(np.flatnonzero(counts == counts.max())[0])  # lexicographic tie-break
    assignment = dict(zip(models.cs.table.alternatives, (int(h) for h in vectors[best])))
    return assignment, counts[best] / len(models)


# -- loss aggregation ---------------------------------------------------------


def distance_matrix(distance, p: int) -> np.ndarray:
    """d(C_k, C_h) as a p x p matrix; named family or explicit table."""
    if isinstance(distance, str):
        k, h = np.indices((p, p))
        gap = np.abs(k - h)
        if distance == "unit":
            return (gap > 0).astype(float)
        if distance == "absolute":
            return gap.astype(float)
        if distance == "sqrt":
            return np.sqrt(gap.astype(float))
        raise InvalidDistance(f"unknown distance id {distance!r}")
    d = np.asarray(distance, dtype=float)
    if d.shape != (p, p):
        raise InvalidDistance(f"distance table must be {p} x {p}, got {d.shape}")
    if np.any(d < 0):
        raise InvalidDistance("distances must be nonnegative")
    if np.any(np.diag(d) != 0):
        raise InvalidDistance("distance of a class to itself must be zero")
    off = d + np.eye(p)
    if np.any(off <= 0):
        raise InvalidDistance("distance between distinct classes must be positive")
    return d


@dataclass(frozen=True)
class FinalAssignment:
    classes: dict[str, int]
    loss: float
    distance: str

    def to_dict(self) -> dict:
        return {"classes": dict(self.classes), "loss": self.loss, "distance": self.distance}


def _distance_id(distance) -> str:
    return distance if isinstance(distance, str) else "custom"


def _cost_matrix(cai: CAIMatrix, node: str, distance) -> np.ndarray:
    block = cai.frequencies[node]
    d = distance_matrix(distance, block.shape[1])
    return block @ d  # cost[a, h] = sum_k CAI(a, k) d(k, h)


def aggregate_loss(cai: CAIMatrix, node: str, distance) -> FinalAssignment:
    """Per-alternative class minimizing the expected distance to the sampled class.

    The exact assignment program decouples across alternatives (the only
    coupling row is the one-class-per-alternative equality), so the per-row
    argmin is the optimum; ties break to the lower class.
    """
    costs = _cost_matrix(cai, node, distance)
    picks = np.argmin(costs, axis=1)
    loss = float(costs[np.arange(len(picks)), picks].sum())
    classes = {a: int(h) + 1 for a, h in zip(cai.alternatives, picks)}
    return FinalAssignment(classes, loss, _distance_id(distance))


def enumerate_optimal_assignments(cai: CAIMatrix, node: str, distance,
                                  tol: float = 1e-9,
                                  max_solutions: int = 256) -> list[FinalAssignment]:
    """Every assignment attaining the minimum loss, via no-good cuts on the binary program."""
    costs = _cost_matrix(cai, node, distance)
    n_alt, p = costs.shape
    program = LinearProgram()
    y = {}
    for i, alt in enumerate(cai.alternatives):
        for h in range(p):
            y[(i, h)] = program.add_variable(f"y[{alt}|{h + 1}]", binary=True)
        program.add_constraint({y[(i, h)]: 1.0 for h in range(p)}, EQ, 1.0)
    objective = {y[(i, h)]: float(costs[i, h]) for i in range(n_alt) for h in range(p)}
    program.set_objective(objective, maximize=False)
    first = program.solve_milp()
    if first.status is not Status.OPTIMAL:
        raise InvalidDistance("assignment program unexpectedly infeasible")
    loss_star = first.objective
    program.add_constraint(objective, LE, loss_star + tol)
    solutions: list[FinalAssignment] = []
    result = first
    while result.status is Status.OPTIMAL and len(solutions) < max_solutions:
        chosen = [(i, h) for (i, h) in y if round(result.assignment[y[(i, h)]]) == 1]
        classes = {cai.alternatives[i]: h + 1 for i, h in sorted(chosen)}
        solutions.append(FinalAssignment(classes, loss_star, _distance_id(distance)))
        program.add_constraint({y[k]: 1.0 for k in chosen}, LE, float(n_alt - 1))
        result = program.solve_milp()
    return solutions
