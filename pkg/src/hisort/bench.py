"""In-sample forecast comparison of four model families on reference subsamples.

For each subsample size k the protocol draws k reference alternatives, elicits
a root-level sorting from their known classes, and scores how often the
remaining alternatives keep their class under models sampled from the
weighted-sum polytope (WS), the full 2-additive polytope (CH), the polytope
restricted to each minimal interacting-pair set (MSCH, used only when WS
cannot reproduce the reference classes), and a linear regression baseline
(MLR). Correctness at level p counts an alternative when its acceptability
index at the true class reaches p percent.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import qr
from scipy.special import betainc

from .elicitation import (DEFAULT_DELTA, ConstraintSystem, SortingSpec,
                          WeightedSumSystem, wbvar, wvar)
from .errors import HisortError, SingularDesign
from .hierarchy import CriterionHierarchy
from .parsimony import enumerate_minimal_sets
from .sampling import hit_and_run, polytope_from_ws
from .smaa import CAIMatrix, compute_cai, sample_models
from .statements import AssignExact
from .tables import PerformanceTable, normalize

FAMILIES = ("WS", "CH", "MSCH", "MLR")


# -- linear-regression baseline ----------------------------------------------


@dataclass(frozen=True)
class MLRFit:
    regressors: tuple[str, ...]
    coefficients: np.ndarray  # aligned with regressors; zero where dropped
    dropped: tuple[str, ...]
    adjusted_r2: float | None
    f_pvalue: float | None


def design_matrix(table: PerformanceTable, alternatives, gdp_column: str = "GDPc"):
    """Regressors: intercept, the wealth column, and every other column divided by it."""
    if gdp_column not in table.columns:
        raise SingularDesign(f"missing base regressor column {gdp_column!r}")
    names = ["intercept", gdp_column]
    rows = []
    for a in alternatives:
        r = table.row(a)
        rows.append([1.0, r[gdp_column]]
                    + [r[c] / r[gdp_column] for c in table.columns if c != gdp_column])
    names += [f"{c}/{gdp_column}" for c in table.columns if c != gdp_column]
    return np.array(rows), tuple(names)


def fit_mlr(x: np.ndarray, y: np.ndarray, names=None) -> MLRFit:
    """Ordinary least squares with rank-deficiency fallback and F-test validation."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = x.shape
    if names is None:
        names = tuple(f"x{j}" for j in range(k))
    _, r, pivot = qr(x, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(x.shape) * np.finfo(float).eps * (diag[0] if len(diag) else 1.0)
    rank = int((diag > tol).sum())
    kept = sorted(pivot[:rank])
    dropped = tuple(names[j] for j in sorted(pivot[rank:]))
    beta_kept, *_ = np.linalg.lstsq(x[:, kept], y, rcond=None)
    beta = np.zeros(k)
    beta[kept] = beta_kept
    residuals = y - x @ beta
    ssr = float(residuals @ residuals)
    sst = float(((y - y.mean()) ** 2).sum())
    d1 = rank - 1  # model terms beyond the intercept
    d2 = n - rank
    if sst <= 0.0 or d1 < 1 or d2 < 1:
        return MLRFit(tuple(names), beta, dropped, None, None)
    r2 = 1.0 - ssr / sst
    adjusted = 1.0 - (1.0 - r2) * (n - 1) / d2
    if r2 >= 1.0:
        pvalue = 0.0
    else:
        f_stat = (r2 / d1) / ((1.0 - r2) / d2)
        # upper-tail F probability through the regularized incomplete beta function
        pvalue = float(betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f_stat)))
    return MLRFit(tuple(names), beta, dropped, adjusted, pvalue)


def predict_mlr(fit: MLRFit, row: np.ndarray) -> float:
    return float(np.asarray(row, dtype=float) @ fit.coefficients)


def predict_class_mlr(fit: MLRFit, row: np.ndarray, p: int) -> int:
    """Nearest class label to the predicted response; exact midpoints round up."""
    value = predict_mlr(fit, row)
    cls = int(math.floor(value + 0.5))
    return min(max(cls, 1), p)


# -- protocol ----------------------------------------------------------------


@dataclass(frozen=True)
class ForecastConfig:
    k_values: tuple[int, ...] = (14, 16, 18, 20, 22, 24, 26, 27)
    runs: int = 50
    thresholds: tuple[int, ...] = (50, 75, 100)
    samples: int = 10_000
    seed: int = 0
    delta: float = DEFAULT_DELTA
    gdp_column: str = "GDPc"

    def runs_for(self, k: int, n_alternatives: int) -> int:
        return min(self.runs, math.comb(n_alternatives, k))


@dataclass
class FamilyScore:
    feasible: int = 0
    correct: dict[int, list[float]] = field(default_factory=dict)

    def record(self, percentages: dict[int, float]):
        self.feasible += 1
        for p, value in percentages.items():
            self.correct.setdefault(p, []).append(value)

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "average_correct": {p: (sum(v) / len(v) if v else None)
                                for p, v in sorted(self.correct.items())},
        }


@dataclass
class BenchReport:
    config: ForecastConfig
    per_k: dict[int, dict[str, FamilyScore]]
    runs_done: dict[int, int]
    failures: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "config": {
                "k_values": list(self.config.k_values),
                "runs": self.config.runs,
                "thresholds": list(self.config.thresholds),
                "samples": self.config.samples,
                "seed": self.config.seed,
            },
            "per_k": {
                str(k): {fam: score.to_dict() for fam, score in families.items()}
                for k, families in self.per_k.items()
            },
            "runs_done": {str(k): v for k, v in self.runs_done.items()},
            "failures": {str(k): v for k, v in self.failures.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def score_correctness(cai: CAIMatrix, node: str, truth: dict[str, int],
                      alternatives, p: int) -> float:
    """Percent of the given alternatives whose acceptability at the true class reaches p%."""
    alternatives = tuple(alternatives)
    if not alternatives:
        return 100.0
    hits = sum(
        1 for a in alternatives
        if cai.row(a, node)[truth[a] - 1] * 100.0 >= p - 1e-9
    )
    return 100.0 * hits / len(alternatives)


def _ws_cai(ws: WeightedSumSystem, states: np.ndarray, polytope_names,
            alternatives, node: str) -> CAIMatrix:
    """Class frequencies for weighted-sum models (thresholds on the [0, 1] axis)."""
    index = {n: j for j, n in enumerate(polytope_names)}
    leaves = ws.hierarchy.leaves
    p = ws.p
    coeff = np.zeros((len(polytope_names), len(alternatives)))
    for k, a in enumerate(alternatives):
        x = ws.table.row(a)
        for t in leaves:
            coeff[index[wvar(t)], k] = x[t]
    values = states @ coeff
    classes = np.ones(values.shape, dtype=np.int64)
    for h in range(1, p):
        classes += values >= states[:, [index[wbvar(h)]]]
    freq = np.empty((len(alternatives), p))
    for k in range(len(alternatives)):
        freq[k] = np.bincount(np.minimum(classes[:, k], p) - 1, minlength=p) / len(states)
    return CAIMatrix(tuple(alternatives), {node: freq})


def _pooled_cai(blocks: list[np.ndarray], alternatives, node: str) -> CAIMatrix:
    return CAIMatrix(tuple(alternatives), {node: np.mean(blocks, axis=0)})


def run_forecast(config: ForecastConfig, table: PerformanceTable,
                 hierarchy: CriterionHierarchy, truth: dict[str, int],
                 n_classes: int = 4) -> BenchReport:
    """The full subsample-and-forecast experiment; deterministic under the master seed."""
    norm = normalize(table, hierarchy)
    root = hierarchy.root.id
    spec = SortingSpec({root: n_classes})
    alternatives = norm.alternatives
    missing = [a for a in alternatives if a not in truth]
    if missing:
        raise ValueError(f"truth labels missing for {missing}")

    per_k: dict[int, dict[str, FamilyScore]] = {}
    runs_done: dict[int, int] = {}
    failures: dict[int, int] = {}
    master = np.random.SeedSequence(config.seed)
    k_seeds = master.spawn(len(config.k_values))

    for k, k_seed in zip(config.k_values, k_seeds):
        if k >= len(alternatives):
            raise ValueError(f"k = {k} must be below the number of alternatives")
        scores = {fam: FamilyScore() for fam in FAMILIES}
        per_k[k] = scores
        failures[k] = 0
        runs = config.runs_for(k, len(alternatives))
        runs_done[k] = runs
        rng = np.random.default_rng(k_seed)
        seen: set[tuple[str, ...]] = set()
        run_seeds = k_seed.spawn(runs)
        for run_seed in run_seeds:
            while True:
                ref = tuple(sorted(rng.choice(alternatives, size=k, replace=False)))
                if ref not in seen:
                    seen.add(ref)
                    break
            rest = tuple(a for a in alternatives if a not in ref)
            kernel_seeds = run_seed.generate_state(4)
            try:
                _one_run(config, norm, hierarchy, spec, table, truth, root,
                         ref, rest, scores, kernel_seeds)
            except HisortError:
                failures[k] += 1
    return BenchReport(config, per_k, runs_done, failures)


def _one_run(config, norm, hierarchy, spec, raw_table, truth, root,
             ref, rest, scores, kernel_seeds):
    statements = [AssignExact(a, root, truth[a]) for a in ref]
    thresholds = config.thresholds

    # weighted-sum family
    ws = WeightedSumSystem(spec, norm, hierarchy, statements)
    ws_check = ws.check_compatibility()
    ws_ok = ws_check.compatible and ws_check.epsilon_star > config.delta
    if ws_ok:
        polytope = polytope_from_ws(ws, delta=config.delta)
        states = hit_and_run(polytope, config.samples, int(kernel_seeds[0]))
        cai = _ws_cai(ws, states, polytope.names, norm.alternatives, root)
        scores["WS"].record({p: score_correctness(cai, root, truth, rest, p)
                             for p in thresholds})

    # full 2-additive family
    cs = ConstraintSystem(hierarchy, spec, norm, statements)
    models = sample_models(cs, config.samples, int(kernel_seeds[1]), delta=config.delta)
    cai = compute_cai(models, nodes=(root,))
    scores["CH"].record({p: score_correctness(cai, root, truth, rest, p)
                         for p in thresholds})

    # minimal-set-restricted family, only where the weighted sum fails
    if not ws_ok:
        report = enumerate_minimal_sets(cs, delta=config.delta)
        blocks = []
        for i, minimal in enumerate(report.sets):
            keep = set(minimal.pairs)
            outside = {p for p in cs.pair_keys if p not in keep}
            models = sample_models(cs, config.samples, int(kernel_seeds[2]) + i,
                                   delta=config.delta, zero_pairs=outside)
            blocks.append(compute_cai(models, nodes=(root,)).frequencies[root])
        if report.gamma_star == 0:
            blocks.append(compute_cai(
                sample_models(cs, config.samples, int(kernel_seeds[2]),
                              delta=config.delta, zero_pairs=set(cs.pair_keys)),
                nodes=(root,)).frequencies[root])
        cai = _pooled_cai(blocks, norm.alternatives, root)
        scores["MSCH"].record({p: score_correctness(cai, root, truth, rest, p)
                               for p in thresholds})

    # regression baseline
    x_train, names = design_matrix(raw_table, ref, config.gdp_column)
    y_train = np.array([truth[a] for a in ref], dtype=float)
    fit = fit_mlr(x_train, y_train, names)
    x_rest, _ = design_matrix(raw_table, rest, config.gdp_column)
    p_top = spec.class_count(root)
    hits = sum(1 for a, row in zip(rest, x_rest)
               if predict_class_mlr(fit, row, p_top) == truth[a])
    pct = 100.0 * hits / len(rest) if rest else 100.0
    scores["MLR"].record({p: pct for p in thresholds})
