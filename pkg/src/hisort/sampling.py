"""Uniform sampling of compatible-model polytopes by hit-and-run.

The polytope lives in the space of Mobius coefficients and scaled thresholds
with eps pinned to its floor. Linear rows and box bounds clip the chord
directly; monotonicity of the 2-additive capacity enters through its compact
concave form per leaf,

    f_t(x) = m({t}) + sum_j min(0, m({t, j})) >= 0,

which restricts any line to an interval found by bisection against the two
chord endpoints. Directions are drawn inside the null space of the equality
rows, so normalization (and any elicited equalities) hold along the whole
chain. The chain starts from a maximum-slack interior point and keeps every
(10 x dimension)-th state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.linalg import null_space

from .elicitation import (DEFAULT_DELTA, EPS, ConstraintSystem,
                          WeightedSumSystem, bvar, mvar, pvar)
from .errors import EmptyInterior
from .lp import EQ, GE, LE, LinearProgram, Status
from .mobius import pair_key

THIN_FACTOR = 10

_EDGE_TOL = 1e-11


@dataclass(frozen=True)
class Polytope:
    """Dense matrix form of {x : A_in x <= b_in, A_eq x = b_eq, lb <= x <= ub, mono}."""

    names: tuple[str, ...]
    a_in: np.ndarray
    b_in: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    # per leaf: column of its singleton and columns of its (kept) pair coefficients
    mono_single: np.ndarray  # shape (n_leaves,), int
    mono_pairs: tuple[tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.names)


def _rows_to_matrices(rows, index: dict[str, int], substitutions: dict[str, float]):
    """Split rows into inequality (a x <= b) and equality stacks, applying substitutions."""
    a_in, b_in, a_eq, b_eq = [], [], [], []
    d = len(index)
    for coeffs, relation, rhs in rows:
        vec = np.zeros(d)
        shift = 0.0
        for name, value in coeffs.items():
            if name in index:
                vec[index[name]] = value
            elif name in substitutions:
                shift += value * substitutions[name]
            else:
                raise KeyError(f"row references unknown variable {name!r}")
        rhs = rhs - shift
        if relation == EQ:
            a_eq.append(vec)
            b_eq.append(rhs)
        elif relation == LE:
            a_in.append(vec)
            b_in.append(rhs)
        elif relation == GE:
            a_in.append(-vec)
            b_in.append(-rhs)
        else:
            raise ValueError(f"bad relation {relation!r}")
    stack = lambda part, width: (np.array(part) if part else np.empty((0, width)))
    return (stack(a_in, d), np.array(b_in) if b_in else np.empty(0),
            stack(a_eq, d), np.array(b_eq) if b_eq else np.empty(0))


def polytope_from_system(cs: ConstraintSystem, delta: float = DEFAULT_DELTA,
                         zero_pairs=None) -> Polytope:
    """Compatible-model polytope with eps = delta; listed pairs are dropped (fixed to 0)."""
    dropped = {pair_key(*p) for p in (zero_pairs or ())}
    kept_pairs = [p for p in cs.pair_keys if p not in dropped]
    names = ([mvar(t) for t in cs.hierarchy.leaves]
             + [pvar(a, b) for a, b in kept_pairs]
             + [bvar(node, h) for node, h in cs.threshold_vars()])
    index = {n: j for j, n in enumerate(names)}
    substitutions = {EPS: delta}
    substitutions.update({pvar(a, b): 0.0 for a, b in dropped})
    a_in, b_in, a_eq, b_eq = _rows_to_matrices(cs.core_rows, index, substitutions)
    bounds = cs.variable_bounds()
    lb = np.array([bounds[n][0] if bounds[n][0] is not None else -np.inf for n in names])
    ub = np.array([bounds[n][1] if bounds[n][1] is not None else np.inf for n in names])
    leaves = cs.hierarchy.leaves
    mono_single = np.array([index[mvar(t)] for t in leaves], dtype=np.int64)
    mono_pairs = tuple(
        tuple(index[pvar(t, j)] for j in leaves if j != t and pair_key(t, j) not in dropped)
        for t in leaves
    )
    return Polytope(tuple(names), a_in, b_in, a_eq, b_eq, lb, ub, mono_single, mono_pairs)


def polytope_from_ws(ws: WeightedSumSystem, delta: float = DEFAULT_DELTA) -> Polytope:
    """Weight-simplex polytope of the weighted-sum baseline with eps = delta."""
    bounds = ws.variable_bounds()
    names = [n for n in bounds if n not in (EPS, "wb_top")]
    index = {n: j for j, n in enumerate(names)}
    substitutions = {EPS: delta, "wb_top": 1.0}
    rows = list(ws.core_rows)
    rows.append(({n: 1.0 for n in names if n.startswith("w[")}, EQ, 1.0))
    a_in, b_in, a_eq, b_eq = _rows_to_matrices(rows, index, substitutions)
    lb = np.array([bounds[n][0] for n in names])
    ub = np.array([bounds[n][1] for n in names])
    return Polytope(tuple(names), a_in, b_in, a_eq, b_eq, lb, ub,
                    np.empty(0, dtype=np.int64), ())


def interior_point(polytope: Polytope) -> np.ndarray:
    """Maximum-slack point: strictly inside every inequality, bound and mono constraint."""
    program = LinearProgram()
    for j, name in enumerate(polytope.names):
        lo = polytope.lb[j] if np.isfinite(polytope.lb[j]) else None
        hi = polytope.ub[j] if np.isfinite(polytope.ub[j]) else None
        program.add_variable(name, lb=lo, ub=hi)
    s = program.add_variable("slack", lb=0.0, ub=1.0)
    for i in range(len(polytope.b_in)):
        coeffs = {polytope.names[j]: polytope.a_in[i, j]
                  for j in np.flatnonzero(polytope.a_in[i])}
        coeffs[s] = 1.0
        program.add_constraint(coeffs, LE, float(polytope.b_in[i]))
    for i in range(len(polytope.b_eq)):
        coeffs = {polytope.names[j]: polytope.a_eq[i, j]
                  for j in np.flatnonzero(polytope.a_eq[i])}
        program.add_constraint(coeffs, EQ, float(polytope.b_eq[i]))
    for j, name in enumerate(polytope.names):
        if np.isfinite(polytope.lb[j]):
            program.add_constraint({name: 1.0, s: -1.0}, GE, float(polytope.lb[j]))
        if np.isfinite(polytope.ub[j]):
            program.add_constraint({name: 1.0, s: 1.0}, LE, float(polytope.ub[j]))
    for t, single_col in enumerate(polytope.mono_single):
        acc = {polytope.names[single_col]: 1.0, s: -1.0}
        for pair_col in polytope.mono_pairs[t]:
            aux = program.add_variable(f"aux[{t}|{pair_col}]", lb=-1.0, ub=0.0)
            program.add_constraint({aux: 1.0, polytope.names[pair_col]: -1.0}, LE, 0.0)
            acc[aux] = 1.0
        program.add_constraint(acc, GE, 0.0)
    program.set_objective({s: 1.0}, maximize=True)
    result = program.solve_lp()
    if result.status is not Status.OPTIMAL or result.objective <= 1e-9:
        raise EmptyInterior(
            f"polytope has no interior point (max slack = "
            f"{result.objective if result.status is Status.OPTIMAL else None})"
        )
    return np.array([result.assignment[n] for n in polytope.names])


@njit(cache=True)
def _mono_value(x, u, t, single_col, pair_cols):
    v = x[single_col] + t * u[single_col]
    for c in pair_cols:
        w = x[c] + t * u[c]
        if w < 0.0:
            v += w
    return v


@njit(cache=True)
def _mono_clip(x, u, t_lo, t_hi, mono_single, mono_pairs_flat, mono_offsets):
    """Shrink [t_lo, t_hi] so the concave per-leaf mono functions stay nonnegative.

    t = 0 is feasible by construction; each endpoint is bisected against 0
    whenever the leaf function goes negative there.
    """
    for k in range(mono_single.shape[0]):
        cols = mono_pairs_flat[mono_offsets[k]:mono_offsets[k + 1]]
        sc = mono_single[k]
        if _mono_value(x, u, t_hi, sc, cols) < 0.0:
            good, bad = 0.0, t_hi
            for _ in range(60):
                mid = 0.5 * (good + bad)
                if _mono_value(x, u, mid, sc, cols) >= 0.0:
                    good = mid
                else:
                    bad = mid
            t_hi = good
        if _mono_value(x, u, t_lo, sc, cols) < 0.0:
            good, bad = 0.0, t_lo
            for _ in range(60):
                mid = 0.5 * (good + bad)
                if _mono_value(x, u, mid, sc, cols) >= 0.0:
                    good = mid
                else:
                    bad = mid
            t_lo = good
    return t_lo, t_hi


@njit(cache=True)
def _run_chain(x0, basis, a_in, b_in, lb, ub, mono_single, mono_pairs_flat,
               mono_offsets, n_samples, thin, seed):
    np.random.seed(seed)
    d = x0.shape[0]
    z = basis.shape[1]
    x = x0.copy()
    ax = a_in @ x
    out = np.empty((n_samples, d))
    steps = 0
    for s in range(n_samples):
        for _ in range(thin):
            g = np.random.standard_normal(z)
            u = basis @ g
            norm = np.sqrt((u * u).sum())
            if norm < 1e-300:
                continue
            u /= norm
            au = a_in @ u
            t_lo, t_hi = -np.inf, np.inf
            for i in range(b_in.shape[0]):
                slack = b_in[i] - ax[i]
                if au[i] > _EDGE_TOL:
                    t = slack / au[i]
                    if t < t_hi:
                        t_hi = t
                elif au[i] < -_EDGE_TOL:
                    t = slack / au[i]
                    if t > t_lo:
                        t_lo = t
            for j in range(d):
                if u[j] > _EDGE_TOL:
                    t = (ub[j] - x[j]) / u[j]
                    if t < t_hi:
                        t_hi = t
                    t = (lb[j] - x[j]) / u[j]
                    if t > t_lo:
                        t_lo = t
                elif u[j] < -_EDGE_TOL:
                    t = (lb[j] - x[j]) / u[j]
                    if t < t_hi:
                        t_hi = t
                    t = (ub[j] - x[j]) / u[j]
                    if t > t_lo:
                        t_lo = t
            if mono_single.shape[0] > 0:
                t_lo, t_hi = _mono_clip(x, u, t_lo, t_hi, mono_single,
                                        mono_pairs_flat, mono_offsets)
            if not (t_lo < t_hi):
                continue
            t = t_lo + np.random.random() * (t_hi - t_lo)
            x += t * u
            ax += t * au
            steps += 1
            if steps % 4096 == 0:
                ax = a_in @ x
        out[s] = x
    return out


def hit_and_run(polytope: Polytope, n: int, seed: int, thin: int | None = None,
                start: np.ndarray | None = None) -> np.ndarray:
    """n approximately-uniform points of the polytope; fixed seed, fixed stream."""
    if n < 1:
        raise ValueError("need n >= 1 samples")
    if start is None:
        start = interior_point(polytope)
    if polytope.a_eq.shape[0] > 0:
        basis = null_space(polytope.a_eq)
    else:
        basis = np.eye(polytope.dimension)
    if basis.shape[1] == 0:
        return np.repeat(start[None, :], n, axis=0)
    if thin is None:
        thin = THIN_FACTOR * basis.shape[1]
    flat = [c for cols in polytope.mono_pairs for c in cols]
    offsets = np.zeros(len(polytope.mono_pairs) + 1, dtype=np.int64)
    for k, cols in enumerate(polytope.mono_pairs):
        offsets[k + 1] = offsets[k] + len(cols)
    return _run_chain(
        np.ascontiguousarray(start), np.ascontiguousarray(basis),
        np.ascontiguousarray(polytope.a_in), np.ascontiguousarray(polytope.b_in),
        np.ascontiguousarray(polytope.lb), np.ascontiguousarray(polytope.ub),
        polytope.mono_single, np.array(flat, dtype=np.int64), offsets,
        n, thin, seed & 0x7FFFFFFF,
    )
