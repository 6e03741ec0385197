"""Linear and mixed-binary programs: a small builder plus a deterministic solver.

The solver is backed by scipy's HiGHS bindings (dual simplex for LPs,
branch-and-bound for mixed-binary programs). Programs are immutable once
solved for the first time; each solve owns its working arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, linprog
from scipy.optimize import milp as scipy_milp

from .errors import NodeLimit, NumericalBreakdown

FEASIBILITY_TOL = 1e-7
INTEGRALITY_TOL = 1e-6
DEFAULT_NODE_LIMIT = 1_000_000

LE, EQ, GE = "<=", "=", ">="


class Status(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class SolveResult:
    status: Status
    objective: float | None = None
    assignment: dict[str, float] | None = None

    def __getitem__(self, name: str) -> float:
        if self.assignment is None:
            raise KeyError("no assignment: problem was not solved to optimality")
        return self.assignment[name]


@dataclass
class _Var:
    name: str
    lb: float | None
    ub: float | None
    binary: bool


@dataclass
class _Row:
    coeffs: dict[str, float]
    relation: str
    rhs: float
    label: str = ""


class LinearProgram:
    """Sparse rows over named variables; objective sense is explicit."""

    def __init__(self):
        self._vars: dict[str, _Var] = {}
        self._rows: list[_Row] = []
        self._objective: dict[str, float] = {}
        self._maximize = True

    # -- construction -------------------------------------------------------

    def add_variable(self, name: str, lb: float | None = None, ub: float | None = None,
                     binary: bool = False) -> str:
        if name in self._vars:
            raise ValueError(f"variable {name!r} already declared")
        if binary:
            lb, ub = 0.0, 1.0
        self._vars[name] = _Var(name, lb, ub, binary)
        return name

    def add_constraint(self, coeffs: dict[str, float], relation: str, rhs: float,
                       label: str = "") -> None:
        if relation not in (LE, EQ, GE):
            raise ValueError(f"bad relation {relation!r}")
        for name, value in coeffs.items():
            if name not in self._vars:
                raise ValueError(f"constraint references undeclared variable {name!r}")
            if not np.isfinite(value):
                raise ValueError(f"non-finite coefficient for {name!r}")
        if not np.isfinite(rhs):
            raise ValueError("non-finite right-hand side")
        self._rows.append(_Row(dict(coeffs), relation, rhs, label))

    def set_objective(self, coeffs: dict[str, float], maximize: bool = True) -> None:
        for name in coeffs:
            if name not in self._vars:
                raise ValueError(f"objective references undeclared variable {name!r}")
        self._objective = dict(coeffs)
        self._maximize = maximize

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(self._vars)

    @property
    def binary_variables(self) -> tuple[str, ...]:
        return tuple(n for n, v in self._vars.items() if v.binary)

    @property
    def n_rows(self) -> int:
        return len(self._rows)

    def copy(self) -> "LinearProgram":
        clone = LinearProgram()
        clone._vars = {n: _Var(v.name, v.lb, v.ub, v.binary) for n, v in self._vars.items()}
        clone._rows = [_Row(dict(r.coeffs), r.relation, r.rhs, r.label) for r in self._rows]
        clone._objective = dict(self._objective)
        clone._maximize = self._maximize
        return clone

    # -- matrix form --------------------------------------------------------

    def _matrices(self):
        names = list(self._vars)
        pos = {n: j for j, n in enumerate(names)}
        n = len(names)
        c = np.zeros(n)
        for name, value in self._objective.items():
            c[pos[name]] = value
        rows_i, cols_i, data = [], [], []
        lo = np.empty(len(self._rows))
        hi = np.empty(len(self._rows))
        for i, row in enumerate(self._rows):
            for name, value in row.coeffs.items():
                rows_i.append(i)
                cols_i.append(pos[name])
                data.append(value)
            if row.relation == LE:
                lo[i], hi[i] = -np.inf, row.rhs
            elif row.relation == GE:
                lo[i], hi[i] = row.rhs, np.inf
            else:
                lo[i] = hi[i] = row.rhs
        a = sparse.csr_matrix((data, (rows_i, cols_i)), shape=(len(self._rows), n))
        bounds = np.array([
            [v.lb if v.lb is not None else -np.inf, v.ub if v.ub is not None else np.inf]
            for v in self._vars.values()
        ]).reshape(n, 2)
        return names, c, a, lo, hi, bounds

    def check_assignment(self, assignment: dict[str, float], tol: float = FEASIBILITY_TOL) -> bool:
        """Whether a point satisfies every row and bound within tolerance."""
        for row in self._rows:
            lhs = sum(v * assignment[n] for n, v in row.coeffs.items())
            if row.relation == LE and lhs > row.rhs + tol:
                return False
            if row.relation == GE and lhs < row.rhs - tol:
                return False
            if row.relation == EQ and abs(lhs - row.rhs) > tol:
                return False
        for name, var in self._vars.items():
            x = assignment[name]
            if var.lb is not None and x < var.lb - tol:
                return False
            if var.ub is not None and x > var.ub + tol:
                return False
        return True

    # -- solving ------------------------------------------------------------

    def solve_lp(self) -> SolveResult:
        """Exact LP optimum via simplex; binary variables are not allowed here."""
        if self.binary_variables:
            raise ValueError("program has binary variables; use solve_milp")
        names, c, a, lo, hi, bounds = self._matrices()
        sign = -1.0 if self._maximize else 1.0
        eq_mask = np.isfinite(lo) & np.isfinite(hi) & (lo == hi)
        le_mask = np.isfinite(hi) & ~eq_mask
        ge_mask = np.isfinite(lo) & ~eq_mask
        a_ub = sparse.vstack([a[le_mask], -a[ge_mask]]) if (le_mask.any() or ge_mask.any()) else None
        b_ub = np.concatenate([hi[le_mask], -lo[ge_mask]]) if a_ub is not None else None
        a_eq = a[eq_mask] if eq_mask.any() else None
        b_eq = lo[eq_mask] if a_eq is not None else None
        res = linprog(sign * c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                      bounds=bounds, method="highs-ds")
        if res.status == 2:
            return SolveResult(Status.INFEASIBLE)
        if res.status == 3:
            return SolveResult(Status.UNBOUNDED)
        if res.status != 0:
            raise NumericalBreakdown(f"LP solve failed: {res.message}")
        assignment = dict(zip(names, res.x))
        return SolveResult(Status.OPTIMAL, sign * res.fun, assignment)

    def solve_milp(self, node_limit: int = DEFAULT_NODE_LIMIT) -> SolveResult:
        """Exact mixed-binary optimum via branch-and-bound on LP relaxations."""
        if not self.binary_variables:
            return self.solve_lp()
        names, c, a, lo, hi, bounds = self._matrices()
        sign = -1.0 if self._maximize else 1.0
        integrality = np.array([1 if self._vars[n].binary else 0 for n in names])
        res = scipy_milp(
            sign * c,
            constraints=LinearConstraint(a, lo, hi),
            integrality=integrality,
            bounds=Bounds(bounds[:, 0], bounds[:, 1]),
            options={"node_limit": node_limit, "mip_rel_gap": 0.0},
        )
        if res.status == 2:
            return SolveResult(Status.INFEASIBLE)
        if res.status == 3:
            return SolveResult(Status.UNBOUNDED)
        if res.status == 1:
            raise NodeLimit(f"node budget {node_limit} exhausted")
        if res.status != 0 or res.x is None:
            raise NumericalBreakdown(f"MILP solve failed: {res.message}")
        x = res.x.copy()
        for j, name in enumerate(names):
            if self._vars[name].binary:
                if abs(x[j] - round(x[j])) > INTEGRALITY_TOL:
                    raise NumericalBreakdown(f"binary variable {name!r} came back fractional")
                x[j] = round(x[j])
        assignment = dict(zip(names, x))
        return SolveResult(Status.OPTIMAL, sign * res.fun, assignment)

    # -- export -------------------------------------------------------------

    def to_lp_format(self) -> str:
        """Render in the CPLEX LP text format for external verification."""

        def term(coef: float, name: str, first: bool) -> str:
            sign = "-" if coef < 0 else ("" if first else "+")
            return f"{sign} {abs(coef):.17g} {name}"

        def expr(coeffs: dict[str, float]) -> str:
            parts = []
            for i, (name, coef) in enumerate(coeffs.items()):
                parts.append(term(coef, _lp_name(name), i == 0))
            return " ".join(parts) if parts else "0 " + _lp_name(next(iter(self._vars)))

        lines = ["Maximize" if self._maximize else "Minimize", " obj: " + expr(self._objective),
                 "Subject To"]
        for i, row in enumerate(self._rows):
            rel = {LE: "<=", GE: ">=", EQ: "="}[row.relation]
            label = row.label or f"c{i}"
            lines.append(f" {label}: {expr(row.coeffs)} {rel} {row.rhs:.17g}")
        lines.append("Bounds")
        for name, var in self._vars.items():
            if var.binary:
                continue
            lb = f"{var.lb:.17g}" if var.lb is not None else "-inf"
            ub = f"{var.ub:.17g}" if var.ub is not None else "+inf"
            lines.append(f" {lb} <= {_lp_name(name)} <= {ub}")
        if self.binary_variables:
            lines.append("Binary")
            for name in self.binary_variables:
                lines.append(f" {_lp_name(name)}")
        lines.append("End")
        return "\n".join(lines) + "\n"


def _lp_name(name: str) -> str:
    out = "".join(ch if ch.isalnum() or ch in "_" else "_" for ch in name)
    return out if out and not out[0].isdigit() else "v_" + out


def solve_lp(program: LinearProgram) -> SolveResult:
    return program.solve_lp()


def solve_milp(program: LinearProgram, node_limit: int = DEFAULT_NODE_LIMIT) -> SolveResult:
    return program.solve_milp(node_limit=node_limit)
