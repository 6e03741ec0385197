"""Necessary and possible class assignments across every compatible model.

Each test augments the elicited constraint system with the rows describing the
claimed assignment (or its violation) and asks for a model with strictly
positive eps. "Necessary" holds when the violation system admits no such
model; "possible" holds when the claim system admits one. Strict inequalities
against the top threshold of a node become weak, because the top class is
closed from above.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .elicitation import EPS, ConstraintSystem, _add
from .errors import InvalidClassIndex, NumericalBreakdown
from .lp import GE, LE


def _compatible(cs: ConstraintSystem, extra_rows) -> bool:
    return cs.check_compatibility(extra_rows=tuple(extra_rows)).compatible


def _check_h(cs: ConstraintSystem, node: str, h: int) -> int:
    p = cs.spec.class_count(node)
    if not 1 <= h <= p:
        raise InvalidClassIndex(f"class {h} out of range 1..{p} at {node!r}")
    return p


def _lower_row(cs: ConstraintSystem, a: str, node: str, h: int):
    """Ch(a_r) >= b~_{h-1}."""
    row = _add(dict(cs.choquet_coeffs(a, node)), cs.threshold_coeffs(node, h - 1), -1.0)
    return (row, GE, 0.0)


def _upper_row(cs: ConstraintSystem, a: str, node: str, h: int, p: int):
    """Ch(a_r) < b~_h, weak at the top class."""
    row = _add(dict(cs.choquet_coeffs(a, node)), cs.threshold_coeffs(node, h), -1.0)
    if h < p:
        row = _add(row, {EPS: 1.0})
    return (row, LE, 0.0)


def possibly_at_least(cs: ConstraintSystem, a: str, node: str, h: int) -> bool:
    _check_h(cs, node, h)
    if h == 1:
        return True
    return _compatible(cs, [_lower_row(cs, a, node, h)])


def possibly_at_most(cs: ConstraintSystem, a: str, node: str, h: int) -> bool:
    p = _check_h(cs, node, h)
    if h == p:
        return True
    return _compatible(cs, [_upper_row(cs, a, node, h, p)])


def necessarily_at_least(cs: ConstraintSystem, a: str, node: str, h: int) -> bool:
    """No compatible model puts the alternative strictly below the class floor."""
    _check_h(cs, node, h)
    if h == 1:
        return True
    # violation: Ch(a_r) + eps <= b~_{h-1}
    row = _add(dict(cs.choquet_coeffs(a, node)), cs.threshold_coeffs(node, h - 1), -1.0)
    row = _add(row, {EPS: 1.0})
    return not _compatible(cs, [(row, LE, 0.0)])


def necessarily_at_most(cs: ConstraintSystem, a: str, node: str, h: int) -> bool:
    """No compatible model puts the alternative at or above the class ceiling."""
    p = _check_h(cs, node, h)
    if h == p:
        return True
    # violation: Ch(a_r) >= b~_h
    row = _add(dict(cs.choquet_coeffs(a, node)), cs.threshold_coeffs(node, h), -1.0)
    return not _compatible(cs, [(row, GE, 0.0)])


def possibly_in(cs: ConstraintSystem, a: str, node: str, h: int) -> bool:
    p = _check_h(cs, node, h)
    rows = []
    if h > 1:
        rows.append(_lower_row(cs, a, node, h))
    rows.append(_upper_row(cs, a, node, h, p))
    return _compatible(cs, rows)


def necessarily_in(cs: ConstraintSystem, a: str, node: str, h: int) -> bool:
    return necessarily_at_least(cs, a, node, h) and necessarily_at_most(cs, a, node, h)


@dataclass(frozen=True)
class AssignmentRange:
    alternative: str
    node: str
    possible: tuple[int, ...]
    necessary: int | None
    at_least: int
    at_most: int

    def to_dict(self) -> dict:
        return {
            "alternative": self.alternative,
            "node": self.node,
            "possible": list(self.possible),
            "necessary": self.necessary,
            "at_least": self.at_least,
            "at_most": self.at_most,
        }


@dataclass(frozen=True)
class AssignmentReport:
    ranges: tuple[AssignmentRange, ...]

    def lookup(self, alternative: str, node: str) -> AssignmentRange:
        for r in self.ranges:
            if r.alternative == alternative and r.node == node:
                return r
        raise KeyError((alternative, node))

    def to_dict(self) -> dict:
        return {"ranges": [r.to_dict() for r in self.ranges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def assignment_range(cs: ConstraintSystem, a: str, node: str) -> AssignmentRange:
    p = cs.spec.class_count(node)
    possible = tuple(h for h in range(1, p + 1) if possibly_in(cs, a, node, h))
    if not possible:
        raise NumericalBreakdown(
            f"no possible class for {a!r} at {node!r} although the base system is compatible"
        )
    lo, hi = possible[0], possible[-1]
    necessary = lo if lo == hi else None
    return AssignmentRange(a, node, possible, necessary, lo, hi)


def assignment_report(cs: ConstraintSystem, alternatives=None, nodes=None) -> AssignmentReport:
    alternatives = tuple(alternatives) if alternatives is not None else cs.table.alternatives
    nodes = tuple(nodes) if nodes is not None else cs.spec.nodes
    cs.witness_model()  # fail fast if the base system is incompatible
    ranges = tuple(
        assignment_range(cs, a, node) for node in nodes for a in alternatives
    )
    return AssignmentReport(ranges)
