"""Necessary/possible assignment logic: dichotomies, monotonicity, and spot checks."""

import numpy as np
import pytest

from hisort.elicitation import ConstraintSystem
from hisort.errors import InvalidClassIndex, NotCompatible
from hisort.ror import (assignment_range, assignment_report, necessarily_at_least,
                        necessarily_at_most, necessarily_in, possibly_at_least,
                        possibly_at_most, possibly_in)
from hisort.statements import AssignExact, PairwisePreference


def test_trivial_bounds(bonds):
    hier, _, norm, spec, stmts = bonds
    cs = ConstraintSystem(hier, spec, norm, stmts)
    for a in norm.alternatives:
        assert possibly_at_least(cs, a, "root", 1)
        assert possibly_at_most(cs, a, "root", 4)
        assert necessarily_at_least(cs, a, "root", 1)
        assert necessarily_at_most(cs, a, "root", 4)


def test_class_index_validation(bonds):
    hier, _, norm, spec, stmts = bonds
    cs = ConstraintSystem(hier, spec, norm, stmts)
    with pytest.raises(InvalidClassIndex):
        possibly_in(cs, "a", "root", 0)
    with pytest.raises(InvalidClassIndex):
        necessarily_in(cs, "a", "root", 5)


def test_necessary_implies_possible(bonds):
    hier, _, norm, spec, stmts = bonds
    cs = ConstraintSystem(hier, spec, norm, stmts)
    p = spec.class_count("root")
    for a in norm.alternatives:
        for h in range(1, p + 1):
            if necessarily_in(cs, a, "root", h):
                assert possibly_in(cs, a, "root", h)
            if necessarily_at_least(cs, a, "root", h):
                assert possibly_at_least(cs, a, "root", h)
            if necessarily_at_most(cs, a, "root", h):
                assert possibly_at_most(cs, a, "root", h)


def test_stated_assignments_are_necessary(bonds):
    """An alternative assigned exactly by a statement has a singleton range."""
    hier, _, norm, spec, stmts = bonds
    cs = ConstraintSystem(hier, spec, norm, stmts)
    expect = {s.alternative: s.cls for s in stmts if isinstance(s, AssignExact)}
    for a, h in expect.items():
        r = assignment_range(cs, a, "root")
        assert r.possible == (h,)
        assert r.necessary == h
        assert r.at_least == r.at_most == h


def test_possible_classes_form_an_interval(bonds):
    """Ranges are contiguous: the set of possible classes has no holes."""
    hier, _, norm, spec, stmts = bonds
    cs = ConstraintSystem(hier, spec, norm, stmts[:2])
    for a in norm.alternatives:
        r = assignment_range(cs, a, "root")
        assert r.possible == tuple(range(r.at_least, r.at_most + 1))


def test_more_statements_narrow_the_ranges(bonds):
    hier, _, norm, spec, stmts = bonds
    for a in norm.alternatives:
        prev = None
        for k in range(len(stmts) + 1):
            cs = ConstraintSystem(hier, spec, norm, stmts[:k])
            if not cs.check_compatibility().compatible:
                break
            r = assignment_range(cs, a, "root")
            if prev is not None:
                assert set(r.possible) <= set(prev)
            prev = r.possible


def test_report_lookup_and_serialization(bonds):
    hier, _, norm, spec, stmts = bonds
    cs = ConstraintSystem(hier, spec, norm, stmts)
    report = assignment_report(cs, alternatives=("a", "b"), nodes=("root",))
    assert len(report.ranges) == 2
    assert report.lookup("a", "root").necessary == 2
    with pytest.raises(KeyError):
        report.lookup("zzz", "root")
    doc = report.to_dict()
    assert len(doc["ranges"]) == 2
    assert isinstance(report.to_json(), str)


def test_report_requires_compatible_base(bonds):
    hier, _, norm, spec, stmts = bonds
    bad = stmts + [PairwisePreference("b", "d", "root")]
    cs = ConstraintSystem(hier, spec, norm, bad)
    with pytest.raises(NotCompatible):
        assignment_report(cs)


def test_range_against_exhaustive_vertex_sampling(bonds):
    """Every class reached by a sampled compatible model must be marked possible."""
    from hisort.sampling import hit_and_run, polytope_from_system
    from hisort.smaa import ModelSample

    from conftest import normalized_row

    hier, _, norm, spec, stmts = bonds
    cs = ConstraintSystem(hier, spec, norm, stmts[:2])
    poly = polytope_from_system(cs)
    models = ModelSample(cs, poly, hit_and_run(poly, 200, seed=5))
    ranges = {a: assignment_range(cs, a, "root").possible for a in norm.alternatives}
    for i in range(0, len(models), 20):
        model = models[i]
        for a in norm.alternatives:
            x = normalized_row(norm, a)
            assert model.assign(x, hier, "root") in ranges[a]


# -- EU case spot checks ------------------------------------------------------

def test_eu_necessary_assignments(eu_system):
    assert necessarily_in(eu_system, "Ireland", "Ec", 4)
    assert necessarily_in(eu_system, "Greece", "Ec", 1)
    assert not necessarily_in(eu_system, "Germany", "Ec", 4)


def test_eu_ranges(eu_system):
    # non-reference countries keep the full range at the top node
    assert assignment_range(eu_system, "Austria", "Global").possible == (1, 2, 3, 4)
    assert assignment_range(eu_system, "France", "Global").possible == (1, 2, 3, 4)
    # but narrow below it
    assert assignment_range(eu_system, "Austria", "Ec").possible == (2, 3, 4)
    assert assignment_range(eu_system, "Belgium", "Ec").possible == (2, 3, 4)
    assert assignment_range(eu_system, "Croatia", "Gov").possible == (2, 3, 4)
    assert assignment_range(eu_system, "Denmark", "Gov").possible == (3, 4)
    assert assignment_range(eu_system, "Sweden", "Gov").possible == (3, 4)


def test_eu_stated_assignments_hold(eu_system, eu_statements):
    for s in eu_statements:
        if isinstance(s, AssignExact):
            r = assignment_range(eu_system, s.alternative, s.node)
            assert r.possible == (s.cls,)
