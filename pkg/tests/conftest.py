import json
from pathlib import Path

import numpy as np
import pytest

from hisort.elicitation import ConstraintSystem, SortingSpec
from hisort.hierarchy import CriterionHierarchy, flat_hierarchy
from hisort.statements import AssignExact, load_statements
from hisort.tables import PerformanceTable, normalize

DATA = Path(__file__).resolve().parent.parent / "src" / "hisort" / "data"
FIXTURES = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def eu_hierarchy():
    return CriterionHierarchy.from_json(DATA / "eu_hierarchy.json")


@pytest.fixture(scope="session")
def eu_raw():
    return PerformanceTable.from_csv(DATA / "eu_raw.csv")


@pytest.fixture(scope="session")
def eu_norm(eu_raw, eu_hierarchy):
    return normalize(eu_raw, eu_hierarchy)


@pytest.fixture(scope="session")
def eu_spec(eu_hierarchy):
    return SortingSpec.uniform(eu_hierarchy, 4)


@pytest.fixture(scope="session")
def eu_statements():
    return load_statements(DATA / "eu_dm_preferences.json")


@pytest.fixture(scope="session")
def eu_system(eu_hierarchy, eu_spec, eu_norm, eu_statements):
    return ConstraintSystem(eu_hierarchy, eu_spec, eu_norm, eu_statements)


@pytest.fixture(scope="session")
def eu_classification():
    doc = json.loads((DATA / "eu_classification.json").read_text())
    return doc


@pytest.fixture(scope="session")
def eu_root_statements(eu_hierarchy, eu_classification):
    root = eu_hierarchy.root.id
    return [AssignExact(a, root, int(cls))
            for a, cls in eu_classification.items()]


@pytest.fixture
def bonds():
    """Four alternatives on three flat criteria where a weighted sum cannot sort them."""
    hier = flat_hierarchy(("Eco", "Gov", "Fin"))
    raw = PerformanceTable(
        ("a", "b", "c", "d"), ("Eco", "Gov", "Fin"),
        np.array([[11, 9, 5], [7, 12, 5], [11, 9, 8], [7, 12, 8]], float))
    spec = SortingSpec.uniform(hier, 4)
    statements = [AssignExact("a", hier.root.id, 2), AssignExact("b", hier.root.id, 1),
                  AssignExact("c", hier.root.id, 3), AssignExact("d", hier.root.id, 4)]
    return hier, raw, normalize(raw, hier), spec, statements


def normalized_row(table, alternative):
    i = table.alternatives.index(alternative)
    return dict(zip(table.columns, table.values[i]))
