import pytest

from hisort.errors import UnknownEntity
from hisort.hierarchy import (CriterionHierarchy, CriterionNode, flat_hierarchy)


def test_eu_tree_shape(eu_hierarchy):
    assert eu_hierarchy.root.id == "Global"
    assert set(eu_hierarchy.non_elementary) == {"Global", "Ec", "Gov", "Fin"}
    assert len(eu_hierarchy.leaves) == 11
    assert eu_hierarchy.leaves_under("Fin") == ("CAR/GDP", "CAB/GDP", "TB/GDP")
    assert eu_hierarchy.leaves_under("Global") == eu_hierarchy.leaves
    assert eu_hierarchy.parent("Fin") == "Global"
    assert eu_hierarchy.parent("GDPc") == "Ec"
    assert eu_hierarchy.parent("Global") is None


def test_leaf_is_its_own_descendant(eu_hierarchy):
    assert eu_hierarchy.leaves_under("GDPc") == ("GDPc",)


def test_unknown_node_raises(eu_hierarchy):
    with pytest.raises(UnknownEntity):
        eu_hierarchy.node("Nope")
    with pytest.raises(UnknownEntity):
        eu_hierarchy.direction("Ec")  # not elementary
    assert "Ec" in eu_hierarchy and "Nope" not in eu_hierarchy


def test_duplicate_ids_rejected():
    leaf = CriterionNode("x", (1,), column="x", direction="increasing")
    dup = CriterionNode("x", (2,), column="x", direction="increasing")
    with pytest.raises(ValueError):
        CriterionHierarchy(CriterionNode("r", (), children=(leaf, dup)))


def test_leaf_without_direction_rejected():
    bad = CriterionNode("x", (1,), column="x", direction="sideways")
    with pytest.raises(ValueError):
        CriterionHierarchy(CriterionNode("r", (), children=(bad,)))


def test_dict_roundtrip(eu_hierarchy):
    doc = eu_hierarchy.to_dict()
    back = CriterionHierarchy.from_dict(doc)
    assert back.leaves == eu_hierarchy.leaves
    assert back.non_elementary == eu_hierarchy.non_elementary
    assert back.to_dict() == doc
    for leaf in back.leaves:
        assert back.direction(leaf) == eu_hierarchy.direction(leaf)


def test_index_vectors_are_prefix_consistent(eu_hierarchy):
    for node_id in eu_hierarchy.non_elementary:
        node = eu_hierarchy.node(node_id)
        for child in node.children:
            assert child.index[:-1] == node.index


def test_flat_hierarchy_defaults():
    hier = flat_hierarchy(("p", "q"))
    assert hier.leaves == ("p", "q")
    assert hier.direction("p") == "increasing"
    assert hier.columns() == {"p": "p", "q": "q"}
