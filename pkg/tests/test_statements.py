import pytest

from hisort.statements import (AssignAtLeast, AssignExact, AssignInterval,
                               EquallyImportant, Indifference, MoreImportant,
                               NegativeInteraction, PairwisePreference,
                               PositiveInteraction, statement_from_dict,
                               statement_to_dict, statements_from_json,
                               statements_to_json)

SAMPLES = [
    AssignExact("Austria", "Global", 3),
    AssignAtLeast("Austria", "Ec", 2),
    AssignInterval("Belgium", "Gov", 1, 3),
    PairwisePreference("Austria", "Belgium", "Global"),
    Indifference("Austria", "Belgium", "Fin"),
    MoreImportant("Fin", "CAB/GDP", "CAR/GDP"),
    EquallyImportant("Ec", "GDPc", "S/GDP"),
    PositiveInteraction("Fin", "CAR/GDP", "CAB/GDP"),
    NegativeInteraction("Ec", "GDPc", "Ep/GDP"),
]


def test_dict_roundtrip():
    for s in SAMPLES:
        assert statement_from_dict(statement_to_dict(s)) == s


def test_json_roundtrip():
    assert statements_from_json(statements_to_json(SAMPLES)) == SAMPLES


def test_unknown_type_rejected():
    with pytest.raises(ValueError):
        statement_from_dict({"type": "wishful_thinking"})
    with pytest.raises(ValueError):
        statement_from_dict({"alternative": "x"})


def test_interval_needs_proper_bounds():
    with pytest.raises(ValueError):
        AssignInterval("x", "Global", 3, 3)
    with pytest.raises(ValueError):
        AssignInterval("x", "Global", 3, 2)


def test_eu_fixture_statement_mix(eu_statements):
    kinds = [type(s).__name__ for s in eu_statements]
    assert kinds.count("AssignExact") == 14
    assert kinds.count("MoreImportant") == 3
    assert kinds.count("PositiveInteraction") == 2
    assert kinds.count("NegativeInteraction") == 1
