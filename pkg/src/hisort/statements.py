"""Decision-maker preference statements and their JSON wire form."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Union


@dataclass(frozen=True)
class AssignExact:
    alternative: str
    node: str
    cls: int


@dataclass(frozen=True)
class AssignAtLeast:
    alternative: str
    node: str
    cls: int


@dataclass(frozen=True)
class AssignAtMost:
    alternative: str
    node: str
    cls: int


@dataclass(frozen=True)
class AssignInterval:
    alternative: str
    node: str
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo >= self.hi:
            raise ValueError("interval needs lo < hi")


@dataclass(frozen=True)
class PairwisePreference:
    better: str
    worse: str
    node: str


@dataclass(frozen=True)
class Indifference:
    a: str
    b: str
    node: str


@dataclass(frozen=True)
class MoreImportant:
    node: str
    more: str
    less: str


@dataclass(frozen=True)
class EquallyImportant:
    node: str
    a: str
    b: str


@dataclass(frozen=True)
class PositiveInteraction:
    node: str
    a: str
    b: str


@dataclass(frozen=True)
class NegativeInteraction:
    node: str
    a: str
    b: str


PreferenceStatement = Union[
    AssignExact, AssignAtLeast, AssignAtMost, AssignInterval,
    PairwisePreference, Indifference,
    MoreImportant, EquallyImportant, PositiveInteraction, NegativeInteraction,
]

_TAGS = {
    AssignExact: "assign_exact",
    AssignAtLeast: "assign_at_least",
    AssignAtMost: "assign_at_most",
    AssignInterval: "assign_interval",
    PairwisePreference: "preference",
    Indifference: "indifference",
    MoreImportant: "more_important",
    EquallyImportant: "equally_important",
    PositiveInteraction: "positive_interaction",
    NegativeInteraction: "negative_interaction",
}
_BY_TAG = {tag: cls for cls, tag in _TAGS.items()}


def statement_to_dict(statement: PreferenceStatement) -> dict:
    doc = {"type": _TAGS[type(statement)]}
    doc.update(asdict(statement))
    return doc


def statement_from_dict(doc: dict) -> PreferenceStatement:
    doc = dict(doc)
    tag = doc.pop("type", None)
    if tag not in _BY_TAG:
        raise ValueError(f"unknown statement type {tag!r}")
    return _BY_TAG[tag](**doc)


def statements_to_json(statements: list[PreferenceStatement]) -> str:
    return json.dumps([statement_to_dict(s) for s in statements], indent=2)


def statements_from_json(text: str) -> list[PreferenceStatement]:
    return [statement_from_dict(d) for d in json.loads(text)]


def load_statements(path) -> list[PreferenceStatement]:
    with open(path, encoding="utf-8") as fh:
        return statements_from_json(fh.read())
