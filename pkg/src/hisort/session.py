"""Sessions: inputs, the ordered statement list, and revision-stamped cached results."""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path

from .elicitation import ConstraintSystem, SortingSpec
from .errors import UnknownEntity, VersionMismatch
from .hierarchy import CriterionHierarchy
from .mobius import NODE_CAPACITY_FLOOR
from .statements import statement_from_dict, statement_to_dict
from .tables import PerformanceTable, normalize

SCHEMA_VERSION = 1


class Session:
    """One elicitation workspace; every mutation of the statement list bumps the revision."""

    def __init__(self, session_id: str, hierarchy: CriterionHierarchy,
                 raw_table: PerformanceTable, spec: SortingSpec,
                 delta_node: float = NODE_CAPACITY_FLOOR):
        self.id = session_id
        self.hierarchy = hierarchy
        self.raw_table = raw_table
        self.spec = spec
        self.delta_node = delta_node
        self.statements: list[tuple] = []  # (statement, timestamp)
        self.revision = 0
        self.cache: dict[str, dict] = {}  # kind -> {"revision": int, "payload": ...}
        self._normalized = None

    @property
    def normalized(self):
        if self._normalized is None:
            self._normalized = normalize(self.raw_table, self.hierarchy)
        return self._normalized

    # -- statements ----------------------------------------------------------

    def add_statement(self, statement, timestamp: float | None = None) -> int:
        if timestamp is None:
            timestamp = time.time()
        self.statements.append((statement, float(timestamp)))
        self.revision += 1
        return self.revision

    def remove_statement(self, index: int) -> int:
        if not 0 <= index < len(self.statements):
            raise UnknownEntity(f"no statement at index {index}")
        del self.statements[index]
        self.revision += 1
        return self.revision

    def statement_list(self) -> list:
        return [s for s, _ in self.statements]

    def constraint_system(self) -> ConstraintSystem:
        return ConstraintSystem(self.hierarchy, self.spec, self.normalized,
                                self.statement_list(), self.delta_node)

    # -- cached results ------------------------------------------------------

    def store_result(self, kind: str, payload) -> None:
        self.cache[kind] = {"revision": self.revision, "payload": payload}

    def get_result(self, kind: str):
        """(payload, fresh) for a cached result, or None when nothing is cached."""
        entry = self.cache.get(kind)
        if entry is None:
            return None
        return entry["payload"], entry["revision"] == self.revision

    # -- persistence ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "id": self.id,
            "hierarchy": self.hierarchy.to_dict(),
            "table": {
                "alternatives": list(self.raw_table.alternatives),
                "columns": list(self.raw_table.columns),
                "values": self.raw_table.values.tolist(),
            },
            "spec": dict(self.spec.classes),
            "delta_node": self.delta_node,
            "revision": self.revision,
            "statements": [
                {"statement": statement_to_dict(s), "timestamp": ts}
                for s, ts in self.statements
            ],
            "cache": self.cache,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Session":
        version = doc.get("schema_version")
        if version != SCHEMA_VERSION:
            raise VersionMismatch(f"session schema {version!r}, expected {SCHEMA_VERSION}")
        import numpy as np

        table = PerformanceTable(
            tuple(doc["table"]["alternatives"]),
            tuple(doc["table"]["columns"]),
            np.array(doc["table"]["values"]),
        )
        session = cls(
            doc["id"],
            CriterionHierarchy.from_dict(doc["hierarchy"]),
            table,
            SortingSpec({k: int(v) for k, v in doc["spec"].items()}),
            doc.get("delta_node", NODE_CAPACITY_FLOOR),
        )
        session.statements = [
            (statement_from_dict(rec["statement"]), rec["timestamp"])
            for rec in doc["statements"]
        ]
        session.revision = doc["revision"]
        session.cache = doc.get("cache", {})
        return session

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Session":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


class SessionStore:
    """Directory of session JSON files with per-session write locks."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def _path(self, session_id: str) -> Path:
        safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in session_id)
        return self.directory / f"{safe}.json"

    def lock(self, session_id: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def exists(self, session_id: str) -> bool:
        return self._path(session_id).exists()

    def save(self, session: Session) -> None:
        session.save(self._path(session.id))

    def load(self, session_id: str) -> Session:
        path = self._path(session_id)
        if not path.exists():
            raise UnknownEntity(f"no session {session_id!r}")
        return Session.load(path)

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.json"))
