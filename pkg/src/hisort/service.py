"""HTTP API over sessions: statements in, reports out, long work as polled jobs."""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .elicitation import SortingSpec
from .errors import HisortError, UnknownEntity
from .hierarchy import CriterionHierarchy
from .parsimony import enumerate_minimal_sets
from .ror import assignment_report
from .session import Session, SessionStore
from .smaa import aggregate_loss, compute_cai, sample_models
from .statements import statement_from_dict, statement_to_dict
from .tables import PerformanceTable


class TableBody(BaseModel):
    alternatives: list[str]
    columns: list[str]
    values: list[list[float]]


class CreateSessionBody(BaseModel):
    id: str
    hierarchy: dict
    table: TableBody
    classes: dict[str, int]


class PutStatementsBody(BaseModel):
    revision: int
    statements: list[dict]


def create_app(store_dir) -> FastAPI:
    store = SessionStore(store_dir)
    app = FastAPI(title="hisort", description="hierarchical sorting with interacting criteria")
    executor = ThreadPoolExecutor(max_workers=2)
    jobs: dict[str, dict] = {}
    jobs_guard = threading.Lock()
    job_ids = itertools.count(1)

    def load_session(session_id: str) -> Session:
        try:
            return store.load(session_id)
        except UnknownEntity:
            raise HTTPException(404, f"unknown session {session_id!r}")

    def summary(session: Session) -> dict:
        return {
            "id": session.id,
            "revision": session.revision,
            "alternatives": list(session.raw_table.alternatives),
            "nodes": {n: session.spec.classes[n] for n in session.spec.nodes},
            "statements": [
                {"statement": s.__class__.__name__, "timestamp": ts}
                for s, ts in session.statements
            ],
            "documents": [statement_to_dict(s) for s, _ in session.statements],
        }

    def run_job(session_id: str, kind: str, compute) -> dict:
        """Serve a fresh cached result, or start (or poll) the job computing it."""
        session = load_session(session_id)
        cached = session.get_result(kind)
        if cached is not None and cached[1]:
            return {"status": "done", "revision": session.revision, "result": cached[0]}
        with jobs_guard:
            for job_id, job in jobs.items():
                if (job["session"] == session_id and job["kind"] == kind
                        and job["revision"] == session.revision
                        and job["status"] == "pending"):
                    return {"status": "pending", "job": job_id}
            job_id = f"job-{next(job_ids)}"
            jobs[job_id] = {"status": "pending", "session": session_id, "kind": kind,
                            "revision": session.revision, "result": None, "error": None}

        def work():
            try:
                result = compute(session)
            except HisortError as exc:
                with jobs_guard:
                    jobs[job_id].update(status="failed",
                                        error={"error": type(exc).__name__,
                                               "message": str(exc)})
                return
            with store.lock(session_id):
                fresh = store.load(session_id)
                if fresh.revision == session.revision:
                    fresh.store_result(kind, result)
                    store.save(fresh)
            with jobs_guard:
                jobs[job_id].update(status="done", result=result)

        executor.submit(work)
        return {"status": "pending", "job": job_id}

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        if store.exists(body.id):
            raise HTTPException(409, f"session {body.id!r} already exists")
        try:
            session = Session(
                body.id,
                CriterionHierarchy.from_dict(body.hierarchy),
                PerformanceTable(tuple(body.table.alternatives),
                                 tuple(body.table.columns),
                                 np.array(body.table.values)),
                SortingSpec(body.classes),
            )
        except (HisortError, ValueError) as exc:
            raise HTTPException(422, str(exc))
        with store.lock(body.id):
            store.save(session)
        return summary(session)

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": store.ids()}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return summary(load_session(session_id))

    @app.put("/sessions/{session_id}/statements")
    def put_statements(session_id: str, body: PutStatementsBody):
        with store.lock(session_id):
            session = load_session(session_id)
            if body.revision != session.revision:
                raise HTTPException(
                    409, f"revision {body.revision} is stale (current {session.revision})"
                )
            try:
                statements = [statement_from_dict(d) for d in body.statements]
                session.statements = []
                for s in statements:
                    session.add_statement(s)
                check = session.constraint_system().check_compatibility()
            except (HisortError, ValueError, TypeError) as exc:
                raise HTTPException(422, str(exc))
            session.store_result("compatibility", {
                "compatible": check.compatible, "eps_star": check.epsilon_star,
            })
            store.save(session)
        return {"revision": session.revision, "compatible": check.compatible,
                "eps_star": check.epsilon_star}

    @app.get("/sessions/{session_id}/compatibility")
    def get_compatibility(session_id: str):
        session = load_session(session_id)
        cached = session.get_result("compatibility")
        if cached is not None and cached[1]:
            return {"revision": session.revision, **cached[0]}
        check = session.constraint_system().check_compatibility()
        result = {"compatible": check.compatible, "eps_star": check.epsilon_star}
        with store.lock(session_id):
            fresh = store.load(session_id)
            if fresh.revision == session.revision:
                fresh.store_result("compatibility", result)
                store.save(fresh)
        return {"revision": session.revision, **result}

    @app.get("/sessions/{session_id}/ror")
    def get_ror(session_id: str):
        return run_job(session_id, "ror",
                       lambda s: assignment_report(s.constraint_system()).to_dict())

    @app.get("/sessions/{session_id}/minimal-sets")
    def get_minimal_sets(session_id: str):
        return run_job(session_id, "minimal-sets",
                       lambda s: enumerate_minimal_sets(s.constraint_system()).to_dict())

    @app.get("/sessions/{session_id}/cai")
    def get_cai(session_id: str, n: int, seed: int):
        kind = f"cai:{n}:{seed}"
        return run_job(
            session_id, kind,
            lambda s: compute_cai(sample_models(s.constraint_system(), n, seed)).to_dict(),
        )

    @app.get("/sessions/{session_id}/aggregate")
    def get_aggregate(session_id: str, node: str, n: int, seed: int, d: str = "unit"):
        kind = f"aggregate:{node}:{d}:{n}:{seed}"

        def compute(s: Session):
            cai = compute_cai(sample_models(s.constraint_system(), n, seed), nodes=(node,))
            return aggregate_loss(cai, node, d).to_dict()

        return run_job(session_id, kind, compute)

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        with jobs_guard:
            job = jobs.get(job_id)
            if job is None:
                raise HTTPException(404, f"unknown job {job_id!r}")
            return {"status": job["status"], "result": job["result"],
                    "error": job["error"], "revision": job["revision"]}

    return app
