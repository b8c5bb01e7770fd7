"""HTTP service: one-shot clustering, stream generation and live sessions.

A session owns an evolving graph plus its carried partition; posting a
change step re-clusters locally and returns the updated communities.
Sessions live in process memory and are mutated under a per-session lock.
"""

from __future__ import annotations

import io
import math
import threading
import uuid
from dataclasses import dataclass, field
from random import Random

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from ..dynamic import DynamicState, evaluate, noise_filter, run_dynamic_step
from ..engine import Objective, SweepConfig, run_static
from ..errors import DynCommError
from ..generator import GeneratorConfig, generate_dyn_graph, varied_step_specs
from ..graph import ChangeSet, Graph, add, remove, reweight, save_stream
from . import models


@dataclass
class Session:
    state: DynamicState
    objective: Objective
    delete_range: int | None
    min_cluster_size: int
    seed: int
    lock: threading.Lock = field(default_factory=threading.Lock)


def _build_graph(model: models.GraphModel) -> Graph:
    g = Graph(model.nodes)
    for e in model.edges:
        g.add_edge(e.u, e.v, e.w)
    return g


def _partition_summary(state: DynamicState, min_cluster_size: int) -> models.PartitionSummary:
    labels = noise_filter(state.assignment, min_cluster_size)
    q, s, k = evaluate(state.graph, labels)
    return models.PartitionSummary(assignment=labels, clusters=k, modularity=q, wlogv=s)


def _to_changeset(step_index: int, changes: list[models.ChangeModel]) -> ChangeSet:
    cs = ChangeSet(step_index)
    for ch in changes:
        if ch.op == "add":
            cs.changes.append(add(ch.u, ch.v, ch.w if ch.w is not None else 1.0))
        elif ch.op == "remove":
            cs.changes.append(remove(ch.u, ch.v))
        else:
            if ch.w is None:
                raise HTTPException(status_code=422, detail="reweight change needs a weight")
            cs.changes.append(reweight(ch.u, ch.v, ch.w))
    return cs


def create_app() -> FastAPI:
    app = FastAPI(title="dyncomm", description="dynamic community detection service")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    @app.exception_handler(DynCommError)
    async def domain_error(request: Request, exc: DynCommError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    def _get_session(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")
        return session

    @app.get("/health", response_model=models.HealthResponse)
    def health() -> models.HealthResponse:
        return models.HealthResponse()

    @app.post("/cluster", response_model=models.ClusterResponse)
    def cluster(req: models.ClusterRequest) -> models.ClusterResponse:
        g = _build_graph(req.graph)
        dendro = run_static(g, SweepConfig(Objective(req.objective), req.seed))
        labels = noise_filter(dendro.final_partition, req.min_cluster_size)
        q, s, k = evaluate(g, labels)
        return models.ClusterResponse(
            assignment=labels, clusters=k, modularity=q, wlogv=s, levels=len(dendro.levels)
        )

    @app.post("/generate", response_model=models.GenerateResponse)
    def generate(req: models.GenerateRequest) -> models.GenerateResponse:
        specs = varied_step_specs(req.nodes, req.steps, req.clusters_min, req.clusters_max, Random(req.seed))
        cfg = GeneratorConfig(
            specs,
            m=req.m,
            inter_edges=req.inter_edges,
            intermediate_steps=req.intermediate,
            changes_per_step=req.changes_per_step,
            max_total_steps=req.max_steps,
            rng_seed=req.seed,
        )
        stream, truths = generate_dyn_graph(cfg)
        buf = io.StringIO()
        save_stream(stream, buf)
        return models.GenerateResponse(
            stream=buf.getvalue(),
            ground_truth=truths,
            nodes=stream.initial.n_nodes,
            steps=len(stream.steps),
        )

    @app.post("/sessions", response_model=models.SessionInfo, status_code=201)
    def create_session(req: models.SessionCreateRequest) -> models.SessionInfo:
        g = _build_graph(req.graph)
        dendro = run_static(g, SweepConfig(Objective(req.objective), req.seed))
        session = Session(
            state=DynamicState(g, dendro.final_partition, 0, None),
            objective=Objective(req.objective),
            delete_range=req.delete_range,
            min_cluster_size=req.min_cluster_size,
            seed=req.seed,
        )
        session_id = uuid.uuid4().hex
        with registry_lock:
            sessions[session_id] = session
        return _session_info(session_id, session)

    def _session_info(session_id: str, session: Session) -> models.SessionInfo:
        return models.SessionInfo(
            session_id=session_id,
            step_index=session.state.step_index,
            nodes=session.state.graph.n_nodes,
            edges=session.state.graph.edge_count(),
            objective=session.objective.value,
            delete_range=session.delete_range,
            partition=_partition_summary(session.state, session.min_cluster_size),
        )

    @app.get("/sessions/{session_id}", response_model=models.SessionInfo)
    def session_info(session_id: str) -> models.SessionInfo:
        return _session_info(session_id, _get_session(session_id))

    @app.post("/sessions/{session_id}/steps", response_model=models.StepResponse)
    def session_step(session_id: str, req: models.StepRequest) -> models.StepResponse:
        session = _get_session(session_id)
        with session.lock:
            step_index = session.state.step_index + 1
            cs = _to_changeset(step_index, req.changes)
            r = math.inf if session.delete_range is None else session.delete_range
            sweep = SweepConfig(session.objective, session.seed + step_index)
            _, new_state = run_dynamic_step(session.state, cs, r, sweep, session.min_cluster_size)
            session.state = new_state
            metrics = new_state.metrics
            return models.StepResponse(
                session_id=session_id,
                step_index=new_state.step_index,
                frontier_size=metrics.frontier_size,
                time_s=metrics.time_s,
                partition=_partition_summary(new_state, session.min_cluster_size),
            )

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str) -> None:
        with registry_lock:
            if sessions.pop(session_id, None) is None:
                raise HTTPException(status_code=404, detail=f"no session {session_id!r}")

    return app


app = create_app()
