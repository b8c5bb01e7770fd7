"""Request and response schemas for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class EdgeModel(BaseModel):
    u: int = Field(ge=0)
    v: int = Field(ge=0)
    w: float = Field(default=1.0, gt=0)


class GraphModel(BaseModel):
    nodes: int = Field(ge=1)
    edges: list[EdgeModel] = Field(default_factory=list)


class ClusterRequest(BaseModel):
    graph: GraphModel
    objective: Literal["modularity", "wlogv"] = "modularity"
    seed: int = 0
    min_cluster_size: int = Field(default=2, ge=1)


class PartitionSummary(BaseModel):
    assignment: list[int]
    clusters: int
    modularity: float
    wlogv: float


class ClusterResponse(PartitionSummary):
    levels: int


class SessionCreateRequest(ClusterRequest):
    # null delete_range means unbounded (full re-cluster each step)
    delete_range: int | None = Field(default=1, ge=0)


class SessionInfo(BaseModel):
    session_id: str
    step_index: int
    nodes: int
    edges: int
    objective: Literal["modularity", "wlogv"]
    delete_range: int | None
    partition: PartitionSummary


class ChangeModel(BaseModel):
    op: Literal["add", "remove", "reweight"]
    u: int = Field(ge=0)
    v: int = Field(ge=0)
    w: float | None = Field(default=None, gt=0)


class StepRequest(BaseModel):
    changes: list[ChangeModel]


class StepResponse(BaseModel):
    session_id: str
    step_index: int
    frontier_size: int
    time_s: float
    partition: PartitionSummary


class GenerateRequest(BaseModel):
    nodes: int = Field(default=100, ge=2)
    clusters_min: int = Field(default=4, ge=1)
    clusters_max: int = Field(default=6, ge=1)
    m: int = Field(default=2, ge=1)
    steps: int = Field(default=2, ge=2)
    intermediate: int | None = Field(default=None, ge=1)
    changes_per_step: int | None = Field(default=None, ge=1)
    inter_edges: int | None = Field(default=None, ge=1)
    max_steps: int | None = Field(default=None, ge=1)
    seed: int = 0


class GenerateResponse(BaseModel):
    stream: str
    ground_truth: dict[int, list[int]]
    nodes: int
    steps: int


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"
