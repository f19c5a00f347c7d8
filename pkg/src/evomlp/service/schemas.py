"""Request/response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class GenerateDataRequest(BaseModel):
    task: str = Field(description="xor or blobs")
    size: int | None = Field(default=None, ge=2)
    seed: int = 0


class GenerateDataResponse(BaseModel):
    task: str
    rows: int
    csv: str


class TrainRequest(BaseModel):
    config: dict = Field(default_factory=dict, description="same schema as the CLI config file")
    csv: str = Field(description="training data as CSV text with a header row")
    trace: bool = Field(default=False, description="include per-member PCA trace events")


class GenerationStatsModel(BaseModel):
    generation: int
    best: float
    worst: float
    mean: float


class TrainSummary(BaseModel):
    algorithm: str
    best_fitness: float
    generations: int
    stopped_by: str
    n_evaluations: int


class TrainResponse(BaseModel):
    summary: TrainSummary
    history: list[GenerationStatsModel]
    model: dict
    trace: list[dict] | None = None


class PredictRequest(BaseModel):
    model: dict = Field(description="a model document produced by train")
    rows: list[list[float]]


class PredictResponse(BaseModel):
    predictions: list[str]
    scores: list[list[float]]


class ExportRequest(BaseModel):
    model: dict
    language: str = Field(description="python, java, or javascript")


class ExportResponse(BaseModel):
    language: str
    filename: str
    source: str


class ValidationErrorResponse(BaseModel):
    errors: list[str]
