"""HTTP service wrapping the training, prediction, export, and dataset APIs.

Runs each training job synchronously in the request; independent requests can
run concurrently because the engine shares no mutable state between runs.
Domain validation failures return 400 with the full list of problems.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import ConfigError, parse_config
from ..data import DataError, apply_transform, parse_csv_text, preprocess
from ..datasets import generate, to_csv_text
from ..engine import run
from ..export import (
    EXPORT_FILE_SUFFIX,
    JAVA_CLASS_NAME,
    ExportLanguage,
    ModelFormatError,
    TrainedModel,
    TrainingMetadata,
    export_source,
    model_from_dict,
    model_to_dict,
)
from ..mlp import Topology, forward
from ..trace import MemorySink
from .schemas import (
    ExportRequest,
    ExportResponse,
    GenerateDataRequest,
    GenerateDataResponse,
    GenerationStatsModel,
    HealthResponse,
    PredictRequest,
    PredictResponse,
    TrainRequest,
    TrainResponse,
    TrainSummary,
)


def _bad_request(problems: list[str]):
    return HTTPException(status_code=400, detail={"errors": problems})


def create_app() -> FastAPI:
    app = FastAPI(
        title="evomlp",
        description="Train MLP classifiers with particle swarm, differential "
        "evolution, and genetic algorithms.",
        version=__version__,
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/datasets/generate", response_model=GenerateDataResponse)
    def generate_dataset(request: GenerateDataRequest) -> GenerateDataResponse:
        try:
            features, labels = generate(request.task, request.size, request.seed)
        except ValueError as exc:
            raise _bad_request([str(exc)]) from exc
        return GenerateDataResponse(
            task=request.task, rows=len(labels), csv=to_csv_text(features, labels)
        )

    @app.post("/train", response_model=TrainResponse)
    def train(request: TrainRequest) -> TrainResponse:
        try:
            parsed = parse_config(request.config)
        except ConfigError as exc:
            raise _bad_request(exc.problems) from exc
        try:
            table = parse_csv_text(request.csv, parsed.label_column)
            dataset = preprocess(table, parsed.policy)
        except DataError as exc:
            raise _bad_request([str(exc)]) from exc

        problems = []
        if parsed.input_dim is not None and parsed.input_dim != dataset.n_features:
            problems.append(
                f"topology.input_dim is {parsed.input_dim} but the data has "
                f"{dataset.n_features} features"
            )
        if parsed.output_dim is not None and parsed.output_dim != dataset.n_classes:
            problems.append(
                f"topology.output_dim is {parsed.output_dim} but the data has "
                f"{dataset.n_classes} classes"
            )
        if problems:
            raise _bad_request(problems)

        topology = Topology(
            input_dim=dataset.n_features,
            hidden_layers=parsed.hidden_layers,
            output_dim=dataset.n_classes,
            activation=parsed.activation,
        )
        sink = MemorySink() if request.trace else None
        result = run(parsed.run_config(topology), dataset, trace_sink=sink)

        model = TrainedModel(
            topology=topology,
            genome=result.best_genome,
            transform_params=dataset.transform_params,
            class_names=dataset.class_names,
            metadata=TrainingMetadata(
                algorithm=parsed.algorithm,
                seed=parsed.seed,
                fitness=result.best_fitness,
                generations=result.generations,
            ),
        )
        return TrainResponse(
            summary=TrainSummary(
                algorithm=parsed.algorithm,
                best_fitness=result.best_fitness,
                generations=result.generations,
                stopped_by=result.stopped_by,
                n_evaluations=result.n_evaluations,
            ),
            history=[
                GenerationStatsModel(
                    generation=s.generation, best=s.best, worst=s.worst, mean=s.mean
                )
                for s in result.history
            ],
            model=model_to_dict(model),
            trace=[event.to_record() for event in sink.events] if sink else None,
        )

    @app.post("/predict", response_model=PredictResponse)
    def predict(request: PredictRequest) -> PredictResponse:
        try:
            model = model_from_dict(request.model)
        except ModelFormatError as exc:
            raise _bad_request([str(exc)]) from exc
        predictions = []
        scores = []
        for i, row in enumerate(request.rows):
            if len(row) != model.topology.input_dim:
                raise _bad_request(
                    [
                        f"row {i} has {len(row)} features, model expects "
                        f"{model.topology.input_dim}"
                    ]
                )
            transformed = apply_transform(model.transform_params, row)
            outputs = forward(model.topology, model.genome, transformed)
            predictions.append(model.class_names[int(np.argmax(outputs))])
            scores.append([float(v) for v in outputs])
        return PredictResponse(predictions=predictions, scores=scores)

    @app.post("/export", response_model=ExportResponse)
    def export(request: ExportRequest) -> ExportResponse:
        try:
            language = ExportLanguage(request.language)
        except ValueError as exc:
            supported = ", ".join(lang.value for lang in ExportLanguage)
            raise _bad_request(
                [f"unsupported language {request.language!r}; supported: {supported}"]
            ) from exc
        try:
            model = model_from_dict(request.model)
        except ModelFormatError as exc:
            raise _bad_request([str(exc)]) from exc
        filename = (
            f"{JAVA_CLASS_NAME}.java"
            if language is ExportLanguage.JAVA
            else f"classifier{EXPORT_FILE_SUFFIX[language]}"
        )
        return ExportResponse(
            language=language.value, filename=filename, source=export_source(model, language)
        )

    return app


app = create_app()
