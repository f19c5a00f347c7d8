"""Command-line front door: train, predict, export, gen-data, serve.

A thin wiring layer over the library: it validates inputs (echoing every
failure, not just the first), runs the engine, and serializes results. Exit
codes: 0 success, 2 validation failure, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, DEFAULTS, ParsedConfig, apply_overrides, load_config, parse_config
from .data import DataError, apply_transform, load_csv, preprocess
from .datasets import generate, to_csv_text
from .engine import run
from .export import (
    EXPORT_FILE_SUFFIX,
    ExportLanguage,
    ModelFormatError,
    TrainedModel,
    TrainingMetadata,
    export_source,
    load_model,
    save_model,
)
from .mlp import Topology, forward
from .trace import JsonLinesSink

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_VALIDATION = 2

MODEL_FILENAME = "model.json"
HISTORY_FILENAME = "history.csv"


def _fail_validation(messages: list[str]) -> int:
    for message in messages:
        print(f"error: {message}", file=sys.stderr)
    return EXIT_VALIDATION


def cmd_train(args) -> int:
    try:
        doc = load_config(args.config)
        apply_overrides(doc, args.set or [])
        # flag overrides beat config-file values
        if args.seed is not None:
            doc["seed"] = args.seed
        if args.workers is not None:
            doc["workers"] = args.workers
        if args.trace is not None:
            doc["trace"] = args.trace
        if args.paper_literal_roulette:
            doc.setdefault("ga", {})["paper_literal_roulette"] = True
        parsed = parse_config(doc)
    except ConfigError as exc:
        return _fail_validation(exc.problems)

    try:
        table = load_csv(args.data, parsed.label_column)
        dataset = preprocess(table, parsed.policy)
    except DataError as exc:
        return _fail_validation([str(exc)])

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
        return _fail_validation(problems)

    topology = Topology(
        input_dim=dataset.n_features,
        hidden_layers=parsed.hidden_layers,
        output_dim=dataset.n_classes,
        activation=parsed.activation,
    )
    run_config = parsed.run_config(topology)

    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)

    progress = None
    if not args.quiet:
        def progress(stats):
            print(
                f"gen {stats.generation} best {stats.best!r} worst {stats.worst!r} "
                f"mean {stats.mean!r}",
                file=sys.stderr,
            )

    sink = JsonLinesSink(parsed.trace) if parsed.trace else None
    try:
        result = run(run_config, dataset, trace_sink=sink, progress=progress)
    finally:
        if sink is not None:
            sink.close()

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
    save_model(model, out_dir / MODEL_FILENAME)

    with open(out_dir / HISTORY_FILENAME, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["generation", "best", "worst", "mean"])
        for stats in result.history:
            writer.writerow([stats.generation, repr(stats.best), repr(stats.worst), repr(stats.mean)])

    print(
        f"best_fitness={result.best_fitness!r} generations={result.generations} "
        f"stopped_by={result.stopped_by}"
    )
    return EXIT_OK


def _read_feature_rows(path, expected_dim: int):
    """Feature-only CSV: header plus numeric rows of width expected_dim."""
    rows = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: file is empty, expected a header row")
            if len(header) != expected_dim:
                raise DataError(
                    f"{path}: {len(header)} feature columns, model expects {expected_dim}"
                )
            for row_num, row in enumerate(reader, start=2):
                if len(row) != expected_dim:
                    raise DataError(
                        f"{path}: row {row_num} has {len(row)} cells, expected {expected_dim}"
                    )
                try:
                    rows.append([float(cell) for cell in row])
                except ValueError:
                    raise DataError(
                        f"{path}: row {row_num} contains a non-numeric value"
                    ) from None
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return rows


def cmd_predict(args) -> int:
    try:
        model = load_model(args.model)
        rows = _read_feature_rows(args.data, model.topology.input_dim)
    except (ModelFormatError, DataError) as exc:
        return _fail_validation([str(exc)])
    for row in rows:
        transformed = apply_transform(model.transform_params, row)
        scores = forward(model.topology, model.genome, transformed)
        print(model.class_names[int(np.argmax(scores))])
    return EXIT_OK


def cmd_export(args) -> int:
    try:
        model = load_model(args.model)
    except ModelFormatError as exc:
        return _fail_validation([str(exc)])
    language = ExportLanguage(args.lang)
    source = export_source(model, language)
    out_path = Path(args.output)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(source, encoding="utf-8", newline="\n")
    print(out_path)
    return EXIT_OK


def cmd_gen_data(args) -> int:
    try:
        features, labels = generate(args.task, args.size, args.seed or 0)
    except ValueError as exc:
        return _fail_validation([str(exc)])
    text = to_csv_text(features, labels)
    out_path = Path(args.output)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(text, encoding="utf-8")
    print(out_path)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def _defaults_epilog() -> str:
    return (
        "defaults: np=50, T_max=200, K=1.0 on the best statistic, "
        "init_range=(-1,1), workers=cpu count; "
        "pso: phi_p=phi_g=2.0, linear inertia 0.9->0.5; "
        "de: rand1, F=0.8, CR=0.9; "
        "ga: tournament + substitution, p_m=0.01, CR=0.5. "
        f"Config file keys mirror these sections: {', '.join(sorted(DEFAULTS))}."
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evomlp",
        description="Train MLP classifiers with population-based optimizers "
        "and export them as standalone source code.",
        epilog=_defaults_epilog(),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the random seed")
    common.add_argument("--quiet", action="store_true", help="suppress progress output")

    p_train = sub.add_parser(
        "train",
        parents=[common],
        help="train a classifier from a config file and a CSV dataset",
        epilog=_defaults_epilog(),
    )
    p_train.add_argument("config", help="JSON run configuration")
    p_train.add_argument("data", help="training CSV (header row, label column)")
    p_train.add_argument("output", help="output directory for model.json and history.csv")
    p_train.add_argument("--workers", type=int, default=None, help="parallel evaluation threads")
    p_train.add_argument("--trace", default=None, help="write per-member PCA trace JSON lines here")
    p_train.add_argument(
        "--paper-literal-roulette",
        action="store_true",
        help="use the literal normalized-fitness roulette replacement rule",
    )
    p_train.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override a config value by dotted path, e.g. --set de.cr=0.5",
    )
    p_train.set_defaults(func=cmd_train)

    p_predict = sub.add_parser(
        "predict", parents=[common], help="print the predicted class name for each CSV row"
    )
    p_predict.add_argument("model", help="model.json produced by train")
    p_predict.add_argument("data", help="feature CSV (header row, no label column)")
    p_predict.set_defaults(func=cmd_predict)

    p_export = sub.add_parser(
        "export", parents=[common], help="emit the classifier as standalone source code"
    )
    p_export.add_argument("model", help="model.json produced by train")
    p_export.add_argument(
        "--lang",
        required=True,
        choices=[lang.value for lang in ExportLanguage],
        help="target language",
    )
    p_export.add_argument("output", help="path of the generated source file")
    p_export.set_defaults(func=cmd_export)

    p_gen = sub.add_parser(
        "gen-data", parents=[common], help="write a built-in synthetic dataset as CSV"
    )
    p_gen.add_argument("--task", required=True, choices=["xor", "blobs"], help="problem to generate")
    p_gen.add_argument("output", help="CSV output path")
    p_gen.add_argument(
        "--size",
        type=int,
        default=None,
        help="row count (default: 4 for xor, 200 for blobs); xor rows beyond 4 are jittered",
    )
    p_gen.set_defaults(func=cmd_gen_data)

    p_serve = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DataError, ModelFormatError) as exc:
        return _fail_validation([str(exc)])
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
