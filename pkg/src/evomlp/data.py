"""CSV loading, missing-value handling, feature transforms, and label encoding."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum

import numpy as np


class DataError(ValueError):
    """Raised for malformed input data or degenerate datasets."""


class MissingPolicy(str, Enum):
    DROP_ROW = "drop_row"
    MEAN_IMPUTE = "mean_impute"
    MEDIAN_IMPUTE = "median_impute"


class TransformKind(str, Enum):
    NONE = "none"
    MIN_MAX = "min_max"
    Z_SCORE = "z_score"


@dataclass(frozen=True)
class PreprocessPolicy:
    missing: MissingPolicy = MissingPolicy.DROP_ROW
    transform: TransformKind = TransformKind.NONE


@dataclass
class RawTable:
    """Parsed CSV contents before cleaning.

    Feature cells are floats or None (missing); labels stay strings, with
    None marking an empty label cell.
    """

    feature_names: list[str]
    features: list[list[float | None]]
    labels: list[str | None]
    label_column: str

    @property
    def n_rows(self) -> int:
        return len(self.features)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)


@dataclass(frozen=True)
class TransformParams:
    """Fitted per-feature affine transform, reusable at prediction/export time."""

    kind: TransformKind
    shift: np.ndarray  # min (min_max) or mean (z_score); zeros for none
    scale: np.ndarray  # max-min or stddev; ones for none / zero-range features

    def to_dict(self) -> dict:
        if self.kind is TransformKind.NONE:
            return {"kind": self.kind.value}
        return {
            "kind": self.kind.value,
            "shift": [float(v) for v in self.shift],
            "scale": [float(v) for v in self.scale],
        }

    @staticmethod
    def from_dict(d: dict) -> "TransformParams":
        kind = TransformKind(d["kind"])
        if kind is TransformKind.NONE:
            return TransformParams(kind, np.zeros(0), np.ones(0))
        shift = np.asarray(d["shift"], dtype=np.float64)
        scale = np.asarray(d["scale"], dtype=np.float64)
        if shift.shape != scale.shape:
            raise DataError("transform shift/scale lengths disagree")
        return TransformParams(kind, shift, scale)

    @staticmethod
    def identity() -> "TransformParams":
        return TransformParams(TransformKind.NONE, np.zeros(0), np.ones(0))


@dataclass
class Dataset:
    """Clean training data: finite features, integer labels, fitted transform."""

    features: np.ndarray  # (N, D) float64
    labels: np.ndarray  # (N,) int64, values in [0, C)
    class_names: list[str]
    transform_params: TransformParams

    @property
    def n_rows(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


def _parse_table(reader, label_column: str, source: str) -> RawTable:
    try:
        header = next(reader)
    except StopIteration:
        raise DataError(f"{source}: file is empty, expected a header row") from None
    header = [name.strip() for name in header]
    if label_column not in header:
        raise DataError(f"{source}: label column {label_column!r} not found in header {header}")
    label_idx = header.index(label_column)
    feature_names = [n for i, n in enumerate(header) if i != label_idx]

    features: list[list[float | None]] = []
    labels: list[str | None] = []
    for row_num, row in enumerate(reader, start=2):
        if len(row) != len(header):
            raise DataError(
                f"{source}: row {row_num} has {len(row)} cells, expected {len(header)}"
            )
        feats: list[float | None] = []
        for col_idx, cell in enumerate(row):
            if col_idx == label_idx:
                continue
            cell = cell.strip()
            if cell == "":
                feats.append(None)
                continue
            try:
                feats.append(float(cell))
            except ValueError:
                raise DataError(
                    f"{source}: row {row_num}, column {header[col_idx]!r}: "
                    f"non-numeric feature value {cell!r}"
                ) from None
        label = row[label_idx].strip()
        features.append(feats)
        labels.append(label if label != "" else None)
    return RawTable(feature_names, features, labels, label_column)


def load_csv(path, label_column: str) -> RawTable:
    """Read a header-row CSV into a RawTable.

    Feature cells are parsed as floats eagerly; empty cells become missing.
    Non-numeric feature cells and ragged rows are reported with their row
    number (1-based, counting the header as row 1).
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return _parse_table(csv.reader(fh), label_column, str(path))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def parse_csv_text(text: str, label_column: str, source: str = "csv") -> RawTable:
    """Parse in-memory CSV text; same contract as :func:`load_csv`."""
    return _parse_table(csv.reader(io.StringIO(text)), label_column, source)


def _resolve_missing(table: RawTable, policy: MissingPolicy):
    """Return (feature matrix, label list) with no missing values left."""
    if policy is MissingPolicy.DROP_ROW:
        kept_feats = []
        kept_labels = []
        for feats, label in zip(table.features, table.labels):
            if label is None or any(v is None for v in feats):
                continue
            kept_feats.append(feats)
            kept_labels.append(label)
        if not kept_feats:
            raise DataError("all rows dropped while handling missing values")
        return np.asarray(kept_feats, dtype=np.float64), kept_labels

    # imputation: labels cannot be imputed, so a missing label is an error
    for row_idx, label in enumerate(table.labels):
        if label is None:
            raise DataError(
                f"row {row_idx + 2} has an empty label; imputation applies to "
                f"features only (use drop_row to discard such rows)"
            )
    matrix = np.array(
        [[np.nan if v is None else v for v in feats] for feats in table.features],
        dtype=np.float64,
    )
    for col in range(matrix.shape[1]):
        column = matrix[:, col]
        mask = np.isnan(column)
        if not mask.any():
            continue
        observed = column[~mask]
        if observed.size == 0:
            raise DataError(
                f"feature {table.feature_names[col]!r} has no observed values to impute from"
            )
        fill = float(np.mean(observed)) if policy is MissingPolicy.MEAN_IMPUTE else float(
            np.median(observed)
        )
        column[mask] = fill
    return matrix, list(table.labels)


def _fit_transform(matrix: np.ndarray, kind: TransformKind, feature_names: list[str]):
    """Fit the transform on the cleaned matrix; returns (params, transformed)."""
    if kind is TransformKind.NONE:
        return TransformParams.identity(), matrix
    if kind is TransformKind.MIN_MAX:
        lo = matrix.min(axis=0)
        hi = matrix.max(axis=0)
        span = hi - lo
        # constant feature: everything maps to 0, keep scale 1 to avoid 0/0
        scale = np.where(span == 0.0, 1.0, span)
        params = TransformParams(kind, lo, scale)
        return params, (matrix - lo) / scale
    if kind is TransformKind.Z_SCORE:
        mean = matrix.mean(axis=0)
        std = matrix.std(axis=0)
        zero = np.flatnonzero(std == 0.0)
        if zero.size:
            names = ", ".join(repr(feature_names[i]) for i in zero)
            raise DataError(f"z_score transform hit zero-variance feature(s): {names}")
        params = TransformParams(kind, mean, std)
        return params, (matrix - mean) / std
    raise DataError(f"unknown transform {kind!r}")  # pragma: no cover - closed enum


def preprocess(table: RawTable, policy: PreprocessPolicy) -> Dataset:
    """Resolve missing values, fit and apply the transform, encode labels.

    Class indices follow first appearance in the file so identical CSV bytes
    always produce the same encoding.
    """
    matrix, labels = _resolve_missing(table, policy.missing)
    if matrix.shape[0] < 2:
        raise DataError(f"need at least 2 rows after missing-value handling, have {matrix.shape[0]}")
    if not np.isfinite(matrix).all():
        raise DataError("non-finite feature values after missing-value handling")

    class_names: list[str] = []
    index_of: dict[str, int] = {}
    encoded = np.empty(len(labels), dtype=np.int64)
    for i, label in enumerate(labels):
        if label not in index_of:
            index_of[label] = len(class_names)
            class_names.append(label)
        encoded[i] = index_of[label]
    if len(class_names) < 2:
        raise DataError(f"need at least 2 distinct classes, found {class_names}")

    params, transformed = _fit_transform(matrix, policy.transform, table.feature_names)
    return Dataset(transformed, encoded, class_names, params)


def apply_transform(params: TransformParams, features) -> np.ndarray:
    """Apply a fitted transform to one raw-scale feature vector."""
    x = np.asarray(features, dtype=np.float64)
    if params.kind is TransformKind.NONE:
        return x.copy()
    if x.shape != params.shift.shape:
        raise DataError(
            f"feature vector has shape {x.shape}, transform expects {params.shift.shape}"
        )
    return (x - params.shift) / params.scale
