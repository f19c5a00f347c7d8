"""Built-in synthetic classification problems for demos and benchmarks."""

from __future__ import annotations

import numpy as np

XOR_ROWS = ((0.0, 0.0, "0"), (0.0, 1.0, "1"), (1.0, 0.0, "1"), (1.0, 1.0, "0"))
XOR_JITTER_SIGMA = 0.05


def make_xor(size: int = 4, seed: int = 0):
    """The 4 canonical XOR rows, optionally padded with jittered replicas.

    Rows beyond the first 4 cycle through the canonical points with
    label-preserving Gaussian noise (sigma 0.05) on the features.
    Returns (features (N,2), labels list of str).
    """
    if size < 4:
        raise ValueError(f"xor size must be >= 4, got {size}")
    features = np.array([(x, y) for x, y, _ in XOR_ROWS], dtype=np.float64)
    labels = [lab for _, _, lab in XOR_ROWS]
    if size > 4:
        rng = np.random.default_rng(seed)
        extra_feats = []
        for i in range(size - 4):
            base_x, base_y, lab = XOR_ROWS[i % 4]
            extra_feats.append(
                [base_x, base_y] + rng.normal(0.0, XOR_JITTER_SIGMA, 2)
            )
            labels.append(lab)
        features = np.vstack([features, np.asarray(extra_feats)])
    return features, labels


def make_blobs(size: int = 200, seed: int = 0):
    """Two isotropic 2-D Gaussian clusters: means (-2,-2) and (2,2), sigma 1.

    The first half of the rows belongs to class "0", the rest to class "1".
    Returns (features (N,2), labels list of str).
    """
    if size < 2:
        raise ValueError(f"blobs size must be >= 2, got {size}")
    rng = np.random.default_rng(seed)
    n0 = size // 2
    n1 = size - n0
    cluster0 = rng.normal(0.0, 1.0, (n0, 2)) + np.array([-2.0, -2.0])
    cluster1 = rng.normal(0.0, 1.0, (n1, 2)) + np.array([2.0, 2.0])
    features = np.vstack([cluster0, cluster1])
    labels = ["0"] * n0 + ["1"] * n1
    return features, labels


def to_csv_text(features: np.ndarray, labels: list[str], label_column: str = "label") -> str:
    """Serialize a generated problem as CSV text with an x1..xD header."""
    n_feat = features.shape[1]
    header = ",".join([f"x{i + 1}" for i in range(n_feat)] + [label_column])
    lines = [header]
    for row, label in zip(features, labels):
        lines.append(",".join([repr(float(v)) for v in row] + [label]))
    return "\n".join(lines) + "\n"


def generate(task: str, size: int | None, seed: int):
    """Dispatch by task name; returns (features, labels)."""
    if task == "xor":
        return make_xor(4 if size is None else size, seed)
    if task == "blobs":
        return make_blobs(200 if size is None else size, seed)
    raise ValueError(f"unknown task {task!r}, expected 'xor' or 'blobs'")
