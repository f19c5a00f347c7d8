"""Trained-model persistence and standalone source-code export.

A trained classifier (topology, weights, fitted input transform, class names)
can be saved as a JSON model file or emitted as a single dependency-free
source file in Python, Java, or JavaScript. Generated files expose
``scores(features)`` and ``predict(features)``, apply the stored input
transform internally (callers pass raw-scale features), and embed every
weight as a shortest-round-trip decimal literal so the constants are
bit-identical across target runtimes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import TransformKind, TransformParams
from .mlp import Activation, Topology, genome_length, unflatten

MODEL_SCHEMA_VERSION = 1


class ModelFormatError(ValueError):
    """Raised when a model file is corrupt or structurally inconsistent."""


class ExportLanguage(str, Enum):
    PYTHON = "python"
    JAVA = "java"
    JAVASCRIPT = "javascript"


EXPORT_FILE_SUFFIX = {
    ExportLanguage.PYTHON: ".py",
    ExportLanguage.JAVA: ".java",
    ExportLanguage.JAVASCRIPT: ".js",
}

JAVA_CLASS_NAME = "MlpClassifier"


@dataclass(frozen=True)
class TrainingMetadata:
    algorithm: str
    seed: int
    fitness: float
    generations: int


@dataclass
class TrainedModel:
    topology: Topology
    genome: np.ndarray
    transform_params: TransformParams
    class_names: list[str]
    metadata: TrainingMetadata

    def __post_init__(self):
        self.genome = np.asarray(self.genome, dtype=np.float64)
        expected = genome_length(self.topology)
        if self.genome.shape != (expected,):
            raise ModelFormatError(
                f"genome has {self.genome.shape[0] if self.genome.ndim == 1 else self.genome.shape} "
                f"weights, topology needs {expected}"
            )
        if not np.isfinite(self.genome).all():
            raise ModelFormatError("genome contains non-finite weights")
        if len(self.class_names) != self.topology.output_dim:
            raise ModelFormatError(
                f"{len(self.class_names)} class names for {self.topology.output_dim} outputs"
            )


def model_to_dict(model: TrainedModel) -> dict:
    return {
        "schema_version": MODEL_SCHEMA_VERSION,
        "topology": {
            "input_dim": model.topology.input_dim,
            "hidden_layers": list(model.topology.hidden_layers),
            "output_dim": model.topology.output_dim,
            "activation": model.topology.activation.value,
        },
        "weights": [float(w) for w in model.genome],
        "transform": model.transform_params.to_dict(),
        "classes": list(model.class_names),
        "metadata": {
            "algorithm": model.metadata.algorithm,
            "seed": model.metadata.seed,
            "fitness": model.metadata.fitness,
            "generations": model.metadata.generations,
        },
    }


def model_from_dict(doc: dict) -> TrainedModel:
    try:
        version = doc["schema_version"]
        if version != MODEL_SCHEMA_VERSION:
            raise ModelFormatError(
                f"unsupported schema_version {version!r}, expected {MODEL_SCHEMA_VERSION}"
            )
        topo_doc = doc["topology"]
        topology = Topology(
            input_dim=int(topo_doc["input_dim"]),
            hidden_layers=tuple(int(h) for h in topo_doc["hidden_layers"]),
            output_dim=int(topo_doc["output_dim"]),
            activation=Activation(topo_doc["activation"]),
        )
        weights = np.asarray(doc["weights"], dtype=np.float64)
        transform = TransformParams.from_dict(doc["transform"])
        classes = [str(c) for c in doc["classes"]]
        meta_doc = doc["metadata"]
        metadata = TrainingMetadata(
            algorithm=str(meta_doc["algorithm"]),
            seed=int(meta_doc["seed"]),
            fitness=float(meta_doc["fitness"]),
            generations=int(meta_doc["generations"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"malformed model document: {exc}") from exc
    if transform.kind is not TransformKind.NONE and transform.shift.shape[0] != topology.input_dim:
        raise ModelFormatError(
            f"transform covers {transform.shift.shape[0]} features, topology has {topology.input_dim}"
        )
    return TrainedModel(topology, weights, transform, classes, metadata)


def save_model(model: TrainedModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")


def load_model(path) -> TrainedModel:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ModelFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelFormatError(f"{path}: expected a JSON object at top level")
    return model_from_dict(doc)


def _fmt(value: float) -> str:
    """Shortest decimal literal that round-trips to the same binary64 value;
    valid in Python, Java, and JavaScript alike."""
    return repr(float(value))


def _layer_matrices(model: TrainedModel) -> list[np.ndarray]:
    return unflatten(model.topology, model.genome)


def _header_lines(model: TrainedModel) -> list[str]:
    meta = model.metadata
    topo = model.topology
    hidden = ",".join(str(h) for h in topo.hidden_layers) or "none"
    return [
        "Standalone MLP classifier. No external dependencies.",
        f"Structure: {topo.input_dim} inputs -> hidden [{hidden}] -> "
        f"{topo.output_dim} classes, activation {topo.activation.value}.",
        f"Trained with {meta.algorithm} (seed {meta.seed}); final accuracy "
        f"{_fmt(meta.fitness)} after {meta.generations} generations.",
        "Call predict(features) with raw-scale feature values; the fitted",
        "input transform is applied internally. scores(features) returns the",
        "per-class network outputs.",
    ]


def export_source(model: TrainedModel, target: ExportLanguage) -> str:
    """Render the classifier as a single source file for the target language."""
    target = ExportLanguage(target)
    if target is ExportLanguage.PYTHON:
        return _export_python(model)
    if target is ExportLanguage.JAVA:
        return _export_java(model)
    if target is ExportLanguage.JAVASCRIPT:
        return _export_javascript(model)
    raise ValueError(f"unsupported export target {target!r}")  # pragma: no cover


# ------------------------------------------------------------------ Python

_PY_ACTIVATIONS = {
    Activation.TANH: [
        "def _activate(x):",
        "    q = _E ** (-2.0 * (x if x >= 0.0 else -x))",
        "    t = (1.0 - q) / (1.0 + q)",
        "    return t if x >= 0.0 else -t",
    ],
    Activation.LOGISTIC: [
        "def _activate(x):",
        "    q = _E ** (-(x if x >= 0.0 else -x))",
        "    return 1.0 / (1.0 + q) if x >= 0.0 else q / (1.0 + q)",
    ],
    Activation.LINEAR: [
        "def _activate(x):",
        "    return x",
    ],
}


def _py_vector(values) -> str:
    return "[" + ", ".join(_fmt(v) for v in values) + "]"


def _export_python(model: TrainedModel) -> str:
    lines = ['"""']
    lines.extend(_header_lines(model))
    lines.append('"""')
    lines.append("")
    if model.topology.activation is not Activation.LINEAR:
        lines.append("_E = 2.718281828459045")
        lines.append("")
    lines.append("_WEIGHTS = [")
    for mat in _layer_matrices(model):
        lines.append("    [")
        for row in mat:
            lines.append(f"        {_py_vector(row)},")
        lines.append("    ],")
    lines.append("]")
    lines.append("")
    lines.append("_CLASSES = [" + ", ".join(json.dumps(c) for c in model.class_names) + "]")
    params = model.transform_params
    if params.kind is not TransformKind.NONE:
        lines.append("")
        lines.append(f"_SHIFT = {_py_vector(params.shift)}")
        lines.append(f"_SCALE = {_py_vector(params.scale)}")
    lines.append("")
    lines.append("")
    lines.extend(_PY_ACTIVATIONS[model.topology.activation])
    lines.append("")
    lines.append("")
    lines.append("def _transform(features):")
    lines.append(f"    if len(features) != {model.topology.input_dim}:")
    lines.append(
        f"        raise ValueError('expected {model.topology.input_dim} features, got %d'"
        " % len(features))"
    )
    if params.kind is TransformKind.NONE:
        lines.append("    return [float(v) for v in features]")
    else:
        lines.append(
            "    return [(float(v) - s) / c for v, s, c in zip(features, _SHIFT, _SCALE)]"
        )
    lines.append("")
    lines.append("")
    lines.append("def scores(features):")
    lines.append('    """Per-class network outputs for one feature vector."""')
    lines.append("    x = _transform(features)")
    lines.append("    for layer in _WEIGHTS:")
    lines.append("        x = [")
    lines.append("            _activate(sum(w * v for w, v in zip(row, x)) + row[-1])")
    lines.append("            for row in layer")
    lines.append("        ]")
    lines.append("    return x")
    lines.append("")
    lines.append("")
    lines.append("def predict(features):")
    lines.append('    """Class name with the highest score; ties go to the lowest index."""')
    lines.append("    s = scores(features)")
    lines.append("    best = 0")
    lines.append("    for i in range(1, len(s)):")
    lines.append("        if s[i] > s[best]:")
    lines.append("            best = i")
    lines.append("    return _CLASSES[best]")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ Java

_JAVA_ACTIVATIONS = {
    Activation.TANH: ["        return Math.tanh(x);"],
    Activation.LOGISTIC: [
        "        if (x >= 0.0) {",
        "            return 1.0 / (1.0 + Math.exp(-x));",
        "        }",
        "        double q = Math.exp(x);",
        "        return q / (1.0 + q);",
    ],
    Activation.LINEAR: ["        return x;"],
}


def _java_string(value: str) -> str:
    # JSON's ASCII escapes are a subset of Java string-literal escapes
    return json.dumps(value, ensure_ascii=True)


def _export_java(model: TrainedModel) -> str:
    d = model.topology.input_dim
    lines = ["/*"]
    lines.extend(" * " + line for line in _header_lines(model))
    lines.append(f" * Save as {JAVA_CLASS_NAME}.java; the class name must match the file name.")
    lines.append(" */")
    lines.append(f"public final class {JAVA_CLASS_NAME} {{")
    lines.append("")
    lines.append("    private static final double[][][] WEIGHTS = {")
    for mat in _layer_matrices(model):
        lines.append("        {")
        for row in mat:
            lines.append("            {" + ", ".join(_fmt(v) for v in row) + "},")
        lines.append("        },")
    lines.append("    };")
    lines.append("")
    lines.append(
        "    private static final String[] CLASSES = {"
        + ", ".join(_java_string(c) for c in model.class_names)
        + "};"
    )
    params = model.transform_params
    if params.kind is not TransformKind.NONE:
        lines.append("")
        lines.append(
            "    private static final double[] SHIFT = {"
            + ", ".join(_fmt(v) for v in params.shift)
            + "};"
        )
        lines.append(
            "    private static final double[] SCALE = {"
            + ", ".join(_fmt(v) for v in params.scale)
            + "};"
        )
    lines.append("")
    lines.append(f"    private {JAVA_CLASS_NAME}() {{}}")
    lines.append("")
    lines.append("    /** Per-class network outputs for one raw-scale feature vector. */")
    lines.append("    public static double[] scores(double[] features) {")
    lines.append("        double[] x = transform(features);")
    lines.append("        for (double[][] layer : WEIGHTS) {")
    lines.append("            double[] next = new double[layer.length];")
    lines.append("            for (int j = 0; j < layer.length; j++) {")
    lines.append("                double sum = layer[j][x.length];")
    lines.append("                for (int k = 0; k < x.length; k++) {")
    lines.append("                    sum += layer[j][k] * x[k];")
    lines.append("                }")
    lines.append("                next[j] = activate(sum);")
    lines.append("            }")
    lines.append("            x = next;")
    lines.append("        }")
    lines.append("        return x;")
    lines.append("    }")
    lines.append("")
    lines.append("    /** Class name with the highest score; ties go to the lowest index. */")
    lines.append("    public static String predict(double[] features) {")
    lines.append("        double[] s = scores(features);")
    lines.append("        int best = 0;")
    lines.append("        for (int i = 1; i < s.length; i++) {")
    lines.append("            if (s[i] > s[best]) {")
    lines.append("                best = i;")
    lines.append("            }")
    lines.append("        }")
    lines.append("        return CLASSES[best];")
    lines.append("    }")
    lines.append("")
    lines.append("    private static double activate(double x) {")
    lines.extend(_JAVA_ACTIVATIONS[model.topology.activation])
    lines.append("    }")
    lines.append("")
    lines.append("    private static double[] transform(double[] features) {")
    lines.append(f"        if (features.length != {d}) {{")
    lines.append(
        f'            throw new IllegalArgumentException("expected {d} features, got "'
        " + features.length);"
    )
    lines.append("        }")
    lines.append(f"        double[] out = new double[{d}];")
    if params.kind is TransformKind.NONE:
        lines.append(f"        System.arraycopy(features, 0, out, 0, {d});")
    else:
        lines.append(f"        for (int i = 0; i < {d}; i++) {{")
        lines.append("            out[i] = (features[i] - SHIFT[i]) / SCALE[i];")
        lines.append("        }")
    lines.append("        return out;")
    lines.append("    }")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ JavaScript

_JS_ACTIVATIONS = {
    Activation.TANH: ["  return Math.tanh(x);"],
    Activation.LOGISTIC: [
        "  if (x >= 0) {",
        "    return 1 / (1 + Math.exp(-x));",
        "  }",
        "  const q = Math.exp(x);",
        "  return q / (1 + q);",
    ],
    Activation.LINEAR: ["  return x;"],
}


def _export_javascript(model: TrainedModel) -> str:
    d = model.topology.input_dim
    lines = ["/*"]
    lines.extend(" * " + line for line in _header_lines(model))
    lines.append(" */")
    lines.append("")
    lines.append("const WEIGHTS = [")
    for mat in _layer_matrices(model):
        lines.append("  [")
        for row in mat:
            lines.append("    [" + ", ".join(_fmt(v) for v in row) + "],")
        lines.append("  ],")
    lines.append("];")
    lines.append("")
    lines.append("const CLASSES = [" + ", ".join(json.dumps(c) for c in model.class_names) + "];")
    params = model.transform_params
    if params.kind is not TransformKind.NONE:
        lines.append("")
        lines.append("const SHIFT = [" + ", ".join(_fmt(v) for v in params.shift) + "];")
        lines.append("const SCALE = [" + ", ".join(_fmt(v) for v in params.scale) + "];")
    lines.append("")
    lines.append("function activate(x) {")
    lines.extend(_JS_ACTIVATIONS[model.topology.activation])
    lines.append("}")
    lines.append("")
    lines.append("function transform(features) {")
    lines.append(f"  if (features.length !== {d}) {{")
    lines.append(
        f"    throw new Error('expected {d} features, got ' + features.length);"
    )
    lines.append("  }")
    if params.kind is TransformKind.NONE:
        lines.append("  return features.map(Number);")
    else:
        lines.append("  return features.map((v, i) => (Number(v) - SHIFT[i]) / SCALE[i]);")
    lines.append("}")
    lines.append("")
    lines.append("// Per-class network outputs for one raw-scale feature vector.")
    lines.append("function scores(features) {")
    lines.append("  let x = transform(features);")
    lines.append("  for (const layer of WEIGHTS) {")
    lines.append("    x = layer.map((row) => {")
    lines.append("      let sum = row[x.length];")
    lines.append("      for (let k = 0; k < x.length; k++) {")
    lines.append("        sum += row[k] * x[k];")
    lines.append("      }")
    lines.append("      return activate(sum);")
    lines.append("    });")
    lines.append("  }")
    lines.append("  return x;")
    lines.append("}")
    lines.append("")
    lines.append("// Class name with the highest score; ties go to the lowest index.")
    lines.append("function predict(features) {")
    lines.append("  const s = scores(features);")
    lines.append("  let best = 0;")
    lines.append("  for (let i = 1; i < s.length; i++) {")
    lines.append("    if (s[i] > s[best]) {")
    lines.append("      best = i;")
    lines.append("    }")
    lines.append("  }")
    lines.append("  return CLASSES[best];")
    lines.append("}")
    lines.append("")
    lines.append("module.exports = { scores, predict };")
    return "\n".join(lines) + "\n"
