import json
import shutil
import subprocess
from pathlib import Path

import numpy as np
import pytest

from evomlp import (
    Activation,
    DeParams,
    RunConfig,
    StoppingRule,
    Topology,
    TransformKind,
    TransformParams,
    apply_transform,
    forward,
    genome_length,
    run,
)
from evomlp.export import (
    JAVA_CLASS_NAME,
    ExportLanguage,
    ModelFormatError,
    TrainedModel,
    TrainingMetadata,
    export_source,
    load_model,
    model_to_dict,
    save_model,
)

GOLDEN_DIR = Path(__file__).parent / "golden"


def linear_model():
    """No hidden layer, integer weights, no transform: exact arithmetic."""
    return TrainedModel(
        topology=Topology(1, (), 2, Activation.LINEAR),
        genome=np.array([1.0, 0.0, -1.0, 0.0]),  # score row 0 = +x, row 1 = -x
        transform_params=TransformParams.identity(),
        class_names=["pos", "neg"],
        metadata=TrainingMetadata("de", 0, 1.0, 0),
    )


def tanh_model():
    """Hidden layer, fractional weights, min-max transform, tricky class names."""
    topo = Topology(2, (3,), 2, Activation.TANH)
    rng = np.random.default_rng(2024)
    return TrainedModel(
        topology=topo,
        genome=rng.normal(0.0, 1.5, genome_length(topo)).round(6),
        transform_params=TransformParams(
            TransformKind.MIN_MAX, np.array([0.0, -1.0]), np.array([10.0, 2.0])
        ),
        class_names=['say "no"', "class\\1"],
        metadata=TrainingMetadata("pso", 7, 0.875, 42),
    )


GOLDEN_CASES = [
    ("linear", linear_model, ExportLanguage.PYTHON, "linear_classifier.py"),
    ("linear", linear_model, ExportLanguage.JAVA, "LinearMlpClassifier.java"),
    ("linear", linear_model, ExportLanguage.JAVASCRIPT, "linear_classifier.js"),
    ("tanh", tanh_model, ExportLanguage.PYTHON, "tanh_classifier.py"),
    ("tanh", tanh_model, ExportLanguage.JAVA, "TanhMlpClassifier.java"),
    ("tanh", tanh_model, ExportLanguage.JAVASCRIPT, "tanh_classifier.js"),
]


@pytest.mark.parametrize("name,build,language,filename", GOLDEN_CASES)
def test_export_matches_golden_bytes(name, build, language, filename):
    source = export_source(build(), language)
    golden = (GOLDEN_DIR / filename).read_text(encoding="utf-8")
    assert source == golden


@pytest.mark.parametrize("language", list(ExportLanguage))
def test_export_deterministic(language):
    model = tanh_model()
    assert export_source(model, language) == export_source(model, language)


def exec_generated_python(source):
    namespace = {}
    exec(compile(source, "generated.py", "exec"), namespace)
    return namespace


def test_generated_python_linear_exact():
    model = linear_model()
    module = exec_generated_python(export_source(model, ExportLanguage.PYTHON))
    assert module["scores"]([2.0]) == forward(model.topology, model.genome, [2.0]).tolist()
    assert module["predict"]([2.0]) == "pos"
    assert module["predict"]([-2.0]) == "neg"
    assert module["predict"]([0.0]) == "pos"  # tie goes to the lowest index


def test_generated_python_validates_length():
    module = exec_generated_python(export_source(linear_model(), ExportLanguage.PYTHON))
    with pytest.raises(ValueError):
        module["scores"]([1.0, 2.0])


def trained_xor_model(xor_dataset):
    topo = Topology(2, (4,), 2, Activation.TANH)
    cfg = RunConfig(
        params=DeParams(), topology=topo, population_size=50,
        stopping=StoppingRule(max_iterations=500), seed=1,
    )
    result = run(cfg, xor_dataset)
    return TrainedModel(
        topology=topo,
        genome=result.best_genome,
        transform_params=xor_dataset.transform_params,
        class_names=xor_dataset.class_names,
        metadata=TrainingMetadata("de", 1, result.best_fitness, result.generations),
    )


def _parity_inputs(model, count=100, seed=77):
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, 2.0, (count, model.topology.input_dim))


def _internal_scores(model, rows):
    return np.array(
        [
            forward(model.topology, model.genome, apply_transform(model.transform_params, row))
            for row in rows
        ]
    )


def test_generated_python_parity_on_trained_model(xor_dataset):
    model = trained_xor_model(xor_dataset)
    module = exec_generated_python(export_source(model, ExportLanguage.PYTHON))
    rows = _parity_inputs(model)
    want = _internal_scores(model, rows)
    got = np.array([module["scores"](list(row)) for row in rows])
    assert np.max(np.abs(got - want)) < 1e-9


def test_generated_python_parity_with_transforms():
    model = tanh_model()
    module = exec_generated_python(export_source(model, ExportLanguage.PYTHON))
    rows = _parity_inputs(model, seed=78)
    want = _internal_scores(model, rows)
    got = np.array([module["scores"](list(row)) for row in rows])
    assert np.max(np.abs(got - want)) < 1e-9


@pytest.mark.skipif(shutil.which("node") is None, reason="node not installed")
def test_generated_javascript_parity(tmp_path, xor_dataset):
    model = trained_xor_model(xor_dataset)
    (tmp_path / "classifier.js").write_text(
        export_source(model, ExportLanguage.JAVASCRIPT), encoding="utf-8"
    )
    driver = tmp_path / "driver.js"
    driver.write_text(
        "const c = require('./classifier.js');\n"
        "const rows = JSON.parse(require('fs').readFileSync(process.argv[2], 'utf8'));\n"
        "console.log(JSON.stringify({s: rows.map((r) => c.scores(r)),"
        " p: rows.map((r) => c.predict(r))}));\n",
        encoding="utf-8",
    )
    rows = _parity_inputs(model)
    rows_file = tmp_path / "rows.json"
    rows_file.write_text(json.dumps(rows.tolist()), encoding="utf-8")
    proc = subprocess.run(
        ["node", str(driver), str(rows_file)], capture_output=True, text=True, cwd=tmp_path
    )
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    want = _internal_scores(model, rows)
    assert np.max(np.abs(np.array(payload["s"]) - want)) < 1e-9
    internal_names = [
        model.class_names[int(np.argmax(scores_row))] for scores_row in want
    ]
    assert payload["p"] == internal_names


@pytest.mark.skipif(shutil.which("javac") is None, reason="javac not installed")
def test_generated_java_compiles_and_agrees(tmp_path, xor_dataset):
    model = trained_xor_model(xor_dataset)
    java_file = tmp_path / f"{JAVA_CLASS_NAME}.java"
    java_file.write_text(export_source(model, ExportLanguage.JAVA), encoding="utf-8")
    compile_proc = subprocess.run(
        ["javac", str(java_file)], capture_output=True, text=True, cwd=tmp_path
    )
    assert compile_proc.returncode == 0, compile_proc.stderr

    rows = _parity_inputs(model, count=25)
    main = tmp_path / "ParityMain.java"
    row_literals = ",".join(
        "{" + ",".join(repr(float(v)) for v in row) + "}" for row in rows
    )
    main.write_text(
        "public final class ParityMain {\n"
        "    public static void main(String[] args) {\n"
        f"        double[][] rows = {{{row_literals}}};\n"
        "        for (double[] row : rows) {\n"
        f"            double[] s = {JAVA_CLASS_NAME}.scores(row);\n"
        "            StringBuilder sb = new StringBuilder();\n"
        "            for (double v : s) sb.append(v).append(' ');\n"
        "            System.out.println(sb.toString().trim());\n"
        "        }\n"
        "    }\n"
        "}\n",
        encoding="utf-8",
    )
    compile_proc = subprocess.run(
        ["javac", "-cp", str(tmp_path), str(main)], capture_output=True, text=True, cwd=tmp_path
    )
    assert compile_proc.returncode == 0, compile_proc.stderr
    run_proc = subprocess.run(
        ["java", "-cp", str(tmp_path), "ParityMain"], capture_output=True, text=True, cwd=tmp_path
    )
    assert run_proc.returncode == 0, run_proc.stderr
    got = np.array(
        [[float(tok) for tok in line.split()] for line in run_proc.stdout.strip().splitlines()]
    )
    want = _internal_scores(model, rows)
    assert np.max(np.abs(got - want)) < 1e-9


def test_save_load_round_trip(tmp_path):
    model = tanh_model()
    path = tmp_path / "model.json"
    save_model(model, path)
    loaded = load_model(path)
    assert np.array_equal(loaded.genome, model.genome)
    assert loaded.topology == model.topology
    assert loaded.class_names == model.class_names
    assert loaded.metadata == model.metadata
    assert loaded.transform_params.kind == model.transform_params.kind
    assert np.array_equal(loaded.transform_params.shift, model.transform_params.shift)


def test_load_truncated_file_errors(tmp_path):
    model = linear_model()
    path = tmp_path / "model.json"
    save_model(model, path)
    text = path.read_text()
    path.write_text(text[: len(text) // 2])
    with pytest.raises(ModelFormatError):
        load_model(path)


def test_load_wrong_weight_count_errors(tmp_path):
    doc = model_to_dict(linear_model())
    doc["weights"] = doc["weights"][:-1]
    path = tmp_path / "model.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ModelFormatError, match="weights"):
        load_model(path)


def test_load_wrong_schema_version_errors(tmp_path):
    doc = model_to_dict(linear_model())
    doc["schema_version"] = 99
    path = tmp_path / "model.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ModelFormatError, match="schema_version"):
        load_model(path)


def test_model_weights_full_precision(tmp_path):
    topo = Topology(1, (), 2, Activation.LINEAR)
    genome = np.array([1 / 3, np.pi, -np.e, 2**-40])
    model = TrainedModel(
        topo, genome, TransformParams.identity(), ["a", "b"], TrainingMetadata("ga", 0, 0.5, 1)
    )
    path = tmp_path / "model.json"
    save_model(model, path)
    assert np.array_equal(load_model(path).genome, genome)


def test_class_name_table_round_trips_weird_labels():
    model = tanh_model()
    module = exec_generated_python(export_source(model, ExportLanguage.PYTHON))
    predictions = {module["predict"]([1.0, 0.0]), module["predict"]([9.0, -0.5])}
    assert predictions <= set(model.class_names)
