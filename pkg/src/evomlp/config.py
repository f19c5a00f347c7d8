"""JSON run-configuration parsing: defaults, overrides, and exhaustive validation.

Validation never stops at the first problem; every failure in the document is
collected so a user can fix the whole file in one pass. Unknown keys are
rejected at every nesting level.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .data import MissingPolicy, PreprocessPolicy, TransformKind
from .de import DeParams, DeStrategy, min_population
from .engine import RunConfig, StoppingRule, StopStatistic
from .ga import GaMutation, GaParams, GaSelection
from .mlp import Activation, Topology
from .pso import InertiaKind, InertiaSchedule, PsoParams


class ConfigError(ValueError):
    """Raised with the full list of configuration problems."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


DEFAULTS = {
    "algorithm": "de",
    "label_column": "label",
    "np": 50,
    "seed": 0,
    "init_range": (-1.0, 1.0),
    "stopping": {"statistic": "best", "threshold": 1.0, "max_iterations": 200},
    "preprocess": {"missing": "drop_row", "transform": "none"},
    "topology": {"hidden_layers": [], "activation": "tanh"},
    "pso": {"phi_p": 2.0, "phi_g": 2.0, "inertia": {"kind": "linear", "w0": 0.9, "w_t": 0.5}},
    "de": {"strategy": "rand1", "f_scale": 0.8, "cr": 0.9},
    "ga": {
        "selection": "tournament",
        "mutation": "substitution",
        "cr": 0.5,
        "p_m": 0.01,
        "paper_literal_roulette": False,
    },
}

DEFAULT_CONSTANT_INERTIA = 0.729


@dataclass
class ParsedConfig:
    """A validated config document, minus the topology dims that come from data."""

    algorithm: str
    params: PsoParams | DeParams | GaParams
    hidden_layers: tuple[int, ...]
    activation: Activation
    input_dim: int | None
    output_dim: int | None
    population_size: int
    stopping: StoppingRule
    seed: int
    workers: int
    init_range: tuple[float, float]
    policy: PreprocessPolicy
    label_column: str
    trace: str | None

    def run_config(self, topology: Topology) -> RunConfig:
        return RunConfig(
            params=self.params,
            topology=topology,
            population_size=self.population_size,
            stopping=self.stopping,
            seed=self.seed,
            workers=self.workers,
            init_range=self.init_range,
        )


class _Section:
    """Key-checked view over one dict level; records problems instead of raising."""

    def __init__(self, doc: dict, path: str, problems: list[str]):
        self.doc = doc
        self.path = path
        self.problems = problems
        self.seen: set[str] = set()

    def _name(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def error(self, message: str) -> None:
        self.problems.append(message)

    def has(self, key: str) -> bool:
        return key in self.doc

    def take(self, key: str, default=None):
        self.seen.add(key)
        return self.doc.get(key, default)

    def subsection(self, key: str) -> "_Section | None":
        self.seen.add(key)
        value = self.doc.get(key)
        if value is None:
            return _Section({}, self._name(key), self.problems)
        if not isinstance(value, dict):
            self.error(f"{self._name(key)} must be an object, got {type(value).__name__}")
            return None
        return _Section(value, self._name(key), self.problems)

    def number(self, key: str, default=None):
        value = self.take(key, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.error(f"{self._name(key)} must be a number, got {value!r}")
            return default if isinstance(default, (int, float)) else 0.0
        return float(value)

    def integer(self, key: str, default=None):
        value = self.take(key, default)
        if isinstance(value, bool) or not isinstance(value, int):
            self.error(f"{self._name(key)} must be an integer, got {value!r}")
            return default if isinstance(default, int) else 0
        return value

    def boolean(self, key: str, default=False):
        value = self.take(key, default)
        if not isinstance(value, bool):
            self.error(f"{self._name(key)} must be true or false, got {value!r}")
            return default
        return value

    def string(self, key: str, default=None):
        value = self.take(key, default)
        if not isinstance(value, str):
            self.error(f"{self._name(key)} must be a string, got {value!r}")
            return default if isinstance(default, str) else ""
        return value

    def choice(self, key: str, enum_cls, default: str):
        value = self.take(key, default)
        try:
            return enum_cls(value)
        except ValueError:
            allowed = "|".join(e.value for e in enum_cls)
            self.error(f"{self._name(key)} must be one of {allowed}, got {value!r}")
            return enum_cls(default)

    def finish(self) -> None:
        unknown = sorted(set(self.doc) - self.seen)
        for key in unknown:
            self.error(f"unknown key {self._name(key)!r}")


def _parse_topology(section: _Section | None):
    if section is None:
        return (), Activation.TANH, None, None
    raw_hidden = section.take("hidden_layers", DEFAULTS["topology"]["hidden_layers"])
    hidden: tuple[int, ...] = ()
    if not isinstance(raw_hidden, list) or any(
        isinstance(h, bool) or not isinstance(h, int) for h in raw_hidden
    ):
        section.error(
            f"{section.path}.hidden_layers must be a list of integers, got {raw_hidden!r}"
        )
    else:
        hidden = tuple(raw_hidden)
        for h in hidden:
            if h < 1:
                section.error(f"{section.path}.hidden_layers entries must be >= 1, got {h}")
    activation = section.choice("activation", Activation, DEFAULTS["topology"]["activation"])
    input_dim = None
    output_dim = None
    if section.has("input_dim"):
        input_dim = section.integer("input_dim")
        if input_dim < 1:
            section.error(f"{section.path}.input_dim must be >= 1, got {input_dim}")
    else:
        section.seen.add("input_dim")
    if section.has("output_dim"):
        output_dim = section.integer("output_dim")
        if output_dim < 2:
            section.error(f"{section.path}.output_dim must be >= 2, got {output_dim}")
    else:
        section.seen.add("output_dim")
    section.finish()
    return hidden, activation, input_dim, output_dim


def _parse_pso(section: _Section | None) -> PsoParams:
    if section is None:
        return PsoParams()
    defaults = DEFAULTS["pso"]
    phi_p = section.number("phi_p", defaults["phi_p"])
    phi_g = section.number("phi_g", defaults["phi_g"])
    inertia_section = section.subsection("inertia")
    if inertia_section is None:
        schedule = InertiaSchedule(InertiaKind.LINEAR)
    else:
        kind = inertia_section.choice("kind", InertiaKind, defaults["inertia"]["kind"])
        if kind is InertiaKind.CONSTANT:
            w0 = inertia_section.number("w0", DEFAULT_CONSTANT_INERTIA)
            w_t = inertia_section.number("w_t", w0)
        else:
            w0 = inertia_section.number("w0", defaults["inertia"]["w0"])
            w_t = inertia_section.number("w_t", defaults["inertia"]["w_t"])
        inertia_section.finish()
        schedule = InertiaSchedule(kind, w0, w_t)
    params = PsoParams(phi_p=phi_p, phi_g=phi_g, inertia=schedule)
    section.finish()
    for problem in params.validate():
        section.error(f"{section.path}: {problem}")
    return params


def _parse_de(section: _Section | None) -> DeParams:
    if section is None:
        return DeParams()
    defaults = DEFAULTS["de"]
    params = DeParams(
        strategy=section.choice("strategy", DeStrategy, defaults["strategy"]),
        f_scale=section.number("f_scale", defaults["f_scale"]),
        cr=section.number("cr", defaults["cr"]),
    )
    section.finish()
    for problem in params.validate():
        section.error(f"{section.path}: {problem}")
    return params


def _parse_ga(section: _Section | None) -> GaParams:
    if section is None:
        return GaParams()
    defaults = DEFAULTS["ga"]
    params = GaParams(
        selection=section.choice("selection", GaSelection, defaults["selection"]),
        mutation=section.choice("mutation", GaMutation, defaults["mutation"]),
        cr=section.number("cr", defaults["cr"]),
        p_m=section.number("p_m", defaults["p_m"]),
        paper_literal_roulette=section.boolean(
            "paper_literal_roulette", defaults["paper_literal_roulette"]
        ),
    )
    section.finish()
    for problem in params.validate():
        section.error(f"{section.path}: {problem}")
    return params


def parse_config(doc: dict) -> ParsedConfig:
    """Validate a config document, applying defaults; raises ConfigError with
    every problem found."""
    problems: list[str] = []
    if not isinstance(doc, dict):
        raise ConfigError([f"config must be a JSON object, got {type(doc).__name__}"])
    root = _Section(doc, "", problems)

    algorithm_raw = root.take("algorithm", DEFAULTS["algorithm"])
    algorithm = algorithm_raw if algorithm_raw in ("pso", "de", "ga") else DEFAULTS["algorithm"]
    if algorithm_raw not in ("pso", "de", "ga"):
        root.error(f"algorithm must be one of pso|de|ga, got {algorithm_raw!r}")

    label_column = root.string("label_column", DEFAULTS["label_column"])
    population_size = root.integer("np", DEFAULTS["np"])
    if population_size < 4:
        root.error(f"np must be >= 4, got {population_size}")
    seed = root.integer("seed", DEFAULTS["seed"])
    workers = root.integer("workers", os.cpu_count() or 1)
    if workers < 1:
        root.error(f"workers must be >= 1, got {workers}")

    init_raw = root.take("init_range", list(DEFAULTS["init_range"]))
    init_range = DEFAULTS["init_range"]
    if (
        not isinstance(init_raw, (list, tuple))
        or len(init_raw) != 2
        or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in init_raw)
    ):
        root.error(f"init_range must be a [low, high] number pair, got {init_raw!r}")
    elif not init_raw[0] < init_raw[1]:
        root.error(f"init_range must satisfy low < high, got {init_raw!r}")
    else:
        init_range = (float(init_raw[0]), float(init_raw[1]))

    stopping_section = root.subsection("stopping")
    if stopping_section is None:
        stopping = StoppingRule()
    else:
        sdef = DEFAULTS["stopping"]
        statistic = stopping_section.choice("statistic", StopStatistic, sdef["statistic"])
        threshold = stopping_section.number("threshold", sdef["threshold"])
        max_iterations = stopping_section.integer("max_iterations", sdef["max_iterations"])
        stopping_section.finish()
        stopping = StoppingRule(statistic, threshold, max_iterations)
        for problem in stopping.validate():
            root.error(problem)

    preprocess_section = root.subsection("preprocess")
    if preprocess_section is None:
        policy = PreprocessPolicy()
    else:
        pdef = DEFAULTS["preprocess"]
        policy = PreprocessPolicy(
            missing=preprocess_section.choice("missing", MissingPolicy, pdef["missing"]),
            transform=preprocess_section.choice("transform", TransformKind, pdef["transform"]),
        )
        preprocess_section.finish()

    hidden, activation, input_dim, output_dim = _parse_topology(root.subsection("topology"))

    # every provided algorithm section is validated; only the selected one is used
    pso_params = _parse_pso(root.subsection("pso")) if root.has("pso") else PsoParams()
    de_params = _parse_de(root.subsection("de")) if root.has("de") else DeParams()
    ga_params = _parse_ga(root.subsection("ga")) if root.has("ga") else GaParams()
    root.seen.update(("pso", "de", "ga"))
    params = {"pso": pso_params, "de": de_params, "ga": ga_params}[algorithm]

    if algorithm == "de":
        needed = min_population(de_params.strategy)
        if population_size >= 4 and population_size < needed:
            root.error(
                f"strategy {de_params.strategy.value} needs np >= {needed}, got {population_size}"
            )

    trace = root.take("trace")
    if trace is not None and not isinstance(trace, str):
        root.error(f"trace must be a file path string, got {trace!r}")
        trace = None

    root.finish()
    if problems:
        raise ConfigError(problems)

    return ParsedConfig(
        algorithm=algorithm,
        params=params,
        hidden_layers=hidden,
        activation=activation,
        input_dim=input_dim,
        output_dim=output_dim,
        population_size=population_size,
        stopping=stopping,
        seed=seed,
        workers=workers,
        init_range=init_range,
        policy=policy,
        label_column=label_column,
        trace=trace,
    )


def apply_overrides(doc: dict, assignments: list[str]) -> dict:
    """Apply ``--set dotted.key=value`` overrides onto a config document.

    Values parse as JSON when possible and fall back to raw strings, so both
    ``--set de.cr=0.5`` and ``--set label_column=species`` work.
    """
    for assignment in assignments:
        if "=" not in assignment:
            raise ConfigError([f"--set expects key=value, got {assignment!r}"])
        key, _, raw = assignment.partition("=")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = doc
        parts = key.split(".")
        for part in parts[:-1]:
            child = node.get(part)
            if not isinstance(child, dict):
                child = {}
                node[part] = child
            node = child
        node[parts[-1]] = value
    return doc


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError([f"cannot read config {path}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config {path} is not valid JSON: {exc}"]) from exc
