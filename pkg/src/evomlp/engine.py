"""Generation loop shared by the three optimizers.

Each generation is a serial snapshot phase (global best, population
statistics), a parallel per-member phase (operator application plus fitness
evaluation, each member on its own random stream), and a serial reduce phase
that commits results in member-index order. That structure makes runs
bit-reproducible for a given (config, dataset, seed) regardless of worker
count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import Dataset
from .de import DeParams, binomial_crossover, de_select, donor, draw_distinct_indices, min_population
from .ga import GaParams, ga_crossover, mutate_interchange, mutate_substitution, select_replace
from .ga import GaMutation
from .mlp import Topology, genome_length, predict_batch
from .pso import Particle, PsoParams, pso_post_evaluate, pso_update
from .rng import Purpose, stream
from .trace import TraceEvent, fit_pca, project


class StopStatistic(str, Enum):
    BEST = "best"
    WORST = "worst"
    MEAN = "mean"


@dataclass(frozen=True)
class StoppingRule:
    statistic: StopStatistic = StopStatistic.BEST
    threshold: float = 1.0  # minimum satisfactory fitness K
    max_iterations: int = 200

    def validate(self) -> list[str]:
        problems = []
        if not 0.0 < self.threshold <= 1.0:
            problems.append(f"stopping threshold K must be in (0,1], got {self.threshold}")
        if self.max_iterations < 0:
            problems.append(f"max_iterations must be >= 0, got {self.max_iterations}")
        return problems


@dataclass(frozen=True)
class RunConfig:
    params: PsoParams | DeParams | GaParams
    topology: Topology
    population_size: int = 50
    stopping: StoppingRule = StoppingRule()
    seed: int = 0
    workers: int = 1
    init_range: tuple[float, float] = (-1.0, 1.0)

    @property
    def algorithm(self) -> str:
        if isinstance(self.params, PsoParams):
            return "pso"
        if isinstance(self.params, DeParams):
            return "de"
        return "ga"

    def validate(self) -> list[str]:
        problems = self.params.validate()
        problems.extend(self.stopping.validate())
        if self.population_size < 4:
            problems.append(f"population size must be >= 4, got {self.population_size}")
        if isinstance(self.params, DeParams):
            needed = min_population(self.params.strategy)
            if self.population_size < needed:
                problems.append(
                    f"strategy {self.params.strategy.value} needs a population of at "
                    f"least {needed}, got {self.population_size}"
                )
        if self.workers < 1:
            problems.append(f"workers must be >= 1, got {self.workers}")
        low, high = self.init_range
        if not (np.isfinite(low) and np.isfinite(high) and low < high):
            problems.append(f"init_range must satisfy low < high, got {self.init_range}")
        return problems


@dataclass
class Population:
    """Current members plus the best-so-far archive (never reinserted)."""

    members: list  # np.ndarray genomes, or Particle for PSO
    fitness: np.ndarray
    generation: int
    best_genome: np.ndarray
    best_fitness: float

    @property
    def size(self) -> int:
        return len(self.members)

    def genome_of(self, i: int) -> np.ndarray:
        member = self.members[i]
        return member.position if isinstance(member, Particle) else member


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    best: float  # best-so-far archive fitness
    worst: float  # worst of the current population
    mean: float


@dataclass
class RunResult:
    best_genome: np.ndarray
    best_fitness: float
    history: list[GenerationStats]
    generations: int
    stopped_by: str  # "K" or "Tmax"
    n_evaluations: int = 0


def evaluate_fitness(genome: np.ndarray, topology: Topology, dataset: Dataset) -> float:
    """Classification accuracy of the genome's network on the dataset."""
    if dataset.n_features != topology.input_dim:
        raise ValueError(
            f"dataset has {dataset.n_features} features, topology expects {topology.input_dim}"
        )
    predictions = predict_batch(topology, genome, dataset.features)
    return float(np.mean(predictions == dataset.labels))


def _statistic(population: Population, rule: StoppingRule) -> float:
    if rule.statistic is StopStatistic.BEST:
        return population.best_fitness
    if rule.statistic is StopStatistic.WORST:
        return float(population.fitness.min())
    return float(population.fitness.mean())


def should_stop(population: Population, rule: StoppingRule) -> bool:
    """True when the chosen fitness statistic reaches K or the iteration cap hits."""
    return _statistic(population, rule) >= rule.threshold or (
        population.generation >= rule.max_iterations
    )


def init_population(config: RunConfig, dataset: Dataset) -> Population:
    """Uniform random members in init_range, evaluated once, archive seeded."""
    problems = config.validate()
    if problems:
        raise ValueError("; ".join(problems))
    low, high = config.init_range
    g_len = genome_length(config.topology)
    is_pso = isinstance(config.params, PsoParams)
    vel_cap = (high - low) / 4.0

    members = []
    fitness = np.empty(config.population_size)
    for i in range(config.population_size):
        rng = stream(config.seed, 0, i, Purpose.INIT)
        position = rng.uniform(low, high, g_len)
        fitness[i] = evaluate_fitness(position, config.topology, dataset)
        if is_pso:
            velocity = rng.uniform(-vel_cap, vel_cap, g_len)
            members.append(
                Particle(
                    position=position,
                    velocity=velocity,
                    personal_best=position,
                    personal_best_fitness=float(fitness[i]),
                    relative_improvement=0.0,
                )
            )
        else:
            members.append(position)

    best_i = int(np.argmax(fitness))
    best_genome = members[best_i].position if is_pso else members[best_i]
    return Population(
        members=members,
        fitness=fitness,
        generation=0,
        best_genome=best_genome.copy(),
        best_fitness=float(fitness[best_i]),
    )


def _step_pso(population: Population, config: RunConfig, dataset: Dataset, mapper):
    t = population.generation
    t_max = config.stopping.max_iterations
    global_best = population.best_genome
    params = config.params

    def work(i: int):
        rng = stream(config.seed, t, i, Purpose.OPERATOR)
        moved = pso_update(population.members[i], global_best, params, t, t_max, rng)
        return moved, evaluate_fitness(moved.position, config.topology, dataset)

    members, fitness, extras = [], np.empty(population.size), []
    for i, (moved, fit) in enumerate(mapper(work, range(population.size))):
        committed = pso_post_evaluate(moved, fit)
        members.append(committed)
        fitness[i] = fit
        extras.append(committed.personal_best_fitness)
    return members, fitness, extras


def _step_de(population: Population, config: RunConfig, dataset: Dataset, mapper):
    t = population.generation
    genomes = population.members
    global_best = population.best_genome
    params = config.params

    def work(i: int):
        rng = stream(config.seed, t, i, Purpose.OPERATOR)
        donor_vec = donor(params.strategy, genomes, i, global_best, params.f_scale, rng)
        trial = binomial_crossover(genomes[i], donor_vec, params.cr, rng)
        return trial, evaluate_fitness(trial, config.topology, dataset)

    members, fitness, extras = [], np.empty(population.size), []
    for i, (trial, trial_fit) in enumerate(mapper(work, range(population.size))):
        survivor, replaced = de_select(genomes[i], trial, float(population.fitness[i]), trial_fit)
        members.append(survivor)
        fitness[i] = trial_fit if replaced else population.fitness[i]
        extras.append(replaced)
    return members, fitness, extras


def _step_ga(population: Population, config: RunConfig, dataset: Dataset, mapper):
    t = population.generation
    genomes = population.members
    fitness_snapshot = population.fitness
    stacked = np.stack(genomes)
    pop_min = float(stacked.min())
    pop_max = float(stacked.max())
    low, high = config.init_range
    params = config.params
    n = population.size

    def work(i: int):
        rng = stream(config.seed, t, i, Purpose.OPERATOR)
        replaced = select_replace(i, fitness_snapshot, params, rng)
        child = rng.uniform(low, high, genomes[i].shape[0]) if replaced else genomes[i]
        partner = draw_distinct_indices(rng, n, 1, i)[0]
        child = ga_crossover(child, genomes[partner], params.cr, rng)
        if params.mutation is GaMutation.SUBSTITUTION:
            child = mutate_substitution(child, params.p_m, pop_min, pop_max, rng)
        else:
            child = mutate_interchange(child, params.p_m, rng)
        return child, evaluate_fitness(child, config.topology, dataset), replaced

    members, fitness, extras = [], np.empty(n), []
    for i, (child, fit, replaced) in enumerate(mapper(work, range(n))):
        members.append(child)
        fitness[i] = fit
        extras.append(replaced)
    return members, fitness, extras


_STEPPERS = {PsoParams: _step_pso, DeParams: _step_de, GaParams: _step_ga}


def _emit_generation(sink, config: RunConfig, population: Population, basis, extras) -> None:
    is_pso = isinstance(config.params, PsoParams)
    for i in range(population.size):
        x, y = project(basis, population.genome_of(i))
        if is_pso:
            event = TraceEvent(
                population.generation, i, x, y, float(population.fitness[i]),
                personal_best_fitness=float(extras[i]),
            )
        else:
            event = TraceEvent(
                population.generation, i, x, y, float(population.fitness[i]),
                replaced=bool(extras[i]),
            )
        sink.emit(event)
    sink.flush()


def run(config: RunConfig, dataset: Dataset, trace_sink=None, progress=None) -> RunResult:
    """Run generations until the stopping rule fires; returns the archive best
    and per-generation fitness statistics. ``progress`` is called with each
    GenerationStats as it is produced."""
    population = init_population(config, dataset)
    n_evaluations = population.size
    history = [
        GenerationStats(
            0,
            population.best_fitness,
            float(population.fitness.min()),
            float(population.fitness.mean()),
        )
    ]
    if progress is not None:
        progress(history[0])

    basis = None
    if trace_sink is not None:
        basis = fit_pca(np.stack([population.genome_of(i) for i in range(population.size)]))
        init_extras = (
            [m.personal_best_fitness for m in population.members]
            if isinstance(config.params, PsoParams)
            else [False] * population.size
        )
        _emit_generation(trace_sink, config, population, basis, init_extras)

    step = _STEPPERS[type(config.params)]
    pool = ThreadPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    mapper = (
        (lambda fn, items: list(pool.map(fn, items)))
        if pool is not None
        else (lambda fn, items: [fn(i) for i in items])
    )
    try:
        while not should_stop(population, config.stopping):
            try:
                members, fitness, extras = step(population, config, dataset, mapper)
            except Exception as exc:
                raise RuntimeError(
                    f"generation {population.generation + 1} failed: {exc}"
                ) from exc
            n_evaluations += population.size

            best_genome = population.best_genome
            best_fitness = population.best_fitness
            best_i = int(np.argmax(fitness))
            if fitness[best_i] > best_fitness:
                best_fitness = float(fitness[best_i])
                member = members[best_i]
                best_genome = (
                    member.position if isinstance(member, Particle) else member
                ).copy()

            population = Population(
                members=members,
                fitness=fitness,
                generation=population.generation + 1,
                best_genome=best_genome,
                best_fitness=best_fitness,
            )
            history.append(
                GenerationStats(
                    population.generation,
                    population.best_fitness,
                    float(population.fitness.min()),
                    float(population.fitness.mean()),
                )
            )
            if progress is not None:
                progress(history[-1])
            if trace_sink is not None:
                _emit_generation(trace_sink, config, population, basis, extras)
    finally:
        if pool is not None:
            pool.shutdown(wait=True)

    stopped_by = "K" if _statistic(population, config.stopping) >= config.stopping.threshold else "Tmax"
    return RunResult(
        best_genome=population.best_genome,
        best_fitness=population.best_fitness,
        history=history,
        generations=population.generation,
        stopped_by=stopped_by,
        n_evaluations=n_evaluations,
    )
