"""Genetic algorithm operators: replacement selection, partner crossover, two mutations."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class GaSelection(str, Enum):
    ROULETTE = "roulette"  # fitness-proportionate replacement
    TOURNAMENT = "tournament"


class GaMutation(str, Enum):
    SUBSTITUTION = "substitution"
    INTERCHANGE = "interchange"


@dataclass(frozen=True)
class GaParams:
    selection: GaSelection = GaSelection.TOURNAMENT
    mutation: GaMutation = GaMutation.SUBSTITUTION
    cr: float = 0.5
    p_m: float = 0.01
    # literal normalized-fitness replacement probability (see replacement_probability)
    paper_literal_roulette: bool = False

    def validate(self) -> list[str]:
        problems = []
        if not 0.0 < self.cr <= 1.0:
            problems.append(f"CR must be in (0,1], got {self.cr}")
        if not 0.0 <= self.p_m <= 1.0:
            problems.append(f"p_m must be in [0,1], got {self.p_m}")
        return problems


def replacement_probability(
    fitness_i: float, fitness_values, literal: bool = False
) -> float:
    """Probability that individual i is replaced under roulette selection.

    Default is the inverse-fitness rule (sum_f - f_i) / ((NP-1) * sum_f), so
    fitter individuals are less likely to be destroyed. With ``literal=True``
    the plain normalization f_i / sum_f is used instead, which makes the
    fittest individual the most likely to be replaced; it is kept selectable
    for faithfulness experiments. An all-zero fitness sum yields the uniform
    probability 1/NP in both modes.
    """
    values = np.asarray(fitness_values, dtype=np.float64)
    total = float(values.sum())
    n = values.shape[0]
    if total == 0.0:
        return 1.0 / n
    if literal:
        return fitness_i / total
    return (total - fitness_i) / ((n - 1) * total)


def select_replace(
    individual_index: int,
    fitness_values,
    params: GaParams,
    rng: np.random.Generator,
) -> bool:
    """Decide whether individual i gets replaced by a fresh random genome.

    Roulette: replace when rand(0,1) < replacement probability. Tournament:
    draw one uniform opponent (never i itself) and replace when the opponent
    is strictly fitter.
    """
    values = np.asarray(fitness_values, dtype=np.float64)
    n = values.shape[0]
    if params.selection is GaSelection.ROULETTE:
        p = replacement_probability(
            float(values[individual_index]), values, literal=params.paper_literal_roulette
        )
        return bool(rng.random() < p)
    opponent = individual_index
    while opponent == individual_index:
        opponent = int(rng.integers(0, n))
    return bool(values[individual_index] < values[opponent])


def ga_crossover(
    individual: np.ndarray, partner: np.ndarray, cr: float, rng: np.random.Generator
) -> np.ndarray:
    """Uniform crossover against a single partner: each gene is copied from the
    partner when rand(0,1) <= cr, otherwise kept."""
    if individual.shape != partner.shape:
        raise ValueError(
            f"individual shape {individual.shape} != partner shape {partner.shape}"
        )
    mask = rng.random(individual.shape[0]) <= cr
    return np.where(mask, partner, individual)


def mutate_substitution(
    genome: np.ndarray,
    p_m: float,
    pop_min: float,
    pop_max: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Replace each gene, with probability p_m, by a uniform draw from the
    population-wide gene range [pop_min, pop_max]."""
    if pop_min > pop_max:
        raise ValueError(f"pop_min {pop_min} > pop_max {pop_max}")
    if p_m <= 0.0:
        return genome.copy()
    n = genome.shape[0]
    mask = rng.random(n) <= p_m
    draws = rng.uniform(pop_min, pop_max, n)
    return np.where(mask, draws, genome)


def mutate_interchange(genome: np.ndarray, p_m: float, rng: np.random.Generator) -> np.ndarray:
    """Swap each gene, with probability p_m, with a uniformly drawn gene of the
    same genome. The result is always a permutation of the input values."""
    n = genome.shape[0]
    out = genome.copy()
    if p_m <= 0.0 or n < 2:
        return out
    for j in range(n):
        if rng.random() <= p_m:
            k = int(rng.integers(0, n))
            out[j], out[k] = out[k], out[j]
    return out
