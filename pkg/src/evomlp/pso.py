"""Particle swarm update rules: inertia schedules, velocity/position step, best tracking."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np


class InertiaKind(str, Enum):
    CONSTANT = "constant"
    LINEAR = "linear"
    NONLINEAR = "nonlinear"


DEFAULT_CONSTANT_W = 0.729
DEFAULT_W0 = 0.9
DEFAULT_WT = 0.5


@dataclass(frozen=True)
class InertiaSchedule:
    kind: InertiaKind
    w0: float = DEFAULT_W0  # fixed value when kind is CONSTANT
    w_t: float = DEFAULT_WT

    def validate(self) -> list[str]:
        problems = []
        if self.kind is InertiaKind.LINEAR and not self.w0 > self.w_t:
            problems.append(
                f"linear inertia requires w(0) > w(T_max); got w(0)={self.w0}, w(T_max)={self.w_t}"
            )
        if self.kind is InertiaKind.NONLINEAR and not self.w0 < 1.0:
            problems.append(f"nonlinear inertia requires w(0) < 1; got w(0)={self.w0}")
        return problems


@dataclass(frozen=True)
class PsoParams:
    phi_p: float = 2.0  # cap of the uniform personal-best pull
    phi_g: float = 2.0  # cap of the uniform global-best pull
    inertia: InertiaSchedule = InertiaSchedule(InertiaKind.LINEAR)

    def validate(self) -> list[str]:
        problems = []
        if self.phi_p < 0:
            problems.append(f"phi_p must be >= 0, got {self.phi_p}")
        if self.phi_g < 0:
            problems.append(f"phi_g must be >= 0, got {self.phi_g}")
        problems.extend(self.inertia.validate())
        return problems


@dataclass(frozen=True)
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    personal_best: np.ndarray
    personal_best_fitness: float
    relative_improvement: float = 0.0  # feeds the nonlinear inertia schedule


def inertia_linear(t: int, t_max: int, w0: float, w_t: float) -> float:
    """Linearly decreasing inertia: w0 at t=0 down to w_t at t=t_max."""
    if not w0 > w_t:
        raise ValueError(f"linear inertia requires w(0) > w(T_max); got {w0} <= {w_t}")
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    return (w0 - w_t) * (t_max - t) / t_max + w_t


def relative_improvement(pbest_fitness: float, current_fitness: float) -> float:
    """Normalized gap between personal-best and current fitness; 0 when both are 0."""
    denom = pbest_fitness + current_fitness
    if denom == 0.0:
        return 0.0
    return (pbest_fitness - current_fitness) / denom


def inertia_nonlinear(m: float, w0: float, w_t: float) -> float:
    """Nonlinearly decreasing inertia driven by the relative improvement m.

    Equals w0 at m=0 and approaches w_t as m grows.
    """
    em = math.exp(m)
    return w0 + (w_t - w0) * (em - 1.0) / (em + 1.0)


def _inertia_weight(params: PsoParams, particle: Particle, t: int, t_max: int) -> float:
    sched = params.inertia
    if sched.kind is InertiaKind.CONSTANT:
        return sched.w0
    if sched.kind is InertiaKind.LINEAR:
        return inertia_linear(t, t_max, sched.w0, sched.w_t)
    return inertia_nonlinear(particle.relative_improvement, sched.w0, sched.w_t)


def pso_update(
    particle: Particle,
    global_best: np.ndarray,
    params: PsoParams,
    t: int,
    t_max: int,
    rng: np.random.Generator,
) -> Particle:
    """One velocity/position step against the generation-start global best.

    Fresh uniform pull vectors are drawn componentwise for this particle and
    iteration. Fitness evaluation and best updates are the engine's job.
    """
    n = particle.position.shape[0]
    if global_best.shape != particle.position.shape:
        raise ValueError(
            f"global best has shape {global_best.shape}, expected {particle.position.shape}"
        )
    w = _inertia_weight(params, particle, t, t_max)
    u_p = rng.uniform(0.0, params.phi_p, n)
    u_g = rng.uniform(0.0, params.phi_g, n)
    velocity = (
        w * particle.velocity
        + u_p * (particle.personal_best - particle.position)
        + u_g * (global_best - particle.position)
    )
    position = particle.position + velocity
    return replace(particle, position=position, velocity=velocity)


def pso_post_evaluate(particle: Particle, new_fitness: float) -> Particle:
    """Commit a freshly evaluated position: update the personal best on strict
    improvement, then recompute the stored relative improvement."""
    pbest = particle.personal_best
    pbest_fitness = particle.personal_best_fitness
    if new_fitness > pbest_fitness:
        pbest = particle.position
        pbest_fitness = new_fitness
    m = relative_improvement(pbest_fitness, new_fitness)
    return replace(
        particle,
        personal_best=pbest,
        personal_best_fitness=pbest_fitness,
        relative_improvement=m,
    )
