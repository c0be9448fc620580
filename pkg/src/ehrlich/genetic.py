"""Genetic-algorithm baseline over a dense ``(n, L)`` population matrix.

Each generation evaluates the population, keeps the elitist best outside of
it, retains members at or above the nearest-rank ``1 - alpha`` quantile,
refills by uniform recombination of the survivors and finally mutates the
whole population once. Survivors are mutated like everyone else; the global
best is only tracked, never reinserted.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import NEG_INFINITY, ParameterError, RngStream, nearest_rank, state_dtype
from .function import EhrlichInstance, _evaluate_trusted, evaluate, initial_solution
from .metrics import TrialTrace


@dataclass(frozen=True)
class GaConfig:
    """GA hyperparameters.

    ``mutation_prob`` and ``recombine_prob`` default to ``1 / L`` once bound to
    an instance via :meth:`resolve`.
    """

    num_particles: int = 1024
    survival_quantile: float = 0.01
    mutation_prob: float | None = None
    recombine_prob: float | None = None
    iterations: int = 100

    def resolve(self, length: int) -> "GaConfig":
        cfg = replace(
            self,
            mutation_prob=1.0 / length if self.mutation_prob is None else float(self.mutation_prob),
            recombine_prob=1.0 / length if self.recombine_prob is None else float(self.recombine_prob),
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        n = self.num_particles
        if n < 2:
            raise ParameterError(f"num_particles must be at least 2, got {n}")
        if not 2.0 / n < self.survival_quantile < 1.0:
            raise ParameterError(
                f"survival_quantile must lie in (2/n, 1) = ({2.0 / n:.3g}, 1), got {self.survival_quantile}"
            )
        for name in ("mutation_prob", "recombine_prob"):
            p = getattr(self, name)
            if p is not None and not 0.0 <= p <= 1.0:
                raise ParameterError(f"{name} must be in [0, 1], got {p}")
        if self.iterations < 1:
            raise ParameterError(f"iterations must be at least 1, got {self.iterations}")

    def to_dict(self) -> dict:
        return {
            "n": self.num_particles,
            "alpha": self.survival_quantile,
            "p_m": self.mutation_prob,
            "p_r": self.recombine_prob,
            "T": self.iterations,
        }


@dataclass(frozen=True, eq=False)
class GaState:
    population: np.ndarray
    best_sequence: np.ndarray
    best_value: float
    iteration: int = 0
    # Values of the population evaluated during the last step.
    last_values: np.ndarray | None = None


def mutate(xs, mutation_prob: float, fanout: int, rng: RngStream, num_states: int) -> np.ndarray:
    """``fanout`` mutants per row; each position resampled uniformly with prob ``mutation_prob``.

    The replacement may equal the original state, so the effective change rate
    per position is ``mutation_prob * (1 - 1 / num_states)``.
    """
    if not 0.0 <= mutation_prob <= 1.0:
        raise ParameterError(f"mutation_prob must be in [0, 1], got {mutation_prob}")
    if fanout < 1:
        raise ParameterError(f"fanout must be at least 1, got {fanout}")
    xs = np.asarray(xs)
    out = np.repeat(xs, fanout, axis=0) if fanout > 1 else xs.copy()
    gen = rng.generator
    hits = gen.random(out.shape, dtype=np.float32) < mutation_prob
    out[hits] = gen.integers(0, num_states, size=int(hits.sum()), dtype=out.dtype)
    return out


def recombine(xs, recombine_prob: float, count: int, rng: RngStream) -> np.ndarray:
    """Uniform crossover of ``count`` random parent pairs drawn with replacement.

    A child takes the first parent's state where an independent
    ``Bernoulli(recombine_prob)`` draw fires, the second parent's otherwise.
    """
    xs = np.asarray(xs)
    if xs.shape[0] == 0:
        raise ParameterError("cannot recombine an empty population")
    gen = rng.generator
    first = xs[gen.integers(0, xs.shape[0], size=count)]
    second = xs[gen.integers(0, xs.shape[0], size=count)]
    take_first = gen.random(first.shape, dtype=np.float32) < recombine_prob
    return np.where(take_first, first, second)


def _maximize(inst: EhrlichInstance, values):
    return -values if inst.negate else values


def select_survivors(values, survival_quantile: float) -> np.ndarray:
    """Boolean mask of members at or above the nearest-rank ``1 - alpha`` quantile.

    Ties at the threshold all survive, so at least one member always does; an
    all-infeasible population survives whole.
    """
    values = np.asarray(values, dtype=float)
    return values >= nearest_rank(values, 1.0 - survival_quantile)


def ga_step(state: GaState, inst: EhrlichInstance, cfg: GaConfig, rng: RngStream) -> GaState:
    """One generation. ``cfg`` must already be resolved."""
    pop = state.population
    values = _maximize(inst, _evaluate_trusted(inst, pop))
    best_sequence, best_value = state.best_sequence, state.best_value
    i = int(np.argmax(values))
    if values[i] > best_value:
        best_sequence, best_value = pop[i].copy(), float(values[i])
    top = pop[select_survivors(values, cfg.survival_quantile)]
    refill = cfg.num_particles - top.shape[0]
    if refill:
        pop = np.concatenate([top, recombine(top, cfg.recombine_prob, refill, rng.derive("recombine"))])
    else:
        pop = top
    pop = mutate(pop, cfg.mutation_prob, 1, rng.derive("mutate"), inst.num_states)
    return GaState(pop, best_sequence, best_value, state.iteration + 1, values)


def init_state(inst: EhrlichInstance, cfg: GaConfig, rng: RngStream) -> GaState:
    """Seed with one DMP draw and fan it out into ``n`` mutants."""
    seed = initial_solution(inst, rng.derive("initial-solution"))
    seed_value = float(_maximize(inst, evaluate(inst, seed)))
    compact = seed.astype(state_dtype(inst.num_states))[None, :]
    pop = mutate(compact, cfg.mutation_prob, cfg.num_particles, rng.derive("initial-population"), inst.num_states)
    return GaState(pop, seed, seed_value)


def run_ga(inst: EhrlichInstance, cfg: GaConfig, rng: RngStream) -> tuple[GaState, TrialTrace]:
    """Run ``cfg.iterations`` generations and record one trace row per generation.

    The evaluation column counts the initial solution plus ``n`` per
    generation. Each generation draws from its own derived stream.
    """
    cfg = cfg.resolve(inst.length)
    state = init_state(inst, cfg, rng)
    best, feasible, evals = [], [], []
    for t in range(1, cfg.iterations + 1):
        state = ga_step(state, inst, cfg, rng.derive(f"iteration/{t}"))
        best.append(state.best_value)
        feasible.append(float(np.isfinite(state.last_values).mean()))
        evals.append(1 + cfg.num_particles * t)
    # Keep the reported best in the objective's native sign.
    if inst.negate:
        state = replace(state, best_value=-state.best_value if state.best_value != NEG_INFINITY else float("inf"))
    return state, TrialTrace.from_history(best, feasible, evals)
