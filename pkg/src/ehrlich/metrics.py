"""Regret and feasibility metrics, and the per-trial trace that carries them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import POS_INFINITY, ParameterError
from .markov import feasible_mask

OPTIMAL_VALUE = 1.0

TRACE_COLUMNS = (
    "iteration", "evaluations", "best_value", "simple_regret", "cumulative_regret", "feasible_fraction",
)


def simple_regret(best_value: float) -> float:
    """Gap to the known optimum of 1; infinite if nothing feasible was found."""
    if best_value == float("-inf"):
        return POS_INFINITY
    return OPTIMAL_VALUE - float(best_value)


def cumulative_regret(simple_regrets) -> np.ndarray:
    """Running sum of simple regret over iterations."""
    r = np.asarray(simple_regrets, dtype=float)
    if r.size == 0:
        raise ParameterError("cumulative regret of an empty trace")
    return np.cumsum(r)


def feasible_fraction(population, A) -> float:
    """Share of the population whose transitions are all allowed."""
    feasible = feasible_mask(population, A)
    if feasible.size == 0:
        raise ParameterError("feasible fraction of an empty population")
    return float(feasible.mean())


@dataclass(frozen=True, eq=False)
class TrialTrace:
    """Per-iteration metrics of one optimizer run, one array per column."""

    iteration: np.ndarray
    evaluations: np.ndarray
    best_value: np.ndarray
    simple_regret: np.ndarray
    cumulative_regret: np.ndarray
    feasible_fraction: np.ndarray

    @classmethod
    def from_history(cls, best_values, feasible_fractions, evaluations) -> "TrialTrace":
        best = np.asarray(best_values, dtype=float)
        regret = np.array([simple_regret(b) for b in best])
        return cls(
            iteration=np.arange(1, best.size + 1),
            evaluations=np.asarray(evaluations, dtype=np.int64),
            best_value=best,
            simple_regret=regret,
            cumulative_regret=cumulative_regret(regret),
            feasible_fraction=np.asarray(feasible_fractions, dtype=float),
        )

    def __len__(self) -> int:
        return self.iteration.size

    def column(self, name: str) -> np.ndarray:
        if name not in TRACE_COLUMNS:
            raise KeyError(name)
        return getattr(self, name)

    def rows(self):
        cols = [self.column(name) for name in TRACE_COLUMNS]
        return [dict(zip(TRACE_COLUMNS, values)) for values in zip(*(c.tolist() for c in cols))]
