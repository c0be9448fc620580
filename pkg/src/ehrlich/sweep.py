"""Random search over GA hyperparameters, scored by cumulative regret.

Candidates are drawn log-uniformly within per-parameter bounds. Every
candidate is run with the same campaign seed, so scores are compared under
common random numbers. The score is the median (nearest-rank) final
cumulative regret across trials; lower is better.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .core import ParameterError, derive_stream
from .function import EhrlichInstance
from .genetic import GaConfig
from .harness import run_campaign

PARAMS = ("alpha", "p_m", "p_r")


@dataclass(frozen=True)
class SweepConfig:
    """Search space and budget. ``None`` bounds are filled in by :meth:`resolve`."""

    alpha_bounds: tuple[float, float] | None = None
    p_m_bounds: tuple[float, float] | None = None
    p_r_bounds: tuple[float, float] | None = None
    budget: int = 16
    include_baseline: bool = True
    seed: int = 0

    def resolve(self, num_particles: int, length: int) -> "SweepConfig":
        cfg = replace(
            self,
            alpha_bounds=self.alpha_bounds or (min(2.5 / num_particles, 0.5), 0.5),
            p_m_bounds=self.p_m_bounds or (0.25 / length, min(16.0 / length, 1.0)),
            p_r_bounds=self.p_r_bounds or (0.25 / length, min(16.0 / length, 1.0)),
        )
        cfg.validate(num_particles)
        return cfg

    def validate(self, num_particles: int) -> None:
        if self.budget < 1:
            raise ParameterError(f"sweep budget must be at least 1, got {self.budget}")
        lo, hi = self.alpha_bounds
        if not 2.0 / num_particles < lo <= hi < 1.0:
            raise ParameterError(f"alpha bounds must lie in (2/n, 1), got ({lo}, {hi})")
        for name in ("p_m_bounds", "p_r_bounds"):
            lo, hi = getattr(self, name)
            if not 0.0 < lo <= hi <= 1.0:
                raise ParameterError(f"{name} must lie in (0, 1], got ({lo}, {hi})")


def _log_uniform(gen, bounds) -> float:
    lo, hi = bounds
    if lo == hi:
        return float(lo)
    return float(math.exp(gen.uniform(math.log(lo), math.log(hi))))


def sample_candidates(sweep: SweepConfig, baseline: GaConfig) -> list[GaConfig]:
    """``sweep.budget`` configs; the first is ``baseline`` if requested."""
    gen = derive_stream(sweep.seed, "sweep/candidates").generator
    out = [baseline] if sweep.include_baseline else []
    while len(out) < sweep.budget:
        out.append(replace(
            baseline,
            survival_quantile=_log_uniform(gen, sweep.alpha_bounds),
            mutation_prob=_log_uniform(gen, sweep.p_m_bounds),
            recombine_prob=_log_uniform(gen, sweep.p_r_bounds),
        ))
    return out


def run_sweep(
    inst: EhrlichInstance,
    base: GaConfig,
    sweep: SweepConfig,
    trials: int = 32,
    root_seed: int = 0,
    jobs: int = 1,
) -> list[dict]:
    """Score every candidate and return rows sorted best first.

    Each row carries ``rank``, ``candidate`` (sampling order), the three
    hyperparameters, ``score`` and the per-trial final cumulative regrets.
    """
    baseline = base.resolve(inst.length)
    sweep = sweep.resolve(baseline.num_particles, inst.length)
    candidates = [c.resolve(inst.length) for c in sample_candidates(sweep, baseline)]

    def score(cfg):
        result = run_campaign(inst, cfg, trials=trials, root_seed=root_seed)
        finals = np.array([t.cumulative_regret[-1] for t in result.traces])
        return result.final("cumulative_regret", "q50"), finals

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            scored = list(pool.map(score, candidates))
    else:
        scored = [score(c) for c in candidates]

    rows = [
        {
            "candidate": i,
            "alpha": cfg.survival_quantile,
            "p_m": cfg.mutation_prob,
            "p_r": cfg.recombine_prob,
            "score": s,
            "finals": finals,
        }
        for i, (cfg, (s, finals)) in enumerate(zip(candidates, scored))
    ]
    rows.sort(key=lambda r: (r["score"], r["candidate"]))
    for rank, row in enumerate(rows, start=1):
        row["rank"] = rank
    return rows
