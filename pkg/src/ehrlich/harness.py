"""Multi-seed campaigns: run independent GA trials and aggregate their traces.

Trial ``t`` draws all of its randomness from ``derive_stream(root_seed,
"trial/t")``, so results do not depend on how trials are scheduled across
worker threads. Aggregates are nearest-rank 10/50/90% quantiles per
iteration.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

import numpy as np

from .core import LoadError, ParameterError, derive_stream, nearest_rank
from .function import EhrlichInstance, _raw_values
from .genetic import GaConfig, run_ga
from .metrics import TrialTrace
from .serialize import instance_digest

QUANTILES = {"q10": 0.1, "q50": 0.5, "q90": 0.9}
METRICS = ("best_value", "simple_regret", "cumulative_regret", "feasible_fraction")
CSV_HEADER = ("trial", "iteration", "evals", "best_value", "simple_regret", "cumulative_regret", "feasible_frac")

InstanceSource = Union[EhrlichInstance, Callable[[int], EhrlichInstance]]


@dataclass(eq=False)
class CampaignResult:
    instance: dict
    instance_hash: str
    config: dict
    root_seed: int
    traces: list[TrialTrace]
    aggregates: dict[str, dict[str, np.ndarray]] = field(default_factory=dict)
    label: str = ""

    @property
    def evaluations(self) -> np.ndarray:
        return self.traces[0].evaluations

    def aggregate_rows(self):
        rows = []
        for metric in METRICS:
            agg = self.aggregates[metric]
            for i, it in enumerate(self.traces[0].iteration.tolist()):
                rows.append({"iteration": it, "metric": metric, **{q: float(agg[q][i]) for q in QUANTILES}})
        return rows

    def final(self, metric: str, quantile: str = "q50") -> float:
        return float(self.aggregates[metric][quantile][-1])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for t, trace in enumerate(self.traces):
            for row in trace.rows():
                writer.writerow([
                    t, row["iteration"], row["evaluations"], repr(row["best_value"]),
                    repr(row["simple_regret"]), repr(row["cumulative_regret"]), repr(row["feasible_fraction"]),
                ])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "version": 1,
            "label": self.label,
            "config": self.config,
            "instance": self.instance,
            "instance_hash": self.instance_hash,
            "root_seed": self.root_seed,
            "trials": len(self.traces),
            "iterations": self.traces[0].iteration.tolist(),
            "evaluations": self.evaluations.tolist(),
            "metrics": {
                metric: {q: self.aggregates[metric][q].tolist() for q in QUANTILES} for metric in METRICS
            },
        }
        return json.dumps(payload, indent=1, sort_keys=True) + "\n"

    def write(self, directory, stem: str = "campaign") -> tuple[Path, Path]:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        csv_path = directory / f"{stem}.csv"
        json_path = directory / f"{stem}.json"
        csv_path.write_text(self.to_csv(), encoding="utf-8")
        json_path.write_text(self.to_json(), encoding="utf-8")
        return csv_path, json_path


def aggregate_traces(traces: list[TrialTrace]) -> dict[str, dict[str, np.ndarray]]:
    """Nearest-rank quantiles across trials at every iteration."""
    if not traces:
        raise ParameterError("need at least one trace to aggregate")
    lengths = {len(t) for t in traces}
    if len(lengths) != 1:
        raise ParameterError("traces have differing lengths")
    out = {}
    for metric in METRICS:
        stacked = np.stack([t.column(metric) for t in traces])
        out[metric] = {q: np.asarray(nearest_rank(stacked, p), dtype=float) for q, p in QUANTILES.items()}
    return out


def _check_certificate(inst: EhrlichInstance) -> None:
    if _raw_values(inst, inst.certificate[None, :])[0] != 1.0:
        raise ParameterError("instance certificate does not attain the optimum of 1")


def run_trial(inst: EhrlichInstance, cfg: GaConfig, root_seed: int, trial: int) -> TrialTrace:
    _, trace = run_ga(inst, cfg, derive_stream(root_seed, f"trial/{trial}"))
    return trace


def run_campaign(
    source: InstanceSource,
    cfg: GaConfig,
    trials: int = 32,
    root_seed: int = 0,
    jobs: int = 1,
    label: str = "",
) -> CampaignResult:
    """Run ``trials`` independent GA trials and aggregate them.

    ``source`` is either one instance shared by every trial or a callable
    mapping a trial index to its instance.
    """
    if trials < 1:
        raise ParameterError(f"trials must be at least 1, got {trials}")
    instance_for = source if callable(source) and not isinstance(source, EhrlichInstance) else (lambda _t: source)
    instances = [instance_for(t) for t in range(trials)]
    for inst in {id(i): i for i in instances}.values():
        _check_certificate(inst)
    resolved = cfg.resolve(instances[0].length)

    def work(t):
        return run_trial(instances[t], resolved, root_seed, t)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(work, range(trials)))
    else:
        traces = [work(t) for t in range(trials)]

    first = instances[0]
    hashes = sorted({instance_digest(i) for i in instances})
    return CampaignResult(
        instance=first.descriptor(),
        instance_hash=hashes[0] if len(hashes) == 1 else ",".join(hashes),
        config=resolved.to_dict(),
        root_seed=root_seed,
        traces=traces,
        aggregates=aggregate_traces(traces),
        label=label,
    )


def read_campaign_json(path) -> dict:
    """Load an aggregate JSON file and check it has what plotting needs."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LoadError(f"cannot read campaign file {path}: {exc}") from exc
    if not isinstance(data, dict) or not data.get("evaluations") or not isinstance(data.get("metrics"), dict):
        raise LoadError(f"campaign file {path} has no evaluations or metrics")
    n = len(data["evaluations"])
    for metric, bands in data["metrics"].items():
        if not isinstance(bands, dict) or any(len(bands.get(q, ())) != n for q in QUANTILES):
            raise LoadError(f"campaign file {path}: metric {metric!r} is malformed")
    return data
