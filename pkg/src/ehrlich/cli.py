"""Command line interface: ``ehrlich {generate,run,sweep,plot}``.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage or parameter error.
The default output directory comes from ``$EHRLICH_OUTPUT_DIR`` (falling back
to ``./ehrlich-out``). Every flag of ``run`` and ``sweep`` may also be given in
a JSON config file via ``--config``; explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .core import EhrlichError, LoadError, ParameterError
from .function import EhrlichInstance, _raw_values, check_parameters, generate_instance
from .genetic import GaConfig
from .harness import read_campaign_json, run_campaign
from .markov import DEFAULT_TEMPERATURE, default_bandwidth, infeasible_prob_lower_bound
from .plotting import plot_campaigns
from .serialize import instance_digest, load_instance, save_instance
from .sweep import SweepConfig, run_sweep

OUTPUT_ENV = "EHRLICH_OUTPUT_DIR"
GRID_PARAMS = ("v", "L", "c", "k", "q")


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce a campaign. Execution details
    (output directory, thread count) are deliberately not part of it."""

    v: int = 32
    L: int = 256
    c: int = 4
    k: int = 4
    q: int | None = None
    bandwidth: int | None = None
    temperature: float = DEFAULT_TEMPERATURE
    seed: int = 0
    instance: str | None = None
    n: int = 1024
    alpha: float = 0.01
    p_m: float | None = None
    p_r: float | None = None
    T: int = 100
    trials: int = 32
    label: str = ""

    def resolve(self, inst: EhrlichInstance | None = None) -> "RunConfig":
        """Fill defaults and validate every precondition before any work."""
        cfg = self
        if inst is not None:
            cfg = replace(
                cfg, v=inst.num_states, L=inst.length, c=inst.num_motifs, k=inst.motif_length,
                q=inst.quantization, bandwidth=inst.transition.mask.bandwidth,
                temperature=inst.transition.temperature, seed=inst.root_seed,
            )
        cfg = replace(
            cfg,
            q=cfg.k if cfg.q is None else cfg.q,
            bandwidth=default_bandwidth(cfg.v) if cfg.bandwidth is None else cfg.bandwidth,
            p_m=1.0 / cfg.L if cfg.p_m is None else cfg.p_m,
            p_r=1.0 / cfg.L if cfg.p_r is None else cfg.p_r,
        )
        check_parameters(cfg.v, cfg.L, cfg.c, cfg.k, cfg.q)
        if not 0 <= cfg.bandwidth < cfg.v:
            raise ParameterError(f"bandwidth must be in [0, {cfg.v}), got {cfg.bandwidth}")
        if cfg.temperature <= 0:
            raise ParameterError("temperature must be positive")
        if cfg.trials < 1:
            raise ParameterError("trials must be at least 1")
        if cfg.seed < 0:
            raise ParameterError("seed must be non-negative")
        cfg.ga().validate()
        return cfg

    def ga(self) -> GaConfig:
        return GaConfig(self.n, self.alpha, self.p_m, self.p_r, self.T)

    def to_dict(self) -> dict:
        return asdict(self)


_CONFIG_FIELDS = {f.name for f in fields(RunConfig)}


def load_config_file(path) -> dict:
    """Read run fields from a config file or from a campaign JSON's echo."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LoadError(f"cannot read config file {path}: {exc}") from exc
    if isinstance(data, dict) and isinstance(data.get("config"), dict):
        data = data["config"]
    if not isinstance(data, dict):
        raise LoadError(f"config file {path} must hold a JSON object")
    unknown = set(data) - _CONFIG_FIELDS
    if unknown:
        raise LoadError(f"config file {path} has unknown fields: {sorted(unknown)}")
    return data


def build_run_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for name in _CONFIG_FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return RunConfig(**values)


def prepare(raw: RunConfig) -> tuple[RunConfig, EhrlichInstance]:
    """Validate a config, then load or generate its instance."""
    if raw.instance:
        inst = load_instance(raw.instance)
        return raw.resolve(inst), inst
    cfg = raw.resolve()
    inst = generate_instance(cfg.v, cfg.L, cfg.c, cfg.k, cfg.q, cfg.bandwidth, cfg.temperature, cfg.seed)
    return cfg, inst


def _output_dir(args) -> Path:
    return Path(args.out_dir or os.environ.get(OUTPUT_ENV) or "ehrlich-out")


def _add_instance_flags(p):
    g = p.add_argument_group("instance")
    g.add_argument("--v", type=int, help="number of states (default 32)")
    g.add_argument("--L", type=int, help="sequence length (default 256)")
    g.add_argument("--c", type=int, help="number of motifs (default 4)")
    g.add_argument("--k", type=int, help="motif length (default 4)")
    g.add_argument("--q", type=int, help="quantization, must divide k (default k)")
    g.add_argument("--bandwidth", type=int, help="band half-width (default (2v)//5)")
    g.add_argument("--temperature", type=float, help="softmax temperature (default 0.5)")
    g.add_argument("--seed", type=int, help="root seed for the instance and trials (default 0)")


def _add_run_flags(p):
    _add_instance_flags(p)
    p.add_argument("--instance", help="load the instance from this file instead of generating it")
    p.add_argument("--config", help="JSON config file (or campaign JSON) supplying defaults")
    g = p.add_argument_group("optimizer")
    g.add_argument("--n", type=int, help="number of particles (default 1024)")
    g.add_argument("--alpha", type=float, help="survival quantile (default 0.01)")
    g.add_argument("--p-m", dest="p_m", type=float, help="mutation probability (default 1/L)")
    g.add_argument("--p-r", dest="p_r", type=float, help="recombination probability (default 1/L)")
    g.add_argument("--T", type=int, help="iterations per trial (default 100)")
    p.add_argument("--trials", type=int, help="independent trials (default 32)")
    p.add_argument("--label", help="legend label stored with the campaign")
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    p.add_argument("--out-dir", help=f"output directory (default ${OUTPUT_ENV} or ./ehrlich-out)")


def _parse_grid(spec: str) -> tuple[str, list[int]]:
    name, _, raw = spec.partition("=")
    if name not in GRID_PARAMS or not raw:
        raise ParameterError(f"--param-grid expects NAME=V1,V2,... with NAME in {GRID_PARAMS}")
    try:
        return name, [int(tok) for tok in raw.split(",")]
    except ValueError as exc:
        raise ParameterError(f"--param-grid values must be integers: {raw}") from exc


def cmd_generate(args) -> int:
    _, inst = prepare(replace(build_run_config(args), instance=None))
    out = Path(args.out) if args.out else _output_dir(args) / "instance.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_instance(inst, out)
    ok = _raw_values(inst, inst.certificate[None, :])[0] == 1.0
    print(f"wrote {out}")
    print(f"certificate value 1.0: {'ok' if ok else 'FAILED'}")
    print(f"infeasibility lower bound for uniform draws: {infeasible_prob_lower_bound(inst.num_states, inst.length):.6g}")
    print(f"instance sha256: {instance_digest(inst)}")
    return 0 if ok else 1


def _campaign(raw: RunConfig, jobs: int, out_dir: Path, stem: str):
    cfg, inst = prepare(raw)
    result = run_campaign(inst, cfg.ga(), trials=cfg.trials, root_seed=cfg.seed, jobs=jobs, label=cfg.label)
    result.config = cfg.to_dict()
    csv_path, json_path = result.write(out_dir, stem)
    print(
        f"{stem}: median final simple regret {result.final('simple_regret'):.4g}, "
        f"median final cumulative regret {result.final('cumulative_regret'):.4g} -> {csv_path}, {json_path}"
    )
    return result


def cmd_run(args) -> int:
    raw = build_run_config(args)
    out_dir = _output_dir(args)
    if not args.param_grid:
        _campaign(raw, args.jobs, out_dir, "campaign")
        return 0
    name, values = _parse_grid(args.param_grid)
    if raw.instance:
        raise ParameterError("--param-grid varies instance parameters and cannot be combined with --instance")
    points = [replace(raw, **{name: value, "label": raw.label or f"{name}={value}"}) for value in values]
    for point in points:
        # Validate the whole grid before running any of it.
        point.resolve()
    for value, point in zip(values, points):
        _campaign(point, args.jobs, out_dir, f"campaign_{name}{value}")
    return 0


def cmd_sweep(args) -> int:
    cfg, inst = prepare(build_run_config(args))

    def bounds(lo, hi):
        if lo is None and hi is None:
            return None
        if lo is None or hi is None:
            raise ParameterError("give both ends of a sweep bound")
        return (lo, hi)

    sweep = SweepConfig(
        alpha_bounds=bounds(args.alpha_min, args.alpha_max),
        p_m_bounds=bounds(args.p_m_min, args.p_m_max),
        p_r_bounds=bounds(args.p_r_min, args.p_r_max),
        budget=args.budget,
        include_baseline=not args.no_baseline,
        seed=args.sweep_seed,
    )
    rows = run_sweep(inst, cfg.ga(), sweep, trials=cfg.trials, root_seed=cfg.seed, jobs=args.jobs)
    out_dir = _output_dir(args)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = out_dir / "sweep.csv"
    with table.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rank", "candidate", "alpha", "p_m", "p_r", "score"])
        for r in rows:
            writer.writerow([r["rank"], r["candidate"], repr(r["alpha"]), repr(r["p_m"]), repr(r["p_r"]), repr(r["score"])])
    best = rows[0]
    best_cfg = replace(cfg, alpha=best["alpha"], p_m=best["p_m"], p_r=best["p_r"])
    best_path = out_dir / "best_config.json"
    best_path.write_text(json.dumps(best_cfg.to_dict(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"best score {best['score']:.6g} (alpha={best['alpha']:.4g}, p_m={best['p_m']:.4g}, p_r={best['p_r']:.4g})")
    print(f"wrote {table} and {best_path}")
    return 0


def cmd_plot(args) -> int:
    campaigns = [read_campaign_json(path) for path in args.files]
    for path, campaign in zip(args.files, campaigns):
        campaign.setdefault("label", "")
        campaign["label"] = campaign["label"] or Path(path).stem
    for path in plot_campaigns(campaigns, _output_dir(args)):
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ehrlich", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a self-contained instance file")
    _add_instance_flags(p)
    p.add_argument("--config", help="JSON config file supplying defaults")
    p.add_argument("--out", help="instance file path (default <out-dir>/instance.json)")
    p.add_argument("--out-dir", help=f"output directory (default ${OUTPUT_ENV} or ./ehrlich-out)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="run a multi-seed GA campaign")
    _add_run_flags(p)
    p.add_argument("--param-grid", help="repeat the campaign over NAME=V1,V2,... (NAME in v,L,c,k,q)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="random search over GA hyperparameters")
    _add_run_flags(p)
    p.add_argument("--budget", type=int, default=16, help="number of configurations to score")
    for name, dest in (("alpha", "alpha"), ("p-m", "p_m"), ("p-r", "p_r")):
        p.add_argument(f"--{name}-min", dest=f"{dest}_min", type=float)
        p.add_argument(f"--{name}-max", dest=f"{dest}_max", type=float)
    p.add_argument("--no-baseline", action="store_true", help="do not seed the search with the base config")
    p.add_argument("--sweep-seed", type=int, default=0, help="seed for candidate sampling")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot", help="render quantile-band SVGs from campaign JSON files")
    p.add_argument("files", nargs="+", help="campaign JSON files")
    p.add_argument("--out-dir", help=f"output directory (default ${OUTPUT_ENV} or ./ehrlich-out)")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"ehrlich {args.command}: parameter error: {exc}", file=sys.stderr)
        return 2
    except (EhrlichError, OSError) as exc:
        print(f"ehrlich {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
