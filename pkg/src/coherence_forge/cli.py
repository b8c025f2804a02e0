"""Command-line entry point.

    coherence-forge run fig3 --seed 7 --samples 10000 --nmax 10 --out fig3.csv
    coherence-forge validate povm.json
"""

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass

from . import experiments as ex
from .coherence import is_free_measurement
from .errors import CoherenceForgeError, ConfigError
from .measurement import is_cnm, povm_from_json

EXPERIMENTS = ("fig1", "fig2", "fig3", "fig4", "two-outcome-scatter", "tradeoff", "cnm-example")
SEED_ENV = "COHERENCE_FORGE_SEED"
FULL_SCALE_SAMPLES = 220_000


@dataclass
class RunConfig:
    experiment: str
    seed: int = 0
    samples: int | None = None
    out: str | None = None
    paper_scale: bool = False
    nmax: int | None = None
    steps: int | None = None
    setups: int | None = None
    bases: int | None = None
    workers: int = 1
    band_lo: float | None = None
    band_hi: float | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        for name in ("samples", "nmax", "steps", "setups", "bases"):
            v = getattr(self, name)
            if v is not None and int(v) < 1:
                raise ConfigError(f"{name} must be positive")

    @classmethod
    def from_mapping(cls, data):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)


def _band(cfg, default):
    return (cfg.band_lo if cfg.band_lo is not None else default[0],
            cfg.band_hi if cfg.band_hi is not None else default[1])


def execute(cfg):
    """Run one experiment and return its :class:`ExperimentResult`."""
    big = cfg.paper_scale
    if cfg.experiment == "fig1":
        return ex.fig1_curve()
    if cfg.experiment == "fig2":
        return ex.fig2_scatter(cfg.samples or 15000, cfg.seed, workers=cfg.workers)
    if cfg.experiment == "fig3":
        samples = cfg.samples or (FULL_SCALE_SAMPLES if big else 10000)
        nmax = cfg.nmax or (20 if big else 10)
        band = _band(cfg, (0.32, 0.42) if big else (0.25, 0.50))
        return ex.fig3_decay(nmax, samples, cfg.seed, workers=cfg.workers, band=band)
    if cfg.experiment == "fig4":
        samples = cfg.samples or (FULL_SCALE_SAMPLES if big else 10000)
        return ex.fig4_successive(cfg.steps or 30, samples, cfg.seed, workers=cfg.workers,
                                  band=_band(cfg, (0.74, 0.78)))
    if cfg.experiment == "two-outcome-scatter":
        return ex.two_outcome_scatter(cfg.setups or 500, cfg.samples or 2000, cfg.seed,
                                      workers=cfg.workers)
    if cfg.experiment == "tradeoff":
        return ex.tradeoff_audit(cfg.setups or cfg.samples or 500, cfg.bases or 20, cfg.seed,
                                 workers=cfg.workers)
    return ex.cnm_cf_example()


def _print_result(res, stream):
    for k, v in res.summary.items():
        print(f"{k}={ex.fmt(v) if not isinstance(v, list) else ','.join(ex.fmt(x) for x in v)}",
              file=stream)
    for k, ok in res.checks.items():
        print(f"check {k}: {'PASS' if ok else 'FAIL'}", file=stream)


def cmd_run(args):
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        if "experiment" in data and data["experiment"] != args.experiment:
            raise ConfigError("config experiment does not match the command line")
    data["experiment"] = args.experiment
    if os.environ.get(SEED_ENV):
        try:
            data["seed"] = int(os.environ[SEED_ENV])
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} is not an integer") from exc
    for name in ("seed", "samples", "out", "nmax", "steps", "setups", "bases", "workers"):
        v = getattr(args, name)
        if v is not None:
            data[name] = v
    if args.paper_scale:
        data["paper_scale"] = True
    cfg = RunConfig.from_mapping(data)

    res = execute(cfg)
    if cfg.out:
        try:
            with open(cfg.out, "w", newline="") as fh:
                res.to_csv(fh)
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return 3
    else:
        res.to_csv(sys.stdout)
    _print_result(res, sys.stderr if not cfg.out else sys.stdout)
    return 0 if res.passed else 1


def cmd_validate(args):
    try:
        with open(args.path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    try:
        povm = povm_from_json(doc)
    except (CoherenceForgeError, ValueError) as exc:
        print(f"invalid POVM: {exc}")
        return 1
    print(f"valid=true outcomes={povm.n} dim={povm.dim}")
    for i, q in enumerate(povm.raw_quantumness):
        print(f"effect {i}: raw_quantumness={ex.fmt(q)}")
    print(f"free={'true' if is_free_measurement(povm) else 'false'}")
    print(f"cnm={'true' if is_cnm(povm) else 'false'}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="coherence-forge",
                                description="Coherence creation by non-selective measurements")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment and emit CSV")
    run.add_argument("experiment", choices=EXPERIMENTS)
    run.add_argument("--seed", type=int)
    run.add_argument("--samples", type=int)
    run.add_argument("--out")
    run.add_argument("--paper-scale", action="store_true")
    run.add_argument("--nmax", type=int)
    run.add_argument("--steps", type=int)
    run.add_argument("--setups", type=int)
    run.add_argument("--bases", type=int)
    run.add_argument("--workers", type=int)
    run.add_argument("--config", help="JSON run configuration")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="check a POVM JSON file")
    val.add_argument("path")
    val.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
