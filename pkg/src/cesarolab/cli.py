"""Batch front door: strict JSON experiment configs in, CSV/JSON + manifest out.

Subcommands::

    cesaro-lab run <config.json> [--workers N] [--out-dir PATH] [--seed U64]
    cesaro-lab validate <config.json>
    cesaro-lab bound-table --c0 .. --delta .. --n-grid 64,256 --y-grid 1,2 ...

Exit codes: 0 success, 2 config error, 3 runtime error, 4 analytic bound
violated by the empirical estimate (expbound experiment only).  Stdout
carries a one-line summary; all data goes to files.  The default output
directory is, in order: ``--out-dir``, the config's ``output.dir``, the
``CESAROLAB_OUT_DIR`` environment variable, the working directory.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__ as _VERSION
from .bounds import TailBoundParams, cesaro_tail_bound, validate_params
from .engine import (
    ConfigError,
    ExperimentResult,
    MonteCarloConfig,
    ResultRow,
    aui_tail_diagnostic,
    bound_vs_empirical,
    counterexample_sweep,
    estimate_scaled_l1,
    path_sup_diagnostic,
    supermartingale_condition_check,
)
from .online import (
    BayesRiskExperiment,
    EstimatorSchedule,
    MarMeanExperiment,
    NuisanceSchedule,
    sine_bayes_dgp,
    smooth_mar_dgp,
)
from .sequences import CounterexampleSpec, Seed, SequenceSpec

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_ERROR = 3
EXIT_BOUND_VIOLATED = 4

SCHEMA_VERSION = 1

EXPERIMENTS = (
    "counterexample",
    "l1",
    "as_diag",
    "aui",
    "supermart",
    "expbound",
    "bayes_risk",
    "mar_mean",
    "bound_table",
)


@dataclass(frozen=True)
class RunConfig:
    """Validated experiment configuration; sections mirror the JSON document."""

    schema_version: int
    experiment: str
    params: dict
    output: dict
    mc: dict | None = None
    family: dict | None = None
    bound_params: dict | None = None
    dgp: dict | None = None
    schedule: dict | None = None

    def to_obj(self) -> dict:
        obj = {
            "schema_version": self.schema_version,
            "experiment": self.experiment,
            "params": self.params,
            "output": self.output,
        }
        for key in ("mc", "family", "bound_params", "dgp", "schedule"):
            val = getattr(self, key)
            if val is not None:
                obj[key] = val
        return obj


@dataclass(frozen=True)
class RunManifest:
    artifact_version: str
    config_hash: str
    seed: dict
    started_at: str
    finished_at: str
    outputs: dict


def _err(path: str, msg: str) -> ConfigError:
    return ConfigError(f"{path}: {msg}")


def _check_keys(obj: dict, path: str, required: tuple, optional: tuple = ()) -> None:
    if not isinstance(obj, dict):
        raise _err(path, f"expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in required and key not in optional:
            raise _err(f"{path}.{key}", "unknown field (strict schema)")
    for key in required:
        if key not in obj:
            raise _err(f"{path}.{key}", "missing required field")


def _number(obj: dict, path: str, key: str, default=None) -> float:
    if key not in obj:
        if default is not None:
            return default
        raise _err(f"{path}.{key}", "missing required field")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise _err(f"{path}.{key}", f"expected a number, got {v!r}")
    return float(v)


def _integer(obj: dict, path: str, key: str, default=None) -> int:
    if key not in obj:
        if default is not None:
            return default
        raise _err(f"{path}.{key}", "missing required field")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise _err(f"{path}.{key}", f"expected an integer, got {v!r}")
    return v


def _grid(obj: dict, path: str, key: str, kind=float) -> tuple:
    if key not in obj:
        raise _err(f"{path}.{key}", "missing required field")
    v = obj[key]
    if not isinstance(v, list) or not v:
        raise _err(f"{path}.{key}", "expected a nonempty array")
    out = []
    for i, item in enumerate(v):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise _err(f"{path}.{key}[{i}]", f"expected a number, got {item!r}")
        if kind is int and not isinstance(item, int):
            raise _err(f"{path}.{key}[{i}]", f"expected an integer, got {item!r}")
        out.append(kind(item))
    return tuple(out)


_FAMILY_FIELDS = {
    "counterexample": (("alpha", "beta"), ("bound_b",)),
    "power_law": (("r", "spread"), ()),
    "exp_tail": (("c0", "c1", "c2", "beta", "gamma", "delta"), ()),
    "supermartingale": (("beta", "contraction"), ("x0",)),
    "borel_cantelli": (("beta", "a", "s"), ()),
}


def _build_family(obj: dict, path: str) -> SequenceSpec:
    if not isinstance(obj, dict) or "name" not in obj:
        raise _err(f"{path}.name", "missing required field")
    name = obj.get("name")
    if name not in _FAMILY_FIELDS:
        raise _err(f"{path}.name", f"unknown family {name!r}; one of {sorted(_FAMILY_FIELDS)}")
    required, optional = _FAMILY_FIELDS[name]
    _check_keys(obj, path, ("name",) + required, optional)
    try:
        if name == "counterexample":
            return SequenceSpec.counterexample(
                _number(obj, path, "alpha"),
                _number(obj, path, "beta"),
                _number(obj, path, "bound_b", 1.0),
            )
        if name == "power_law":
            return SequenceSpec.power_law(_number(obj, path, "r"), _number(obj, path, "spread"))
        if name == "exp_tail":
            return SequenceSpec.exp_tail(_build_bound_params(obj, path, skip=("name",)))
        if name == "supermartingale":
            return SequenceSpec.supermartingale(
                _number(obj, path, "beta"),
                _number(obj, path, "contraction"),
                _number(obj, path, "x0", 1.0),
            )
        return SequenceSpec.borel_cantelli(
            _number(obj, path, "beta"), _number(obj, path, "a"), _number(obj, path, "s")
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise _err(path, str(exc)) from exc


def _build_bound_params(obj: dict, path: str, skip: tuple = ()) -> TailBoundParams:
    if not skip:
        _check_keys(obj, path, ("c0", "c1", "c2", "beta", "gamma", "delta"))
    try:
        return validate_params(
            TailBoundParams(
                c0=_number(obj, path, "c0"),
                c1=_number(obj, path, "c1"),
                c2=_number(obj, path, "c2"),
                beta=_number(obj, path, "beta"),
                gamma=_number(obj, path, "gamma"),
                delta=_number(obj, path, "delta"),
            )
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise _err(path, str(exc)) from exc


def _build_seed(obj: dict, path: str) -> Seed:
    _check_keys(obj, path, ("value",), ("stream_id",))
    try:
        return Seed(_integer(obj, path, "value"), _integer(obj, path, "stream_id", 0))
    except ValueError as exc:
        raise _err(path, str(exc)) from exc


def _build_mc(obj: dict, path: str, n_grid_required: bool) -> MonteCarloConfig:
    required = ("replications", "seed")
    optional = ("n_grid", "confidence", "workers", "threshold_grid")
    if n_grid_required:
        required += ("n_grid",)
        optional = tuple(k for k in optional if k != "n_grid")
    _check_keys(obj, path, required, optional)
    seed = _build_seed(obj.get("seed", {}), f"{path}.seed")
    try:
        return MonteCarloConfig(
            replications=_integer(obj, path, "replications"),
            seed=seed,
            n_grid=_grid(obj, path, "n_grid", int) if "n_grid" in obj else (),
            threshold_grid=_grid(obj, path, "threshold_grid") if "threshold_grid" in obj else (),
            confidence=_number(obj, path, "confidence", 0.95),
            workers=_integer(obj, path, "workers", 1),
        )
    except ConfigError as exc:
        # distinguish our own path-tagged errors from MonteCarloConfig's
        if str(exc).startswith(path):
            raise
        raise _err(path, str(exc)) from exc


_TOP_SECTIONS = {
    "counterexample": {"required": ("family", "params", "mc"), "params": ("M", "k_grid")},
    "l1": {"required": ("family", "params", "mc"), "params": ("beta",)},
    "as_diag": {"required": ("family", "params", "mc"), "params": ("beta", "m_grid", "n_cap", "epsilon")},
    "aui": {"required": ("family", "params", "mc"), "params": ("beta", "q", "x_grid")},
    "supermart": {"required": ("family", "params", "mc"), "params": ("beta",)},
    "expbound": {"required": ("bound_params", "params", "mc"), "params": ("y_grid",)},
    "bayes_risk": {"required": ("dgp", "schedule", "params", "mc"), "params": ("n",)},
    "mar_mean": {"required": ("dgp", "schedule", "params", "mc"), "params": ("n",)},
    "bound_table": {"required": ("bound_params", "params"), "params": ("y_grid", "n_grid")},
}

_MC_NEEDS_N_GRID = {"l1", "aui", "supermart", "expbound"}


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a JSON experiment config (strict schema)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(
        obj,
        "config",
        ("schema_version", "experiment", "params", "output"),
        ("mc", "family", "bound_params", "dgp", "schedule"),
    )
    if obj["schema_version"] != SCHEMA_VERSION:
        raise _err("config.schema_version", f"expected {SCHEMA_VERSION}")
    experiment = obj["experiment"]
    if experiment not in EXPERIMENTS:
        raise _err("config.experiment", f"unknown experiment {experiment!r}; one of {EXPERIMENTS}")
    sections = _TOP_SECTIONS[experiment]
    for key in sections["required"]:
        if key not in obj:
            raise _err(f"config.{key}", f"missing required section for {experiment!r}")
    for key in ("family", "bound_params", "dgp", "schedule", "mc"):
        if key in obj and key not in sections["required"]:
            raise _err(f"config.{key}", f"section not allowed for {experiment!r}")
    _check_keys(obj.get("output", {}), "config.output", ("basename",), ("dir",))
    if not isinstance(obj["output"].get("basename"), str) or not obj["output"]["basename"]:
        raise _err("config.output.basename", "must be a nonempty string")
    _check_keys(obj.get("params", {}), "config.params", sections["params"])
    cfg = RunConfig(
        schema_version=obj["schema_version"],
        experiment=experiment,
        params=obj["params"],
        output=obj["output"],
        mc=obj.get("mc"),
        family=obj.get("family"),
        bound_params=obj.get("bound_params"),
        dgp=obj.get("dgp"),
        schedule=obj.get("schedule"),
    )
    _build_plan(cfg)  # surface every constraint violation at parse time
    return cfg


def serialize_config(cfg: RunConfig) -> str:
    """Canonical JSON for a config: sorted keys, two-space indent."""
    return json.dumps(cfg.to_obj(), indent=2, sort_keys=True) + "\n"


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(serialize_config(cfg).encode()).hexdigest()


@dataclass
class _Plan:
    experiment: str
    mc: MonteCarloConfig | None = None
    family: SequenceSpec | None = None
    bound_params: TailBoundParams | None = None
    params: dict | None = None
    dgp_name: str | None = None
    dgp: object = None
    schedule: object = None


def _build_plan(cfg: RunConfig) -> _Plan:
    exp = cfg.experiment
    plan = _Plan(experiment=exp, params={})
    if cfg.mc is not None:
        plan.mc = _build_mc(cfg.mc, "config.mc", exp in _MC_NEEDS_N_GRID)
    if cfg.family is not None:
        plan.family = _build_family(cfg.family, "config.family")
    if cfg.bound_params is not None:
        plan.bound_params = _build_bound_params(cfg.bound_params, "config.bound_params")
    p, path = cfg.params, "config.params"
    if exp == "counterexample":
        if plan.family.family != "counterexample":
            raise _err("config.family.name", "counterexample experiment needs the counterexample family")
        plan.params = {"M": _number(p, path, "M"), "k_grid": _grid(p, path, "k_grid", int)}
    elif exp == "l1":
        plan.params = {"beta": _number(p, path, "beta")}
    elif exp == "as_diag":
        plan.params = {
            "beta": _number(p, path, "beta"),
            "m_grid": _grid(p, path, "m_grid", int),
            "n_cap": _integer(p, path, "n_cap"),
            "epsilon": _number(p, path, "epsilon"),
        }
    elif exp == "aui":
        plan.params = {
            "beta": _number(p, path, "beta"),
            "q": _number(p, path, "q"),
            "x_grid": _grid(p, path, "x_grid"),
        }
    elif exp == "supermart":
        if plan.family.family != "supermartingale":
            raise _err("config.family.name", "supermart experiment needs the supermartingale family")
        plan.params = {"beta": _number(p, path, "beta")}
    elif exp == "expbound":
        plan.params = {"y_grid": _grid(p, path, "y_grid")}
        try:
            plan.family = SequenceSpec.exp_tail(plan.bound_params)
        except ValueError as exc:
            raise _err("config.bound_params", str(exc)) from exc
    elif exp in ("bayes_risk", "mar_mean"):
        n = _integer(p, path, "n")
        if n < 1:
            raise _err(f"{path}.n", "must be >= 1")
        plan.params = {"n": n}
        plan.dgp_name, plan.dgp = _build_dgp(cfg.dgp, "config.dgp", exp)
        plan.schedule = _build_schedule(cfg.schedule, "config.schedule", exp)
    elif exp == "bound_table":
        plan.params = {
            "y_grid": _grid(p, path, "y_grid"),
            "n_grid": _grid(p, path, "n_grid", int),
        }
    return plan


def _build_dgp(obj: dict, path: str, experiment: str):
    if experiment == "bayes_risk":
        _check_keys(obj, path, ("preset",), ("amplitude",))
        if obj.get("preset") != "sine":
            raise _err(f"{path}.preset", "only the 'sine' preset is available")
        try:
            return "sine", sine_bayes_dgp(_number(obj, path, "amplitude", 0.4))
        except ValueError as exc:
            raise _err(path, str(exc)) from exc
    _check_keys(obj, path, ("preset",))
    if obj.get("preset") != "smooth":
        raise _err(f"{path}.preset", "only the 'smooth' preset is available")
    return "smooth", smooth_mar_dgp()


def _build_schedule(obj: dict, path: str, experiment: str):
    try:
        if experiment == "bayes_risk":
            _check_keys(obj, path, ("rate_r",), ("perturb_scale",))
            return EstimatorSchedule(
                rate_r=_number(obj, path, "rate_r"),
                perturb_scale=_number(obj, path, "perturb_scale", 0.0),
            )
        _check_keys(obj, path, ("rate_g", "rate_q"), ("perturb_scale_g", "perturb_scale_q"))
        return NuisanceSchedule(
            rate_g=_number(obj, path, "rate_g"),
            rate_q=_number(obj, path, "rate_q"),
            perturb_scale_g=_number(obj, path, "perturb_scale_g", 0.0),
            perturb_scale_q=_number(obj, path, "perturb_scale_q", 0.0),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise _err(path, str(exc)) from exc


def _online_rows(experiment: str, family: str, record, seed_value: int) -> list[ResultRow]:
    est_name = "r_hat" if experiment == "bayes_risk" else "psi_hat"
    estimates = record.r_hat if experiment == "bayes_risk" else record.psi_hat
    rows = []
    for i, n in enumerate(record.prefix_ns):
        for stat, series in (
            (est_name, estimates),
            ("martingale_part", record.martingale_part),
            ("remainder_avg", record.remainder_avg),
            ("remainder_step", record.remainder_step),
        ):
            rows.append(
                ResultRow(
                    experiment=experiment,
                    family=family,
                    n=int(n),
                    threshold=None,
                    statistic=stat,
                    value=float(series[i]),
                    ci_low=None,
                    ci_high=None,
                    replications=1,
                    seed=seed_value,
                )
            )
    return rows


def _execute(plan: _Plan, cfg: RunConfig) -> ExperimentResult:
    exp = plan.experiment
    if exp == "counterexample":
        return counterexample_sweep(
            plan.family.params, plan.params["M"], plan.params["k_grid"], plan.mc
        )
    if exp == "l1":
        return estimate_scaled_l1(plan.family, plan.params["beta"], plan.mc)
    if exp == "as_diag":
        return path_sup_diagnostic(
            plan.family,
            plan.params["beta"],
            plan.params["m_grid"],
            plan.params["n_cap"],
            plan.params["epsilon"],
            plan.mc,
        )
    if exp == "aui":
        return aui_tail_diagnostic(
            plan.family, plan.params["beta"], plan.params["q"], plan.params["x_grid"], plan.mc
        )
    if exp == "supermart":
        return supermartingale_condition_check(plan.family, plan.params["beta"], plan.mc)
    if exp == "expbound":
        return bound_vs_empirical(plan.bound_params, plan.family, plan.params["y_grid"], plan.mc)
    if exp == "bayes_risk":
        experiment = BayesRiskExperiment(plan.dgp, plan.schedule, plan.params["n"])
        record = experiment.run(plan.mc.seed)
        rows = _online_rows(exp, f"bayes_dgp:{plan.dgp_name}", record, plan.mc.seed.value)
        meta = {
            "artifact_version": _VERSION,
            "experiment": exp,
            "family": f"bayes_dgp:{plan.dgp_name}",
            "r_star": record.r_star,
            "identity_residual": record.identity_residual,
            "seed": {"value": plan.mc.seed.value, "stream_id": plan.mc.seed.stream_id},
        }
        return ExperimentResult(rows=rows, metadata=meta)
    if exp == "mar_mean":
        experiment = MarMeanExperiment(plan.dgp, plan.schedule, plan.params["n"])
        record = experiment.run(plan.mc.seed)
        rows = _online_rows(exp, f"mar_dgp:{plan.dgp_name}", record, plan.mc.seed.value)
        meta = {
            "artifact_version": _VERSION,
            "experiment": exp,
            "family": f"mar_dgp:{plan.dgp_name}",
            "psi_true": record.psi_true,
            "identity_residual": record.identity_residual,
            "seed": {"value": plan.mc.seed.value, "stream_id": plan.mc.seed.stream_id},
        }
        return ExperimentResult(rows=rows, metadata=meta)
    if exp == "bound_table":
        seed_value = 0
        if cfg.mc and isinstance(cfg.mc.get("seed"), dict):
            seed_value = int(cfg.mc["seed"].get("value", 0))
        rows = []
        for n in plan.params["n_grid"]:
            for y in plan.params["y_grid"]:
                thr, prob = cesaro_tail_bound(plan.bound_params, n, y)
                common = dict(
                    experiment=exp,
                    family="analytic",
                    n=int(n),
                    threshold=float(y),
                    replications=0,
                    seed=seed_value,
                )
                rows.append(
                    ResultRow(statistic="analytic_bound", value=prob, ci_low=None, ci_high=None, **common)
                )
                rows.append(
                    ResultRow(
                        statistic="exceedance_threshold", value=thr, ci_low=None, ci_high=None, **common
                    )
                )
        meta = {
            "artifact_version": _VERSION,
            "experiment": exp,
            "family": "analytic",
            "bound_params": asdict(plan.bound_params),
        }
        return ExperimentResult(rows=rows, metadata=meta)
    raise ConfigError(f"unknown experiment {exp!r}")


@dataclass
class RunOutcome:
    exit_code: int
    summary: str
    csv_path: Path | None = None
    json_path: Path | None = None
    manifest_path: Path | None = None


def _apply_overrides(cfg: RunConfig, workers, seed) -> RunConfig:
    if cfg.mc is None or (workers is None and seed is None):
        return cfg
    mc = dict(cfg.mc)
    if workers is not None:
        mc["workers"] = int(workers)
    if seed is not None:
        mc_seed = dict(mc.get("seed", {}))
        mc_seed["value"] = int(seed)
        mc["seed"] = mc_seed
    return replace(cfg, mc=mc)


def run(
    cfg: RunConfig,
    workers: int | None = None,
    out_dir: str | None = None,
    seed: int | None = None,
) -> RunOutcome:
    """Execute a validated config; write CSV, JSON and a manifest."""
    cfg = _apply_overrides(cfg, workers, seed)
    plan = _build_plan(cfg)
    directory = Path(
        out_dir
        or cfg.output.get("dir")
        or os.environ.get("CESAROLAB_OUT_DIR")
        or "."
    )
    directory.mkdir(parents=True, exist_ok=True)
    basename = cfg.output["basename"]
    started = datetime.now(timezone.utc).isoformat()

    result = _execute(plan, cfg)
    result.metadata["config"] = cfg.to_obj()
    result.metadata["config_hash"] = config_hash(cfg)

    csv_path = directory / f"{basename}.csv"
    json_path = directory / f"{basename}.json"
    manifest_path = directory / f"{basename}_manifest.json"
    result.write_csv(csv_path)
    result.write_json(json_path)

    digests = {}
    for path in (csv_path, json_path):
        digests[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()
    seed_obj = result.metadata.get("seed", {"value": 0, "stream_id": 0})
    manifest = RunManifest(
        artifact_version=_VERSION,
        config_hash=result.metadata["config_hash"],
        seed=seed_obj,
        started_at=started,
        finished_at=datetime.now(timezone.utc).isoformat(),
        outputs=digests,
    )
    with open(manifest_path, "w") as fh:
        json.dump(asdict(manifest), fh, indent=2, sort_keys=True)
        fh.write("\n")

    violations = result.metadata.get("violations", [])
    code = EXIT_BOUND_VIOLATED if (cfg.experiment == "expbound" and violations) else EXIT_OK
    summary = (
        f"{cfg.experiment}: {len(result.rows)} rows -> {csv_path}"
        + (f" [{len(violations)} bound violation(s)]" if code == EXIT_BOUND_VIOLATED else "")
    )
    return RunOutcome(
        exit_code=code,
        summary=summary,
        csv_path=csv_path,
        json_path=json_path,
        manifest_path=manifest_path,
    )


def _cmd_run(args) -> int:
    try:
        cfg = parse_config(Path(args.config).read_text())
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        outcome = run(cfg, workers=args.workers, out_dir=args.out_dir, seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME_ERROR
    print(outcome.summary)
    return outcome.exit_code


def _cmd_validate(args) -> int:
    try:
        cfg = parse_config(Path(args.config).read_text())
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    print(f"valid: {cfg.experiment} config, hash {config_hash(cfg)[:12]}")
    return EXIT_OK


def _cmd_bound_table(args) -> int:
    obj = {
        "schema_version": SCHEMA_VERSION,
        "experiment": "bound_table",
        "bound_params": {
            "c0": args.c0,
            "c1": args.c1,
            "c2": args.c2,
            "beta": args.beta,
            "gamma": args.gamma,
            "delta": args.delta,
        },
        "params": {
            "n_grid": [int(x) for x in args.n_grid.split(",")],
            "y_grid": [float(x) for x in args.y_grid.split(",")],
        },
        "output": {"basename": args.basename},
    }
    try:
        cfg = parse_config(json.dumps(obj))
        outcome = run(cfg, out_dir=args.out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME_ERROR
    print(outcome.summary)
    return outcome.exit_code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cesaro-lab",
        description="Config-driven Monte Carlo experiments on running means of random sequences.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--workers", type=int, default=None)
    p_run.add_argument("--out-dir", default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="validate a config without running it")
    p_val.add_argument("config")
    p_val.set_defaults(func=_cmd_validate)

    p_bt = sub.add_parser("bound-table", help="tabulate the analytic running-mean bound")
    for name in ("c0", "c1", "c2", "beta", "gamma", "delta"):
        p_bt.add_argument(f"--{name}", type=float, required=True)
    p_bt.add_argument("--n-grid", required=True, help="comma-separated indices, e.g. 64,256,1024")
    p_bt.add_argument("--y-grid", required=True, help="comma-separated levels >= 1, e.g. 1,2,4")
    p_bt.add_argument("--out-dir", default=None)
    p_bt.add_argument("--basename", default="bound_table")
    p_bt.set_defaults(func=_cmd_bound_table)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
