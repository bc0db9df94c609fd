"""Command line interface: ``scagen <subcommand> ...``.

Subcommands
-----------
generate            build a point set from ``--target measure=value`` pairs
clone               build a point set mimicking the measures of ``--input``
measure             print the nine measures of ``--input``
bench-reliability   RMSE of achieved vs target measures over replicates
bench-timing        generation time across ``--init-points`` values
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import io as pio
from .evaluation import ExperimentPlan, run_reliability, run_timing
from .exceptions import ScagenError
from .generator import GeneratorConfig, TargetSpec, clone_targets, generate
from .optimizer import GsaParams
from .scagnostics import MEASURE_NAMES, Measure, compute_all

SEED_ENV = "SCAGEN_SEED"
SUBCOMMANDS = ("generate", "clone", "measure", "bench-reliability", "bench-timing")

_DEFAULTS = GsaParams()

_EPILOG = (
    "measures: " + ", ".join(MEASURE_NAMES) + ". "
    f"Defaults: max_iter {_DEFAULTS.max_iter}, t0 {_DEFAULTS.t0:g}, q_v {_DEFAULTS.q_v}, "
    f"q_a {_DEFAULTS.q_a}, stop {_DEFAULTS.stop_threshold:g}, sigma2 {GeneratorConfig().sigma2}. "
    f"The seed defaults to ${SEED_ENV} when --seed is absent, else 0."
)


@dataclass
class CliConfig:
    subcommand: str
    targets: dict[str, float] = field(default_factory=dict)
    n_total: int | None = None
    n_init: int = 5
    sigma2: float = 0.1
    seed: int = 0
    gsa: GsaParams = field(default_factory=GsaParams)
    input: str | None = None
    output: str | None = None
    format: str | None = None
    plot: str | None = None
    trace: bool = False
    measures: tuple = ()
    values: tuple = (0.0, 0.5, 1.0)
    replicates: int = 20
    workers: int = 1
    init_points: tuple = (5, 25, 40)


def _target_pair(text: str) -> tuple[str, float]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected measure=value, got {text!r}")
    name, _, raw = text.partition("=")
    try:
        measure = Measure.parse(name).value
    except ScagenError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value for {measure} is not a number: {raw!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"value for {measure} must lie in [0, 1], got {raw!r}")
    return measure, value


def _measure_list(text: str) -> tuple[str, ...]:
    try:
        return tuple(Measure.parse(m).value for m in text.split(",") if m.strip())
    except ScagenError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _add_generation_options(p: argparse.ArgumentParser, n_default) -> None:
    g = p.add_argument_group("generation")
    g.add_argument("--n", dest="n_total", type=_positive_int, default=n_default,
                   help="total number of points N")
    g.add_argument("--n-init", type=_positive_int, default=5, help="points added per epoch")
    g.add_argument("--sigma2", type=float, default=0.1, help="variance of the jitter between epochs")
    g.add_argument("--seed", type=int, default=None, help=f"random seed (falls back to ${SEED_ENV}, then 0)")
    a = p.add_argument_group("annealing")
    a.add_argument("--t0", type=float, default=_DEFAULTS.t0, help="initial visiting temperature")
    a.add_argument("--qv", type=float, default=_DEFAULTS.q_v, help="visiting distribution parameter")
    a.add_argument("--qa", type=float, default=_DEFAULTS.q_a, help="acceptance distribution parameter")
    a.add_argument("--max-iter", type=_positive_int, default=_DEFAULTS.max_iter, help="iterations per epoch")
    a.add_argument("--stop", type=float, default=_DEFAULTS.stop_threshold,
                   help="stop an epoch once its loss reaches this value")


def _add_output_options(p: argparse.ArgumentParser, plot: bool = False) -> None:
    p.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=pio.FORMATS, default=None,
                   help="output format (default: from --output suffix, else csv)")
    if plot:
        p.add_argument("--plot", default=None, help="also write an SVG scatterplot here")
        p.add_argument("--trace", action="store_true", help="print per-epoch losses to stderr")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="scagen", description="Generate scatterplots with target scagnostics.",
                                     epilog=_EPILOG, formatter_class=fmt)
    sub = parser.add_subparsers(dest="subcommand", metavar="subcommand", required=True)

    p = sub.add_parser("generate", help="generate points for target measures", epilog=_EPILOG, formatter_class=fmt)
    p.add_argument("--target", "-t", action="append", type=_target_pair, default=[],
                   metavar="MEASURE=VALUE", help="target value for one measure (repeatable)")
    _add_generation_options(p, 50)
    _add_output_options(p, plot=True)

    p = sub.add_parser("clone", help="generate points mimicking an input dataset", epilog=_EPILOG,
                       formatter_class=fmt)
    p.add_argument("--input", "-i", required=True, help="reference point file (csv or json)")
    p.add_argument("--measures", type=_measure_list, default=None,
                   help="comma-separated measures to match (default: all nine)")
    _add_generation_options(p, None)
    _add_output_options(p, plot=True)

    p = sub.add_parser("measure", help="compute the nine measures of a point file", epilog=_EPILOG,
                       formatter_class=fmt)
    p.add_argument("--input", "-i", required=True, help="point file (csv or json)")
    _add_output_options(p)

    for name, helptext in (("bench-reliability", "RMSE of generated measures over replicates"),
                           ("bench-timing", "generation time across initial point counts")):
        p = sub.add_parser(name, help=helptext, epilog=_EPILOG, formatter_class=fmt)
        p.add_argument("--measures", type=_measure_list, default=MEASURE_NAMES,
                       help="comma-separated measures")
        p.add_argument("--values", type=_float_list, default=(0.0, 0.5, 1.0), help="comma-separated targets")
        p.add_argument("--replicates", type=_positive_int, default=20 if name == "bench-reliability" else 1,
                       help="replicates per cell")
        _add_generation_options(p, 50)
        if name == "bench-reliability":
            p.add_argument("--workers", type=_positive_int, default=1, help="parallel worker processes")
        else:
            p.add_argument("--init-points", type=_int_list, default=(5, 25, 40),
                           help="comma-separated n_init values")
        _add_output_options(p)
    return parser


def _resolve_seed(seed: int | None, parser: argparse.ArgumentParser) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None or not env.strip():
        return 0
    try:
        return int(env)
    except ValueError:
        parser.error(f"environment variable {SEED_ENV} is not an integer: {env!r}")


def parse_args(argv: list[str] | None = None) -> CliConfig:
    """Validate ``argv`` into a :class:`CliConfig`; usage errors exit with status 2."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = CliConfig(subcommand=ns.subcommand, input=getattr(ns, "input", None), output=ns.output,
                    format=ns.format)
    if ns.subcommand == "measure":
        return cfg
    cfg.seed = _resolve_seed(ns.seed, parser)
    cfg.n_total = ns.n_total
    cfg.n_init = ns.n_init
    cfg.sigma2 = ns.sigma2
    try:
        cfg.gsa = GsaParams(q_v=ns.qv, q_a=ns.qa, t0=ns.t0, max_iter=ns.max_iter, stop_threshold=ns.stop)
    except ScagenError as exc:
        parser.error(str(exc))
    if ns.subcommand == "generate":
        if not ns.target:
            parser.error("generate requires at least one --target MEASURE=VALUE")
        targets: dict[str, float] = {}
        for m, v in ns.target:
            if m in targets:
                parser.error(f"argument --target: measure {m!r} given more than once")
            targets[m] = v
        cfg.targets = targets
    if ns.subcommand in ("generate", "clone"):
        cfg.plot = ns.plot
        cfg.trace = ns.trace
    if ns.subcommand == "clone":
        cfg.measures = ns.measures or ()
    if ns.subcommand.startswith("bench"):
        cfg.measures = ns.measures
        if any(not 0.0 <= v <= 1.0 for v in ns.values) or not ns.values:
            parser.error("argument --values: targets must lie in [0, 1]")
        cfg.values = ns.values
        cfg.replicates = ns.replicates
        if ns.subcommand == "bench-reliability":
            cfg.workers = ns.workers
        else:
            if not ns.init_points or min(ns.init_points) < 1:
                parser.error("argument --init-points: expected positive integers")
            cfg.init_points = ns.init_points
    return cfg


def _emit(text: str, cfg: CliConfig) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        pio.atomic_write_text(cfg.output, text)


def _out_format(cfg: CliConfig) -> str:
    return pio.infer_format(cfg.output or "", cfg.format)


def _generator_config(cfg: CliConfig, n_total: int) -> GeneratorConfig:
    return GeneratorConfig(n_total=n_total, n_init=min(cfg.n_init, n_total), sigma2=cfg.sigma2,
                           gsa=cfg.gsa, seed=cfg.seed)


def _run_generation(cfg: CliConfig, targets: TargetSpec, n_total: int) -> None:
    callback = None
    if cfg.trace:
        def callback(epoch, value):
            print(f"epoch {epoch}: loss {value!r}", file=sys.stderr)
    result = generate(targets, _generator_config(cfg, n_total), callback=callback)
    text = pio.format_points(result.points, _out_format(cfg))
    if cfg.plot:
        pio.emit_plot(result.points, result.achieved, cfg.plot)
    _emit(text, cfg)
    print(f"final loss {result.final_loss:.6g}", file=sys.stderr)


def _format_measures(values: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(values, indent=1) + "\n"
    return "measure,value\n" + "".join(f"{k},{v!r}\n" for k, v in values.items())


def run(cfg: CliConfig) -> None:
    if cfg.subcommand == "generate":
        _run_generation(cfg, TargetSpec(cfg.targets), cfg.n_total)
    elif cfg.subcommand == "clone":
        ref = pio.read_points(cfg.input)
        targets = clone_targets(ref, cfg.measures or None)
        _run_generation(cfg, targets, cfg.n_total or ref.shape[0])
    elif cfg.subcommand == "measure":
        _emit(_format_measures(compute_all(pio.read_points(cfg.input)).as_dict(), _out_format(cfg)), cfg)
    else:
        plan = ExperimentPlan(measures=cfg.measures, values=cfg.values, replicates=cfg.replicates,
                              config=_generator_config(cfg, cfg.n_total), base_seed=cfg.seed)
        if cfg.subcommand == "bench-reliability":
            report = run_reliability(plan, workers=cfg.workers)
        else:
            report = run_timing(plan, cfg.init_points)
        _emit(report.to_json() if _out_format(cfg) == "json" else report.to_csv(), cfg)


def main(argv: list[str] | None = None) -> int:
    cfg = parse_args(argv)
    try:
        run(cfg)
    except (ScagenError, OSError) as exc:
        print(f"scagen: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
