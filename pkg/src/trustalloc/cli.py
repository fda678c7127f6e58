"""Command-line driver: ``simulate``, ``fit``, ``predict`` and ``report``.

Data goes to files; only ``predict`` writes to stdout. Diagnostics go to
stderr and every error class maps to its own exit status.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import formats
from .capability import CapabilitySpace
from .errors import (
    DimensionMismatch,
    ImpossibleObservation,
    OutOfRange,
    ParseError,
    TrustAllocError,
    ValidationError,
)
from .simulation import OMNISCIENT, Allocator, compute_metrics, run_episode
from .trust import Sigmoid, Step, batch_fit, predict_trust

logger = logging.getLogger("trustalloc")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_IMPOSSIBLE = 5
EXIT_IO = 6
EXIT_OTHER = 7

SEED_ENV = "TRUSTALLOC_SEED"

EPISODE_LOG = "episode_log.csv"
BOUNDS_TRACE = "bounds_trace.csv"
METRICS = "metrics.yaml"
SCENARIO_COPY = "scenario.yaml"
BELIEF = "belief.yaml"
FIT_SUMMARY = "fit_summary.yaml"
REPORT = "report.yaml"


def _model_from_args(args):
    return Step() if args.model == "step" else Sigmoid(args.beta)


def _vector_arg(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _seed_override(scenario):
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return scenario
    try:
        seed = int(raw)
    except ValueError:
        raise ValidationError(f"{SEED_ENV} must be an integer, got {raw!r}", field=SEED_ENV) from None
    logger.info("seed overridden by %s=%d", SEED_ENV, seed)
    return dataclasses.replace(scenario, seed=seed)


def cmd_simulate(args) -> int:
    scenario = _seed_override(formats.parse_scenario(args.scenario))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    log = run_episode(scenario)
    omniscient = log
    if scenario.allocator.name != OMNISCIENT:
        omniscient = run_episode(dataclasses.replace(scenario, allocator=Allocator(OMNISCIENT)))
    metrics = compute_metrics(log, scenario, omniscient)

    n = scenario.space.n
    (out / EPISODE_LOG).write_text(formats.episode_table(log, n))
    (out / BOUNDS_TRACE).write_text(formats.episode_bounds_table(log, scenario))
    (out / METRICS).write_text(formats.metrics_to_text(metrics, scenario))
    formats.write_scenario(scenario, out / SCENARIO_COPY)
    logger.info("simulated %d tasks -> %s", len(log), out)
    return EXIT_OK


def cmd_fit(args) -> int:
    space = CapabilitySpace(args.n, args.grid_resolution) if args.n else None
    observations = formats.read_observations(args.observations, space)
    n = len(observations[0].requirements)
    space = CapabilitySpace(n, args.grid_resolution)
    truth = None
    if args.truth is not None:
        if len(args.truth) != n:
            raise DimensionMismatch(f"--truth has {len(args.truth)} values for n={n}")
        truth = args.truth

    belief, trace = batch_fit(space, observations, _model_from_args(args), args.tol, args.max_sweeps)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / BOUNDS_TRACE).write_text(formats.fit_trace_table(trace, truth))
    formats.save_belief(belief, out / BELIEF)
    summary = {
        "format_version": formats.FORMAT_VERSION,
        "observations": len(observations),
        "updates": trace.n_updates,
        "sweeps": len(trace.sweep_ends),
        "converged": bool(trace.converged),
        "final_bounds": [[float(lo), float(hi)] for lo, hi in trace.final()],
    }
    (out / FIT_SUMMARY).write_text(formats.dump_yaml(summary))
    if not trace.converged:
        logger.warning("bounds still moving after %d sweeps", args.max_sweeps)
    return EXIT_OK


def cmd_predict(args) -> int:
    belief = formats.load_belief(args.belief)
    tau = predict_trust(belief, args.requirements, _model_from_args(args))
    print(formats.fmt(tau))
    return EXIT_OK


def cmd_report(args) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        raise FileNotFoundError(f"not a directory: {root}")
    runs = sorted(p for p in root.rglob(METRICS))
    if not runs:
        raise ParseError(f"no {METRICS} files found", path=str(root))

    groups: dict[str, list[dict]] = {}
    for p in runs:
        doc = formats.load_yaml_doc(p)
        groups.setdefault(str(doc.get("allocator", "unknown")), []).append(doc)

    report = {"format_version": formats.FORMAT_VERSION, "runs": len(runs), "allocators": {}}
    for name, docs in sorted(groups.items()):
        entry = {"runs": len(docs), "seeds": sorted(int(d.get("seed", 0)) for d in docs)}
        for key in ("cumulative_reward", "success_rate", "regret"):
            vals = np.array([d[key] for d in docs if key in d], dtype=float)
            if vals.size:
                entry[key] = {
                    "mean": float(vals.mean()),
                    "std": float(vals.std(ddof=1)) if vals.size > 1 else 0.0,
                    "min": float(vals.min()),
                    "max": float(vals.max()),
                }
        report["allocators"][name] = entry
    target = Path(args.out) if args.out else root / REPORT
    target.write_text(formats.dump_yaml(report))
    logger.info("aggregated %d runs -> %s", len(runs), target)
    return EXIT_OK


def _add_model_args(p, default="sigmoid"):
    p.add_argument("--model", choices=("step", "sigmoid"), default=default, help="trustor's success model")
    p.add_argument("--beta", type=float, default=0.05, help="sigmoid steepness scale")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trustalloc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one episode from a scenario file")
    p.add_argument("scenario")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="batch-fit a capability belief to an observation file")
    p.add_argument("observations")
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=None, help="dimension count (default: inferred from the file)")
    p.add_argument("--grid-resolution", type=int, default=101)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--max-sweeps", type=int, default=50)
    p.add_argument("--truth", type=_vector_arg, default=None, help="true capabilities to record in the trace")
    _add_model_args(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="print trust for a requirement vector")
    p.add_argument("--belief", required=True)
    p.add_argument("--requirements", required=True, type=_vector_arg)
    _add_model_args(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("report", help="aggregate metrics of run directories")
    p.add_argument("directory")
    p.add_argument("--out", default=None, help=f"report file (default: <directory>/{REPORT})")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ParseError as exc:
        code, msg = EXIT_PARSE, f"parse error: {exc}"
    except (ValidationError, DimensionMismatch, OutOfRange) as exc:
        code, msg = EXIT_VALIDATION, f"invalid input: {exc}"
    except ImpossibleObservation as exc:
        code, msg = EXIT_IMPOSSIBLE, f"impossible observation: {exc}"
    except OSError as exc:
        code, msg = EXIT_IO, f"i/o error: {exc}"
    except (TrustAllocError, ValueError) as exc:
        code, msg = EXIT_OTHER, f"error: {exc}"
    print(f"trustalloc: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
