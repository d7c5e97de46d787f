"""Command-line front end.

Reads an ensemble description from a JSON file and runs one of four
commands: ``estimate`` (cycle-expansion table), ``simulate`` (Monte Carlo
oracle), ``compare`` (both, with a z-score verdict), ``diagnose``
(contraction and cross-check diagnostics).

Ensemble file format::

    {
      "dimension": 2,
      "matrices": [[[2, 1], [1, 1]], [[1, 1], [1, 2]]],
      "transition": [[0.6, 0.4], [0.3, 0.7]],
      "initial": [0.5, 0.5]
    }

Matrices and the transition may also be given flat in row-major order;
``initial`` is optional (uniform by default).

The machine-readable table (CSV or JSON, numeric fields formatted to
``--precision`` significant digits, identical tokens in both formats) goes
to ``--output`` or stdout; human-oriented progress goes to stderr so that
repeated runs of the same configuration emit byte-identical payloads.

Exit codes: 0 success, 1 comparison failure or numeric breakdown,
2 usage/validation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from .errors import (
    BudgetExceededError,
    DegenerateDenominatorError,
    EnsembleValidationError,
    LyapcycleError,
    NoConvergenceError,
    NoSignChangeError,
    ParseError,
)
from .expansion import (
    cycle_trace,
    lyapunov_estimate,
    smallest_positive_root,
    state_from_traces,
)
from .linalg import det_factor_charpoly, perron
from .model import ensemble, necklace_count
from .montecarlo import contraction_check, mc_lyapunov
from .projective import birkhoff_coefficient, chart_jacobian, gauss_determinant

DEFAULT_ORDER = 8
DEFAULT_PRECISION = 15


def load_ensemble(path):
    """Parse and validate an ensemble JSON file.

    Raises :class:`ParseError` for unreadable/ill-formed files and
    :class:`EnsembleValidationError` carrying every invariant violation.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")
    try:
        dim = int(raw["dimension"])
        matrices = [_as_grid(m, dim, f"matrices[{i}]")
                    for i, m in enumerate(raw["matrices"])]
        k = len(matrices)
        transition = _as_grid(raw["transition"], k, "transition")
        initial = raw.get("initial")
    except KeyError as exc:
        raise ParseError(f"{path}: missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return ensemble(matrices, transition, initial)


def _as_grid(data, size, what):
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1 and arr.size == size * size:
        arr = arr.reshape(size, size)
    if arr.shape != (size, size):
        raise ValueError(f"{what} must be {size} x {size} (nested or flat row-major)")
    return arr


def save_ensemble(ens, path):
    """Write an ensemble back to JSON; floats round-trip exactly."""
    payload = {
        "dimension": int(ens.dim),
        "matrices": [m.tolist() for m in ens.matrices],
        "transition": ens.transition.tolist(),
        "initial": ens.initial.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _num_token(value, precision):
    x = float(value)
    if math.isfinite(x):
        return f"{x:.{precision}g}", True
    return ("inf" if x > 0 else "-inf") if not math.isnan(x) else "nan", False


def _csv_text(fields, rows, precision):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        cells = []
        for field in fields:
            value = row[field]
            if value is None:
                cells.append("")
            elif isinstance(value, str):
                cells.append(value)
            elif isinstance(value, (int, np.integer)):
                cells.append(str(int(value)))
            else:
                cells.append(_num_token(value, precision)[0])
        writer.writerow(cells)
    return buf.getvalue()


def _json_text(command, fields, rows, precision):
    lines = ["{", f'  "command": {json.dumps(command)},', '  "rows": [']
    for idx, row in enumerate(rows):
        items = []
        for field in fields:
            value = row[field]
            if value is None:
                token = "null"
            elif isinstance(value, str):
                token = json.dumps(value)
            elif isinstance(value, (int, np.integer)):
                token = str(int(value))
            else:
                token, finite = _num_token(value, precision)
                if not finite:
                    token = json.dumps(token)
            items.append(f'"{field}": {token}')
        comma = "," if idx + 1 < len(rows) else ""
        lines.append("    {" + ", ".join(items) + "}" + comma)
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _emit(args, command, fields, rows):
    if args.format == "csv":
        text = _csv_text(fields, rows, args.precision)
    else:
        text = _json_text(command, fields, rows, args.precision)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _info(message):
    print(message, file=sys.stderr)


ESTIMATE_FIELDS = (
    "order",
    "gamma",
    "gap",
    "coeff",
    "coeff_deriv",
    "trace",
    "trace_deriv",
    "cycles",
)


def cmd_estimate(args):
    ens = load_ensemble(args.ensemble)
    start = time.perf_counter()
    traces = []
    derivs = []
    counts = []
    elapsed = []
    for n in range(1, args.order + 1):
        value, deriv = cycle_trace(n, ens, n_jobs=args.jobs)
        traces.append(value)
        derivs.append(deriv)
        counts.append(necklace_count(ens.symbols, n))
        elapsed.append(time.perf_counter() - start)
    state = state_from_traces(traces, derivs, counts)

    rows = []
    for m in range(1, args.order + 1):
        rows.append(
            {
                "order": m,
                "gamma": state.gammas[m - 1],
                "gap": None if m == 1 else state.gaps[m - 2],
                "coeff": state.coeffs[m - 1],
                "coeff_deriv": state.coeff_derivs[m - 1],
                "trace": state.traces[m - 1],
                "trace_deriv": state.trace_derivs[m - 1],
                "cycles": counts[m - 1],
            }
        )
    _emit(args, "estimate", ESTIMATE_FIELDS, rows)
    for m in range(1, args.order + 1):
        gap = "" if m == 1 else f"  gap={state.gaps[m - 2]:.3e}"
        _info(
            f"order {m:2d}: gamma={state.gammas[m - 1]:.{args.precision}g}"
            f"{gap}  cycles={counts[m - 1]}  t={elapsed[m - 1]:.3f}s"
        )
    _info(f"gamma({args.order}) = {state.gammas[-1]:.{args.precision}g}")
    return 0


SIMULATE_FIELDS = ("mean", "stderr", "steps", "trials", "seed", "note")


def cmd_simulate(args):
    ens = load_ensemble(args.ensemble)
    start = time.perf_counter()
    est = mc_lyapunov(ens, args.steps, args.trials, args.seed)
    note = "" if args.trials > 1 else "stderr undefined for a single trial"
    rows = [
        {
            "mean": est.mean,
            "stderr": est.stderr,
            "steps": est.steps,
            "trials": est.trials,
            "seed": est.seed,
            "note": note,
        }
    ]
    _emit(args, "simulate", SIMULATE_FIELDS, rows)
    _info(
        f"mc mean = {est.mean:.{args.precision}g} +/- {est.stderr:.3g}"
        f"  [{time.perf_counter() - start:.3f}s]"
    )
    return 0


COMPARE_FIELDS = (
    "order",
    "gamma",
    "mc_mean",
    "mc_stderr",
    "z",
    "steps",
    "trials",
    "seed",
    "verdict",
)


def cmd_compare(args):
    ens = load_ensemble(args.ensemble)
    state = lyapunov_estimate(ens, args.order, n_jobs=args.jobs)
    est = mc_lyapunov(ens, args.steps, args.trials, args.seed)
    gamma = float(state.gammas[-1])
    diff = gamma - est.mean
    if est.stderr > 0:
        z = diff / est.stderr
    else:
        z = 0.0 if diff == 0 else math.inf
    verdict = "PASS" if abs(z) <= 3.0 else "FAIL"
    rows = [
        {
            "order": args.order,
            "gamma": gamma,
            "mc_mean": est.mean,
            "mc_stderr": est.stderr,
            "z": z,
            "steps": est.steps,
            "trials": est.trials,
            "seed": est.seed,
            "verdict": verdict,
        }
    ]
    _emit(args, "compare", COMPARE_FIELDS, rows)
    _info(
        f"gamma({args.order}) = {gamma:.{args.precision}g}, "
        f"mc = {est.mean:.{args.precision}g} +/- {est.stderr:.3g}, "
        f"z = {z:.3g} -> {verdict}"
    )
    return 0 if verdict == "PASS" else 1


DIAGNOSE_FIELDS = ("section", "index", "metric", "value")


def cmd_diagnose(args):
    ens = load_ensemble(args.ensemble)
    rows = []
    rates = []
    for i, m in enumerate(ens.matrices):
        report = birkhoff_coefficient(m)
        rates.append(report.birkhoff)
        lam, s = perron(m)
        jac_det = gauss_determinant(
            np.eye(ens.dim - 1) - chart_jacobian(m, s, lam)
        )
        char_det = det_factor_charpoly(m, lam)
        residual = abs(float(jac_det) - float(char_det)) / float(char_det)
        rows.append({"section": "matrix", "index": i, "metric": "diameter",
                     "value": report.diameter})
        rows.append({"section": "matrix", "index": i, "metric": "birkhoff",
                     "value": report.birkhoff})
        rows.append({"section": "matrix", "index": i, "metric": "det_residual",
                     "value": residual})
    rows.append({"section": "ensemble", "index": None,
                 "metric": "contraction_rate", "value": max(rates)})

    report = contraction_check(ens, args.samples, args.word_len, args.seed)
    rows.append({"section": "contraction", "index": None, "metric": "max_ratio",
                 "value": report.max_ratio})
    rows.append({"section": "contraction", "index": None, "metric": "samples",
                 "value": report.samples_checked})
    rows.append({"section": "contraction", "index": None, "metric": "skipped",
                 "value": report.skipped})

    traces = []
    derivs = []
    for n in range(1, args.order + 1):
        value, deriv = cycle_trace(n, ens)
        traces.append(value)
        derivs.append(deriv)
    state = state_from_traces(traces, derivs)
    for m in range(1, args.order + 1):
        try:
            root = smallest_positive_root(state.coeffs[:m])
        except NoSignChangeError:
            root = None
        rows.append({"section": "root", "index": m, "metric": "root",
                     "value": root})
    _emit(args, "diagnose", DIAGNOSE_FIELDS, rows)
    _info(
        f"worst contraction rate r = {max(rates):.6g}, "
        f"check max ratio = {report.max_ratio:.6g} over "
        f"{report.samples_checked} samples"
    )
    return 0


def _positive_int(text):
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 1")
    return value


def _nonnegative_int(text):
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from exc
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be >= 0")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("ensemble", help="ensemble JSON file")
    common.add_argument("--output", help="write the table here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--precision", type=_positive_int, default=DEFAULT_PRECISION,
                        help="significant digits for printed floats")

    parser = argparse.ArgumentParser(
        prog="lyapcycle",
        description="Lyapunov exponents of Markov-driven positive matrix products",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", parents=[common],
                         help="cycle-expansion estimates per truncation order")
    est.add_argument("--order", type=_positive_int, default=DEFAULT_ORDER)
    est.add_argument("--jobs", type=_positive_int, default=1)
    est.set_defaults(func=cmd_estimate)

    sim = sub.add_parser("simulate", parents=[common],
                         help="Monte Carlo estimate")
    sim.add_argument("--steps", type=_positive_int, default=10**6)
    sim.add_argument("--trials", type=_positive_int, default=16)
    sim.add_argument("--seed", type=_nonnegative_int, default=0)
    sim.set_defaults(func=cmd_simulate)

    cmp_ = sub.add_parser("compare", parents=[common],
                          help="expansion vs Monte Carlo with z-score verdict")
    cmp_.add_argument("--order", type=_positive_int, default=DEFAULT_ORDER)
    cmp_.add_argument("--jobs", type=_positive_int, default=1)
    cmp_.add_argument("--steps", type=_positive_int, default=10**6)
    cmp_.add_argument("--trials", type=_positive_int, default=16)
    cmp_.add_argument("--seed", type=_nonnegative_int, default=0)
    cmp_.set_defaults(func=cmd_compare)

    diag = sub.add_parser("diagnose", parents=[common],
                          help="contraction and cross-check diagnostics")
    diag.add_argument("--order", type=_positive_int, default=DEFAULT_ORDER)
    diag.add_argument("--samples", type=_positive_int, default=1000)
    diag.add_argument("--word-len", type=_positive_int, default=6)
    diag.add_argument("--seed", type=_nonnegative_int, default=0)
    diag.set_defaults(func=cmd_diagnose)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, EnsembleValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        BudgetExceededError,
        DegenerateDenominatorError,
        NoConvergenceError,
        NoSignChangeError,
        LyapcycleError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
