"""Command-line entry point: ``omp-perturb <subcommand> ...``.

Exit codes: 0 success, 1 soundness violations or failure not reproduced,
2 parse/config error, 3 dimension mismatch, 4 parameter domain error,
5 subset enumeration over the cap.
"""
import argparse
import csv
import dataclasses
import json
import os
import sys

import numpy as np

from . import counterexample
from .errors import CombinatorialLimit, DimensionMismatch, OmpPerturbError
from .experiment import (
    ConfigError,
    ExperimentConfig,
    aggregate,
    run_experiment,
    write_records_csv,
)
from .guarantees import (
    compare_coherence,
    compare_error_bounds_c2,
    compare_huangzhu,
)
from .linalg import CAP_ENV_VAR
from .omp import omp_run
from .rip import coherence, ric_exact

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DIM, EXIT_DOMAIN, EXIT_CAP = 0, 1, 2, 3, 4, 5


class ParseError(ValueError):
    pass


def read_matrix(path):
    """Headerless CSV of floats, one matrix row per line."""
    rows = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: not a row of numbers: {','.join(row)}") from None
            if len(rows[-1]) != len(rows[0]):
                raise ParseError(f"{path}:{lineno}: expected {len(rows[0])} columns")
    if not rows:
        raise ParseError(f"{path}: empty file")
    A = np.array(rows)
    if not np.all(np.isfinite(A)):
        raise ParseError(f"{path}: non-finite entry")
    return A


def read_vector(path):
    """A single row or a single column of floats."""
    A = read_matrix(path)
    if min(A.shape) != 1:
        raise ParseError(f"{path}: expected a vector, got shape {A.shape}")
    return A.ravel()


def _fmt(v):
    return repr(float(v))


def write_matrix(path, A):
    A = np.atleast_2d(A)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in A:
            w.writerow([_fmt(v) for v in row])


def write_vector(path, v):
    write_matrix(path, np.asarray(v).reshape(-1, 1))


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _dump(obj, fh=None):
    text = json.dumps(obj, indent=2, default=_json_default)
    if fh is None:
        print(text)
    else:
        fh.write(text + "\n")


# -- subcommands --------------------------------------------------------------


def cmd_recover(args):
    A = read_matrix(args.matrix)
    y = read_vector(args.measurements)
    if y.size != A.shape[0]:
        raise DimensionMismatch(f"y has length {y.size}, matrix has {A.shape[0]} rows")
    k = args.k if args.k is not None else min(A.shape)
    trace = omp_run(y, A, k)
    print(f"{'iter':>4}  {'index':>5}  {'max|h|':>14}  {'residual':>14}")
    for i, it in enumerate(trace.iterations, start=1):
        print(f"{i:>4}  {it.selected_index:>5}  {it.h_max_abs:>14.8g}  {it.residual_norm:>14.8g}")
    print("x_hat: " + " ".join(f"{v:.8g}" for v in trace.x_hat))
    if args.out:
        write_vector(args.out, trace.x_hat)
    return EXIT_OK


def cmd_counterexample(args):
    inst = counterexample.build(args.k, args.eta, args.t0, args.xi)
    trace = omp_run(inst.y_tilde, inst.phi_tilde, inst.k)
    failed = inst.k in trace.selected
    summary = {
        "k": inst.k,
        "eta": inst.eta,
        "t0": inst.t0,
        "xi": inst.xi,
        "delta": inst.delta,
        "delta_bound": inst.delta_bound,
        "eigenvalues": np.linalg.eigvalsh(inst.phi_tilde.T @ inst.phi_tilde),
        "omp_first_pick": trace.selected[0],
        "failed": failed,
    }
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for name, M in (("phi", inst.phi), ("phi_tilde", inst.phi_tilde), ("E", inst.E)):
            write_matrix(os.path.join(args.out, f"{name}.csv"), M)
        for name, v in (("b", inst.b), ("x", inst.x), ("y_tilde", inst.y_tilde)):
            write_vector(os.path.join(args.out, f"{name}.csv"), v)
        with open(os.path.join(args.out, "summary.json"), "w") as fh:
            _dump(summary, fh)
    _dump(summary)
    return EXIT_OK if failed else EXIT_FAIL


def load_config(args):
    cfg = ExperimentConfig.load(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.cap is not None:
        overrides["cap"] = args.cap
    if args.out is not None:
        overrides["output_path"] = args.out
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), **overrides})
    return cfg


def cmd_montecarlo(args):
    cfg = load_config(args)
    records = run_experiment(cfg)
    summary = aggregate(cfg, records)
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as fh:
            write_records_csv(records, fh)
        root, _ = os.path.splitext(cfg.output_path)
        with open(root + ".json", "w") as fh:
            _dump(summary, fh)
    else:
        write_records_csv(records, sys.stdout)
    _dump(summary, sys.stderr if not cfg.output_path else None)
    return EXIT_OK if summary["violations"] == 0 else EXIT_FAIL


def cmd_compare(args):
    if args.matrix:
        if args.k is None:
            raise ParseError("--k is required with --matrix")
        A = read_matrix(args.matrix)
        k = args.k
        mu = coherence(A)
        delta_k = ric_exact(A, k, args.cap).delta
        delta_k1 = ric_exact(A, k + 1, args.cap).delta
        delta_2k = ric_exact(A, 2 * k, args.cap).delta if 2 * k <= A.shape[1] else None
    else:
        missing = [f for f in ("mu", "k", "delta_k", "delta_k1") if getattr(args, f) is None]
        if missing:
            raise ParseError("missing " + ", ".join("--" + f.replace("_", "-") for f in missing))
        mu, k, delta_k, delta_k1 = args.mu, args.k, args.delta_k, args.delta_k1
        delta_2k = args.delta_2k
    rows = {"mu": mu, "k": k, "delta_k": delta_k, "delta_k1": delta_k1, "delta_2k": delta_2k}

    if mu * (k - 1) < 1 and delta_k < 1:
        coh = compare_coherence(mu, k, args.t0, args.norm_b, delta_k)
        rows["coherence"] = dataclasses.asdict(coh)
    else:
        rows["coherence"] = None
    hz = compare_huangzhu(k, delta_k1, delta_k, args.t0, args.norm_b)
    rows["noise_conditions"] = dataclasses.asdict(hz)
    if delta_2k is not None and delta_k <= 0.5:
        eb = compare_error_bounds_c2(delta_2k, delta_k, args.beta, args.gamma, args.norm_x1,
                                     args.norm_x, k)
        rows["error_bounds"] = dataclasses.asdict(eb)
    else:
        rows["error_bounds"] = None
    _dump(rows)
    return EXIT_OK


def cmd_ric(args):
    A = read_matrix(args.matrix)
    rep = ric_exact(A, args.k, args.cap)
    _dump(dataclasses.asdict(rep))
    return EXIT_OK


# -- wiring ---------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="omp-perturb",
        description="OMP under perturbed measurements and sensing matrices.",
        epilog=f"{CAP_ENV_VAR} overrides the default subset enumeration cap.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, help="base random seed")
        p.add_argument("--trials", type=int, help="number of Monte-Carlo trials")
        p.add_argument("--cap", type=int, help="subset enumeration limit")
        p.add_argument("--out", help="output file or directory")

    p = sub.add_parser("recover", help="run OMP on a matrix and measurement vector")
    p.add_argument("matrix")
    p.add_argument("measurements")
    p.add_argument("--k", type=int, help="iterations (default: min(m, n))")
    common(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("counterexample", help="build and run the failing instance")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--eta", type=float, default=1.1)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--xi", type=float, default=0.5)
    common(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("montecarlo", help="run a JSON-configured soundness sweep")
    p.add_argument("config")
    p.add_argument("--workers", type=int)
    common(p)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("compare", help="evaluate condition and bound comparisons")
    p.add_argument("--matrix")
    p.add_argument("--k", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--delta-k", type=float)
    p.add_argument("--delta-k1", type=float)
    p.add_argument("--delta-2k", type=float)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--norm-b", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--norm-x1", type=float, default=1.0)
    p.add_argument("--norm-x", type=float, default=1.0)
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("ric", help="exact restricted isometry constant of a matrix")
    p.add_argument("matrix")
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_ric)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DimensionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIM
    except CombinatorialLimit as exc:
        print(f"error: {exc} (raise it with --cap or {CAP_ENV_VAR})", file=sys.stderr)
        return EXIT_CAP
    except (OmpPerturbError, ValueError) as exc:
        # remaining domain errors, e.g. parameters outside a construction's range
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
