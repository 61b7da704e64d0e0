"""Command-line front end.

Subcommands: fit (R2 sweep over k), diag (spectral/submodularity diagnostics),
dict (dictionary selection), synth (the synthetic Gaussian benchmark).

JSON is the canonical report (report.json in the output directory); CSV files
exist solely to feed external plotting. Reports are byte-identical across
reruns with the same inputs, flags, and GS_THREADS setting; wall-clock timing
is never written into them. Exit codes: 0 success, 2 validation/usage error,
3 enumeration-cap abort without a fallback.
"""

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import dictionary, model as model_mod, selection, spectral, submodularity
from .errors import BudgetError, GreedySelectError
from .util import DEFAULT_ENUM_CAP, worker_count

BETA_J = 2
BETA_EPS = 0.1


def _sanitize(obj):
    """JSON-safe copy: tuples to lists, numpy scalars to python, non-finite
    floats to the markers 'inf'/'-inf'/'nan'."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if hasattr(obj, "item"):
        obj = obj.item()
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return {float("inf"): "inf", float("-inf"): "-inf"}.get(obj, "nan")
    return obj


def _cell(value):
    """CSV cell: shortest round-trip float repr, markers passed through."""
    if isinstance(value, str):
        return value
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path, header, rows):
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _write_report(out_dir, report):
    path = Path(out_dir) / "report.json"
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        json.dump(_sanitize(report), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fingerprint(path, n, m):
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return {"path": str(path), "sha256": digest, "n": n, "m": m}


def _load_model(args):
    """Model plus input fingerprint from --input CSV or --model JSON.

    CSV input must name its target column(s); JSON models carry targets and
    an explicit request merely restricts them.
    """
    wanted = _requested_targets(args)
    if getattr(args, "input", None):
        table = model_mod.read_csv(args.input)
        if not wanted:
            raise GreedySelectError("no target column given")
        m = model_mod.from_samples(table, wanted)
        return m, _fingerprint(args.input, m.n, table.m)
    m = model_mod.read_model_json(args.model)
    if wanted:
        targets = tuple((t, m.target_vector(t)) for t in wanted)
        m = model_mod.CovarianceModel(names=m.names, C=m.C, targets=targets)
    return m, _fingerprint(args.model, m.n, None)


def _requested_targets(args):
    if getattr(args, "targets", None):
        return [t.strip() for t in args.targets.split(",") if t.strip()]
    if getattr(args, "target", None):
        return [args.target]
    return []


def _target_label(args, m):
    if args.target:
        return args.target
    return m.default_target()


def _selection_dict(res):
    return {
        "algorithm": res.algorithm,
        "order": list(res.order),
        "gains": list(res.gains),
        "r2": res.r2,
        "k": res.k,
        "evaluations": res.evaluations,
    }


def _parallel_map(fn, items):
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _k_range(args, n):
    k_min, k_max = args.k_min, args.k_max
    if not 1 <= k_min <= k_max <= n:
        raise GreedySelectError(
            f"k range [{k_min}, {k_max}] must lie within [1, {n}]"
        )
    return list(range(k_min, k_max + 1))


# ---------------------------------------------------------------------------
# fit

def _fit_row(m, target, k, cap):
    row = {
        "k": k,
        "fr": _selection_dict(selection.forward_regression(m, target, k)),
        "omp": _selection_dict(selection.omp(m, target, k)),
        "obl": _selection_dict(selection.oblivious(m, target, k)),
    }
    try:
        row["opt"] = _selection_dict(selection.exhaustive_opt(m, target, k, cap=cap))
    except BudgetError:
        row["opt"] = "capped"
    return row


def cmd_fit(args):
    m, fingerprint = _load_model(args)
    target = _target_label(args, m)
    m.target_vector(target)
    ks = _k_range(args, m.n)
    rows = _parallel_map(lambda k: _fit_row(m, target, k, args.cap), ks)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = {
        "command": "fit",
        "input": fingerprint,
        "target": target,
        "config": _config_echo(args),
        "rows": rows,
    }
    _write_report(out, report)
    _write_csv(
        out / "r2_vs_k.csv",
        ["k", "fr", "omp", "obl", "opt"],
        [
            [
                row["k"],
                row["fr"]["r2"],
                row["omp"]["r2"],
                row["obl"]["r2"],
                row["opt"]["r2"] if isinstance(row["opt"], dict) else "capped",
            ]
            for row in rows
        ],
    )
    return 0


# ---------------------------------------------------------------------------
# diag

def _diag_row(m, target, k, args):
    fr = selection.forward_regression(m, target, k)
    u = fr.order
    mode = args.ratio
    try:
        if mode == "exact":
            rep = submodularity.ratio_exact(m, target, u, k, cap=args.cap)
        elif mode == "pruned":
            rep = submodularity.ratio_pruned(m, target, u, k, eps=args.eps, cap=args.cap)
        else:
            rep = submodularity.ratio_sampled(m, target, u, k, args.trials, args.seed)
    except BudgetError:
        rep = submodularity.ratio_sampled(m, target, u, k, args.trials, args.seed)
    eig_k = spectral.sparse_eig_report(m, k, cap=args.cap, j=BETA_J, epsilon=BETA_EPS)
    k2 = min(2 * k, m.n)
    try:
        lam2k, _ = spectral.sparse_lam_min(m, k2, cap=args.cap)
        lam2k_mode = "exact"
    except BudgetError:
        lam2k = spectral.bound_only_report(m, k2, j=BETA_J, epsilon=BETA_EPS).lam_min_k
        lam2k_mode = "bound"
    return {
        "k": k,
        "u": list(u),
        "gamma": rep.gamma,
        "gamma_mode": rep.mode,
        "gamma_witness": None if rep.witness is None else
            [list(rep.witness[0]), list(rep.witness[1])],
        "gamma_skipped_pairs": rep.skipped_pairs,
        "gamma_evaluated_pairs": rep.evaluated_pairs,
        "lam_min_k": eig_k.lam_min_k,
        "lam_min_k_mode": eig_k.mode,
        "lam_min_2k": lam2k,
        "lam_min_2k_mode": lam2k_mode,
        "inv_kappa_k": (1.0 / eig_k.kappa_k) if eig_k.kappa_k > 0 else 0.0,
    }


def cmd_diag(args):
    m, fingerprint = _load_model(args)
    target = _target_label(args, m)
    m.target_vector(target)
    ks = _k_range(args, m.n)
    lam_min = float(spectral.sparse_lam_min(m, m.n, cap=None)[0])
    mu = spectral.coherence(m)
    rows = _parallel_map(lambda k: _diag_row(m, target, k, args), ks)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = {
        "command": "diag",
        "input": fingerprint,
        "target": target,
        "config": _config_echo(args),
        "lam_min": lam_min,
        "coherence": mu,
        "rows": rows,
    }
    _write_report(out, report)
    _write_csv(
        out / "diagnostics.csv",
        [
            "k", "gamma", "gamma_mode", "lam_min_k", "lam_min_2k",
            "lam_min_2k_mode", "inv_kappa_k", "lam_min", "coherence",
        ],
        [
            [
                row["k"], row["gamma"], row["gamma_mode"], row["lam_min_k"],
                row["lam_min_2k"], row["lam_min_2k_mode"], row["inv_kappa_k"],
                lam_min, mu,
            ]
            for row in rows
        ],
    )
    return 0


# ---------------------------------------------------------------------------
# dict

def cmd_dict(args):
    m, fingerprint = _load_model(args)
    problem = dictionary.DictionaryProblem(model=m, d=args.d, k=args.k)
    if args.algo == "sdsma":
        res = dictionary.sds_ma(problem)
    elif args.algo == "sdsomp":
        res = dictionary.sds_omp(problem)
    else:
        res = dictionary.exhaustive_dict_opt(problem, cap=args.cap)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = {
        "command": "dict",
        "input": fingerprint,
        "config": _config_echo(args),
        "algorithm": res.algorithm,
        "dictionary": list(res.dictionary),
        "F": res.F,
        "F_hat": res.F_hat,
        "F_omp": res.F_omp,
        "per_target": [
            {"target": label, "subset": list(S), "r2": r2}
            for label, S, r2 in res.per_target
        ],
    }
    _write_report(out, report)
    _write_csv(
        out / "dictionary.csv",
        ["target", "subset", "r2"],
        [
            [label, ";".join(str(i) for i in S), r2]
            for label, S, r2 in res.per_target
        ],
    )
    return 0


# ---------------------------------------------------------------------------
# synth

def cmd_synth(args):
    spec = model_mod.SyntheticSpec(
        n=args.n,
        m=args.m,
        rho=args.rho,
        coef_max=args.coef_max,
        noise_var=args.noise_var,
        seed=args.seed,
        runs=args.runs,
    )
    tables = model_mod.synth_generate(spec)
    k_max = min(args.k_max, spec.n)
    k_min = args.k_min
    if not 1 <= k_min <= k_max:
        raise GreedySelectError(f"k range [{k_min}, {k_max}] is empty")
    ks = list(range(k_min, k_max + 1))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.tables_dir:
        tdir = Path(args.tables_dir)
        tdir.mkdir(parents=True, exist_ok=True)
        for r, t in enumerate(tables):
            model_mod.write_csv_table(t, tdir / f"run{r:03d}.csv")

    def run_rows(table):
        m = model_mod.from_samples(table, ["z"])
        return [_fit_row(m, "z", k, args.cap) for k in ks]

    per_run = _parallel_map(run_rows, tables)
    means = []
    for i, k in enumerate(ks):
        row = [k]
        for alg in ("fr", "omp", "obl", "opt"):
            vals = [per_run[r][i][alg] for r in range(spec.runs)]
            if any(not isinstance(v, dict) for v in vals):
                row.append("capped")
            else:
                row.append(sum(v["r2"] for v in vals) / spec.runs)
        means.append(row)
    report = {
        "command": "synth",
        "config": _config_echo(args),
        "spec": {
            "n": spec.n, "m": spec.m, "rho": spec.rho,
            "coef_max": spec.coef_max, "noise_var": spec.noise_var,
            "seed": spec.seed, "runs": spec.runs,
        },
        "runs": [{"run": r, "rows": rows} for r, rows in enumerate(per_run)],
        "mean_r2": [
            {"k": row[0], "fr": row[1], "omp": row[2], "obl": row[3], "opt": row[4]}
            for row in means
        ],
    }
    _write_report(out, report)
    _write_csv(out / "synth_mean_r2.csv", ["k", "fr", "omp", "obl", "opt"], means)
    return 0


# ---------------------------------------------------------------------------

def _config_echo(args):
    # output locations are not part of what was computed
    skip = {"func", "out_dir", "tables_dir"}
    cfg = {k: v for k, v in vars(args).items() if k not in skip}
    cfg["gs_threads"] = os.environ.get("GS_THREADS", "0")
    return cfg


def _add_input_flags(p, multi_target=False):
    p.add_argument("--input", help="CSV file with a header row")
    p.add_argument("--model", help="precomputed model JSON")
    if multi_target:
        p.add_argument("--targets", help="comma-separated target columns")
        p.add_argument("--target", help="single target column (alias)")
    else:
        p.add_argument("--target", help="target column")
    p.add_argument("--out-dir", default=".", help="where reports are written")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP,
                   help="enumeration cap on exhaustive scans")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="greedyselect",
        description="Greedy subset selection with spectral and submodularity diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="R2 of FR/OMP/OBL/OPT over a range of k")
    _add_input_flags(p)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=8)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("diag", help="submodularity ratio and sparse eigenvalues per k")
    _add_input_flags(p)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--ratio", choices=["exact", "pruned", "sampled"], default="exact")
    p.add_argument("--eps", type=float, default=0.2, help="pruning threshold")
    p.add_argument("--trials", type=int, default=5000, help="sampled-mode draws")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_diag)

    p = sub.add_parser("dict", help="dictionary selection")
    _add_input_flags(p, multi_target=True)
    p.add_argument("-d", type=int, required=True, help="dictionary budget")
    p.add_argument("-k", type=int, required=True, help="per-target budget")
    p.add_argument("--algo", choices=["sdsma", "sdsomp", "opt"], required=True)
    p.set_defaults(func=cmd_dict)

    p = sub.add_parser("synth", help="synthetic Gaussian benchmark")
    p.add_argument("--n", type=int, default=29)
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--rho", type=float, default=0.6)
    p.add_argument("--coef-max", type=float, default=10.0)
    p.add_argument("--noise-var", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--cap", type=int, default=DEFAULT_ENUM_CAP)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--tables-dir", help="also write the generated tables as CSV")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("fit", "diag", "dict"):
        if bool(args.input) == bool(args.model):
            print("error: exactly one of --input or --model is required", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (GreedySelectError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
