"""Command-line entry points.

Five subcommands: elicit, analyze-discrete, analyze-binormal, analyze-dp,
prevalence. Every analysis prints a JSON report to stdout and, with --out,
also writes report.json plus CSV sidecars (rb_curves.csv, assessments.csv,
diagnostics.csv) into the directory.

Options can come from a config file (--config): flat "key = value" lines,
# comments allowed, keys named like the long flags with dashes or
underscores. Flags given on the command line win over the file.

Exit codes: 0 success, 2 bad configuration/flags, 3 bad data file,
4 Monte Carlo diagnostic failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import pathlib
import sys

import numpy as np

from . import __version__
from ._kernels import BACKEND
from ._mc import MCDiagnosticError
from .binormal_model import BinormalOptions, SufficientStats, infer_binormal
from .discrete_model import CountData, DirichletParams, DiscreteOptions, infer_discrete
from .dp_model import DPData, DPModelSpec, DPOptions, default_cutoff_grid, infer_dp
from .elicitation import (
    BetaParams,
    ElicitationError,
    KnownPrevalence,
    elicit_beta,
    elicit_dp_concentration,
    elicit_normal_gamma,
)
from .prevalence import PrevalenceModel, infer_prevalence
from .rb_core import Grid


class CLIError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_config(path: str) -> dict[str, str]:
    p = pathlib.Path(path)
    if not p.is_file():
        raise CLIError(2, f"config file not found: {path}")
    out: dict[str, str] = {}
    for i, raw in enumerate(p.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CLIError(2, f"{path}:{i}: expected 'key = value'")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _coerce(action: argparse.Action, raw: str):
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise CLIError(2, f"config key {action.dest!r}: expected a boolean, got {raw!r}")
    if action.type is None:
        return raw
    try:
        return action.type(raw)
    except (TypeError, ValueError):
        raise CLIError(2, f"config key {action.dest!r}: bad value {raw!r}")


def _apply_config(
    parser: argparse.ArgumentParser,
    subparsers: dict[str, argparse.ArgumentParser],
    args: list[str],
) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(args)
    if known.config:
        command = args[0] if args and not args[0].startswith("-") else None
        sub = subparsers.get(command)
        if sub is None:
            raise CLIError(2, "--config requires a subcommand")
        cfg = _read_config(known.config)
        actions = {a.dest: a for a in sub._actions}
        bad = sorted(set(cfg) - set(actions))
        if bad:
            raise CLIError(2, f"unknown config keys: {', '.join(bad)}")
        # replace the subcommand's own defaults, so explicit flags still win
        # (the subparser parses into a fresh namespace, so defaults set on the
        # top-level parser would be clobbered)
        sub.set_defaults(**{k: _coerce(actions[k], v) for k, v in cfg.items()})
    try:
        return parser.parse_args(args)
    except SystemExit as e:
        # argparse exits 2 on bad flags already; let --help exit 0
        raise SystemExit(e.code if e.code in (0, None) else 2)


# ---------------------------------------------------------------- data files


def _read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    p = pathlib.Path(path)
    if not p.is_file():
        raise CLIError(3, f"data file not found: {path}")
    with p.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise CLIError(3, f"{path}: no data rows")
    return rows[0], rows[1:]


def _load_counts(path: str) -> CountData:
    header, rows = _read_csv(path)
    try:
        li = header.index("level")
        ni = header.index("count_nd")
        di = header.index("count_d")
    except ValueError:
        raise CLIError(3, f"{path}: need columns level,count_nd,count_d")
    try:
        levels = tuple(float(r[li]) for r in rows)
        f_nd = tuple(int(r[ni]) for r in rows)
        f_d = tuple(int(r[di]) for r in rows)
        return CountData(levels=levels, counts_nd=f_nd, counts_d=f_d)
    except (ValueError, IndexError) as e:
        raise CLIError(3, f"{path}: {e}")


def _load_scores(path: str, filt: str | None) -> tuple[np.ndarray, np.ndarray]:
    header, rows = _read_csv(path)
    try:
        gi = header.index("group")
        vi = header.index("value")
    except ValueError:
        raise CLIError(3, f"{path}: need columns group,value")
    if filt:
        if "=" not in filt:
            raise CLIError(2, "--filter expects column=value")
        col, val = filt.split("=", 1)
        try:
            ci = header.index(col)
        except ValueError:
            raise CLIError(3, f"{path}: no column {col!r} to filter on")
        rows = [r for r in rows if r[ci] == val]
        if not rows:
            raise CLIError(3, f"{path}: filter {filt!r} matched no rows")
    nd, d = [], []
    try:
        for r in rows:
            g = r[gi]
            if g == "nd":
                nd.append(float(r[vi]))
            elif g == "d":
                d.append(float(r[vi]))
            else:
                raise CLIError(3, f"{path}: group must be 'nd' or 'd', got {g!r}")
        return np.asarray(nd), np.asarray(d)
    except (ValueError, IndexError) as e:
        raise CLIError(3, f"{path}: {e}")


# ------------------------------------------------------------- shared pieces


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value options file; flags win")
    p.add_argument("--out", help="directory for report.json and CSV sidecars")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=100_000)
    p.add_argument("--batch-size", type=int, default=10_000)
    p.add_argument("--threads", type=int, default=1)


def _add_prevalence_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--w-known", type=float, help="prevalence known exactly")
    p.add_argument("--w-beta", help="alpha1,alpha2 of a beta prior for w")
    p.add_argument("--w-lo", type=float, help="elicit beta prior: interval low end")
    p.add_argument("--w-hi", type=float, help="elicit beta prior: interval high end")
    p.add_argument("--w-gamma", type=float, default=0.99, help="elicitation coverage")
    p.add_argument(
        "--w-counts",
        help="n_d,n_nd when the sample was drawn from the whole population",
    )


def _floats(s: str, n: int, what: str) -> list[float]:
    try:
        parts = [float(x) for x in s.split(",")]
    except ValueError:
        raise CLIError(2, f"{what}: expected comma-separated numbers, got {s!r}")
    if len(parts) != n:
        raise CLIError(2, f"{what}: expected {n} values, got {len(parts)}")
    return parts


def _build_prevalence(ns: argparse.Namespace) -> PrevalenceModel:
    sources = [ns.w_known is not None, ns.w_beta is not None, ns.w_lo is not None]
    if sum(sources) != 1:
        raise CLIError(2, "specify exactly one of --w-known, --w-beta, --w-lo/--w-hi")
    if ns.w_known is not None:
        prior: BetaParams | KnownPrevalence = KnownPrevalence(float(ns.w_known))
    elif ns.w_beta is not None:
        a1, a2 = _floats(ns.w_beta, 2, "--w-beta")
        prior = BetaParams(a1, a2)
    else:
        if ns.w_hi is None:
            raise CLIError(2, "--w-lo needs --w-hi")
        try:
            prior = elicit_beta(float(ns.w_lo), float(ns.w_hi), float(ns.w_gamma))
        except (ElicitationError, ValueError) as e:
            raise CLIError(2, str(e))
    n_d = n_nd = None
    if ns.w_counts is not None:
        d, nd = _floats(ns.w_counts, 2, "--w-counts")
        n_d, n_nd = int(d), int(nd)
    try:
        return PrevalenceModel(prior=prior, n_d=n_d, n_nd=n_nd)
    except ValueError as e:
        raise CLIError(2, str(e))


def _grid(lo: float, hi: float, bins: int) -> Grid:
    try:
        return Grid(lo, hi, bins)
    except ValueError as e:
        raise CLIError(2, str(e))


def _report(command: str, ns: argparse.Namespace, results: dict) -> dict:
    echo = {
        k: v
        for k, v in sorted(vars(ns).items())
        if k not in ("config", "out", "func") and v is not None
    }
    return {
        "schema_version": "1",
        "provenance": {
            "command": command,
            "version": __version__,
            "kernel_backend": BACKEND,
            "seed": getattr(ns, "seed", None),
            "n_draws": getattr(ns, "draws", None),
            "batch_size": getattr(ns, "batch_size", None),
            "threads": getattr(ns, "threads", None),
            "config": echo,
        },
        "results": results,
    }


# ------------------------------------------------------------- CSV sidecars


def _walk_curves(node, path: str, rows: list[list]) -> None:
    if not isinstance(node, dict):
        return
    if "grid" in node and "rb" in node and "prior_mass" in node:
        g = node["grid"]
        lo, hi, n = g["lo"], g["hi"], g["n_bins"]
        delta = (hi - lo) / n
        for i in range(n):
            rows.append(
                [
                    path,
                    repr(lo + i * delta),
                    repr(lo + (i + 1) * delta),
                    repr(lo + (i + 0.5) * delta),
                    repr(node["prior_mass"][i]),
                    repr(node["posterior_mass"][i]),
                    "" if node["rb"][i] is None else repr(node["rb"][i]),
                ]
            )
        return
    if "labels" in node and "rb" in node and "prior_mass" in node:
        for i, lab in enumerate(node["labels"]):
            rows.append(
                [
                    path,
                    lab,
                    lab,
                    lab,
                    repr(node["prior_mass"][i]),
                    repr(node["posterior_mass"][i]),
                    "" if node["rb"][i] is None else repr(node["rb"][i]),
                ]
            )
        return
    for key, child in node.items():
        _walk_curves(child, f"{path}/{key}" if path else key, rows)


def _walk_assessments(node, path: str, rows: list[list]) -> None:
    if not isinstance(node, dict):
        return
    if "rb" in node and "strength" in node and "prior_prob" in node:
        rows.append(
            [
                path,
                repr(node["rb"]) if node["rb"] is not None else "",
                repr(node["strength"]),
                repr(node["prior_prob"]),
                repr(node["posterior_prob"]),
            ]
        )
        return
    for key, child in node.items():
        _walk_assessments(child, f"{path}/{key}" if path else key, rows)


def _flatten(node, path: str, rows: list[list]) -> None:
    if isinstance(node, dict):
        for key, child in node.items():
            _flatten(child, f"{path}/{key}" if path else key, rows)
    elif isinstance(node, (list, tuple)):
        rows.append([path, json.dumps(node)])
    else:
        rows.append([path, "" if node is None else str(node)])


def _write_outputs(report: dict, out_dir: str) -> None:
    d = pathlib.Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    (d / "report.json").write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")

    rows: list[list] = []
    _walk_curves(report["results"], "", rows)
    with (d / "rb_curves.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["quantity", "bin_lo", "bin_hi", "midpoint", "prior", "posterior", "rb"])
        w.writerows(rows)

    rows = []
    _walk_assessments(report["results"], "", rows)
    with (d / "assessments.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["hypothesis", "rb", "strength", "prior_prob", "posterior_prob"])
        w.writerows(rows)

    rows = []
    _flatten(report["results"].get("diagnostics", {}), "", rows)
    _flatten(report["provenance"], "provenance", rows)
    with (d / "diagnostics.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["key", "value"])
        w.writerows(rows)


def _emit(command: str, ns: argparse.Namespace, results: dict) -> int:
    report = _report(command, ns, results)
    text = json.dumps(report, sort_keys=True, indent=2)
    if ns.out:
        _write_outputs(report, ns.out)
    print(text)
    return 0


# ---------------------------------------------------------------- elicit


def _cmd_elicit(ns: argparse.Namespace) -> int:
    try:
        if ns.kind == "beta":
            if ns.lo is None or ns.hi is None:
                raise CLIError(2, "beta elicitation needs --lo and --hi")
            res = elicit_beta(ns.lo, ns.hi, ns.gamma, mode=ns.mode)
            if isinstance(res, KnownPrevalence):
                out = {"kind": "known", "value": res.value}
            else:
                out = {
                    "kind": "beta",
                    "alpha1": res.alpha1,
                    "alpha2": res.alpha2,
                    "concentration": res.concentration,
                    "mode": res.mode,
                }
        elif ns.kind == "normal-gamma":
            missing = [
                f
                for f in ("m1", "m2", "s_lo", "s_hi")
                if getattr(ns, f) is None
            ]
            if missing:
                raise CLIError(2, f"normal-gamma elicitation needs --{missing[0].replace('_','-')}")
            res = elicit_normal_gamma(ns.m1, ns.m2, ns.s_lo, ns.s_hi, ns.gamma)
            out = {
                "kind": "normal-gamma",
                "mu0": res.mu0,
                "tau0": res.tau0,
                "lambda1": res.lambda1,
                "lambda2": res.lambda2,
                "achieved_content": res.achieved_content,
            }
        elif ns.kind == "dp-concentration":
            if ns.epsilon is None or ns.bound is None:
                raise CLIError(2, "dp elicitation needs --epsilon and --bound")
            res = elicit_dp_concentration(ns.epsilon, ns.bound)
            out = {
                "kind": "dp-concentration",
                "a": res.a,
                "epsilon": res.epsilon,
                "achieved_bound": res.achieved_bound,
            }
        else:  # pragma: no cover - argparse choices guard this
            raise CLIError(2, f"unknown kind {ns.kind!r}")
    except (ElicitationError, ValueError) as e:
        raise CLIError(2, str(e))
    return _emit("elicit", ns, out)


# ---------------------------------------------------------- analyze-discrete


def _cmd_discrete(ns: argparse.Namespace) -> int:
    if ns.data is None:
        raise CLIError(2, "analyze-discrete needs --data")
    data = _load_counts(ns.data)
    m = len(data.levels)
    try:
        alpha = float(ns.prior_alpha)
        prior = DirichletParams.uniform(m) if alpha == 1.0 else DirichletParams((alpha,) * m)
    except ValueError as e:
        raise CLIError(2, str(e))
    prev = _build_prevalence(ns)
    opts = DiscreteOptions(
        n_draws=ns.draws,
        seed=ns.seed,
        batch_size=ns.batch_size,
        threads=ns.threads,
        auc_grid=_grid(0.0, 1.0, ns.auc_bins),
        rate_grid=_grid(0.0, 1.0, ns.rate_bins),
        monotone=ns.monotone,
        conditional=ns.conditional,
        fixed_cutoff=ns.fixed_cutoff,
    )
    try:
        results = infer_discrete(prior, prior, data, prev, opts)
    except MCDiagnosticError as e:
        raise CLIError(4, str(e))
    except ValueError as e:
        raise CLIError(2, str(e))
    return _emit("analyze-discrete", ns, results)


# ---------------------------------------------------------- analyze-binormal


def _base_prior(ns: argparse.Namespace):
    by_value = ns.mu0 is not None
    by_elicit = ns.means_lo is not None
    if by_value == by_elicit:
        raise CLIError(2, "specify --mu0/--tau0/--lambda1/--lambda2 or --means-lo/--means-hi/--sd-lo/--sd-hi")
    try:
        if by_value:
            missing = [f for f in ("tau0", "lambda1", "lambda2") if getattr(ns, f) is None]
            if missing:
                raise CLIError(2, f"--mu0 needs --{missing[0]}")
            from .elicitation import NormalGammaParams

            return NormalGammaParams(
                mu0=ns.mu0, tau0=ns.tau0, lambda1=ns.lambda1, lambda2=ns.lambda2
            )
        missing = [f for f in ("means_hi", "sd_lo", "sd_hi") if getattr(ns, f) is None]
        if missing:
            raise CLIError(2, f"--means-lo needs --{missing[0].replace('_','-')}")
        return elicit_normal_gamma(ns.means_lo, ns.means_hi, ns.sd_lo, ns.sd_hi, ns.gamma)
    except (ElicitationError, ValueError) as e:
        raise CLIError(2, str(e))


def _binormal_stats(ns: argparse.Namespace) -> tuple[SufficientStats, SufficientStats]:
    if ns.data is not None:
        nd, d = _load_scores(ns.data, ns.filter)
        if nd.size < 2 or d.size < 2:
            raise CLIError(3, "need at least two scores per group")
        return SufficientStats.from_values(nd), SufficientStats.from_values(d)
    if ns.stats_nd is None or ns.stats_d is None:
        raise CLIError(2, "provide --data or both --stats-nd and --stats-d")
    n1, m1, ss1 = _floats(ns.stats_nd, 3, "--stats-nd")
    n2, m2, ss2 = _floats(ns.stats_d, 3, "--stats-d")
    try:
        return (
            SufficientStats(n=int(n1), mean=m1, ss=ss1),
            SufficientStats(n=int(n2), mean=m2, ss=ss2),
        )
    except ValueError as e:
        raise CLIError(2, str(e))


def _cmd_binormal(ns: argparse.Namespace) -> int:
    stats_nd, stats_d = _binormal_stats(ns)
    prior = _base_prior(ns)
    prev = _build_prevalence(ns)
    opts = BinormalOptions(
        n_draws=ns.draws,
        seed=ns.seed,
        batch_size=ns.batch_size,
        threads=ns.threads,
        auc_grid=_grid(0.0, 1.0, ns.auc_bins),
        cutoff_grid=_grid(0.0, 1.0, ns.cutoff_bins),
        rate_grid=_grid(0.0, 1.0, ns.rate_bins),
        fixed_cutoff=ns.fixed_cutoff,
    )
    try:
        results = infer_binormal(prior, stats_nd, stats_d, prev, ns.variances, opts)
    except MCDiagnosticError as e:
        raise CLIError(4, str(e))
    except ValueError as e:
        raise CLIError(2, str(e))
    return _emit("analyze-binormal", ns, results)


# ---------------------------------------------------------------- analyze-dp


def _cmd_dp(ns: argparse.Namespace) -> int:
    if ns.data is None:
        raise CLIError(2, "analyze-dp needs --data")
    nd, d = _load_scores(ns.data, ns.filter)
    if nd.size < 2 or d.size < 2:
        raise CLIError(3, "need at least two scores per group")
    prior = _base_prior(ns)
    if ns.concentration is None:
        raise CLIError(2, "analyze-dp needs --concentration")
    try:
        spec = DPModelSpec(
            a=ns.concentration,
            base_prior=prior,
            n_trunc_prior=ns.trunc_prior,
            n_trunc_post=ns.trunc_post,
        )
        data = DPData(values_nd=nd, values_d=d)
    except ValueError as e:
        raise CLIError(2, str(e))
    prev = _build_prevalence(ns)
    if ns.cutoff_lo is not None or ns.cutoff_hi is not None:
        if ns.cutoff_lo is None or ns.cutoff_hi is None:
            raise CLIError(2, "--cutoff-lo and --cutoff-hi go together")
        cut = _grid(ns.cutoff_lo, ns.cutoff_hi, ns.cutoff_bins)
    else:
        cut = default_cutoff_grid(data, ns.cutoff_bins)
    fixed = ()
    if ns.fixed_cutoffs:
        fixed = tuple(
            _floats(ns.fixed_cutoffs, len(ns.fixed_cutoffs.split(",")), "--fixed-cutoffs")
        )
    opts = DPOptions(
        n_draws=ns.draws,
        seed=ns.seed,
        batch_size=ns.batch_size,
        threads=ns.threads,
        auc_grid=_grid(0.0, 1.0, ns.auc_bins),
        cutoff_grid=cut,
        rate_grid=_grid(0.0, 1.0, ns.rate_bins),
        smooth_window=ns.smooth_window,
        criteria=tuple(ns.criteria.split(",")),
        fixed_cutoffs=fixed,
        jitter=ns.jitter,
        conditional=not ns.unconditional,
    )
    try:
        results = infer_dp(spec, data, prev, opts)
    except MCDiagnosticError as e:
        raise CLIError(4, str(e))
    except ValueError as e:
        raise CLIError(2, str(e))
    return _emit("analyze-dp", ns, results)


# ---------------------------------------------------------------- prevalence


def _cmd_prevalence(ns: argparse.Namespace) -> int:
    if ns.w_counts is None:
        raise CLIError(2, "prevalence needs --w-counts n_d,n_nd")
    prev = _build_prevalence(ns)
    if isinstance(prev.prior, KnownPrevalence):
        raise CLIError(2, "prevalence analysis needs a beta prior, not --w-known")
    try:
        results = infer_prevalence(
            prev.prior, prev.n_d, prev.n_nd, grid=_grid(0.0, 1.0, ns.w_bins)
        )
    except ValueError as e:
        raise CLIError(2, str(e))
    return _emit("prevalence", ns, results)


# --------------------------------------------------------------------- main


def _build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    top = argparse.ArgumentParser(prog="rbroc", description=__doc__.split("\n")[0])
    top.add_argument("--version", action="version", version=f"rbroc {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("elicit", help="turn interval judgements into prior parameters")
    p.add_argument("--kind", choices=["beta", "normal-gamma", "dp-concentration"], required=True)
    p.add_argument("--lo", type=float, help="beta: interval low end")
    p.add_argument("--hi", type=float, help="beta: interval high end")
    p.add_argument("--mode", type=float, help="beta: mode if not the interval midpoint")
    p.add_argument("--m1", type=float, help="normal-gamma: lower virtual-certainty bound for the means")
    p.add_argument("--m2", type=float, help="normal-gamma: upper bound for the means")
    p.add_argument("--s-lo", type=float, help="normal-gamma: lower bound for sigma")
    p.add_argument("--s-hi", type=float, help="normal-gamma: upper bound for sigma")
    p.add_argument("--gamma", type=float, default=0.99, help="coverage probability")
    p.add_argument("--epsilon", type=float, help="dp: distribution-distance tolerance")
    p.add_argument("--bound", type=float, help="dp: target exceedance probability")
    p.add_argument("--config")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_elicit)

    p = sub.add_parser("analyze-discrete", help="RB analysis for a finite-valued diagnostic")
    _add_common(p)
    _add_prevalence_flags(p)
    p.add_argument("--data", required=False, help="CSV with level,count_nd,count_d")
    p.add_argument("--prior-alpha", default="1.0", help="symmetric Dirichlet weight")
    p.add_argument("--auc-bins", type=int, default=25)
    p.add_argument("--rate-bins", type=int, default=25)
    p.add_argument("--monotone", action="store_true", help="order-constrained priors")
    p.add_argument("--conditional", action="store_true", help="condition on AUC > 1/2")
    p.add_argument("--fixed-cutoff", type=float, help="report rates at this level index")
    p.set_defaults(func=_cmd_discrete)

    p = sub.add_parser("analyze-binormal", help="RB analysis under normal score models")
    _add_common(p)
    _add_prevalence_flags(p)
    p.add_argument("--data", help="CSV with group,value (group nd/d)")
    p.add_argument("--filter", help="column=value row filter for --data")
    p.add_argument("--stats-nd", help="n,mean,ss instead of raw data")
    p.add_argument("--stats-d", help="n,mean,ss instead of raw data")
    p.add_argument("--variances", choices=["equal", "unequal"], default="equal")
    p.add_argument("--mu0", type=float)
    p.add_argument("--tau0", type=float)
    p.add_argument("--lambda1", type=float)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--means-lo", type=float, help="elicit the base prior instead")
    p.add_argument("--means-hi", type=float)
    p.add_argument("--sd-lo", type=float)
    p.add_argument("--sd-hi", type=float)
    p.add_argument("--gamma", type=float, default=0.99)
    p.add_argument("--auc-bins", type=int, default=100)
    p.add_argument("--cutoff-bins", type=int, default=100)
    p.add_argument("--rate-bins", type=int, default=25)
    p.add_argument("--fixed-cutoff", type=float)
    p.set_defaults(func=_cmd_binormal)

    p = sub.add_parser("analyze-dp", help="RB analysis under Dirichlet-process priors")
    _add_common(p)
    _add_prevalence_flags(p)
    p.add_argument("--data", help="CSV with group,value (group nd/d)")
    p.add_argument("--filter", help="column=value row filter for --data")
    p.add_argument("--concentration", type=float, help="DP concentration a")
    p.add_argument("--trunc-prior", type=int, default=500)
    p.add_argument("--trunc-post", type=int, default=500)
    p.add_argument("--mu0", type=float)
    p.add_argument("--tau0", type=float)
    p.add_argument("--lambda1", type=float)
    p.add_argument("--lambda2", type=float)
    p.add_argument("--means-lo", type=float)
    p.add_argument("--means-hi", type=float)
    p.add_argument("--sd-lo", type=float)
    p.add_argument("--sd-hi", type=float)
    p.add_argument("--gamma", type=float, default=0.99)
    p.add_argument("--auc-bins", type=int, default=100)
    p.add_argument("--cutoff-lo", type=float)
    p.add_argument("--cutoff-hi", type=float)
    p.add_argument("--cutoff-bins", type=int, default=256)
    p.add_argument("--rate-bins", type=int, default=25)
    p.add_argument("--smooth-window", type=int, default=3)
    p.add_argument("--criteria", default="error", help="comma list: error, fndr, weighted:W")
    p.add_argument("--fixed-cutoffs", help="comma list of cutoffs to profile")
    p.add_argument("--jitter", action="store_true", help="add uniform(0,1) noise to the data")
    p.add_argument("--unconditional", action="store_true", help="skip AUC > 1/2 conditioning")
    p.set_defaults(func=_cmd_dp)

    p = sub.add_parser("prevalence", help="exact RB analysis of the prevalence")
    p.add_argument("--config")
    p.add_argument("--out")
    _add_prevalence_flags(p)
    p.add_argument("--w-bins", type=int, default=1000)
    p.set_defaults(func=_cmd_prevalence)

    return top, dict(sub.choices)


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else argv
    parser, subparsers = _build_parser()
    try:
        ns = _apply_config(parser, subparsers, args)
        return ns.func(ns)
    except CLIError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
