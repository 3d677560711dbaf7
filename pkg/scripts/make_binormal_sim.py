"""Build the bundled two-sample normal dataset.

The target summary statistics are fixed: n=25 with mean -0.072 and sum of
squared deviations 19.638 for the nondiseased sample, n=20 with mean 0.976
and ss 16.778 for the diseased sample. Any affinely adjusted N(0,1)/N(1,1)
draw reproduces them exactly, but the Dirichlet-process analysis depends on
the actual values (the posterior resamples the data points), so we search
over generator seeds for a realization whose DP estimates of the AUC and the
optimal cutoff land close to the values the statistics were taken from:
AUC 0.839, c_opt 0.850 (conditional analysis, a=20, w ~ beta posterior).
"""

import argparse
import csv
import pathlib

import numpy as np

from rbroc.dp_model import DPData, DPModelSpec, DPOptions, infer_dp
from rbroc.elicitation import BetaParams, NormalGammaParams
from rbroc.prevalence import PrevalenceModel
from rbroc.rb_core import Grid

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "rbroc" / "datasets" / "binormal_sim.csv"

TARGETS = {"nd": (25, -0.072, 19.638), "d": (20, 0.976, 16.778)}
AUC_TARGET = 0.839
COPT_TARGET = 0.850


def adjusted_sample(rng: np.random.Generator, n: int, mean: float, ss: float) -> np.ndarray:
    z = rng.standard_normal(n)
    zc = z - z.mean()
    return mean + zc * np.sqrt(ss / (zc**2).sum())


def make_pair(data_seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(data_seed)
    nd = adjusted_sample(rng, *TARGETS["nd"])
    d = adjusted_sample(rng, *TARGETS["d"])
    return nd, d


def dp_estimates(nd: np.ndarray, d: np.ndarray, n_draws: int, threads: int) -> tuple[float, float]:
    ng = NormalGammaParams(mu0=0.0, tau0=0.5, lambda1=1.78692, lambda2=1.05749)
    spec = DPModelSpec(a=20.0, base_prior=ng)
    prev = PrevalenceModel(prior=BetaParams(15.3589, 22.53835), n_d=20, n_nd=25)
    opts = DPOptions(
        n_draws=n_draws,
        seed=1,
        batch_size=5000,
        threads=threads,
        cutoff_grid=Grid(-5.0, 5.0, 100),
    )
    rep = infer_dp(spec, DPData(values_nd=nd, values_d=d), prev, opts)
    return rep["conditional"]["auc"]["estimate"], rep["c_opt"]["error"]["estimate"]


# Chosen by the --search screening below: among generator seeds whose
# realization has a high rank-sum AUC (the summary stats pin it near 0.79,
# so the upper tail of realizations is needed to match the target values),
# this one gives conditional AUC 0.825 and c_opt 0.850 at 10^5 draws.
DATA_SEED = 2815


def search(screen_draws: int, threads: int) -> None:
    cands = []
    for ds in range(4000):
        nd, d = make_pair(ds)
        emp = float((d[:, None] > nd[None, :]).mean())
        cands.append((emp, ds))
    cands.sort(reverse=True)
    for emp, ds in cands[:12]:
        nd, d = make_pair(ds)
        auc_est, copt_est = dp_estimates(nd, d, screen_draws, threads)
        print(f"seed {ds}: emp {emp:.3f} auc {auc_est:.3f} copt {copt_est:.3f}", flush=True)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--search", action="store_true", help="re-run the seed screening")
    ap.add_argument("--screen-draws", type=int, default=15000)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()

    if args.search:
        search(args.screen_draws, args.threads)
        return

    nd, d = make_pair(DATA_SEED)
    with OUT.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["group", "value"])
        for v in nd:
            w.writerow(["nd", repr(float(v))])
        for v in d:
            w.writerow(["d", repr(float(v))])
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
