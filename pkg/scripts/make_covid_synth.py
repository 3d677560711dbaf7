"""Build the bundled synthetic age dataset.

Four strata (sex x outcome) with fixed targets for (n, mean, sd, min, max):

    male  nd: 594, 48.81, 17.72,  0.5, 85.0
    male  d :  52, 68.46, 13.66, 36.0, 89.0
    female nd: 465, 48.69, 18.73,  2.0, 96.0
    female d :  25, 77.36, 12.12, 48.0, 95.0

Ages live on a 0.5-year grid. Each stratum starts as a truncated normal
sample rounded to the grid with the extremes pinned, then single-value
moves fix the sum and paired opposite moves fix the spread, so the final
mean and sample sd round to the targets at two decimals.
"""

import csv
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "rbroc" / "datasets" / "covid_synth.csv"

#        sex     group   n    mean   sd     min   max
STRATA = [
    ("male", "nd", 594, 48.81, 17.72, 0.5, 85.0),
    ("male", "d", 52, 68.46, 13.66, 36.0, 89.0),
    ("female", "nd", 465, 48.69, 18.73, 2.0, 96.0),
    ("female", "d", 25, 77.36, 12.12, 48.0, 95.0),
]

STEP = 0.5


def initial_sample(rng, n, mean, sd, lo, hi):
    x = rng.normal(mean, sd, size=4 * n)
    x = x[(x >= lo) & (x <= hi)][:n]
    if x.size < n:
        raise RuntimeError("not enough in-range draws")
    x = np.round(x / STEP) * STEP
    x[0], x[1] = lo, hi
    return x


def fix_sum(x, target_sum, lo, hi):
    # moles indices 2.. only; 0 and 1 pin the extremes
    while True:
        diff = target_sum - x.sum()
        if abs(diff) < STEP / 2:
            return x
        step = STEP if diff > 0 else -STEP
        movable = np.where((x + step >= lo) & (x + step <= hi))[0]
        movable = movable[movable >= 2]
        if movable.size == 0:
            raise RuntimeError("sum adjustment stuck")
        k = movable[np.argmax((x[movable] - x.mean()) * -np.sign(step))]
        x[k] += step


def fix_spread(rng, x, target_ss, lo, hi, tol):
    # paired +-step moves keep the sum fixed while walking ss to the target:
    # moving x[i] += s and x[j] -= s changes ss by 2s(x[i]-x[j]) + 2s^2
    idx = np.arange(2, x.size)
    for _ in range(500000):
        ss = ((x - x.mean()) ** 2).sum()
        gap = target_ss - ss
        if abs(gap) <= tol:
            return x
        i, j = rng.choice(idx, size=2, replace=False)
        if x[i] < x[j]:
            i, j = j, i
        if gap > 0:
            delta = 2 * STEP * (x[i] - x[j]) + 2 * STEP**2
            ok = x[i] + STEP <= hi and x[j] - STEP >= lo and delta <= 2 * gap
            if ok:
                x[i] += STEP
                x[j] -= STEP
        else:
            delta = -2 * STEP * (x[i] - x[j]) + 2 * STEP**2
            ok = x[i] - STEP >= lo and x[j] + STEP <= hi and x[i] - x[j] >= STEP and delta >= 2 * gap
            if ok:
                x[i] -= STEP
                x[j] += STEP
    raise RuntimeError("spread adjustment did not converge")


def build_stratum(rng, n, mean, sd, lo, hi):
    target_sum = np.round(n * mean / STEP) * STEP
    target_ss = (n - 1) * sd**2
    x = initial_sample(rng, n, mean, sd, lo, hi)
    x = fix_sum(x, target_sum, lo, hi)
    tol = max(0.2, (n - 1) * 2 * sd * 0.004)
    x = fix_spread(rng, x, target_ss, lo, hi, tol)
    x = fix_sum(x, target_sum, lo, hi)
    got_mean = x.mean()
    got_sd = x.std(ddof=1)
    assert abs(got_mean - mean) < 0.005, (got_mean, mean)
    assert abs(got_sd - sd) < 0.005, (got_sd, sd)
    assert x.min() == lo and x.max() == hi
    return np.sort(x)


def main() -> None:
    rng = np.random.default_rng(20200615)
    rows = []
    for sex, group, n, mean, sd, lo, hi in STRATA:
        x = build_stratum(rng, n, mean, sd, lo, hi)
        print(f"{sex} {group}: n={x.size} mean={x.mean():.4f} sd={x.std(ddof=1):.4f} "
              f"min={x.min()} max={x.max()}")
        rows.extend((sex, group, f"{v:.1f}") for v in x)
    with OUT.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sex", "group", "value"])
        w.writerows(rows)
    print(f"wrote {OUT} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
