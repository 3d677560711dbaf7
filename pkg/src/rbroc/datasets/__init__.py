"""Bundled example datasets.

Three small CSVs ship with the package:

- ``ex2_counts.csv``: a five-level ordinal diagnostic, one count row per level
  for each population.
- ``binormal_sim.csv``: two-sample continuous scores (25 nondiseased, 20
  diseased) whose means and sums of squared deviations are exactly
  (-0.072, 19.638) and (0.976, 16.778).
- ``covid_synth.csv``: synthetic ages for 1136 patients in four strata
  (sex x outcome) matching fixed per-group summary statistics; generated by
  scripts/make_covid_synth.py, not real patient data.
"""

from dataclasses import dataclass
from importlib import resources

import numpy as np

__all__ = ["ex2_counts", "binormal_sim", "covid_synth", "CovidStratum"]


def _lines(name: str) -> list[str]:
    text = resources.files(__name__).joinpath(name).read_text()
    return text.strip().splitlines()


def ex2_counts() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(levels, counts_nd, counts_d) for the five-level example."""
    rows = [ln.split(",") for ln in _lines("ex2_counts.csv")[1:]]
    levels = np.array([float(r[0]) for r in rows])
    f_nd = np.array([int(r[1]) for r in rows])
    f_d = np.array([int(r[2]) for r in rows])
    return levels, f_nd, f_d


def binormal_sim() -> tuple[np.ndarray, np.ndarray]:
    """(values_nd, values_d) for the simulated two-sample data."""
    nd, d = [], []
    for ln in _lines("binormal_sim.csv")[1:]:
        group, value = ln.split(",")
        (nd if group == "nd" else d).append(float(value))
    return np.array(nd), np.array(d)


@dataclass(frozen=True)
class CovidStratum:
    values_nd: np.ndarray
    values_d: np.ndarray


def covid_synth() -> dict[str, CovidStratum]:
    """{'male': stratum, 'female': stratum} of synthetic ages."""
    groups: dict[str, dict[str, list[float]]] = {
        "male": {"nd": [], "d": []},
        "female": {"nd": [], "d": []},
    }
    for ln in _lines("covid_synth.csv")[1:]:
        sex, group, value = ln.split(",")
        groups[sex][group].append(float(value))
    return {
        sex: CovidStratum(
            values_nd=np.array(g["nd"]), values_d=np.array(g["d"])
        )
        for sex, g in groups.items()
    }
