"""Deterministic batched Monte Carlo execution.

Each named pass of a pipeline gets its own SeedSequence child (in a fixed
order), and each batch within a pass gets a child of that. Results are
concatenated in batch-index order, so the output depends only on
(seed, n_draws, batch_size), never on thread count or scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

__all__ = ["MCDiagnosticError", "pass_streams", "run_batched", "effective_sample_size"]


class MCDiagnosticError(RuntimeError):
    """A Monte Carlo reliability floor was violated (acceptance rate or ESS)."""


def pass_streams(seed: int, names: list[str]) -> dict[str, np.random.SeedSequence]:
    """One independent stream per named pass, in the order given."""
    root = np.random.SeedSequence(seed)
    children = root.spawn(len(names))
    return dict(zip(names, children))


def run_batched(
    stream: np.random.SeedSequence,
    n_draws: int,
    batch_size: int,
    threads: int,
    worker: Callable[[np.random.Generator, int], dict[str, np.ndarray]],
) -> dict[str, np.ndarray]:
    """Run worker(rng, batch_n) over batches and concatenate per-key results."""
    if n_draws <= 0:
        raise ValueError("n_draws must be positive")
    if batch_size <= 0:
        raise ValueError("batch_size must be positive")
    sizes = [batch_size] * (n_draws // batch_size)
    if n_draws % batch_size:
        sizes.append(n_draws % batch_size)
    children = stream.spawn(len(sizes))

    def run(i: int) -> dict[str, np.ndarray]:
        rng = np.random.default_rng(children[i])
        return worker(rng, sizes[i])

    if threads <= 1:
        parts = [run(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(run, range(len(sizes))))
    out: dict[str, np.ndarray] = {}
    for key in parts[0]:
        out[key] = np.concatenate([p[key] for p in parts])
    return out


def effective_sample_size(weights: np.ndarray) -> float:
    """Kish effective sample size of a set of importance weights."""
    s = float(weights.sum())
    if s <= 0.0:
        return 0.0
    return s * s / float((weights * weights).sum())
