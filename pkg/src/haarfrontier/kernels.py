"""Per-replicate simulation kernels for the experiment driver.

Each kernel maps one seed to a small vector of replicate statistics. Tasks
carry only picklable primitives (the frontier travels as its label), so
chunks of replicates can run in worker processes; per-frontier geometry is
cached per process.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .estimators import haar_ev_estimate, minima_mean
from .frontiers import FrontierSpec, parse_frontier
from .haar import uniform_cell_index
from .process import PartitionConfig, cell_stats, simulate

SUP_GRID_STEP = 2.0**-14


@dataclass(frozen=True)
class ReplicateTask:
    kind: str
    frontier: str
    n: int
    h_prime: int
    d_n: int
    c: float
    xs: tuple = ()

    def partition(self) -> PartitionConfig:
        return PartitionConfig(n=self.n, h_prime=self.h_prime, d_n=self.d_n)


@functools.lru_cache(maxsize=64)
def block_moments(f: FrontierSpec, h_n: int) -> tuple:
    """Per-block integrals of f and f^2 on the h_n + 1 dyadic blocks."""
    blocks = h_n + 1
    integ = np.empty(blocks)
    integ_sq = np.empty(blocks)
    for b in range(blocks):
        lo, hi = b / blocks, (b + 1) / blocks
        integ[b] = f.integral(lo, hi)
        integ_sq[b] = f.integral_sq(lo, hi)
    integ.flags.writeable = False
    integ_sq.flags.writeable = False
    return integ, integ_sq


def systematic_l2_sq(f: FrontierSpec, h_n: int) -> float:
    """Exact squared L2 distance between f and its blockwise-mean projection."""
    integ, integ_sq = block_moments(f, h_n)
    blocks = h_n + 1
    return float(np.sum(integ_sq - blocks * integ**2))


@functools.lru_cache(maxsize=32)
def sup_grid(f: FrontierSpec) -> tuple:
    """Evaluation grid for sup norms: uniform 2^-14 step plus frontier knots."""
    base = np.arange(int(round(1.0 / SUP_GRID_STEP)) + 1) * SUP_GRID_STEP
    grid = np.union1d(base, np.asarray(f.knots, dtype=float)) if f.knots else base
    fvals = f(grid)
    pad = f.lip * SUP_GRID_STEP**f.alpha if math.isfinite(f.lip) else 0.0
    grid.flags.writeable = False
    fvals.flags.writeable = False
    return grid, fvals, pad


def _stats(f: FrontierSpec, cfg: PartitionConfig, c: float, seed: int):
    return cell_stats(simulate(f, cfg.n, c, seed), cfg, f)


def _kernel_fhat_at(f, cfg, c, xs, seed):
    stats = _stats(f, cfg, c, seed)
    return haar_ev_estimate(stats, cfg)(np.asarray(xs, dtype=float))


def _kernel_fhat_zn_at(f, cfg, c, xs, seed):
    stats = _stats(f, cfg, c, seed)
    est = haar_ev_estimate(stats, cfg)
    return np.append(est(np.asarray(xs, dtype=float)), minima_mean(stats))


def _kernel_mise(f, cfg, c, xs, seed):
    stats = _stats(f, cfg, c, seed)
    blocks = cfg.h_n + 1
    vals = haar_ev_estimate(stats, cfg).values
    integ, integ_sq = block_moments(f, cfg.h_n)
    proj = blocks * integ
    stoch_sq = float(np.sum((vals - proj) ** 2)) / blocks
    total_sq = float(np.sum(vals**2 / blocks - 2.0 * vals * integ + integ_sq))
    return np.array([stoch_sq, total_sq])


def _kernel_sup(f, cfg, c, xs, seed):
    if cfg.h_prime > 14:
        raise ValueError("sup grid at step 2^-14 cannot resolve blocks finer than 2^14")
    stats = _stats(f, cfg, c, seed)
    est = haar_ev_estimate(stats, cfg)
    grid, fvals, pad = sup_grid(f)
    return np.array([float(np.max(np.abs(est(grid) - fvals))) + pad])


def _kernel_weibull(f, cfg, c, xs, seed):
    stats = _stats(f, cfg, c, seed)
    x = xs[0]
    r = int(uniform_cell_index(x, cfg.k_n))
    center = cfg.k_n * stats.cell_areas[r]
    rate = cfg.n * c / cfg.k_n
    t_est = rate * (haar_ev_estimate(stats, cfg)(x) - center)
    t_max = rate * (stats.x_star[r] - center)
    return np.array([t_est, t_max])


def _kernel_gumbel(f, cfg, c, xs, seed):
    stats = _stats(f, cfg, c, seed)
    return np.array([float(np.max(stats.f_max - stats.x_star))])


def _kernel_cell_max(f, cfg, c, xs, seed):
    stats = _stats(f, cfg, c, seed)
    r = int(uniform_cell_index(xs[0], cfg.k_n))
    return np.array([stats.x_star[r]])


def _kernel_zn(f, cfg, c, xs, seed):
    return np.array([minima_mean(_stats(f, cfg, c, seed))])


KERNELS = {
    "fhat_at": _kernel_fhat_at,
    "fhat_zn_at": _kernel_fhat_zn_at,
    "mise": _kernel_mise,
    "sup": _kernel_sup,
    "weibull": _kernel_weibull,
    "gumbel": _kernel_gumbel,
    "cell_max": _kernel_cell_max,
    "zn": _kernel_zn,
}


def run_chunk(task: ReplicateTask, seeds) -> np.ndarray:
    """Run a contiguous block of replicates; the unit of work for one worker."""
    f = parse_frontier(task.frontier)
    cfg = task.partition()
    kernel = KERNELS[task.kind]
    return np.array([kernel(f, cfg, task.c, task.xs, int(s)) for s in seeds])
