"""Closed-form ground truth for cell maxima and the three limit laws.

The distribution function of a cell maximum is exp(-n*c*A(u)) where A(u)
is the area of the frontier region above level u over the cell: the event
{max <= u} is exactly {no points above u}. Moments integrate the survival
function; working with the gap below the cell supremum keeps the variance
free of catastrophic cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .frontiers import FrontierSpec
from .haar import uniform_cell_index
from .process import PartitionConfig
from .quadrature import adaptive_simpson

VALID_LAWS = ("weibull_evd", "gumbel", "std_normal")


def _std_normal(u: np.ndarray) -> np.ndarray:
    flat = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.array([0.5 * math.erfc(-v / math.sqrt(2.0)) for v in flat])
    return out.reshape(np.shape(u))


def limit_cdf(kind: str, u):
    """CDF of one of the three limit laws at u (scalar or array)."""
    u_arr = np.asarray(u, dtype=float)
    if kind == "weibull_evd":
        out = np.minimum(np.exp(np.minimum(u_arr, 0.0)), 1.0)
    elif kind == "gumbel":
        out = np.exp(-np.exp(-u_arr))
    elif kind == "std_normal":
        out = _std_normal(u_arr)
    else:
        raise ValueError(f"unknown limit law {kind!r}; choose from {VALID_LAWS}")
    if np.ndim(u) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class LimitLaw:
    kind: str
    cdf: Callable[[np.ndarray], np.ndarray]


def limit_law(kind: str) -> LimitLaw:
    if kind not in VALID_LAWS:
        raise ValueError(f"unknown limit law {kind!r}; choose from {VALID_LAWS}")
    return LimitLaw(kind=kind, cdf=lambda u, _k=kind: limit_cdf(_k, u))


def cell_cdf(f: FrontierSpec, cfg: PartitionConfig, r: int, c: float, u):
    """P(cell-r maximum <= u): exp(-n*c * area above level u), 0 below 0."""
    lo, hi = cfg.cell_bounds(r)
    nc = cfg.n * c
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.empty(len(u_arr))
    for j, uv in enumerate(u_arr):
        if uv < 0.0:
            out[j] = 0.0
        else:
            out[j] = math.exp(-nc * f.area_above(lo, hi, uv))
    if np.ndim(u) == 0:
        return float(out[0])
    return out


def _gap_moments(f: FrontierSpec, cfg: PartitionConfig, r: int, c: float) -> tuple:
    """First two moments of the gap (cell sup - cell max).

    The gap W satisfies P(W > w) = F(top - w), so E W integrates the CDF and
    E W^2 integrates 2(top - v) F(v). Both integrands are boundary layers of
    width ~ k_n/(n c) near the cell supremum, which quadrature handles well
    and which keeps the variance free of large-term cancellation.
    """
    lo, hi = cfg.cell_bounds(r)
    _, top = f.range_on(lo, hi)
    nc = cfg.n * c

    def cdf(v: float) -> float:
        return math.exp(-nc * f.area_above(lo, hi, v))

    # Both integrands live in a layer of width ~ 1/(nc (hi-lo)) below the cell
    # supremum and vanish at 0, so an unseeded adaptive pass can accept a
    # spurious zero. Seed the subdivision dyadically across the layer.
    layer = 1.0 / (nc * (hi - lo))
    seeds = [0.0, top]
    depth = layer
    while top - depth > 0.0 and len(seeds) < 64:
        seeds.append(top - depth)
        depth *= 2.0
    seeds = sorted(set(seeds))
    tol = 1e-10 / len(seeds)
    g0 = sum(adaptive_simpson(cdf, a, b, tol) for a, b in zip(seeds, seeds[1:]))
    g1 = 2.0 * sum(
        adaptive_simpson(lambda v: (top - v) * cdf(v), a, b, tol)
        for a, b in zip(seeds, seeds[1:])
    )
    return top, g0, g1


def cell_max_mean(f: FrontierSpec, cfg: PartitionConfig, r: int, c: float) -> float:
    """Exact expectation of the cell-r maximum."""
    top, g0, _ = _gap_moments(f, cfg, r, c)
    return top - g0


def cell_max_variance(f: FrontierSpec, cfg: PartitionConfig, r: int, c: float) -> float:
    """Exact variance of the cell-r maximum."""
    _, g0, g1 = _gap_moments(f, cfg, r, c)
    return g1 - g0 * g0


def ks_statistic(samples, law: Union[LimitLaw, Callable]) -> float:
    """Two-sided Kolmogorov distance between the empirical CDF and a reference CDF.

    Evaluated at both one-sided limits of every empirical jump.
    """
    arr = np.sort(np.asarray(samples, dtype=float))
    if arr.size == 0:
        raise ValueError("need at least one sample")
    cdf = law.cdf if isinstance(law, LimitLaw) else law
    try:
        ref = np.asarray(cdf(arr), dtype=float)
        if ref.shape != arr.shape:
            raise TypeError
    except TypeError:
        ref = np.array([float(cdf(v)) for v in arr])
    n = arr.size
    grid = np.arange(1, n + 1) / n
    d_plus = float(np.max(grid - ref))
    d_minus = float(np.max(ref - (grid - 1.0 / n)))
    return max(d_plus, d_minus)


@dataclass(frozen=True)
class Normalization:
    """Centering and scaling constants for the limit-law statistics at a point."""

    sigma_n: float        # k_n / (n c sqrt(d_n)), the Gaussian-regime scale
    cell: int             # 1-based index of the cell containing x
    rate: float           # n c / k_n
    weibull_center: float  # k_n times the cell area (centering for the local statistic)
    mean_center: float    # cell minimum of f minus k_n/(n c)
    gumbel_shift: float   # ln k_n


def normalizations(f: FrontierSpec, cfg: PartitionConfig, c: float, x: float) -> Normalization:
    if c <= 0.0:
        raise ValueError("intensity rate c must be positive")
    k = cfg.k_n
    nc = cfg.n * c
    r = int(uniform_cell_index(x, k)) + 1
    lo, hi = cfg.cell_bounds(r)
    cell_m, _ = f.range_on(lo, hi)
    return Normalization(
        sigma_n=k / (nc * math.sqrt(cfg.d_n)),
        cell=r,
        rate=nc / k,
        weibull_center=k * f.integral(lo, hi),
        mean_center=cell_m - k / nc,
        gumbel_shift=math.log(k),
    )
