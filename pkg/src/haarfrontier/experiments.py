"""Monte Carlo experiments validating the estimator's limit behavior.

Each experiment simulates replicates under a declared asymptotic-regime
schedule, compares Monte Carlo summaries against analytic comparators, and
emits report rows. Desk-scale schedules are an engineering choice the
presets make explicit; the regime strings record which growth conditions a
schedule point is intended to satisfy, and each experiment refuses to run
unless its required regimes are declared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frontiers import FrontierSpec, parse_frontier
from .haar import truncated_expansion
from .kernels import ReplicateTask, sup_grid, systematic_l2_sq
from .oracles import ks_statistic, limit_law
from .process import PartitionConfig
from .report import ReportRow
from .runner import derive_seed, run_task
from .stepfun import StepFunction

REGIME_KN_SMALL = "kn=o(n/ln n)"
REGIME_KN_SUBLINEAR = "kn=o(n)"
REGIME_KN_LOG = "kn*ln(kn)=o(n)"
REGIME_N_VS_KN = "n=o(kn^(1+alpha))"
REGIME_HN_SMALL = "hn=o(kn)"
REGIME_N_CENTERED = "n=o(kn^(1/2+alpha)*hn^(1/2))"
REGIME_N_CORRECTED = "n=o(kn^(1/2)*hn^(1/2+alpha))"

GAUSSIAN_VARIANTS = ("centered", "oracle_corrected", "z_corrected")

# Preregistered goodness-of-fit budgets: the limit laws are asymptotic, so
# fixed desk-scale KS tolerances (validated by closed-form pilots on constant
# frontiers) stand in for formal hypothesis tests.
KS_TOL_WEIBULL = 0.03
KS_TOL_GUMBEL = 0.03
KS_TOL_GAUSSIAN = 0.05

_KS_SD = 0.26  # asymptotic standard deviation of sqrt(R) * KS


@dataclass(frozen=True)
class ExperimentConfig:
    frontier: str
    schedule: tuple  # of (n, h_prime, d_n) triples
    c: float = 1.0
    replicates: int = 500
    base_seed: int = 20260808
    xs: tuple = ()
    regimes: tuple = ()
    workers: int = 1
    variant: str = "z_corrected"
    sup_eps: tuple = (0.05, 0.1, 0.2)

    def __post_init__(self):
        if self.c <= 0.0:
            raise ValueError("intensity rate c must be positive")
        if self.replicates < 2:
            raise ValueError("need at least two replicates")
        if not self.schedule:
            raise ValueError("schedule must contain at least one (n, h_prime, d_n) entry")
        if self.variant not in GAUSSIAN_VARIANTS:
            raise ValueError(f"variant must be one of {GAUSSIAN_VARIANTS}")

    def partition(self, entry) -> PartitionConfig:
        n, h_prime, d_n = entry
        return PartitionConfig(n=n, h_prime=h_prime, d_n=d_n)


def _require_regimes(cfg: ExperimentConfig, needed) -> None:
    missing = [r for r in needed if r not in cfg.regimes]
    if missing:
        raise ValueError(f"schedule must declare regime flags {missing}")


def _entry_seed(cfg: ExperimentConfig, entry_index: int) -> int:
    return derive_seed(cfg.base_seed, entry_index)


def _mean_se(col: np.ndarray) -> tuple:
    return float(col.mean()), float(col.std(ddof=1) / math.sqrt(len(col)))


def _row(name, cfg, pc, **kw) -> ReportRow:
    return ReportRow(
        experiment=name,
        frontier=cfg.frontier,
        n=pc.n,
        c=cfg.c,
        h_n=pc.h_n,
        d_n=pc.d_n,
        k_n=pc.k_n,
        **kw,
    )


def local_bias_experiment(cfg: ExperimentConfig) -> list:
    """Mean of the raw estimate at each x against its projection, shifted by k_n/(nc)."""
    _require_regimes(cfg, (REGIME_KN_SMALL,))
    if not cfg.xs:
        raise ValueError("local bias experiment needs evaluation points")
    f = parse_frontier(cfg.frontier)
    rows = []
    for e, entry in enumerate(cfg.schedule):
        pc = cfg.partition(entry)
        task = ReplicateTask("fhat_at", cfg.frontier, pc.n, pc.h_prime, pc.d_n, cfg.c, cfg.xs)
        data = run_task(task, cfg.replicates, _entry_seed(cfg, e), cfg.workers)
        proj = truncated_expansion(f, pc.h_n)
        shift = pc.k_n / (pc.n * cfg.c)
        for j, x in enumerate(cfg.xs):
            mean, se = _mean_se(data[:, j])
            residual = mean - proj(x) + shift
            tol = pc.k_n ** (-f.alpha) + 3.0 * se
            rows.append(
                _row(
                    "local_bias", cfg, pc,
                    x=x, statistic="bias_residual",
                    estimate=residual, std_err=se,
                    comparator=0.0, tolerance=tol,
                    passed=abs(residual) <= tol,
                )
            )
    return rows


def variance_experiment(cfg: ExperimentConfig) -> list:
    """Empirical variance of the estimate at x against k_n h_n / (n c)^2."""
    _require_regimes(cfg, (REGIME_KN_SMALL, REGIME_N_VS_KN))
    if not cfg.xs:
        raise ValueError("variance experiment needs evaluation points")
    rows = []
    for e, entry in enumerate(cfg.schedule):
        pc = cfg.partition(entry)
        nc = pc.n * cfg.c
        if pc.d_n == 1:
            comparator_var = pc.k_n**2 / nc**2
        else:
            if pc.h_n == 0:
                raise ValueError("variance comparator needs h_n >= 1 when d_n > 1")
            comparator_var = pc.k_n * pc.h_n / nc**2
        task = ReplicateTask("fhat_at", cfg.frontier, pc.n, pc.h_prime, pc.d_n, cfg.c, cfg.xs)
        data = run_task(task, cfg.replicates, _entry_seed(cfg, e), cfg.workers)
        for j, x in enumerate(cfg.xs):
            ratio = float(data[:, j].var(ddof=1)) / comparator_var
            se = ratio * math.sqrt(2.0 / (cfg.replicates - 1))
            rows.append(
                _row(
                    "variance", cfg, pc,
                    x=x, statistic="variance_ratio",
                    estimate=ratio, std_err=se,
                    comparator=1.0, tolerance=0.2,
                    passed=abs(ratio - 1.0) <= 0.2,
                )
            )
    return rows


def mise_experiment(cfg: ExperimentConfig) -> list:
    """Integrated squared error, decomposed into stochastic and systematic parts."""
    _require_regimes(cfg, (REGIME_KN_SMALL,))
    f = parse_frontier(cfg.frontier)
    rows = []
    per_entry = []
    for e, entry in enumerate(cfg.schedule):
        pc = cfg.partition(entry)
        task = ReplicateTask("mise", cfg.frontier, pc.n, pc.h_prime, pc.d_n, cfg.c, ())
        data = run_task(task, cfg.replicates, _entry_seed(cfg, e), cfg.workers)
        stoch_mean, stoch_se = _mean_se(data[:, 0])
        total_mean, total_se = _mean_se(data[:, 1])
        systematic = systematic_l2_sq(f, pc.h_n)
        per_entry.append((pc, systematic, total_mean))
        nc = pc.n * cfg.c
        stoch_comp = (pc.k_n**2 + pc.k_n * pc.h_n) / nc**2
        sys_bound = (
            f.lip**2 * (pc.h_n + 1) ** (-2.0 * f.alpha) if math.isfinite(f.lip) else math.inf
        )
        rows.append(
            _row(
                "mise", cfg, pc, x=None, statistic="mise_total",
                estimate=total_mean, std_err=total_se,
                comparator=stoch_mean + systematic, tolerance=3.0 * total_se,
                passed=abs(total_mean - stoch_mean - systematic) <= 3.0 * total_se,
            )
        )
        rows.append(
            _row(
                "mise", cfg, pc, x=None, statistic="mise_stochastic",
                estimate=stoch_mean, std_err=stoch_se,
                comparator=stoch_comp, tolerance=stoch_comp,
                passed=abs(stoch_mean - stoch_comp) <= stoch_comp,
            )
        )
        rows.append(
            _row(
                "mise", cfg, pc, x=None, statistic="mise_systematic",
                estimate=systematic, std_err=0.0,
                comparator=sys_bound, tolerance=sys_bound,
                passed=systematic <= 2.0 * sys_bound,
            )
        )
    for (pc_a, sys_a, _), (pc_b, sys_b, _) in zip(per_entry, per_entry[1:]):
        if pc_b.h_n + 1 == 2 * (pc_a.h_n + 1) and sys_b > 0.0:
            ratio = sys_a / sys_b
            comp = 2.0 ** (2.0 * f.alpha)
            rows.append(
                _row(
                    "mise", cfg, pc_b, x=None, statistic="mise_systematic_ratio",
                    estimate=ratio, std_err=0.0,
                    comparator=comp, tolerance=0.5,
                    passed=abs(ratio - comp) <= 0.5,
                )
            )
    rows.extend(_rate_slope_rows("mise", cfg, f, per_entry))
    return rows


def _rate_slope_rows(name, cfg, f, per_entry) -> list:
    """Fitted log-log decay slopes, reported without assertion.

    Small-sample slopes are contaminated by second-order terms, so these
    rows carry an infinite tolerance and never fail a run.
    """
    rows = []
    hs = np.array([pc.h_n + 1 for pc, _, _ in per_entry], dtype=float)
    sys_vals = np.array([s for _, s, _ in per_entry])
    if len(set(hs)) >= 2 and np.all(sys_vals > 0.0):
        slope = float(np.polyfit(np.log(hs), np.log(sys_vals), 1)[0])
        rows.append(
            _row(
                name, cfg, per_entry[-1][0], x=None, statistic="systematic_rate_slope",
                estimate=slope, std_err=0.0,
                comparator=-2.0 * f.alpha, tolerance=math.inf, passed=True,
            )
        )
    ns = np.array([pc.n for pc, _, _ in per_entry], dtype=float)
    totals = np.array([t for _, _, t in per_entry])
    if len(set(ns)) >= 2 and np.all(totals > 0.0):
        slope = float(np.polyfit(np.log(ns), np.log(totals), 1)[0])
        rows.append(
            _row(
                name, cfg, per_entry[-1][0], x=None, statistic="total_rate_slope",
                estimate=slope, std_err=0.0,
                comparator=-2.0, tolerance=math.inf, passed=True,
            )
        )
    return rows


def supnorm_experiment(cfg: ExperimentConfig) -> list:
    """Tail probabilities of the uniform error across the schedule."""
    _require_regimes(cfg, (REGIME_KN_SMALL,))
    f = parse_frontier(cfg.frontier)
    rows = []
    for e, entry in enumerate(cfg.schedule):
        pc = cfg.partition(entry)
        task = ReplicateTask("sup", cfg.frontier, pc.n, pc.h_prime, pc.d_n, cfg.c, ())
        sups = run_task(task, cfg.replicates, _entry_seed(cfg, e), cfg.workers)[:, 0]
        grid, fvals, pad = sup_grid(f)
        proj = truncated_expansion(f, pc.h_n)
        sys_sup = float(np.max(np.abs(proj(grid) - fvals))) + pad
        nc = pc.n * cfg.c
        for eps in cfg.sup_eps:
            p_hat = float(np.mean(sups > eps))
            se = math.sqrt(max(p_hat * (1.0 - p_hat), 1.0 / cfg.replicates) / cfg.replicates)
            margin = eps - sys_sup
            if margin > 0.0:
                bound = min(1.0, pc.k_n * math.exp(-nc * margin / (2.0 * pc.k_n)))
            else:
                bound = 1.0
            rows.append(
                _row(
                    "supnorm", cfg, pc, x=None, statistic=f"p_sup_gt_{eps}",
                    estimate=p_hat, std_err=se,
                    comparator=bound, tolerance=3.0 * se,
                    passed=p_hat <= bound + 3.0 * se,
                )
            )
    return rows


def weibull_experiment(cfg: ExperimentConfig, x: float = None) -> list:
    """Local statistic at x against the Weibull extreme-value law (d_n = 1 regime)."""
    _require_regimes(cfg, (REGIME_KN_SUBLINEAR, REGIME_N_VS_KN))
    if x is None:
        if not cfg.xs:
            raise ValueError("weibull experiment needs an evaluation point")
        x = cfg.xs[0]
    law = limit_law("weibull_evd")
    rows = []
    for e, entry in enumerate(cfg.schedule):
        pc = cfg.partition(entry)
        if pc.d_n != 1:
            raise ValueError("the extreme-value local limit requires d_n = 1")
        task = ReplicateTask("weibull", cfg.frontier, pc.n, pc.h_prime, pc.d_n, cfg.c, (x,))
        data = run_task(task, cfg.replicates, _entry_seed(cfg, e), cfg.workers)
        gap = float(np.max(np.abs(data[:, 0] - data[:, 1])))
        rows.append(
            _row(
                "weibull", cfg, pc, x=x, statistic="form_agreement",
                estimate=gap, std_err=0.0,
                comparator=0.0, tolerance=1e-12, passed=gap <= 1e-12,
            )
        )
        ks = ks_statistic(data[:, 0], law)
        se = _KS_SD / math.sqrt(cfg.replicates)
        rows.append(
            _row(
                "weibull", cfg, pc, x=x, statistic="ks_weibull",
                estimate=ks, std_err=se,
                comparator=0.0, tolerance=KS_TOL_WEIBULL, passed=ks <= KS_TOL_WEIBULL,
            )
        )
    return rows


def gumbel_experiment(cfg: ExperimentConfig) -> list:
    """Normalized worst-cell deviation against the Gumbel law (d_n = 1 regime)."""
    _require_regimes(cfg, (REGIME_KN_LOG,))
    law = limit_law("gumbel")
    rows = []
    for e, entry in enumerate(cfg.schedule):
        pc = cfg.partition(entry)
        if pc.d_n != 1:
            raise ValueError("the worst-cell limit requires d_n = 1")
        task = ReplicateTask("gumbel", cfg.frontier, pc.n, pc.h_prime, pc.d_n, cfg.c, ())
        raw = run_task(task, cfg.replicates, _entry_seed(cfg, e), cfg.workers)[:, 0]
        rate = pc.n * cfg.c / pc.k_n
        normalized = rate * raw - math.log(pc.k_n)
        rows.append(
            _row(
                "gumbel", cfg, pc, x=None, statistic="gumbel_nonneg",
                estimate=float(raw.min()), std_err=0.0,
                comparator=0.0, tolerance=0.0, passed=bool(raw.min() >= 0.0),
            )
        )
        ks = ks_statistic(normalized, law)
        se = _KS_SD / math.sqrt(cfg.replicates)
        rows.append(
            _row(
                "gumbel", cfg, pc, x=None, statistic="ks_gumbel",
                estimate=ks, std_err=se,
                comparator=0.0, tolerance=KS_TOL_GUMBEL, passed=ks <= KS_TOL_GUMBEL,
            )
        )
        if entry == cfg.schedule[-1]:
            med = float(np.median(normalized))
            med_target = -math.log(math.log(2.0))
            rows.append(
                _row(
                    "gumbel", cfg, pc, x=None, statistic="gumbel_median",
                    estimate=med, std_err=se,
                    comparator=med_target, tolerance=0.1,
                    passed=abs(med - med_target) <= 0.1,
                )
            )
    return rows


def gaussian_experiment(cfg: ExperimentConfig, x: float = None, variant: str = None) -> list:
    """Normalized local error against the standard Gaussian (d_n large regime)."""
    variant = variant or cfg.variant
    if variant not in GAUSSIAN_VARIANTS:
        raise ValueError(f"variant must be one of {GAUSSIAN_VARIANTS}")
    needed = [REGIME_HN_SMALL, REGIME_KN_SMALL]
    needed.append(REGIME_N_CENTERED if variant == "centered" else REGIME_N_CORRECTED)
    _require_regimes(cfg, needed)
    if x is None:
        if not cfg.xs:
            raise ValueError("gaussian experiment needs an evaluation point")
        x = cfg.xs[0]
    f = parse_frontier(cfg.frontier)
    f_true = f(x)
    law = limit_law("std_normal")
    rows = []
    for e, entry in enumerate(cfg.schedule):
        pc = cfg.partition(entry)
        if pc.d_n == 1:
            raise ValueError("the Gaussian normalization presumes d_n > 1")
        task = ReplicateTask("fhat_zn_at", cfg.frontier, pc.n, pc.h_prime, pc.d_n, cfg.c, (x,))
        data = run_task(task, cfg.replicates, _entry_seed(cfg, e), cfg.workers)
        fhat, zn = data[:, 0], data[:, 1]
        nc = pc.n * cfg.c
        sigma = pc.k_n / (nc * math.sqrt(pc.d_n))
        if variant == "centered":
            # two passes over the same replicate set: grand mean, then centering
            v = (fhat - fhat.mean()) / sigma
        elif variant == "oracle_corrected":
            v = (fhat + pc.k_n / nc - f_true) / sigma
        else:
            v = (fhat + zn - f_true) / sigma
        ks = ks_statistic(v, law)
        se = _KS_SD / math.sqrt(cfg.replicates)
        rows.append(
            _row(
                "gaussian", cfg, pc, x=x, statistic=f"ks_gaussian_{variant}",
                estimate=ks, std_err=se,
                comparator=0.0, tolerance=KS_TOL_GAUSSIAN, passed=ks <= KS_TOL_GAUSSIAN,
            )
        )
        v_mean, v_se = _mean_se(v)
        mean_tol = 3.0 / math.sqrt(cfg.replicates)
        rows.append(
            _row(
                "gaussian", cfg, pc, x=x, statistic="v_mean",
                estimate=v_mean, std_err=v_se,
                comparator=0.0, tolerance=mean_tol, passed=abs(v_mean) <= mean_tol,
            )
        )
        raw_mean, raw_se = _mean_se((fhat - f_true) / sigma)
        root_d = math.sqrt(pc.d_n)
        rows.append(
            _row(
                "gaussian", cfg, pc, x=x, statistic="uncorrected_mean",
                estimate=raw_mean, std_err=raw_se,
                comparator=-root_d, tolerance=0.5 * root_d,
                passed=abs(raw_mean + root_d) <= 0.5 * root_d,
            )
        )
    return rows


def zn_moments_experiment(cfg: ExperimentConfig) -> list:
    """Mean and variance of the minima mean against k_n/(nc) and k_n/(nc)^2."""
    _require_regimes(cfg, (REGIME_KN_SMALL,))
    rows = []
    for e, entry in enumerate(cfg.schedule):
        pc = cfg.partition(entry)
        task = ReplicateTask("zn", cfg.frontier, pc.n, pc.h_prime, pc.d_n, cfg.c, ())
        zn = run_task(task, cfg.replicates, _entry_seed(cfg, e), cfg.workers)[:, 0]
        nc = pc.n * cfg.c
        mean, se = _mean_se(zn)
        target = pc.k_n / nc
        rows.append(
            _row(
                "zn_moments", cfg, pc, x=None, statistic="zn_mean",
                estimate=mean, std_err=se,
                comparator=target, tolerance=3.0 * se,
                passed=abs(mean - target) <= 3.0 * se,
            )
        )
        ratio = float(zn.var(ddof=1)) / (pc.k_n / nc**2)
        ratio_se = ratio * math.sqrt(2.0 / (cfg.replicates - 1))
        rows.append(
            _row(
                "zn_moments", cfg, pc, x=None, statistic="zn_var_ratio",
                estimate=ratio, std_err=ratio_se,
                comparator=1.0, tolerance=0.2, passed=abs(ratio - 1.0) <= 0.2,
            )
        )
        rows.append(
            _row(
                "zn_moments", cfg, pc, x=None, statistic="zn_nonneg",
                estimate=float(zn.min()), std_err=0.0,
                comparator=0.0, tolerance=0.0, passed=bool(zn.min() >= 0.0),
            )
        )
    return rows


@dataclass(frozen=True)
class ErrorMetrics:
    l2: float
    sup: float
    at_points: tuple


def error_metrics(estimate: StepFunction, f: FrontierSpec, xs=()) -> ErrorMetrics:
    """L2, sup, and pointwise distances between a step estimate and the frontier.

    The L2 part is exact piecewise arithmetic against the frontier's
    integrals; the sup is taken on the 2^-14 grid (plus frontier knots and
    estimate breakpoints) with the usual Lipschitz padding.
    """
    l2_sq = 0.0
    bp, vals = estimate.breakpoints, estimate.values
    for lo, hi, v in zip(bp, bp[1:], vals):
        l2_sq += v * v * (hi - lo) - 2.0 * v * f.integral(lo, hi) + f.integral_sq(lo, hi)
    grid, fvals, pad = sup_grid(f)
    full = np.union1d(grid, bp)
    if len(full) != len(grid):
        fv = f(full)
    else:
        full, fv = grid, fvals
    sup = float(np.max(np.abs(estimate(full) - fv))) + pad
    at_points = tuple(abs(estimate(x) - f(x)) for x in xs)
    return ErrorMetrics(l2=math.sqrt(max(l2_sq, 0.0)), sup=sup, at_points=at_points)


EXPERIMENTS = {
    "local_bias": local_bias_experiment,
    "variance": variance_experiment,
    "mise": mise_experiment,
    "supnorm": supnorm_experiment,
    "weibull": weibull_experiment,
    "gumbel": gumbel_experiment,
    "gaussian": gaussian_experiment,
    "zn_moments": zn_moments_experiment,
}


@dataclass(frozen=True)
class Preset:
    kind: str
    config: ExperimentConfig
    note: str


PRESETS = {
    "local-bias": Preset(
        "local_bias",
        ExperimentConfig(
            frontier="affine:a=1.0,b=0.5",
            schedule=((10_000, 4, 4),),
            replicates=400,
            xs=(0.3, 0.7),
            regimes=(REGIME_KN_SMALL,),
        ),
        "mean local error of the raw estimate, shifted by k_n/(nc)",
    ),
    "variance": Preset(
        "variance",
        ExperimentConfig(
            frontier="constant:a=1.0",
            schedule=((4096, 4, 16),),
            replicates=1000,
            xs=(0.5,),
            regimes=(REGIME_KN_SMALL, REGIME_N_VS_KN),
        ),
        "local variance against k_n h_n/(nc)^2",
    ),
    "mise": Preset(
        "mise",
        ExperimentConfig(
            frontier="affine:a=1.0,b=0.5",
            schedule=((10_000, 3, 8), (10_000, 4, 4)),
            replicates=300,
            regimes=(REGIME_KN_SMALL,),
        ),
        "integrated squared error and its orthogonal decomposition",
    ),
    "supnorm": Preset(
        "supnorm",
        ExperimentConfig(
            frontier="constant:a=1.0",
            schedule=((20_000, 4, 2), (50_000, 4, 4), (100_000, 4, 8)),
            replicates=200,
            regimes=(REGIME_KN_SMALL,),
        ),
        "tail probabilities of the uniform error",
    ),
    "weibull": Preset(
        "weibull",
        ExperimentConfig(
            frontier="constant:a=1.0",
            schedule=((2000, 9, 1),),
            replicates=2000,
            xs=(0.3,),
            regimes=(REGIME_KN_SUBLINEAR, REGIME_N_VS_KN),
        ),
        "local statistic vs the Weibull extreme-value law (d_n = 1)",
    ),
    "gumbel": Preset(
        "gumbel",
        ExperimentConfig(
            frontier="constant:a=1.0",
            schedule=((50_000, 7, 1),),
            replicates=1500,
            regimes=(REGIME_KN_LOG, REGIME_N_VS_KN),
        ),
        "worst-cell deviation vs the Gumbel law (d_n = 1)",
    ),
    "gaussian": Preset(
        "gaussian",
        ExperimentConfig(
            frontier="constant:a=1.0",
            schedule=((4096, 4, 64),),
            c=4.0,
            replicates=2000,
            xs=(0.3,),
            regimes=(REGIME_HN_SMALL, REGIME_KN_SMALL, REGIME_N_CORRECTED, REGIME_N_CENTERED),
        ),
        "normalized local error vs the standard Gaussian (d_n large)",
    ),
    "zn-moments": Preset(
        "zn_moments",
        ExperimentConfig(
            frontier="constant:a=1.0",
            schedule=((10_000, 6, 1),),
            replicates=2000,
            regimes=(REGIME_KN_SMALL,),
        ),
        "moments of the minima mean",
    ),
}


def run_experiment(kind: str, cfg: ExperimentConfig) -> list:
    if kind not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {kind!r}; choose from {sorted(EXPERIMENTS)}")
    return EXPERIMENTS[kind](cfg)
