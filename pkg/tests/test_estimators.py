import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haarfrontier.estimators import (
    EstimateBundle,
    coefficient_estimates,
    corrected_estimate,
    geffroy_estimate,
    haar_ev_estimate,
    haar_ev_estimate_at,
    minima_mean,
    oracle_corrected_estimate,
    residuals,
)
from haarfrontier.frontiers import affine_frontier, constant_frontier
from haarfrontier.haar import haar_eval, truncated_expansion, uniform_cell_index
from haarfrontier.process import CellStats, PartitionConfig, PointSample, cell_stats, simulate


def synthetic_stats(cfg: PartitionConfig, maxima, minima=None) -> CellStats:
    """CellStats with prescribed extremes under a flat frontier at height 2."""
    k = cfg.k_n
    maxima = np.asarray(maxima, dtype=float)
    minima = maxima.copy() if minima is None else np.asarray(minima, dtype=float)
    counts = (maxima > 0).astype(int) * 2
    return CellStats(
        counts=counts,
        x_star=maxima,
        z_star=np.where(counts > 0, minima, 0.0),
        cell_areas=np.full(k, 2.0 / k),
        f_min=np.full(k, 2.0),
        f_max=np.full(k, 2.0),
        cfg=cfg,
    )


def test_blockwise_mean_example() -> None:
    cfg = PartitionConfig(n=10, h_prime=1, d_n=2)  # k_n = 4, two blocks
    est = haar_ev_estimate(synthetic_stats(cfg, [0.8, 1.0, 0.6, 0.4]), cfg)
    np.testing.assert_allclose(est.values, [0.9, 0.5])


def test_all_empty_gives_zero_estimate() -> None:
    cfg = PartitionConfig(n=10, h_prime=2, d_n=2)
    stats = synthetic_stats(cfg, np.zeros(8))
    assert haar_ev_estimate(stats, cfg).sup_norm() == 0.0
    bundle = corrected_estimate(stats, cfg)
    assert bundle.z_n == 0.0
    assert bundle.f_tilde.sup_norm() == 0.0


def test_kernel_form_agrees_with_block_form() -> None:
    f = affine_frontier(1.0, 0.5)
    cfg = PartitionConfig(n=300, h_prime=2, d_n=4)
    stats = cell_stats(simulate(f, 300, 1.0, 5), cfg, f)
    est = haar_ev_estimate(stats, cfg)
    rng = np.random.Generator(np.random.Philox(key=9))
    xs = rng.random(1000)
    np.testing.assert_allclose(haar_ev_estimate_at(stats, cfg, xs), est(xs), atol=1e-12)


def test_geffroy_is_the_d1_case() -> None:
    f = constant_frontier(1.0)
    for seed in range(100):
        cfg = PartitionConfig(n=50, h_prime=3, d_n=1)
        stats = cell_stats(simulate(f, 50, 1.0, 1000 + seed), cfg, f)
        g = geffroy_estimate(stats, cfg)
        h = haar_ev_estimate(stats, cfg)
        assert np.array_equal(g.values, h.values)
        assert np.array_equal(g.values, stats.x_star)


def test_geffroy_rejects_grouped_cells() -> None:
    cfg = PartitionConfig(n=10, h_prime=1, d_n=2)
    stats = synthetic_stats(cfg, [0.5, 0.9, 0.7, 0.1])
    with pytest.raises(ValueError):
        geffroy_estimate(stats, cfg)


def test_coefficient_estimates_two_cells() -> None:
    cfg = PartitionConfig(n=10, h_prime=1, d_n=1)  # k_n = 2
    u, v = 0.8, 0.3
    coeffs = coefficient_estimates(synthetic_stats(cfg, [u, v]), cfg)
    assert coeffs[0] == pytest.approx((u + v) / 2)
    assert coeffs[1] == pytest.approx((u - v) / 2)


def test_constant_maxima_give_single_coefficient() -> None:
    cfg = PartitionConfig(n=10, h_prime=2, d_n=3)
    coeffs = coefficient_estimates(synthetic_stats(cfg, np.full(12, 0.6)), cfg)
    assert coeffs[0] == pytest.approx(0.6)
    np.testing.assert_allclose(coeffs[1:], 0.0, atol=1e-15)


def test_coefficient_reconstruction_identity() -> None:
    f = affine_frontier(1.0, 0.5)
    cfg = PartitionConfig(n=500, h_prime=3, d_n=4)
    stats = cell_stats(simulate(f, 500, 1.0, 21), cfg, f)
    est = haar_ev_estimate(stats, cfg)
    coeffs = coefficient_estimates(stats, cfg)
    rng = np.random.Generator(np.random.Philox(key=23))
    for x in rng.random(1000):
        series = sum(coeffs[i] * haar_eval(i, x) for i in range(len(coeffs)))
        assert abs(series - est(x)) <= 1e-12


def test_minima_mean_examples() -> None:
    cfg = PartitionConfig(n=10, h_prime=1, d_n=1)
    assert minima_mean(synthetic_stats(cfg, [0.0, 0.0])) == 0.0
    assert minima_mean(synthetic_stats(cfg, [0.5, 0.9], [0.1, 0.3])) == pytest.approx(0.2)


def test_corrected_estimate_example() -> None:
    cfg = PartitionConfig(n=10, h_prime=1, d_n=1)
    bundle = corrected_estimate(synthetic_stats(cfg, [0.8, 1.0], [0.1, 0.3]), cfg)
    np.testing.assert_allclose(bundle.f_hat.values, [0.8, 1.0])
    assert bundle.z_n == pytest.approx(0.2)
    np.testing.assert_allclose(bundle.f_tilde.values, [1.0, 1.2])


def test_shift_identities_are_exact() -> None:
    f = constant_frontier(1.0)
    cfg = PartitionConfig(n=200, h_prime=2, d_n=2)
    stats = cell_stats(simulate(f, 200, 1.0, 77), cfg, f)
    bundle = corrected_estimate(stats, cfg)
    rng = np.random.Generator(np.random.Philox(key=31))
    xs = rng.random(1000)
    np.testing.assert_array_equal(bundle.f_tilde(xs), bundle.f_hat(xs) + bundle.z_n)
    checked = oracle_corrected_estimate(stats, cfg, 1.0)
    shift = cfg.k_n / (cfg.n * 1.0)
    np.testing.assert_array_equal(checked(xs), bundle.f_hat(xs) + shift)


def test_oracle_corrected_reduces_bias_flat_frontier() -> None:
    f = constant_frontier(1.0)
    cfg = PartitionConfig(n=2000, h_prime=3, d_n=4)
    raw_at, fixed_at = [], []
    for seed in range(400):
        stats = cell_stats(simulate(f, 2000, 1.0, 40_000 + seed), cfg, f)
        raw_at.append(haar_ev_estimate(stats, cfg)(0.5))
        fixed_at.append(oracle_corrected_estimate(stats, cfg, 1.0)(0.5))
    assert abs(np.mean(fixed_at) - 1.0) < abs(np.mean(raw_at) - 1.0)


def test_residuals_examples() -> None:
    cfg = PartitionConfig(n=20, h_prime=1, d_n=1)
    stats = CellStats(
        counts=np.array([0, 1]),
        x_star=np.array([0.0, 0.4]),
        z_star=np.array([0.0, 0.4]),
        cell_areas=np.array([0.1, 0.2]),
        f_min=np.array([0.15, 0.35]),
        f_max=np.array([0.25, 0.45]),
        cfg=cfg,
    )
    got = residuals(stats)
    assert got[0] == pytest.approx(-0.1)  # empty cell: 0/k - area
    assert got[1] == pytest.approx(0.4 / 2 - 0.2)  # scaled max equals area


def test_reduced_form_identity() -> None:
    f = affine_frontier(1.0, 0.5)
    cfg = PartitionConfig(n=400, h_prime=2, d_n=3)
    stats = cell_stats(simulate(f, 400, 1.0, 99), cfg, f)
    est = haar_ev_estimate(stats, cfg)
    proj = truncated_expansion(f, cfg.h_n)
    y = residuals(stats)
    rng = np.random.Generator(np.random.Philox(key=41))
    for x in rng.random(50):
        block = int(uniform_cell_index(x, cfg.h_n + 1))
        cells = slice(block * cfg.d_n, (block + 1) * cfg.d_n)
        rhs = (cfg.h_n + 1) * float(np.sum(y[cells]))
        assert est(x) - proj(x) == pytest.approx(rhs, abs=1e-9)


def test_estimate_requires_matching_partition() -> None:
    f = constant_frontier(1.0)
    cfg = PartitionConfig(n=100, h_prime=2, d_n=1)
    stats = cell_stats(simulate(f, 100, 1.0, 1), cfg, f)
    other = PartitionConfig(n=100, h_prime=1, d_n=2)
    with pytest.raises(ValueError):
        haar_ev_estimate(stats, other)


def test_bundle_json_round_trip() -> None:
    f = constant_frontier(1.0)
    cfg = PartitionConfig(n=150, h_prime=2, d_n=2)
    stats = cell_stats(simulate(f, 150, 1.0, 8), cfg, f)
    bundle = corrected_estimate(stats, cfg)
    back = EstimateBundle.from_json(bundle.to_json())
    assert back.cfg == bundle.cfg
    assert back.z_n == bundle.z_n
    np.testing.assert_array_equal(back.f_hat.values, bundle.f_hat.values)
    np.testing.assert_array_equal(back.coefficients, bundle.coefficients)
    np.testing.assert_array_equal(back.f_tilde.values, bundle.f_tilde.values)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.floats(min_value=0.0, max_value=1.0),
            st.floats(min_value=0.0, max_value=1.0),
        ),
        min_size=0,
        max_size=20,
    ),
    st.tuples(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
    ),
    st.integers(min_value=0, max_value=2),
    st.integers(min_value=1, max_value=3),
)
def test_adding_a_point_never_lowers_the_estimate(points, extra, h_prime, d_n) -> None:
    f = constant_frontier(1.0)
    cfg = PartitionConfig(n=5, h_prime=h_prime, d_n=d_n)

    def build(pts):
        pts = sorted(pts)
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        sample = PointSample(xs, ys, n=5, c=1.0, seed=0, frontier_label=f.label)
        return haar_ev_estimate(cell_stats(sample, cfg, f), cfg)

    before = build(points)
    after = build(points + [extra])
    assert np.all(after.values >= before.values - 1e-15)
