import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haarfrontier.stepfun import StepFunction


def test_construction_validation() -> None:
    with pytest.raises(ValueError):
        StepFunction(np.array([0.0, 0.5]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        StepFunction(np.array([0.1, 1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        StepFunction(np.array([0.0, 0.5, 0.5, 1.0]), np.array([1.0, 2.0, 3.0]))


def test_evaluation_conventions() -> None:
    s = StepFunction(np.array([0.0, 0.5, 1.0]), np.array([2.0, 3.0]))
    assert s(0.0) == 2.0
    assert s(0.5) == 3.0  # interior breakpoints are left-closed on the right piece
    assert s(1.0) == 3.0  # x = 1 belongs to the last, right-closed piece
    assert s(0.49999) == 2.0
    with pytest.raises(ValueError):
        s(1.5)
    with pytest.raises(ValueError):
        s(-0.1)


def test_uniform_and_integral() -> None:
    s = StepFunction.uniform([1.0, 2.0, 3.0, 4.0])
    assert s.integral() == pytest.approx(2.5)
    assert s.l2_norm_sq() == pytest.approx((1 + 4 + 9 + 16) / 4)
    assert s.sup_norm() == 4.0


def test_arithmetic_on_mismatched_grids() -> None:
    a = StepFunction(np.array([0.0, 0.25, 1.0]), np.array([1.0, 2.0]))
    b = StepFunction(np.array([0.0, 0.5, 1.0]), np.array([10.0, 20.0]))
    total = a + b
    assert total(0.1) == 11.0
    assert total(0.3) == 12.0
    assert total(0.7) == 22.0
    diff = b - a
    assert diff.integral() == pytest.approx(b.integral() - a.integral())


def test_scalar_operations() -> None:
    s = StepFunction.uniform([1.0, 3.0])
    assert (s + 0.5)(0.1) == 1.5
    assert (2.0 * s)(0.9) == 6.0
    assert (-s).integral() == -s.integral()


def test_inner_is_exact_on_refinement() -> None:
    a = StepFunction(np.array([0.0, 0.25, 1.0]), np.array([2.0, 4.0]))
    b = StepFunction(np.array([0.0, 0.5, 1.0]), np.array([1.0, -1.0]))
    # 2*1*0.25 + 4*1*0.25 + 4*(-1)*0.5
    assert a.inner(b) == pytest.approx(0.5 + 1.0 - 2.0)


@st.composite
def step_functions(draw):
    m = draw(st.integers(min_value=1, max_value=6))
    cuts = draw(
        st.lists(
            st.floats(min_value=0.01, max_value=0.99),
            min_size=m - 1,
            max_size=m - 1,
            unique=True,
        )
    )
    breakpoints = np.array(sorted([0.0, *cuts, 1.0]))
    values = np.array(
        draw(
            st.lists(
                st.floats(min_value=-10, max_value=10, allow_nan=False),
                min_size=m,
                max_size=m,
            )
        )
    )
    return StepFunction(breakpoints, values)


@settings(max_examples=60, deadline=None)
@given(step_functions(), step_functions(), st.floats(min_value=0.0, max_value=1.0))
def test_binary_ops_agree_pointwise(a, b, x) -> None:
    assert (a + b)(x) == pytest.approx(a(x) + b(x), abs=1e-12)
    assert (a - b)(x) == pytest.approx(a(x) - b(x), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(step_functions())
def test_l2_norm_matches_inner(s) -> None:
    assert s.l2_norm_sq() == pytest.approx(s.inner(s), rel=1e-12, abs=1e-12)
