import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fh_app.analytic import derived_lambda, derived_lambda_n, printed_lambda_n, synthetic_level
from fh_app.error_handlers import (
    BranchSelectionException,
    IntegrabilityException,
    NoClosedFormException,
)
from fh_app.nu_engine import (
    enumerate_branches,
    k_roots,
    quantization_lambda,
    reduce,
    scaled_discriminant,
    weight_function,
)
from fh_app.potential import unit_interval_problem
from fh_app.schemas import BranchChoice, LevelCoefficients, NUProblem, NUReduction

zetas = st.tuples(
    st.floats(min_value=0.1, max_value=5.0),  # ζ1
    st.floats(min_value=-10.0, max_value=10.0),  # ζ2
    st.floats(min_value=0.05, max_value=3.0),  # 1/R − 1/2
)


def _level(zeta1: float, zeta2: float, w: float) -> LevelCoefficients:
    """ζ3 chosen so that ζ1² + ζ3 − ζ2 + 1/4 = w²"""
    zeta3 = w * w - 0.25 - zeta1**2 + zeta2
    return LevelCoefficients(n=0, M=0.0, zeta1=zeta1, zeta2=zeta2, zeta3=zeta3)


# --- k roots and Π ---
@settings(max_examples=100, deadline=None)
@given(zetas)
def test_k_minus_matches_closed_form(params):
    zeta1, zeta2, w = params
    level = _level(zeta1, zeta2, w)
    problem = unit_interval_problem(level)
    k_plus, k_minus = k_roots(problem)
    scale = max(abs(zeta2), zeta1**2, 1.0)
    assert k_minus == pytest.approx(zeta2 - 2 * zeta1**2 - 2 * zeta1 * w, rel=1e-10, abs=1e-10 * scale)
    assert k_plus == pytest.approx(zeta2 - 2 * zeta1**2 + 2 * zeta1 * w, rel=1e-10, abs=1e-10 * scale)
    for k in (k_plus, k_minus):
        assert abs(scaled_discriminant(problem, k)) < 1e-9


@settings(max_examples=100, deadline=None)
@given(zetas)
def test_selected_pi_is_linear_closed_form(params):
    zeta1, zeta2, w = params
    problem = unit_interval_problem(_level(zeta1, zeta2, w))
    reduction = reduce(problem)
    inv_R = w + 0.5
    assert len(reduction.pi_branch) == 2
    assert reduction.pi_branch[0] == pytest.approx(zeta1, rel=1e-10)
    assert reduction.pi_branch[1] == pytest.approx(-(zeta1 + inv_R), rel=1e-10)
    assert reduction.tau[1] < 0
    assert reduction.selected.k_label == "minus"
    assert reduction.selected in reduction.qualifying_branches


def test_reduce_is_deterministic():
    problem = unit_interval_problem(_level(0.7, 1.3, 0.4))
    assert reduce(problem) == reduce(problem)


def test_all_branches_enumerated():
    branches = enumerate_branches(unit_interval_problem(_level(0.7, 1.3, 0.4)))
    assert {(b.k_label, b.root_sign) for b in branches} == {
        ("plus", 1),
        ("plus", -1),
        ("minus", 1),
        ("minus", -1),
    }


# --- λ and λn ---
def test_lambda_n_vanishes_at_ground_state():
    reduction = reduce(unit_interval_problem(_level(0.7, 1.3, 0.4)))
    assert quantization_lambda(reduction, 0)[1] == 0


def test_lambda_n_golden_n3():
    problem = NUProblem(
        tilde_tau=(1.0, -1.0), sigma=(0.0, 1.0, -1.0), tilde_sigma=(-0.25, 1.0, -2.0)
    )
    reduction = reduce(problem)
    # τ′ = −2 − 2√1.5 − 1, λ3 = −3τ′ + 6
    assert reduction.lambda_n(3) == pytest.approx(22.348469228349534, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(zetas, st.integers(min_value=0, max_value=6))
def test_lambda_pair_matches_derived_forms(params, n):
    zeta1, zeta2, w = params
    level = _level(zeta1, zeta2, w)
    R = 1 / (w + 0.5)
    lam, lam_n = quantization_lambda(reduce(unit_interval_problem(level)), n)
    scale = max(abs(zeta2), zeta1**2, n * n, 1.0)
    assert lam == pytest.approx(derived_lambda(level, R), abs=1e-10 * scale)
    assert lam_n == pytest.approx(derived_lambda_n(level, R, n), abs=1e-10 * scale)


def test_printed_lambda_n_differs_from_general_form():
    level = _level(1.5, 4.0, 0.3)
    R = 1 / 0.8
    assert printed_lambda_n(level, R, 2) != pytest.approx(derived_lambda_n(level, R, 2))


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_quantized_level_balances_lambda(n):
    level = synthetic_level(n, 0.8, 1.3)
    lam, lam_n = quantization_lambda(reduce(unit_interval_problem(level)), n)
    assert abs(lam - lam_n) < 1e-8 * max(abs(level.zeta2), abs(level.zeta3), 1.0)


# --- Errors ---
def test_no_real_k():
    problem = NUProblem(
        tilde_tau=(1.0, -1.0), sigma=(0.0, 1.0, -1.0), tilde_sigma=(-1.0, 10.0, 0.0)
    )
    with pytest.raises(NoClosedFormException):
        reduce(problem)


def test_no_branch_with_negative_slope():
    problem = NUProblem(
        tilde_tau=(1.0, 0.0), sigma=(0.0, 1.0, 0.0), tilde_sigma=(-1.0, 0.0, 0.0)
    )
    with pytest.raises(BranchSelectionException):
        reduce(problem)


# --- Weight function ---
def test_weight_exponents_half_one():
    level = synthetic_level(0, 0.5, 1.0)
    weight = weight_function(reduce(unit_interval_problem(level)))
    assert weight.roots == pytest.approx((0.0, 1.0))
    assert weight.exponents == pytest.approx((1.0, 1.0))
    assert weight.integrable


@pytest.mark.parametrize("zeta1, R", [(0.3, 1.7), (1.2, 0.9), (2.5, 1.1)])
def test_weight_matches_jacobi_parameters(zeta1, R):
    level = synthetic_level(1, zeta1, R)
    weight = weight_function(reduce(unit_interval_problem(level)))
    assert weight.exponents == pytest.approx((2 * zeta1, 2 / R - 1), rel=1e-10)


def test_weight_solves_first_order_equation():
    level = synthetic_level(2, 0.9, 1.4)
    reduction = reduce(unit_interval_problem(level))
    weight = weight_function(reduction)
    s = np.linspace(0.01, 0.99, 100)
    rho = weight(s)
    # ρ′/ρ = c + Σ e/(s − r)
    log_slope = weight.linear_rate + sum(
        e / (s - r) for r, e in zip(weight.roots, weight.exponents)
    )
    derivative = (1 - 2 * s) * rho + s * (1 - s) * rho * log_slope
    tau = reduction.tau[0] + reduction.tau[1] * s
    residual = derivative - tau * rho
    assert np.max(np.abs(residual)) < 1e-9 * np.max(np.abs(tau * rho))


def test_non_integrable_weight_is_flagged():
    branch = BranchChoice(k_label="plus", k=0.0, root_sign=1, pi=(0.0, 0.0), tau=(-1.5, -0.5))
    reduction = NUReduction(
        k_plus=0.0,
        k_minus=0.0,
        pi_branch=(0.0, 0.0),
        tau=(-1.5, -0.5),
        lambda_of_k=0.0,
        selected=branch,
        qualifying_branches=[branch],
        sigma=(0.0, 1.0, -1.0),
    )
    weight = weight_function(reduction)
    assert not weight.integrable
    assert weight.exponents[0] == pytest.approx(-2.5)
    with pytest.raises(IntegrabilityException):
        weight_function(reduction, strict=True)
    assert math.isfinite(weight(0.5))
