import math
from unittest.mock import patch

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fh_app.error_handlers import (
    ComplexZetaException,
    RealnessViolationException,
    SingularityException,
)
from fh_app.potential import (
    asymptotes,
    build_nu_problem,
    compute_beta,
    derive_coefficients,
    evaluate_potential,
    harmonic_quantum,
    level_coefficients,
    log_nu_variable,
    pole_time,
    potential_values,
)
from fh_app.registry import default_registry
from fh_app.schemas import BetaVariant, MoleculeParams, PotentialConfig, SpectralDomain
from fh_app.units import CODATA_UNITS

mpmath.mp.dps = 50

MOLECULES = default_registry()


def _mp_potential(molecule: MoleculeParams, alpha: float, t: float):
    De, te, t0, q = (mpmath.mpf(v) for v in (molecule.De, molecule.te, molecule.t0, molecule.q))
    a = mpmath.mpf(alpha)
    factor = mpmath.exp(2 * a * (te - t0))
    return De * (1 - (q - factor) / (q - mpmath.exp(2 * a * (mpmath.mpf(t) - t0)))) ** 2


# --- V(t) ---
@pytest.mark.parametrize("molecule", MOLECULES, ids=lambda m: m.name)
@pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0])
def test_well_bottom_and_asymptote(molecule, alpha):
    config = PotentialConfig(molecule=molecule, alpha=alpha)
    assert abs(evaluate_potential(config, molecule.te)) <= 1e-12 * molecule.De
    far = evaluate_potential(config, molecule.t0 + 20 / alpha)
    assert abs(far - molecule.De) < 1e-6 * molecule.De


def test_co_far_right_is_dissociation_energy():
    co = MOLECULES[0]
    config = PotentialConfig(molecule=co, alpha=0.5)
    assert evaluate_potential(config, co.t0 + 40) == pytest.approx(10.84514471, rel=1e-6)


@pytest.mark.parametrize("t", [2.0, 0.3, -1.5, 5.0])
def test_lih_against_arbitrary_precision(lih_config, t):
    expected = _mp_potential(lih_config.molecule, lih_config.alpha, t)
    assert evaluate_potential(lih_config, t) == pytest.approx(float(expected), rel=1e-12)


def test_h2_profile(h2_config):
    assert evaluate_potential(h2_config, -1.5) == pytest.approx(20.506, rel=1e-3)
    assert evaluate_potential(h2_config, 5.0) == pytest.approx(4.5694, rel=1e-3)


def test_vectorized_matches_scalar(h2_config):
    t = np.linspace(-1.0, 4.0, 11)
    values = potential_values(h2_config, t)
    assert values.shape == (11,)
    for x, v in zip(t, values):
        assert v == evaluate_potential(h2_config, float(x))


@settings(max_examples=200, deadline=None)
@given(
    t=st.floats(min_value=-50, max_value=50),
    index=st.integers(min_value=0, max_value=3),
    alpha=st.floats(min_value=0.05, max_value=2.0),
)
def test_non_negative_and_no_pole_for_negative_q(t, index, alpha):
    config = PotentialConfig(molecule=MOLECULES[index], alpha=alpha)
    molecule = config.molecule
    assert molecule.q - math.exp(min(2 * alpha * (t - molecule.t0), 700)) < 0
    assert evaluate_potential(config, t) >= 0


def test_singularity_for_positive_q():
    molecule = MoleculeParams(name="pole", De=1.0, te=0.5, mu=1.0, t0=1.0, q=1.0)
    config = PotentialConfig(molecule=molecule, alpha=1.0)
    assert pole_time(config) == 1.0
    with pytest.raises(SingularityException):
        evaluate_potential(config, 1.0)
    assert asymptotes(config)[1] == math.inf


def test_asymptotes_negative_q(toy_config):
    left, right = asymptotes(toy_config)
    assert left == pytest.approx(4.0)
    assert right == 1.0
    assert pole_time(toy_config) is None


def test_harmonic_quantum(h2_config, toy_config, toy_units):
    assert harmonic_quantum(h2_config) == pytest.approx(7.0706e-11, rel=1e-3)
    assert harmonic_quantum(toy_config, toy_units) == pytest.approx(0.1 * math.sqrt(8 / 2.25))


# --- Coefficients ---
def test_beta_variants(h2_config, units):
    mc2 = 0.5039 * units.amu_to_eV_per_c2
    corrected = compute_beta(h2_config, units)
    printed = compute_beta(
        h2_config.model_copy(update={"beta_variant": BetaVariant.AS_PRINTED}), units
    )
    assert corrected == pytest.approx(-2 * units.hbar_eV_ns**2 * 0.25 / mc2, rel=1e-14)
    assert printed == pytest.approx(-2 * units.hbar_eV_ns * 0.25 / mc2, rel=1e-14)
    assert corrected < 0 and printed < 0
    assert printed / corrected == pytest.approx(1 / units.hbar_eV_ns, rel=1e-12)


def test_printed_beta_against_arbitrary_precision(h2_config, units):
    config = h2_config.model_copy(update={"beta_variant": BetaVariant.AS_PRINTED})
    hbar, amu = mpmath.mpf(units.hbar_eV_ns), mpmath.mpf(units.amu_to_eV_per_c2)
    golden = -2 * hbar * mpmath.mpf(h2_config.alpha) ** 2 / (mpmath.mpf("0.5039") * amu)
    assert compute_beta(config, units) == pytest.approx(float(golden), rel=1e-12)
    assert compute_beta(config, units) == pytest.approx(-7.01e-16, rel=1e-2)


def test_h2_coefficients_against_arbitrary_precision(h2_config, units):
    coeffs = derive_coefficients(h2_config, units)
    m = h2_config.molecule
    hbar, amu = mpmath.mpf(units.hbar_eV_ns), mpmath.mpf(units.amu_to_eV_per_c2)
    De, te, t0, q, mu = (mpmath.mpf(v) for v in (m.De, m.te, m.t0, m.q, m.mu))
    alpha = mpmath.mpf(h2_config.alpha)
    beta = -2 * hbar**2 * alpha**2 / (mu * amu)
    factor = mpmath.exp(2 * alpha * (te - t0))
    L = De / beta
    A = De * factor**2 / (q**2 * beta)
    C = 2 * De * factor / (q * beta)
    R = 1 / (mpmath.mpf(1) / 2 + mpmath.sqrt(C - A - L + mpmath.mpf(1) / 4))
    for value, golden in ((coeffs.beta, beta), (coeffs.L, L), (coeffs.A, A), (coeffs.C, C), (coeffs.R, R)):
        assert value == pytest.approx(float(golden), rel=1e-12)
    assert coeffs.domain == SpectralDomain.HALF_LINE


def test_a_beta_identity(registry, units):
    for molecule in registry:
        config = PotentialConfig(molecule=molecule, alpha=0.5)
        coeffs = derive_coefficients(config, units)
        expected = molecule.De * math.exp(4 * 0.5 * (molecule.te - molecule.t0)) / molecule.q**2
        assert coeffs.A * coeffs.beta == pytest.approx(expected, rel=1e-12)


def test_derive_coefficients_is_pure(h2_config, units):
    assert derive_coefficients(h2_config, units) == derive_coefficients(h2_config, units)


def test_realness_violation(toy_config, toy_units):
    with patch("fh_app.potential.compute_beta", return_value=0.02):
        with pytest.raises(RealnessViolationException) as exc_info:
            derive_coefficients(toy_config, toy_units)
    assert "C − A − L + 1/4" in exc_info.value.message


# --- Level coefficients ---
def test_level_coefficients_at_zero(toy_coeffs):
    level = level_coefficients(toy_coeffs, 0.0)
    assert level.M == 0
    assert level.zeta2 == -toy_coeffs.C
    assert level.zeta3 == -toy_coeffs.L


def test_level_coefficients_at_realness_boundary(toy_coeffs):
    level = level_coefficients(toy_coeffs, toy_coeffs.beta * toy_coeffs.A)
    assert level.zeta1 <= 1e-6 * math.sqrt(abs(toy_coeffs.A))


def test_level_coefficients_complex_zeta(toy_coeffs):
    with pytest.raises(ComplexZetaException):
        level_coefficients(toy_coeffs, toy_coeffs.beta * (toy_coeffs.A - 1.0))


def test_nu_problem_by_domain(toy_coeffs):
    problem = build_nu_problem(toy_coeffs, 0.0)
    assert problem.variable == "z"
    assert problem.tilde_tau == (1.0, -2.0)
    unit = toy_coeffs.model_copy(update={"domain": SpectralDomain.UNIT_INTERVAL})
    assert build_nu_problem(unit, 0.0).variable == "s"


def test_log_nu_variable_is_unit_interval(toy_config):
    log_x, log_rest = log_nu_variable(toy_config, np.array([-3.0, 1.0, 6.0]))
    x = np.exp(log_x)
    assert np.all((x > 0) & (x < 1))
    assert np.allclose(np.exp(log_rest), 1 - x)
