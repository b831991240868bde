"""
IDEP potential in time, its Nikiforov-Uvarov coefficients and the NU problem builders.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from . import constants
from .error_handlers import (
    ComplexZetaException,
    RealnessViolationException,
    SingularityException,
)
from .schemas import (
    BetaVariant,
    DerivedCoefficients,
    LevelCoefficients,
    NUProblem,
    PotentialConfig,
    SpectralDomain,
    UnitSystem,
)
from .units import CODATA_UNITS, mass_energy

logger = logging.getLogger(__name__)


def _exponent(config: PotentialConfig, t):
    return 2 * config.alpha * (np.asarray(t, dtype=float) - config.molecule.t0)


def equilibrium_factor(config: PotentialConfig) -> float:
    """e^{2α(te−t0)}"""
    molecule = config.molecule
    return math.exp(2 * config.alpha * (molecule.te - molecule.t0))


def potential_values(config: PotentialConfig, t) -> np.ndarray:
    """V(t) = De[1 − (q − e^{2α(te−t0)})/(q − e^{2α(t−t0)})]² on an array of times."""
    molecule = config.molecule
    t = np.asarray(t, dtype=float)
    denominator = molecule.q - np.exp(_exponent(config, t))
    near_pole = np.abs(denominator) <= constants.SINGULARITY_TOLERANCE * max(
        1.0, abs(molecule.q)
    )
    if np.any(near_pole):
        bad = float(np.atleast_1d(t)[np.argmax(np.atleast_1d(near_pole))])
        raise SingularityException(bad, {"q": molecule.q, "t0": molecule.t0})
    bracket = 1.0 - (molecule.q - equilibrium_factor(config)) / denominator
    return molecule.De * bracket**2


def evaluate_potential(config: PotentialConfig, t: float) -> float:
    return float(potential_values(config, t))


def asymptotes(config: PotentialConfig) -> Tuple[float, float]:
    """V at t → −∞ and t → +∞ (+∞ when q > 0, the right side ends at a pole)."""
    molecule = config.molecule
    a = equilibrium_factor(config) / molecule.q
    right = molecule.De if molecule.q < 0 else math.inf
    return molecule.De * a**2, right


def pole_time(config: PotentialConfig) -> Optional[float]:
    molecule = config.molecule
    if molecule.q < 0:
        return None
    return molecule.t0 + math.log(molecule.q) / (2 * config.alpha)


def equilibrium_curvature(config: PotentialConfig) -> float:
    """V″(te) = 8·De·α²·E²/(q − E)², E = e^{2α(te−t0)}."""
    molecule = config.molecule
    factor = equilibrium_factor(config)
    return 8 * molecule.De * config.alpha**2 * factor**2 / (molecule.q - factor) ** 2


def harmonic_quantum(config: PotentialConfig, units: Optional[UnitSystem] = None) -> float:
    """ħω at the well bottom, eV."""
    units = units or CODATA_UNITS
    mc2 = mass_energy(config.molecule.mu, units)
    return units.hbar_eV_ns * math.sqrt(equilibrium_curvature(config) / mc2)


def compute_beta(config: PotentialConfig, units: Optional[UnitSystem] = None) -> float:
    units = units or CODATA_UNITS
    mc2 = mass_energy(config.molecule.mu, units)
    if config.beta_variant == BetaVariant.AS_PRINTED:
        return -2 * units.hbar_eV_ns * config.alpha**2 / mc2
    return -2 * units.hbar_eV_ns**2 * config.alpha**2 / mc2


def derive_coefficients(
    config: PotentialConfig, units: Optional[UnitSystem] = None
) -> DerivedCoefficients:
    molecule = config.molecule
    beta = compute_beta(config, units)
    factor = equilibrium_factor(config)
    L = molecule.De / beta
    A = molecule.De * factor**2 / (molecule.q**2 * beta)
    C = 2 * molecule.De * factor / (molecule.q * beta)
    discriminant = C - A - L + 0.25
    scale = max(abs(A), abs(C), abs(L), 1.0)
    if discriminant < -constants.REALNESS_SLACK * scale:
        raise RealnessViolationException(
            discriminant, {"A": A, "C": C, "L": L, "molecule": molecule.name}
        )
    R_inv_minus_half = math.sqrt(max(discriminant, 0.0))
    domain = SpectralDomain.UNIT_INTERVAL if molecule.q > 0 else SpectralDomain.HALF_LINE
    return DerivedCoefficients(
        beta=beta,
        L=L,
        A=A,
        C=C,
        R_inv_minus_half=R_inv_minus_half,
        R=1.0 / (0.5 + R_inv_minus_half),
        beta_variant=config.beta_variant,
        domain=domain,
    )


def level_from_m(coeffs: DerivedCoefficients, M: float, n: int = 0) -> LevelCoefficients:
    """ζ1 = √(−A − M), ζ2 = −(C + 2M), ζ3 = −(L + M)."""
    excess = coeffs.A + M
    if excess > constants.REALNESS_SLACK * max(abs(coeffs.A), abs(M), 1.0):
        raise ComplexZetaException(
            f"A + M = {excess!r} > 0, ζ1 is not real", {"A": coeffs.A, "M": M, "n": n}
        )
    return LevelCoefficients(
        n=n,
        M=M,
        zeta1=math.sqrt(max(-excess, 0.0)),
        zeta2=-(coeffs.C + 2 * M),
        zeta3=-(coeffs.L + M),
    )


def level_coefficients(
    coeffs: DerivedCoefficients, cPn: float, n: int = 0
) -> LevelCoefficients:
    return level_from_m(coeffs, -cPn / coeffs.beta, n)


def unit_interval_problem(level: LevelCoefficients) -> NUProblem:
    """s-form on (0, 1): τ̃ = 1 − s, σ = s(1 − s), σ̃ = −ζ1² + ζ2·s − ζ3·s²."""
    return NUProblem(
        tilde_tau=(1.0, -1.0),
        sigma=(0.0, 1.0, -1.0),
        tilde_sigma=(-level.zeta1**2, level.zeta2, -level.zeta3),
        variable="s",
    )


def half_line_problem(coeffs: DerivedCoefficients, M: float) -> NUProblem:
    """z = s/(s − 1): τ̃ = 1 − 2z, σ = z(1 − z), σ̃ = (A + M) + (C − 2A)z − (C − A − L)z²."""
    return NUProblem(
        tilde_tau=(1.0, -2.0),
        sigma=(0.0, 1.0, -1.0),
        tilde_sigma=(
            coeffs.A + M,
            coeffs.C - 2 * coeffs.A,
            -(coeffs.C - coeffs.A - coeffs.L),
        ),
        variable="z",
    )


def build_nu_problem(coeffs: DerivedCoefficients, M: float) -> NUProblem:
    """NU problem on the physical domain selected by the sign of q."""
    if coeffs.domain == SpectralDomain.HALF_LINE:
        return half_line_problem(coeffs, M)
    return NUProblem(
        tilde_tau=(1.0, -1.0),
        sigma=(0.0, 1.0, -1.0),
        tilde_sigma=(coeffs.A + M, -(coeffs.C + 2 * M), coeffs.L + M),
        variable="s",
    )


def log_nu_variable(config: PotentialConfig, t) -> Tuple[np.ndarray, np.ndarray]:
    """log x and log(1 − x) of the NU variable (s for q > 0, z for q < 0) at times t."""
    molecule = config.molecule
    x = _exponent(config, t)
    if molecule.q < 0:
        log_abs_q = math.log(-molecule.q)
        log_sum = np.logaddexp(x, log_abs_q)
        return x - log_sum, log_abs_q - log_sum
    log_s = x - math.log(molecule.q)
    if np.any(log_s >= 0):
        raise SingularityException(float(pole_time(config)), {"q": molecule.q})
    return log_s, np.log1p(-np.exp(log_s))
