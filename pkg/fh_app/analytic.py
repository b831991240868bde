"""
Closed-form momentum spectrum, Jacobi wavefunctions and their normalization.
"""

import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import bisect
from scipy.special import roots_legendre

from . import constants
from .error_handlers import (
    ComplexZetaException,
    DomainException,
    IntegrabilityException,
    InvalidParameterException,
    NumericalException,
    PoleException,
)
from .nu_engine import quantization_lambda, reduce
from .potential import (
    build_nu_problem,
    derive_coefficients,
    equilibrium_factor,
    log_nu_variable,
)
from .schemas import (
    DerivedCoefficients,
    EigenvalueVariant,
    LevelCoefficients,
    PotentialConfig,
    SpectralDomain,
    SpectrumLevel,
    SpectrumResult,
    UnitSystem,
    WavefunctionSpec,
)
from .units import to_momentum

logger = logging.getLogger(__name__)


# ------------- Eigenvalues -------------
def printed_bracket(coeffs: DerivedCoefficients, n: int) -> float:
    """[2A − C − n(n+1) − (2n+1)/R] / [2(n + 1/R)]"""
    denominator = 2 * (n + 1 / coeffs.R)
    if abs(denominator) <= constants.SINGULARITY_TOLERANCE:
        raise PoleException(n, coeffs.R)
    numerator = 2 * coeffs.A - coeffs.C - n * (n + 1) - (2 * n + 1) / coeffs.R
    return numerator / denominator


def quantization_mismatch(coeffs: DerivedCoefficients, n: int, M: float) -> float:
    """λ(M) − λn(M) on the physical NU problem; increasing in M."""
    reduction = reduce(build_nu_problem(coeffs, M))
    lam, lam_n = quantization_lambda(reduction, n)
    return lam - lam_n


def _upper_m(coeffs: DerivedCoefficients) -> float:
    if coeffs.domain == SpectralDomain.HALF_LINE:
        return min(-coeffs.A, -coeffs.L)
    return -coeffs.A


def level_exists(coeffs: DerivedCoefficients, n: int) -> bool:
    return quantization_mismatch(coeffs, n, _upper_m(coeffs)) >= 0


def solve_quantization(coeffs: DerivedCoefficients, n: int) -> float:
    """Root M of λ(M) = λn(M), bracketed below the realness bound of ζ1."""
    upper = _upper_m(coeffs)
    f_upper = quantization_mismatch(coeffs, n, upper)
    if f_upper < 0:
        raise ComplexZetaException(
            f"Level n = {n} has no real quantization root", {"n": n, "M_max": upper}
        )
    if f_upper == 0:
        return upper

    step = max(1.0, abs(upper))
    lower = upper - step
    for _ in range(constants.BRACKET_MAX_EXPANSIONS):
        if quantization_mismatch(coeffs, n, lower) < 0:
            break
        step *= 2
        lower = upper - step
    else:
        raise NumericalException(
            f"Could not bracket the quantization root for n = {n}",
            {"lower": lower, "upper": upper, "expansions": constants.BRACKET_MAX_EXPANSIONS},
        )
    logger.debug(f"n = {n}: bracket [{lower!r}, {upper!r}]")

    try:
        root = bisect(
            lambda M: quantization_mismatch(coeffs, n, M),
            lower,
            upper,
            xtol=constants.QUANTIZATION_XTOL,
            rtol=4 * np.finfo(float).eps,
            maxiter=constants.QUANTIZATION_MAXITER,
        )
    except RuntimeError as exc:
        raise NumericalException(
            f"Quantization root for n = {n} did not converge: {exc}",
            {"lower": lower, "upper": upper, "maxiter": constants.QUANTIZATION_MAXITER},
        )
    return float(root)


def momentum_eigenvalue(
    coeffs: DerivedCoefficients, n: int, variant: EigenvalueVariant
) -> float:
    """cPn in eV for one of the three eigenvalue readings."""
    if n < 0:
        raise InvalidParameterException("n", n, "level index must be non-negative")
    if variant == EigenvalueVariant.AS_PRINTED_EQ22:
        return coeffs.A + coeffs.beta * printed_bracket(coeffs, n) ** 2
    if variant == EigenvalueVariant.BETA_TIMES_A:
        return coeffs.beta * (coeffs.A + printed_bracket(coeffs, n) ** 2)
    return -coeffs.beta * solve_quantization(coeffs, n)


def physical_eigenvalue(
    config: PotentialConfig, n: int, units: Optional[UnitSystem] = None
) -> float:
    """Closed-form cPn of the physical quantization condition."""
    coeffs = derive_coefficients(config, units)
    kappa = -coeffs.beta
    if coeffs.domain == SpectralDomain.UNIT_INTERVAL:
        nu = n + 1 / coeffs.R
        zeta1 = (coeffs.A - coeffs.L - nu**2) / (2 * nu)
        if zeta1 < 0:
            raise ComplexZetaException(f"Level n = {n} is not bound", {"zeta1": zeta1})
        return kappa * (-coeffs.A - zeta1**2)

    # ζ1 + √ζ3 = 1/R − 1 − n, записано без вычитания близких величин
    g = math.sqrt(config.molecule.De / kappa)
    b = abs(equilibrium_factor(config) / config.molecule.q) * g
    width = g + b
    w = math.sqrt(width * width + 0.25)
    delta = n + 0.5 - 0.25 / (w + width)
    S = width - delta
    if S <= 0:
        raise ComplexZetaException(f"Level n = {n} is not bound", {"S": S})
    shift = delta * (2 * g - delta) / (2 * S)
    zeta1 = b - shift
    if zeta1 < 0 or g - delta + shift < 0:
        raise ComplexZetaException(f"Level n = {n} is not bound", {"zeta1": zeta1})
    return kappa * shift * (2 * b - shift)


def bound_state_count(coeffs: DerivedCoefficients) -> int:
    """Number of levels with a real quantization root."""
    if not level_exists(coeffs, 0):
        return 0
    high = 1
    while level_exists(coeffs, high):
        high *= 2
        if high > 2**62:
            raise NumericalException("Bound-state count diverges", {"n": high})
    low = high // 2  # существует
    while high - low > 1:
        middle = (low + high) // 2
        if level_exists(coeffs, middle):
            low = middle
        else:
            high = middle
    return low + 1


def is_real_level(coeffs: DerivedCoefficients, cPn: float) -> bool:
    M = -cPn / coeffs.beta
    return coeffs.A + M <= constants.REALNESS_SLACK * max(abs(coeffs.A), abs(M), 1.0)


def spectrum(
    config: PotentialConfig,
    levels: int,
    variant: EigenvalueVariant = EigenvalueVariant.QUANTIZATION_ROOT,
    units: Optional[UnitSystem] = None,
    momentum_sign: int = -1,
) -> SpectrumResult:
    coeffs = derive_coefficients(config, units)
    admitted: List[SpectrumLevel] = []
    excluded: List[int] = []
    for n in range(levels):
        try:
            cPn = momentum_eigenvalue(coeffs, n, variant)
        except (ComplexZetaException, PoleException) as exc:
            logger.info(f"{config.molecule.name} n = {n} excluded: {exc.message}")
            excluded.append(n)
            continue
        if not math.isfinite(cPn) or not is_real_level(coeffs, cPn):
            logger.info(f"{config.molecule.name} n = {n} excluded: ζ1 is not real")
            excluded.append(n)
            continue
        admitted.append(SpectrumLevel(n=n, cPn=cPn, Pn=to_momentum(cPn, momentum_sign)))
    return SpectrumResult(
        config=config,
        formula_variant=variant,
        levels=admitted,
        realness_cutoff=admitted[-1].n if admitted else None,
        excluded=excluded,
    )


# ------------- λ and λn as printed / as derived -------------
def derived_lambda(level: LevelCoefficients, R: float) -> float:
    w = 1 / R - 0.5
    return level.zeta2 - 2 * level.zeta1**2 - 2 * level.zeta1 * w - level.zeta1 - 1 / R


def synthetic_level(n: int, zeta1: float, R: float) -> LevelCoefficients:
    """Quantized unit-interval level for given (n, ζ1, R) with M = 0.

    ζ2 solves λ = λn, ζ3 follows from (1/R − 1/2)² = ζ1² + ζ3 − ζ2 + 1/4.
    """
    if not R > 0:
        raise InvalidParameterException("R", R, "must be positive")
    if zeta1 < 0:
        raise InvalidParameterException("zeta1", zeta1, "must be non-negative")
    w = 1 / R - 0.5
    probe = LevelCoefficients(n=n, M=0.0, zeta1=zeta1, zeta2=0.0, zeta3=0.0)
    zeta2 = derived_lambda_n(probe, R, n) - derived_lambda(probe, R)
    zeta3 = w * w - 0.25 - zeta1**2 + zeta2
    return probe.model_copy(update={"zeta2": zeta2, "zeta3": zeta3})


def printed_lambda(level: LevelCoefficients, R: float) -> float:
    w = 1 / R - 0.5
    return (
        level.zeta2
        - 2 * level.zeta1**2
        - 2 * level.zeta1 * w
        - (2 * level.zeta1 / R + level.zeta1)
    )


def derived_lambda_n(level: LevelCoefficients, R: float, n: int) -> float:
    return n * (n - 1) + n * (1 + 2 * level.zeta1 + 2 / R)


def printed_lambda_n(level: LevelCoefficients, R: float, n: int) -> float:
    return n * (n - 1) + 2 * n * (1 + 2 / R) + 2 * n * level.zeta1


# ------------- Jacobi polynomials -------------
def _check_jacobi(n: int, a: float, b: float):
    if n < 0:
        raise InvalidParameterException("n", n, "degree must be non-negative")
    if a <= -1 or b <= -1:
        raise InvalidParameterException("(a, b)", (a, b), "Jacobi parameters must exceed −1")


def jacobi(n: int, a: float, b: float, x):
    """P_n^{(a,b)}(x) by the three-term recurrence."""
    _check_jacobi(n, a, b)
    x_arr = np.asarray(x, dtype=float)
    previous = np.ones_like(x_arr)
    if n == 0:
        current = previous
    else:
        current = (a + 1) + (a + b + 2) * (x_arr - 1) / 2
        for k in range(1, n):
            s = 2 * k + a + b
            c1 = 2 * (k + 1) * (k + a + b + 1) * s
            c2 = (s + 1) * ((s + 2) * s * x_arr + a * a - b * b)
            c3 = 2 * (k + a) * (k + b) * (s + 2)
            previous, current = current, (c2 * current - c3 * previous) / c1
    return float(current) if np.ndim(x) == 0 else current


def jacobi_derivative(n: int, a: float, b: float, x, order: int = 1):
    """d^m/dx^m P_n^{(a,b)} = Γ(n+a+b+1+m)/(2^m Γ(n+a+b+1)) · P_{n−m}^{(a+m,b+m)}"""
    _check_jacobi(n, a, b)
    if order > n:
        return 0.0 if np.ndim(x) == 0 else np.zeros_like(np.asarray(x, dtype=float))
    factor = 1.0
    for j in range(order):
        factor *= (n + a + b + 1 + j) / 2
    return factor * jacobi(n - order, a + order, b + order, x)


# ------------- Wavefunctions -------------
def _check_level(spec: WavefunctionSpec, level: LevelCoefficients):
    if spec.n != level.n or not math.isclose(
        spec.zeta1, level.zeta1, rel_tol=1e-9, abs_tol=1e-12
    ):
        raise InvalidParameterException(
            "level", (level.n, level.zeta1), f"does not match spec (n={spec.n}, ζ1={spec.zeta1})"
        )


def _unit_interval_points(s) -> np.ndarray:
    s_arr = np.asarray(s, dtype=float)
    if np.any((s_arr <= 0) | (s_arr >= 1)):
        raise DomainException("s")
    return s_arr


def _profile(
    s: np.ndarray, left: float, right: float, n: int, a: float, b: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """f = s^left (1−s)^right P_n^{(a,b)}(1 − 2s) with f′ and f″."""
    phi = s**left * (1 - s) ** right
    u = left / s - right / (1 - s)
    du = -left / s**2 - right / (1 - s) ** 2
    x = 1 - 2 * s
    y = jacobi(n, a, b, x)
    dy = -2 * jacobi_derivative(n, a, b, x)
    d2y = 4 * jacobi_derivative(n, a, b, x, order=2)
    return phi * y, phi * (u * y + dy), phi * ((du + u * u) * y + 2 * u * dy + d2y)


def wavefunction(spec: WavefunctionSpec, level: LevelCoefficients, s):
    """ψn(s) = Bn s^{ζ1}(1 − s)^{1/R} P_n^{(2ζ1, 2/R−1)}(1 − 2s)."""
    _check_level(spec, level)
    s_arr = _unit_interval_points(s)
    a, b = spec.jacobi_parameters
    psi = spec.normalization * s_arr**spec.zeta1 * (1 - s_arr) ** (1 / spec.R) * jacobi(
        spec.n, a, b, 1 - 2 * s_arr
    )
    return float(psi) if np.ndim(s) == 0 else psi


def wavefunction_derivatives(
    spec: WavefunctionSpec, level: LevelCoefficients, s
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    _check_level(spec, level)
    s_arr = _unit_interval_points(np.atleast_1d(s))
    a, b = spec.jacobi_parameters
    psi, dpsi, d2psi = _profile(s_arr, spec.zeta1, 1 / spec.R, spec.n, a, b)
    B = spec.normalization
    return B * psi, B * dpsi, B * d2psi


def equation_residual(spec: WavefunctionSpec, level: LevelCoefficients, s) -> np.ndarray:
    """ψ″ + ψ′/s + (−ζ1² + ζ2 s − ζ3 s²)/(s²(1 − s)²)·ψ"""
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    psi, dpsi, d2psi = wavefunction_derivatives(spec, level, s_arr)
    tilde_sigma = -level.zeta1**2 + level.zeta2 * s_arr - level.zeta3 * s_arr**2
    return d2psi + dpsi / s_arr + tilde_sigma / (s_arr**2 * (1 - s_arr) ** 2) * psi


def gauss_legendre_unit(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on (0, 1)."""
    if order < 1:
        raise InvalidParameterException("quadrature_order", order, "must be positive")
    nodes, weights = roots_legendre(order)
    return (nodes + 1) / 2, weights / 2


def quadrature_normalization(func: Callable, order: int) -> float:
    """1/√∫₀¹ f² ds"""
    nodes, weights = gauss_legendre_unit(order)
    integral = float(np.sum(weights * np.asarray(func(nodes), dtype=float) ** 2))
    if not math.isfinite(integral):
        raise IntegrabilityException("Norm integral diverges", {"integral": integral})
    if not integral > 0:
        raise NumericalException("Norm integral is not positive", {"integral": integral})
    return 1 / math.sqrt(integral)


def normalize(
    spec: WavefunctionSpec,
    level: LevelCoefficients,
    quadrature_order: int = constants.DEFAULT_QUADRATURE_ORDER,
) -> float:
    """Bn with ∫₀¹ ψn² ds = 1."""
    raw = spec.model_copy(update={"normalization": 1.0})
    return quadrature_normalization(lambda s: wavefunction(raw, level, s), quadrature_order)


def make_wavefunction(
    level: LevelCoefficients,
    R: float,
    quadrature_order: int = constants.DEFAULT_QUADRATURE_ORDER,
) -> WavefunctionSpec:
    spec = WavefunctionSpec(n=level.n, zeta1=level.zeta1, R=R)
    return spec.model_copy(
        update={"normalization": normalize(spec, level, quadrature_order)}
    )


def physical_wavefunction(
    config: PotentialConfig,
    n: int,
    t,
    units: Optional[UnitSystem] = None,
    M: Optional[float] = None,
) -> np.ndarray:
    """Unnormalized ψn(t) of the physical problem, factors evaluated in log space."""
    coeffs = derive_coefficients(config, units)
    if M is None:
        M = solve_quantization(coeffs, n)
    zeta1 = math.sqrt(max(-(coeffs.A + M), 0.0))
    log_x, log_rest = log_nu_variable(config, t)
    if coeffs.domain == SpectralDomain.HALF_LINE:
        right = math.sqrt(max(-(coeffs.L + M), 0.0))
        a, b = 2 * zeta1, 2 * right
    else:
        right = 1 / coeffs.R
        a, b = 2 * zeta1, 2 / coeffs.R - 1
    log_phi = zeta1 * log_x + right * log_rest
    return np.exp(log_phi) * jacobi(n, a, b, 1 - 2 * np.exp(log_x))


def variant_values(
    coeffs: DerivedCoefficients, n: int, variants: List[EigenvalueVariant]
) -> dict:
    """cPn per variant, None where the level is excluded."""
    values = {}
    for variant in variants:
        try:
            cPn = momentum_eigenvalue(coeffs, n, variant)
            values[variant.value] = cPn if is_real_level(coeffs, cPn) else None
        except (ComplexZetaException, PoleException):
            values[variant.value] = None
    return values
