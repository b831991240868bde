"""
Finite-difference oracle for −(ħ²/2mc²)ψ″ + V(t)ψ = cP·ψ with Dirichlet ends.

The tridiagonal operator acts on the interior points; eigenvalues come from
Sturm-count bisection, eigenvectors from shifted inverse iteration.
"""

import logging
import math
import sys
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, solve_banded
from scipy.optimize import brentq

from . import constants
from .config import Settings, get_settings, get_unit_system
from .error_handlers import (
    DegenerateInputException,
    InvalidParameterException,
    NumericalException,
    PreconditionException,
)
from .potential import (
    asymptotes,
    evaluate_potential,
    harmonic_quantum,
    pole_time,
    potential_values,
)
from .schemas import GridSolution, GridSpec, PotentialConfig, UnitSystem
from .units import kinetic_coefficient, mass_energy

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps


def assemble_hamiltonian(
    interior_potential: np.ndarray, kinetic: float, h: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the interior three-point operator."""
    coupling = kinetic / h**2
    diagonal = 2 * coupling + np.asarray(interior_potential, dtype=float)
    off = np.full(diagonal.size - 1, -coupling)
    return diagonal, off


def gershgorin_bounds(diagonal: np.ndarray, off: np.ndarray) -> Tuple[float, float]:
    radius = np.zeros_like(diagonal)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    return float(np.min(diagonal - radius)), float(np.max(diagonal + radius))


def _pivmin(off_squared: Sequence[float]) -> float:
    return sys.float_info.min * max(1.0, max(off_squared, default=0.0))


def sturm_count(
    diagonal: Sequence[float], off_squared: Sequence[float], x: float, pivmin: float = 0.0
) -> int:
    """Number of eigenvalues below x (negative pivots of LDLᵀ of T − xI)."""
    pivmin = pivmin or sys.float_info.min
    d = diagonal[0] - x
    if abs(d) < pivmin:
        d = -pivmin
    count = 1 if d < 0 else 0
    for a_i, b2 in zip(diagonal[1:], off_squared):
        d = (a_i - x) - b2 / d
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0:
            count += 1
    return count


def bisect_eigenvalue(
    diagonal: Sequence[float],
    off_squared: Sequence[float],
    index: int,
    lower: float,
    upper: float,
    pivmin: float,
) -> Tuple[float, int]:
    """index-th eigenvalue (0-based) inside [lower, upper]; returns (value, steps)."""
    scale = max(abs(lower), abs(upper))
    steps = 0
    while upper - lower > 4 * EPS * scale + pivmin:
        if steps >= constants.BISECTION_MAX_ITERATIONS:
            raise NumericalException(
                f"Sturm bisection for eigenvalue {index} did not converge",
                {"lower": lower, "upper": upper, "steps": steps},
            )
        middle = 0.5 * (lower + upper)
        if sturm_count(diagonal, off_squared, middle, pivmin) > index:
            upper = middle
        else:
            lower = middle
        steps += 1
    logger.debug(f"eigenvalue {index}: [{lower!r}, {upper!r}] after {steps} steps")
    return 0.5 * (lower + upper), steps


def _apply(diagonal: np.ndarray, off: np.ndarray, vector: np.ndarray) -> np.ndarray:
    result = diagonal * vector
    result[:-1] += off * vector[1:]
    result[1:] += off * vector[:-1]
    return result


def _orthogonalize(vector: np.ndarray, basis: List[np.ndarray]) -> np.ndarray:
    for other in basis:
        vector = vector - np.dot(other, vector) * other
    return vector


def inverse_iteration(
    diagonal: np.ndarray,
    off: np.ndarray,
    eigenvalue: float,
    previous: List[np.ndarray],
    scale: float,
    seed: int = 0,
) -> Tuple[np.ndarray, int]:
    """Unit eigenvector for a converged eigenvalue; returns (vector, steps)."""
    size = diagonal.size
    tolerance = constants.INVERSE_ITERATION_TOLERANCE * EPS * scale
    shift = eigenvalue + 10 * EPS * scale
    banded = np.zeros((3, size))
    banded[0, 1:] = off
    banded[2, :-1] = off

    vector = np.random.default_rng(seed).standard_normal(size)
    vector = _orthogonalize(vector, previous)
    vector /= np.linalg.norm(vector)
    residual = math.inf
    for step in range(1, constants.INVERSE_ITERATION_MAX_STEPS + 1):
        banded[1] = diagonal - shift
        try:
            solved = solve_banded((1, 1), banded, vector)
        except (LinAlgError, ValueError):
            shift += 100 * EPS * scale
            continue
        solved = _orthogonalize(solved, previous)
        norm = np.linalg.norm(solved)
        if not norm > 0 or not math.isfinite(norm):
            shift += 100 * EPS * scale
            continue
        vector = solved / norm
        residual = float(np.linalg.norm(_apply(diagonal, off, vector) - eigenvalue * vector))
        logger.debug(f"inverse iteration step {step}: residual {residual!r}")
        if residual <= tolerance:
            break
    else:
        raise NumericalException(
            "Inverse iteration did not converge",
            {
                "eigenvalue": eigenvalue,
                "residual": residual,
                "tolerance": tolerance,
                "steps": constants.INVERSE_ITERATION_MAX_STEPS,
            },
        )
    lead = np.flatnonzero(np.abs(vector) > 1e-3 * np.max(np.abs(vector)))[0]
    if vector[lead] < 0:
        vector = -vector
    return vector, step


def _check_request(spec: GridSpec, count: int):
    if count < 1:
        raise InvalidParameterException("count", count, "must be positive")
    if count > spec.num_points / constants.MAX_COUNT_FRACTION:
        raise PreconditionException(
            f"count = {count} exceeds num_points/{constants.MAX_COUNT_FRACTION} "
            f"for a {spec.num_points}-point grid",
            {"count": count, "num_points": spec.num_points},
        )


def _eigenvalues(
    potential: Callable[[np.ndarray], np.ndarray],
    kinetic: float,
    spec: GridSpec,
    count: int,
) -> Tuple[np.ndarray, np.ndarray, List[float], List[int], float]:
    interior = spec.points()[1:-1]
    diagonal, off = assemble_hamiltonian(potential(interior), kinetic, spec.h)
    lower, upper = gershgorin_bounds(diagonal, off)
    off_squared = (off * off).tolist()
    diagonal_list = diagonal.tolist()
    pivmin = _pivmin(off_squared)
    values: List[float] = []
    steps: List[int] = []
    floor = lower
    for index in range(count):
        value, taken = bisect_eigenvalue(
            diagonal_list, off_squared, index, floor, upper, pivmin
        )
        values.append(value)
        steps.append(taken)
        floor = value - 4 * EPS * max(abs(lower), abs(upper))
    return diagonal, off, values, steps, max(abs(lower), abs(upper))


def solve_potential_spectrum(
    potential: Callable[[np.ndarray], np.ndarray],
    kinetic: float,
    spec: GridSpec,
    count: int,
    richardson: bool = True,
) -> GridSolution:
    """Lowest `count` eigenpairs for an arbitrary potential callable V(t) in eV."""
    _check_request(spec, count)
    diagonal, off, values, steps, scale = _eigenvalues(potential, kinetic, spec, count)

    vectors: List[np.ndarray] = []
    inverse_steps: List[int] = []
    for index, value in enumerate(values):
        vector, taken = inverse_iteration(diagonal, off, value, vectors, scale, seed=index)
        vectors.append(vector)
        inverse_steps.append(taken)
    eigenvectors = np.zeros((count, spec.num_points))
    eigenvectors[:, 1:-1] = np.array(vectors)

    convergence: List[Optional[float]] = [None] * count
    half_points = (spec.num_points + 1) // 2
    if richardson and half_points >= constants.MIN_GRID_POINTS and (
        count <= half_points / constants.MAX_COUNT_FRACTION
    ):
        coarse = spec.model_copy(update={"num_points": half_points})
        _, _, coarse_values, _, _ = _eigenvalues(potential, kinetic, coarse, count)
        ratio = coarse.h / spec.h
        convergence = [
            (fine - rough) / (ratio**2 - 1) for fine, rough in zip(values, coarse_values)
        ]

    logger.info(
        f"Oracle solved {count} levels on [{spec.t_min!r}, {spec.t_max!r}] "
        f"with {spec.num_points} points"
    )
    return GridSolution(
        spec=spec,
        eigenvalues=values,
        eigenvectors=eigenvectors,
        convergence=convergence,
        operator_scale=scale,
        bisection_steps=steps,
        inverse_iteration_steps=inverse_steps,
    )


def solve_grid_spectrum(
    config: PotentialConfig,
    spec: GridSpec,
    count: int,
    units: Optional[UnitSystem] = None,
    richardson: bool = True,
) -> GridSolution:
    units = units or get_unit_system()
    kinetic = kinetic_coefficient(config.molecule.mu, units)
    return solve_potential_spectrum(
        lambda t: potential_values(config, t), kinetic, spec, count, richardson
    )


def residual_norm(
    config: PotentialConfig,
    cPn: float,
    psi: np.ndarray,
    spec: GridSpec,
    units: Optional[UnitSystem] = None,
) -> float:
    """‖Hψ − cPn·ψ‖/‖ψ‖ over the interior, ψ given on all grid points."""
    units = units or get_unit_system()
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (spec.num_points,):
        raise InvalidParameterException(
            "psi", psi.shape, f"expected {spec.num_points} grid values"
        )
    norm = float(np.linalg.norm(psi))
    if norm == 0:
        raise DegenerateInputException("ψ is the zero vector")
    kinetic = kinetic_coefficient(config.molecule.mu, units)
    interior = spec.points()[1:-1]
    laplacian = (psi[:-2] - 2 * psi[1:-1] + psi[2:]) / spec.h**2
    applied = -kinetic * laplacian + potential_values(config, interior) * psi[1:-1]
    return float(np.linalg.norm(applied - cPn * psi[1:-1])) / norm


def _turning_point(
    config: PotentialConfig, wall: float, direction: int, step: float
) -> float:
    origin = config.molecule.te
    limit = pole_time(config) if direction > 0 else None

    def excess(t: float) -> float:
        return evaluate_potential(config, t) - wall

    inner = origin
    for _ in range(constants.ADVISOR_MAX_DOUBLINGS):
        outer = origin + direction * step
        if limit is not None and outer >= limit:
            outer = inner + (limit - inner) / 2
        if excess(outer) >= 0:
            break
        inner = outer
        step *= 2
    else:
        raise NumericalException(
            "Turning point not bracketed", {"wall": wall, "direction": direction}
        )
    return brentq(excess, min(inner, outer), max(inner, outer))


def _tail_margin(
    config: PotentialConfig,
    asymptote: float,
    top_level: float,
    mc2: float,
    units: UnitSystem,
) -> float:
    """Decay lengths ħ/√(2mc²(V∞ − E)) past a turning point; zero towards a pole."""
    if not math.isfinite(asymptote):
        return 0.0
    energy = min(top_level, (1 - constants.ADVISOR_SATURATION) * asymptote)
    decay = units.hbar_eV_ns / math.sqrt(2 * mc2 * (asymptote - energy))
    return min(
        constants.ADVISOR_TAIL_DECAY_LENGTHS * decay, constants.ADVISOR_MAX_TAIL / config.alpha
    )


def domain_advisor(
    config: PotentialConfig,
    units: Optional[UnitSystem] = None,
    levels: int = 4,
    current: Optional[Settings] = None,
) -> GridSpec:
    """Box between the turning points of a wall energy above the requested levels."""
    current = current or get_settings()
    units = units or get_unit_system(current)
    hbar_omega = harmonic_quantum(config, units)
    mc2 = mass_energy(config.molecule.mu, units)
    length = units.hbar_eV_ns / math.sqrt(mc2 * hbar_omega)

    harmonic_wall = hbar_omega * (levels - 0.5 + current.oracle_wall_quanta)
    top_level = hbar_omega * (levels - 0.5)
    step = min(constants.ADVISOR_STEP_FACTOR / config.alpha, length)
    ends = []
    for direction, asymptote in zip((-1, 1), asymptotes(config)):
        ceiling = (1 - constants.ADVISOR_SATURATION) * asymptote
        wall = min(harmonic_wall, ceiling)
        turning = _turning_point(config, wall, direction, step)
        ends.append(turning + direction * _tail_margin(config, asymptote, top_level, mc2, units))
    left, right = ends

    points = math.ceil(current.oracle_points_per_length * (right - left) / length)
    points = min(max(points, current.oracle_min_points), current.oracle_max_points)
    logger.info(
        f"Advisor for {config.molecule.name}: [{left!r}, {right!r}], {points} points, "
        f"wall {harmonic_wall!r} eV"
    )
    return GridSpec(t_min=left, t_max=right, num_points=points)
