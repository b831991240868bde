"""
Generic Nikiforov-Uvarov reduction of ψ'' + (τ̃/σ)ψ' + (σ̃/σ²)ψ = 0.

Π(s) = (σ′ − τ̃)/2 ± √((σ′ − τ̃)²/4 − σ̃ + kσ); k makes the radicand a perfect
square, τ = τ̃ + 2Π, λ = k + Π′ and λn = −nτ′ − n(n − 1)σ″/2.
"""

import logging
import math
from typing import List, Tuple

from . import constants
from .error_handlers import (
    BranchSelectionException,
    IntegrabilityException,
    NoClosedFormException,
)
from .schemas import BranchChoice, NUProblem, NUReduction, WeightFunction

logger = logging.getLogger(__name__)


def _radicand_parts(problem: NUProblem) -> Tuple[Tuple[float, float], Tuple[float, float, float]]:
    """p = (σ′ − τ̃)/2 and the k-independent part p² − σ̃ of the radicand."""
    s0, s1, s2 = problem.sigma
    t0, t1 = problem.tilde_tau
    g0, g1, g2 = problem.tilde_sigma
    p0 = (s1 - t0) / 2
    p1 = (2 * s2 - t1) / 2
    return (p0, p1), (p0**2 - g0, 2 * p0 * p1 - g1, p1**2 - g2)


def radicand(problem: NUProblem, k: float) -> Tuple[float, float, float]:
    _, (b0, b1, b2) = _radicand_parts(problem)
    s0, s1, s2 = problem.sigma
    return b0 + k * s0, b1 + k * s1, b2 + k * s2


def discriminant(problem: NUProblem, k: float) -> float:
    q0, q1, q2 = radicand(problem, k)
    return q1**2 - 4 * q0 * q2


def scaled_discriminant(problem: NUProblem, k: float) -> float:
    scale = max(problem.scale(), abs(k))
    return discriminant(problem, k) / scale**2


def k_roots(problem: NUProblem) -> Tuple[float, float]:
    """(k_plus, k_minus), larger root first."""
    _, (b0, b1, b2) = _radicand_parts(problem)
    s0, s1, s2 = problem.sigma
    a_k = s1**2 - 4 * s0 * s2
    b_k = 2 * b1 * s1 - 4 * b0 * s2 - 4 * b2 * s0
    c_k = b1**2 - 4 * b0 * b2
    if a_k == 0:
        if b_k == 0:
            raise NoClosedFormException(0.0, {"reason": "k drops out of the radicand"})
        k = -c_k / b_k
        return k, k
    disc = b_k**2 - 4 * a_k * c_k
    scale = max(abs(b_k), abs(a_k * c_k) ** 0.5, 1.0)
    if disc < -constants.DISCRIMINANT_TOLERANCE * scale**2:
        raise NoClosedFormException(disc, {"a": a_k, "b": b_k, "c": c_k})
    root = math.sqrt(max(disc, 0.0))
    big = -(b_k + math.copysign(root, b_k)) / 2
    if big == 0:
        return 0.0, 0.0
    first, second = big / a_k, c_k / big
    return max(first, second), min(first, second)


def _endpoint_exponents(problem: NUProblem, pi: Tuple[float, float]) -> Tuple[float, ...]:
    """Π(r)/σ′(r) at every finite domain endpoint r that is a root of σ."""
    s0, s1, s2 = problem.sigma
    exponents = []
    for r in problem.domain:
        if not math.isfinite(r):
            continue
        sigma_r = s0 + s1 * r + s2 * r * r
        slope = s1 + 2 * s2 * r
        if abs(sigma_r) <= 1e-12 * problem.scale() and slope != 0:
            exponents.append((pi[0] + pi[1] * r) / slope)
    return tuple(exponents)


def enumerate_branches(problem: NUProblem) -> List[BranchChoice]:
    """All real (k±, ±√) combinations."""
    (p0, p1), _ = _radicand_parts(problem)
    t0, t1 = problem.tilde_tau
    k_plus, k_minus = k_roots(problem)
    branches = []
    for label, k in (("plus", k_plus), ("minus", k_minus)):
        q0, q1, q2 = radicand(problem, k)
        tolerance = constants.DISCRIMINANT_TOLERANCE * max(problem.scale(), abs(k))
        if q0 < -tolerance or q2 < -tolerance:
            logger.debug(f"k_{label} = {k!r} gives a complex Π, skipped")
            continue
        c0 = math.sqrt(max(q0, 0.0))
        c1 = math.copysign(math.sqrt(max(q2, 0.0)), q1)
        for root_sign in (1, -1):
            pi = (p0 + root_sign * c0, p1 + root_sign * c1)
            tau = (t0 + 2 * pi[0], t1 + 2 * pi[1])
            exponents = _endpoint_exponents(problem, pi)
            branches.append(
                BranchChoice(
                    k_label=label,
                    k=k,
                    root_sign=root_sign,
                    pi=pi,
                    tau=tau,
                    endpoint_exponents=exponents,
                    bounded=all(e >= -constants.BRANCH_EXPONENT_SLACK for e in exponents),
                )
            )
    return branches


def reduce(problem: NUProblem) -> NUReduction:
    """Select the branch with τ′ < 0, bounded φ at the σ-root endpoints, most negative τ′."""
    k_plus, k_minus = k_roots(problem)
    branches = enumerate_branches(problem)
    qualifying = [branch for branch in branches if branch.tau_slope < 0]
    if not qualifying:
        raise BranchSelectionException(
            {"branches": [(b.k_label, b.root_sign, b.tau_slope) for b in branches]}
        )
    pool = [branch for branch in qualifying if branch.bounded] or qualifying
    selected = min(pool, key=lambda branch: branch.tau_slope)
    if not selected.bounded:
        logger.debug(f"No bounded branch, using k_{selected.k_label}")
    return NUReduction(
        k_plus=k_plus,
        k_minus=k_minus,
        pi_branch=selected.pi,
        tau=selected.tau,
        lambda_of_k=selected.k + selected.pi[1],
        selected=selected,
        qualifying_branches=qualifying,
        sigma=problem.sigma,
        domain=problem.domain,
    )


def quantization_lambda(reduction: NUReduction, n: int) -> Tuple[float, float]:
    """(λ, λn); the level is quantized when they coincide."""
    return reduction.lambda_of_k, reduction.lambda_n(n)


def weight_function(reduction: NUReduction, strict: bool = False) -> WeightFunction:
    """ρ from (σρ)′ = τρ by partial fractions of (τ − σ′)/σ."""
    s0, s1, s2 = reduction.sigma
    m0 = reduction.tau[0] - s1
    m1 = reduction.tau[1] - 2 * s2
    linear_rate = 0.0
    if s2 != 0:
        disc = s1**2 - 4 * s0 * s2
        if disc <= 0:
            raise NoClosedFormException(disc, {"reason": "σ has no distinct real roots"})
        root = math.sqrt(disc)
        big = -(s1 + math.copysign(root, s1)) / 2
        r1, r2 = sorted((big / s2, s0 / big))
        roots = (r1, r2)
        exponents = (
            (m0 + m1 * r1) / (s2 * (r1 - r2)),
            (m0 + m1 * r2) / (s2 * (r2 - r1)),
        )
    elif s1 != 0:
        r = -s0 / s1
        roots = (r,)
        exponents = ((m0 + m1 * r) / s1,)
        linear_rate = m1 / s1
    else:
        raise NoClosedFormException(0.0, {"reason": "σ is constant"})

    integrable = True
    for r, exponent in zip(roots, exponents):
        if any(abs(r - end) <= 1e-12 for end in reduction.domain) and exponent <= -1:
            integrable = False
    if not integrable:
        logger.warning(f"Weight function exponents {exponents} are not integrable")
        if strict:
            raise IntegrabilityException(
                f"Weight function exponents {tuple(exponents)} are not integrable",
                {"roots": roots},
            )
    return WeightFunction(
        roots=roots, exponents=exponents, linear_rate=linear_rate, integrable=integrable
    )
