from __future__ import annotations
from typing import Optional, List, Dict, Tuple
from pathlib import Path
import enum
import math

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


# ------------- Enums -------------
class BetaVariant(str, enum.Enum):
    AS_PRINTED = "AsPrinted"  # β = −2ħα²/mc², размерность не сходится
    DIMENSION_CORRECTED = "DimensionCorrected"  # β = −2ħ²α²/mc²


class EigenvalueVariant(str, enum.Enum):
    AS_PRINTED_EQ22 = "AsPrintedEq22"
    BETA_TIMES_A = "BetaTimesA"
    QUANTIZATION_ROOT = "QuantizationRoot"


class SpectralDomain(str, enum.Enum):
    UNIT_INTERVAL = "UnitInterval"  # q > 0: s = e^{2α(t−t0)}/q ∈ (0, 1)
    HALF_LINE = "HalfLine"  # q < 0: s < 0, через z = s/(s − 1) ∈ (0, 1)


class ScanKind(str, enum.Enum):
    POTENTIAL_VS_TIME = "PotentialVsTime"
    PN_VS_Q = "PnVsQ"
    PN_VS_ALPHA = "PnVsAlpha"
    PN_VS_N = "PnVsN"


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True)


# ------------- Units & molecules -------------
class UnitSystem(FrozenModel):
    hbar_eV_ns: float = Field(gt=0)
    amu_to_eV_per_c2: float = Field(gt=0)


class MoleculeParams(FrozenModel):
    name: str = Field(min_length=1)
    De: float = Field(gt=0, description="Dissociation energy, eV")
    te: float = Field(gt=0, description="Equilibrium time, ns")
    mu: float = Field(gt=0, description="Reduced mass, a.m.u.")
    t0: float = Field(gt=0, description="Time shift, ns")
    q: float = Field(description="Deformation parameter")

    @field_validator("q")
    @classmethod
    def q_must_be_nonzero(cls, v):
        if v == 0 or not math.isfinite(v):
            raise ValueError("q must be finite and non-zero")
        return v


class PotentialConfig(FrozenModel):
    molecule: MoleculeParams
    alpha: float = Field(gt=0, description="Range parameter, 1/ns")
    beta_variant: BetaVariant = BetaVariant.DIMENSION_CORRECTED


class DerivedCoefficients(FrozenModel):
    beta: float
    L: float
    A: float
    C: float
    R_inv_minus_half: float
    R: float
    beta_variant: BetaVariant
    domain: SpectralDomain


class LevelCoefficients(FrozenModel):
    n: int = Field(ge=0)
    M: float
    zeta1: float = Field(ge=0)
    zeta2: float
    zeta3: float


# ------------- Nikiforov-Uvarov -------------
class NUProblem(FrozenModel):
    """ψ'' + (τ̃/σ)ψ' + (σ̃/σ²)ψ = 0, coefficients constant-first."""

    tilde_tau: Tuple[float, float]
    sigma: Tuple[float, float, float]
    tilde_sigma: Tuple[float, float, float]
    domain: Tuple[float, float] = (0.0, 1.0)
    variable: str = "s"

    @property
    def tilde_tau_poly(self) -> Polynomial:
        return Polynomial(self.tilde_tau)

    @property
    def sigma_poly(self) -> Polynomial:
        return Polynomial(self.sigma)

    @property
    def tilde_sigma_poly(self) -> Polynomial:
        return Polynomial(self.tilde_sigma)

    def scale(self) -> float:
        values = self.tilde_tau + self.sigma + self.tilde_sigma
        return max(1.0, max(abs(v) for v in values))


class BranchChoice(FrozenModel):
    k_label: str  # "plus" | "minus"
    k: float
    root_sign: int
    pi: Tuple[float, float]
    tau: Tuple[float, float]
    endpoint_exponents: Tuple[float, ...] = ()
    bounded: bool = True

    @property
    def tau_slope(self) -> float:
        return self.tau[1]


class NUReduction(FrozenModel):
    k_plus: float
    k_minus: float
    pi_branch: Tuple[float, float]
    tau: Tuple[float, float]
    lambda_of_k: float
    selected: BranchChoice
    qualifying_branches: List[BranchChoice]
    sigma: Tuple[float, float, float]
    domain: Tuple[float, float] = (0.0, 1.0)

    def lambda_n(self, n: int) -> float:
        """λn = −n·τ′ − n(n−1)/2·σ″"""
        return -n * self.tau[1] - n * (n - 1) * self.sigma[2]


class WeightFunction(FrozenModel):
    roots: Tuple[float, ...]
    exponents: Tuple[float, ...]
    linear_rate: float = 0.0
    integrable: bool = True

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        value = np.exp(self.linear_rate * s)
        for root, exponent in zip(self.roots, self.exponents):
            value = value * np.abs(s - root) ** exponent
        return value


# ------------- Analytic spectrum -------------
class SpectrumLevel(FrozenModel):
    n: int = Field(ge=0)
    cPn: float  # эВ
    Pn: float  # эВ/c


class SpectrumResult(FrozenModel):
    config: PotentialConfig
    formula_variant: EigenvalueVariant
    levels: List[SpectrumLevel]
    realness_cutoff: Optional[int] = None
    excluded: List[int] = []


class WavefunctionSpec(FrozenModel):
    n: int = Field(ge=0)
    zeta1: float = Field(ge=0)
    R: float = Field(gt=0)
    normalization: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    domain: Tuple[float, float] = (0.0, 1.0)

    @property
    def jacobi_parameters(self) -> Tuple[float, float]:
        return 2 * self.zeta1, 2 / self.R - 1


# ------------- Grid oracle -------------
class GridSpec(FrozenModel):
    t_min: float
    t_max: float
    num_points: int = Field(ge=64)
    boundary: str = "Dirichlet"

    @model_validator(mode="after")
    def check_interval(self) -> "GridSpec":
        if not self.t_min < self.t_max:
            raise ValueError("t_min must be smaller than t_max")
        if self.boundary != "Dirichlet":
            raise ValueError("only Dirichlet boundaries are supported")
        return self

    @property
    def h(self) -> float:
        return (self.t_max - self.t_min) / (self.num_points - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.num_points)


class GridSolution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: GridSpec
    eigenvalues: List[float]
    eigenvectors: np.ndarray  # (count, num_points), Dirichlet-нули по краям
    convergence: List[Optional[float]]
    operator_scale: float
    bisection_steps: List[int] = []
    inverse_iteration_steps: List[int] = []


# ------------- Reports -------------
class SweepRange(FrozenModel):
    start: float
    stop: float
    steps: int = Field(ge=2)

    @model_validator(mode="after")
    def check_order(self) -> "SweepRange":
        if not self.start < self.stop:
            raise ValueError("sweep start must be smaller than stop")
        return self

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


class ScanRequest(FrozenModel):
    kind: ScanKind
    molecules: List[str] = Field(min_length=1)
    sweep: SweepRange
    fixed: Dict[str, float] = {}
    levels: List[int] = [0]
    variants: List[EigenvalueVariant] = [EigenvalueVariant.QUANTIZATION_ROOT]
    output_stem: str = "scan"

    @field_validator("levels")
    @classmethod
    def levels_non_negative(cls, v):
        if any(n < 0 for n in v):
            raise ValueError("levels must be non-negative")
        return v


class ScanRow(FrozenModel):
    sweep_var: float
    molecule: str
    n: Optional[int]
    variant: str
    value: Optional[float]  # None - уровень исключён


class ScanResult(FrozenModel):
    request: ScanRequest
    rows: List[ScanRow]
    csv_path: Optional[Path] = None
    svg_path: Optional[Path] = None


class LedgerEntry(FrozenModel):
    key: str
    location: str
    printed: str
    implemented: str
    note: str = ""


class ValidationRow(FrozenModel):
    molecule: str
    n: int
    beta_variant: BetaVariant
    values: Dict[str, Optional[float]]
    closed_form: Optional[float]
    oracle: float
    oracle_error_estimate: Optional[float]
    deviations: Dict[str, Optional[float]]
    agrees: Dict[str, bool]
    grid: GridSpec


class ValidationRequest(BaseModel):
    molecules: Optional[List[str]] = None
    alpha: Optional[float] = Field(default=None, gt=0)
    levels: int = Field(default=4, ge=1)
    num_points: Optional[int] = Field(default=None, ge=64)


class ValidationReport(FrozenModel):
    rows: List[ValidationRow]
    ledger: List[LedgerEntry]
    box_self_test_deviation: float
    threshold: float
    csv_path: Optional[Path] = None
    ledger_path: Optional[Path] = None


# ------------- API -------------
class PotentialSample(FrozenModel):
    molecule: str
    alpha: float
    t: float
    V: float  # эВ


class WavefunctionSamples(FrozenModel):
    spec: WavefunctionSpec
    s: List[float]
    psi: List[float]
