from typing import List, Optional

import numpy as np
from fastapi import APIRouter, Depends, Query

from .. import schemas
from ..analytic import make_wavefunction, spectrum, synthetic_level, wavefunction
from ..config import Settings
from ..dependencies import get_current_settings, get_registry, get_units
from ..potential import evaluate_potential
from ..registry import get_molecule

router = APIRouter(
    tags=["Spectrum"],
    responses={404: {"description": "Not found"}, 422: {"description": "No valid level"}},
)


def _config(
    molecule: str,
    alpha: Optional[float],
    beta_variant: Optional[schemas.BetaVariant],
    registry: List[schemas.MoleculeParams],
    current: Settings,
) -> schemas.PotentialConfig:
    return schemas.PotentialConfig(
        molecule=get_molecule(molecule, registry),
        alpha=alpha or current.default_alpha,
        beta_variant=beta_variant or current.default_beta_variant,
    )


@router.get("/potential", response_model=schemas.PotentialSample)
async def read_potential(
    molecule: str,
    t: float = Query(..., description="Time, ns"),
    alpha: Optional[float] = Query(None, gt=0, description="α, 1/ns"),
    registry: List[schemas.MoleculeParams] = Depends(get_registry),
    current: Settings = Depends(get_current_settings),
):
    """
    V(t) in eV.
    """
    config = _config(molecule, alpha, None, registry, current)
    return schemas.PotentialSample(
        molecule=config.molecule.name, alpha=config.alpha, t=t, V=evaluate_potential(config, t)
    )


@router.get("/spectrum", response_model=schemas.SpectrumResult)
def read_spectrum(
    molecule: str,
    alpha: Optional[float] = Query(None, gt=0),
    levels: int = Query(4, ge=1, le=200),
    variant: Optional[schemas.EigenvalueVariant] = None,
    beta_variant: Optional[schemas.BetaVariant] = None,
    registry: List[schemas.MoleculeParams] = Depends(get_registry),
    units: schemas.UnitSystem = Depends(get_units),
    current: Settings = Depends(get_current_settings),
):
    """
    Admitted levels of one eigenvalue variant; excluded n are listed separately.
    """
    config = _config(molecule, alpha, beta_variant, registry, current)
    return spectrum(
        config, levels, variant or current.default_variant, units, current.momentum_sign
    )


@router.get("/spectrum/wavefunction", response_model=schemas.WavefunctionSamples)
def read_wavefunction(
    zeta1: float = Query(..., ge=0),
    R: float = Query(..., gt=0),
    n: int = Query(0, ge=0),
    points: int = Query(11, ge=2, le=10000),
    current: Settings = Depends(get_current_settings),
):
    """
    Normalized ψn(s) on interior points of (0, 1) for a quantized synthetic level.
    """
    level = synthetic_level(n, zeta1, R)
    spec = make_wavefunction(level, R, current.quadrature_order)
    s = np.linspace(0, 1, points + 2)[1:-1]
    psi = wavefunction(spec, level, s)
    return schemas.WavefunctionSamples(spec=spec, s=s.tolist(), psi=psi.tolist())
