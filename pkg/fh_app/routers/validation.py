from typing import List

from fastapi import APIRouter, Depends

from .. import schemas
from ..config import Settings
from ..dependencies import get_current_settings, get_registry, get_units
from ..reports import run_validation

router = APIRouter(
    prefix="/validation",
    tags=["Validation"],
)


@router.post("/", response_model=schemas.ValidationReport)
def create_validation_report(
    request: schemas.ValidationRequest,
    registry: List[schemas.MoleculeParams] = Depends(get_registry),
    units: schemas.UnitSystem = Depends(get_units),
    current: Settings = Depends(get_current_settings),
):
    """
    Every eigenvalue variant against the grid oracle.
    - Rows failing the agreement threshold are flagged, not rejected.
    """
    return run_validation(
        request.molecules,
        registry,
        alpha=request.alpha,
        levels=request.levels,
        num_points=request.num_points,
        units=units,
        current=current,
    )
