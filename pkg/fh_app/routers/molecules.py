from typing import List

from fastapi import APIRouter, Depends

from .. import schemas
from ..dependencies import get_registry
from ..registry import get_molecule

router = APIRouter(
    prefix="/molecules",
    tags=["Molecules"],
    responses={404: {"description": "Not found"}},
)


@router.get("/", response_model=List[schemas.MoleculeParams])
async def read_molecules(registry: List[schemas.MoleculeParams] = Depends(get_registry)):
    """
    Registry rows in file order.
    """
    return registry


@router.get("/{name}", response_model=schemas.MoleculeParams)
async def read_molecule(
    name: str, registry: List[schemas.MoleculeParams] = Depends(get_registry)
):
    return get_molecule(name, registry)
