"""Molecule registry: name,De,te,mu,t0,q rows, '#' comments, blank lines skipped."""

import csv
import io
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import ValidationError

from . import constants
from .error_handlers import (
    InvalidParameterException,
    RegistryLookupException,
    RegistryParseException,
)
from .schemas import MoleculeParams

logger = logging.getLogger(__name__)

FIELDS = ("name", "De", "te", "mu", "t0", "q")


def load_molecule_registry(source: str) -> List[MoleculeParams]:
    """Parse registry text into MoleculeParams in file order."""
    molecules: List[MoleculeParams] = []
    seen = set()
    reader = csv.reader(io.StringIO(source))
    for line_no, row in enumerate(reader, start=1):
        cells = [cell.strip() for cell in row]
        if not cells or not any(cells) or cells[0].startswith("#"):
            continue
        if cells[0].lower() == "name":
            continue  # заголовок
        row_id = f"{line_no} ({cells[0]})"
        if len(cells) != len(FIELDS):
            raise RegistryParseException(
                row_id, f"expected {len(FIELDS)} fields, got {len(cells)}"
            )
        try:
            values = [float(cell) for cell in cells[1:]]
        except ValueError as exc:
            raise RegistryParseException(row_id, f"non-numeric field: {exc}")
        try:
            molecule = MoleculeParams(**dict(zip(FIELDS, [cells[0], *values])))
        except ValidationError as exc:
            first = exc.errors()[0]
            field = str(first["loc"][0]) if first["loc"] else "row"
            raise InvalidParameterException(
                field,
                dict(zip(FIELDS, cells)).get(field),
                f"row {row_id}: {first['msg']}",
            )
        if molecule.name in seen:
            raise RegistryParseException(row_id, f"duplicate molecule '{molecule.name}'")
        seen.add(molecule.name)
        molecules.append(molecule)
    logger.debug(f"Loaded {len(molecules)} registry rows")
    return molecules


def load_registry_file(path: Union[str, Path]) -> List[MoleculeParams]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise RegistryParseException(str(path), f"cannot read file: {exc}")
    return load_molecule_registry(text)


def default_registry() -> List[MoleculeParams]:
    """CO, N2, H2, LiH"""
    return load_molecule_registry(constants.DEFAULT_REGISTRY)


def resolve_registry(path: Optional[Path] = None) -> List[MoleculeParams]:
    return load_registry_file(path) if path else default_registry()


def as_mapping(registry: List[MoleculeParams]) -> Dict[str, MoleculeParams]:
    return {molecule.name: molecule for molecule in registry}


def get_molecule(name: str, registry: List[MoleculeParams]) -> MoleculeParams:
    mapping = as_mapping(registry)
    if name not in mapping:
        # имена сравниваются без учёта регистра только как запасной вариант
        lowered = {key.lower(): value for key, value in mapping.items()}
        if name.lower() in lowered:
            return lowered[name.lower()]
        raise RegistryLookupException(name, {"available": sorted(mapping)})
    return mapping[name]
