"""Unit conversions for the time-domain problem: t in ns, energies in eV, c = 1."""

import logging
import math
from typing import Optional

from . import constants
from .error_handlers import InvalidParameterException
from .schemas import UnitSystem

logger = logging.getLogger(__name__)

CODATA_UNITS = UnitSystem(
    hbar_eV_ns=constants.HBAR_EV_NS, amu_to_eV_per_c2=constants.AMU_TO_EV_PER_C2
)


def mass_energy(mu_amu: float, units: Optional[UnitSystem] = None) -> float:
    """mc² in eV for a reduced mass in a.m.u."""
    if not (mu_amu > 0 and math.isfinite(mu_amu)):
        raise InvalidParameterException("mu", mu_amu, "reduced mass must be positive")
    units = units or CODATA_UNITS
    return mu_amu * units.amu_to_eV_per_c2


def kinetic_coefficient(mu_amu: float, units: Optional[UnitSystem] = None) -> float:
    """ħ²/(2mc²) in eV·ns², the prefactor of −d²/dt²."""
    units = units or CODATA_UNITS
    return units.hbar_eV_ns**2 / (2 * mass_energy(mu_amu, units))


def to_momentum(cPn: float, sign: int = -1) -> float:
    """Pn in eV/c from cPn in eV; sign fixes the reported orientation."""
    return sign * cPn
