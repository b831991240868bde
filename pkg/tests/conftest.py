import pytest

from fh_app.config import Settings
from fh_app.potential import derive_coefficients
from fh_app.registry import default_registry, get_molecule
from fh_app.schemas import MoleculeParams, PotentialConfig, UnitSystem
from fh_app.units import CODATA_UNITS


# --- Units & settings ---
@pytest.fixture
def units():
    return CODATA_UNITS


@pytest.fixture
def current():
    # .env рабочей директории не должен влиять на тесты
    return Settings(_env_file=None)


@pytest.fixture
def toy_units():
    # ħ = 0.1 эВ·нс, 1 а.е.м. = 1 эВ: все коэффициенты порядка единицы
    return UnitSystem(hbar_eV_ns=0.1, amu_to_eV_per_c2=1.0)


# --- Molecules ---
@pytest.fixture
def registry():
    return default_registry()


@pytest.fixture
def h2_config(registry):
    return PotentialConfig(molecule=get_molecule("H2", registry), alpha=0.5)


@pytest.fixture
def lih_config(registry):
    return PotentialConfig(molecule=get_molecule("LiH", registry), alpha=0.5)


@pytest.fixture
def toy_molecule():
    return MoleculeParams(name="toy", De=1.0, te=1.0, mu=1.0, t0=1.0, q=-0.5)


@pytest.fixture
def toy_config(toy_molecule):
    return PotentialConfig(molecule=toy_molecule, alpha=1.0)


@pytest.fixture
def toy_coeffs(toy_config, toy_units):
    return derive_coefficients(toy_config, toy_units)
