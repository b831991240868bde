"""
Централизованное управление конфигурацией с использованием Pydantic settings.
"""

from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from . import constants
from .schemas import BetaVariant, EigenvalueVariant, UnitSystem


class Settings(BaseSettings):
    """Настройки расчёта, отчётов и API"""

    # Физические постоянные
    hbar_ev_ns: float = constants.HBAR_EV_NS
    amu_to_ev_per_c2: float = constants.AMU_TO_EV_PER_C2

    # Значения по умолчанию для расчёта
    default_alpha: float = 0.5
    default_beta_variant: BetaVariant = BetaVariant.DIMENSION_CORRECTED
    default_variant: EigenvalueVariant = EigenvalueVariant.QUANTIZATION_ROOT
    momentum_sign: int = -1  # ориентация Pn = sign·cPn/c
    quadrature_order: int = constants.DEFAULT_QUADRATURE_ORDER

    # Реестр и вывод
    registry_path: Optional[Path] = None  # None - встроенный реестр
    output_dir: Path = Path("out")

    # Сеточный оракул
    oracle_min_points: int = 2000
    oracle_max_points: int = 20000
    oracle_points_per_length: float = 150.0  # точек на осцилляторную длину
    oracle_wall_quanta: float = 30.0  # запас стенки в квантах ħω
    agreement_threshold: float = 0.01

    # Отчёты
    csv_significant_digits: int = 12

    # Окружение
    env: str = "dev"
    log_level: str = "INFO"

    # API настройки
    api_title: str = "Feinberg-Horodecki IDEP spectrum"
    api_version: str = "1.0.0"
    api_description: str = "Импульсный спектр уравнения Фейнберга-Городецкого для IDEP"

    model_config = SettingsConfigDict(
        env_prefix="FH_", env_file=".env", case_sensitive=False, extra="ignore"
    )

    @field_validator("hbar_ev_ns", "amu_to_ev_per_c2", "default_alpha")
    @classmethod
    def must_be_positive(cls, v):
        if v <= 0:
            raise ValueError("Значение должно быть положительным")
        return v

    @field_validator("oracle_min_points", "oracle_max_points")
    @classmethod
    def grid_must_be_resolvable(cls, v):
        if v < constants.MIN_GRID_POINTS:
            raise ValueError(
                f"Сетка должна содержать минимум {constants.MIN_GRID_POINTS} точек"
            )
        return v

    @field_validator("momentum_sign")
    @classmethod
    def sign_is_unit(cls, v):
        if v not in (-1, 1):
            raise ValueError("Знак импульса должен быть −1 или 1")
        return v

    @field_validator("agreement_threshold")
    @classmethod
    def threshold_in_unit_interval(cls, v):
        if not 0 < v < 1:
            raise ValueError("Порог согласия должен лежать в (0, 1)")
        return v

    @field_validator("csv_significant_digits")
    @classmethod
    def digits_in_range(cls, v):
        if not 1 <= v <= 17:
            raise ValueError("Число значащих цифр должно быть от 1 до 17")
        return v

    @field_validator("log_level")
    @classmethod
    def log_level_upper(cls, v):
        return v.upper()


@lru_cache()
def get_settings() -> Settings:
    """Получить кэшированный экземпляр настроек"""
    return Settings()


def load_settings(config_file: Optional[Path] = None) -> Settings:
    """Настройки из явного env-файла (--config) или кэшированные"""
    if config_file is None:
        return get_settings()
    return Settings(_env_file=config_file)


def get_unit_system(current: Optional[Settings] = None) -> UnitSystem:
    """Система единиц из настроек"""
    current = current or get_settings()
    return UnitSystem(
        hbar_eV_ns=current.hbar_ev_ns, amu_to_eV_per_c2=current.amu_to_ev_per_c2
    )


# Глобальный экземпляр настроек
settings = get_settings()
