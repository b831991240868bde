"""Общие зависимости роутеров"""

from typing import List

from fastapi import Depends

from .config import Settings, get_settings, get_unit_system
from .registry import resolve_registry
from .schemas import MoleculeParams, UnitSystem


def get_current_settings() -> Settings:
    """Настройки приложения"""
    return get_settings()


def get_units(current: Settings = Depends(get_current_settings)) -> UnitSystem:
    return get_unit_system(current)


def get_registry(current: Settings = Depends(get_current_settings)) -> List[MoleculeParams]:
    """Реестр молекул: файл из настроек или встроенный"""
    return resolve_registry(current.registry_path)
