"""
Scenario configuration: flat `key = value` files, command-line overrides
and run manifests, validated into ScenarioConfig.
"""

import json
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config import Settings, settings
from cavity.errors import ConfigError
from cavity.fock import ModelParams, choose_truncation
from cavity.nonlinearity import NonlinearityFactory

logger = logging.getLogger("cavity.scenario")

OBSERVABLES = ("inversion", "entropy", "squeezing1", "squeezing2", "mandel", "wigner")
SWEEP_AXES = ("delta1", "delta2", "lambda1", "alpha_sq", "tau1")


class ScenarioConfig(BaseModel):
    """Entradas de uma execução de dois átomos, em unidades escaladas (lambda2 = 1)"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    lambda1: float = Field(default=0.9, gt=0, allow_inf_nan=False)
    lambda2: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    delta1: float = Field(default=0.0, allow_inf_nan=False)
    delta2: float = Field(default=0.0, allow_inf_nan=False)
    nonlinearity: str = "one"
    alpha_sq: float = Field(ge=0, allow_inf_nan=False)
    tau1: float = Field(ge=0, allow_inf_nan=False)
    tau2_max: float = Field(allow_inf_nan=False)
    tau2_step: float = Field(gt=0, allow_inf_nan=False)
    observables: Tuple[str, ...] = ("inversion",)
    wigner_halfwidth: float = Field(default=6.0, gt=0)
    wigner_resolution: int = Field(default=201, ge=3)
    wigner_tau2: Optional[float] = Field(default=None, ge=0)
    out_dir: str = "out"
    tail_tol: float = Field(default_factory=lambda: settings.tail_tol, gt=0, lt=1)
    n_max: Optional[int] = Field(default=None, ge=1)
    tau1_scan_max: float = Field(default=10.0, gt=0)
    tau1_scan_step: float = Field(default=0.005, gt=0)

    @field_validator("nonlinearity")
    @classmethod
    def _known_nonlinearity(cls, value: str) -> str:
        if not NonlinearityFactory.is_supported(value):
            supported = ", ".join(NonlinearityFactory.get_supported())
            raise ValueError(f"não linearidade '{value}' não suportada (disponíveis: {supported})")
        return NonlinearityFactory.get(value).name

    @field_validator("observables", mode="before")
    @classmethod
    def _split_observables(cls, value):
        if isinstance(value, str):
            value = [item for item in (part.strip().lower() for part in value.split(",")) if item]
        items = tuple(value)
        unknown = sorted(set(items) - set(OBSERVABLES))
        if unknown:
            raise ValueError(f"observáveis desconhecidos {unknown} (disponíveis: {', '.join(OBSERVABLES)})")
        # canonical order, no duplicates
        return tuple(name for name in OBSERVABLES if name in items)

    @model_validator(mode="after")
    def _check_grid(self) -> "ScenarioConfig":
        if self.tau2_max < self.tau2_step:
            raise ValueError(f"tau2_max ({self.tau2_max}) precisa ser >= tau2_step ({self.tau2_step})")
        if self.wigner_tau2 is not None and self.wigner_tau2 > self.tau2_max:
            raise ValueError("wigner_tau2 precisa estar em [0, tau2_max]")
        return self

    @property
    def alpha(self) -> complex:
        return complex(math.sqrt(self.alpha_sq))

    def truncation(self) -> int:
        if self.n_max is not None:
            return self.n_max
        return choose_truncation(self.alpha_sq, self.tail_tol)

    def model_params(self) -> ModelParams:
        return ModelParams(
            lambda1=self.lambda1,
            lambda2=self.lambda2,
            delta1=self.delta1,
            delta2=self.delta2,
            nonlinearity=self.nonlinearity,
            n_max=self.truncation(),
        )

    def tau2_grid(self) -> np.ndarray:
        """tau2 = k * tau2_step para k = 0 .. floor(tau2_max / tau2_step)"""
        count = int(math.floor(self.tau2_max / self.tau2_step + 1e-9))
        return np.arange(count + 1) * self.tau2_step

    def tau1_scan_grid(self) -> np.ndarray:
        count = int(math.floor(self.tau1_scan_max / self.tau1_scan_step + 1e-9))
        return np.arange(count + 1) * self.tau1_scan_step

    def with_value(self, key: str, value) -> "ScenarioConfig":
        """Cópia validada com uma chave substituída"""
        return build_config({**self.model_dump(), key: value})


def build_config(values: Dict) -> ScenarioConfig:
    try:
        return ScenarioConfig.model_validate(values)
    except ValidationError as exc:
        raise ConfigError(f"configuração de cenário inválida:\n{exc}", code="validation") from exc


def parse_overrides(items: Iterable[str]) -> Dict[str, str]:
    overrides = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"override '{item}' não está no formato chave=valor", code="override")
        overrides[key.strip()] = value.strip()
    return overrides


def _read_manifest(path: Path) -> Tuple[Dict, Dict]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"não foi possível ler o manifesto {path}: {exc}", code="manifest") from exc
    if "config" not in data:
        raise ConfigError(f"manifesto {path} sem a seção 'config'", code="manifest")
    return dict(data["config"]), dict(data.get("tolerances", {}))


def load_scenario(path, overrides: Optional[Dict[str, str]] = None) -> ScenarioConfig:
    """
    Lê um cenário `chave = valor` (ou um manifesto JSON de execução) e aplica
    os overrides.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"arquivo de cenário não encontrado: {path}", code="missing_file")
    if path.suffix.lower() == ".json":
        values, _ = _read_manifest(path)
    else:
        values = {key: value for key, value in dotenv_values(path).items() if value not in (None, "")}
    values.update(overrides or {})
    config = build_config(values)
    logger.info("Loaded scenario %s", path)
    return config


def load_engine_settings(path) -> Settings:
    """Tolerâncias gravadas num manifesto, ou as settings do processo para cenários simples"""
    path = Path(path)
    if path.suffix.lower() != ".json":
        return settings
    _, tolerances = _read_manifest(path)
    if not tolerances:
        return settings
    return Settings(**tolerances)
