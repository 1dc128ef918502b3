"""
Fock-basis primitives: model parameters, field coefficient vectors and the
three-component atom-field state of a single passage.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import gammaln
from scipy.stats import poisson

from config import settings
from cavity.errors import InvalidParametersError, TruncationError
from cavity.nonlinearity import INonlinearity, NonlinearityFactory

logger = logging.getLogger("cavity.fock")


def _readonly_complex(value) -> np.ndarray:
    arr = np.array(value, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("esperado um vetor de amplitudes unidimensional e não vazio")
    if not np.all(np.isfinite(arr)):
        raise ValueError("as amplitudes precisam ser finitas")
    arr.flags.writeable = False
    return arr


class ModelParams(BaseModel):
    """Acoplamentos, dessintonias, não linearidade e truncamento de Fock de uma execução"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lambda1: float = Field(gt=0, allow_inf_nan=False)
    lambda2: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    delta1: float = Field(default=0.0, allow_inf_nan=False)
    delta2: float = Field(default=0.0, allow_inf_nan=False)
    nonlinearity: INonlinearity
    n_max: int = Field(ge=1)

    @field_validator("nonlinearity", mode="before")
    @classmethod
    def _resolve_nonlinearity(cls, value):
        if isinstance(value, str):
            return NonlinearityFactory.get(value)
        return value


class FieldCoeffs(BaseModel):
    """Amplitudes de Fock normalizadas c_0..c_N de um estado puro do campo"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeffs: np.ndarray

    @field_validator("coeffs", mode="before")
    @classmethod
    def _to_array(cls, value):
        return _readonly_complex(value)

    @field_validator("coeffs")
    @classmethod
    def _check_normalized(cls, value: np.ndarray) -> np.ndarray:
        total = float(np.sum(np.abs(value) ** 2))
        if abs(total - 1.0) > settings.normalization_tol:
            raise ValueError(f"coeficientes do campo não normalizados (soma |c_n|^2 = {total!r})")
        return value

    @classmethod
    def from_vector(cls, vector, normalize: bool = True) -> "FieldCoeffs":
        arr = np.array(vector, dtype=complex)
        if normalize:
            norm = math.sqrt(float(np.sum(np.abs(arr) ** 2)))
            if norm == 0.0:
                raise InvalidParametersError("não é possível normalizar um vetor de campo nulo", code="zero_field")
            arr = arr / norm
        return cls(coeffs=arr)

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    def probabilities(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2

    def mean_photon_number(self) -> float:
        return float(np.dot(np.arange(len(self.coeffs)), self.probabilities()))


class PassageState(BaseModel):
    """
    Estado átomo-campo durante uma passagem, no tempo tau.

    a[n], b[n] e c[n] são as amplitudes de |e,n>, |i,n> e |g,n+1> para
    n = 0..n_max.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    tau: float = 0.0

    @field_validator("a", "b", "c", mode="before")
    @classmethod
    def _to_array(cls, value):
        return _readonly_complex(value)

    @model_validator(mode="after")
    def _check_shapes(self) -> "PassageState":
        if not (len(self.a) == len(self.b) == len(self.c)):
            raise ValueError("os vetores de amplitude A, B e C precisam ter o mesmo tamanho")
        return self

    @property
    def n_max(self) -> int:
        return len(self.a) - 1

    def level_norms(self) -> np.ndarray:
        return (
            (self.a * self.a.conj()).real
            + (self.b * self.b.conj()).real
            + (self.c * self.c.conj()).real
        )

    def norm(self) -> float:
        return float(np.sum(self.level_norms()))

    def field_vectors(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Estados de campo não normalizados associados a |e>, |i> e |g> (tamanho n_max + 2)"""
        size = len(self.a) + 1
        psi_e = np.zeros(size, dtype=complex)
        psi_i = np.zeros(size, dtype=complex)
        psi_g = np.zeros(size, dtype=complex)
        psi_e[:-1] = self.a
        psi_i[:-1] = self.b
        psi_g[1:] = self.c
        return psi_e, psi_i, psi_g


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """Amplitudes coerentes F_n = e^{-|a|^2/2} a^n / sqrt(n!), calculadas em espaço log"""
    alpha = complex(alpha)
    n = np.arange(n_max + 1)
    r = abs(alpha)
    if r == 0.0:
        out = np.zeros(n_max + 1, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag) * np.exp(1j * n * math.atan2(alpha.imag, alpha.real))


def poisson_tail(nbar: float, n_max: int) -> float:
    """Massa de Poisson acima de n_max"""
    if nbar == 0.0:
        return 0.0
    return float(poisson.sf(n_max, nbar))


def coherent_coeffs(alpha: complex, n_max: int, tail_tol: Optional[float] = None) -> FieldCoeffs:
    """
    Estado coerente truncado em n_max e renormalizado.

    Levanta TruncationError quando a cauda de Poisson descartada atinge tail_tol.
    """
    tol = settings.tail_tol if tail_tol is None else tail_tol
    nbar = abs(complex(alpha)) ** 2
    tail = poisson_tail(nbar, n_max)
    if tail >= tol:
        raise TruncationError(
            f"cauda de Poisson {tail:.3e} acima de n_max={n_max} excede tail_tol={tol:.1e} para |alpha|^2={nbar}",
            code="tail_mass",
        )
    return FieldCoeffs.from_vector(coherent_amplitudes(alpha, n_max), normalize=True)


def fock_state(n: int, n_max: int) -> FieldCoeffs:
    if not 0 <= n <= n_max:
        raise InvalidParametersError(f"nível de Fock {n} fora de 0..{n_max}", code="fock_level")
    vec = np.zeros(n_max + 1, dtype=complex)
    vec[n] = 1.0
    return FieldCoeffs(coeffs=vec)


def choose_truncation(nbar: float, tail_tol: Optional[float] = None, iterative: bool = True) -> int:
    """
    Menor n_max (>= 1) cuja cauda de Poisson acima de n_max fica abaixo de tail_tol.

    Com iterative=False retorna a heurística ceil(nbar + 10 sqrt(nbar) + 10).
    """
    if not math.isfinite(nbar) or nbar < 0:
        raise InvalidParametersError(f"número médio de fótons precisa ser finito e >= 0, recebido {nbar}", code="nbar")
    tol = settings.tail_tol if tail_tol is None else tail_tol
    if not 0.0 < tol < 1.0:
        raise InvalidParametersError(f"tail_tol precisa estar em (0, 1), recebido {tol}", code="tail_tol")

    heuristic = max(1, math.ceil(nbar + 10.0 * math.sqrt(nbar) + 10.0))
    if not iterative:
        return heuristic
    if nbar == 0.0:
        return 1

    upper = heuristic
    while True:
        ns = np.arange(1, upper + 1)
        tails = poisson.sf(ns, nbar)
        below = np.nonzero(tails < tol)[0]
        if below.size:
            n_max = int(ns[below[0]])
            logger.debug("Truncation for nbar=%s, tail_tol=%s: n_max=%d", nbar, tol, n_max)
            return n_max
        upper *= 2
