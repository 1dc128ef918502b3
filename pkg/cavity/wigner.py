"""
Wigner function of the cavity field reduced state.

W(alpha) = (2/pi) Tr[rho D(alpha) P D(alpha)^dagger], with P the photon
parity. Matrix elements of the displaced parity reduce to associated
Laguerre polynomials; they are generated by a three-term recurrence on
normalized terms t_n^(k) = sqrt(n!/(n+k)!) (2r)^k e^{-2r^2} L_n^k(4r^2),
which stay bounded by 1 and never form factorials or large powers.

W is centered at <a>: a coherent state |beta> peaks at alpha = beta.
"""

import logging
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import gammaln

from config import settings
from cavity.fock import PassageState

logger = logging.getLogger("cavity.wigner")


class WignerGridSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    halfwidth: float = Field(gt=0)
    resolution: int = Field(ge=3)
    center: complex = 0j


class WignerGrid(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray  # values[i, j] = W(re_axis[i] + 1j * im_axis[j])
    cell_area: float
    coverage_ok: bool = True

    def integral(self) -> float:
        return float(np.sum(self.values) * self.cell_area)

    @property
    def minimum(self) -> float:
        return float(self.values.min())

    @property
    def maximum(self) -> float:
        return float(self.values.max())


def field_density_matrix(state: PassageState) -> np.ndarray:
    """Matriz densidade reduzida do campo rho[n, m] = sum_x psi_x[n] psi_x[m]^*"""
    vectors = np.vstack(state.field_vectors())
    return vectors.T @ vectors.conj()


def wigner_from_density(rho: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Função de Wigner de uma matriz densidade do campo num array de pontos complexos"""
    alpha = np.asarray(alpha, dtype=complex)
    r2 = (alpha * alpha.conj()).real
    x = 4.0 * r2
    unit = np.where(r2 > 0, alpha / np.sqrt(np.where(r2 > 0, r2, 1.0)), 1.0)
    with np.errstate(divide="ignore"):
        log_two_r = np.log(2.0 * np.sqrt(r2))

    size = rho.shape[0]
    sign = np.where(np.arange(size) % 2 == 0, 1.0, -1.0)
    total = np.zeros(alpha.shape)
    for k in range(size):
        diag = np.diagonal(rho, offset=k) * sign[: size - k]
        if not np.any(diag):
            continue
        if k == 0:
            t_curr = np.exp(-2.0 * r2)
        else:
            t_curr = np.exp(k * log_two_r - 2.0 * r2 - 0.5 * gammaln(k + 1))
        t_prev = np.zeros_like(t_curr)
        acc = diag[0] * t_curr
        for n in range(size - k - 1):
            t_next = ((2 * n + 1 + k - x) * t_curr - math.sqrt(n * (n + k)) * t_prev) / math.sqrt(
                (n + 1) * (n + k + 1)
            )
            t_prev, t_curr = t_curr, t_next
            acc = acc + diag[n + 1] * t_curr
        if k == 0:
            total += acc.real
        else:
            total += 2.0 * (unit ** k * acc).real
    return (2.0 / math.pi) * total


def wigner(state: PassageState, grid_spec: WignerGridSpec, coverage_tol: Optional[float] = None) -> WignerGrid:
    """Função de Wigner do estado reduzido do campo numa grade quadrada uniforme"""
    coverage_tol = settings.wigner_coverage_tol if coverage_tol is None else coverage_tol
    c = complex(grid_spec.center)
    h = grid_spec.halfwidth
    re_axis = np.linspace(c.real - h, c.real + h, grid_spec.resolution)
    im_axis = np.linspace(c.imag - h, c.imag + h, grid_spec.resolution)
    re, im = np.meshgrid(re_axis, im_axis, indexing="ij")
    values = wigner_from_density(field_density_matrix(state), re + 1j * im)

    peak = float(np.max(np.abs(values)))
    boundary = max(
        float(np.max(np.abs(values[0, :]))),
        float(np.max(np.abs(values[-1, :]))),
        float(np.max(np.abs(values[:, 0]))),
        float(np.max(np.abs(values[:, -1]))),
    )
    coverage_ok = boundary <= coverage_tol * peak
    if not coverage_ok:
        logger.warning(
            "Wigner grid halfwidth %s does not cover the state: boundary |W| = %.3e (max %.3e)",
            h, boundary, peak,
        )

    step = re_axis[1] - re_axis[0]
    return WignerGrid(
        re_axis=re_axis,
        im_axis=im_axis,
        values=values,
        cell_area=float(step * (im_axis[1] - im_axis[0])),
        coverage_ok=coverage_ok,
    )


def _hermite_functions(n_levels: int, q: np.ndarray) -> np.ndarray:
    # Normalized oscillator eigenfunctions <q|n>
    out = np.zeros((n_levels, len(q)))
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * q * q)
    if n_levels > 1:
        out[1] = math.sqrt(2.0) * q * out[0]
    for n in range(1, n_levels - 1):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * q * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def quadrature_distribution(state: PassageState, x: np.ndarray) -> np.ndarray:
    """
    Densidade de probabilidade de X = (a + a^dagger)/2 nos pontos x.

    Integrar W em Im(alpha) dá a mesma densidade em Re(alpha) = x.
    """
    x = np.asarray(x, dtype=float)
    vectors = state.field_vectors()
    basis = _hermite_functions(len(vectors[0]), math.sqrt(2.0) * x)
    density = np.zeros_like(x)
    for psi in vectors:
        amplitude = psi @ basis
        density += (amplitude * amplitude.conj()).real
    return math.sqrt(2.0) * density
