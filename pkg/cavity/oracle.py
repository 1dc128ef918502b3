"""
Brute-force RK4 propagation of the per-level amplitude equations.

Integrates the interaction-picture system with its explicit e^{+-i delta tau}
phases, independently of the closed form in cavity.solver. It is a test
oracle, not a production path.
"""

import cmath
import logging
import math
from typing import Iterable, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import settings
from cavity.errors import InvalidParametersError, StepSizeError
from cavity.fock import FieldCoeffs, ModelParams, PassageState

logger = logging.getLogger("cavity.oracle")


class IntegratorConfig(BaseModel):
    """
    Passo do RK4.

    Sem `dt` explícito, o passo é o menor entre `settings.oracle_dt` e
    1/`steps_per_period` do período mais rápido entre os níveis integrados.
    """

    model_config = ConfigDict(frozen=True)

    dt: Optional[float] = Field(default=None, gt=0, le=0.01)
    steps_per_period: int = Field(default_factory=lambda: settings.oracle_steps_per_period, ge=1)
    method: Literal["rk4"] = "rk4"

    def step_for(self, fun: "_AmplitudeEquations") -> float:
        if self.dt is not None:
            return self.dt
        period = 2.0 * math.pi / fun.fastest_frequency()
        return min(settings.oracle_dt, period / self.steps_per_period)


class _AmplitudeEquations:
    """
    Lado direito para y = (A, B, C) empilhado num array (3, n_levels):

        i dA/dt = l1 g e^{i d1 t} C
        i dB/dt = l2 g e^{i d2 t} C
        i dC/dt = l1 g e^{-i d1 t} A + l2 g e^{-i d2 t} B
    """

    def __init__(self, params: ModelParams, n_levels: int):
        g = params.nonlinearity.coupling(np.arange(n_levels))
        self.g1 = params.lambda1 * g
        self.g2 = params.lambda2 * g
        self.d1 = params.delta1
        self.d2 = params.delta2

    def fastest_frequency(self) -> float:
        # Spectral-norm bound of the rotated level generator
        rabi = float(np.max(np.sqrt(self.g1 ** 2 + self.g2 ** 2))) if len(self.g1) else 0.0
        return max(rabi + max(abs(self.d1), abs(self.d2)), 1e-12)

    def __call__(self, y: np.ndarray, t: float) -> np.ndarray:
        p1 = cmath.exp(1j * self.d1 * t)
        p2 = cmath.exp(1j * self.d2 * t)
        out = np.empty_like(y)
        out[0] = -1j * p1 * self.g1 * y[2]
        out[1] = -1j * p2 * self.g2 * y[2]
        out[2] = -1j * (p1.conjugate() * self.g1 * y[0] + p2.conjugate() * self.g2 * y[1])
        return out


def _rk4_step(y: np.ndarray, fun: _AmplitudeEquations, t: float, dt: float) -> np.ndarray:
    dt2 = dt / 2.0

    k1 = fun(y, t)
    k2 = fun(y + k1 * dt2, t + dt2)
    k3 = fun(y + k2 * dt2, t + dt2)
    k4 = fun(y + k3 * dt, t + dt)

    return y + (k1 + 2 * k2 + 2 * k3 + k4) / 6.0 * dt


def _advance(y: np.ndarray, fun: _AmplitudeEquations, start: float, stop: float, dt: float) -> np.ndarray:
    # Whole steps from start, then one shortened step landing on stop
    span = stop - start
    full = int(math.floor(span / dt + 1e-12))
    for k in range(full):
        y = _rk4_step(y, fun, start + k * dt, dt)
    rest = span - full * dt
    if rest > 1e-14:
        y = _rk4_step(y, fun, start + full * dt, rest)
    return y


def integrate_series(
    field: FieldCoeffs,
    params: ModelParams,
    taus: Iterable[float],
    cfg: Optional[IntegratorConfig] = None,
    drift_tol: Optional[float] = None,
) -> List[PassageState]:
    """
    Integra uma única vez, amostrando exatamente em cada tempo pedido.

    Returns:
        Estados na mesma ordem de `taus`
    """
    cfg = cfg or IntegratorConfig()
    drift_tol = settings.oracle_norm_drift_tol if drift_tol is None else drift_tol
    taus = np.atleast_1d(np.asarray(list(taus), dtype=float))
    if np.any(taus < 0):
        raise InvalidParametersError("tempos de integração precisam ser >= 0", code="negative_tau")

    coeffs = field.coeffs
    expected = np.abs(coeffs) ** 2
    fun = _AmplitudeEquations(params, len(coeffs))
    dt = cfg.step_for(fun)
    y = np.zeros((3, len(coeffs)), dtype=complex)
    y[0] = coeffs / math.sqrt(2.0)
    y[1] = coeffs / math.sqrt(2.0)

    order = np.argsort(taus, kind="stable")
    results = [None] * len(taus)
    t = 0.0
    for idx in order:
        target = float(taus[idx])
        if target > t:
            y = _advance(y, fun, t, target, dt)
            t = target
        drift = float(np.max(np.abs(np.sum((y * y.conj()).real, axis=0) - expected)))
        if drift > drift_tol:
            raise StepSizeError(
                f"deriva da norma por nível {drift:.3e} em tau={target} excede {drift_tol:.1e}; use dt < {dt}",
                code="step_size",
            )
        results[idx] = PassageState(a=y[0], b=y[1], c=y[2], tau=target)

    logger.debug("RK4 sweep to tau=%s with dt=%s over %d levels", t, dt, len(coeffs))
    return results


def integrate_passage(
    field: FieldCoeffs,
    params: ModelParams,
    tau: float,
    cfg: Optional[IntegratorConfig] = None,
) -> PassageState:
    return integrate_series(field, params, [tau], cfg)[0]


def resolved_step(field: FieldCoeffs, params: ModelParams, cfg: Optional[IntegratorConfig] = None) -> float:
    """Passo efetivo que integrate_series usa para este campo e estes parâmetros"""
    return (cfg or IntegratorConfig()).step_for(_AmplitudeEquations(params, len(field.coeffs)))
