"""
Closed-form single-passage dynamics of a V-type atom in a cavity field.

Each Fock level n forms an independent three-dimensional block spanned by
|e,n>, |i,n>, |g,n+1>. Its eigenfrequencies are the real roots of a monic
cubic; amplitudes are three-term exponential sums whose weights k_j follow
from the initial atomic state (|e> + |i>)/sqrt(2). Both passages of the
cascade run through this same code path, only the field vector differs.
"""

import logging
import math
from typing import Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.signal import argrelextrema

from config import settings
from cavity.cubic import CubicCoeffs, solve_cubic_batch
from cavity.errors import InvalidParametersError, NumericalError, SingularCouplingError, UnmeasurableOutcomeError
from cavity.fock import FieldCoeffs, ModelParams, PassageState, coherent_coeffs

logger = logging.getLogger("cavity.solver")

_SQRT2 = math.sqrt(2.0)


class ProjectionResult(BaseModel):
    """Campo após detectar o átomo em |g>, com a probabilidade de detecção"""
    model_config = ConfigDict(frozen=True)

    field: FieldCoeffs
    probability: float


def _level_couplings(params: ModelParams, n_levels: int) -> np.ndarray:
    return params.nonlinearity.coupling(np.arange(n_levels))


def _cubic_arrays(params: ModelParams, g: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    l1, l2, d1, d2 = params.lambda1, params.lambda2, params.delta1, params.delta2
    g2 = g * g
    x1 = np.full_like(g2, d1 - 2.0 * d2)
    x2 = d2 * d2 - d2 * d1 - (l1 * l1 + l2 * l2) * g2
    x3 = l2 * l2 * (d2 - d1) * g2
    return x1, x2, x3


def cubic_coeffs(params: ModelParams, n: int) -> CubicCoeffs:
    """Cúbica característica do nível n, com f avaliada em n + 1"""
    g = params.nonlinearity.coupling(np.array([n]))
    x1, x2, x3 = _cubic_arrays(params, g)
    return CubicCoeffs(x1=float(x1[0]), x2=float(x2[0]), x3=float(x3[0]), n=n)


def _level_generator(params: ModelParams, g: float) -> np.ndarray:
    # Rotating frame: A = e^{i(d1-d2)t} a~, B = b~, C = e^{-i d2 t} c~
    l1, l2, d1, d2 = params.lambda1, params.lambda2, params.delta1, params.delta2
    return np.array(
        [
            [d1 - d2, 0.0, l1 * g],
            [0.0, 0.0, l2 * g],
            [l1 * g, l2 * g, -d2],
        ]
    )


def _spectral_propagate(params: ModelParams, g: float, cn: complex, taus: np.ndarray) -> np.ndarray:
    """Amplitudes (A_n, B_n, C_{n+1}) do nível para cada tau, shape (len(taus), 3)"""
    energies, vectors = np.linalg.eigh(_level_generator(params, g))
    x0 = np.array([cn / _SQRT2, cn / _SQRT2, 0.0], dtype=complex)
    weights = vectors.conj().T @ x0
    evolved = (np.exp(-1j * np.outer(taus, energies)) * weights) @ vectors.T
    d1, d2 = params.delta1, params.delta2
    evolved[:, 0] *= np.exp(1j * (d1 - d2) * taus)
    evolved[:, 2] *= np.exp(-1j * d2 * taus)
    return evolved


def matrix_exp_level(cn: complex, params: ModelParams, n: int, tau: float) -> Tuple[complex, complex, complex]:
    """
    Propaga o vetor do nível n (c_n/sqrt2, c_n/sqrt2, 0) pela exponencial
    exata do seu gerador hermitiano 3x3.

    Vale para raízes degeneradas e também para f(n+1) = 0.
    """
    g = float(params.nonlinearity.coupling(np.array([n]))[0])
    out = _spectral_propagate(params, g, complex(cn), np.array([float(tau)]))[0]
    return complex(out[0]), complex(out[1]), complex(out[2])


class _ClosedForm:
    """Raízes e pesos exponenciais por nível, calculados uma vez por campo"""

    def __init__(
        self,
        field: FieldCoeffs,
        params: ModelParams,
        degeneracy_tol: Optional[float] = None,
        singular_fallback: bool = False,
    ):
        self.params = params
        coeffs = field.coeffs
        size = len(coeffs)
        self.size = size
        self.coeffs = coeffs

        g = _level_couplings(params, size)
        populated = coeffs != 0
        singular = populated & (g == 0.0)
        if np.any(singular) and not singular_fallback:
            levels = np.nonzero(singular)[0].tolist()
            raise SingularCouplingError(
                f"f(n+1) = 0 nos níveis populados {levels}; forma fechada indefinida",
                code="singular_coupling",
            )

        closed = populated & ~singular
        fallback = singular.copy()
        roots = np.zeros((size, 3))
        if np.any(closed):
            x1, x2, x3 = _cubic_arrays(params, g[closed])
            level_roots, degenerate = solve_cubic_batch(x1, x2, x3, degeneracy_tol=degeneracy_tol)
            roots[closed] = level_roots
            idx = np.nonzero(closed)[0]
            fallback[idx[degenerate]] = True
            closed[idx[degenerate]] = False
        if np.any(fallback):
            logger.debug("Matrix-exponential fallback at levels %s", np.nonzero(fallback)[0].tolist())

        self.closed = closed
        self.fallback_levels = np.nonzero(fallback)[0]
        self.g = g
        self.roots = roots

        l1, l2, d1, d2 = params.lambda1, params.lambda2, params.delta1, params.delta2
        mu = roots[closed]
        gc = g[closed]
        g2 = (gc * gc)[:, None]
        other1 = np.roll(mu, -1, axis=1)
        other2 = np.roll(mu, -2, axis=1)
        k = (coeffs[closed] / _SQRT2)[:, None] * (other1 * other2 + (l2 * l2 + l1 * l2) * g2) / (
            (mu - other1) * (mu - other2)
        )
        self.mu = mu
        self.weight_a = k * (mu * mu - d2 * mu - l2 * l2 * g2) / (l1 * l2 * g2)
        self.weight_b = k
        self.weight_c = -k * mu / (l2 * gc[:, None])

    def evaluate(self, taus: np.ndarray) -> List[PassageState]:
        d1, d2 = self.params.delta1, self.params.delta2
        fallback = {
            int(n): _spectral_propagate(self.params, float(self.g[n]), complex(self.coeffs[n]), taus)
            for n in self.fallback_levels
        }
        states = []
        for s, tau in enumerate(taus):
            a = np.zeros(self.size, dtype=complex)
            b = np.zeros(self.size, dtype=complex)
            c = np.zeros(self.size, dtype=complex)
            phase = np.exp(1j * self.mu * tau)
            a[self.closed] = np.sum(self.weight_a * phase, axis=1) * np.exp(1j * (d1 - d2) * tau)
            b[self.closed] = np.sum(self.weight_b * phase, axis=1)
            c[self.closed] = np.sum(self.weight_c * phase, axis=1) * np.exp(-1j * d2 * tau)
            for n, series in fallback.items():
                a[n], b[n], c[n] = series[s]
            states.append(PassageState(a=a, b=b, c=c, tau=float(tau)))
        return states


def _assert_unitary(states: List[PassageState], field: FieldCoeffs, tol: float) -> None:
    expected = np.abs(field.coeffs) ** 2
    for state in states:
        drift = float(np.max(np.abs(state.level_norms() - expected)))
        if drift > tol:
            raise NumericalError(
                f"normas por nível derivaram {drift:.3e} em tau={state.tau} (tolerância {tol:.1e})",
                code="normalization",
            )


def passage_series(
    field: FieldCoeffs,
    params: ModelParams,
    taus: Iterable[float],
    degeneracy_tol: Optional[float] = None,
    singular_fallback: bool = False,
    normalization_tol: Optional[float] = None,
) -> List[PassageState]:
    """Passagem em forma fechada avaliada em vários tempos; raízes e k_j são montados uma vez"""
    taus = np.atleast_1d(np.asarray(list(taus), dtype=float))
    solver = _ClosedForm(field, params, degeneracy_tol=degeneracy_tol, singular_fallback=singular_fallback)
    states = solver.evaluate(taus)
    _assert_unitary(states, field, settings.normalization_tol if normalization_tol is None else normalization_tol)
    return states


def passage_amplitudes(
    field: FieldCoeffs,
    params: ModelParams,
    tau: float,
    degeneracy_tol: Optional[float] = None,
    singular_fallback: bool = False,
) -> PassageState:
    """Estado de átomo e campo após uma passagem de duração escalada tau"""
    return passage_series(
        field, params, [tau], degeneracy_tol=degeneracy_tol, singular_fallback=singular_fallback
    )[0]


def initial_state(field: FieldCoeffs) -> PassageState:
    """Átomo em (|e> + |i>)/sqrt2, campo inalterado"""
    amp = field.coeffs / _SQRT2
    return PassageState(a=amp, b=amp, c=np.zeros_like(amp), tau=0.0)


def project_ground(state: PassageState, projection_floor: Optional[float] = None) -> ProjectionResult:
    """Condiciona o campo à detecção do átomo em |g>"""
    floor = settings.projection_floor if projection_floor is None else projection_floor
    probability = float(np.sum((state.c * state.c.conj()).real))
    if probability < floor:
        raise UnmeasurableOutcomeError(
            f"probabilidade de detecção em |g> {probability:.3e} abaixo do piso {floor:.1e} em tau={state.tau}",
            code="projection_floor",
        )
    coeffs = np.zeros(len(state.c) + 1, dtype=complex)
    coeffs[1:] = state.c / math.sqrt(probability)
    return ProjectionResult(field=FieldCoeffs.from_vector(coeffs, normalize=True), probability=probability)


def prepare_second_field(
    params: ModelParams,
    alpha: complex,
    tau1: float,
    tail_tol: Optional[float] = None,
    projection_floor: Optional[float] = None,
    degeneracy_tol: Optional[float] = None,
) -> ProjectionResult:
    """Preparação coerente, primeira passagem de duração tau1 e projeção em |g>"""
    field = coherent_coeffs(alpha, params.n_max, tail_tol=tail_tol)
    first = passage_amplitudes(field, params, tau1, degeneracy_tol=degeneracy_tol)
    result = project_ground(first, projection_floor=projection_floor)
    logger.info("First atom detected in |g> at tau1=%s with probability %.6f", tau1, result.probability)
    return result


def run_cascade(
    params: ModelParams,
    alpha: complex,
    tau1: float,
    tau2_grid: Iterable[float],
    tail_tol: Optional[float] = None,
    projection_floor: Optional[float] = None,
    degeneracy_tol: Optional[float] = None,
) -> List[PassageState]:
    """Estados da segunda passagem para cada tau2, após projetar o primeiro átomo em tau1"""
    if tau1 < 0:
        raise InvalidParametersError(f"tau1 precisa ser >= 0, recebido {tau1}", code="tau1")
    projection = prepare_second_field(
        params, alpha, tau1,
        tail_tol=tail_tol, projection_floor=projection_floor, degeneracy_tol=degeneracy_tol,
    )
    return passage_series(projection.field, params, tau2_grid, degeneracy_tol=degeneracy_tol)


def scan_first_passage(
    params: ModelParams,
    alpha: complex,
    taus: Iterable[float],
    tail_tol: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Inversão da primeira passagem e probabilidade de detecção em |g> numa grade de tempos"""
    field = coherent_coeffs(alpha, params.n_max, tail_tol=tail_tol)
    states = passage_series(field, params, taus)
    probability = np.array([float(np.sum((s.c * s.c.conj()).real)) for s in states])
    return 1.0 - 2.0 * probability, probability


def inversion_minima(values: np.ndarray) -> np.ndarray:
    """Índices dos mínimos locais estritos e interiores de uma curva amostrada"""
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        return np.array([], dtype=int)
    return argrelextrema(values, np.less)[0]
