"""
Physical quantities of a passage state: inversion, atomic density matrix,
entanglement entropy, field moments, squeezing and photon statistics.

The field reduced state is never built densely here. It is the rank <= 3
mixture of the field vectors paired with |e>, |i> and |g>
(PassageState.field_vectors).
"""

import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator
from scipy.special import gammaln

from config import settings
from cavity.cubic import solve_cubic_batch
from cavity.errors import InvalidDensityMatrixError, TruncationError, UndefinedMandelError
from cavity.fock import PassageState

logger = logging.getLogger("cavity.observables")

BASIS = ("e", "i", "g")


class AtomDensityMatrix(BaseModel):
    """Matriz densidade reduzida 3x3 do átomo, na ordem de base (e, i, g)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _to_array(cls, value):
        arr = np.array(value, dtype=complex)
        if arr.shape != (3, 3):
            raise ValueError(f"matriz densidade precisa ser 3x3, recebido shape {arr.shape}")
        arr.flags.writeable = False
        return arr

    @property
    def populations(self) -> np.ndarray:
        return np.diag(self.entries).real.copy()

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    @property
    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


class FieldMoments(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean_n: float
    mean_n2: float
    a1: complex
    a2: complex
    a4: complex


class SqueezingPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    s_x: float
    s_p: float
    order: int


def inversion(state: PassageState) -> float:
    """(rho_ee + rho_ii) - rho_gg"""
    upper = float(np.sum((state.a * state.a.conj()).real) + np.sum((state.b * state.b.conj()).real))
    lower = float(np.sum((state.c * state.c.conj()).real))
    return upper - lower


def reduced_rho(state: PassageState) -> AtomDensityMatrix:
    """
    Traço parcial sobre o campo.

    As coerências com |g> combinam A e B no número de fótons n + 1 com
    C(n + 1): |g> carrega um fóton a mais que |e> ou |i> no mesmo nível.
    """
    a, b, c = state.a, state.b, state.c
    rho_ee = np.sum((a * a.conj()).real)
    rho_ii = np.sum((b * b.conj()).real)
    rho_gg = np.sum((c * c.conj()).real)
    rho_ei = np.sum(a * b.conj())
    rho_eg = np.sum(a[1:] * c[:-1].conj())
    rho_ig = np.sum(b[1:] * c[:-1].conj())
    entries = np.array(
        [
            [rho_ee, rho_ei, rho_eg],
            [np.conj(rho_ei), rho_ii, rho_ig],
            [np.conj(rho_eg), np.conj(rho_ig), rho_gg],
        ],
        dtype=complex,
    )
    return AtomDensityMatrix(entries=entries)


def _entropy_from_eigenvalues(values: np.ndarray, clip: Optional[float] = None) -> float:
    clip = settings.eigenvalue_clip if clip is None else clip
    values = np.asarray(values, dtype=float)
    if np.any(values < -clip):
        raise InvalidDensityMatrixError(
            f"matriz densidade com autovalor {values.min():.3e} abaixo de -{clip:.0e}", code="negative_eigenvalue"
        )
    positive = values[values > 0.0]
    return float(-np.sum(positive * np.log(positive)))


def _spectrum_cubic(matrix: np.ndarray) -> np.ndarray:
    # Characteristic polynomial gamma^3 + b1 gamma^2 + b2 gamma + b3
    m = np.asarray(matrix, dtype=complex)
    b1 = -np.trace(m).real
    b2 = (
        (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
        + (m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0])
        + (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
    ).real
    b3 = -np.linalg.det(m).real
    roots, _ = solve_cubic_batch(b1, b2, b3)
    return roots[0]


def entropy_cubic(rho: AtomDensityMatrix, clip: Optional[float] = None) -> float:
    """Entropia de von Neumann com autovalores pela fórmula trigonométrica da cúbica"""
    return _entropy_from_eigenvalues(_spectrum_cubic(rho.entries), clip=clip)


def entropy_numeric(rho: AtomDensityMatrix, clip: Optional[float] = None) -> float:
    """Entropia de von Neumann via decomposição espectral hermitiana"""
    return _entropy_from_eigenvalues(np.linalg.eigvalsh(rho.entries), clip=clip)


def field_gram(state: PassageState) -> np.ndarray:
    vectors = np.vstack(state.field_vectors())
    return vectors.conj() @ vectors.T


def entropy_field(state: PassageState, clip: Optional[float] = None) -> float:
    """
    Entropia do estado reduzido do campo.

    O espectro não nulo coincide com o da matriz de Gram 3x3 dos vetores
    de campo associados a |e>, |i> e |g>.
    """
    return _entropy_from_eigenvalues(np.linalg.eigvalsh(field_gram(state)), clip=clip)


def photon_distribution(state: PassageState) -> np.ndarray:
    """P(n) do campo para n = 0..n_max+1"""
    return sum((v * v.conj()).real for v in state.field_vectors())


def _check_margin(state: PassageState, margin_tol: Optional[float]) -> None:
    tol = settings.moment_margin_tol if margin_tol is None else margin_tol
    top = float(np.sum(photon_distribution(state)[-4:]))
    if top >= tol:
        raise TruncationError(
            f"probabilidade {top:.3e} nos quatro níveis de Fock mais altos excede a margem {tol:.0e}; aumente n_max",
            code="moment_margin",
        )


def _lowering_expectation(state: PassageState, r: int) -> complex:
    a, b, c = state.a, state.b, state.c
    size = len(a)
    if r >= size:
        return 0j
    n = np.arange(size - r)
    # sqrt((n+r)!/n!) and sqrt((n+r+1)!/(n+1)!)
    f_ab = np.exp(0.5 * (gammaln(n + r + 1) - gammaln(n + 1)))
    f_c = np.exp(0.5 * (gammaln(n + r + 2) - gammaln(n + 2)))
    total = np.sum(f_ab * (a[r:] * a[:size - r].conj() + b[r:] * b[:size - r].conj()))
    total += np.sum(f_c * c[r:] * c[:size - r].conj())
    return complex(total)


def moments(state: PassageState, margin_tol: Optional[float] = None) -> FieldMoments:
    """<n>, <n^2> e <a^r> para r = 1, 2, 4"""
    _check_margin(state, margin_tol)
    n = np.arange(len(state.a), dtype=float)
    p_ab = (state.a * state.a.conj()).real + (state.b * state.b.conj()).real
    p_c = (state.c * state.c.conj()).real
    mean_n = float(np.sum(n * p_ab) + np.sum((n + 1) * p_c))
    mean_n2 = float(np.sum(n * n * p_ab) + np.sum((n + 1) ** 2 * p_c))
    return FieldMoments(
        mean_n=mean_n,
        mean_n2=mean_n2,
        a1=_lowering_expectation(state, 1),
        a2=_lowering_expectation(state, 2),
        a4=_lowering_expectation(state, 4),
    )


def squeezing_first(state: PassageState, m: Optional[FieldMoments] = None) -> SqueezingPair:
    m = m or moments(state)
    a1, a2, n = m.a1, m.a2, m.mean_n
    s_x = a2 + a2.conjugate() + 2 * n - 2 * abs(a1) ** 2 - a1 ** 2 - a1.conjugate() ** 2
    s_p = -a2 - a2.conjugate() + 2 * n - 2 * abs(a1) ** 2 + a1 ** 2 + a1.conjugate() ** 2
    return SqueezingPair(s_x=float(s_x.real), s_p=float(s_p.real), order=1)


def squeezing_second(state: PassageState, m: Optional[FieldMoments] = None) -> SqueezingPair:
    """Compressão de amplitude ao quadrado"""
    m = m or moments(state)
    a2, a4, n, n2 = m.a2, m.a4, m.mean_n, m.mean_n2
    denominator = 4 * n + 2
    s_x = (a4 + a4.conjugate() + 2 * n2 - 2 * n - (a2 + a2.conjugate()) ** 2) / denominator
    s_p = (2 * n2 - 2 * n - a4 - a4.conjugate() + (a2.conjugate() - a2) ** 2) / denominator
    return SqueezingPair(s_x=float(s_x.real), s_p=float(s_p.real), order=2)


def mandel_q(state: PassageState, m: Optional[FieldMoments] = None) -> float:
    m = m or moments(state)
    if m.mean_n <= 0.0:
        raise UndefinedMandelError("Q de Mandel indefinido para <n> = 0", code="vacuum")
    return (m.mean_n2 - m.mean_n ** 2) / m.mean_n - 1.0


def photon_statistics(q: float, tol: float = 1e-9) -> str:
    if q < -tol:
        return "sub-Poissonian"
    if q > tol:
        return "super-Poissonian"
    return "Poissonian"
