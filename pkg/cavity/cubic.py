"""
Real roots of monic cubics mu^3 + x1 mu^2 + x2 mu + x3 = 0 by the
trigonometric formula.

Shared by the per-level dynamics (eigenfrequencies) and the entropy of the
3x3 atomic density matrix (eigenvalues). Both only ever produce cubics with
three real roots; anything else is reported as InvalidParametersError.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from config import settings
from cavity.errors import InvalidParametersError

logger = logging.getLogger("cavity.cubic")

# p = x1^2 - 3 x2 below this fraction of scale^2 is treated as a triple root
_TRIPLE_ROOT_RTOL = 1e-14
# Pairs closer than this fraction of the root spread are re-derived from Vieta
_NEAR_PAIR_RTOL = 1e-3


class CubicCoeffs(BaseModel):
    model_config = ConfigDict(frozen=True)

    x1: float
    x2: float
    x3: float
    n: int = 0


class CubicRoots(BaseModel):
    model_config = ConfigDict(frozen=True)

    mu: Tuple[float, float, float]
    degenerate: bool


def _poly(mu, x1, x2, x3):
    return ((mu + x1) * mu + x2) * mu + x3


def _dpoly(mu, x1, x2):
    return (3.0 * mu + 2.0 * x1) * mu + x2


def _refine_near_pairs(roots, x1, x2, x3, rows):
    # The isolated root is well conditioned; the close pair follows from
    # sum and product of the remaining two roots.
    for row in np.nonzero(rows)[0]:
        r = roots[row]
        if (r[1] - r[0]) <= (r[2] - r[1]):
            iso, slots = r[2], (0, 1)
        else:
            iso, slots = r[0], (1, 2)
        pair_sum = -x1[row] - iso
        scale = max(1.0, abs(r).max())
        if abs(iso) >= 1e-8 * scale:
            pair_prod = -x3[row] / iso
        else:
            pair_prod = x2[row] - iso * pair_sum
        disc = max(pair_sum * pair_sum - 4.0 * pair_prod, 0.0)
        sq = math.sqrt(disc)
        big = 0.5 * (pair_sum + math.copysign(sq, pair_sum))
        small = pair_prod / big if big != 0.0 else 0.5 * (pair_sum - math.copysign(sq, pair_sum))
        roots[row, slots[0]], roots[row, slots[1]] = sorted((big, small))
    roots.sort(axis=1)


def solve_cubic_batch(
    x1,
    x2,
    x3,
    clip_tol: Optional[float] = None,
    degeneracy_tol: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Solução trigonométrica vetorizada para várias cúbicas.

    Returns:
        (roots, degenerate): raízes com shape (N, 3) em ordem crescente e
        um flag booleano de degenerescência por cúbica
    """
    clip_tol = settings.arccos_clip_tol if clip_tol is None else clip_tol
    degeneracy_tol = settings.degeneracy_tol if degeneracy_tol is None else degeneracy_tol

    x1, x2, x3 = np.broadcast_arrays(
        np.atleast_1d(np.asarray(x1, dtype=float)),
        np.atleast_1d(np.asarray(x2, dtype=float)),
        np.atleast_1d(np.asarray(x3, dtype=float)),
    )
    if not (np.all(np.isfinite(x1)) and np.all(np.isfinite(x2)) and np.all(np.isfinite(x3))):
        raise InvalidParametersError("coeficientes da cúbica precisam ser finitos", code="non_finite_cubic")

    scale = np.maximum.reduce([np.ones_like(x1), np.abs(x1), np.sqrt(np.abs(x2)), np.cbrt(np.abs(x3))])
    p = x1 * x1 - 3.0 * x2

    if np.any(p < -1e-12 * scale * scale):
        bad = int(np.argmin(p / (scale * scale)))
        raise InvalidParametersError(
            f"cúbica com raízes complexas (x1^2 - 3 x2 = {p[bad]!r})", code="complex_roots"
        )

    triple = p <= _TRIPLE_ROOT_RTOL * scale * scale
    p_safe = np.where(triple, 1.0, p)
    arg = (9.0 * x1 * x2 - 2.0 * x1 ** 3 - 27.0 * x3) / (2.0 * p_safe ** 1.5)
    arg = np.where(triple, 0.0, arg)
    if np.any(np.abs(arg) > 1.0 + clip_tol):
        bad = int(np.argmax(np.abs(arg)))
        raise InvalidParametersError(
            f"argumento do arccos {arg[bad]!r} fora de [-1, 1]: cúbica com raízes complexas", code="complex_roots"
        )
    theta = np.arccos(np.clip(arg, -1.0, 1.0)) / 3.0

    shifts = 2.0 * math.pi * np.arange(3) / 3.0
    roots = (-x1 / 3.0)[:, None] + (2.0 / 3.0) * np.sqrt(p_safe)[:, None] * np.cos(theta[:, None] + shifts[None, :])
    roots = np.where(triple[:, None], (-x1 / 3.0)[:, None], roots)
    roots.sort(axis=1)

    gaps = np.diff(roots, axis=1)
    spread = roots[:, 2] - roots[:, 0]
    near_pair = (~triple) & (spread > 0) & (gaps.min(axis=1) < _NEAR_PAIR_RTOL * spread)
    if np.any(near_pair):
        _refine_near_pairs(roots, x1, x2, x3, near_pair)

    # One guarded Newton step on well separated roots
    polish = ~(triple | near_pair)
    if np.any(polish):
        X1, X2, X3 = x1[:, None], x2[:, None], x3[:, None]
        f = _poly(roots, X1, X2, X3)
        df = _dpoly(roots, X1, X2)
        step = np.divide(f, df, out=np.zeros_like(f), where=df != 0.0)
        nearest = np.minimum(
            np.abs(roots - np.roll(roots, 1, axis=1)),
            np.abs(roots - np.roll(roots, -1, axis=1)),
        )
        candidate = roots - step
        better = (np.abs(_poly(candidate, X1, X2, X3)) < np.abs(f)) & (np.abs(step) < 0.1 * nearest)
        roots = np.where(polish[:, None] & better, candidate, roots)
        roots.sort(axis=1)

    gaps = np.diff(roots, axis=1)
    degenerate = gaps.min(axis=1) < degeneracy_tol * np.maximum(1.0, np.abs(roots).max(axis=1))
    return roots, degenerate


def trig_cubic_roots(
    coeffs: CubicCoeffs,
    clip_tol: Optional[float] = None,
    degeneracy_tol: Optional[float] = None,
) -> CubicRoots:
    """Três raízes reais de uma cúbica mônica, em ordem crescente, com flag de degenerescência"""
    roots, degenerate = solve_cubic_batch(
        coeffs.x1, coeffs.x2, coeffs.x3, clip_tol=clip_tol, degeneracy_tol=degeneracy_tol
    )
    if degenerate[0]:
        logger.debug("Near-degenerate cubic at n=%d: roots=%s", coeffs.n, roots[0])
    return CubicRoots(mu=tuple(float(v) for v in roots[0]), degenerate=bool(degenerate[0]))
