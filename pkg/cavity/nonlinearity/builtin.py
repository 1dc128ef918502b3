import math
from typing import Callable

import numpy as np

from cavity.nonlinearity.interface import INonlinearity


class ConstantOne(INonlinearity):
    """f(n) = 1: acoplamento linear de Jaynes-Cummings."""

    def __init__(self):
        super().__init__(name="one")

    def value(self, n: int) -> float:
        return 1.0

    def evaluate_many(self, ns: np.ndarray) -> np.ndarray:
        return np.ones(len(ns), dtype=float)


class SquareRoot(INonlinearity):
    """f(n) = sqrt(n): acoplamento de Buck-Sukumar, dependente da intensidade."""

    def __init__(self):
        super().__init__(name="sqrt")

    def value(self, n: int) -> float:
        return math.sqrt(n)

    def evaluate_many(self, ns: np.ndarray) -> np.ndarray:
        return np.sqrt(np.asarray(ns, dtype=float))


class CustomNonlinearity(INonlinearity):
    """Envolve qualquer callable n -> f(n)."""

    def __init__(self, func: Callable[[int], float], name: str = "custom"):
        super().__init__(name=name)
        self._func = func

    def value(self, n: int) -> float:
        return self._func(n)
