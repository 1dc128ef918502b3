import math
from abc import ABC, abstractmethod

import numpy as np

from cavity.errors import InvalidParametersError


class INonlinearity(ABC):
    """
    Interface para a função de acoplamento dependente da intensidade f(n).

    A contagem de fótons n é um inteiro >= 0. Implementações devolvem um
    valor real finito; o produto sqrt(n) * f(n) é o acoplamento efetivo do
    nível.
    """

    def __init__(self, name: str):
        self.name = name

    @abstractmethod
    def value(self, n: int) -> float:
        """
        Avalia f(n) para um único nível.

        Args:
            n: Número de fótons (>= 0)

        Returns:
            f(n) real
        """
        pass

    def evaluate(self, n: int) -> float:
        """Avalia f(n) e rejeita valores não finitos"""
        if n < 0:
            raise InvalidParametersError(f"número de fótons precisa ser >= 0, recebido {n}", code="negative_photon_number")
        result = float(self.value(int(n)))
        if not math.isfinite(result):
            raise InvalidParametersError(
                f"não linearidade '{self.name}' retornou valor não finito {result} em n={n}",
                code="non_finite_nonlinearity",
            )
        return result

    def evaluate_many(self, ns: np.ndarray) -> np.ndarray:
        """Avalia f(n) para um vetor de níveis"""
        return np.array([self.evaluate(int(n)) for n in ns], dtype=float)

    def coupling(self, ns: np.ndarray) -> np.ndarray:
        """Acoplamento efetivo g_n = sqrt(n + 1) * f(n + 1) para cada nível n"""
        ns = np.asarray(ns, dtype=int)
        return np.sqrt(ns + 1.0) * self.evaluate_many(ns + 1)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"
