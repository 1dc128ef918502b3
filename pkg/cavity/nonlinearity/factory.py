from typing import Callable, Dict

from cavity.nonlinearity.interface import INonlinearity
from cavity.nonlinearity.builtin import ConstantOne, SquareRoot, CustomNonlinearity


class NonlinearityFactory:
    """
    Factory para instanciar funções de acoplamento f(n) por nome.

    Usa mapeamento centralizado nome -> classe; aliases longos apontam para
    as mesmas classes.
    """

    # Mapeamento canônico: nome -> classe
    _FUNCTIONS: Dict[str, type] = {
        "one": ConstantOne,
        "sqrt": SquareRoot,
    }

    _ALIASES: Dict[str, str] = {
        "constant-one": "one",
        "square-root": "sqrt",
    }

    @classmethod
    def _canonical(cls, name: str) -> str:
        key = name.lower().strip()
        return cls._ALIASES.get(key, key)

    @classmethod
    def get(cls, name: str) -> INonlinearity:
        """
        Retorna a função de acoplamento para o nome especificado.

        Args:
            name: Nome da função (case-insensitive, aceita aliases)

        Returns:
            Instância de INonlinearity

        Raises:
            ValueError: Se o nome não for suportado
        """
        function_class = cls._FUNCTIONS.get(cls._canonical(name))

        if not function_class:
            supported = ", ".join(cls._FUNCTIONS.keys())
            raise ValueError(
                f"Não linearidade '{name}' não suportada. "
                f"Disponíveis: {supported}"
            )

        return function_class()

    @classmethod
    def custom(cls, func: Callable[[int], float], name: str = "custom") -> INonlinearity:
        """Envolve uma função arbitrária n -> f(n)"""
        return CustomNonlinearity(func, name=name)

    @classmethod
    def get_supported(cls) -> list:
        """Retorna lista de nomes suportados"""
        return list(cls._FUNCTIONS.keys())

    @classmethod
    def is_supported(cls, name: str) -> bool:
        """Verifica se um nome é suportado"""
        return cls._canonical(name) in cls._FUNCTIONS
