from .interface import INonlinearity
from .builtin import ConstantOne, SquareRoot, CustomNonlinearity
from .factory import NonlinearityFactory

__all__ = [
    "INonlinearity",
    "ConstantOne",
    "SquareRoot",
    "CustomNonlinearity",
    "NonlinearityFactory",
]
