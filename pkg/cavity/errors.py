"""Exception hierarchy of the cascade engine.

Every error carries the process exit code the CLI maps it to.
"""


class CavityError(Exception):
    """Base exception para erros do motor de cascata"""
    exit_code = 5

    def __init__(self, message: str, code: str = "cavity_error"):
        super().__init__(message)
        self.code = str(code or "cavity_error").strip() or "cavity_error"


class ConfigError(CavityError):
    """Configuração de cenário inválida"""
    exit_code = 2


class InvalidParametersError(CavityError):
    """Parâmetros físicos sem solução real (raízes complexas, f(n) não finito)"""
    pass


class UnmeasurableOutcomeError(CavityError):
    """Probabilidade de detectar o primeiro átomo em |g> abaixo do piso"""
    exit_code = 3


class TruncationError(CavityError):
    """Massa de cauda ou margem de momentos acima da tolerância"""
    exit_code = 4


class NumericalError(CavityError):
    """Falha numérica (normalização violada, etc.)"""
    pass


class SingularCouplingError(NumericalError):
    """f(n+1) = 0 em um nível populado"""
    pass


class StepSizeError(NumericalError):
    """Deriva de norma do RK4 acima da tolerância"""
    pass


class InvalidDensityMatrixError(NumericalError):
    """Autovalor significativamente negativo na matriz densidade"""
    pass


class UndefinedMandelError(NumericalError):
    """Q de Mandel indefinido para <n> = 0"""
    pass
