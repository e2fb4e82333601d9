"""
Exception hierarchy for the NCG toolkit

Every error carries the process exit code the CLI reports for it.
"""

class NCGError(Exception):
    """Base class for all toolkit errors"""
    exit_code = 1

# Numerical kernel failures (exit code 3)

class NumericalError(NCGError):
    exit_code = 3

class NotSquare(NumericalError):
    pass

class NotHermitian(NumericalError):
    pass

class NotAntiHermitian(NumericalError):
    pass

class NotSkewSymmetric(NumericalError):
    pass

class OddDimension(NumericalError):
    pass

class NotUnitary(NumericalError):
    pass

class NumericalFailure(NumericalError):
    pass

# Structural / verification failures (exit code 1)

class StructureError(NCGError):
    exit_code = 1

class UnsupportedSignature(StructureError):
    pass

class WrongSignature(StructureError):
    pass

class DimensionMismatch(StructureError):
    pass

class NotInAlgebra(StructureError):
    def __init__(self, which: str, index: int, residual: float):
        super().__init__(f"{which}[{index}] is not in the algebra (residual {residual:.3e})")
        self.which = which
        self.index = index
        self.residual = residual

class UnsupportedAlgebra(StructureError):
    pass

class NotLieAlgebraElement(StructureError):
    pass

class NonHermitianOneForm(StructureError):
    pass

class NotInSpan(StructureError):
    def __init__(self, residual: float, bound: float):
        super().__init__(f"operator is outside the fluctuation span (residual {residual:.3e} > {bound:.3e})")
        self.residual = residual
        self.bound = bound

# Coefficients read from input that break their Hermiticity class (exit code 1)

class NonAntiHermitianCoefficient(NotAntiHermitian, StructureError):
    exit_code = 1

    def __init__(self, which: str, index: int, residual: float):
        super().__init__(f"{which}[{index}] is not anti-Hermitian (residual {residual:.3e})")
        self.which = which
        self.index = index
        self.residual = residual

class NonHermitianCoefficient(NotHermitian, StructureError):
    exit_code = 1

    def __init__(self, which: str, index: int, residual: float):
        super().__init__(f"{which}[{index}] is not Hermitian (residual {residual:.3e})")
        self.which = which
        self.index = index
        self.residual = residual

class NotSkew(StructureError):
    pass

class NegativeDeterminant(StructureError):
    pass

# Usage / input failures (exit code 2)

class UsageError(NCGError):
    exit_code = 2

class ParseError(UsageError):
    pass

class InvalidConfig(UsageError):
    pass

class WriteFailure(UsageError):
    pass
