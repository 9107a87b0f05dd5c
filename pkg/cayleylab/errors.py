class CayleyLabError(RuntimeError):
    """Base class for every failure the CLI reports as an input error."""

class DimensionError(CayleyLabError):
    pass

class DegreeError(CayleyLabError):
    pass

class ScalarModeError(CayleyLabError):
    """Exact and float coefficients met inside one computation."""

class OperatorError(CayleyLabError):
    pass

class ParseError(CayleyLabError):
    pass

class JacobiError(CayleyLabError):
    pass

class AdmissibilityError(CayleyLabError):
    pass

class CompatibilityError(CayleyLabError):
    pass

class ScanError(CayleyLabError):
    """Empty grid or empty convention list."""
