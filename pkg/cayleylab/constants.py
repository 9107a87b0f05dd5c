from fractions import Fraction

DEBUG = False

# "exact" (Fraction coefficients) or "float"; CAYLEY_LAB_MODE overrides the default.
MODE = "exact"
MODE_ENV = "CAYLEY_LAB_MODE"
MODES = ("exact", "float")

# Float comparisons only. Exact mode never consults it.
DEFAULT_TOLERANCE = 1e-9
TOLERANCE = DEFAULT_TOLERANCE

MAX_DIM = 16
SCHEMA_VERSION = 1

DEFAULT_GRID_VALUES = (
    Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(0),
    Fraction(1, 2), Fraction(1), Fraction(2),
)
DEFAULT_ANGLE_SAMPLES = 8
