"""Dense matrix kernels behind FormOperator and the least-squares solvers.

Exact matrices are tuples of Fraction rows and go through sympy; float
matrices go through numpy. Callers never mix the two.
"""
import logging
from fractions import Fraction
from typing import Sequence, TypeAlias, Union

import numpy as np
import sympy

from . import constants
from .errors import ScalarModeError

logger = logging.getLogger(__name__)

Scalar : TypeAlias = Union[Fraction, float]
Rows : TypeAlias = tuple[tuple[Scalar, ...], ...]


def is_exact(rows : Sequence[Sequence[Scalar]]) -> bool:
    kinds = {isinstance(c, Fraction) for row in rows for c in row}
    if len(kinds) > 1:
        raise ScalarModeError('matrix mixes exact and float entries')
    return kinds != {False}

def _shape(rows : Sequence[Sequence[Scalar]], ncols : int | None = None) -> tuple[int, int]:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return len(rows), ncols

def to_sympy(rows : Sequence[Sequence[Scalar]], ncols : int | None = None) -> sympy.Matrix:
    nrows, ncols = _shape(rows, ncols)
    flat = [sympy.Rational(c.numerator, c.denominator) for row in rows for c in row]
    return sympy.Matrix(nrows, ncols, flat)

def from_sympy(m : sympy.Matrix) -> Rows:
    return tuple(
        tuple(Fraction(int(sympy.Rational(x).p), int(sympy.Rational(x).q)) for x in m.row(i))
        for i in range(m.rows))

def to_numpy(rows : Sequence[Sequence[Scalar]], ncols : int | None = None) -> np.ndarray:
    nrows, ncols = _shape(rows, ncols)
    return np.array([[float(c) for c in row] for row in rows], dtype=float).reshape(nrows, ncols)

def from_numpy(m : np.ndarray) -> Rows:
    return tuple(tuple(float(x) for x in row) for row in m)

def identity(size : int, exact : bool = True) -> Rows:
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return tuple(tuple(one if i == j else zero for j in range(size)) for i in range(size))

def rank(rows : Sequence[Sequence[Scalar]], ncols : int | None = None, tol : float | None = None) -> int:
    nrows, ncols = _shape(rows, ncols)
    if nrows == 0 or ncols == 0:
        return 0
    if is_exact(rows):
        return int(to_sympy(rows, ncols).rank())
    tol = constants.TOLERANCE if tol is None else tol
    return int(np.linalg.matrix_rank(to_numpy(rows, ncols), tol=tol))

def matmul(a : Rows, b : Rows) -> Rows:
    if is_exact(a) and is_exact(b):
        return from_sympy(to_sympy(a) * to_sympy(b))
    return from_numpy(to_numpy(a) @ to_numpy(b))

def is_zero(rows : Sequence[Sequence[Scalar]], tol : float | None = None) -> bool:
    if is_exact(rows):
        return all(c == 0 for row in rows for c in row)
    tol = constants.TOLERANCE if tol is None else tol
    return all(abs(c) <= tol for row in rows for c in row)

def pseudo_inverse(rows : Rows, ncols : int) -> Rows:
    """Left inverse (MᵀM)⁻¹Mᵀ when M has full column rank, Moore-Penrose otherwise.

    Applied to a vector it gives the least-squares solution of the normal
    equations, which is what every projection and Lee-form solve here needs.
    """
    if not rows or ncols == 0:
        return tuple(() for _ in range(ncols))
    if is_exact(rows):
        m = to_sympy(rows, ncols)
        gram = m.T * m
        if gram.rank() == ncols:
            return from_sympy(gram.inv() * m.T)
        logger.debug('normal equations are singular (rank %d < %d), using pinv', gram.rank(), ncols)
        return from_sympy(m.pinv())
    return from_numpy(np.linalg.pinv(to_numpy(rows, ncols)))

def lstsq(rows : Rows, ncols : int, target : Sequence[float]) -> tuple[list[float], float]:
    """Float least squares; returns the solution and the squared residual norm."""
    m = to_numpy(rows, ncols)
    b = np.array([float(x) for x in target], dtype=float)
    solution, _, _, _ = np.linalg.lstsq(m, b, rcond=None)
    residual = m @ solution - b
    return [float(x) for x in solution], float(residual @ residual)

def rref_rows(rows : Rows, ncols : int) -> Rows:
    """Nonzero rows of the reduced row echelon form (exact only)."""
    if not rows:
        return ()
    reduced, pivots = to_sympy(rows, ncols).rref()
    return from_sympy(reduced[:len(pivots), :])

def mat_vec(rows : Rows, vector : Sequence[Scalar]) -> list[Scalar]:
    return [sum((c * x for c, x in zip(row, vector)), start=row[0] * 0 if row else 0) for row in rows]
