"""Scans of the product ansatz for locally conformally parallel solutions.

Everything is linear in the differential coefficients x = (p, q, r, s):
dΦ(x) = Σ xᵢ Dᵢ with Dᵢ = dΦ at the i-th unit vector. With θ free the
least-squares residual is R(x) = Σ xᵢ (Dᵢ − θᵢ∧Φ); with θ = u♭ fixed it is
Σ xᵢ Dᵢ − u♭∧Φ. Residuals over a grid come from the Gram matrix of those
columns, and the zero-residual locus is the kernel, reported in reduced row
echelon form.
"""
import concurrent.futures
import enum
import itertools
import logging
import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import sympy

from . import constants
from . import linalg
from .classify import classify, product_lee_differentials, solve_lee
from .errors import AdmissibilityError, ScanError
from .exterior import KForm, Scalar, inner, scalar_is_zero, wedge
from .model import (
    AngleSample, AngleScanReport, Convention, ConventionScan, Differentials, GridResult, LocusPoint,
    ReconcileCandidate, ScanReport,
)
from .product import (
    BASE, ProductModel, SU3Data, build_product_phi, d_product_phi, induced_differentials,
    nearly_kahler_check, nearly_kahler_phase_check,
)
from .spin7 import check_admissible

logger = logging.getLogger(__name__)

VARIABLES = ('p', 'q', 'r', 's')
Point = tuple[Scalar, Scalar, Scalar, Scalar]


class ThetaMode(enum.StrEnum):
    U_FLAT = "u_flat"              # θ = u♭ fixed by the frame
    GENERAL_BETA = "general_beta"  # θ solved freely over span{e¹..e⁸}

def default_grid(values : Sequence[Scalar] = constants.DEFAULT_GRID_VALUES) -> list[Point]:
    return [tuple(point) for point in itertools.product(values, repeat=4)]

def unit_differentials(exact : bool = True) -> list[Differentials]:
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return [Differentials(*(one if i == j else zero for j in range(4))) for i in range(4)]


#### Exact theorem scan

def _residual_columns(model : ProductModel, phi : KForm, mode : ThetaMode) -> list[KForm]:
    """Columns whose span holds every residual; u_flat appends the constant −u♭∧Φ."""
    columns = []
    for diff in unit_differentials(model.is_exact):
        d = d_product_phi(model.with_diff(diff))
        if mode == ThetaMode.GENERAL_BETA:
            theta, _ = solve_lee(d, phi)
            d = d - wedge(theta, phi)
        columns.append(d)
    if mode == ThetaMode.U_FLAT:
        columns.append(-wedge(model.flipped(model.u_flat), phi))
    return columns

def _relation_text(row : Sequence[Scalar]) -> str:
    symbols = sympy.symbols(VARIABLES)
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x for c, x in zip(row, symbols))
    if len(row) > len(VARIABLES):
        expr += sympy.Rational(row[-1].numerator, row[-1].denominator)
    return f'{sympy.sstr(expr)} = 0'

def _theta_for(model : ProductModel, phi : KForm, dphi : KForm, mode : ThetaMode) -> KForm:
    if mode == ThetaMode.U_FLAT:
        return model.flipped(model.u_flat)
    theta, _ = solve_lee(dphi, phi)
    return theta

def _is_canonical_shape(point : Point) -> bool:
    """dω ∝ Ω₋, dΩ₊ ∝ ω∧ω and dΩ₋ = 0, with nonzero constants."""
    p, q, r, s = point
    return p == 0 and s == 0 and q != 0 and r != 0

def _locus_point(model : ProductModel, phi : KForm, mode : ThetaMode) -> LocusPoint:
    dphi = d_product_phi(model)
    theta = _theta_for(model, phi, dphi, mode)
    report = classify(phi, dphi, product_lee_differentials(model))
    d_omega, d_plus, d_minus = induced_differentials(model)
    su3 = model.su3
    return LocusPoint(
        point=model.diff.as_tuple(),
        theta=theta,
        normal=all(i > BASE for (i,), _ in theta.terms),
        dtheta_zero=report.dtheta_zero,
        gauduchon=report.gauduchon,
        fernandez_class=report.fernandez_class,
        nearly_kahler=nearly_kahler_check(su3, d_omega, d_minus),
        phase=nearly_kahler_phase_check(su3, d_omega, d_plus, d_minus),
        canonical_shape=_is_canonical_shape(model.diff.as_tuple()),
    )

def scan_convention(su3 : SU3Data, convention : Convention, grid : Sequence[Point],
                    mode : ThetaMode = ThetaMode.GENERAL_BETA) -> ConventionScan:
    model = ProductModel(su3, convention)
    phi = build_product_phi(model)
    if not check_admissible(phi).verdict:
        raise AdmissibilityError(f'convention {convention.label()} is not admissible')
    logger.debug('scanning %s over %d points (%s)', convention.label(), len(grid), mode)

    columns = _residual_columns(model, phi, mode)
    gram = [[inner(a, b) for b in columns] for a in columns]
    matrix = tuple(zip(*(c.vector() for c in columns)))
    relation_rows = linalg.rref_rows(matrix, len(columns))

    results = []
    locus = []
    for point in sorted(grid):
        x = list(point) + ([Fraction(1)] if mode == ThetaMode.U_FLAT else [])
        residual = sum(x[i] * gram[i][j] * x[j] for i in range(len(x)) for j in range(len(x)))
        results.append(GridResult(point, residual))
        if scalar_is_zero(residual):
            locus.append(_locus_point(model.with_diff(Differentials(*point)), phi, mode))
    return ConventionScan(
        convention=convention,
        relations=tuple(_relation_text(row) for row in relation_rows),
        relation_rows=relation_rows,
        locus=tuple(locus),
        points_scanned=len(results),
        results=tuple(results),
    )

def _scan_job(args):
    return scan_convention(*args)

def theorem_scan(grid : Iterable[Point], conventions : Iterable[Convention | ReconcileCandidate],
                 theta_mode : ThetaMode = ThetaMode.GENERAL_BETA, su3 : Optional[SU3Data] = None,
                 workers : int = 1) -> ScanReport:
    grid = [tuple(Fraction(x) for x in point) for point in grid]
    conventions = [c.convention if isinstance(c, ReconcileCandidate) else c for c in conventions]
    if not grid:
        raise ScanError('empty grid')
    if not conventions:
        raise ScanError('no conventions to scan')
    su3 = su3 or SU3Data.standard()
    jobs = [(su3, convention, grid, theta_mode) for convention in conventions]
    workers = min(workers, len(jobs))
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            scans = list(pool.map(_scan_job, jobs))
    else:
        scans = [_scan_job(job) for job in jobs]
    return ScanReport(str(theta_mode), len(grid), tuple(scans))


#### Float angle scan

def angle_scan(convention : Convention, samples : int = constants.DEFAULT_ANGLE_SAMPLES,
               theta_mode : ThetaMode = ThetaMode.GENERAL_BETA, su3 : Optional[SU3Data] = None,
               tol : Optional[float] = None) -> AngleScanReport:
    """Solve dΦ = θ∧Φ for (p, q, r, s) with θ = cos β e⁷ + sin β e⁸ on equispaced angles.

    In u_flat mode β follows γ, so θ = u♭.
    """
    su3 = su3 or SU3Data.standard()
    tol = constants.TOLERANCE if tol is None else tol
    angles = [2 * math.pi * i / samples for i in range(samples)]
    pairs = [(g, g) for g in angles] if theta_mode == ThetaMode.U_FLAT else list(itertools.product(angles, angles))
    out = []
    for gamma, beta in pairs:
        model = ProductModel.from_angles(su3, convention, gamma, beta)
        phi = build_product_phi(model)
        columns = [d_product_phi(model.with_diff(diff)).vector() for diff in unit_differentials(exact=False)]
        target = wedge(model.flipped(model.theta_beta), phi).vector()
        solution, residual = linalg.lstsq(tuple(zip(*columns)), 4, target)
        out.append(AngleSample(gamma, beta, tuple(solution), residual, residual <= tol))
    logger.debug('angle scan of %s: %d of %d samples solvable',
                 convention.label(), sum(s.solvable for s in out), len(out))
    return AngleScanReport(str(theta_mode), convention, tuple(out))
