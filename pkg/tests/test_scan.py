import pytest
from fractions import Fraction
from cayleylab import scan
from cayleylab.errors import AdmissibilityError, ScanError
from cayleylab.exterior import KForm
from cayleylab.model import Convention, FernandezClass, Pairing, ReconcileCandidate
from cayleylab.product import LITERAL, SU3Data, reconcile_cayley
from cayleylab.scan import ThetaMode

CAYLEY = Convention((1, 1, -1, 1), Fraction(1, 2), Pairing.STANDARD, None)
HALF = Fraction(1, 2)
LCP_POINT = (Fraction(0), Fraction(1), HALF, Fraction(0))
SMALL_GRID = [(0, 0, 0, 0), (0, 1, HALF, 0), (1, 1, 1, 1), (-2, 2, 1, 1)]

def e(*indices):
    return KForm.basis(8, *indices)

def test_default_grid():
    grid = scan.default_grid()
    assert len(grid) == 7 ** 4
    assert LCP_POINT in grid

def test_relations():
    result = scan.scan_convention(SU3Data.standard(), CAYLEY, SMALL_GRID)
    assert result.relations == ('p + 2*s = 0', 'q - 2*r = 0')
    assert result.relation_rows == ((1, 0, 0, 2), (0, 1, -2, 0))

def test_small_grid_locus():
    result = scan.scan_convention(SU3Data.standard(), CAYLEY, SMALL_GRID)
    assert result.points_scanned == 4
    # grid points are visited in sorted order
    assert [p.point for p in result.locus] == [(-2, 2, 1, 1), (0, 0, 0, 0), (0, 1, HALF, 0)]
    other, origin, lcp = result.locus
    assert origin.fernandez_class == FernandezClass.W0
    assert other.fernandez_class == FernandezClass.W2
    assert other.theta == e(7) * 2 - e(8) * 2
    assert lcp.fernandez_class == FernandezClass.W2
    assert lcp.canonical_shape and not other.canonical_shape
    assert lcp.theta == e(7)
    assert lcp.phase.ratio == -HALF

def test_residuals_recorded():
    result = scan.scan_convention(SU3Data.standard(), CAYLEY, SMALL_GRID)
    residuals = {r.point: r.residual for r in result.results}
    assert residuals[LCP_POINT] == 0
    assert residuals[(1, 1, 1, 1)] > 0

def test_default_scan():
    report = scan.theorem_scan(scan.default_grid(), [CAYLEY])
    assert report.grid_size == 2401
    (result,) = report.conventions
    assert len(result.locus) == 25
    assert LCP_POINT in [p.point for p in result.locus]
    for point in result.locus:
        p, q, r, s = point.point
        assert p + 2 * s == 0 and q - 2 * r == 0
        assert point.normal
        assert point.dtheta_zero
        assert point.gauduchon
        if point.point == (0, 0, 0, 0):
            assert point.fernandez_class == FernandezClass.W0
            assert point.nearly_kahler.is_nk
        else:
            assert point.fernandez_class == FernandezClass.W2
            assert not point.nearly_kahler.is_nk
            assert point.phase.ratio == -HALF

def test_u_flat_mode():
    report = scan.theorem_scan(scan.default_grid(), [CAYLEY], ThetaMode.U_FLAT)
    (result,) = report.conventions
    assert [p.point for p in result.locus] == [LCP_POINT]
    assert result.locus[0].theta == e(7)
    assert len(result.relations) == 4

def test_accepts_reconcile_candidates():
    candidate = next(c for c in reconcile_cayley() if c.convention == CAYLEY)
    assert isinstance(candidate, ReconcileCandidate)
    report = scan.theorem_scan(SMALL_GRID, [candidate])
    assert report.conventions[0].convention == CAYLEY

def test_parallel_matches_serial():
    conventions = [c.convention for c in reconcile_cayley()[:2]]
    serial = scan.theorem_scan(SMALL_GRID, conventions)
    parallel = scan.theorem_scan(SMALL_GRID, conventions, workers=2)
    assert serial == parallel

def test_empty_grid():
    with pytest.raises(ScanError):
        scan.theorem_scan([], [CAYLEY])

def test_no_conventions():
    with pytest.raises(ScanError):
        scan.theorem_scan(SMALL_GRID, [])

def test_inadmissible_convention():
    with pytest.raises(AdmissibilityError):
        scan.theorem_scan(SMALL_GRID, [LITERAL])

def test_angle_scan():
    report = scan.angle_scan(CAYLEY, samples=4)
    assert len(report.samples) == 16
    assert all(s.solvable for s in report.samples)
    first = report.samples[0]
    assert (first.gamma, first.beta) == (0, 0)
    assert first.coefficients == pytest.approx((0, 1, 0.5, 0), abs=1e-9)

def test_angle_scan_u_flat():
    report = scan.angle_scan(CAYLEY, samples=4, theta_mode=ThetaMode.U_FLAT)
    assert len(report.samples) == 4
    assert all(s.gamma == s.beta for s in report.samples)

def test_more_workers_than_conventions():
    serial = scan.theorem_scan(SMALL_GRID, [CAYLEY])
    assert scan.theorem_scan(SMALL_GRID, [CAYLEY], workers=8) == serial

def test_every_admissible_convention():
    grid = scan.default_grid((Fraction(-1), Fraction(0), HALF, Fraction(1)))
    conventions = reconcile_cayley()
    report = scan.theorem_scan(grid, conventions)
    assert len(report.conventions) == len(conventions)
    for result in report.conventions:
        assert result.relations == ('p + 2*s = 0', 'q - 2*r = 0')
        assert len(result.locus) == 4
        for point in result.locus:
            assert point.normal
            assert point.dtheta_zero
            if point.point == (0, 0, 0, 0):
                assert point.fernandez_class == FernandezClass.W0
            else:
                assert point.fernandez_class == FernandezClass.W2
