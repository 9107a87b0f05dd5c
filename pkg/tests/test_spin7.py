import pytest
import random
import itertools
from fractions import Fraction
from cayleylab import exterior, spin7
from cayleylab.errors import DegreeError, DimensionError
from cayleylab.exterior import KForm, Vector, hodge, wedge
from cayleylab.model import TopologicalData

PHI = spin7.cayley_form()

def e(*indices):
    return KForm.basis(8, *indices)

def test_cayley_form_shape():
    assert len(PHI.terms) == 14
    assert hodge(PHI) == PHI

def test_phi_wedge_phi_brute_force():
    # pairwise products of the 14 terms, independent of wedge's bookkeeping
    total = Fraction(0)
    for (m1, c1), (m2, c2) in itertools.product(PHI.terms, repeat=2):
        if set(m1) & set(m2):
            continue
        total += c1 * c2 * exterior.permutation_sign(m1 + m2)
    assert total == 14
    assert wedge(PHI, PHI) == exterior.volume_form(8) * 14

def test_admissible():
    report = spin7.check_admissible(PHI)
    assert report.verdict
    assert report.self_dual
    assert report.phi_wedge_phi_coeff == 14
    assert report.spectrum_ok
    assert report.ranks == (7, 21)

def test_not_admissible():
    report = spin7.check_admissible(PHI - e(5, 6, 7, 8) * 2)
    assert not report.self_dual
    assert not report.verdict

def test_admissible_float():
    report = spin7.check_admissible(PHI.to_float())
    assert report.verdict
    assert report.ranks == (7, 21)

def test_admissible_rejects_degree():
    with pytest.raises(DegreeError):
        spin7.check_admissible(e(1, 2, 3))
    with pytest.raises(DimensionError):
        spin7.check_admissible(KForm.basis(7, 1, 2, 3, 4))

def test_lambda3_ranks():
    assert exterior.rank(spin7.wedge_phi_operator(PHI, 3)) == 8
    assert exterior.rank(spin7.star_wedge_operator(PHI, 1)) == 8
    assert spin7.get_structure().b_isometry == 7

def test_b_map():
    # B(e^1) ^ phi = 7 *e^1
    assert wedge(spin7.lambda3_8(e(1)), PHI) == hodge(e(1)) * 7
    for i in range(1, 9):
        assert hodge(wedge(spin7.lambda3_8(e(i)), PHI)) == e(i) * -7

def test_project2():
    alpha = e(1, 2)
    p7, p21 = spin7.project2_7(alpha), spin7.project2_21(alpha)
    assert p7 + p21 == alpha
    assert p7 == (e(1, 2) + e(3, 4) + e(5, 6) + e(7, 8)) * Fraction(1, 4)
    assert hodge(wedge(p7, PHI)) == p7 * 3
    assert hodge(wedge(p21, PHI)) == -p21

def test_project2_operators():
    structure = spin7.get_structure()
    identity = exterior.FormOperator.identity(8, 2)
    assert exterior.rank(structure.P2_7) == 7
    assert exterior.rank(structure.P2_21) == 21
    assert (structure.P2_7 @ structure.P2_7 - structure.P2_7).is_zero()
    assert (structure.P2_7 @ structure.P2_21).is_zero()
    assert (structure.P2_7 + structure.P2_21 - identity).is_zero()

def test_project3_48_annihilated():
    rng = random.Random(7)
    assert wedge(spin7.project3_48(e(1, 2, 3)), PHI).is_zero()
    for _ in range(20):
        gamma = exterior.random_form(rng, 8, 3)
        assert wedge(spin7.project3_48(gamma), PHI).is_zero()
        assert spin7.project3_8(gamma) + spin7.project3_48(gamma) == gamma

def test_project3_8_of_image():
    b = spin7.lambda3_8(e(1) + e(5) * 2)
    assert spin7.project3_8(b) == b
    assert spin7.project3_48(b).is_zero()

def test_project4():
    assert spin7.project4_1(PHI) == PHI
    assert spin7.project4_selfdual(e(1, 2, 3, 4)) == (e(1, 2, 3, 4) + e(5, 6, 7, 8)) * Fraction(1, 2)
    assert spin7.project4_antiselfdual(PHI).is_zero()
    # e^{1234} pairs with phi at 1/14
    assert spin7.project4_1(e(1, 2, 3, 4)) == PHI * Fraction(1, 14)

def test_project4_1_idempotent():
    rng = random.Random(8)
    for _ in range(10):
        a = exterior.random_form(rng, 8, 4)
        once = spin7.project4_1(a)
        assert spin7.project4_1(once) == once

def test_transported_projections():
    rng = random.Random(9)
    for _ in range(5):
        a5 = exterior.random_form(rng, 8, 5)
        assert spin7.project5_8(a5) + spin7.project5_48(a5) == a5
        assert spin7.project5_8(spin7.project5_8(a5)) == spin7.project5_8(a5)
        assert hodge(spin7.project5_8(a5)) == spin7.project3_8(hodge(a5))
        a6 = exterior.random_form(rng, 8, 6)
        assert spin7.project6_7(a6) + spin7.project6_21(a6) == a6
        assert hodge(spin7.project6_7(a6)) == spin7.project2_7(hodge(a6))
    assert spin7.dual_component_transport(e(1, 2)) == hodge(e(1, 2))

def test_theta_wedge_phi_is_lambda5_8():
    theta = e(3) - e(7)
    assert spin7.project5_48(wedge(theta, PHI)).is_zero()

def test_projection_degree_mismatch():
    with pytest.raises(DegreeError):
        spin7.project2_7(e(1, 2, 3))
    with pytest.raises(DegreeError):
        spin7.PROJECTIONS['4_sd'](e(1))

def test_lee_form():
    for i in range(1, 9):
        assert spin7.lee_form(PHI, wedge(e(i), PHI)) == e(i)
    theta = e(1) * Fraction(2, 3) - e(8)
    assert spin7.lee_form(PHI, wedge(theta, PHI)) == theta

def test_lee_map_constant():
    report = spin7.lee_map_constant()
    assert report.single_constant
    assert report.mu == 1
    assert len(report.values) == 8

def test_characteristic_torsion():
    result = spin7.characteristic_torsion_lcp(e(7))
    assert result.T == hodge(wedge(e(7), PHI)) * Fraction(-7, 6)
    assert result.t48.is_zero()
    assert result.t8 == result.T
    assert result.scale == 7
    assert not result.degenerate

def test_characteristic_torsion_zero_theta():
    result = spin7.characteristic_torsion_lcp(KForm.zero(8, 1))
    assert result.degenerate
    assert result.scale is None
    assert result.T.is_zero()

def test_constant_chain(caplog):
    report = spin7.constant_chain_report()
    assert report.mu == 1
    assert report.torsion_scale == 7
    assert not report.consistent
    assert 'disagree' in caplog.text

def test_corollary_basis_pair():
    lhs, rhs = spin7.cayley_corollary_check(Vector.basis(8, 1), Vector.basis(8, 2))
    assert lhs == rhs == 6

def test_corollary_random_pairs():
    rng = random.Random(10)
    for _ in range(100):
        v = Vector.of(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(8))
        w = Vector.of(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(8))
        lhs, rhs = spin7.cayley_corollary_check(v, w)
        assert lhs == rhs

def test_corollary_parallel_vectors():
    v = Vector.of([1, 2, 0, 0, 0, 0, 0, 0])
    w = Vector.of([2, 4, 0, 0, 0, 0, 0, 0])
    assert spin7.cayley_corollary_check(v, w) == (0, 0)

@pytest.mark.parametrize('data,expected', [
    (TopologicalData(0, 0, 0, True, True), True),
    (TopologicalData(0, 0, 1, True, True), False),
    (TopologicalData(16, 4, 0, True, True), True),
    (TopologicalData(8, 0, 1, True, True), True),
    (TopologicalData(0, 0, 0, False, True), False),
    (TopologicalData(0, 0, 0, True, False), False),
])
def test_lawson(data, expected):
    assert spin7.lawson_condition(data) == expected
