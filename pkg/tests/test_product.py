import pytest
import math
from fractions import Fraction
from cayleylab import product, spin7
from cayleylab.errors import CompatibilityError, DegreeError, DimensionError
from cayleylab.exterior import KForm, flip_index, wedge
from cayleylab.model import Convention, Differentials, Pairing
from cayleylab.product import ProductModel, SU3Data

SU3 = SU3Data.standard()
CAYLEY = Convention((1, 1, -1, 1), Fraction(1, 2), Pairing.STANDARD, None)

def e(*indices, n=8):
    return KForm.basis(n, *indices)

def test_standard_su3():
    assert SU3.volume_scale == 1
    assert SU3.is_exact
    assert not SU3.to_float().is_exact

def test_su3_rejects():
    with pytest.raises(CompatibilityError):
        SU3Data(SU3.omega, SU3.omega_plus + e(1, 2, 5, n=6), SU3.omega_minus)
    with pytest.raises(CompatibilityError):
        SU3Data(e(1, 2, n=6), SU3.omega_plus, SU3.omega_minus)
    with pytest.raises(DegreeError):
        SU3Data(SU3.omega_plus, SU3.omega_plus, SU3.omega_minus)
    with pytest.raises(DimensionError):
        SU3Data(e(1, 2), SU3.omega_plus, SU3.omega_minus)

def test_angle_pair():
    assert product.angle_pair((Fraction(3, 5), Fraction(4, 5))) == (Fraction(3, 5), Fraction(4, 5))
    c, s = product.angle_pair(math.pi / 2)
    assert abs(c) < 1e-12 and s == 1
    with pytest.raises(CompatibilityError):
        product.angle_pair((1, 1))

def test_model_rejects():
    with pytest.raises(CompatibilityError):
        ProductModel(SU3, Convention((1, 1, 0, 1)))
    with pytest.raises(DimensionError):
        ProductModel(SU3, Convention(flip=9))

def test_frame_vectors():
    m = ProductModel(SU3, gamma=(Fraction(3, 5), Fraction(4, 5)))
    assert m.u_flat == e(7) * Fraction(3, 5) + e(8) * Fraction(4, 5)
    assert m.v_flat == e(7) * Fraction(-4, 5) + e(8) * Fraction(3, 5)

def test_cayley_convention_reproduces_phi0():
    assert product.build_product_phi(ProductModel(SU3, CAYLEY)) == spin7.cayley_form()

def test_literal_convention_not_admissible():
    phi = product.build_product_phi(ProductModel(SU3, product.LITERAL))
    assert not spin7.check_admissible(phi).verdict
    assert not product.literal_report().report.verdict

def test_reconcile():
    candidates = product.reconcile_cayley()
    assert candidates
    assert CAYLEY in [c.convention for c in candidates]
    assert product.LITERAL not in [c.convention for c in candidates]
    for c in candidates:
        phi = product.build_product_phi(ProductModel(SU3, c.convention))
        assert spin7.check_admissible(phi).verdict

def test_reconcile_without_flips():
    candidates = product.reconcile_cayley(flips=False)
    assert all(c.convention.flip is None for c in candidates)
    assert CAYLEY in [c.convention for c in candidates]

def test_rotated_frame_stays_admissible():
    m = ProductModel(SU3, CAYLEY, gamma=(Fraction(3, 5), Fraction(4, 5)))
    assert spin7.check_admissible(product.build_product_phi(m)).verdict

def test_swapped_pairing():
    swapped = ProductModel(SU3, Convention(CAYLEY.signs, CAYLEY.coeff_c, Pairing.SWAPPED))
    phi = product.build_product_phi(swapped)
    assert phi != spin7.cayley_form()
    assert phi.coeff(1, 3, 6, 7) == 1

def test_flip():
    flipped = ProductModel(SU3, Convention(CAYLEY.signs, CAYLEY.coeff_c, flip=8))
    assert product.build_product_phi(flipped) == flip_index(spin7.cayley_form(), 8)
    diff = Differentials(Fraction(1), Fraction(2), Fraction(3), Fraction(4))
    unflipped = ProductModel(SU3, CAYLEY, diff=diff)
    assert product.d_product_phi(flipped.with_diff(diff)) == flip_index(product.d_product_phi(unflipped), 8)

def test_d_product_phi_lcp_point():
    m = ProductModel(SU3, CAYLEY, diff=Differentials(Fraction(0), Fraction(1), Fraction(1, 2), Fraction(0)))
    assert product.d_product_phi(m) == wedge(e(7), spin7.cayley_form())

def test_d_product_phi_omega_plus():
    # Ω₊ ∧ ω = 0, so the 2·c·dω∧ω term drops out for dω = Ω₊
    m = ProductModel(SU3, CAYLEY, diff=Differentials(Fraction(1)))
    omega, plus, _ = SU3.embedded()
    assert wedge(plus, omega).is_zero()
    assert product.d_product_phi(m) == wedge(plus, e(7, 8))

def test_d_product_phi_linear():
    m = ProductModel(SU3, CAYLEY)
    a = product.d_product_phi(m.with_diff(Differentials(Fraction(1), Fraction(0), Fraction(2))))
    b = product.d_product_phi(m.with_diff(Differentials(Fraction(1)))) + \
        product.d_product_phi(m.with_diff(Differentials(r=Fraction(2))))
    assert a == b

def test_induced_differentials():
    m = ProductModel(SU3, diff=Differentials(Fraction(1), Fraction(2), Fraction(3), Fraction(4)))
    d_omega, d_plus, d_minus = product.induced_differentials(m)
    omega2 = wedge(SU3.omega, SU3.omega)
    assert d_omega == SU3.omega_plus + SU3.omega_minus * 2
    assert d_plus == omega2 * 3
    assert d_minus == omega2 * 4

def test_to_float():
    m = ProductModel(SU3, CAYLEY, diff=Differentials(Fraction(0), Fraction(1), Fraction(1, 2))).to_float()
    assert not m.is_exact
    assert product.d_product_phi(m).is_close(wedge(e(7), spin7.cayley_form()).to_float())

def test_nearly_kahler_check():
    omega2 = wedge(SU3.omega, SU3.omega)
    result = product.nearly_kahler_check(SU3, SU3.omega_plus * 12, omega2)
    assert result.is_nk and result.a == 1
    assert not product.nearly_kahler_check(SU3, SU3.omega_minus, KForm.zero(6, 4)).is_nk

def test_phase_check_normalization():
    omega2 = wedge(SU3.omega, SU3.omega)
    result = product.nearly_kahler_phase_check(SU3, SU3.omega_plus * 12, KForm.zero(6, 4), omega2)
    assert result.structure_ok
    assert result.ratio == Fraction(1, 12)
    assert result.matches_normalization

def test_phase_check_rotated():
    omega2 = wedge(SU3.omega, SU3.omega)
    result = product.nearly_kahler_phase_check(SU3, SU3.omega_minus, omega2 * Fraction(-1, 2), KForm.zero(6, 4))
    assert result.structure_ok
    assert (result.x, result.y) == (0, 1)
    assert result.ratio == Fraction(1, 2)

def test_phase_check_fails():
    omega2 = wedge(SU3.omega, SU3.omega)
    assert not product.nearly_kahler_phase_check(SU3, KForm.zero(6, 3), omega2, omega2).structure_ok
    assert not product.nearly_kahler_phase_check(SU3, SU3.omega_plus, omega2, omega2).structure_ok
