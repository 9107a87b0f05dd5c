"""SU(3)-structures on N⁶ and the Spin(7) ansatz on N × ℝ².

The 4-form is

    Φ = s₁·ω∧e⁷⁸ + s₂·Ω₊∧u♭ + s₃·Ω₋∧v♭ + s₄·c·ω∧ω

with u = cos γ e₇ + sin γ e₈ and v = −sin γ e₇ + cos γ e₈. The pairing of
Ω± with u♭, v♭ and an optional reflection of one frame index are part of
the Convention; reconcile_cayley searches them for admissible choices.
"""
import dataclasses
import functools
import itertools
import logging
import math
from fractions import Fraction
from typing import Any, Optional

from . import spin7
from .errors import CompatibilityError, DegreeError, DimensionError
from .exterior import (
    KForm, Scalar, flip_index, hodge, inner, norm2, proportionality, scalar_is_zero, scalars_close,
    to_scalar, wedge, wedge_all,
)
from .model import (
    Convention, Differentials, NearlyKahlerResult, Pairing, PhaseCheckResult, ReconcileCandidate,
)

logger = logging.getLogger(__name__)

N = 8
BASE = 6

# The product 4-form with all summands positive and ω∧ω at coefficient 1.
LITERAL = Convention((1, 1, 1, 1), Fraction(1), Pairing.STANDARD, None)

RECONCILE_COEFFS = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2))


@dataclasses.dataclass(frozen=True)
class SU3Data(object):
    omega : KForm
    omega_plus : KForm
    omega_minus : KForm

    def __post_init__(self):
        for name, form, k in (('omega', self.omega, 2), ('omega_plus', self.omega_plus, 3),
                              ('omega_minus', self.omega_minus, 3)):
            if form.n != BASE:
                raise DimensionError(f'{name} lives on R^{form.n}, SU(3) data needs R^{BASE}')
            if form.k != k:
                raise DegreeError(f'{name} has degree {form.k}, expected {k}')
        if self.omega_plus.is_zero() or self.omega_minus.is_zero():
            raise CompatibilityError('omega_plus and omega_minus must be nonzero')
        if not wedge(self.omega, self.omega_plus).is_zero():
            raise CompatibilityError('omega ^ omega_plus != 0')
        if not wedge(self.omega, self.omega_minus).is_zero():
            raise CompatibilityError('omega ^ omega_minus != 0')
        if wedge_all(self.omega, self.omega, self.omega).is_zero():
            raise CompatibilityError('omega^3 = 0, omega is degenerate')

    @staticmethod
    def standard() -> 'SU3Data':
        return _standard()

    @property
    def is_exact(self) -> bool:
        return self.omega.is_exact and self.omega_plus.is_exact and self.omega_minus.is_exact

    @property
    def volume_scale(self) -> Scalar:
        """λ with ω³ = 6λ·e¹²³⁴⁵⁶."""
        return wedge_all(self.omega, self.omega, self.omega).coeff(*range(1, BASE + 1)) / 6

    def to_float(self) -> 'SU3Data':
        return SU3Data(self.omega.to_float(), self.omega_plus.to_float(), self.omega_minus.to_float())

    def embedded(self) -> tuple[KForm, KForm, KForm]:
        return self.omega.embed(N), self.omega_plus.embed(N), self.omega_minus.embed(N)

@functools.lru_cache(maxsize=1)
def _standard() -> SU3Data:
    return SU3Data(
        omega=KForm.from_terms(BASE, 2, [((1, 2), 1), ((3, 4), 1), ((5, 6), 1)]),
        omega_plus=KForm.from_terms(BASE, 3, [((1, 3, 5), 1), ((1, 4, 6), -1), ((2, 3, 6), -1), ((2, 4, 5), -1)]),
        omega_minus=KForm.from_terms(BASE, 3, [((1, 3, 6), 1), ((1, 4, 5), 1), ((2, 3, 5), 1), ((2, 4, 6), -1)]),
    )


def angle_pair(value : Any) -> tuple[Scalar, Scalar]:
    """(cos, sin) from a float angle, or an exact pair checked against c² + s² = 1."""
    if isinstance(value, float):
        return math.cos(value), math.sin(value)
    c, s = (to_scalar(x) for x in value)
    if not scalars_close(c * c + s * s, Fraction(1)):
        raise CompatibilityError(f'({c}, {s}) is not on the unit circle')
    return c, s

def _unit_1form(c : Scalar, s : Scalar, first : int = 7, second : int = 8) -> KForm:
    return KForm.from_terms(N, 1, [((first,), c), ((second,), s)])


@dataclasses.dataclass(frozen=True)
class ProductModel(object):
    su3 : SU3Data
    convention : Convention = Convention()
    gamma : tuple[Scalar, Scalar] = (Fraction(1), Fraction(0))
    beta : tuple[Scalar, Scalar] = (Fraction(1), Fraction(0))
    diff : Differentials = Differentials()

    def __post_init__(self):
        angle_pair(self.gamma)
        angle_pair(self.beta)
        if len(self.convention.signs) != 4 or any(s not in (1, -1) for s in self.convention.signs):
            raise CompatibilityError(f'signs must be four +-1 values, got {self.convention.signs}')
        if self.convention.flip is not None and not 1 <= self.convention.flip <= N:
            raise DimensionError(f'flip index {self.convention.flip} outside 1..{N}')

    @staticmethod
    def from_angles(su3 : SU3Data, convention : Convention, gamma : float, beta : float,
                    diff : Differentials = Differentials()) -> 'ProductModel':
        """Float-mode model; every scalar is converted to float."""
        convention = dataclasses.replace(convention, coeff_c=float(convention.coeff_c))
        diff = Differentials(*(float(x) for x in diff.as_tuple()))
        return ProductModel(su3.to_float(), convention, angle_pair(float(gamma)), angle_pair(float(beta)), diff)

    @property
    def is_exact(self) -> bool:
        return self.su3.is_exact

    def to_float(self) -> 'ProductModel':
        return ProductModel(
            self.su3.to_float(),
            dataclasses.replace(self.convention, coeff_c=float(self.convention.coeff_c)),
            tuple(float(x) for x in self.gamma),
            tuple(float(x) for x in self.beta),
            Differentials(*(float(x) for x in self.diff.as_tuple())),
        )

    def with_diff(self, diff : Differentials) -> 'ProductModel':
        return dataclasses.replace(self, diff=diff)

    @property
    def u_flat(self) -> KForm:
        c, s = self.gamma
        return _unit_1form(c, s)

    @property
    def v_flat(self) -> KForm:
        c, s = self.gamma
        return _unit_1form(-s, c)

    @property
    def theta_beta(self) -> KForm:
        c, s = self.beta
        return _unit_1form(c, s)

    def flipped(self, a : KForm) -> KForm:
        return flip_index(a, self.convention.flip) if self.convention.flip else a

def _paired(m : ProductModel, plus : Any, minus : Any) -> tuple[Any, Any]:
    """The (Ω₊-slot, Ω₋-slot) order under the model's pairing."""
    if m.convention.pairing == Pairing.STANDARD:
        return plus, minus
    return minus, plus

def build_product_phi(m : ProductModel) -> KForm:
    omega, plus, minus = m.su3.embedded()
    s1, s2, s3, s4 = m.convention.signs
    first, second = _paired(m, plus, minus)
    e78 = KForm.basis(N, 7, 8)
    phi = (wedge(omega, e78) * s1
           + wedge(first, m.u_flat) * s2
           + wedge(second, m.v_flat) * s3
           + wedge(omega, omega) * (s4 * m.convention.coeff_c))
    return m.flipped(phi)

def d_product_phi(m : ProductModel) -> KForm:
    """dΦ by Leibniz from dω = pΩ₊ + qΩ₋, dΩ₊ = rω∧ω, dΩ₋ = sω∧ω and de⁷ = de⁸ = 0.

    d(ω∧ω) = 2dω∧ω is kept. A flip reflects a frame index; it commutes with d.
    """
    omega, plus, minus = m.su3.embedded()
    p, q, r, s = m.diff.as_tuple()
    s1, s2, s3, s4 = m.convention.signs
    omega2 = wedge(omega, omega)
    d_omega = plus * p + minus * q
    d_first, d_second = _paired(m, omega2 * r, omega2 * s)
    dphi = (wedge(d_omega, KForm.basis(N, 7, 8)) * s1
            + wedge(d_first, m.u_flat) * s2
            + wedge(d_second, m.v_flat) * s3
            + wedge(d_omega, omega) * (2 * s4 * m.convention.coeff_c))
    return m.flipped(dphi)

def induced_differentials(m : ProductModel) -> tuple[KForm, KForm, KForm]:
    """(dω, dΩ₊, dΩ₋) on N⁶ from the formal coefficients."""
    su3 = m.su3
    p, q, r, s = m.diff.as_tuple()
    omega2 = wedge(su3.omega, su3.omega)
    return su3.omega_plus * p + su3.omega_minus * q, omega2 * r, omega2 * s


#### Reconciling the product 4-form with Φ₀

def _quick_reject(phi : KForm) -> bool:
    if not scalars_close(wedge(phi, phi).coeff(*range(1, N + 1)), Fraction(14)):
        return True
    return not hodge(phi).is_close(phi)

def candidate_conventions(flips : bool = True) -> list[Convention]:
    flip_choices = (None, *range(1, N + 1)) if flips else (None,)
    return [
        Convention(signs, coeff, pairing, flip)
        for flip in flip_choices
        for pairing in Pairing
        for coeff in RECONCILE_COEFFS
        for signs in itertools.product((1, -1), repeat=4)
    ]

@functools.lru_cache(maxsize=8)
def reconcile_cayley(su3 : Optional[SU3Data] = None, flips : bool = True) -> tuple[ReconcileCandidate, ...]:
    """Every convention whose Φ (γ = 0) passes the necessary admissibility checks."""
    su3 = su3 or SU3Data.standard()
    found = []
    tried = 0
    for convention in candidate_conventions(flips):
        tried += 1
        phi = build_product_phi(ProductModel(su3, convention))
        if _quick_reject(phi):
            continue
        report = spin7.check_admissible(phi)
        if report.verdict:
            found.append(ReconcileCandidate(convention, report))
    logger.debug('reconcile: %d conventions tried, %d admissible', tried, len(found))
    if not any(c.convention == LITERAL for c in found):
        logger.warning('product 4-form with the literal convention (%s) is not admissible', LITERAL.label())
    return tuple(found)

def literal_report(su3 : Optional[SU3Data] = None) -> ReconcileCandidate:
    phi = build_product_phi(ProductModel(su3 or SU3Data.standard(), LITERAL))
    return ReconcileCandidate(LITERAL, spin7.check_admissible(phi))


#### Nearly Kähler conditions

def nearly_kahler_check(su3 : SU3Data, d_omega : KForm, d_omega_minus : KForm,
                        tol : Optional[float] = None) -> NearlyKahlerResult:
    """dω = 12a·Ω₊ and dΩ₋ = a·ω∧ω for one constant a."""
    a = inner(d_omega, su3.omega_plus) / (12 * norm2(su3.omega_plus))
    if not d_omega.is_close(su3.omega_plus * (12 * a), tol):
        return NearlyKahlerResult(False, None)
    if not d_omega_minus.is_close(wedge(su3.omega, su3.omega) * a, tol):
        return NearlyKahlerResult(False, None)
    return NearlyKahlerResult(True, a)

def _span_coefficients(target : KForm, first : KForm, second : KForm,
                       tol : Optional[float]) -> Optional[tuple[Scalar, Scalar]]:
    """(x, y) with target = x·first + y·second, or None."""
    g11, g12, g22 = norm2(first), inner(first, second), norm2(second)
    b1, b2 = inner(target, first), inner(target, second)
    det = g11 * g22 - g12 * g12
    if scalar_is_zero(det, tol):
        return None
    x = (b1 * g22 - b2 * g12) / det
    y = (b2 * g11 - b1 * g12) / det
    if not target.is_close(first * x + second * y, tol):
        return None
    return x, y

def nearly_kahler_phase_check(su3 : SU3Data, d_omega : KForm, d_omega_plus : KForm, d_omega_minus : KForm,
                              tol : Optional[float] = None) -> PhaseCheckResult:
    """Nearly Kähler equations after rotating Ω by the phase that puts dω along the real part.

    With dω = xΩ₊ + yΩ₋ the conditions are x·dΩ₊ + y·dΩ₋ = 0 and
    x·dΩ₋ − y·dΩ₊ = κ'·ω∧ω; the ratio κ'/(x² + y²) is 1/12 when
    dω = 12aΩ₊ and dΩ₋ = aω∧ω.
    """
    span = _span_coefficients(d_omega, su3.omega_plus, su3.omega_minus, tol)
    if span is None:
        return PhaseCheckResult(False, None, None, None, False)
    x, y = span
    length2 = x * x + y * y
    if scalar_is_zero(length2, tol):
        return PhaseCheckResult(False, x, y, None, False)
    if not (d_omega_plus * x + d_omega_minus * y).is_zero(tol):
        return PhaseCheckResult(False, x, y, None, False)
    kappa = proportionality(d_omega_minus * x - d_omega_plus * y, wedge(su3.omega, su3.omega), tol)
    if kappa is None:
        return PhaseCheckResult(False, x, y, None, False)
    ratio = kappa / length2
    return PhaseCheckResult(True, x, y, ratio, scalars_close(ratio, Fraction(1, 12), tol))
