"""Lee-form solving and the Fernández classification of a Spin(7)-structure.

A classification needs dθ and d*θ for the Lee form, which only the ambient
model can supply. Callers pass a provider: a callable taking θ and returning
(dθ, d*θ), either entry None when the model cannot evaluate it.
"""
import logging
from typing import Callable, Optional

from . import linalg
from . import spin7
from .errors import AdmissibilityError, DimensionError
from .exterior import KForm, Scalar, form_cache, hodge, norm2, scalar_is_zero, scalars_close, wedge
from .lie import LieAlgebra, ce_differential
from .model import ClassificationReport, Evidence, FernandezClass
from .product import BASE, ProductModel, build_product_phi, d_product_phi

logger = logging.getLogger(__name__)

Provider = Callable[[KForm], tuple[Optional[KForm], Optional[KForm]]]


#### Lee form by least squares

@form_cache(maxsize=64)
def _lee_system(phi : KForm) -> tuple[linalg.Rows, linalg.Rows]:
    """θ ↦ θ∧φ as a 56×8 matrix with its left inverse."""
    op = spin7.wedge_phi_operator(phi, 1)
    return op.matrix, linalg.pseudo_inverse(op.matrix, op.shape[1])

def solve_lee(dphi : KForm, phi : KForm) -> tuple[KForm, Scalar]:
    """Least-squares θ for dφ = θ∧φ, and the squared residual |dφ − θ∧φ|²."""
    spin7.require_form(phi, 4, what='phi')
    spin7.require_form(dphi, 5, what='dphi')
    _, left_inverse = _lee_system(phi)
    theta = KForm.from_vector(phi.n, 1, linalg.mat_vec(left_inverse, dphi.vector()))
    return theta, norm2(dphi - wedge(theta, phi))


#### d on the Lee form

def no_differentials(theta : KForm) -> tuple[Optional[KForm], Optional[KForm]]:
    return None, None

def ce_lee_differentials(L : LieAlgebra) -> Provider:
    def provider(theta):
        return ce_differential(L, theta), ce_differential(L, hodge(theta))
    return provider

def product_lee_differentials(m : ProductModel) -> Provider:
    """dθ and d*θ for θ ∈ span{e⁷, e⁸}; components along N are out of reach of the formal data."""
    def provider(theta):
        theta = m.flipped(theta)
        if any(i <= BASE for (i,), _ in theta.terms):
            logger.debug('theta has components along N, dtheta left undetermined')
            return None, None
        # *θ is a top form of N wedged with e⁷ or e⁸, and the top form of N is closed.
        return KForm.zero(spin7.N, 2), KForm.zero(spin7.N, 7)
    return provider


#### Classification

def _failed_checks(report) -> str:
    failed = []
    if not report.self_dual:
        failed.append('*phi != phi')
    if not scalars_close(report.phi_wedge_phi_coeff, 14):
        failed.append(f'phi^phi = {report.phi_wedge_phi_coeff} vol')
    if not report.spectrum_ok:
        failed.append('(A - 3I)(A + I) != 0')
    if report.ranks != (7, 21):
        failed.append(f'eigenspace ranks {report.ranks}')
    return ', '.join(failed)

def classify(phi : KForm, dphi : KForm, provider : Provider = no_differentials,
             tol : Optional[float] = None) -> ClassificationReport:
    """W0 iff dφ = 0; W1 iff θ = 0; W2 iff dφ = θ∧φ and dθ = 0; otherwise Mixed."""
    admissible = spin7.check_admissible(phi)
    if not admissible.verdict:
        raise AdmissibilityError(f'phi fails the admissibility conditions: {_failed_checks(admissible)}')
    spin7.require_form(dphi, 5, what='dphi')
    evidence = [Evidence('admissible', True, 'necessary conditions only')]

    if dphi.is_zero(tol):
        evidence.append(Evidence('dphi = 0', True))
        zero = KForm.zero(phi.n, 1)
        return ClassificationReport(FernandezClass.W0, zero, norm2(dphi), True, True, None, tuple(evidence))
    evidence.append(Evidence('dphi = 0', False))

    theta = spin7.lee_form(phi, dphi)
    residual = norm2(dphi - wedge(theta, phi))
    d_theta, d_star_theta = provider(theta)
    dtheta_zero = None if d_theta is None else d_theta.is_zero(tol)
    gauduchon = None if d_star_theta is None else d_star_theta.is_zero(tol)
    lcp = scalar_is_zero(residual, tol)
    evidence.append(Evidence('theta = 0', theta.is_zero(tol)))
    evidence.append(Evidence('dphi = theta ^ phi', lcp, f'residual {residual}'))
    evidence.append(Evidence('dtheta = 0', bool(dtheta_zero), 'not determined' if dtheta_zero is None else ''))
    evidence.append(Evidence('d*theta = 0', bool(gauduchon), 'not determined' if gauduchon is None else ''))

    torsion = None
    if theta.is_zero(tol):
        cls = FernandezClass.W1
    elif lcp and dtheta_zero:
        cls = FernandezClass.W2
        torsion = spin7.characteristic_torsion_lcp(theta, phi)
    else:
        cls = FernandezClass.MIXED
    logger.debug('classified as %s (residual %s, dtheta_zero %s)', cls, residual, dtheta_zero)
    return ClassificationReport(cls, theta, residual, dtheta_zero, gauduchon, torsion, tuple(evidence))

def classify_lie(L : LieAlgebra, phi : Optional[KForm] = None) -> ClassificationReport:
    """φ (Φ₀ by default) as a left-invariant form; 6-dimensional algebras are extended by ℝ²."""
    if L.n == BASE:
        L = L.direct_sum(LieAlgebra.abelian(2))
    if L.n != spin7.N:
        raise DimensionError(f'{L.name or "algebra"} has dimension {L.n}; classification needs 6 or 8')
    phi = phi if phi is not None else spin7.cayley_form()
    dphi = ce_differential(L, phi)
    return classify(phi, dphi, ce_lee_differentials(L))

def classify_product(m : ProductModel) -> ClassificationReport:
    return classify(build_product_phi(m), d_product_phi(m), product_lee_differentials(m))
