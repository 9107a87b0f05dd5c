"""The Cayley structure on ℝ⁸.

Every operation takes an optional ``phi`` and falls back to the standard
Cayley form Φ₀. Operator matrices for a given φ are built once per process
and shared through :func:`get_structure`.
"""
import dataclasses
import logging
from fractions import Fraction
from typing import Optional

from . import linalg
from .errors import DegreeError, DimensionError
from .exterior import (
    FormOperator, KForm, Scalar, Vector, annihilating_check, flat, form_cache, hodge, hodge_inverse,
    inner, interior, norm2, operator_matrix, proportionality, rank, scalars_close,
    volume_form, wedge, wedge_all,
)
from .model import (
    AdmissibilityReport, ConstantChainReport, LeeConstantReport, TopologicalData, TorsionResult,
)

logger = logging.getLogger(__name__)

N = 8
PHI0_TERMS = (
    ((1, 2, 3, 4), 1), ((1, 2, 5, 6), 1), ((1, 2, 7, 8), 1), ((1, 3, 5, 7), 1),
    ((1, 3, 6, 8), -1), ((1, 4, 5, 8), -1), ((1, 4, 6, 7), -1),
    ((2, 3, 5, 8), -1), ((2, 3, 6, 7), -1), ((2, 4, 5, 7), -1), ((2, 4, 6, 8), 1),
    ((3, 4, 5, 6), 1), ((3, 4, 7, 8), 1), ((5, 6, 7, 8), 1),
)

# Constants as quoted: 7θ = −*(*dΦ∧Φ) and T = −(7/6)*(θ∧Φ).
LEE_CONSTANT = Fraction(7)
TORSION_CONSTANT = Fraction(-7, 6)
COROLLARY_CONSTANT = Fraction(6)


def cayley_form() -> KForm:
    return KForm.from_terms(N, 4, PHI0_TERMS)

def require_form(a : KForm, k : int, n : int = N, what : str = 'form') -> None:
    if a.n != n:
        raise DimensionError(f'{what} lives on R^{a.n}, expected R^{n}')
    if a.k != k:
        raise DegreeError(f'{what} has degree {a.k}, expected {k}')

def _phi(phi : Optional[KForm]) -> KForm:
    if phi is None:
        return cayley_form()
    require_form(phi, 4, what='phi')
    return phi


#### Operators

@form_cache(maxsize=64)
def wedge_phi_operator(phi : KForm, k : int) -> FormOperator:
    """γ ↦ γ∧φ on Λᵏ."""
    return operator_matrix(lambda g: wedge(g, phi), N, k, k + 4, exact=phi.is_exact)

@form_cache(maxsize=64)
def star_wedge_operator(phi : KForm, k : int) -> FormOperator:
    """α ↦ *(α∧φ), Λᵏ → Λ⁴⁻ᵏ."""
    return operator_matrix(lambda a: hodge(wedge(a, phi)), N, k, 4 - k, exact=phi.is_exact)

def conjugate_by_hodge(op : FormOperator) -> FormOperator:
    """The operator * ∘ op ∘ *⁻¹ between the Hodge-dual spaces."""
    return operator_matrix(lambda x: hodge(op(hodge_inverse(x))),
                           op.n, op.n - op.source, op.n - op.target, exact=op.is_exact)

def _orthogonal_projector(op : FormOperator) -> FormOperator:
    """Projector onto the image of op, M (MᵀM)⁻¹ Mᵀ."""
    ncols = op.shape[1]
    left_inverse = linalg.pseudo_inverse(op.matrix, ncols)
    return FormOperator(op.n, op.target, op.target, linalg.matmul(op.matrix, left_inverse))

def _isometry_constant(op : FormOperator) -> Optional[Scalar]:
    """c with |op x|² = c|x|² for all x, or None when op is not a scaled isometry."""
    rows, cols = op.shape
    gram = [[sum((op.matrix[r][i] * op.matrix[r][j] for r in range(rows)), start=op.matrix[0][0] * 0)
             for j in range(cols)] for i in range(cols)]
    c = gram[0][0]
    for i in range(cols):
        for j in range(cols):
            if not scalars_close(gram[i][j], c if i == j else c * 0):
                return None
    return c


@dataclasses.dataclass(frozen=True)
class CayleyStructure(object):
    phi : KForm
    vol : KForm
    A : FormOperator
    B : FormOperator
    P2_7 : FormOperator
    P2_21 : FormOperator
    P3_8 : FormOperator
    P5_8 : FormOperator
    P6_7 : FormOperator
    b_isometry : Optional[Scalar]
    phi_norm2 : Scalar

    @staticmethod
    def build(phi : KForm) -> 'CayleyStructure':
        require_form(phi, 4, what='phi')
        logger.debug('building operator matrices for a %s 4-form with %d terms',
                     'exact' if phi.is_exact else 'float', len(phi.terms))
        A = star_wedge_operator(phi, 2)
        B = star_wedge_operator(phi, 1)
        identity = FormOperator.identity(N, 2, A.is_exact)
        quarter = Fraction(1, 4)
        p2_7 = (A + identity) * quarter
        p2_21 = (identity * 3 - A) * quarter
        p3_8 = _orthogonal_projector(B)
        return CayleyStructure(
            phi=phi,
            vol=volume_form(N),
            A=A,
            B=B,
            P2_7=p2_7,
            P2_21=p2_21,
            P3_8=p3_8,
            P5_8=conjugate_by_hodge(p3_8),
            P6_7=conjugate_by_hodge(p2_7),
            b_isometry=_isometry_constant(B),
            phi_norm2=norm2(phi),
        )

@form_cache(maxsize=32)
def _structure(phi : KForm) -> CayleyStructure:
    return CayleyStructure.build(phi)

def get_structure(phi : Optional[KForm] = None) -> CayleyStructure:
    return _structure(_phi(phi))


#### Admissibility

@form_cache(maxsize=256)
def _check_admissible(phi : KForm) -> AdmissibilityReport:
    self_dual = hodge(phi).is_close(phi)
    coeff = wedge(phi, phi).coeff(*range(1, N + 1))
    A = star_wedge_operator(phi, 2)
    spectrum_ok = annihilating_check(A, [3, -1])
    ranks = (rank(A.shift(-1)), rank(A.shift(3)))
    verdict = self_dual and scalars_close(coeff, 14) and spectrum_ok and ranks == (7, 21)
    return AdmissibilityReport(self_dual, coeff, spectrum_ok, ranks, verdict)

def check_admissible(phi : KForm) -> AdmissibilityReport:
    require_form(phi, 4, what='phi')
    return _check_admissible(phi)


#### Projections

def project2_7(alpha : KForm, phi : Optional[KForm] = None) -> KForm:
    require_form(alpha, 2)
    return get_structure(phi).P2_7(alpha)

def project2_21(alpha : KForm, phi : Optional[KForm] = None) -> KForm:
    require_form(alpha, 2)
    return get_structure(phi).P2_21(alpha)

def lambda3_8(beta : KForm, phi : Optional[KForm] = None) -> KForm:
    require_form(beta, 1)
    return get_structure(phi).B(beta)

def project3_8(gamma : KForm, phi : Optional[KForm] = None) -> KForm:
    require_form(gamma, 3)
    return get_structure(phi).P3_8(gamma)

def project3_48(gamma : KForm, phi : Optional[KForm] = None) -> KForm:
    return gamma - project3_8(gamma, phi)

def project4_selfdual(alpha : KForm) -> KForm:
    require_form(alpha, 4)
    return (alpha + hodge(alpha)) * Fraction(1, 2)

def project4_antiselfdual(alpha : KForm) -> KForm:
    require_form(alpha, 4)
    return (alpha - hodge(alpha)) * Fraction(1, 2)

def project4_1(alpha : KForm, phi : Optional[KForm] = None) -> KForm:
    require_form(alpha, 4)
    structure = get_structure(phi)
    return structure.phi * (inner(alpha, structure.phi) / structure.phi_norm2)

def dual_component_transport(a : KForm) -> KForm:
    """*a; the Hodge star maps Λᵏ_l isometrically onto Λ⁸⁻ᵏ_l."""
    return hodge(a)

def project5_8(a : KForm, phi : Optional[KForm] = None) -> KForm:
    require_form(a, 5)
    return get_structure(phi).P5_8(a)

def project5_48(a : KForm, phi : Optional[KForm] = None) -> KForm:
    return a - project5_8(a, phi)

def project6_7(a : KForm, phi : Optional[KForm] = None) -> KForm:
    require_form(a, 6)
    return get_structure(phi).P6_7(a)

def project6_21(a : KForm, phi : Optional[KForm] = None) -> KForm:
    return a - project6_7(a, phi)

PROJECTIONS = {
    '2_7': project2_7,
    '2_21': project2_21,
    '3_8': project3_8,
    '3_48': project3_48,
    '4_sd': lambda a, phi=None: project4_selfdual(a),
    '4_asd': lambda a, phi=None: project4_antiselfdual(a),
    '4_1': project4_1,
    '5_8': project5_8,
    '5_48': project5_48,
    '6_7': project6_7,
    '6_21': project6_21,
}


#### Lee form and torsion

def lee_form(phi : KForm, dphi : KForm) -> KForm:
    """θ = −(1/7)·*(*dφ∧φ)."""
    require_form(phi, 4, what='phi')
    require_form(dphi, 5, what='dphi')
    return hodge(wedge(hodge(dphi), phi)) * (-1 / LEE_CONSTANT)

def lee_map_constant(phi : Optional[KForm] = None) -> LeeConstantReport:
    """Measures μ in lee_form(φ, θ∧φ) = μ·θ over the 8 basis 1-forms."""
    phi = _phi(phi)
    values = tuple(
        proportionality(lee_form(phi, wedge(KForm.basis(N, i), phi)), KForm.basis(N, i))
        for i in range(1, N + 1))
    first = values[0]
    single = first is not None and all(v is not None and scalars_close(v, first) for v in values)
    return LeeConstantReport(first if single else None, values, single)

def characteristic_torsion_lcp(theta : KForm, phi : Optional[KForm] = None) -> TorsionResult:
    require_form(theta, 1, what='theta')
    phi = _phi(phi)
    T = hodge(wedge(theta, phi)) * TORSION_CONSTANT
    recovered = hodge(wedge(T, phi)) * (6 / LEE_CONSTANT)
    degenerate = theta.is_zero()
    scale = None if degenerate else proportionality(recovered, theta)
    if degenerate:
        logger.debug('theta = 0, torsion scale left undefined')
    return TorsionResult(
        T=T,
        theta_recovered=recovered,
        scale=scale,
        t8=project3_8(T, phi),
        t48=project3_48(T, phi),
        degenerate=degenerate,
    )

def constant_chain_report(phi : Optional[KForm] = None) -> ConstantChainReport:
    """Feeds θ = e⁷ through the torsion formula and back through 6*(T∧Φ)."""
    phi = _phi(phi)
    mu = lee_map_constant(phi).mu
    scale = characteristic_torsion_lcp(KForm.basis(N, 7), phi).scale
    consistent = mu is not None and scale is not None and scalars_close(mu, 1) and scalars_close(scale, 1)
    if not consistent:
        logger.warning('quoted Lee/torsion constants disagree: mu = %s, torsion scale = %s', mu, scale)
    return ConstantChainReport(mu, scale, consistent)


#### Pointwise identities

def cayley_corollary_check(v : Vector, w : Vector, phi : Optional[KForm] = None) -> tuple[Scalar, Scalar]:
    """Both sides of (ι_v ι_w φ)∧(ι_v ι_w φ)∧φ = 6|v∧w|² vol."""
    phi = _phi(phi)
    if v.n != N or w.n != N:
        raise DimensionError(f'corollary needs vectors in R^{N}')
    x = interior(v, interior(w, phi))
    lhs = wedge_all(x, x, phi).coeff(*range(1, N + 1))
    rhs = COROLLARY_CONSTANT * norm2(wedge(flat(v), flat(w)))
    return lhs, rhs

def lawson_condition(t : TopologicalData) -> bool:
    if not (t.w1_vanishes and t.w2_vanishes):
        return False
    base = t.p1_squared - 4 * t.p2
    return base + 8 * t.euler == 0 or base - 8 * t.euler == 0
