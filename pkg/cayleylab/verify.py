"""The built-in identity suite run by ``cayleylab verify``.

Structural checks decide the exit code. Checks marked as findings measure a
constant the literature quotes (the Lee normalization, the torsion chain, the
literal product convention); a mismatch there is reported as a warning.
"""
import itertools
import logging
import random
from fractions import Fraction
from typing import Callable, Optional

from . import lie
from . import product
from . import spin7
from .exterior import (
    FormOperator, KForm, Vector, basis_monomials, hodge, inner, random_form, rank, scalars_close, volume_form,
    wedge,
)
from .model import Check, TopologicalData, VerifyReport

logger = logging.getLogger(__name__)

RANDOM_SAMPLES = 20
COROLLARY_SAMPLES = 100
SEED = 0


def corrupted_phi() -> KForm:
    """Φ₀ with the sign of dx^{5678} reversed; breaks self-duality."""
    return spin7.cayley_form() - KForm.basis(spin7.N, 5, 6, 7, 8) * 2

def _check(name : str, fn : Callable[[], tuple[bool, str]], finding : bool = False) -> Check:
    passed, detail = fn()
    if not passed:
        log = logger.warning if finding else logger.error
        log('%s: %s', name, detail or 'failed')
    return Check(name, passed, detail, finding)

def _idempotent(op : FormOperator) -> bool:
    return (op @ op - op).is_zero()


def check_admissibility(phi : KForm) -> list[Check]:
    report = spin7.check_admissible(phi)
    B = spin7.star_wedge_operator(phi, 1)
    return [
        _check('*phi = phi', lambda: (report.self_dual, '')),
        _check('phi ^ phi = 14 vol', lambda: (scalars_close(report.phi_wedge_phi_coeff, 14),
                                               f'coefficient {report.phi_wedge_phi_coeff}')),
        _check('(A - 3I)(A + I) = 0 on Lambda^2', lambda: (report.spectrum_ok, '')),
        _check('rank(A + I), rank(A - 3I) = 7, 21', lambda: (report.ranks == (7, 21), f'ranks {report.ranks}')),
        _check('rank of gamma -> gamma ^ phi on Lambda^3 is 8',
               lambda: (rank(spin7.wedge_phi_operator(phi, 3)) == 8,
                        f'rank {rank(spin7.wedge_phi_operator(phi, 3))}, kernel 48 expected')),
        _check('rank(B) = 8', lambda: (rank(B) == 8, f'rank {rank(B)}')),
    ]

def check_projectors(phi : KForm, rng : random.Random) -> list[Check]:
    structure = spin7.get_structure(phi)
    identity2 = FormOperator.identity(spin7.N, 2, structure.A.is_exact)

    def lambda48_annihilated():
        bad = [g for g in (random_form(rng, spin7.N, 3) for _ in range(RANDOM_SAMPLES))
               if not wedge(spin7.project3_48(g, phi), phi).is_zero()]
        return not bad, f'{len(bad)} of {RANDOM_SAMPLES} random 3-forms leave a remainder'

    def lambda41_idempotent():
        samples = [random_form(rng, spin7.N, 4) for _ in range(RANDOM_SAMPLES)]
        ok = all(spin7.project4_1(spin7.project4_1(a, phi), phi).is_close(spin7.project4_1(a, phi)) for a in samples)
        return ok, ''

    return [
        _check('p7, p21 idempotent', lambda: (_idempotent(structure.P2_7) and _idempotent(structure.P2_21), '')),
        _check('p7 + p21 = id', lambda: ((structure.P2_7 + structure.P2_21 - identity2).is_zero(), '')),
        _check('p7 p21 = 0', lambda: ((structure.P2_7 @ structure.P2_21).is_zero(), '')),
        _check('A p7 = 3 p7', lambda: ((structure.A @ structure.P2_7 - structure.P2_7 * 3).is_zero(), '')),
        _check('project3_8 idempotent', lambda: (_idempotent(structure.P3_8), '')),
        _check('project3_48(gamma) ^ phi = 0', lambda48_annihilated),
        _check('project4_1 idempotent', lambda41_idempotent),
        _check('|B beta|^2 = c |beta|^2', lambda: (structure.b_isometry is not None, f'c = {structure.b_isometry}')),
    ]

def check_exterior() -> list[Check]:
    def involution():
        n = spin7.N
        for k in range(n + 1):
            sign = -1 if (k * (n - k)) % 2 else 1
            for mono in basis_monomials(n, k):
                e = KForm.basis(n, *mono)
                if hodge(hodge(e)) != e * sign:
                    return False, f'fails on dx^{mono}'
        return True, 'all 256 monomials'

    def metric():
        rng = random.Random(SEED)
        vol = volume_form(spin7.N)
        for k in range(spin7.N + 1):
            a, b = random_form(rng, spin7.N, k), random_form(rng, spin7.N, k)
            if wedge(a, hodge(b)) != vol * inner(a, b):
                return False, f'fails in degree {k}'
        return True, ''

    return [
        _check('** = (-1)^{k(n-k)} on every monomial', involution),
        _check('a ^ *b = <a, b> vol', metric),
    ]

def _random_vector(rng : random.Random) -> Vector:
    return Vector.of(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(spin7.N))

def check_corollary(phi : KForm, rng : random.Random) -> list[Check]:
    def holds(v, w):
        return scalars_close(*spin7.cayley_corollary_check(v, w, phi))

    def basis_pairs():
        pairs = list(itertools.combinations(range(1, spin7.N + 1), 2))
        good = sum(holds(Vector.basis(spin7.N, i), Vector.basis(spin7.N, j)) for i, j in pairs)
        return good == len(pairs), f'{good} of {len(pairs)} basis pairs'

    def random_pairs():
        good = sum(holds(_random_vector(rng), _random_vector(rng)) for _ in range(COROLLARY_SAMPLES))
        return good == COROLLARY_SAMPLES, f'{good} of {COROLLARY_SAMPLES} random pairs'

    return [
        _check('(i_v i_w phi)^2 ^ phi = 6 |v ^ w|^2 vol, basis', basis_pairs),
        _check('(i_v i_w phi)^2 ^ phi = 6 |v ^ w|^2 vol, random', random_pairs),
    ]

def check_lee(phi : KForm) -> list[Check]:
    lee = spin7.lee_map_constant(phi)
    chain = spin7.constant_chain_report(phi)
    torsion = spin7.characteristic_torsion_lcp(KForm.basis(spin7.N, 7), phi)
    return [
        _check('Lee map is a single multiple of the identity', lambda: (lee.single_constant, f'mu = {lee.mu}')),
        _check('Lee constant mu = 1', lambda: (lee.mu is not None and scalars_close(lee.mu, 1), f'measured mu = {lee.mu}'), finding=True),
        _check('T_48 = 0 for theta = e^7', lambda: (torsion.t48.is_zero(), '')),
        _check('6/7 *(T ^ phi) = theta', lambda: (chain.consistent, f'measured scale {chain.torsion_scale}'),
               finding=True),
    ]

def check_lawson() -> list[Check]:
    table = [
        (TopologicalData(0, 0, 0, True, True), True),
        (TopologicalData(0, 0, 1, True, True), False),
        (TopologicalData(16, 4, 0, True, True), True),
        (TopologicalData(0, 0, 0, False, True), False),
    ]
    ok = all(spin7.lawson_condition(t) == expected for t, expected in table)
    return [_check('Lawson condition truth table', lambda: (ok, ''))]

def check_models() -> list[Check]:
    L, su3 = lie.bundled_example_s3s3()
    candidates = product.reconcile_cayley()
    literal = product.literal_report()
    return [
        _check('su(2)+su(2): Jacobi', lambda: (lie.jacobi_check(L), '')),
        _check('su(2)+su(2): d^2 = 0', lambda: (lie.d_squared_zero(L), '')),
        _check('standard SU(3) data: omega ^ Omega_+- = 0',
               lambda: (wedge(su3.omega, su3.omega_plus).is_zero() and wedge(su3.omega, su3.omega_minus).is_zero(),
                        f'omega^3 = {6 * su3.volume_scale} vol6')),
        _check('product 4-form has an admissible convention', lambda: (bool(candidates), f'{len(candidates)} found')),
        _check('product 4-form as written is admissible',
               lambda: (literal.report.verdict, f'phi ^ phi = {literal.report.phi_wedge_phi_coeff} vol'),
               finding=True),
    ]

def run_identity_suite(phi : Optional[KForm] = None) -> VerifyReport:
    phi = phi if phi is not None else spin7.cayley_form()
    rng = random.Random(SEED)
    checks = (check_admissibility(phi) + check_projectors(phi, rng) + check_exterior()
              + check_corollary(phi, rng) + check_lee(phi) + check_lawson() + check_models())
    return VerifyReport(tuple(checks))

