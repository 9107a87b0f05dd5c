"""Lie algebras by structure constants and their Chevalley–Eilenberg differential.

Sign convention: de^k = −Σ_{i<j} c^k_{ij} e^i∧e^j, the dual of the bracket.
"""
import dataclasses
import functools
import itertools
import logging
from fractions import Fraction
from typing import Any, Iterable

from . import product
from .errors import DimensionError, JacobiError, ParseError
from .exterior import KForm, Scalar, Vector, to_scalar, wedge_all
from .model import ExampleReport

logger = logging.getLogger(__name__)

Bracket = tuple[int, int, int, Scalar]


@dataclasses.dataclass(frozen=True)
class LieAlgebra(object):
    """[e_i, e_j] = Σ_k c^k_{ij} e_k, stored as (i, j, k, c) with i < j, sorted."""
    n : int
    constants : tuple[Bracket, ...] = ()
    name : str = dataclasses.field(default='', compare=False)

    @staticmethod
    def from_brackets(n : int, entries : Iterable[tuple[int, int, int, Any]], name : str = '') -> 'LieAlgebra':
        if n < 1:
            raise DimensionError(f'Lie algebra of dimension {n}')
        seen = set()
        constants = []
        for i, j, k, c in entries:
            for idx in (i, j, k):
                if not 1 <= idx <= n:
                    raise DimensionError(f'index {idx} outside 1..{n}')
            if i >= j:
                raise ParseError(f'bracket [e_{i}, e_{j}] must have i < j')
            if (i, j, k) in seen:
                raise ParseError(f'duplicate constant for [e_{i}, e_{j}] along e_{k}')
            seen.add((i, j, k))
            c = to_scalar(c)
            if c != 0:
                constants.append((i, j, k, c))
        return LieAlgebra(n, tuple(sorted(constants)), name)

    @staticmethod
    def abelian(n : int) -> 'LieAlgebra':
        return LieAlgebra(n, (), f'R^{n}')

    @functools.cached_property
    def table(self) -> dict[tuple[int, int], dict[int, Scalar]]:
        out : dict[tuple[int, int], dict[int, Scalar]] = {}
        for i, j, k, c in self.constants:
            out.setdefault((i, j), {})[k] = c
            out.setdefault((j, i), {})[k] = -c
        return out

    def bracket_basis(self, i : int, j : int) -> dict[int, Scalar]:
        return self.table.get((i, j), {})

    def bracket(self, u : Vector, v : Vector) -> Vector:
        if u.n != self.n or v.n != self.n:
            raise DimensionError(f'bracket of vectors in R^{u.n}, R^{v.n} on a {self.n}-dimensional algebra')
        out = [Fraction(0)] * self.n
        for (i, j), column in self.table.items():
            weight = u[i] * v[j]
            if weight:
                for k, c in column.items():
                    out[k - 1] += weight * c
        return Vector.of(out)

    def direct_sum(self, other : 'LieAlgebra') -> 'LieAlgebra':
        shifted = [(i + self.n, j + self.n, k + self.n, c) for i, j, k, c in other.constants]
        name = f'{self.name or "g"}+{other.name or "h"}'
        return LieAlgebra(self.n + other.n, tuple(sorted(self.constants + tuple(shifted))), name)

    @functools.cached_property
    def differentials(self) -> tuple[KForm, ...]:
        """de¹..deⁿ."""
        terms : dict[int, list] = {k: [] for k in range(1, self.n + 1)}
        for i, j, k, c in self.constants:
            terms[k].append(((i, j), -c))
        return tuple(KForm.from_terms(self.n, 2, terms[k]) for k in range(1, self.n + 1))

def su2() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, [(1, 2, 3, 1), (2, 3, 1, 1), (1, 3, 2, -1)], name='su(2)')


#### Jacobi and d

def _compose(L : LieAlgebra, outer_left : dict[int, Scalar], k : int) -> dict[int, Scalar]:
    """[Σ a_m e_m, e_k]."""
    out : dict[int, Scalar] = {}
    for m, a in outer_left.items():
        for t, c in L.bracket_basis(m, k).items():
            out[t] = out.get(t, 0) + a * c
    return out

@functools.lru_cache(maxsize=64)
def jacobi_check(L : LieAlgebra) -> bool:
    for i, j, k in itertools.combinations(range(1, L.n + 1), 3):
        total : dict[int, Scalar] = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for t, x in _compose(L, L.bracket_basis(a, b), c).items():
                total[t] = total.get(t, 0) + x
        if any(x != 0 for x in total.values()):
            logger.debug('Jacobi fails on (e_%d, e_%d, e_%d)', i, j, k)
            return False
    return True

def ce_differential(L : LieAlgebra, a : KForm, check : bool = True) -> KForm:
    """d extended from the generators as a degree +1 antiderivation."""
    if a.n != L.n:
        raise DimensionError(f'form on R^{a.n} against a {L.n}-dimensional algebra')
    if check and not jacobi_check(L):
        raise JacobiError(f'{L.name or "algebra"} fails the Jacobi identity; d is not a differential')
    if a.k == 0 or a.k >= a.n:
        return KForm.zero(a.n, a.k + 1)
    parts = []
    for mono, c in a.terms:
        for pos, index in enumerate(mono):
            de = L.differentials[index - 1]
            if de.is_zero():
                continue
            left = KForm.basis(a.n, *mono[:pos])
            right = KForm.basis(a.n, *mono[pos + 1:])
            parts.append(wedge_all(left, de, right) * ((-1) ** pos * c))
    return sum(parts[1:], start=parts[0]) if parts else KForm.zero(a.n, a.k + 1)

def d_squared_zero(L : LieAlgebra) -> bool:
    return all(ce_differential(L, ce_differential(L, KForm.basis(L.n, k), check=False), check=False).is_zero()
               for k in range(1, L.n + 1))


#### S³ × S³

# Orthonormal frame E1, F1, E2, F2, E3, F3 of su(2) ⊕ su(2) with
# [E_i, E_j] = E_k, [E_i, F_j] = F_k, [F_i, F_j] = E_k / 3 for (i, j, k) cyclic.
S3S3_BRACKETS = (
    (1, 3, 5, 1), (3, 5, 1, 1), (1, 5, 3, -1),
    (2, 4, 5, Fraction(1, 3)), (4, 6, 1, Fraction(1, 3)), (2, 6, 3, Fraction(-1, 3)),
    (1, 4, 6, 1), (1, 6, 4, -1), (2, 3, 6, 1), (3, 6, 2, 1), (2, 5, 4, -1), (4, 5, 2, 1),
)

def bundled_example_s3s3() -> tuple[LieAlgebra, product.SU3Data]:
    """su(2) ⊕ su(2) and the left-invariant SU(3) candidate in the frame above."""
    return LieAlgebra.from_brackets(6, S3S3_BRACKETS, name='su(2)+su(2)'), product.SU3Data.standard()

def example_report(L : LieAlgebra, su3 : product.SU3Data) -> ExampleReport:
    """CE differential of ω, Ω± followed by both nearly Kähler checks."""
    jacobi = jacobi_check(L)
    d = functools.partial(ce_differential, L, check=False)
    d_omega, d_plus, d_minus = d(su3.omega), d(su3.omega_plus), d(su3.omega_minus)
    return ExampleReport(
        jacobi=jacobi,
        d_squared_zero=d_squared_zero(L),
        d_omega=d_omega,
        d_omega_plus=d_plus,
        d_omega_minus=d_minus,
        nearly_kahler=product.nearly_kahler_check(su3, d_omega, d_minus),
        phase=product.nearly_kahler_phase_check(su3, d_omega, d_plus, d_minus),
    )
