"""Sparse exterior algebra over an oriented orthonormal frame e¹..eⁿ.

Forms are immutable maps from strictly increasing index tuples to scalars.
Scalars are Fraction in exact mode and float in float mode; the two never
meet inside one operation.
"""
import dataclasses
import functools
import itertools
import logging
import random
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Sequence, TypeAlias, Union

from . import constants
from . import linalg
from .errors import DegreeError, DimensionError, OperatorError, ParseError, ScalarModeError

logger = logging.getLogger(__name__)

Scalar : TypeAlias = Union[Fraction, float]
Monomial : TypeAlias = tuple[int, ...]


#### Scalars

def to_scalar(value : Any) -> Scalar:
    match value:
        case bool():
            raise ScalarModeError(f'not a scalar: {value!r}')
        case Fraction() | float():
            return value
        case int():
            return Fraction(value)
        case str():
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as e:
                raise ParseError(f'bad scalar `{value}`: {e}') from e
    raise ScalarModeError(f'not a scalar: {value!r}')

def scalar_to_json(value : Scalar) -> str | float:
    if isinstance(value, Fraction):
        return f'{value.numerator}/{value.denominator}'
    return float(value)

def scalar_is_zero(value : Scalar, tol : Optional[float] = None) -> bool:
    if isinstance(value, Fraction):
        return value == 0
    return abs(value) <= (constants.TOLERANCE if tol is None else tol)

def scalars_close(a : Scalar, b : Scalar, tol : Optional[float] = None) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= (constants.TOLERANCE if tol is None else tol)


#### Monomials

def permutation_sign(seq : Sequence[int]) -> int:
    inversions = sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1

def canonical_monomial(indices : Iterable[int], n : int) -> tuple[int, Monomial]:
    """Sort an index list, returning (sign, monomial); sign is 0 on a repeated index."""
    indices = tuple(indices)
    for i in indices:
        if not 1 <= i <= n:
            raise DimensionError(f'index {i} outside 1..{n}')
    if len(set(indices)) != len(indices):
        return 0, ()
    return permutation_sign(indices), tuple(sorted(indices))

@functools.lru_cache(maxsize=None)
def basis_monomials(n : int, k : int) -> tuple[Monomial, ...]:
    """Canonical basis of Λᵏ(ℝⁿ), lexicographic on index lists."""
    return tuple(itertools.combinations(range(1, n + 1), k))

@functools.lru_cache(maxsize=None)
def basis_position(n : int, k : int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(basis_monomials(n, k))}

def _check_dimension(n : int) -> None:
    if not 0 <= n <= constants.MAX_DIM:
        raise DimensionError(f'dimension {n} outside 0..{constants.MAX_DIM}')


#### Forms

def _mode_of(values : Iterable[Scalar]) -> Optional[bool]:
    kinds = {isinstance(c, Fraction) for c in values}
    if len(kinds) > 1:
        raise ScalarModeError('exact and float coefficients in one form')
    return kinds.pop() if kinds else None

@dataclasses.dataclass(frozen=True)
class KForm(object):
    """A homogeneous k-form on ℝⁿ; zero forms of degree > n are allowed as results of wedge."""
    n : int
    k : int
    terms : tuple[tuple[Monomial, Scalar], ...] = ()

    @staticmethod
    def from_terms(n : int, k : int, terms : Iterable[tuple[Iterable[int], Any]], strict : bool = False) -> 'KForm':
        _check_dimension(n)
        if k < 0:
            raise DegreeError(f'negative degree {k}')
        merged : dict[Monomial, Scalar] = {}
        for indices, value in terms:
            indices = tuple(indices)
            if len(indices) != k:
                raise DegreeError(f'monomial {indices} in a {k}-form')
            sign, mono = canonical_monomial(indices, n)
            if sign == 0:
                if strict:
                    raise ParseError(f'repeated index in monomial {indices}')
                continue
            c = to_scalar(value)
            merged[mono] = merged[mono] + sign * c if mono in merged else sign * c
        _mode_of(merged.values())
        return KForm(n, k, tuple((m, c) for m, c in sorted(merged.items()) if c != 0))

    @staticmethod
    def zero(n : int, k : int) -> 'KForm':
        _check_dimension(n)
        return KForm(n, k, ())

    @staticmethod
    def basis(n : int, *indices : int) -> 'KForm':
        return KForm.from_terms(n, len(indices), [(indices, Fraction(1))])

    @staticmethod
    def constant(n : int, value : Any) -> 'KForm':
        return KForm.from_terms(n, 0, [((), value)])

    @staticmethod
    def from_vector(n : int, k : int, values : Sequence[Scalar]) -> 'KForm':
        monomials = basis_monomials(n, k)
        if len(values) != len(monomials):
            raise DimensionError(f'{len(values)} coefficients for a space of dimension {len(monomials)}')
        return KForm.from_terms(n, k, zip(monomials, values))

    @functools.cached_property
    def coefficients(self) -> dict[Monomial, Scalar]:
        return dict(self.terms)

    @functools.cached_property
    def is_exact(self) -> bool:
        return _mode_of(c for _, c in self.terms) is not False

    def coeff(self, *indices : int) -> Scalar:
        sign, mono = canonical_monomial(indices, self.n)
        zero = Fraction(0) if self.is_exact else 0.0
        if sign == 0 or len(mono) != self.k:
            return zero
        return sign * self.coefficients.get(mono, zero)

    def vector(self) -> list[Scalar]:
        zero = Fraction(0) if self.is_exact else 0.0
        if self.k > self.n:
            return []
        return [self.coefficients.get(m, zero) for m in basis_monomials(self.n, self.k)]

    def is_zero(self, tol : Optional[float] = None) -> bool:
        return all(scalar_is_zero(c, tol) for _, c in self.terms)

    def is_close(self, other : 'KForm', tol : Optional[float] = None) -> bool:
        _check_same_space(self, other)
        return (self - other).is_zero(tol)

    def to_float(self) -> 'KForm':
        return KForm(self.n, self.k, tuple((m, float(c)) for m, c in self.terms))

    def embed(self, n : int) -> 'KForm':
        """The same monomials read in a larger frame ℝⁿ ⊃ ℝ^self.n."""
        if n < self.n:
            raise DimensionError(f'cannot embed a form on R^{self.n} into R^{n}')
        return KForm(n, self.k, self.terms)

    def __add__(self, other : 'KForm') -> 'KForm':
        _check_same_space(self, other)
        return KForm.from_terms(self.n, self.k, list(self.terms) + list(other.terms))

    def __sub__(self, other : 'KForm') -> 'KForm':
        return self + (-other)

    def __neg__(self) -> 'KForm':
        return KForm(self.n, self.k, tuple((m, -c) for m, c in self.terms))

    def __mul__(self, scalar : Any) -> 'KForm':
        s = to_scalar(scalar)
        return KForm.from_terms(self.n, self.k, [(m, s * c) for m, c in self.terms])

    def __rmul__(self, scalar : Any) -> 'KForm':
        return self * scalar

    def __xor__(self, other : 'KForm') -> 'KForm':
        return wedge(self, other)

def _check_same_space(a : KForm, b : KForm) -> None:
    if a.n != b.n:
        raise DimensionError(f'forms on R^{a.n} and R^{b.n}')
    if a.k != b.k:
        raise DegreeError(f'degree {a.k} against degree {b.k}')

def form_cache(maxsize : int = 256):
    """lru_cache whose key also carries the scalar mode of every KForm argument.

    Fraction(1) == 1.0 with equal hashes, so a plain lru_cache would hand an
    exact result to a float caller.
    """
    def decorator(fn):
        @functools.lru_cache(maxsize=maxsize)
        def cached(modes, *args):
            return fn(*args)

        @functools.wraps(fn)
        def wrapper(*args):
            modes = tuple(a.is_exact if isinstance(a, KForm) else None for a in args)
            return cached(modes, *args)
        wrapper.cache_clear = cached.cache_clear
        return wrapper
    return decorator

def volume_form(n : int) -> KForm:
    return KForm.basis(n, *range(1, n + 1))


#### Vectors

@dataclasses.dataclass(frozen=True)
class Vector(object):
    coeffs : tuple[Scalar, ...]

    @staticmethod
    def of(values : Iterable[Any]) -> 'Vector':
        coeffs = tuple(to_scalar(v) for v in values)
        _check_dimension(len(coeffs))
        _mode_of(coeffs)
        return Vector(coeffs)

    @staticmethod
    def basis(n : int, i : int) -> 'Vector':
        if not 1 <= i <= n:
            raise DimensionError(f'basis vector e_{i} outside 1..{n}')
        return Vector.of(1 if j == i else 0 for j in range(1, n + 1))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i : int) -> Scalar:
        """Component along e_i, 1-based like the frame."""
        return self.coeffs[i - 1]


#### Operations

def wedge(a : KForm, b : KForm) -> KForm:
    if a.n != b.n:
        raise DimensionError(f'wedge of forms on R^{a.n} and R^{b.n}')
    k = a.k + b.k
    if k > a.n:
        return KForm.zero(a.n, k)
    terms = []
    for left, c1 in a.terms:
        for right, c2 in b.terms:
            if set(left) & set(right):
                continue
            terms.append((left + right, c1 * c2))
    return KForm.from_terms(a.n, k, terms)

def wedge_all(*forms : KForm) -> KForm:
    return functools.reduce(wedge, forms)

def hodge(a : KForm) -> KForm:
    """*(e^I) = sign(I, Iᶜ) e^{Iᶜ}, orientation e¹∧...∧eⁿ."""
    if a.k > a.n:
        raise DegreeError(f'hodge star of a {a.k}-form on R^{a.n}')
    everything = range(1, a.n + 1)
    terms = []
    for mono, c in a.terms:
        complement = tuple(i for i in everything if i not in mono)
        terms.append((complement, permutation_sign(mono + complement) * c))
    return KForm.from_terms(a.n, a.n - a.k, terms)

def hodge_inverse(a : KForm) -> KForm:
    """The form b with *b = a."""
    k = a.n - a.k
    sign = -1 if (k * (a.n - k)) % 2 else 1
    return hodge(a) * sign

def interior(v : Vector, a : KForm) -> KForm:
    """ι_v a. Degree k ≥ 1 only; a 0-form would contract to degree −1, which no KForm holds."""
    if v.n != a.n:
        raise DimensionError(f'vector in R^{v.n} against a form on R^{a.n}')
    if a.k == 0:
        raise DegreeError('interior product of a 0-form')
    terms = []
    for mono, c in a.terms:
        for pos, i in enumerate(mono):
            vi = v[i]
            if vi:
                terms.append((mono[:pos] + mono[pos + 1:], (-1) ** pos * vi * c))
    return KForm.from_terms(a.n, a.k - 1, terms)

def flat(v : Vector) -> KForm:
    return KForm.from_terms(v.n, 1, [((i,), c) for i, c in enumerate(v.coeffs, start=1)])

def sharp(a : KForm) -> Vector:
    if a.k != 1:
        raise DegreeError(f'sharp of a {a.k}-form')
    return Vector.of(a.coeff(i) for i in range(1, a.n + 1))

def inner(a : KForm, b : KForm) -> Scalar:
    _check_same_space(a, b)
    other = b.coefficients
    total = Fraction(0) if a.is_exact and b.is_exact else 0.0
    for mono, c in a.terms:
        if mono in other:
            total += c * other[mono]
    return total

def norm2(a : KForm) -> Scalar:
    return inner(a, a)

def proportionality(a : KForm, b : KForm, tol : Optional[float] = None) -> Optional[Scalar]:
    """The scalar c with a = c·b, or None when a is not a multiple of b (or b = 0)."""
    _check_same_space(a, b)
    if b.is_zero(tol):
        return None
    c = inner(a, b) / norm2(b)
    return c if a.is_close(b * c, tol) else None

def flip_index(a : KForm, i : int) -> KForm:
    """Pull back along eⁱ ↦ −eⁱ."""
    return KForm(a.n, a.k, tuple((m, -c if i in m else c) for m, c in a.terms))


#### Operators

@dataclasses.dataclass(frozen=True)
class FormOperator(object):
    """A linear map Λ^source → Λ^target as a dense matrix in the canonical bases."""
    n : int
    source : int
    target : int
    matrix : tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        rows, cols = len(basis_monomials(self.n, self.target)), len(basis_monomials(self.n, self.source))
        if len(self.matrix) != rows or any(len(row) != cols for row in self.matrix):
            raise OperatorError(f'matrix shape does not match C({self.n},{self.target}) x C({self.n},{self.source})')

    @staticmethod
    def identity(n : int, k : int, exact : bool = True) -> 'FormOperator':
        return FormOperator(n, k, k, linalg.identity(len(basis_monomials(n, k)), exact))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), len(basis_monomials(self.n, self.source))

    @functools.cached_property
    def is_exact(self) -> bool:
        return linalg.is_exact(self.matrix)

    def __call__(self, a : KForm) -> KForm:
        if a.n != self.n or a.k != self.source:
            raise DegreeError(f'operator on {self.source}-forms applied to a {a.k}-form')
        position = basis_position(self.n, self.source)
        columns = [(position[m], c) for m, c in a.terms]
        values = [sum((row[j] * c for j, c in columns), start=row[0] * 0) for row in self.matrix]
        return KForm.from_vector(self.n, self.target, values)

    def _check_compatible(self, other : 'FormOperator') -> None:
        if (self.n, self.source, self.target) != (other.n, other.source, other.target):
            raise DegreeError('operators between different form spaces')

    def __add__(self, other : 'FormOperator') -> 'FormOperator':
        self._check_compatible(other)
        return FormOperator(self.n, self.source, self.target, tuple(
            tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(self.matrix, other.matrix)))

    def __sub__(self, other : 'FormOperator') -> 'FormOperator':
        return self + other * -1

    def __mul__(self, scalar : Any) -> 'FormOperator':
        s = to_scalar(scalar)
        return FormOperator(self.n, self.source, self.target, tuple(
            tuple(s * x for x in row) for row in self.matrix))

    def __rmul__(self, scalar : Any) -> 'FormOperator':
        return self * scalar

    def __matmul__(self, other : 'FormOperator') -> 'FormOperator':
        """Composition self ∘ other."""
        if other.target != self.source or other.n != self.n:
            raise DegreeError(f'cannot compose Λ^{self.source} <- Λ^{other.target}')
        return FormOperator(self.n, other.source, self.target, linalg.matmul(self.matrix, other.matrix))

    def shift(self, r : Any) -> 'FormOperator':
        """self − r·I."""
        if self.source != self.target:
            raise DegreeError('shift of a non-square operator')
        return self - FormOperator.identity(self.n, self.source, self.is_exact) * r

    def is_zero(self, tol : Optional[float] = None) -> bool:
        return linalg.is_zero(self.matrix, tol)

def operator_matrix(f : Callable[[KForm], KForm], n : int, k : int, m : int,
                    exact : bool = True, check_linear : bool = False) -> FormOperator:
    if not (0 <= k <= n and 0 <= m <= n):
        raise DegreeError(f'no operator Λ^{k} -> Λ^{m} on R^{n}')
    columns = []
    for mono in basis_monomials(n, k):
        e = KForm.basis(n, *mono)
        image = f(e if exact else e.to_float())
        if image.n != n or image.k != m:
            raise DegreeError(f'map sends {k}-forms to {image.k}-forms on R^{image.n}, expected {m}-forms on R^{n}')
        column = image.vector()
        columns.append(column if exact else [float(x) for x in column])
    matrix = tuple(tuple(col[i] for col in columns) for i in range(len(basis_monomials(n, m))))
    op = FormOperator(n, k, m, matrix)
    if check_linear:
        _spot_check_linear(f, op, exact)
    return op

def random_form(rng : random.Random, n : int, k : int, exact : bool = True, size : int = 3) -> KForm:
    """A sparse form with small rational coefficients, reproducible from rng."""
    monomials = basis_monomials(n, k)
    terms = [(rng.choice(monomials), Fraction(rng.randint(-3, 3), rng.randint(1, 3))) for _ in range(size)]
    a = KForm.from_terms(n, k, terms)
    return a if exact else a.to_float()

def _spot_check_linear(f : Callable[[KForm], KForm], op : FormOperator, exact : bool, pairs : int = 3) -> None:
    rng = random.Random(0)
    for _ in range(pairs):
        a = random_form(rng, op.n, op.source, exact)
        b = random_form(rng, op.n, op.source, exact)
        if not f(a + b * 2).is_close(f(a) + f(b) * 2):
            raise OperatorError('map is not linear on a random sample')

def rank(op : FormOperator, tol : Optional[float] = None) -> int:
    return linalg.rank(op.matrix, op.shape[1], tol)

def annihilating_check(op : FormOperator, roots : Sequence[Any], tol : Optional[float] = None) -> bool:
    """True iff ∏(op − r·I) = 0."""
    if op.source != op.target:
        raise DegreeError('annihilating polynomial of a non-square operator')
    if not roots:
        return op.is_zero(tol)
    product = op.shift(roots[0])
    for r in roots[1:]:
        product = product @ op.shift(r)
    return product.is_zero(tol)


#### Serialization

def form_to_json(a : KForm) -> dict[str, Any]:
    return {
        'n': a.n,
        'k': a.k,
        'terms': [{'idx': list(m), 'c': scalar_to_json(c)} for m, c in a.terms],
    }

def form_from_json(obj : Any) -> KForm:
    try:
        n, k, terms = obj['n'], obj['k'], obj['terms']
        if not isinstance(n, int) or not isinstance(k, int) or not isinstance(terms, list):
            raise ParseError('form needs integer "n", "k" and a "terms" list')
        parsed = []
        for term in terms:
            c = term['c']
            if isinstance(c, (int, float)) and not isinstance(c, bool):
                c = float(c)
            parsed.append((tuple(term['idx']), c))
    except (KeyError, TypeError) as e:
        raise ParseError(f'malformed form object: {e}') from e
    if not 0 <= k <= n:
        raise ParseError(f'degree {k} outside 0..{n}')
    try:
        return KForm.from_terms(n, k, parsed, strict=True)
    except (DimensionError, DegreeError, ScalarModeError) as e:
        raise ParseError(str(e)) from e
