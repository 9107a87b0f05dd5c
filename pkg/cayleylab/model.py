import dataclasses
import enum
from fractions import Fraction
from typing import Optional

from .exterior import KForm, Scalar

# Fields marked this way stay out of JSON unless a caller asks for them.
VERBOSE = {'json': False}


@dataclasses.dataclass(frozen=True)
class Evidence(object):
    name : str
    passed : bool
    detail : str = ''

@dataclasses.dataclass(frozen=True)
class AdmissibilityReport(object):
    """Necessary conditions only; a true verdict does not certify GL(8)-orbit membership."""
    self_dual : bool
    phi_wedge_phi_coeff : Scalar
    spectrum_ok : bool
    ranks : tuple[int, int]
    verdict : bool
    checks : tuple[str, ...] = (
        '*phi = phi',
        'phi^phi = 14 vol',
        '(A - 3I)(A + I) = 0',
        'rank(A + I), rank(A - 3I) = 7, 21',
    )

@dataclasses.dataclass(frozen=True)
class TorsionResult(object):
    T : KForm
    theta_recovered : KForm
    scale : Optional[Scalar]
    t8 : KForm
    t48 : KForm
    degenerate : bool = False

@dataclasses.dataclass(frozen=True)
class TopologicalData(object):
    p1_squared : int
    p2 : int
    euler : int
    w1_vanishes : bool
    w2_vanishes : bool

@dataclasses.dataclass(frozen=True)
class LeeConstantReport(object):
    mu : Optional[Scalar]
    values : tuple[Optional[Scalar], ...]
    single_constant : bool

@dataclasses.dataclass(frozen=True)
class ConstantChainReport(object):
    mu : Optional[Scalar]
    torsion_scale : Optional[Scalar]
    consistent : bool

class FernandezClass(enum.StrEnum):
    W0 = "W0"
    W1 = "W1"
    W2 = "W2"
    MIXED = "Mixed"

@dataclasses.dataclass(frozen=True)
class ClassificationReport(object):
    fernandez_class : FernandezClass
    theta : KForm
    residual_lcp : Scalar
    dtheta_zero : Optional[bool]
    gauduchon : Optional[bool]
    torsion : Optional[TorsionResult]
    evidence : tuple[Evidence, ...]


#### Product models

class Pairing(enum.StrEnum):
    STANDARD = "standard"  # Ω₊∧u♭ + Ω₋∧v♭
    SWAPPED = "swapped"    # Ω₊∧v♭ + Ω₋∧u♭

@dataclasses.dataclass(frozen=True)
class Convention(object):
    signs : tuple[int, int, int, int] = (1, 1, 1, 1)
    coeff_c : Scalar = Fraction(1)
    pairing : Pairing = Pairing.STANDARD
    flip : Optional[int] = None

    def label(self) -> str:
        signs = ''.join('+' if s > 0 else '-' for s in self.signs)
        flip = f' flip e^{self.flip}' if self.flip else ''
        return f'[{signs}] c={self.coeff_c} {self.pairing}{flip}'

@dataclasses.dataclass(frozen=True)
class Differentials(object):
    """dω = p·Ω₊ + q·Ω₋, dΩ₊ = r·ω∧ω, dΩ₋ = s·ω∧ω."""
    p : Scalar = Fraction(0)
    q : Scalar = Fraction(0)
    r : Scalar = Fraction(0)
    s : Scalar = Fraction(0)

    def as_tuple(self) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.p, self.q, self.r, self.s)

@dataclasses.dataclass(frozen=True)
class ReconcileCandidate(object):
    convention : Convention
    report : AdmissibilityReport

@dataclasses.dataclass(frozen=True)
class ReconcileReport(object):
    candidates : tuple[ReconcileCandidate, ...]
    literal : ReconcileCandidate

@dataclasses.dataclass(frozen=True)
class NearlyKahlerResult(object):
    is_nk : bool
    a : Optional[Scalar]

@dataclasses.dataclass(frozen=True)
class PhaseCheckResult(object):
    """Structure equations up to a phase of Ω; ratio is (x·dΩ₋ − y·dΩ₊)/ω∧ω over x² + y²."""
    structure_ok : bool
    x : Optional[Scalar]
    y : Optional[Scalar]
    ratio : Optional[Scalar]
    matches_normalization : bool


#### Scans

@dataclasses.dataclass(frozen=True)
class GridResult(object):
    point : tuple[Scalar, Scalar, Scalar, Scalar]
    residual : Scalar

@dataclasses.dataclass(frozen=True)
class LocusPoint(object):
    point : tuple[Scalar, Scalar, Scalar, Scalar]
    theta : KForm
    normal : bool
    dtheta_zero : Optional[bool]
    gauduchon : Optional[bool]
    fernandez_class : FernandezClass
    nearly_kahler : NearlyKahlerResult
    phase : PhaseCheckResult
    canonical_shape : bool

@dataclasses.dataclass(frozen=True)
class ConventionScan(object):
    convention : Convention
    relations : tuple[str, ...]
    relation_rows : tuple[tuple[Scalar, ...], ...]
    locus : tuple[LocusPoint, ...]
    points_scanned : int
    results : tuple[GridResult, ...] = dataclasses.field(default=(), metadata=VERBOSE)

@dataclasses.dataclass(frozen=True)
class ScanReport(object):
    theta_mode : str
    grid_size : int
    conventions : tuple[ConventionScan, ...]

@dataclasses.dataclass(frozen=True)
class AngleSample(object):
    gamma : float
    beta : float
    coefficients : tuple[float, float, float, float]
    residual : float
    solvable : bool

@dataclasses.dataclass(frozen=True)
class AngleScanReport(object):
    theta_mode : str
    convention : Convention
    samples : tuple[AngleSample, ...]


#### Reports

@dataclasses.dataclass(frozen=True)
class ProjectionReport(object):
    space : str
    source : KForm
    projected : KForm
    remainder : KForm

@dataclasses.dataclass(frozen=True)
class LeeReport(object):
    """The closed-form Lee form next to the least-squares solve of dφ = θ∧φ."""
    theta : KForm
    theta_least_squares : KForm
    residual : Scalar
    lcp : bool

@dataclasses.dataclass(frozen=True)
class Check(object):
    name : str
    passed : bool
    detail : str = ''
    # A finding measures a quoted constant; a mismatch warns instead of failing.
    finding : bool = False

@dataclasses.dataclass(frozen=True)
class VerifyReport(object):
    checks : tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if not c.finding)

@dataclasses.dataclass(frozen=True)
class ExampleReport(object):
    jacobi : bool
    d_squared_zero : bool
    d_omega : KForm
    d_omega_plus : KForm
    d_omega_minus : KForm
    nearly_kahler : NearlyKahlerResult
    phase : PhaseCheckResult
