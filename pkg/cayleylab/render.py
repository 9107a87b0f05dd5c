import dataclasses
import enum
import json
import textwrap
from fractions import Fraction
from typing import Any, Optional

from . import constants
from . import model
from .exterior import KForm, Vector, form_to_json, scalar_to_json

#### JSON

def to_jsonable(value : Any, verbose : bool = False) -> Any:
    match value:
        case None | bool() | int() | str() if not isinstance(value, enum.Enum):
            return value
        case enum.Enum():
            return str(value.value)
        case Fraction() | float():
            return scalar_to_json(value)
        case KForm():
            return form_to_json(value)
        case Vector():
            return [scalar_to_json(c) for c in value.coeffs]
        case list() | tuple():
            return [to_jsonable(v, verbose) for v in value]
        case dict():
            return {str(k): to_jsonable(v, verbose) for k, v in value.items()}
    if dataclasses.is_dataclass(value):
        return {
            f.name: to_jsonable(getattr(value, f.name), verbose)
            for f in dataclasses.fields(value)
            if verbose or f.metadata.get('json', True)
        }
    raise TypeError(f'cannot serialize {type(value).__name__}')

def render_json(report : Any, verbose : bool = False, extra : Optional[dict[str, Any]] = None) -> str:
    """A schema-versioned envelope; byte-identical for identical reports."""
    envelope = {
        'schema': constants.SCHEMA_VERSION,
        'kind': type(report).__name__,
        'report': to_jsonable(report, verbose),
    }
    if extra:
        envelope.update(to_jsonable(extra, verbose))
    return json.dumps(envelope, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


#### Text

def format_scalar(c : Any) -> str:
    if isinstance(c, float):
        return f'{c:.6g}'
    return str(c)

def format_form(a : KForm, prefix : str = 'dx') -> str:
    """dx^{1234} + dx^{1256} - 1/2 dx^{5678}; e^{78} with prefix 'e'."""
    if a.is_zero():
        return '0'
    parts = []
    for mono, c in a.terms:
        basis = f'{prefix}^{{{"".join(str(i) for i in mono)}}}' if mono else ''
        negative = c < 0
        magnitude = -c if negative else c
        if basis and magnitude == 1:
            body = basis
        else:
            body = f'{format_scalar(magnitude)} {basis}'.strip()
        sign = '-' if negative else '+'
        parts.append(f'{sign} {body}' if parts else f'{"-" if negative else ""}{body}')
    return ' '.join(parts)

def format_point(point : tuple) -> str:
    return '(' + ', '.join(format_scalar(x) for x in point) + ')'

def mark(passed : Optional[bool], finding : bool = False) -> str:
    if passed is None:
        return '[ ?? ]'
    if finding and not passed:
        return '[WARN]'
    return '[ OK ]' if passed else '[FAIL]'


@dataclasses.dataclass
class Section(object):
    title : str
    lines : list[str] = dataclasses.field(default_factory=list)
    children : list['Section'] = dataclasses.field(default_factory=list)

    def add(self, line : str) -> 'Section':
        self.lines.append(line)
        return self

    def child(self, title : str) -> 'Section':
        section = Section(title)
        self.children.append(section)
        return section

    def render(self) -> str:
        body = '\n'.join(self.lines + [c.render() for c in self.children])
        return f'{self.title}\n' + textwrap.indent(body, '  ') if body else self.title


def verify_to_text(report : model.VerifyReport) -> str:
    section = Section('identity suite for the Cayley form')
    for check in report.checks:
        detail = f'  ({check.detail})' if check.detail else ''
        section.add(f'{mark(check.passed, check.finding)} {check.name}{detail}')
    findings = [c for c in report.checks if c.finding and not c.passed]
    section.add('')
    section.add(f'{"PASS" if report.ok else "FAIL"}'
                + (f' with {len(findings)} constant finding(s)' if findings else ''))
    return section.render()

def torsion_to_section(torsion : model.TorsionResult, parent : Section) -> None:
    section = parent.child('characteristic torsion')
    section.add(f'T = {format_form(torsion.T)}')
    section.add(f'recovered 6/7 *(T ^ phi) = {format_form(torsion.theta_recovered)}')
    section.add(f'scale = {"undefined" if torsion.scale is None else format_scalar(torsion.scale)}')
    section.add(f'T_8 = {format_form(torsion.t8)}')
    section.add(f'T_48 = {format_form(torsion.t48)}')

def classification_to_text(report : model.ClassificationReport, title : str = 'classification') -> str:
    section = Section(title)
    section.add(f'class: {report.fernandez_class}')
    section.add(f'theta = {format_form(report.theta, "e")}')
    section.add(f'|dphi - theta ^ phi|^2 = {format_scalar(report.residual_lcp)}')
    section.add(f'dtheta = 0: {report.dtheta_zero}')
    section.add(f'gauduchon (d*theta = 0): {report.gauduchon}')
    evidence = section.child('evidence')
    for e in report.evidence:
        detail = f'  ({e.detail})' if e.detail else ''
        evidence.add(f'{mark(e.passed)} {e.name}{detail}')
    if report.torsion is not None:
        torsion_to_section(report.torsion, section)
    return section.render()

def reconcile_to_text(report : model.ReconcileReport) -> str:
    section = Section(f'admissible conventions for the product 4-form: {len(report.candidates)}')
    for c in report.candidates:
        section.add(c.convention.label())
    literal = report.literal
    verdict = 'admissible' if literal.report.verdict else 'not admissible'
    section.add('')
    section.add(f'as written ({literal.convention.label()}): {verdict}, '
                f'phi ^ phi = {format_scalar(literal.report.phi_wedge_phi_coeff)} vol')
    return section.render()

def projection_to_text(report : model.ProjectionReport) -> str:
    section = Section(f'projection onto {report.space}')
    section.add(f'source     = {format_form(report.source)}')
    section.add(f'projected  = {format_form(report.projected)}')
    section.add(f'complement = {format_form(report.remainder)}')
    return section.render()

def lee_to_text(report : model.LeeReport) -> str:
    section = Section('Lee form')
    section.add(f'theta = -1/7 *(*dphi ^ phi) = {format_form(report.theta, "e")}')
    section.add(f'least squares theta = {format_form(report.theta_least_squares, "e")}')
    section.add(f'|dphi - theta ^ phi|^2 = {format_scalar(report.residual)}')
    section.add(f'{mark(report.lcp)} dphi = theta ^ phi')
    return section.render()

def scan_to_text(report : model.ScanReport) -> str:
    section = Section(f'theorem scan, theta mode {report.theta_mode}, {report.grid_size} grid points')
    for scan in report.conventions:
        conv = section.child(scan.convention.label())
        conv.add('relations: ' + ('; '.join(scan.relations) or 'none'))
        conv.add(f'locus: {len(scan.locus)} of {scan.points_scanned} points')
        for point in scan.locus:
            flags = []
            if point.canonical_shape:
                flags.append('canonical relations')
            if point.nearly_kahler.is_nk:
                flags.append(f'NK a={format_scalar(point.nearly_kahler.a)}')
            if point.phase.ratio is not None:
                flags.append(f'phase ratio {format_scalar(point.phase.ratio)}')
            conv.add(f'{format_point(point.point)} {point.fernandez_class} '
                     f'theta = {format_form(point.theta, "e")}'
                     + (f'  [{", ".join(flags)}]' if flags else ''))
    return section.render()

def angle_scan_to_text(report : model.AngleScanReport) -> str:
    section = Section(f'angle scan of {report.convention.label()}, theta mode {report.theta_mode}')
    for s in report.samples:
        section.add(f'gamma={s.gamma:.4f} beta={s.beta:.4f} {mark(s.solvable)} '
                    f'(p, q, r, s) = {format_point(s.coefficients)} residual {s.residual:.3g}')
    return section.render()

def example_to_text(report : model.ExampleReport, title : str) -> str:
    section = Section(title)
    section.add(f'{mark(report.jacobi)} Jacobi identity')
    section.add(f'{mark(report.d_squared_zero)} d^2 = 0 on generators')
    section.add(f'd omega = {format_form(report.d_omega, "e")}')
    section.add(f'd Omega_+ = {format_form(report.d_omega_plus, "e")}')
    section.add(f'd Omega_- = {format_form(report.d_omega_minus, "e")}')
    nk = report.nearly_kahler
    section.add(f'{mark(nk.is_nk)} d omega = 12a Omega_+, d Omega_- = a omega^2'
                + (f' with a = {format_scalar(nk.a)}' if nk.is_nk else ''))
    phase = report.phase
    ratio = 'undefined' if phase.ratio is None else format_scalar(phase.ratio)
    section.add(f'{mark(phase.structure_ok)} up to a phase of Omega, ratio {ratio}'
                f' (1/12 for the normalization above)')
    return section.render()
