import argparse
import dataclasses
import json
import logging
import os
import pathlib
import sys
from typing import Any, Callable, Optional

from . import constants
from . import render
from . import spin7
from .classify import classify_lie, classify_product, solve_lee
from .errors import CayleyLabError, ParseError
from .exterior import scalar_is_zero, to_scalar
from .lie import bundled_example_s3s3, example_report
from .model import LeeReport, ProjectionReport, ReconcileReport, ScanReport
from .parser import parse_form, parse_lie, parse_product_model
from .product import SU3Data, literal_report, reconcile_cayley
from .scan import ThetaMode, angle_scan, default_grid, theorem_scan
from .verify import corrupted_phi, run_identity_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


@dataclasses.dataclass(frozen=True)
class RunConfig(object):
    command : str
    inputs : tuple[str, ...]
    mode : str
    tolerance : float
    output : str
    output_path : Optional[str]
    verbose : bool
    tolerance_given : bool

    @staticmethod
    def from_args(args : argparse.Namespace, command : str, inputs : tuple[str, ...] = ()) -> 'RunConfig':
        return RunConfig(
            command=command,
            inputs=inputs,
            mode=resolve_mode(args.mode),
            tolerance=constants.DEFAULT_TOLERANCE if args.tolerance is None else args.tolerance,
            output=args.output,
            output_path=args.output_file,
            verbose=args.verbose,
            tolerance_given=args.tolerance is not None,
        )

    @property
    def exact(self) -> bool:
        return self.mode == 'exact'

    def envelope(self) -> dict[str, Any]:
        return {'mode': self.mode, 'tolerance': None if self.exact else self.tolerance}

def resolve_mode(flag : Optional[str]) -> str:
    """--mode, then $CAYLEY_LAB_MODE, then the exact default."""
    mode = flag or os.environ.get(constants.MODE_ENV) or constants.MODE
    if mode not in constants.MODES:
        raise CayleyLabError(f'unknown mode `{mode}` from ${constants.MODE_ENV}; expected one of {", ".join(constants.MODES)}')
    return mode

def configure(args : argparse.Namespace, command : str, inputs : tuple[str, ...] = ()) -> RunConfig:
    if args.debug:
        constants.DEBUG = True
    logging.basicConfig(stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger().setLevel(logging.DEBUG if constants.DEBUG else logging.WARNING)
    config = RunConfig.from_args(args, command, inputs)
    constants.TOLERANCE = config.tolerance
    logger.debug('%s', config)
    return config

def read_input(path : str) -> str:
    with open(path) as f:
        return f.read()

def emit(config : RunConfig, report : Any, to_text : Callable[[Any], str], extra : Optional[dict] = None) -> None:
    if config.output == 'json':
        out = render.render_json(report, config.verbose, {**config.envelope(), **(extra or {})})
    else:
        out = to_text(report) + '\n'
        if config.exact and config.tolerance_given:
            out += 'exact mode: --tolerance ignored\n'

    if config.output_path is None or config.output_path == '-':
        sys.stdout.write(out)
    else:
        with open(config.output_path, 'w') as f:
            f.write(out)

def add_common_args(parser : argparse.ArgumentParser) -> argparse.ArgumentParser:
    parser.add_argument('--mode', choices=constants.MODES, help=f'scalar mode (default ${constants.MODE_ENV} or exact)')
    parser.add_argument('--tolerance', type=float, help='float comparison tolerance, float mode only')
    parser.add_argument('--output', choices=('text', 'json'), default='text', help='report format')
    parser.add_argument('-o', '--output-file', help='output file path')
    parser.add_argument('--verbose', action='store_true', help='include per-point results in JSON reports')
    parser.add_argument('--debug', action='store_true', help='log each intermediate step to stderr')
    return parser


#### verify

def parse_verify_args(parser=None):
    parser = parser or argparse.ArgumentParser()
    add_common_args(parser)
    parser.add_argument('--corrupt-phi', action='store_true', help=argparse.SUPPRESS)
    return parser

def main_verify(args = None):
    args = args or parse_verify_args().parse_args()
    config = configure(args, 'verify')

    phi = corrupted_phi() if args.corrupt_phi else spin7.cayley_form()
    report = run_identity_suite(phi if config.exact else phi.to_float())
    emit(config, report, render.verify_to_text, {'ok': report.ok})
    return EXIT_OK if report.ok else EXIT_FAILED


#### classify

def parse_classify_args(parser=None):
    parser = parser or argparse.ArgumentParser()
    add_common_args(parser)
    parser.add_argument('file', help='a .lie structure-constant file or a .json product model')
    return parser

def main_classify(args = None):
    args = args or parse_classify_args().parse_args()
    config = configure(args, 'classify', (args.file,))

    path = pathlib.Path(args.file)
    text = read_input(args.file)
    if path.suffix == '.lie':
        phi = spin7.cayley_form()
        report = classify_lie(parse_lie(text, name=path.stem), phi if config.exact else phi.to_float())
    elif path.suffix == '.json':
        m = parse_product_model(text)
        report = classify_product(m if config.exact else m.to_float())
    else:
        raise ParseError(f'{args.file}: expected a .lie or .json model')

    emit(config, report, lambda r: render.classification_to_text(r, f'classification of {path.name}'))
    return EXIT_OK


#### project

def parse_project_args(parser=None):
    parser = parser or argparse.ArgumentParser()
    add_common_args(parser)
    parser.add_argument('file', help='a JSON form')
    parser.add_argument('--space', required=True, choices=tuple(spin7.PROJECTIONS), help='target component')
    return parser

def main_project(args = None):
    args = args or parse_project_args().parse_args()
    config = configure(args, 'project', (args.file,))

    form = parse_form(read_input(args.file))
    if not config.exact:
        form = form.to_float()
    phi = spin7.cayley_form() if config.exact else spin7.cayley_form().to_float()
    projected = spin7.PROJECTIONS[args.space](form, phi)
    report = ProjectionReport(args.space, form, projected, form - projected)

    emit(config, report, render.projection_to_text)
    return EXIT_OK


#### lee

def parse_lee_args(parser=None):
    parser = parser or argparse.ArgumentParser()
    add_common_args(parser)
    parser.add_argument('file', help='a JSON 5-form dphi')
    return parser

def main_lee(args = None):
    args = args or parse_lee_args().parse_args()
    config = configure(args, 'lee', (args.file,))

    dphi = parse_form(read_input(args.file))
    phi = spin7.cayley_form()
    if not config.exact:
        dphi, phi = dphi.to_float(), phi.to_float()
    theta, residual = solve_lee(dphi, phi)
    report = LeeReport(spin7.lee_form(phi, dphi), theta, residual, scalar_is_zero(residual))

    emit(config, report, render.lee_to_text)
    return EXIT_OK


#### scan

def parse_grid(text : str) -> list:
    if text == 'default':
        return default_grid()
    values = [v for v in text.split(',') if v.strip()]
    return default_grid(sorted({to_scalar(v) for v in values}))

def parse_scan_args(parser=None):
    parser = parser or argparse.ArgumentParser()
    add_common_args(parser)
    parser.add_argument('--grid', default='default', help='comma separated values for each of p, q, r, s')
    parser.add_argument('--conventions', choices=('auto', 'literal'), default='auto',
                        help='every admissible convention, or the product 4-form as written')
    parser.add_argument('--theta-mode', choices=tuple(ThetaMode), default=ThetaMode.GENERAL_BETA)
    parser.add_argument('--workers', type=int, default=os.cpu_count() or 1,
                        help='worker processes, one convention per task (default: one per CPU)')
    parser.add_argument('--angles', type=int, metavar='N',
                        help='float scan over N equispaced angles of the first admissible convention instead')
    return parser

def main_scan(args = None):
    args = args or parse_scan_args().parse_args()
    config = configure(args, 'scan')
    theta_mode = ThetaMode(args.theta_mode)

    literal = literal_report()
    if args.conventions == 'literal':
        conventions = [literal.convention] if literal.report.verdict else []
    else:
        conventions = [c.convention for c in reconcile_cayley()]

    if args.angles is not None:
        if not conventions:
            raise CayleyLabError('no admissible convention to scan')
        report = angle_scan(conventions[0], args.angles, theta_mode)
        emit(config, report, render.angle_scan_to_text)
        return EXIT_OK

    grid = parse_grid(args.grid)
    if not conventions:
        logger.warning('literal convention is not admissible, scan skipped')
        report = ScanReport(str(theta_mode), len(grid), ())
    else:
        report = theorem_scan(grid, conventions, theta_mode, workers=args.workers)

    def to_text(r):
        verdict = 'admissible' if literal.report.verdict else 'not admissible, scan skipped'
        return render.scan_to_text(r) + f'\nas written ({literal.convention.label()}): {verdict}'

    emit(config, report, to_text, {'literal': literal})
    return EXIT_OK


#### reconcile

def parse_reconcile_args(parser=None):
    parser = parser or argparse.ArgumentParser()
    add_common_args(parser)
    parser.add_argument('--no-flips', action='store_true', help='do not try frame reflections')
    return parser

def main_reconcile(args = None):
    args = args or parse_reconcile_args().parse_args()
    config = configure(args, 'reconcile')

    report = ReconcileReport(reconcile_cayley(flips=not args.no_flips), literal_report())
    emit(config, report, render.reconcile_to_text)
    return EXIT_OK


#### example

def parse_example_args(parser=None):
    parser = parser or argparse.ArgumentParser()
    add_common_args(parser)
    parser.add_argument('file', nargs='?', help='a 6-dimensional .lie file (default: su(2)+su(2))')
    return parser

def main_example(args = None):
    args = args or parse_example_args().parse_args()
    config = configure(args, 'example', (args.file,) if args.file else ())

    if args.file:
        L, su3 = parse_lie(read_input(args.file), name=pathlib.Path(args.file).stem), SU3Data.standard()
    else:
        L, su3 = bundled_example_s3s3()
    if not config.exact:
        su3 = su3.to_float()
    report = example_report(L, su3)

    emit(config, report, lambda r: render.example_to_text(r, f'SU(3)-structure on {L.name or "the algebra"}'))
    return EXIT_OK


def parse_main_args(parser=None):
    parser = parser or argparse.ArgumentParser(prog='cayleylab')
    subparsers = parser.add_subparsers(required=True)

    for name, parse_args, main_func in (
            ('verify', parse_verify_args, main_verify),
            ('classify', parse_classify_args, main_classify),
            ('project', parse_project_args, main_project),
            ('lee', parse_lee_args, main_lee),
            ('scan', parse_scan_args, main_scan),
            ('reconcile', parse_reconcile_args, main_reconcile),
            ('example', parse_example_args, main_example)):
        sub = subparsers.add_parser(name)
        sub.set_defaults(main_func=main_func)
        parse_args(sub)

    return parser

def main(argv = None) -> int:
    try:
        args = parse_main_args().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.main_func(args)
    except (CayleyLabError, OSError, json.JSONDecodeError) as e:
        logger.debug('command failed', exc_info=True)
        sys.stderr.write(f'cayleylab: {e}\n')
        return EXIT_USAGE
