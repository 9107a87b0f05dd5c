import json
import re
from typing import Any

from .errors import CayleyLabError, ParseError
from .exterior import KForm, form_from_json, form_to_json, scalar_to_json, to_scalar
from .lie import LieAlgebra
from .model import Convention, Differentials, Pairing
from .product import ProductModel, SU3Data, angle_pair

#### Lie algebra files

'''
# su(2)
dim 3
1 2 3 1
2 3 1 1
1 3 2 -1
'''

def compose(*args):
    def fn(text):
        state = {}
        for parser in args:
            result = parser(text)
            if result is None:
                return None
            else:
                v, text = result
                state.update(v)
        return state, text
    return fn

def choose(*args):
    def fn(text):
        for parser in args:
            result = parser(text)
            if result is not None:
                return result
        return None
    return fn


INTEGER = r'[0-9]+'
SCALAR = r'[+-]?[0-9]*\.[0-9]+|[+-]?[0-9]+(?:/[0-9]+)?'

def make_consumer(regex, key):
    rgx = re.compile(regex)
    def consumer(text):
        m = rgx.match(text)
        if m:
            return {key: m.group(key)}, text[m.end():]
        else:
            return None
    consumer.__name__ = 'consume_' + key
    return consumer

def consume_int(key):
    return make_consumer(f'^(?P<{key}>{INTEGER}) *', key)
def consume_scalar(key):
    return make_consumer(f'^(?P<{key}>{SCALAR}) *', key)
consume_dim = make_consumer(r'^(?P<dim>dim) +', 'dim')
consume_eol = make_consumer(r'^(?P<eol>#.*)?$', 'eol')

parse_header = compose(
    consume_dim,
    consume_int('n'),
    consume_eol)
parse_bracket = compose(
    consume_int('i'),
    consume_int('j'),
    consume_int('k'),
    consume_scalar('c'),
    consume_eol)

parser = choose(parse_header, parse_bracket)


def parse_lie(text : str, name : str = '') -> LieAlgebra:
    """Parse a structure-constant file into a LieAlgebra.

    COMMENT := #.*
    HEADER  := dim INT                        # first non-comment line
    SCALAR  := [+-]?INT(/INT)? | decimal      # exact: 0.5 reads as 1/2
    BRACKET := INT INT INT SCALAR             # i j k c: [e_i, e_j] has e_k-coefficient c, i < j
    LINE    := NOTHING | COMMENT | HEADER COMMENT? | BRACKET COMMENT?
    """
    n = None
    entries = []
    seen = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue

        result = parser(line)
        if result is None:
            raise ParseError(f'line {lineno}: `{line}` must be `dim n` or `i j k p/q`')
        result, _ = result

        if 'dim' in result:
            if n is not None:
                raise ParseError(f'line {lineno}: second `dim` header')
            n = int(result['n'])
            continue
        if n is None:
            raise ParseError(f'line {lineno}: bracket before the `dim` header')

        i, j, k = int(result['i']), int(result['j']), int(result['k'])
        for idx in (i, j, k):
            if not 1 <= idx <= n:
                raise ParseError(f'line {lineno}: index {idx} outside 1..{n}')
        if i >= j:
            raise ParseError(f'line {lineno}: needs i < j, got {i} {j}')
        if (i, j, k) in seen:
            raise ParseError(f'line {lineno}: duplicate of line {seen[(i, j, k)]}')
        seen[(i, j, k)] = lineno
        entries.append((i, j, k, to_scalar(result['c'])))
    if n is None:
        raise ParseError('missing `dim n` header')
    try:
        return LieAlgebra.from_brackets(n, entries, name=name)
    except CayleyLabError as e:
        raise ParseError(str(e)) from e

def dump_lie(L : LieAlgebra) -> str:
    lines = [f'# {L.name}'] if L.name else []
    lines.append(f'dim {L.n}')
    lines.extend(f'{i} {j} {k} {c}' for i, j, k, c in L.constants)
    return '\n'.join(lines) + '\n'


#### JSON inputs

def _load(text : str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f'invalid JSON: {e}') from e

def _field(obj : Any, key : str, where : str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f'{where}: missing field "{key}"')
    return obj[key]

def parse_form(text : str) -> KForm:
    return form_from_json(_load(text))

def parse_su3(obj : Any) -> SU3Data:
    forms = [form_from_json(_field(obj, key, 'su3')) for key in ('omega', 'omega_plus', 'omega_minus')]
    try:
        return SU3Data(*forms)
    except CayleyLabError as e:
        raise ParseError(f'su3: {e}') from e

def parse_convention(obj : Any) -> Convention:
    signs = _field(obj, 'signs', 'convention')
    if not isinstance(signs, list) or len(signs) != 4 or any(s not in (1, -1) for s in signs):
        raise ParseError('convention: "signs" must be four entries of 1 or -1')
    try:
        pairing = Pairing(obj.get('pairing', Pairing.STANDARD))
    except ValueError as e:
        raise ParseError(f'convention: {e}') from e
    flip = obj.get('flip')
    if flip is not None and (not isinstance(flip, int) or not 1 <= flip <= 8):
        raise ParseError('convention: "flip" must be null or an index in 1..8')
    return Convention(tuple(signs), to_scalar(_field(obj, 'coeff_c', 'convention')), pairing, flip)

def convention_to_json(convention : Convention) -> dict[str, Any]:
    return {
        'signs': list(convention.signs),
        'coeff_c': scalar_to_json(convention.coeff_c),
        'pairing': str(convention.pairing),
        'flip': convention.flip,
    }

def parse_product_model(text : str) -> ProductModel:
    """A product model file: su3 forms, convention, exact gamma pair and diff (p, q, r, s)."""
    obj = _load(text)
    if not isinstance(obj, dict):
        raise ParseError('model: expected a JSON object')
    su3 = SU3Data.standard() if obj.get('su3') == 'standard' else parse_su3(_field(obj, 'su3', 'model'))
    convention = parse_convention(_field(obj, 'convention', 'model'))
    diff = _field(obj, 'diff', 'model')
    if not isinstance(diff, list) or len(diff) != 4:
        raise ParseError('model: "diff" must list p, q, r, s')
    try:
        gamma = angle_pair(obj.get('gamma', ['1', '0']))
        beta = angle_pair(obj.get('beta', ['1', '0']))
        return ProductModel(su3, convention, gamma, beta, Differentials(*(to_scalar(x) for x in diff)))
    except (CayleyLabError, TypeError, ValueError) as e:
        raise ParseError(f'model: {e}') from e

def dump_product_model(m : ProductModel) -> str:
    obj = {
        'su3': {
            'omega': form_to_json(m.su3.omega),
            'omega_plus': form_to_json(m.su3.omega_plus),
            'omega_minus': form_to_json(m.su3.omega_minus),
        },
        'convention': convention_to_json(m.convention),
        'gamma': [scalar_to_json(x) for x in m.gamma],
        'beta': [scalar_to_json(x) for x in m.beta],
        'diff': [scalar_to_json(x) for x in m.diff.as_tuple()],
    }
    return json.dumps(obj, indent=2, sort_keys=True) + '\n'
