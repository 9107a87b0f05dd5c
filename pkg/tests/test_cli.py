import pytest
import os
import json
import pathlib
import jsonschema
from cayleylab import cli, constants, spin7
from cayleylab.exterior import KForm, form_to_json, wedge

ROOT = pathlib.Path(__file__).parent.parent
MODELS = ROOT / 'models'
SCHEMAS = ROOT / 'schemas'

@pytest.fixture(autouse=True)
def restore_constants(monkeypatch):
    monkeypatch.setattr(constants, 'TOLERANCE', constants.TOLERANCE)
    monkeypatch.setattr(constants, 'DEBUG', constants.DEBUG)
    monkeypatch.delenv(constants.MODE_ENV, raising=False)

def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err

def validate(text, schema):
    instance = json.loads(text)
    jsonschema.validate(instance, json.loads((SCHEMAS / schema).read_text()))
    return instance

def write_form(tmp_path, form, name='form.json'):
    path = tmp_path / name
    path.write_text(json.dumps(form_to_json(form)))
    return str(path)

def test_verify(capsys):
    code, out, _ = run(capsys, 'verify')
    assert code == cli.EXIT_OK
    assert '[ OK ] rank(A + I), rank(A - 3I) = 7, 21' in out
    assert '[ OK ] rank(B) = 8' in out
    # measured constants that disagree with the quoted ones only warn
    assert '[WARN]' in out
    assert 'PASS' in out

def test_verify_corrupt_phi(capsys):
    code, out, _ = run(capsys, 'verify', '--corrupt-phi')
    assert code == cli.EXIT_FAILED
    assert '[FAIL] *phi = phi' in out

def test_verify_json(capsys):
    code, out, _ = run(capsys, 'verify', '--output', 'json')
    assert code == cli.EXIT_OK
    instance = validate(out, 'verify.schema.json')
    assert validate(out, 'envelope.schema.json')
    assert instance['ok'] is True
    assert instance['mode'] == 'exact'
    assert instance['tolerance'] is None

def test_classify_lie(capsys):
    code, out, _ = run(capsys, 'classify', str(MODELS / 'abelian8.lie'))
    assert code == cli.EXIT_OK
    assert 'classification of abelian8.lie' in out
    assert 'class: W0' in out

def test_classify_product(capsys):
    code, out, _ = run(capsys, 'classify', str(MODELS / 'lcp_product.json'), '--output', 'json')
    assert code == cli.EXIT_OK
    instance = validate(out, 'classification.schema.json')
    assert instance['report']['fernandez_class'] == 'W2'
    assert instance['report']['theta'] == {'n': 8, 'k': 1, 'terms': [{'idx': [7], 'c': '1/1'}]}

def test_classify_float(capsys):
    code, out, _ = run(capsys, 'classify', str(MODELS / 'lcp_product.json'), '--mode', 'float', '--output', 'json')
    assert code == cli.EXIT_OK
    instance = validate(out, 'classification.schema.json')
    assert instance['report']['fernandez_class'] == 'W2'
    assert instance['mode'] == 'float'
    assert instance['tolerance'] == constants.DEFAULT_TOLERANCE

def test_classify_output_file(capsys, tmp_path):
    path = tmp_path / 'report.txt'
    code, out, _ = run(capsys, 'classify', str(MODELS / 'abelian8.lie'), '-o', str(path))
    assert code == cli.EXIT_OK
    assert out == ''
    assert 'class: W0' in path.read_text()

def test_classify_bad_suffix(capsys, tmp_path):
    path = tmp_path / 'model.txt'
    path.write_text('dim 8\n')
    code, _, err = run(capsys, 'classify', str(path))
    assert code == cli.EXIT_USAGE
    assert err.startswith('cayleylab: ')

def test_classify_malformed(capsys, tmp_path):
    path = tmp_path / 'broken.lie'
    path.write_text('dim 8\n1 9 2 1\n')
    code, _, err = run(capsys, 'classify', str(path))
    assert code == cli.EXIT_USAGE
    assert 'cayleylab:' in err

def test_classify_malformed_json(capsys, tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"su3": ')
    code, _, _ = run(capsys, 'classify', str(path))
    assert code == cli.EXIT_USAGE

def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, 'classify', str(tmp_path / 'nope.lie'))
    assert code == cli.EXIT_USAGE
    assert 'nope.lie' in err

def test_project(capsys, tmp_path):
    path = write_form(tmp_path, KForm.basis(8, 1, 2))
    code, out, _ = run(capsys, 'project', path, '--space', '2_7')
    assert code == cli.EXIT_OK
    assert 'projected  = 1/4 dx^{12} + 1/4 dx^{34} + 1/4 dx^{56} + 1/4 dx^{78}' in out

def test_project_degree_mismatch(capsys, tmp_path):
    path = write_form(tmp_path, KForm.basis(8, 1, 2, 3))
    code, _, err = run(capsys, 'project', path, '--space', '2_7')
    assert code == cli.EXIT_USAGE
    assert 'degree' in err

def test_project_unknown_space(capsys, tmp_path):
    path = write_form(tmp_path, KForm.basis(8, 1, 2))
    code, _, _ = run(capsys, 'project', path, '--space', '2_8')
    assert code == cli.EXIT_USAGE

def test_lee(capsys, tmp_path):
    phi = spin7.cayley_form()
    path = write_form(tmp_path, wedge(KForm.basis(8, 7), phi))
    code, out, _ = run(capsys, 'lee', path)
    assert code == cli.EXIT_OK
    assert 'theta = -1/7 *(*dphi ^ phi) = e^{7}' in out
    assert '[ OK ] dphi = theta ^ phi' in out

def test_scan(capsys):
    code, out, _ = run(capsys, 'scan', '--grid', '0,1/2,1', '--output', 'json')
    assert code == cli.EXIT_OK
    instance = validate(out, 'scan.schema.json')
    assert instance['report']['grid_size'] == 81
    assert instance['literal']['report']['verdict'] is False
    for scan in instance['report']['conventions']:
        assert 'results' not in scan

def test_scan_verbose(capsys):
    code, out, _ = run(capsys, 'scan', '--grid', '0,1', '--output', 'json', '--verbose')
    assert code == cli.EXIT_OK
    instance = validate(out, 'scan.schema.json')
    for scan in instance['report']['conventions']:
        assert len(scan['results']) == 16

def test_scan_text(capsys):
    code, out, _ = run(capsys, 'scan', '--grid', '0,1/2,1')
    assert code == cli.EXIT_OK
    assert 'p + 2*s = 0; q - 2*r = 0' in out
    assert '(0, 1, 1/2, 0) W2 theta = e^{7}' in out

def test_scan_workers_default_to_cpu_count():
    args = cli.parse_main_args().parse_args(['scan'])
    assert args.workers == (os.cpu_count() or 1)
    args = cli.parse_main_args().parse_args(['scan', '--workers', '1'])
    assert args.workers == 1

def test_scan_empty_grid(capsys):
    code, _, err = run(capsys, 'scan', '--grid', '')
    assert code == cli.EXIT_USAGE
    assert 'empty grid' in err

def test_scan_literal_skipped(capsys):
    code, out, _ = run(capsys, 'scan', '--grid', '0,1', '--conventions', 'literal')
    assert code == cli.EXIT_OK
    assert 'not admissible, scan skipped' in out

def test_scan_angles(capsys):
    code, out, _ = run(capsys, 'scan', '--angles', '2')
    assert code == cli.EXIT_OK
    assert out.count('gamma=') == 4

def test_reconcile(capsys):
    code, out, _ = run(capsys, 'reconcile', '--no-flips')
    assert code == cli.EXIT_OK
    assert '[++-+] c=1/2 standard' in out
    assert 'flip' not in out
    assert 'as written' in out

def test_example(capsys):
    code, out, _ = run(capsys, 'example')
    assert code == cli.EXIT_OK
    assert 'SU(3)-structure on' in out
    assert '[ OK ] Jacobi identity' in out
    assert 'ratio -2/3' in out

def test_example_file(capsys):
    code, out, _ = run(capsys, 'example', str(MODELS / 'su2su2.lie'))
    assert code == cli.EXIT_OK
    assert 'SU(3)-structure on su2su2' in out

def test_mode_from_env(capsys, monkeypatch):
    monkeypatch.setenv(constants.MODE_ENV, 'float')
    code, out, _ = run(capsys, 'classify', str(MODELS / 'lcp_product.json'), '--output', 'json')
    assert code == cli.EXIT_OK
    assert json.loads(out)['mode'] == 'float'

def test_invalid_env_mode(capsys, monkeypatch):
    monkeypatch.setenv(constants.MODE_ENV, 'symbolic')
    code, _, err = run(capsys, 'reconcile')
    assert code == cli.EXIT_USAGE
    assert 'symbolic' in err

def test_tolerance_ignored_in_exact_mode(capsys):
    code, out, _ = run(capsys, 'classify', str(MODELS / 'abelian8.lie'), '--tolerance', '1e-3')
    assert code == cli.EXIT_OK
    assert 'exact mode: --tolerance ignored' in out

def test_json_is_deterministic(capsys):
    _, first, _ = run(capsys, 'reconcile', '--output', 'json')
    _, second, _ = run(capsys, 'reconcile', '--output', 'json')
    assert first == second
    validate(first, 'envelope.schema.json')

def test_no_subcommand(capsys):
    code, _, _ = run(capsys)
    assert code == cli.EXIT_USAGE
