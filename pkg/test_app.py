"""Command-line surface: exit codes, outputs and reproducibility."""

import json

import numpy as np
import pandas as pd
import pytest

from src.app import EXIT_FAILED, EXIT_OK, EXIT_REAL_AXIS, EXIT_USAGE, main, parse_grid, parse_lambda
from src.io.codec import matrix_to_json
from src.utils.sampling import random_hermitian, random_unitary


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def files(tmp_path, rng):
    A4 = _write(tmp_path / "A4.json", matrix_to_json(random_hermitian(rng, 4)))
    A5 = _write(tmp_path / "A5.json", matrix_to_json(random_hermitian(rng, 5)))
    A1 = _write(tmp_path / "A1.json", matrix_to_json([[0.0]]))
    W1 = _write(tmp_path / "W1.json", matrix_to_json([[1.0]]))
    W4 = _write(tmp_path / "W4.json", matrix_to_json(random_unitary(rng, 4)))
    f1 = _write(tmp_path / "f1.json", {
        'left': {'side': 'left', 'anchor': -1, 'dim': 1, 'atoms': [{'rate': [2, 1], 'coeff': [[1, 0]]}]},
        'right': {'side': 'right', 'anchor': 1, 'dim': 1, 'atoms': [{'rate': [-1, 0], 'coeff': [[0, 1]]}]},
    })
    broken = tmp_path / "broken.json"
    broken.write_text("[[1, 0")
    return {'A4': A4, 'A5': A5, 'A1': A1, 'W1': W1, 'W4': W4, 'f1': f1, 'broken': str(broken)}


def run(*argv):
    return main(['--no-progress', *argv])


def test_parse_grid():
    assert parse_grid("-1:1:3") == [-1.0, 0.0, 1.0]
    assert parse_grid("0.5, 1") == [0.5, 1.0]
    assert parse_grid("") == []


def test_parse_lambda():
    assert parse_lambda("0.5+1j") == 0.5 + 1j
    assert parse_lambda("0.5+1i") == 0.5 + 1j
    assert parse_lambda(" -2 - 0.25i ") == -2 - 0.25j
    assert parse_lambda("3") == 3
    with pytest.raises(ValueError):
        parse_lambda("abc")


def test_resolve_accepts_i_suffix(files, tmp_path):
    out = tmp_path / "res_i"
    assert run('resolve', '--A', files['A1'], '--W', files['W1'], '--lambda', '0.5+1i',
               '--f', files['f1'], '--out', str(out)) == EXIT_OK
    doc = json.loads((out / "resolvent.json").read_text())
    assert doc['branch'] == 'upper'
    assert run('resolve', '--A', files['A1'], '--lambda', 'half', '--f', files['f1']) == EXIT_USAGE


def test_green_check(files, tmp_path):
    out = tmp_path / "green"
    assert run('green-check', '--A', files['A4'], '--trials', '1000', '--out', str(out)) == EXIT_OK
    report = json.loads((out / "green_check.json").read_text())
    assert report['passed'] and report['trials'] == 1000 and report['dim'] == 4
    assert report['max_defect'] < 1e-10
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest['command'] == 'green-check'
    assert manifest['seed'] == report['seed']


def test_green_check_smallest_case(files):
    assert run('green-check', '--A', files['A1'], '--trials', '1') == EXIT_OK


def test_green_check_corrupt_input(files):
    assert run('green-check', '--A', files['broken']) == EXIT_USAGE


def test_deficiency(files, tmp_path):
    out = tmp_path / "def"
    assert run('deficiency', '--A', files['A5'], '--out', str(out)) == EXIT_OK
    report = json.loads((out / "deficiency.json").read_text())
    assert (report['left']['m'], report['left']['n']) == (0, 5)
    assert (report['right']['m'], report['right']['n']) == (5, 0)
    assert run('deficiency', '--A', files['broken']) == EXIT_USAGE


def test_resolve(files, tmp_path):
    out = tmp_path / "res"
    code = run('resolve', '--A', files['A1'], '--W', files['W1'], '--lambda', '0.5+1j',
               '--f', files['f1'], '--out', str(out))
    assert code == EXIT_OK
    doc = json.loads((out / "resolvent.json").read_text())
    assert doc['branch'] == 'upper'
    assert doc['residual'] < 1e-10
    assert run('resolve', '--A', files['A1'], '--lambda=-0.5-2j', '--f', files['f1']) == EXIT_OK


def test_resolve_on_real_axis(files):
    assert run('resolve', '--A', files['A1'], '--lambda', '0.5', '--f', files['f1']) == EXIT_REAL_AXIS


def test_resolve_dimension_mismatch(files):
    assert run('resolve', '--A', files['A4'], '--W', files['W4'], '--lambda', '1j',
               '--f', files['f1']) == EXIT_USAGE


def test_spectrum_scan_example(tmp_path):
    out = tmp_path / "scan"
    assert run('spectrum-scan', '--example', '--out', str(out)) == EXIT_OK
    table = pd.read_csv(out / "scan.csv")
    assert len(table) == 63
    assert table['satisfied'].all()
    rows = json.loads((out / "scan.json").read_text())
    assert all(r['full_ratio'] >= r['witness_ratio'] for r in rows)


def test_spectrum_scan_from_files(files, tmp_path):
    code = run('spectrum-scan', '--A', files['A4'], '--W', files['W4'],
               '--grid-re', '-1,0,1', '--grid-im', '0.5', '--out', str(tmp_path / "s"))
    assert code == EXIT_OK


def test_spectrum_scan_far_anchors(files, tmp_path):
    for a, b in (('38', '40'), ('-42', '-40'), ('798', '800')):
        out = tmp_path / f"far{b}"
        code = run('spectrum-scan', '--A', files['A1'], '--a', a, '--b', b,
                   '--grid-re', '0', '--grid-im', '10,1', '--out', str(out))
        assert code == EXIT_OK
        table = pd.read_csv(out / "scan.csv")
        assert list(table['witness_ratio']) == pytest.approx([0.5, 0.05], rel=1e-12)


def test_spectrum_scan_empty_grid():
    with pytest.raises(SystemExit) as e:
        run('spectrum-scan', '--example', '--grid-re', '')
    assert e.value.code == EXIT_USAGE


def test_point_spectrum(tmp_path):
    out = tmp_path / "ps"
    assert run('point-spectrum', '--modes', '4', '--control', '0.3', '--out', str(out)) == EXIT_OK
    table = pd.read_csv(out / "point_spectrum.csv")
    assert len(table) == 11 * 5 + 1
    assert list(table['verdict'][:-1].unique()) == ['not-eigenvalue']
    assert table['verdict'].iloc[-1] == 'inconclusive'


def test_example_outputs_are_reproducible(tmp_path):
    args = ['example', '--modes', '8', '--phi', str(np.pi / 3), '--fields', '-3,-2,2,3']
    assert run(*args, '--out', str(tmp_path / "one")) == EXIT_OK
    assert run(*args, '--out', str(tmp_path / "two")) == EXIT_OK
    for name in ('scan.csv', 'resolvents.csv', 'point_spectrum.csv', 'fields.csv'):
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()
    fields = pd.read_csv(tmp_path / "one" / "fields.csv")
    assert list(fields.columns) == ['t', 'x', 're_u', 'im_u']
    assert len(fields) == 4 * 129


def test_example_config_file(tmp_path):
    cfg = _write(tmp_path / "cfg.json", {'n_modes': 3, 'phi': 1.0})
    out = tmp_path / "ex"
    assert run('example', '--config', cfg, '--grid-re', '-1,1', '--grid-im', '0.5', '--out', str(out)) == EXIT_OK
    assert json.loads((out / "manifest.json").read_text())['outputs'] == [
        'point_spectrum.csv', 'resolvents.csv', 'scan.csv', 'scan.json']


def test_failure_exit_code_constant():
    assert EXIT_FAILED == 1
