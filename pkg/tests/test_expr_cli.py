import json
import pytest
from gmpy2 import mpq
from helpers import chain_of, x
from SkewHopf import cli
from SkewHopf.lib.chain import ChainException, preset
from SkewHopf.lib.expr import ParseException, parse_expr
from SkewHopf.lib.ncpoly import NCPoly

def test_parse_word():
    assert parse_expr('x[0,1,2]*x[1,2,2]') == x(0, 1, 2) * x(1, 2, 2)

def test_parse_rational_coefficient():
    assert parse_expr('1 - 1/2 x[0,1,1]') == NCPoly.constant(1) - x(0, 1, 1).scale(mpq(1, 2))
    assert parse_expr('-3/4*x[-1,2,1] + 2') == NCPoly.constant(2) - x(-1, 2, 1).scale(mpq(3, 4))

def test_parse_parentheses_and_units():
    assert parse_expr('(x[0,1,1] + 1)*x[0,2,2]') == x(0, 1, 1) * x(0, 2, 2) + x(0, 2, 2)
    assert parse_expr('1*x[0,1,1]*1') == x(0, 1, 1)
    assert parse_expr('  x[ 0 , 1 , 1 ]  ') == x(0, 1, 1)

def test_parse_error_offsets():
    with pytest.raises(ParseException) as e:
        parse_expr('x[0,1')
    assert e.value.code == 'PARSE_ERROR'
    assert e.value.offset == 6
    with pytest.raises(ParseException) as e:
        parse_expr('x[0,1,1] $')
    assert e.value.offset == 10
    with pytest.raises(ParseException) as e:
        parse_expr('1/0 x[0,1,1]')
    assert e.value.offset == 3

def test_parse_checks_the_chain():
    chain = chain_of('collapse-m4', lo=-1, hi=1)
    with pytest.raises(ParseException) as e:
        parse_expr('x[0,1,1] + x[5,1,1]', chain)
    assert e.value.code == 'LEVEL_OUT_OF_WINDOW'
    assert e.value.offset == 14
    with pytest.raises(ParseException) as e:
        parse_expr('x[0,1,9]', chain)
    assert e.value.code == 'UNKNOWN_INDEX'
    assert e.value.offset == 7
    with pytest.raises(ParseException) as e:
        parse_expr('1 + x[0,3,1]', chain)
    assert e.value.code == 'LETTER_NOT_PRESENT'
    assert e.value.offset == 5
    assert e.value.exit_code == 1

def test_presence_rejects_unknown_indices():
    chain = chain_of('collapse-m4', lo=-1, hi=1)
    assert chain.present(0, '1', '4')
    with pytest.raises(ChainException) as e:
        chain.present(0, '1', '9')
    assert e.value.code == 'UNKNOWN_INDEX'

@pytest.mark.parametrize('text', ['1 - 1/2 x[0,1,1]', '-x[0,1,1]*x[1,2,1]', '0', '3 x[-1,3,1]*x[0,1,3]',
                                  '-2 + x[0,1,2] + x[0,2,2] + x[1,1,1]*x[0,1,1]'])
def test_print_parse_round_trip(text):
    p = parse_expr(text)
    assert str(p) == text
    assert parse_expr(str(p)) == p

def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err

def test_confluence_exit_codes(capsys):
    code, out, _ = run(capsys, 'confluence', '--preset', 'free-matrix', '--param', 'hi=2', '--assert-confluent')
    assert code == 0
    assert json.loads(out)['confluent']
    for name in ('needge2', 'collapse-m4'):
        code, out, _ = run(capsys, 'confluence', '--preset', name, '--assert-confluent')
        assert code == 3
        assert json.loads(out)['unresolved']

def test_confluence_from_a_chain_file(capsys, tmp_path):
    path = tmp_path / 'collapse-m4.json'
    code, out, _ = run(capsys, 'preset', 'collapse-m4', '--param', 'lo=-1', '--param', 'hi=1')
    assert code == 0
    path.write_text(out)
    code, out, _ = run(capsys, 'confluence', str(path))
    assert code == 0
    data = json.loads(out)
    assert not data['confluent']
    assert (data['ambiguities'], data['resolved']) == (76, 36)

def test_basis_count_oracle_mismatch(capsys):
    code, out, _ = run(capsys, 'basis-count', '--preset', 'collapse-m4', '--param', 'lo=0', '--param', 'hi=1',
                       '--max-len', '3', '--oracle')
    assert code == 3
    data = json.loads(out)
    assert (data['cumulative'], data['oracle'], data['match']) == (13277, 13273, False)

def test_normalize_echoes_input_in_rewrite_order(capsys):
    code, out, _ = run(capsys, 'normalize', '--preset', 'free-matrix', '--expr',
                       'x[0,1,2]*x[1,2,2] + x[0,1,1]*x[0,1,1]*x[0,1,1]')
    assert code == 0
    data = json.loads(out)
    assert data['input']['text'] == 'x[0,1,1]*x[0,1,1]*x[0,1,1] + x[0,1,2]*x[1,2,2]'
    assert data['normalForm']['text'] == '-x[0,1,1]*x[1,2,1] + x[0,1,1]*x[0,1,1]*x[0,1,1]'

def test_basis_count_with_oracle(capsys):
    code, out, _ = run(capsys, 'basis-count', '--preset', 'free-matrix', '--param', 'n=2', '--param', 'lo=0',
                       '--param', 'hi=1', '--max-len', '2', '--oracle')
    assert code == 0
    data = json.loads(out)
    assert data['counts'] == [1, 8, 56]
    assert data['oracle'] == 65

def test_error_exit_codes(capsys, monkeypatch):
    code, _, err = run(capsys, 'validate', '--preset', 'moebius')
    assert code == 1
    assert json.loads(err)['error'] == 'UNKNOWN_PRESET'
    code, _, err = run(capsys, 'normalize', '--preset', 'free-matrix', '--expr', 'x[0,1')
    assert code == 1
    assert json.loads(err)['error'] == 'PARSE_ERROR'
    code, _, err = run(capsys, 'hopf', '--preset', 'free-matrix', '--op', 'antipode', '--expr', 'x[1,1,2]')
    assert code == 2
    assert json.loads(err)['error'] == 'WINDOW_EXCEEDED'
    monkeypatch.setenv('SKEWHOPF_MAX_WORDS', '10')
    code, _, err = run(capsys, 'oracle', '--preset', 'free-matrix', '--max-len', '2')
    assert code == 2
    assert json.loads(err)['error'] == 'TOO_LARGE'
    code, _, err = run(capsys, 'frobnicate')
    assert code == 1
    assert json.loads(err)['error'] == 'BAD_USAGE'

def test_normalize(capsys):
    code, out, _ = run(capsys, 'normalize', '--preset', 'free-matrix', '--expr', 'x[1,1,1]*x[0,1,1] + x[1,2,1]*x[0,2,1]')
    assert code == 0
    assert json.loads(out)['normalForm']['text'] == '1'

def test_span_dim_and_rank(capsys):
    code, out, _ = run(capsys, 'span-dim', '--preset', 'collapse-m4', '--param', 'hi=0', '--expr', 'x[-1,3,1]*x[0,1,3]')
    assert code == 0
    data = json.loads(out)
    assert data['rightSpanDim'] >= data['firstBlockBound'] == 4
    code, out, _ = run(capsys, 'rank', '--preset', 'free-matrix', '--expr', 'x[0,1,1]*x[1,2,1] + x[0,1,1]')
    assert json.loads(out)['rank'] == [0, 1]

def test_lattice_and_comodule(capsys):
    code, out, _ = run(capsys, 'lattice', '--preset', 'collapse-m4', '--level', '1')
    assert code == 0
    assert json.loads(out)['lattice'] == [[], [2], [1, 2]]
    code, out, _ = run(capsys, 'comodule', '--preset', 'collapse-m4', '--level', '0', '--sub', '1,2', '--quotient', '1')
    assert code == 0
    assert len(json.loads(out)['coefficientCoalgebra']) == 4
    code, _, err = run(capsys, 'comodule', '--preset', 'collapse-m4', '--level', '0', '--sub', '2')
    assert code == 1
    assert json.loads(err)['error'] == 'NOT_A_SUBCOMODULE'

def test_report(capsys):
    code, out, _ = run(capsys, 'report', '--preset', 'growth', '--param', 'k=3')
    assert code == 0
    data = json.loads(out)
    assert data['growth']['verdict'] == 'doubling leftward'
    assert [row['minSimpleDim'] for row in data['growth']['levels']] == [8, 4, 2, 2]

def test_hopf_axioms_verb(capsys):
    code, out, _ = run(capsys, 'hopf', '--preset', 'collapse-m4', '--op', 'axioms')
    assert code == 0
    assert json.loads(out)['ok']

def test_pretty_output(capsys):
    code, out, _ = run(capsys, 'report', '--preset', 'collapse-m4', '--pretty')
    assert code == 0
    assert 'verdict: "bounded window"' in out

@pytest.mark.parametrize('name', sorted(['free-matrix', 'collapse-m4', 'needge2', 'growth']))
def test_reports_are_deterministic(capsys, name):
    for verb in ('rules', 'confluence', 'report'):
        first = run(capsys, verb, '--preset', name)
        second = run(capsys, verb, '--preset', name)
        assert first[1] == second[1]
        assert first[1]

def test_preset_output_round_trips(capsys):
    code, out, _ = run(capsys, 'preset', 'growth', '--param', 'k=2')
    assert code == 0
    assert json.loads(out) == preset('growth', k=2).to_json()
