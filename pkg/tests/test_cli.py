import csv
import io
import json

import pytest

from ffcusp import cli
from ffcusp.algebra import GF, Polynomial, RationalFunction
from ffcusp.cf import CFSpec, golden_spec
from ffcusp.errors import ParseError
from ffcusp.experiments import RateEstimate


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParse:
    def test_poly(self):
        F = GF(3)
        X = Polynomial.x(F)
        assert cli.parse_poly('X^2+2X+1', F) == X * X + 2 * X + 1
        assert cli.parse_poly('2*X^3', F) == 2 * X ** 3
        assert cli.parse_poly('4', F) == Polynomial.one(F)   # reduced mod 3
        assert cli.parse_poly('X + X', F) == 2 * X

    def test_extension_codes(self):
        F = GF(4)
        P = cli.parse_poly('{3}X+{2}', F)
        assert P.coeffs == (2, 3)
        with pytest.raises(ParseError):
            cli.parse_poly('{4}', F)

    def test_offsets(self):
        F = GF(3)
        with pytest.raises(ParseError) as info:
            cli.parse_poly('X^', F)
        assert info.value.offset == 2
        with pytest.raises(ParseError) as info:
            cli.parse_rational('X/1+', F)
        assert info.value.offset == 4

    def test_rational(self):
        F = GF(3)
        X = Polynomial.x(F)
        assert cli.parse_rational('1/X', F) == RationalFunction(Polynomial.one(F), X)
        with pytest.raises(ParseError):
            cli.parse_rational('1/0', F)

    def test_cf_spec(self):
        F = GF(3)
        assert cli.parse_cf_spec('0; | X', F) == golden_spec(F)
        spec = cli.parse_cf_spec('X^2; X, X^3', F)
        assert spec.period is None and len(spec.preperiod) == 2
        with pytest.raises(ParseError, match='a_2'):
            cli.parse_cf_spec('0; X, 2', F)
        with pytest.raises(ParseError):
            cli.parse_cf_spec('0; X |', F)

    def test_cf_roundtrip(self):
        F = GF(3)
        for text in ('0; | X', 'X^2; X, X^3', '1; X^2+1 | X, 2X+1'):
            spec = cli.parse_cf_spec(text, F)
            assert cli.parse_cf_spec(str(spec), F) == spec

    def test_matrix(self):
        F = GF(3)
        M = cli.parse_matrix('X, 1; 0, 1', F)
        assert M.a.to_polynomial() == Polynomial.x(F)
        with pytest.raises(ParseError):
            cli.parse_matrix('1, 0', F)


class TestEmit:
    def test_empty_estimate(self, capsys):
        est = RateEstimate()
        text = cli.emit({'json': {'records': [], 'running_sup': est.running, 'est': est}})
        obj = json.loads(text)
        assert obj['records'] == [] and obj['running_sup'] is None
        assert cli.load_estimate(obj['est']) == est
        capsys.readouterr()

    def test_no_floats(self):
        with pytest.raises(TypeError):
            cli.emit({'json': {'x': 0.5}})

    def test_csv(self, tmp_path):
        path = tmp_path / 'out.csv'
        cli.emit({'csv': (['a', 'b'], [[1, None]])}, 'csv', str(path))
        assert path.read_text() == 'a,b\n1,\n'


class TestCommands:
    def test_cf(self, capsys):
        code, out, _ = run(capsys, 'cf', '--family', 'golden', '--n', '4')
        assert code == 0
        obj = json.loads(out)
        assert obj['quotients'] == ['0', 'X', 'X', 'X', 'X']

    def test_rational_terminates(self, capsys):
        code, out, _ = run(capsys, 'cf', '--rational', '1/X+1', '--q', '2')
        obj = json.loads(out)
        assert code == 0 and obj['status'] == 'terminated'

    def test_delta(self, capsys):
        code, out, _ = run(capsys, 'delta', '--matrix', 'X^2, 0; 0, 1', '--degcap', '1')
        obj = json.loads(out)
        assert code == 0 and obj['delta'] == 2 and obj['brute_force'] == 2

    def test_orbit_schema(self, capsys):
        code, out, _ = run(capsys, 'orbit', '--family', 'golden', '--deg-max', '4')
        obj = json.loads(out)
        assert code == 0
        for key in ('q', 'f_spec', 'Qstar', 'psi', 'horizon', 'records', 'running_sup',
                    'tail_sup', 'estimate', 'cf_side', 'nu_estimate', 'constants_observed', 'seed'):
            assert key in obj
        code, out, _ = run(capsys, 'orbit', '--family', 'golden', '--deg-max', '4', '--format', 'csv')
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ['deg_g', 'tail_seed', 'delta', 'ratio_num', 'ratio_den', 'convergent']
        assert len(rows) - 1 == len(obj['records'])

    @pytest.mark.parametrize('cmd', ['orbit', 'excursion', 'check', 'theta', 'exponent', 'convergents'])
    def test_deterministic(self, capsys, cmd):
        argv = [cmd, '--family', 'golden', '--deg-max', '5', '--T', '9', '--n', '8', '--seed', '3']
        a = run(capsys, *argv)
        b = run(capsys, *argv)
        assert a[0] == 0 and a == b

    def test_excursion_csv(self, capsys):
        code, out, _ = run(capsys, 'excursion', '--family', 'golden', '--T', '5', '--format', 'csv')
        assert out == 't,delta\n0,0\n1,1\n2,0\n3,1\n4,0\n'

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / 'x.json'
        code, out, _ = run(capsys, 'cf', '--family', 'golden', '--out', str(path))
        assert code == 0 and out == ''
        assert json.loads(path.read_text())['command'] == 'cf'


class TestExitCodes:
    def test_parse_error(self, capsys):
        code, _, err = run(capsys, 'cf', '--rational', 'X^')
        assert code == 2 and 'error' in err

    def test_missing_source(self, capsys):
        assert run(capsys, 'cf')[0] == 2

    def test_bad_q(self, capsys):
        assert run(capsys, 'cf', '--family', 'golden', '--q', '6')[0] == 2

    def test_char_two_quadratic(self, capsys):
        assert run(capsys, 'cf', '--quadratic', 'X; 2', '--q', '2')[0] == 2

    def test_precision_cap(self, capsys):
        code, _, err = run(capsys, 'cf', '--family', 'golden', '--n', '500', '--prec', '16', '--cap', '64')
        assert code == 3 and 'precision' in err

    def test_budget(self, capsys):
        code, _, _ = run(capsys, 'delta', '--matrix', 'X, 0; 0, 1', '--degcap', '4')
        assert code == 4

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(['frobnicate'])
        assert info.value.code == 2
