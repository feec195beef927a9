"""Command-line front end.

    python -m ffcusp <command> [options]

Commands: cf, convergents, exponent, delta, orbit, excursion, check, theta.
Exit codes: 0 success, 2 parse error, 3 precision cap, 4 budget refusal.
"""

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from .algebra import GF, FieldSpec, Polynomial, RationalFunction, render_poly
from .bttree import Mat2
from .cf import CFSource, CFSpec, cf_expand, convergents, pow2_rule, quadratic_from_equation
from .errors import BudgetExceeded, CharacteristicTwoError, NoRootError, ParseError, PrecisionExhausted
from .experiments import (
    PsiSpec,
    RateEstimate,
    corollary44_check,
    cf_side_rate,
    excursion_profile,
    exponent_estimate,
    ext_to_json,
    nu_estimate,
    orbit_sweep,
    profile_peaks,
    theta_profile,
)
from .laurent import PREC_CAP, RationalSource, series_from_rational
from .reduction import brute_force_delta, delta_congruence, gauss_reduce

COMMANDS = ('cf', 'convergents', 'exponent', 'delta', 'orbit', 'excursion', 'check', 'theta')


# -- parsing -----------------------------------------------------------------

class _Scanner:
    def __init__(self, text, base=0):
        self.text = text
        self.pos = 0
        self.base = base

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] == ' ':
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def error(self, msg):
        raise ParseError(msg, self.base + self.pos)

    def take(self, ch):
        if self.peek() != ch:
            self.error(f'expected {ch!r}')
        self.pos += 1

    def nat(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error('expected a number')
        return int(self.text[start:self.pos])


def _coeff(sc, F):
    if sc.peek() == '{':
        sc.take('{')
        at = sc.pos
        n = sc.nat()
        sc.take('}')
        if n >= F.q:
            raise ParseError(f'field element code {n} is not below q = {F.q}', sc.base + at)
        return n
    n = sc.nat()
    return n % F.p


def _term(sc, F):
    """Returns (coefficient, exponent)."""
    c = 1
    if sc.peek() != 'X':
        c = _coeff(sc, F)
        if sc.peek() == '*':
            sc.take('*')
            if sc.peek() != 'X':
                sc.error("expected 'X'")
        elif sc.peek() != 'X':
            return c, 0
    sc.take('X')
    e = 1
    if sc.peek() == '^':
        sc.take('^')
        e = sc.nat()
    return c, e


def _poly(sc, F):
    coeffs = {}
    while True:
        c, e = _term(sc, F)
        coeffs[e] = F.add(coeffs.get(e, 0), c)
        if sc.peek() != '+':
            break
        sc.take('+')
    top = max(coeffs)
    return Polynomial(F, [coeffs.get(i, 0) for i in range(top + 1)])


def parse_poly(text, field, base=0):
    """poly := term ('+' term)*; term := coeff | coeff '*'? 'X' ('^' nat)? |
    'X' ('^' nat)?; coeff := nat (reduced mod p) or {code} for q = p^e."""
    sc = _Scanner(text, base)
    if not sc.peek():
        sc.error('empty polynomial')
    P = _poly(sc, field)
    if sc.peek():
        sc.error(f'unexpected {sc.peek()!r}')
    return P


def parse_rational(text, field):
    """'P' or 'P/Q'."""
    num, slash, den = text.partition('/')
    P = parse_poly(num, field)
    if not slash:
        return RationalFunction(P)
    Q = parse_poly(den, field, base=len(num) + 1)
    if not Q:
        raise ParseError('zero denominator', len(num) + 1)
    return RationalFunction(P, Q)


def _poly_list(text, field, base):
    out = []
    pos = 0
    for chunk in text.split(','):
        if chunk.strip():
            out.append(parse_poly(chunk, field, base + pos))
        pos += len(chunk) + 1
    return out


def parse_cf_spec(text, field):
    """'a0 ; a1, a2, ... [| p1, p2, ...]' with '|' starting the period."""
    head, semi, rest = text.partition(';')
    a0 = parse_poly(head, field)
    pre_text, bar, per_text = rest.partition('|')
    base = len(head) + 1
    pre = _poly_list(pre_text, field, base)
    per = None
    if bar:
        per = _poly_list(per_text, field, base + len(pre_text) + 1)
        if not per:
            raise ParseError('empty period after |', base + len(pre_text))
    for i, a in enumerate(pre + (per or []), start=1):
        if a.deg < 1:
            raise ParseError(f'partial quotient a_{i} = {a} has degree {a.deg}; need >= 1',
                             text.find(str(a), base) if str(a) in text[base:] else base)
    return CFSpec(a0, tuple(pre), tuple(per) if per is not None else None)


def parse_matrix(text, field):
    """'a, b; c, d' with rational entries."""
    rows = text.split(';')
    if len(rows) != 2:
        raise ParseError("matrix needs two rows separated by ';'", 0)
    ents = []
    pos = 0
    for row in rows:
        cells = row.split(',')
        if len(cells) != 2:
            raise ParseError('each matrix row needs two entries', pos)
        for cell in cells:
            r = parse_rational(cell, field)
            ents.append(r)
            pos += len(cell) + 1
    if all(r.is_polynomial() for r in ents):
        return Mat2(field, *(r.num for r in ents))
    return Mat2(field, *(series_from_rational(r, PREC_CAP) for r in ents))


def make_field(q, modulus=None):
    F0 = FieldSpec.from_q(q)
    if modulus is None:
        return GF(q)
    if F0.e == 1:
        raise ParseError('--modulus only applies to q = p^e with e > 1', 0)
    m = parse_poly(modulus, GF(F0.p))
    try:
        return FieldSpec(F0.p, F0.e, m.coeffs)
    except ValueError as exc:
        raise ParseError(str(exc), 0) from exc


# -- emission ----------------------------------------------------------------

def _json_default(x):
    if isinstance(x, Fraction):
        return ext_to_json(x)
    if isinstance(x, RateEstimate):
        return x.to_json()
    if isinstance(x, float):
        if x == math.inf:
            return 'inf'
        raise TypeError('floats are not emitted')
    if isinstance(x, (Polynomial, RationalFunction, CFSpec)):
        return str(x)
    raise TypeError(f'cannot serialise {type(x).__name__}')


def _fix(obj):
    """Replace inf floats and Fractions before json sees them."""
    if isinstance(obj, dict):
        return {k: _fix(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_fix(v) for v in obj]
    if isinstance(obj, float):
        if obj != math.inf:
            raise TypeError('floats are not emitted')
        return ext_to_json(obj)
    if isinstance(obj, Fraction):
        return ext_to_json(obj)
    if isinstance(obj, RateEstimate):
        return obj.to_json()
    return obj


def emit(result, fmt='json', path=None):
    """Write ``result`` ({'json': obj, 'csv': (header, rows)}) to ``path`` or stdout."""
    if fmt == 'json':
        text = json.dumps(_fix(result['json']), indent=2, default=_json_default) + '\n'
    elif fmt == 'csv':
        header, rows = result['csv']
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator='\n')
        w.writerow(header)
        for row in rows:
            w.writerow(['' if v is None else v for v in row])
        text = buf.getvalue()
    else:
        raise ValueError(f'unknown format {fmt!r}')
    if path is None or path == '-':
        sys.stdout.write(text)
    else:
        with open(path, 'w', encoding='utf-8') as fh:
            fh.write(text)
    return text


def load_estimate(obj):
    """Rebuild a RateEstimate from emitted JSON."""
    return RateEstimate.from_json(obj)


# -- commands ----------------------------------------------------------------

def _source(args, F):
    """(SeriesSource, description, cf-like or None)."""
    given = [x for x in (args.rational, args.cf, args.quadratic, args.family) if x]
    if len(given) != 1:
        raise ParseError('give exactly one of --rational, --cf, --quadratic, --family', 0)
    if args.rational:
        r = parse_rational(args.rational, F)
        return RationalSource(r), f'rational {r}', None
    if args.cf:
        spec = parse_cf_spec(args.cf, F)
        return CFSource(spec), str(spec), spec
    if args.quadratic:
        b, _, c = args.quadratic.partition(';')
        br, cr = parse_rational(b, F), parse_rational(c, F)
        try:
            src = quadratic_from_equation(br, cr, args.prec)
        except (CharacteristicTwoError, NoRootError) as exc:
            raise ParseError(str(exc), 0) from exc
        return src, f'root of f^2+({br})f+({cr})', None
    if args.family == 'golden':
        spec = parse_cf_spec('0; | X', F)
        return CFSource(spec), str(spec), spec
    if args.family == 'pow2':
        rule = pow2_rule(F)
        return CFSource(rule), rule.name, rule
    raise ParseError(f'unknown family {args.family!r}', 0)


def _quotients(src, cfl, n, args):
    if cfl is not None and args.cap >= PREC_CAP:
        qs = cfl.quotients(n)
        return qs, 'complete' if len(qs) == n + 1 else 'terminated'
    exp = cf_expand(src, n, min(args.prec, args.cap), args.cap)
    return exp.quotients, exp.status.value


def _qstar(args, F):
    Q = parse_poly(args.Qstar, F)
    if not Q:
        raise ParseError('Q* must be nonzero', 0)
    return Q


def _header(args, F, desc):
    return {'command': args.command, 'q': F.q, 'f_spec': desc, 'seed': args.seed}


def cmd_cf(args, F):
    src, desc, cfl = _source(args, F)
    qs, status = _quotients(src, cfl, args.n, args)
    obj = _header(args, F, desc)
    obj.update({'quotients': [render_poly(a) for a in qs], 'status': status})
    rows = [(i, render_poly(a), a.deg) for i, a in enumerate(qs)]
    return {'json': obj, 'csv': (['n', 'a_n', 'deg'], rows)}


def cmd_convergents(args, F):
    src, desc, cfl = _source(args, F)
    qs, status = _quotients(src, cfl, args.n, args)
    cs = convergents(qs)
    obj = _header(args, F, desc)
    obj.update({'status': status, 'convergents': [
        {'n': c.n, 'P': render_poly(c.P), 'Q': render_poly(c.Q), 'deg_Q': c.Q.deg}
        for c in cs]})
    rows = [(c.n, render_poly(c.P), render_poly(c.Q), c.Q.deg) for c in cs]
    return {'json': obj, 'csv': (['n', 'P', 'Q', 'deg_Q'], rows)}


def cmd_exponent(args, F):
    src, desc, cfl = _source(args, F)
    Q = _qstar(args, F)
    qs, status = _quotients(src, cfl, args.n + 1, args)
    N = min(args.n, len(qs) - 2)
    expo = exponent_estimate(qs, Q, N)
    side = cf_side_rate(qs, Q, N)
    obj = _header(args, F, desc)
    obj.update({'Qstar': render_poly(Q), 'horizon': N, 'exponent': expo,
                'cf_side': side, 'nu_estimate': nu_estimate(expo)})
    rows = [(n, v.numerator, v.denominator, w.numerator, w.denominator)
            for (n, v), (_, w) in zip(expo.history, side.history)]
    return {'json': obj, 'csv': (['n', 'expo_num', 'expo_den', 'cf_num', 'cf_den'], rows)}


def cmd_delta(args, F):
    if not args.matrix:
        raise ParseError('delta needs --matrix "a, b; c, d"', 0)
    M = parse_matrix(args.matrix, F)
    Q = _qstar(args, F)
    res = gauss_reduce(M)
    obj = {'command': 'delta', 'q': F.q, 'matrix': args.matrix, 'Qstar': render_poly(Q),
           'delta': res.delta, 'delta_Qstar': delta_congruence(M, Q),
           'minima': list(res.minima),
           'gamma0': [[render_poly(x) for x in row] for row in res.gamma0]}
    if args.degcap is not None:
        obj['brute_force'] = brute_force_delta(M, args.degcap, Q if Q.deg > 0 else None,
                                               budget=args.budget)
    rows = [(obj['delta'], obj['delta_Qstar'], obj.get('brute_force'))]
    return {'json': obj, 'csv': (['delta', 'delta_Qstar', 'brute_force'], rows)}


def _orbit_json(args, F, desc, Q, psi, records, est, extra=None):
    obj = {'q': F.q, 'f_spec': desc, 'Qstar': render_poly(Q), 'psi': str(psi),
           'horizon': [args.deg_min, args.deg_max],
           'records': [r.to_json() for r in records],
           'running_sup': ext_to_json(est.running),
           'tail_sup': ext_to_json(est.tail),
           'estimate': est.to_json(),
           'cf_side': None, 'nu_estimate': None, 'constants_observed': {},
           'seed': args.seed}
    obj.update(extra or {})
    return obj


def _orbit_csv(records):
    rows = [(r.deg_g, r.tail_seed, r.delta, r.ratio.numerator, r.ratio.denominator,
             r.convergent) for r in records]
    return ['deg_g', 'tail_seed', 'delta', 'ratio_num', 'ratio_den', 'convergent'], rows


def cmd_orbit(args, F):
    src, desc, cfl = _source(args, F)
    if src.is_rational():
        raise ParseError('orbit sweeps need an irrational f', 0)
    Q = _qstar(args, F)
    records, est = orbit_sweep(src, Q, (args.deg_min, args.deg_max), args.samples,
                               args.tail_depth, args.extremal, args.seed, args.prec)
    psi = PsiSpec.parse(args.psi)
    return {'json': _orbit_json(args, F, desc, Q, psi, records, est),
            'csv': _orbit_csv(records)}


def cmd_excursion(args, F):
    src, desc, cfl = _source(args, F)
    Q = parse_poly(args.Qstar, F) if args.Qstar != '1' else None
    prof = excursion_profile(src, args.T, Q, args.prec)
    obj = _header(args, F, desc)
    obj.update({'T': args.T, 'profile': [[t, d] for t, d in prof],
                'peaks': [[t, d] for t, d in profile_peaks(prof)]})
    return {'json': obj, 'csv': (['t', 'delta'], prof)}


def cmd_check(args, F):
    src, desc, cfl = _source(args, F)
    if src.is_rational():
        raise ParseError('the three-way check needs an irrational f', 0)
    Q = _qstar(args, F)
    psi = PsiSpec.parse(args.psi)
    h = {'deg_min': args.deg_min, 'deg_max': args.deg_max, 'samples': args.samples,
         'tail_depth': args.tail_depth, 'N': args.n, 'T': args.T, 'seed': args.seed,
         'extremal': args.extremal}
    rep = corollary44_check(src, Q, psi, h)
    extra = {
        'a_psi': rep['a_psi'],
        'lhs': rep['lhs'],
        'rhs': rep['rhs'],
        'predicted': rep['predicted'],
        'gap': rep['gap'],
        'cf_side': rep['cf_side'],
        'exponent': rep['exponent'],
        'nu_estimate': rep['nu_estimate'],
        'constants_observed': rep['constants_observed'],
    }
    lhs = rep['lhs']
    obj = _orbit_json(args, F, desc, Q, psi, rep['records'], lhs, extra)
    return {'json': obj, 'csv': _orbit_csv(rep['records'])}


def cmd_theta(args, F):
    src, desc, cfl = _source(args, F)
    rows = theta_profile(src, args.deg_max, args.samples * args.deg_max, args.seed,
                         args.tail_depth, args.prec)
    obj = _header(args, F, desc)
    obj.update({'log_s': [k for k, _ in rows], 'theta': [b for _, b in rows]})
    return {'json': obj, 'csv': (['log_q_s', 'theta'], rows)}


HANDLERS = {
    'cf': cmd_cf, 'convergents': cmd_convergents, 'exponent': cmd_exponent,
    'delta': cmd_delta, 'orbit': cmd_orbit, 'excursion': cmd_excursion,
    'check': cmd_check, 'theta': cmd_theta,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--q', type=int, default=3)
    common.add_argument('--modulus', help='irreducible polynomial over F_p for q = p^e')
    common.add_argument('--rational', help='f = P/Q')
    common.add_argument('--cf', help='continued fraction "a0; a1, a2 | p1, p2"')
    common.add_argument('--quadratic', help='f^2 + b f + c = 0 given as "b; c"')
    common.add_argument('--family', choices=('golden', 'pow2'))
    common.add_argument('--prec', type=int, default=64)
    common.add_argument('--cap', type=int, default=PREC_CAP, help='precision cap for refinement')
    common.add_argument('--Qstar', default='1')
    common.add_argument('--n', type=int, default=20, help='number of partial quotients / CF horizon')
    common.add_argument('--T', type=int, default=41, help='number of excursion vertices')
    common.add_argument('--deg-min', type=int, default=1)
    common.add_argument('--deg-max', type=int, default=17)
    common.add_argument('--samples', type=int, default=2)
    common.add_argument('--tail-depth', type=int, default=4)
    common.add_argument('--extremal', action=argparse.BooleanOptionalAction, default=True)
    common.add_argument('--psi', default='id')
    common.add_argument('--matrix', help='lattice basis "a, b; c, d"')
    common.add_argument('--degcap', type=int, help='also run the brute-force oracle')
    common.add_argument('--budget', type=int, default=3 ** 16)
    common.add_argument('--format', choices=('json', 'csv'), default='json')
    common.add_argument('--out', default=None)
    common.add_argument('--seed', type=int, default=0)
    parser = argparse.ArgumentParser(prog='ffcusp', description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest='command', required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if not 1 <= args.prec <= PREC_CAP or not 1 <= args.cap <= PREC_CAP:
            raise ParseError(f'--prec and --cap must lie in 1..{PREC_CAP}', 0)
        F = make_field(args.q, args.modulus)
        result = HANDLERS[args.command](args, F)
        emit(result, args.format, args.out)
    except (ParseError, ValueError) as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 2
    except PrecisionExhausted as exc:
        print(f'precision cap reached: {exc}', file=sys.stderr)
        return 3
    except BudgetExceeded as exc:
        print(f'refused: {exc}', file=sys.stderr)
        return 4
    except OSError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
