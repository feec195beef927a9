"""Exact arithmetic in F_q, A = F_q[X] and K = F_q(X).

Field elements are encoded as integers in ``range(q)``.  For a prime field
that integer is the residue mod p; for an extension of degree e it packs the
coefficient vector of the residue polynomial in base p (digit i is the
coefficient of t^i, t a root of the modulus).

Polynomials store a tuple of such integers, lowest degree first, with a
nonzero last entry.  The zero polynomial has an empty tuple and degree
``-inf``; nothing in this module ever uses an integer stand-in for it.
"""

import functools
import math
from fractions import Fraction

import numpy as np

NEG_INF = -math.inf

# above this many terms prime-field products go through numpy
_NUMPY_MIN_LEN = 24


def _is_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


class FieldSpec:
    """The finite field F_q with q = p**e."""

    __slots__ = ('p', 'e', 'modulus', 'q', '_log', '_exp', '_sqrt')

    def __init__(self, p, e=1, modulus=None):
        if not _is_prime(p):
            raise ValueError(f'characteristic {p} is not prime')
        if e < 1:
            raise ValueError('extension degree must be >= 1')
        self.p = p
        self.e = e
        self.q = p ** e
        self._sqrt = None
        if e == 1:
            self.modulus = None
            self._log = self._exp = None
            return
        if modulus is None:
            modulus = _first_irreducible(p, e)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] == 0:
            raise ValueError(f'modulus must have degree {e}')
        inv = pow(modulus[-1], -1, p)
        modulus = tuple(c * inv % p for c in modulus)
        if not _is_irreducible(p, modulus):
            raise ValueError('modulus is not irreducible')
        self.modulus = modulus
        self._build_tables()

    @classmethod
    def from_q(cls, q, modulus=None):
        for p in range(2, q + 1):
            if q % p == 0:
                break
        e = 0
        n = q
        while n % p == 0:
            n //= p
            e += 1
        if n != 1 or not _is_prime(p):
            raise ValueError(f'{q} is not a prime power')
        return cls(p, e, modulus)

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.p == other.p
                and self.e == other.e and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f'GF({self.p})'
        return f'GF({self.p}^{self.e})'

    # -- element arithmetic on integer codes ---------------------------------

    def _digits(self, a):
        p = self.p
        out = []
        for _ in range(self.e):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def _undigits(self, ds):
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        return self._undigits([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a):
        if self.e == 1:
            return -a % self.p
        p = self.p
        return self._undigits([-x % p for x in self._digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError('inverse of zero in a finite field')
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._exp[-self._log[a] % (self.q - 1)]

    def sqrt(self, a):
        """A square root of ``a`` or None when ``a`` is not a square."""
        if self._sqrt is None:
            table = {}
            for x in range(self.q):
                table.setdefault(self.mul(x, x), x)
            self._sqrt = table
        return self._sqrt.get(a)

    def reduce(self, n):
        """Map an integer literal into the field (through the prime subfield)."""
        return int(n) % self.p

    def _build_tables(self):
        # multiplication of residue polynomials mod the modulus, digit-wise
        p, e, mod = self.p, self.e, self.modulus

        def slow_mul(x, y):
            xs, ys = self._digits(x), self._digits(y)
            prod = [0] * (2 * e - 1)
            for i, a in enumerate(xs):
                if a:
                    for j, b in enumerate(ys):
                        prod[i + j] = (prod[i + j] + a * b) % p
            for k in range(2 * e - 2, e - 1, -1):
                c = prod[k]
                if c:
                    for i in range(e + 1):
                        prod[k - e + i] = (prod[k - e + i] - c * mod[i]) % p
            return self._undigits(prod[:e])

        q = self.q
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = slow_mul(x, g)
            if len(exp) == q - 1:
                break
        else:  # pragma: no cover - a generator always exists
            raise RuntimeError('no primitive element found')
        self._exp = exp
        self._log = {x: i for i, x in enumerate(exp)}


@functools.cache
def GF(q):
    """Cached FieldSpec for q (default modulus for prime powers)."""
    return FieldSpec.from_q(q)


def _prime_polymulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _prime_polymod([c % p for c in prod], m, p)


def _prime_polymod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] * inv % p
        if c:
            for i in range(dm + 1):
                a[k - dm + i] = (a[k - dm + i] - c * m[i]) % p
    a = a[:dm]
    while a and a[-1] == 0:
        a.pop()
    return a


def _is_irreducible(p, m):
    """Rabin-style check: gcd(m, X^{p^i} - X) = 1 for i <= deg/2 and m | X^{p^deg} - X."""
    F = FieldSpec(p)
    M = Polynomial(F, m)
    d = len(m) - 1
    x = Polynomial(F, (0, 1))
    xp = x
    for i in range(1, d + 1):
        xp = pow_mod(xp, p, M)
        if i <= d // 2 and gcd(xp - x, M).deg > 0:
            return False
    return (xp - x) % M == Polynomial.zero(F)


def _first_irreducible(p, e):
    for n in range(p ** e):
        tail = [(n // p ** i) % p for i in range(e)]
        if tail[0] == 0:
            continue
        m = tuple(tail) + (1,)
        if _is_irreducible(p, m):
            return m
    raise ValueError(f'no irreducible polynomial of degree {e} over GF({p})')


class FqElem:
    """A single element of F_q with operator overloading."""

    __slots__ = ('field', 'value')

    def __init__(self, field, value):
        if not 0 <= value < field.q:
            raise ValueError('element code out of range')
        self.field = field
        self.value = value

    @property
    def residue(self):
        if self.field.e == 1:
            return self.value
        return tuple(self.field._digits(self.value))

    def _other(self, other):
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise ValueError('elements of different fields')
            return other.value
        if isinstance(other, int):
            return self.field.reduce(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.sub(self.value, o))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return FqElem(self.field, self.field.mul(self.value, self.field.inv(o)))

    def inverse(self):
        return FqElem(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.reduce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f'FqElem({self.field!r}, {self.value})'


def _strip(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _prime_conv(a, b, p):
    if not a or not b:
        return ()
    if min(len(a), len(b)) >= _NUMPY_MIN_LEN:
        r = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p
        return tuple(int(c) for c in r)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(c % p for c in out)


def conv(field, a, b):
    """Product of coefficient sequences over ``field`` (not stripped)."""
    if field.e == 1:
        return _prime_conv(a, b, field.p)
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    add, mul = field.add, field.mul
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return tuple(out)


class Polynomial:
    """Element of A = F_q[X]; immutable.

    >>> F = GF(3)
    >>> X = Polynomial.x(F)
    >>> divmod(X**2 + 1, X)
    (Polynomial(GF(3), (0, 1)), Polynomial(GF(3), (1,)))
    """

    __slots__ = ('field', 'coeffs')

    def __init__(self, field, coeffs=()):
        self.field = field
        self.coeffs = _strip(coeffs)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field, c):
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field, n, c=1):
        return cls(field, (0,) * n + (c,))

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.field != self.field:
                raise ValueError('polynomials over different fields')
            return other
        if isinstance(other, int):
            return Polynomial(self.field, (self.field.reduce(other),))
        if isinstance(other, FqElem):
            return Polynomial(self.field, (other.value,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        F = self.field
        if F.e == 1:
            p = F.p
            out = [(x + y) % p for x, y in zip(a, b)]
        else:
            out = [F.add(x, y) for x, y in zip(a, b)]
        return Polynomial(F, tuple(out) + a[len(b):])

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        if F.e == 1:
            return Polynomial(F, tuple(-c % F.p for c in self.coeffs))
        return Polynomial(F, tuple(F.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial(self.field, conv(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by the field element code ``c``."""
        F = self.field
        if F.e == 1:
            return Polynomial(F, tuple(x * c % F.p for x in self.coeffs))
        return Polynomial(F, tuple(F.mul(x, c) for x in self.coeffs))

    def shift(self, n):
        """Multiply by X**n (n >= 0)."""
        if not self.coeffs:
            return self
        return Polynomial(self.field, (0,) * n + self.coeffs)

    def __pow__(self, n):
        if n < 0:
            raise ValueError('negative power of a polynomial')
        result = Polynomial.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.coeffs:
            raise ZeroDivisionError('polynomial division by zero')
        F = self.field
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(r) <= db:
            return Polynomial.zero(F), self
        inv = F.inv(b[-1])
        quot = [0] * (len(r) - db)
        if F.e == 1:
            p = F.p
            for k in range(len(r) - 1, db - 1, -1):
                c = r[k] * inv % p
                if c:
                    quot[k - db] = c
                    off = k - db
                    for i in range(db + 1):
                        r[off + i] = (r[off + i] - c * b[i]) % p
        else:
            for k in range(len(r) - 1, db - 1, -1):
                c = F.mul(r[k], inv)
                if c:
                    quot[k - db] = c
                    off = k - db
                    for i in range(db + 1):
                        r[off + i] = F.sub(r[off + i], F.mul(c, b[i]))
        return Polynomial(F, quot), Polynomial(F, r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if not self.coeffs:
            return self
        return self.scale(self.field.inv(self.coeffs[-1]))

    def __call__(self, x):
        """Evaluate at a field element code."""
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _strip((self.field.reduce(other),))
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f'Polynomial({self.field!r}, {self.coeffs})'

    def __str__(self):
        return render_poly(self)


def render_poly(f):
    """Canonical text form, e.g. ``X^2+2*X+1``; readable back by the parser."""
    if not f.coeffs:
        return '0'
    F = f.field
    terms = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if c == 0:
            continue
        if F.e == 1:
            cs = str(c)
        else:
            cs = f'{{{c}}}'
        if i == 0:
            terms.append(cs)
        else:
            mono = 'X' if i == 1 else f'X^{i}'
            terms.append(mono if c == 1 else f'{cs}*{mono}')
    return '+'.join(terms)


def gcd(a, b):
    """Monic gcd (zero when both inputs vanish)."""
    while b:
        a, b = b, a % b
    return a.monic()


def xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Polynomial.one(F), Polynomial.zero(F)
    t0, t1 = Polynomial.zero(F), Polynomial.one(F)
    while r1:
        qq, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qq * s1
        t0, t1 = t1, t0 - qq * t1
    if not r0:
        return r0, s0, t0
    inv = F.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def pow_mod(a, n, m):
    result = Polynomial.one(a.field) % m
    base = a % m
    while n:
        if n & 1:
            result = result * base % m
        base = base * base % m
        n >>= 1
    return result


def congruent_mod(a, m):
    """True iff ``m`` divides ``a``."""
    if not m:
        raise ZeroDivisionError('congruence modulo the zero polynomial')
    return not (a % m)


class RationalFunction:
    """Element P/Q of K = F_q(X), kept with Q monic and gcd(P, Q) = 1."""

    __slots__ = ('num', 'den')

    def __init__(self, num, den=None):
        if den is None:
            den = Polynomial.one(num.field)
        if not den:
            raise ZeroDivisionError('rational function with zero denominator')
        g = gcd(num, den)
        if g.deg > 0:
            num, den = num // g, den // g
        inv = den.field.inv(den.lc)
        self.num = num.scale(inv)
        self.den = den.scale(inv)

    @property
    def field(self):
        return self.num.field

    @property
    def deg(self):
        """deg P - deg Q; -inf for zero."""
        return self.num.deg - self.den.deg

    def is_zero(self):
        return not self.num

    def is_polynomial(self):
        return self.den.deg == 0

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (Polynomial, int, FqElem)):
            return RationalFunction(self.num._coerce(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError('division by zero rational function')
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f'RationalFunction({self.num!r}, {self.den!r})'

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f'({self.num})/({self.den})'


def abs_value(x):
    """|x| = q^deg as an exact Fraction, with |0| = 0."""
    if isinstance(x, Polynomial):
        d, q = x.deg, x.field.q
    elif isinstance(x, RationalFunction):
        d, q = x.deg, x.field.q
    else:
        raise TypeError('expected Polynomial or RationalFunction')
    if d == NEG_INF:
        return Fraction(0)
    return Fraction(q) ** d
