"""Exact arithmetic in the parameter field Q(p, q, s).

Every scalar in the package is a RationalFunction: a quotient of integer
polynomials in the deformation parameters p, q and the sphere parameter s.
Negative powers of q are always represented with q-powers in the denominator,
so exponents stay non-negative throughout.

Canonical form of a fraction: numerator and denominator share no integer
content and no common monomial factor, and the denominator's leading term
(graded-lex, s over q over p) has a positive coefficient.  That reduction is
cheap and always applied; full polynomial gcd reduction is an optional
optimization (`gcd_reduction`).  Equality never relies on canonical forms
being unique: it is a cross-multiplication zero test.
"""

from __future__ import annotations

import contextlib
import threading
from fractions import Fraction
from math import gcd

from . import _kernel as K

BigRational = Fraction

_VAR_KEYS = {"p": K.pack(1, 0, 0), "q": K.pack(0, 1, 0), "s": K.pack(0, 0, 1)}
_VAR_NAMES = ("p", "q", "s")


class FieldError(ValueError):
    """Base class for parameter-field errors."""


class DivisionByZero(FieldError):
    """Division by the zero rational function."""


class PoleAtPoint(FieldError):
    """Evaluation at a point where the denominator vanishes."""


class ParseError(FieldError):
    """Malformed rational-function expression string."""


_gcd_state = threading.local()


def _gcd_enabled():
    return getattr(_gcd_state, "on", False)


def gcd_active():
    """Whether gcd reduction is currently enabled on this thread."""
    return _gcd_enabled()


@contextlib.contextmanager
def gcd_reduction(enabled=True):
    """Enable full gcd reduction of fractions inside the context.

    Off by default: correctness never needs it (equality and integrality are
    cross-multiplication tests), it only controls expression growth in long
    chains of additions.
    """
    prev = _gcd_enabled()
    _gcd_state.on = enabled
    try:
        yield
    finally:
        _gcd_state.on = prev


def _sympy_gcd(n, d):
    """Reduce the pair of coefficient dicts by their polynomial gcd."""
    import sympy

    gens = sympy.symbols("p q s")
    pn = sympy.Poly.from_dict({K.unpack(k): v for k, v in n.items()}, *gens, domain="ZZ")
    pd = sympy.Poly.from_dict({K.unpack(k): v for k, v in d.items()}, *gens, domain="ZZ")
    g = pn.gcd(pd)
    if g.is_ground:
        return n, d
    qn = pn.exquo(g)
    qd = pd.exquo(g)
    n2 = {K.pack(*e): int(c) for e, c in qn.rep.to_dict().items()}
    d2 = {K.pack(*e): int(c) for e, c in qd.rep.to_dict().items()}
    return n2, d2


class MultiPoly:
    """Polynomial in p, q, s with exact rational coefficients.

    Stored as an integer-coefficient term dict plus one positive common
    denominator, normalized so the overall content is 1.  Structural equality
    coincides with mathematical equality.
    """

    __slots__ = ("_t", "_d")

    def __init__(self, terms=None, den=1):
        if terms is None:
            terms = {}
        if den == 0:
            raise DivisionByZero("zero denominator in MultiPoly")
        t, d = _norm_poly(terms, den)
        self._t = t
        self._d = d

    @classmethod
    def _raw(cls, t, d):
        obj = object.__new__(cls)
        obj._t = t
        obj._d = d
        return obj

    @classmethod
    def zero(cls):
        return cls._raw({}, 1)

    @classmethod
    def one(cls):
        return cls._raw({0: 1}, 1)

    @classmethod
    def const(cls, value):
        f = Fraction(value)
        if f == 0:
            return cls.zero()
        return cls._raw({0: f.numerator}, f.denominator)

    @classmethod
    def var(cls, name):
        try:
            return cls._raw({_VAR_KEYS[name]: 1}, 1)
        except KeyError:
            raise FieldError(f"unknown variable {name!r}") from None

    @classmethod
    def monomial(cls, exponents, coeff=1):
        f = Fraction(coeff)
        if f == 0:
            return cls.zero()
        return cls._raw({K.pack(*exponents): f.numerator}, f.denominator)

    @property
    def is_zero(self):
        return not self._t

    def terms(self):
        """Iterate (exponent triple, coefficient) in descending graded-lex order."""
        for k in sorted(self._t, key=lambda e: (K.key_degree(e), e), reverse=True):
            yield K.unpack(k), Fraction(self._t[k], self._d)

    def coefficient(self, exponents):
        return Fraction(self._t.get(K.pack(*exponents), 0), self._d)

    def total_degree(self):
        return max((K.key_degree(k) for k in self._t), default=0)

    def evaluate(self, at):
        vals = _point(at)
        acc = Fraction(0)
        for k, c in self._t.items():
            term = Fraction(c)
            for name, v, e in zip(_VAR_NAMES, vals, K.unpack(k)):
                if e:
                    if v is None:
                        raise FieldError(f"no value given for variable {name!r}")
                    term *= v**e
            acc += term
        return acc / self._d

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        g = gcd(self._d, other._d)
        la, lb = other._d // g, self._d // g
        return MultiPoly(K.padd(K.pscale(self._t, la), K.pscale(other._t, lb)), self._d * la)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        g = gcd(self._d, other._d)
        la, lb = other._d // g, self._d // g
        return MultiPoly(K.psub(K.pscale(self._t, la), K.pscale(other._t, lb)), self._d * la)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__sub__(self)

    def __neg__(self):
        return MultiPoly._raw(K.pneg(self._t), self._d)

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return MultiPoly(K.pmul(self._t, other._t), self._d * other._d)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise FieldError("MultiPoly power must be non-negative")
        out = MultiPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self._t == other._t and self._d == other._d

    def __hash__(self):
        return hash((self._d, frozenset(self._t.items())))

    def __str__(self):
        return _poly_str(self._t, self._d)

    def __repr__(self):
        return f"MultiPoly({self})"


def _norm_poly(t, d):
    if not t:
        return {}, 1
    if d < 0:
        t, d = K.pneg(t), -d
    g = K.content(t, d)
    if g > 1:
        return K.pdiv_scalar(t, g), d // g
    return dict(t), d


def _as_poly(x):
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return MultiPoly.const(x)
    return NotImplemented


def _point(at):
    vals = []
    for name in _VAR_NAMES:
        v = at.get(name)
        vals.append(Fraction(v) if v is not None else None)
    for name, v in at.items():
        if name not in _VAR_NAMES:
            raise FieldError(f"unknown variable {name!r}")
    return vals


class RationalFunction:
    """Element of Q(p, q, s), kept as a reduced fraction of integer polynomials."""

    __slots__ = ("_n", "_d")

    def __init__(self, num=0, den=1):
        if isinstance(num, RationalFunction) or isinstance(den, RationalFunction):
            val = rf(num) / rf(den)
            self._n, self._d = val._n, val._d
            return
        n = _coerce_pair(num)
        d = _coerce_pair(den)
        # (tn, dn)/(td, dd) = tn*dd / td*dn over integer dicts
        nn = K.pscale(n[0], d[1]) if d[1] != 1 else n[0]
        dd = K.pscale(d[0], n[1]) if n[1] != 1 else d[0]
        self._n, self._d = _norm_fraction(nn, dd)

    @classmethod
    def _raw(cls, n, d):
        obj = object.__new__(cls)
        obj._n = n
        obj._d = d
        return obj

    @classmethod
    def const(cls, value):
        f = Fraction(value)
        if f == 0:
            return _RF_ZERO
        return cls._raw({0: f.numerator}, {0: f.denominator})

    @classmethod
    def var(cls, name):
        return cls._raw({_VAR_KEYS[name]: 1}, {0: 1})

    @property
    def numerator(self):
        return MultiPoly._raw(dict(self._n), 1)

    @property
    def denominator(self):
        return MultiPoly._raw(dict(self._d), 1)

    @property
    def is_zero(self):
        return not self._n

    @property
    def is_one(self):
        return self._n == self._d

    def __add__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._n:
            return self
        if not self._n:
            return other
        if self._d == other._d:
            return _make_rf(K.padd(self._n, other._n), dict(self._d))
        num = K.paddmul(K.pmul(self._n, other._d), other._n, self._d)
        return _make_rf(num, K.pmul(self._d, other._d))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._n:
            return self
        if self._d == other._d:
            return _make_rf(K.psub(self._n, other._n), dict(self._d))
        num = K.psub(K.pmul(self._n, other._d), K.pmul(other._n, self._d))
        return _make_rf(num, K.pmul(self._d, other._d))

    def __rsub__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__sub__(self)

    def __neg__(self):
        return RationalFunction._raw(K.pneg(self._n), dict(self._d))

    def __mul__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._n or not other._n:
            return _RF_ZERO
        return _make_rf(K.pmul(self._n, other._n), K.pmul(self._d, other._d))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._n:
            raise DivisionByZero("division by the zero rational function")
        if not self._n:
            return _RF_ZERO
        return _make_rf(K.pmul(self._n, other._d), K.pmul(self._d, other._n))

    def __rtruediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    def __pow__(self, n):
        if n < 0:
            if not self._n:
                raise DivisionByZero("negative power of zero")
            return RationalFunction._raw(dict(self._d), dict(self._n))._normalized() ** (-n)
        out = _RF_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def _normalized(self):
        n, d = _norm_fraction(self._n, self._d)
        return RationalFunction._raw(n, d)

    def __eq__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self._d == other._d:
            return self._n == other._n
        return K.pmul(self._n, other._d) == K.pmul(other._n, self._d)

    __hash__ = None  # canonical forms are not unique without full gcd

    def evaluate(self, at):
        """Exact value at a rational point; raises PoleAtPoint on a vanishing denominator."""
        den = MultiPoly._raw(dict(self._d), 1).evaluate(at)
        if den == 0:
            raise PoleAtPoint(f"denominator vanishes at {at}")
        return MultiPoly._raw(dict(self._n), 1).evaluate(at) / den

    @property
    def lead_sign(self):
        """Sign of the numerator's leading coefficient (+1, -1, or 0)."""
        if not self._n:
            return 0
        return 1 if self._n[K.lead_key(self._n)] > 0 else -1

    def as_constant(self):
        """The value as a Fraction when constant, else None."""
        if not self._n:
            return Fraction(0)
        if set(self._n) != set(self._d):
            return None
        k0 = next(iter(self._d))
        c = Fraction(self._n[k0], self._d[k0])
        for k, v in self._d.items():
            if self._n[k] * c.denominator != v * c.numerator:
                return None
        return c

    def as_integer(self):
        """The value as an int when identically an integer constant, else None."""
        c = self.as_constant()
        if c is None or c.denominator != 1:
            return None
        return c.numerator

    def substitute(self, at):
        """Substitute rational values for a subset of variables, exactly.

        Variables not named in `at` stay symbolic.  Raises PoleAtPoint if the
        denominator vanishes identically after substitution.
        """
        n = _subst_dict(self._n, at)
        d = _subst_dict(self._d, at)
        if not d[0]:
            raise PoleAtPoint(f"denominator vanishes identically at {at}")
        nn = K.pscale(n[0], d[1]) if d[1] != 1 else n[0]
        dd = K.pscale(d[0], n[1]) if n[1] != 1 else d[0]
        return _make_rf(nn, dd)

    def __str__(self):
        if self._d == {0: 1}:
            return _poly_str(self._n, 1)
        return f"({_poly_str(self._n, 1)})/({_poly_str(self._d, 1)})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _coerce_pair(x):
    """Coerce to an (integer term dict, positive integer denominator) pair."""
    if isinstance(x, MultiPoly):
        return x._t, x._d
    f = Fraction(x)
    if f == 0:
        return {}, 1
    return {0: f.numerator}, f.denominator


def _as_rf(x):
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunction.const(x)
    if isinstance(x, MultiPoly):
        return _make_rf(dict(x._t), {0: x._d})
    return NotImplemented


def _make_rf(n, d):
    n, d = _norm_fraction(n, d)
    return RationalFunction._raw(n, d)


def _norm_fraction(n, d):
    if not d:
        raise DivisionByZero("zero denominator")
    if not n:
        return {}, {0: 1}
    if n == d:
        return {0: 1}, {0: 1}
    g = K.content(n, K.content(d))
    if g > 1:
        n = K.pdiv_scalar(n, g)
        d = K.pdiv_scalar(d, g)
    m = K.mono_min2(K.mono_min(n), K.mono_min(d))
    if m:
        n = K.pshift_down(n, m)
        d = K.pshift_down(d, m)
    if d[K.lead_key(d)] < 0:
        n = K.pneg(n)
        d = K.pneg(d)
    if len(n) == len(d):
        # content and sign normalization can expose an exact num/den match
        if n == d:
            return {0: 1}, {0: 1}
        if n == K.pneg(d):
            return {0: -1}, {0: 1}
    if _gcd_enabled() and len(d) > 1:
        n, d = _sympy_gcd(n, d)
        if d[K.lead_key(d)] < 0:
            n = K.pneg(n)
            d = K.pneg(d)
    return n, d


def _subst_dict(t, at):
    vals = _point(at)
    out = {}
    den = 1
    for k, c in t.items():
        ep, eq, es = K.unpack(k)
        f = Fraction(c)
        key = [ep, eq, es]
        for i, v in enumerate(vals):
            if v is not None:
                f *= v ** key[i]
                key[i] = 0
        if f == 0:
            continue
        packed = K.pack(*key)
        den_l = den * f.denominator // gcd(den, f.denominator)
        if den_l != den:
            out = {kk: vv * (den_l // den) for kk, vv in out.items()}
            den = den_l
        add = f.numerator * (den // f.denominator)
        w = out.get(packed, 0) + add
        if w:
            out[packed] = w
        else:
            out.pop(packed, None)
    return out, den


_RF_ZERO = RationalFunction._raw({}, {0: 1})
_RF_ONE = RationalFunction._raw({0: 1}, {0: 1})

ZERO = _RF_ZERO
ONE = _RF_ONE
P = RationalFunction.var("p")
Q = RationalFunction.var("q")
S = RationalFunction.var("s")


def rf(value):
    """Coerce ints, Fractions, MultiPoly or RationalFunction to RationalFunction."""
    out = _as_rf(value)
    if out is NotImplemented:
        raise FieldError(f"cannot coerce {value!r} to RationalFunction")
    return out


# ---------------------------------------------------------------------------
# printing and parsing


def _poly_str(t, den):
    if not t:
        return "0"
    parts = []
    for k in sorted(t, key=lambda e: (K.key_degree(e), e), reverse=True):
        c = t[k]
        ep, eq, es = K.unpack(k)
        factors = []
        for name, e in (("p", ep), ("q", eq), ("s", es)):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if den != 1:
            coeff = f"{mag}/{den}"
            if factors:
                coeff = f"({coeff})"
        else:
            coeff = str(mag)
        if factors and mag == 1 and den == 1:
            body = "*".join(factors)
        elif factors:
            body = coeff + "*" + "*".join(factors)
        else:
            body = coeff
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


def format_rf(x):
    """Deterministic serialization used in reports; inverse of parse_rf."""
    return str(rf(x))


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j])))
            i = j
        elif ch in "pqs":
            tokens.append(("var", ch))
            i += 1
        elif ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} at position {i}")
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expr(self):
        if self.peek() == "-":
            self.next()
            acc = -self.term()
        else:
            acc = self.term()
        while self.peek() in "+-":
            op = self.next()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() in "*/":
            op = self.next()[0]
            f = self.factor()
            acc = acc * f if op == "*" else acc / f
        return acc

    def factor(self):
        if self.peek() == "-":
            self.next()
            return -self.factor()
        base = self.atom()
        if self.peek() == "^":
            self.next()
            kind, val = self.next()
            neg = False
            if kind == "-":
                neg = True
                kind, val = self.next()
            if kind != "int":
                raise ParseError("exponent must be an integer literal")
            return base ** (-val if neg else val)
        return base

    def atom(self):
        kind, val = self.next()
        if kind == "int":
            return RationalFunction.const(val)
        if kind == "var":
            return RationalFunction.var(val)
        if kind == "(":
            inner = self.expr()
            if self.next()[0] != ")":
                raise ParseError("missing closing parenthesis")
            return inner
        raise ParseError(f"unexpected token {kind!r}")


def parse_rf(text):
    """Parse an expression over p, q, s with +, -, *, /, ^ and parentheses."""
    parser = _Parser(_tokenize(text))
    out = parser.expr()
    if parser.peek() != "end":
        raise ParseError("trailing input after expression")
    return out
