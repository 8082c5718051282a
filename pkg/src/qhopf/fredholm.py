"""Weighted-shift representations and the exact trace pairing.

Representations act on l2(N) with orthonormal basis e_0, e_1, ... and are
described per generator by a Scalar, a Diagonal (a polynomial in x, where x
stands for base^k at level k), or a weighted Shift.  A word walks the level
ladder; a net-zero walk crosses every edge an even number of times, so its
diagonal is again a polynomial in x and the trace of a difference of two
representations is a finite sum of geometric series summed in closed form.

Shift weights are stored per edge: the edge between levels k and k+1 carries
squared weight W(base^k).  Every shipped weight satisfies W(base^-1) = 0
exactly, so walks that dip below level 0 pick up a vanishing polynomial
factor and no explicit boundary corrections are needed.
"""

from __future__ import annotations

import functools
from fractions import Fraction

from .connection import FAMILY1, FAMILY2, ell_family1, ell_family2, trace_element
from .field import ONE, P, Q, S, ZERO, RationalFunction, gcd_reduction, rf
from .hopf import counit
from .rewriting import NCPolynomial, PresentationMismatch, heegaard, qsu2
from .span import BaseExpression, express_in_base

UP = 1
DOWN = -1


class UnknownSymbol(KeyError):
    """A word letter has no action in the representation."""


class RelationViolated(ValueError):
    """A defining relation fails as an operator identity."""


class MismatchedRestriction(ValueError):
    """An ambient representation does not restrict to its sphere counterpart."""


class NotSummable(ValueError):
    """Constant-in-level diagonal terms fail to cancel; the trace diverges."""


class NotConstant(ValueError):
    """A pairing failed to simplify to an integer."""


class ParameterOutOfRange(ValueError):
    """Numeric parameters outside ]0,1[ (s outside [0,1])."""


# ---------------------------------------------------------------------------
# level polynomials: dicts m -> RationalFunction meaning sum c_m x^m


def _lp_scale(t, c):
    if c.is_zero:
        return {}
    return {m: v * c for m, v in t.items()}


def _lp_add(t, u):
    out = dict(t)
    for m, v in u.items():
        w = out.get(m)
        w = v if w is None else w + v
        if w.is_zero:
            out.pop(m, None)
        else:
            out[m] = w
    return out


def _lp_mul(t, u):
    out = {}
    for m1, v1 in t.items():
        for m2, v2 in u.items():
            m = m1 + m2
            w = v1 * v2
            prev = out.get(m)
            w = w if prev is None else prev + w
            if w.is_zero:
                out.pop(m, None)
            else:
                out[m] = w
    return out


def _lp_shift(t, base, j):
    """Substitute x -> x * base^j (move the polynomial j levels up)."""
    if j == 0:
        return dict(t)
    return {m: v * base ** (j * m) for m, v in t.items() if not (v * base ** (j * m)).is_zero}


def _lp_eq(t, u):
    for m in set(t) | set(u):
        if not (t.get(m, ZERO) - u.get(m, ZERO)).is_zero:
            return False
    return True


def _lp_str(t):
    return " + ".join(f"({t[m]})*x^{m}" for m in sorted(t)) or "0"


# ---------------------------------------------------------------------------
# action descriptors


class Scalar:
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value if isinstance(value, RationalFunction) else rf(value)

    def star(self):
        return self

    def __repr__(self):
        return f"Scalar({self.value})"


class Diagonal:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = {m: v for m, v in coeffs.items() if not v.is_zero}

    def star(self):
        # coefficients are formally real
        return self

    def __repr__(self):
        return f"Diagonal({_lp_str(self.coeffs)})"


class Shift:
    """Weighted shift; `weight` is the squared weight of edge (k, k+1) at x = base^k."""

    __slots__ = ("direction", "weight", "tag")

    def __init__(self, direction, weight, tag=""):
        if direction not in (UP, DOWN):
            raise ValueError("shift direction must be UP or DOWN")
        self.direction = direction
        self.weight = {m: v for m, v in weight.items() if not v.is_zero}
        self.tag = tag

    def star(self):
        # adjoint crosses the same edges with the same weights, reversed
        return Shift(-self.direction, self.weight, self.tag)

    def __repr__(self):
        arrow = "up" if self.direction == UP else "down"
        return f"Shift({arrow}, {_lp_str(self.weight)})"


class ZeroDiagonal:
    """Diagonal of a word with nonzero net level shift."""

    coefficients = {}

    def __repr__(self):
        return "ZeroDiagonal()"


ZERO_DIAGONAL = ZeroDiagonal()


class DiagonalSeries:
    """D(k) = sum_m c_m (base^m)^k over levels k >= 0, finite support."""

    __slots__ = ("base_name", "base", "coefficients")

    def __init__(self, base_name, base, coefficients):
        self.base_name = base_name
        self.base = base
        self.coefficients = {m: v for m, v in coefficients.items() if not v.is_zero}

    @property
    def c0(self):
        """Constant-in-level part; must cancel across a rep pair to be summable."""
        return self.coefficients.get(0, ZERO)

    def value(self, k):
        acc = ZERO
        for m, v in self.coefficients.items():
            acc = acc + v * self.base ** (m * k)
        return acc

    def tail_sum(self):
        """Closed form of sum_{k>=0} of the m >= 1 part."""
        acc = ZERO
        for m, v in self.coefficients.items():
            if m > 0:
                acc = acc + v / (ONE - self.base ** m)
        return acc

    def __repr__(self):
        return f"DiagonalSeries({self.base_name}: {_lp_str(self.coefficients)})"


# ---------------------------------------------------------------------------
# representations

_BASES = {"p": P, "q": Q, "q2": Q * Q}


class ShiftRepresentation:
    """Name, decay base, per-symbol actions, and the relations it must satisfy."""

    __slots__ = ("name", "base_name", "base", "actions", "relations")

    def __init__(self, name, base_name, actions, star, relations):
        if base_name not in _BASES:
            raise ValueError(f"unknown base {base_name!r}")
        self.name = name
        self.base_name = base_name
        self.base = _BASES[base_name]
        acts = dict(actions)
        for sym, act in list(acts.items()):
            partner = star.get(sym)
            if partner is not None and partner not in acts:
                acts[partner] = act.star()
        self.actions = acts
        self.relations = tuple(relations)
        for sym, act in acts.items():
            if isinstance(act, Shift) and act.direction == DOWN:
                bottom = ZERO
                for m, v in act.weight.items():
                    bottom = bottom + v * self.base ** (-m)
                if not bottom.is_zero:
                    raise ValueError(f"{name}: down-shift {sym} does not annihilate e_0")
        rep_check(self)

    def action(self, sym):
        try:
            return self.actions[sym]
        except KeyError:
            raise UnknownSymbol(f"{self.name} has no action for {sym!r}") from None

    def __repr__(self):
        return f"<ShiftRepresentation {self.name} base={self.base_name}>"


def _walk(rep, word):
    """Level offset, per-edge crossing records, and the diagonal cofactor."""
    j = 0
    poly = {0: ONE}
    edges = {}
    for sym in reversed(word):
        act = rep.action(sym)
        if isinstance(act, Scalar):
            poly = _lp_scale(poly, act.value)
        elif isinstance(act, Diagonal):
            poly = _lp_mul(poly, _lp_shift(act.coeffs, rep.base, j))
        else:
            e = j if act.direction == UP else j - 1
            edges.setdefault(e, []).append(act.weight)
            j += act.direction
    return j, edges, poly


def _operator(rep, word):
    """Canonical (net shift, leftover odd sqrt factors, polynomial) of a word."""
    net, edges, poly = _walk(rep, word)
    odd = []
    for e in sorted(edges):
        weights = edges[e]
        w0 = weights[0]
        for w in weights[1:]:
            if w is not w0 and not _lp_eq(w, w0):
                raise ValueError("mixed squared weights on one edge are not supported")
        half, parity = divmod(len(weights), 2)
        shifted = _lp_shift(w0, rep.base, e)
        for _ in range(half):
            poly = _lp_mul(poly, shifted)
        if parity:
            odd.append((e, _lp_str(shifted)))
    return net, tuple(odd), poly


def _operator_sum(rep, terms):
    """Group a linear combination of words by (net shift, sqrt part)."""
    out = {}
    for coeff, word in terms:
        net, odd, poly = _operator(rep, word)
        key = (net, odd)
        acc = out.get(key, {})
        out[key] = _lp_add(acc, _lp_scale(poly, coeff))
    return {k: v for k, v in out.items() if v}


def diagonal(word, rep):
    """Exact diagonal of the word's operator, or ZeroDiagonal on a net shift."""
    net, odd, poly = _operator(rep, tuple(word))
    if net != 0:
        return ZERO_DIAGONAL
    if odd:
        # a closed walk crosses every edge an even number of times
        raise ValueError("net-zero word left unpaired edge weights")
    return DiagonalSeries(rep.base_name, rep.base, poly)


# ---------------------------------------------------------------------------
# shipped representations

_SPHERE1_STAR = {"f0": "f0*", "f0*": "f0", "f1": "f1*", "f1*": "f1"}
_SPHERE2_STAR = {"K": "K*", "K*": "K", "L": "L*", "L*": "L"}


def sphere1_relations():
    """Defining relations of the two-parameter quantum sphere in f0, f1."""
    one = ONE
    return (
        ("f0 self-adjoint", ((one, ("f0*",)), (-one, ("f0",)))),
        (
            "f1* f1 commutation",
            (
                (one, ("f1*", "f1")),
                (-Q, ("f1", "f1*")),
                (-(P - Q), ("f0",)),
                (-(one - P), ()),
            ),
        ),
        (
            "f0 f1 commutation",
            ((one, ("f0", "f1")), (-P, ("f1", "f0")), (-(one - P), ("f1",))),
        ),
        (
            "disc gluing",
            (
                (one, ("f1", "f1*")),
                (-one, ("f0",)),
                (-one, ("f0", "f1", "f1*")),
                (one, ("f0", "f0")),
            ),
        ),
    )


def sphere2_relations(s_mode="symbolic"):
    """Defining relations of the generic-parameter quantum sphere in K, L."""
    s = S if s_mode == "symbolic" else rf(Fraction(s_mode))
    one, q2 = ONE, Q * Q
    return (
        ("K self-adjoint", ((one, ("K*",)), (-one, ("K",)))),
        ("L K commutation", ((one, ("L", "K")), (-q2, ("K", "L")))),
        (
            "north relation",
            (
                (one, ("L*", "L")),
                (one, ("K", "K")),
                (-(one - s * s), ("K",)),
                (-s * s, ()),
            ),
        ),
        (
            "south relation",
            (
                (one, ("L", "L*")),
                (q2 * q2, ("K", "K")),
                (-(one - s * s) * q2, ("K",)),
                (-s * s, ()),
            ),
        ),
    )


def _presentation_relations(pres):
    rels = []
    for rule in pres.rules:
        terms = [(ONE, rule.lhs)] + [(-c, w) for c, w in rule.rhs]
        rels.append((str(rule), tuple(terms)))
    for schema in pres.schemas:
        rule = schema.instance(1, 1)
        terms = [(ONE, rule.lhs)] + [(-c, w) for c, w in rule.rhs]
        rels.append((str(rule), tuple(terms)))
    return tuple(rels)


@functools.lru_cache(maxsize=None)
def rho1():
    return ShiftRepresentation(
        "rho1",
        "p",
        {"f0": Diagonal({0: ONE, 1: -ONE}), "f1": Shift(UP, {0: ONE, 1: -P}, "f1")},
        _SPHERE1_STAR,
        sphere1_relations(),
    )


@functools.lru_cache(maxsize=None)
def rho2():
    return ShiftRepresentation(
        "rho2",
        "q",
        {"f0": Scalar(ONE), "f1": Shift(UP, {0: ONE, 1: -Q}, "f1")},
        _SPHERE1_STAR,
        sphere1_relations(),
    )


@functools.lru_cache(maxsize=None)
def sigma1():
    pres = heegaard()
    return ShiftRepresentation(
        "sigma1",
        "p",
        {"a": Scalar(ONE), "b": Shift(UP, {0: ONE, 1: -P}, "b")},
        pres.star_map,
        _presentation_relations(pres),
    )


@functools.lru_cache(maxsize=None)
def sigma2():
    pres = heegaard()
    return ShiftRepresentation(
        "sigma2",
        "q",
        {"a": Shift(UP, {0: ONE, 1: -Q}, "a"), "b": Scalar(ONE)},
        pres.star_map,
        _presentation_relations(pres),
    )


def _lambda_minus_sq(s):
    # lambda_n^- squared as a polynomial in x = q^(2n)
    s2 = s * s
    return {0: s2, 1: -s2 * (ONE - s2), 2: -s2 * s2}


def _lambda_plus_sq(s):
    s2 = s * s
    return {0: s2, 1: ONE - s2, 2: -ONE}


def _down_from_source(weight, base):
    # stored weights index the source level of the down-step; edge (k, k+1)
    # is crossed from source k+1, so shift one level up
    return _lp_shift(weight, base, 1)


@functools.lru_cache(maxsize=None)
def pi_minus(s_mode="symbolic"):
    s = S if s_mode == "symbolic" else rf(Fraction(s_mode))
    base = _BASES["q2"]
    return ShiftRepresentation(
        "pi_minus",
        "q2",
        {
            "K": Diagonal({1: -s * s}),
            "L": Shift(DOWN, _down_from_source(_lambda_minus_sq(s), base), "L"),
        },
        _SPHERE2_STAR,
        sphere2_relations(s_mode),
    )


@functools.lru_cache(maxsize=None)
def pi_plus(s_mode="symbolic"):
    s = S if s_mode == "symbolic" else rf(Fraction(s_mode))
    base = _BASES["q2"]
    return ShiftRepresentation(
        "pi_plus",
        "q2",
        {
            "K": Diagonal({1: ONE}),
            "L": Shift(DOWN, _down_from_source(_lambda_plus_sq(s), base), "L"),
        },
        _SPHERE2_STAR,
        sphere2_relations(s_mode),
    )


# ---------------------------------------------------------------------------
# checks


def rep_check(rep, pres=None):
    """Verify defining relations as level-indexed polynomial identities."""
    relations = _presentation_relations(pres) if pres is not None else rep.relations
    report = {"rep": rep.name, "relations": {}, "ok": True}
    for tag, terms in relations:
        residue = _operator_sum(rep, terms)
        if residue:
            raise RelationViolated(f"{rep.name}: relation {tag!r} leaves {residue}")
        report["relations"][tag] = True
    return report


_RESTRICTION = {"f0": ("b", "b*"), "f1": ("a", "b"), "f1*": ("b*", "a*")}


def restriction_check():
    """The ambient representations restrict to the sphere ones on f0, f1."""
    report = {"pairs": {}, "ok": True}
    for ambient, sphere in ((sigma1(), rho1()), (sigma2(), rho2())):
        entry = {}
        if ambient.base_name != sphere.base_name:
            raise MismatchedRestriction(f"{ambient.name}/{sphere.name}: base mismatch")
        for gen, word in _RESTRICTION.items():
            got = _operator(ambient, word)
            want = _operator(sphere, (gen,))
            ok = got[0] == want[0] and len(got[1]) == len(want[1]) and _lp_eq(got[2], want[2])
            if ok:
                # compare leftover sqrt factors by value, not by tag
                for (ge, gs), (we, ws) in zip(got[1], want[1]):
                    if ge != we or gs != ws:
                        ok = False
            if not ok:
                raise MismatchedRestriction(
                    f"{ambient.name}({' '.join(word)}) != {sphere.name}({gen})"
                )
            entry[gen] = True
        report["pairs"][ambient.name] = entry
    return report


# ---------------------------------------------------------------------------
# pairings


def _word_terms(x):
    if isinstance(x, BaseExpression):
        return list(x.coefficients.items())
    if isinstance(x, NCPolynomial):
        return list(x.normal_form().terms.items())
    if isinstance(x, dict):
        return [(w, c if isinstance(c, RationalFunction) else rf(c)) for w, c in x.items()]
    raise TypeError(f"cannot pair {type(x).__name__}")


def _total_diagonal(terms, rep):
    coeffs = {}
    for word, c in terms:
        d = diagonal(word, rep)
        if d is ZERO_DIAGONAL:
            continue
        coeffs = _lp_add(coeffs, _lp_scale(d.coefficients, c))
    return coeffs


def trace_pairing(x, plus, minus):
    """Exact sum over levels of D_plus(k) - D_minus(k) in closed form."""
    terms = _word_terms(x)
    with gcd_reduction(True):
        dp = _total_diagonal(terms, plus)
        dm = _total_diagonal(terms, minus)
        gap = dp.get(0, ZERO) - dm.get(0, ZERO)
        if not gap.is_zero:
            raise NotSummable(f"constant terms differ by {gap}")
        acc = DiagonalSeries(plus.base_name, plus.base, dp).tail_sum()
        acc = acc - DiagonalSeries(minus.base_name, minus.base, dm).tail_sum()
    return acc


def _as_integer_strict(value):
    n = value.as_integer()
    if n is None:
        with gcd_reduction(True):
            n = (value + ZERO).as_integer()
    if n is None:
        raise NotConstant(f"pairing did not simplify to an integer: {value}")
    return n


def chern_number(mu, family, s_mode="symbolic"):
    """Exact trace pairing of the winding-mu projective module, as an integer."""
    if family == FAMILY1:
        x = trace_element(ell_family1(mu))
        value = trace_pairing(x, sigma2(), sigma1())
    elif family == FAMILY2:
        x = trace_element(ell_family2(mu, s_mode))
        e = express_in_base(x, FAMILY2, s_mode=s_mode)
        value = trace_pairing(e, pi_minus(s_mode), pi_plus(s_mode))
    else:
        raise ValueError(f"unknown family {family!r}")
    return _as_integer_strict(value)


def delta_character(x):
    """The a -> 1, b -> 1 character of the ambient Heegaard algebra."""
    if x.pres is not heegaard():
        raise PresentationMismatch("delta is defined on the HEEGAARD presentation")
    acc = ZERO
    for _, c in x.normal_form().terms.items():
        acc = acc + c
    return acc


def rank_pairing(mu, family, s_mode="symbolic"):
    """Character pairing of the winding-mu module; expected constant 1."""
    if family == FAMILY1:
        return delta_character(trace_element(ell_family1(mu)))
    if family == FAMILY2:
        with gcd_reduction(True):
            return counit(trace_element(ell_family2(mu, s_mode))) + ZERO
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# floating-point cross-check


def _check_param(name, value, closed):
    v = Fraction(value)
    lo_ok = v >= 0 if closed else v > 0
    hi_ok = v <= 1 if closed else v < 1
    if not (lo_ok and hi_ok):
        raise ParameterOutOfRange(f"{name}={value} outside the allowed range")
    return v


def _matrices(rep, symbols, params, size):
    import numpy as np

    base = float(rep.base.evaluate(params))
    levels = base ** np.arange(size)
    mats = {}
    for sym in symbols:
        act = rep.action(sym)
        m = np.zeros((size, size))
        if isinstance(act, Scalar):
            np.fill_diagonal(m, float(act.value.evaluate(params)))
        elif isinstance(act, Diagonal):
            d = np.zeros(size)
            for mm, v in act.coeffs.items():
                d += float(v.evaluate(params)) * levels ** mm
            np.fill_diagonal(m, d)
        else:
            w = np.zeros(size)
            for mm, v in act.weight.items():
                w += float(v.evaluate(params)) * levels ** mm
            edge = np.sqrt(np.maximum(w[: size - 1], 0.0))
            if act.direction == UP:
                m[np.arange(1, size), np.arange(size - 1)] = edge
            else:
                m[np.arange(size - 1), np.arange(1, size)] = edge
        mats[sym] = m
    return mats


def _truncated_trace(terms, rep, params, n, pad):
    import numpy as np

    size = n + pad
    symbols = {sym for word, _ in terms for sym in word}
    mats = _matrices(rep, symbols, params, size)
    total = 0.0
    eye = np.eye(size)
    for word, c in terms:
        m = eye
        for sym in word:
            m = m @ mats[sym]
        total += float(c.evaluate(params)) * float(np.trace(m[:n, :n]))
    return total


def _tail_bound(terms, rep, params, n, pad):
    coeffs = _total_diagonal(terms, rep)
    r = float(rep.base.evaluate(params))
    c = sum(abs(float(v.evaluate(params))) for m, v in coeffs.items() if m > 0)
    # pad extra levels absorb walks clipped at the top of the truncation
    return c * r ** max(n - pad - 1, 1) / (1.0 - r)


def numeric_pairing(mu, family, params, truncation=64):
    """Truncated-matrix estimate of the trace pairing plus a rigorous tail bound."""
    if family == FAMILY1:
        for name in ("p", "q"):
            _check_param(name, params[name], closed=False)
        point = {k: Fraction(v) for k, v in params.items()}
        x = trace_element(ell_family1(mu))
        terms = _word_terms(x)
        plus, minus = sigma2(), sigma1()
    elif family == FAMILY2:
        _check_param("q", params["q"], closed=False)
        _check_param("s", params["s"], closed=True)
        point = {k: Fraction(v) for k, v in params.items()}
        x = trace_element(ell_family2(mu))
        e = express_in_base(x, FAMILY2)
        terms = _word_terms(e)
        plus, minus = pi_minus(), pi_plus()
    else:
        raise ValueError(f"unknown family {family!r}")
    pad = max((len(w) for w, _ in terms), default=0)
    estimate = _truncated_trace(terms, plus, point, truncation, pad) - _truncated_trace(
        terms, minus, point, truncation, pad
    )
    bound = _tail_bound(terms, plus, point, truncation, pad) + _tail_bound(
        terms, minus, point, truncation, pad
    )
    return estimate, bound
