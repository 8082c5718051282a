"""Noncommutative *-algebra words and terminating rewriting systems.

Both ambient algebras of the package are quotients of a free *-algebra by
finitely presented relations, oriented into rewrite rules.  Words are tuples
of letter names, a polynomial maps words to RationalFunction coefficients,
and a Presentation bundles the alphabet, the involution, a weighted shortlex
word order, the rules, and an optional U(1) grading.

The word order compares total letter weight first, then letters left to
right by alphabet position.  With positive weights a proper prefix always
has smaller weight, so the tie-break never compares a word with its own
extension and the order is invariant under concatenation on both sides.
Every rule must be strictly decreasing in this order, which is checked at
construction and gives termination; check_confluence is the diamond-lemma
test that normal forms are also unique.

The Heegaard presentation is special: orienting the gluing relation
(1-aa*)(1-bb*) = 0 as a rewrite rule forces an infinite family of
consequences a a*^j b^k b* -> a a*^j b^(k-1) + a*^(j-1) b^k b*
- a*^(j-1) b^(k-1), one per j, k >= 1.  The family is matched by pattern, so
normal forms are exact for every word; check_confluence enumerates its
instances up to a bound when listing overlaps but reduces with the full
matcher.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field

from .field import ONE, Q, RationalFunction, format_rf, rf


class RewritingError(ValueError):
    """Base class for presentation and rewriting errors."""


class PresentationMismatch(RewritingError):
    """Operands built over different presentations."""


class TerminationError(RewritingError):
    """A rewrite rule is not strictly decreasing in the word order."""


class NoGrading(RewritingError):
    """Degree requested on an ungraded presentation."""


class NotHomogeneous(RewritingError):
    """Polynomial mixes words of different grading degree."""


@dataclass(frozen=True)
class Rule:
    """One oriented rewrite rule lhs -> sum of coeff * word."""

    lhs: tuple
    rhs: tuple  # tuple of (RationalFunction, word tuple)
    tag: str = ""

    def __str__(self):
        body = " + ".join(f"({format_rf(c)}) {' '.join(w) or '1'}" for c, w in self.rhs) or "0"
        return f"{' '.join(self.lhs)} -> {body}"


class GluingSchema:
    """Rule family x y*^j z^k z* -> x y*^j z^(k-1) + y*^(j-1) z^k z* - y*^(j-1) z^(k-1).

    Derived from the two-disc gluing relation (1 - x y*)(1 - z z*) = 0 by
    multiplying with y*^(j-1) on the left and z^(k-1) on the right and
    normalizing with the q-commutation rules; the scalar prefactor
    q^(j-1) p^(k-1) is invertible and drops out, so the family is
    coefficient free.  Instance (1, 1) is the bare gluing rule.
    """

    def __init__(self, x, xs, z, zs):
        self.x = x
        self.xs = xs
        self.z = z
        self.zs = zs

    def match(self, word, i):
        """Match length at position i, or 0 if the family does not apply."""
        n = len(word)
        if i + 3 >= n or word[i] != self.x:
            return 0
        j = i + 1
        while j < n and word[j] == self.xs:
            j += 1
        if j == i + 1:
            return 0
        k = j
        while k < n and word[k] == self.z:
            k += 1
        if k == j or k >= n or word[k] != self.zs:
            return 0
        return k + 1 - i

    def rhs(self, word):
        """Replacement terms for a full-word instance x xs^j z^k zs."""
        j = word.count(self.xs)
        k = word.count(self.z)
        t1 = (self.x,) + (self.xs,) * j + (self.z,) * (k - 1)
        t2 = (self.xs,) * (j - 1) + (self.z,) * k + (self.zs,)
        t3 = (self.xs,) * (j - 1) + (self.z,) * (k - 1)
        return ((ONE, t1), (ONE, t2), (-ONE, t3))

    def instance(self, j, k):
        lhs = (self.x,) + (self.xs,) * j + (self.z,) * k + (self.zs,)
        return Rule(lhs, self.rhs(lhs), tag=f"glue[{j},{k}]")

    def instances(self, bound):
        return [self.instance(j, k) for j in range(1, bound + 1) for k in range(1, bound + 1)]


class Presentation:
    """Immutable rewriting presentation of a finitely generated *-algebra."""

    def __init__(self, name, letters, star, rules, weights=None, schemas=(), grading=None):
        self.name = name
        self.letters = tuple(letters)
        self.index = {x: i for i, x in enumerate(self.letters)}
        if len(self.index) != len(self.letters):
            raise RewritingError("duplicate letters in alphabet")
        self.star_map = dict(star)
        for x in self.letters:
            if self.star_map.get(self.star_map.get(x)) != x:
                raise RewritingError(f"involution not self-inverse at {x!r}")
        self.weights = {x: 1 for x in self.letters} if weights is None else dict(weights)
        if any(self.weights[x] <= 0 for x in self.letters):
            raise RewritingError("letter weights must be positive")
        self.grading = dict(grading) if grading is not None else None
        self.rules = tuple(rules)
        self.schemas = tuple(schemas)
        self._rules_at = {}
        for r in self.rules:
            self._rules_at.setdefault(r.lhs[0], []).append(r)
        self._nf_cache = {}
        self._validate()

    # -- word order ---------------------------------------------------------

    def word_weight(self, w):
        return sum(self.weights[x] for x in w)

    def word_key(self, w):
        return (self.word_weight(w), tuple(self.index[x] for x in w))

    def word_lt(self, u, v):
        return self.word_key(u) < self.word_key(v)

    def star_word(self, w):
        return tuple(self.star_map[x] for x in reversed(w))

    def word_degree(self, w):
        if self.grading is None:
            raise NoGrading(f"presentation {self.name} has no grading")
        return sum(self.grading[x] for x in w)

    def word(self, text):
        """Word tuple from space-separated letter names; '' is the unit."""
        w = tuple(text.split())
        for x in w:
            if x not in self.index:
                raise RewritingError(f"unknown letter {x!r} in {self.name}")
        return w

    # -- polynomial constructors -------------------------------------------

    def zero(self):
        return NCPolynomial(self, {})

    def one(self):
        return NCPolynomial(self, {(): ONE})

    def gen(self, name):
        return NCPolynomial(self, {self.word(name): ONE})

    def poly(self, terms):
        """NCPolynomial from {word-or-string: coefficient}."""
        acc = {}
        for w, c in terms.items():
            if isinstance(w, str):
                w = self.word(w)
            c = rf(c)
            if not c.is_zero:
                cur = acc.get(w)
                s = c if cur is None else cur + c
                if s.is_zero:
                    acc.pop(w, None)
                else:
                    acc[w] = s
        return NCPolynomial(self, acc)

    # -- rewriting ----------------------------------------------------------

    def find_redex(self, w):
        """Leftmost match: (position, length, rhs terms), or None."""
        n = len(w)
        for i in range(n):
            for r in self._rules_at.get(w[i], ()):
                m = len(r.lhs)
                if i + m <= n and w[i : i + m] == r.lhs:
                    return i, m, r.rhs
            for sch in self.schemas:
                m = sch.match(w, i)
                if m:
                    return i, m, sch.rhs(w[i : i + m])
        return None

    def nf_word(self, w):
        """Normal form of a single word as a {word: coefficient} dict, memoized."""
        cache = self._nf_cache
        hit = cache.get(w)
        if hit is not None:
            return hit
        stack = [w]
        while stack:
            cur = stack[-1]
            if cur in cache:
                stack.pop()
                continue
            red = self.find_redex(cur)
            if red is None:
                cache[cur] = {cur: ONE}
                stack.pop()
                continue
            i, m, rhs = red
            pre, post = cur[:i], cur[i + m :]
            children = [(c, pre + t + post) for c, t in rhs]
            missing = [cw for _, cw in children if cw not in cache]
            if missing:
                stack.extend(missing)
                continue
            acc = {}
            for c, cw in children:
                for w2, c2 in cache[cw].items():
                    prod = c * c2
                    cur2 = acc.get(w2)
                    ssum = prod if cur2 is None else cur2 + prod
                    if ssum.is_zero:
                        acc.pop(w2, None)
                    else:
                        acc[w2] = ssum
            cache[cur] = acc
            stack.pop()
        return cache[w]

    # -- validation ---------------------------------------------------------

    def _validate(self):
        rules = list(self.rules)
        for sch in self.schemas:
            rules.extend(sch.instances(2))
        for r in rules:
            lk = self.word_key(r.lhs)
            for c, t in r.rhs:
                if self.word_key(t) >= lk:
                    raise TerminationError(f"rule {r} is not decreasing at word {' '.join(t) or '1'}")
            if self.grading is not None:
                d = self.word_degree(r.lhs)
                for _, t in r.rhs:
                    if self.word_degree(t) != d:
                        raise RewritingError(f"rule {r} is not grading homogeneous")
        for r in rules:
            rel = self.poly({r.lhs: ONE}) + NCPolynomial(self, {}) - NCPolynomial(
                self, {t: c for c, t in r.rhs if not c.is_zero}
            )
            starred = rel.star().normal_form()
            if not starred.is_zero:
                raise RewritingError(f"star of rule {r} does not reduce to zero")


class NCPolynomial:
    """Finite RationalFunction-linear combination of words over one presentation."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres, terms):
        self.pres = pres
        self.terms = terms

    def _check(self, other):
        if not isinstance(other, NCPolynomial):
            raise PresentationMismatch(f"expected NCPolynomial, got {type(other).__name__}")
        if other.pres is not self.pres:
            raise PresentationMismatch(f"mixing {self.pres.name} with {other.pres.name}")

    @property
    def is_zero(self):
        return not self.terms

    def items(self):
        """Iterate (word, coefficient) in descending word order."""
        for w in sorted(self.terms, key=self.pres.word_key, reverse=True):
            yield w, self.terms[w]

    def coefficient(self, w):
        if isinstance(w, str):
            w = self.pres.word(w)
        return self.terms.get(w, rf(0))

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            cur = out.get(w)
            s = c if cur is None else cur + c
            if s.is_zero:
                out.pop(w, None)
            else:
                out[w] = s
        return NCPolynomial(self.pres, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            cur = out.get(w)
            s = -c if cur is None else cur - c
            if s.is_zero:
                out.pop(w, None)
            else:
                out[w] = s
        return NCPolynomial(self.pres, out)

    def __neg__(self):
        return NCPolynomial(self.pres, {w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NCPolynomial):
            self._check(other)
            out = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    c = c1 * c2
                    cur = out.get(w)
                    s = c if cur is None else cur + c
                    if s.is_zero:
                        out.pop(w, None)
                    else:
                        out[w] = s
            return NCPolynomial(self.pres, out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = rf(c)
        if c.is_zero:
            return NCPolynomial(self.pres, {})
        return NCPolynomial(self.pres, {w: c * v for w, v in self.terms.items()})

    def map_coefficients(self, fn):
        """Apply fn to every coefficient, dropping resulting zeros."""
        out = {}
        for w, c in self.terms.items():
            c2 = fn(c)
            if not c2.is_zero:
                out[w] = c2
        return NCPolynomial(self.pres, out)

    def star(self):
        out = {}
        for w, c in self.terms.items():
            sw = self.pres.star_word(w)
            cur = out.get(sw)
            s = c if cur is None else cur + c
            if s.is_zero:
                out.pop(sw, None)
            else:
                out[sw] = s
        return NCPolynomial(self.pres, out)

    def normal_form(self):
        out = {}
        for w, c in self.terms.items():
            for w2, c2 in self.pres.nf_word(w).items():
                prod = c * c2
                cur = out.get(w2)
                s = prod if cur is None else cur + prod
                if s.is_zero:
                    out.pop(w2, None)
                else:
                    out[w2] = s
        return NCPolynomial(self.pres, out)

    def degree(self):
        if self.pres.grading is None:
            raise NoGrading(f"presentation {self.pres.name} has no grading")
        degs = {self.pres.word_degree(w) for w in self.terms}
        if len(degs) > 1:
            raise NotHomogeneous(f"degrees {sorted(degs)} mixed in one polynomial")
        return degs.pop() if degs else 0

    def winding_parts(self):
        """Split into homogeneous summands {degree: NCPolynomial}."""
        parts = {}
        for w, c in self.terms.items():
            parts.setdefault(self.pres.word_degree(w), {})[w] = c
        return {d: NCPolynomial(self.pres, t) for d, t in sorted(parts.items())}

    def __eq__(self, other):
        if isinstance(other, (int, RationalFunction)):
            other = self.pres.poly({(): rf(other)})
        if not isinstance(other, NCPolynomial) or other.pres is not self.pres:
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(other.terms[w] == c for w, c in self.terms.items())

    def __hash__(self):
        return hash((self.pres.name, frozenset(self.terms)))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.items():
            body = " ".join(w)
            sign = c.lead_sign
            mag = c if sign >= 0 else -c
            cs = format_rf(mag)
            if not body:
                piece = f"({cs})" if (" + " in cs or " - " in cs) else cs
            elif cs == "1":
                piece = body
            else:
                piece = f"({cs}) {body}"
            if not parts:
                parts.append(piece if sign >= 0 else "-" + piece)
            else:
                parts.append((" + " if sign >= 0 else " - ") + piece)
        return "".join(parts)

    def __repr__(self):
        return f"<{self.pres.name}: {self}>"


def nc_mul(x, y):
    """Free bilinear concatenation product, no reduction."""
    return x * y


def normal_form(x):
    return x.normal_form()


def star(x):
    return x.star()


def degree(x):
    return x.degree()


@dataclass
class Overlap:
    """One critical pair: the overlap word and the two one-step branches."""

    word: tuple
    left_rule: str
    right_rule: str
    difference: NCPolynomial = dc_field(repr=False)

    @property
    def resolved(self):
        return self.difference.is_zero

    def __str__(self):
        state = "resolved" if self.resolved else f"UNRESOLVED, difference {self.difference}"
        return f"overlap {' '.join(self.word)} ({self.left_rule} / {self.right_rule}): {state}"


def _apply_at(pres, w, i, m, rhs):
    pre, post = w[:i], w[i + m :]
    return pres.poly({pre + t + post: c for c, t in rhs})


def check_confluence(pres, schema_bound=3):
    """Diamond-lemma check; returns the list of unresolved overlaps.

    Critical pairs are formed from all rule pairs, including schema instances
    up to schema_bound, for both subword containment and proper prefix/suffix
    overlap.  Each branch is reduced with the full rewriting relation, so a
    resolution may use schema instances beyond the bound.
    """
    rules = list(pres.rules)
    for sch in pres.schemas:
        rules.extend(sch.instances(schema_bound))
    bad = []
    for r1, r2 in itertools.product(rules, repeat=2):
        n1, n2 = len(r1.lhs), len(r2.lhs)
        overlaps = []
        # r2.lhs inside r1.lhs (identical full overlap of a rule with itself is trivial)
        for i in range(n1 - n2 + 1):
            if r1.lhs[i : i + n2] == r2.lhs and not (r1 is r2 and i == 0):
                overlaps.append((r1.lhs, 0, n1, i, n2))
        # proper suffix of r1.lhs = proper prefix of r2.lhs
        for t in range(1, min(n1, n2)):
            if r1.lhs[n1 - t :] == r2.lhs[:t]:
                w = r1.lhs + r2.lhs[t:]
                overlaps.append((w, 0, n1, n1 - t, n2))
        for w, i1, m1, i2, m2 in overlaps:
            b1 = _apply_at(pres, w, i1, m1, r1.rhs).normal_form()
            b2 = _apply_at(pres, w, i2, m2, r2.rhs).normal_form()
            diff = b1 - b2
            if not diff.is_zero:
                bad.append(Overlap(w, str(r1), str(r2), diff))
    return bad


# ---------------------------------------------------------------------------
# the two shipped presentations


def _r(lhs, rhs):
    return Rule(tuple(lhs.split()), tuple((rf(c), tuple(w.split())) for c, w in rhs))


@functools.lru_cache(maxsize=None)
def heegaard():
    """The Heegaard-type quantum 3-sphere algebra, generators a, a*, b, b*.

    Relations: a*a = q aa* + 1-q, b*b = p bb* + 1-p, the a-letters commute
    with the b-letters, and the gluing relation (1-aa*)(1-bb*) = 0 which
    rewriting closes into the GluingSchema family.  Grading: the U(1)
    coaction degree, +1 on a and b*, -1 on a* and b.
    """
    q, p = Q, RationalFunction.var("p")
    rules = [
        _r("a* a", [(q, "a a*"), (1 - q, "")]),
        _r("b* b", [(p, "b b*"), (1 - p, "")]),
        _r("b a", [(1, "a b")]),
        _r("b a*", [(1, "a* b")]),
        _r("b* a", [(1, "a b*")]),
        _r("b* a*", [(1, "a* b*")]),
    ]
    return Presentation(
        name="heegaard",
        letters=("a", "a*", "b", "b*"),
        star={"a": "a*", "a*": "a", "b": "b*", "b*": "b"},
        rules=rules,
        schemas=(GluingSchema("a", "a*", "b", "b*"),),
        grading={"a": 1, "a*": -1, "b": -1, "b*": 1},
    )


@functools.lru_cache(maxsize=None)
def qsu2():
    """O(SU_q(2)), generators alpha, gamma and their stars.

    Weighted order (alpha letters weigh 2, gamma letters weigh 1) orients
    alpha* alpha -> 1 - gamma gamma* despite the length increase.  Normal
    form basis: alpha^i gamma^m gamma*^n and alpha*^j gamma^m gamma*^n.
    """
    q = Q
    qi = ONE / q
    rules = [
        _r("gamma alpha", [(qi, "alpha gamma")]),
        _r("gamma* alpha", [(qi, "alpha gamma*")]),
        _r("gamma alpha*", [(q, "alpha* gamma")]),
        _r("gamma* alpha*", [(q, "alpha* gamma*")]),
        _r("gamma* gamma", [(1, "gamma gamma*")]),
        _r("alpha* alpha", [(1, ""), (-ONE, "gamma gamma*")]),
        _r("alpha alpha*", [(1, ""), (-(q * q), "gamma gamma*")]),
    ]
    return Presentation(
        name="qsu2",
        letters=("alpha", "alpha*", "gamma", "gamma*"),
        star={"alpha": "alpha*", "alpha*": "alpha", "gamma": "gamma*", "gamma*": "gamma"},
        rules=rules,
        weights={"alpha": 2, "alpha*": 2, "gamma": 1, "gamma*": 1},
    )
