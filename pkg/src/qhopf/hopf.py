"""Hopf structure on O(SU_q(2)), U(1)-coaction data, and the quotient coalgebra.

The coproduct, counit and antipode follow the fundamental-matrix convention
((alpha, -q gamma*), (gamma, alpha*)); the Hopf axioms pin the convention and
are part of the test suite.  The circle coaction on the Heegaard sphere is a
grading; for the Podles spheres it is the corepresentation through the
quotient coalgebra O(SU_q(2))/J_s, with J_s the coideal right ideal generated
by K, L - s, L* - s, which this module rebuilds degree by degree with exact
row reduction.
"""

from __future__ import annotations

from fractions import Fraction

from .field import ONE, Q, RationalFunction, S, gcd_active, gcd_reduction, rf
from .linear import GaussianBasis
from .rewriting import NCPolynomial, PresentationMismatch, qsu2


class DegenerateQuotient(ValueError):
    """Quotient of O(SU_q(2)) by J_s is not the expected circle coalgebra."""


class DegreeExceeded(ValueError):
    """Polynomial degree above the quotient basis degree bound."""


class TensorSquare:
    """Element of P (x) P: finite map (left word, right word) -> coefficient.

    Both legs are kept in normal form; zero coefficients are dropped.
    """

    __slots__ = ("pres", "terms")

    def __init__(self, pres, terms=None):
        self.pres = pres
        self.terms = terms if terms is not None else {}

    @classmethod
    def from_pairs(cls, pres, pairs):
        """Build from (coefficient, left NCPolynomial-or-word, right ditto) triples."""
        out = {}
        for c, lw, rw in pairs:
            c = rf(c)
            left = pres.poly({lw: ONE}).normal_form() if isinstance(lw, tuple) else lw.normal_form()
            right = pres.poly({rw: ONE}).normal_form() if isinstance(rw, tuple) else rw.normal_form()
            for w1, c1 in left.terms.items():
                for w2, c2 in right.terms.items():
                    key = (w1, w2)
                    v = c * c1 * c2
                    cur = out.get(key)
                    ssum = v if cur is None else cur + v
                    if ssum.is_zero:
                        out.pop(key, None)
                    else:
                        out[key] = ssum
        return cls(pres, out)

    def items(self):
        """Iterate (left word, right word, coefficient), deterministic order."""
        key = self.pres.word_key
        for lw, rw in sorted(self.terms, key=lambda t: (key(t[1]), key(t[0]))):
            yield lw, rw, self.terms[(lw, rw)]

    @property
    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if other.pres is not self.pres:
            raise PresentationMismatch("tensor addition across presentations")
        out = dict(self.terms)
        for k, c in other.terms.items():
            cur = out.get(k)
            s = c if cur is None else cur + c
            if s.is_zero:
                out.pop(k, None)
            else:
                out[k] = s
        return TensorSquare(self.pres, out)

    def scale(self, c):
        c = rf(c)
        if c.is_zero:
            return TensorSquare(self.pres)
        return TensorSquare(self.pres, {k: c * v for k, v in self.terms.items()})

    def mul(self, other):
        """Componentwise product (l (x) r)(l' (x) r') = ll' (x) rr', legs normal-formed."""
        if other.pres is not self.pres:
            raise PresentationMismatch("tensor product across presentations")
        pairs = []
        for (l1, r1), c1 in self.terms.items():
            for (l2, r2), c2 in other.terms.items():
                pairs.append((c1 * c2, l1 + l2, r1 + r2))
        return TensorSquare.from_pairs(self.pres, pairs)

    def sandwich(self, base):
        """Sum over base terms of (x_k * l) (x) (r * y_k); the connection recursion step."""
        pairs = []
        for (xw, yw), c in base.terms.items():
            for (lw, rw), c0 in self.terms.items():
                pairs.append((c * c0, xw + lw, rw + yw))
        return TensorSquare.from_pairs(self.pres, pairs)

    def map_left(self, fn):
        """Apply an NCPolynomial endomorphism to every left leg."""
        pairs = []
        for (lw, rw), c in self.terms.items():
            pairs.append((c, fn(self.pres.poly({lw: ONE})), self.pres.poly({rw: ONE})))
        return TensorSquare.from_pairs(self.pres, pairs)

    def map_right(self, fn):
        """Apply an NCPolynomial endomorphism to every right leg."""
        pairs = []
        for (lw, rw), c in self.terms.items():
            pairs.append((c, self.pres.poly({lw: ONE}), fn(self.pres.poly({rw: ONE}))))
        return TensorSquare.from_pairs(self.pres, pairs)

    def contract(self):
        """Multiplication map m: sum of c * l * r, normal-formed."""
        acc = self.pres.zero()
        for (lw, rw), c in self.terms.items():
            acc = acc + self.pres.poly({lw + rw: c})
        return acc.normal_form()

    def map_coefficients(self, fn):
        out = {}
        for k, c in self.terms.items():
            c2 = fn(c)
            if not c2.is_zero:
                out[k] = c2
        return TensorSquare(self.pres, out)

    def __eq__(self, other):
        if not isinstance(other, TensorSquare) or other.pres is not self.pres:
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(other.terms[k] == c for k, c in self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for lw, rw, c in self.items():
            lstr = " ".join(lw) or "1"
            rstr = " ".join(rw) or "1"
            bits.append(f"({c}) {lstr} (x) {rstr}")
        return " + ".join(bits)

    def __repr__(self):
        return f"<TensorSquare {self}>"


# ---------------------------------------------------------------------------
# Hopf structure maps on QSU2


def _gen_coproduct_table(pres):
    q = Q
    al, als, ga, gas = "alpha", "alpha*", "gamma", "gamma*"
    return {
        al: (((ONE), (al,), (al,)), ((-q), (gas,), (ga,))),
        ga: (((ONE), (ga,), (al,)), ((ONE), (als,), (ga,))),
        gas: (((ONE), (gas,), (als,)), ((ONE), (al,), (gas,))),
        als: (((ONE), (als,), (als,)), ((-q), (ga,), (gas,))),
    }


def coproduct(x):
    """Delta as an algebra morphism into TensorSquare, legs normal-formed."""
    pres = x.pres
    if pres is not qsu2():
        raise PresentationMismatch("coproduct is defined on the QSU2 presentation")
    table = _gen_coproduct_table(pres)
    unit = TensorSquare(pres, {((), ()): ONE})
    acc = TensorSquare(pres)
    for w, c in x.terms.items():
        t = unit
        for letter in w:
            t = t.mul(TensorSquare.from_pairs(pres, table[letter]))
        acc = acc + t.scale(c)
    return acc


def counit(x):
    """Epsilon: alpha, alpha* -> 1 and gamma, gamma* -> 0, extended as a character."""
    if x.pres is not qsu2():
        raise PresentationMismatch("counit is defined on the QSU2 presentation")
    acc = rf(0)
    for w, c in x.terms.items():
        if all(letter in ("alpha", "alpha*") for letter in w):
            acc = acc + c
    return acc


_ANTIPODE = None


def antipode(x):
    """S: alpha <-> alpha*, gamma -> -q gamma, gamma* -> -(1/q) gamma*, antimultiplicative."""
    global _ANTIPODE
    if x.pres is not qsu2():
        raise PresentationMismatch("antipode is defined on the QSU2 presentation")
    if _ANTIPODE is None:
        q = Q
        _ANTIPODE = {
            "alpha": (ONE, "alpha*"),
            "alpha*": (ONE, "alpha"),
            "gamma": (-q, "gamma"),
            "gamma*": (-(ONE / q), "gamma*"),
        }
    acc = {}
    for w, c in x.terms.items():
        coeff = c
        letters = []
        for letter in reversed(w):
            f, img = _ANTIPODE[letter]
            coeff = coeff * f
            letters.append(img)
        key = tuple(letters)
        cur = acc.get(key)
        s = coeff if cur is None else cur + coeff
        if s.is_zero:
            acc.pop(key, None)
        else:
            acc[key] = s
    return NCPolynomial(x.pres, acc).normal_form()


# ---------------------------------------------------------------------------
# the Podles sphere embedded in O(SU_q(2))


def podles_K():
    """K = s(gamma alpha + alpha* gamma*) + (1-s^2) gamma* gamma, normal-formed."""
    U = qsu2()
    s = S
    x = s * (U.poly({"gamma alpha": 1}) + U.poly({"alpha* gamma*": 1})) + (1 - s * s) * U.poly(
        {"gamma* gamma": 1}
    )
    return x.normal_form()


def podles_L():
    """L = s(alpha^2 - q gamma*^2) + (1-s^2) alpha gamma*, normal-formed."""
    U = qsu2()
    s, q = S, Q
    x = s * (U.poly({"alpha alpha": 1}) - q * U.poly({"gamma* gamma*": 1})) + (
        1 - s * s
    ) * U.poly({"alpha gamma*": 1})
    return x.normal_form()


def podles_Lstar():
    return podles_L().star().normal_form()


def at_s(x, value):
    """Substitute a rational value for s in every coefficient."""
    v = Fraction(value)
    return x.map_coefficients(lambda c: c.substitute({"s": v}))


# ---------------------------------------------------------------------------
# circle coactions


def coaction_family1(x):
    """Winding decomposition of the Heegaard-sphere coaction (the grading)."""
    n = x.normal_form()
    return [(comp, d) for d, comp in n.winding_parts().items()]


def _rep_winding(w):
    if not w:
        return 0
    if all(x == "alpha" for x in w):
        return len(w)
    if all(x == "alpha*" for x in w):
        return -len(w)
    return None


class QuotientBasis:
    """Basis data for O(SU_q(2)) / J_s in degrees <= d.

    Degree is word length.  The ideal slice is spanned by row-reducing
    normal forms of g * w for the three generators g of J_s and normal-form
    words w, eliminating high words first so that every echelon row is
    headed by its highest word.  Representatives of the quotient are the
    degree <= d words that never become pivots; the expected picture is
    {1, alpha^n, alpha*^n : n <= d}, dimension 2d + 1.
    """

    def __init__(self, s_mode, d, extra=0):
        if d < 1:
            raise ValueError("degree bound must be >= 1")
        U = qsu2()
        self.pres = U
        self.d = d
        self.s_mode = "symbolic" if s_mode == "symbolic" else Fraction(s_mode)
        gens = [podles_K(), podles_L() - S * U.one(), podles_Lstar() - S * U.one()]
        if self.s_mode != "symbolic":
            gens = [at_s(g, self.s_mode) for g in gens]

        def priority(w):
            # longest words first so low-pivot rows stay inside the degree
            # filtration; within a degree, clear gamma-containing words before
            # the pure alpha powers that should survive as representatives
            has_gamma = any(x in ("gamma", "gamma*") for x in w)
            return (-len(w), 0 if has_gamma else 1, tuple(-U.index[x] for x in w))

        self.basis = GaussianBasis(priority)
        # symbolic-s elimination blows up without gcd cancellation of the
        # rational-function pivots; rational s stays in Q(q) and is fine plain
        with gcd_reduction(self.s_mode == "symbolic"):
            for w in _nf_words_upto(U, d + extra):
                for g in gens:
                    prod = (g * U.poly({w: ONE})).normal_form()
                    if not prod.is_zero:
                        self.basis.add(dict(prod.terms))
        low = [w for w in _nf_words_upto(U, d) if w not in self.basis.pivots]
        self.representatives = sorted(low, key=U.word_key)
        if len(self.representatives) != 2 * d + 1:
            raise DegenerateQuotient(
                f"dimension {len(self.representatives)} != {2 * d + 1} at degree {d}"
            )
        self._windings = None

    @property
    def windings(self):
        """Map winding -> representative word under class(alpha^n) <-> u^n.

        Raises DegenerateQuotient when the representatives are not the pure
        alpha powers; this happens at s = 1, where the ideal contains
        alpha* - alpha and the group-likes of the quotient are the classes
        of (alpha + gamma)^n and (alpha - gamma)^n instead.
        """
        if self._windings is None:
            table = {}
            for w in self.representatives:
                n = _rep_winding(w)
                if n is None or abs(n) > self.d:
                    raise DegenerateQuotient(f"unexpected representative {' '.join(w)}")
                if n in table:
                    raise DegenerateQuotient(f"winding {n} represented twice")
                table[n] = w
            self._windings = table
        return self._windings

    def coordinates(self, w):
        """Coordinates of the class of a normal-form word over the representatives."""
        if len(w) > self.d:
            raise DegreeExceeded(f"word of degree {len(w)} exceeds bound {self.d}")
        with gcd_reduction(self.s_mode == "symbolic" or gcd_active()):
            return self.basis.reduce({w: ONE})

    def dump(self):
        return {
            "degree": self.d,
            "s": "symbolic" if self.s_mode == "symbolic" else str(self.s_mode),
            "dimension": len(self.representatives),
            "representatives": [" ".join(w) or "1" for w in self.representatives],
        }


def _nf_words_upto(pres, d):
    """All QSU2 normal-form words of length <= d: alpha or alpha* block, then gammas."""
    out = [()]
    for total in range(1, d + 1):
        for i in range(total + 1):
            for m in range(total - i + 1):
                n = total - i - m
                out.append(("alpha",) * i + ("gamma",) * m + ("gamma*",) * n)
                if i > 0:
                    out.append(("alpha*",) * i + ("gamma",) * m + ("gamma*",) * n)
    return out


def quotient_basis(s_mode, d):
    """QuotientBasis for the given s; widens the product enumeration once if needed."""
    try:
        return QuotientBasis(s_mode, d)
    except DegenerateQuotient:
        return QuotientBasis(s_mode, d, extra=1)


def coaction_family2(x, qb):
    """Winding components of (id (x) pi_s) Delta on the QSU2 presentation."""
    to_winding = {w: n for n, w in qb.windings.items()}
    n = x.normal_form()
    if qb.s_mode != "symbolic":
        n = at_s(n, qb.s_mode)
    delta = coproduct(n)
    parts = {}
    for (lw, rw), c in delta.terms.items():
        for rep, v in qb.coordinates(rw).items():
            wind = to_winding[rep]
            comp = parts.setdefault(wind, {})
            cur = comp.get(lw)
            s = c * v if cur is None else cur + c * v
            if s.is_zero:
                comp.pop(lw, None)
            else:
                comp[lw] = s
    out = []
    for wind in sorted(parts):
        if parts[wind]:
            out.append((NCPolynomial(qb.pres, parts[wind]), wind))
    return out
