"""Strong connection values, their idempotents, and Chern trace elements.

A connection value is the tensor ell(u^(-mu)) in P (x) P, stored as a list
of (left polynomial, right word) pairs: terms sharing a right-leg word are
merged, which makes the idempotent size canonical.  The corepresentation
label mu always refers to the argument u^(-mu), so the winding theorem reads
pairing(mu) = mu.

Family 1 (Heegaard sphere) uses the base values
    ell(u)  = a* (x) a + q b(1-aa*) (x) b*
    ell(u*) = b* (x) b + p a(1-bb*) (x) a*
and the recursion ell(u^n) = u^[1] ell(u^(n-1)) u^[2]: new left-leg factors
multiply on the left, new right-leg factors on the right.

Family 2 (Podles spheres) splits the circle into O(SU_q(2)) by ordered
products of the elements h_j (negative powers of u) and k_j (positive
powers) and applies (S (x) id) o Delta.
"""

from __future__ import annotations

from fractions import Fraction

from .field import ONE, P, Q, RationalFunction, S, gcd_reduction, rf
from .hopf import TensorSquare, antipode, at_s, coproduct
from .linear import GaussianBasis
from .rewriting import NCPolynomial, heegaard, qsu2

FAMILY1 = "heegaard"
FAMILY2 = "podles"


class ConnectionValue:
    """ell(u^(-mu)) as merged (left polynomial, right word) terms."""

    __slots__ = ("family", "mu", "pres", "terms", "premerge_terms", "s_mode")

    def __init__(self, family, mu, pres, terms, premerge_terms=None, s_mode=None):
        self.family = family
        self.mu = mu
        self.pres = pres
        self.terms = terms
        self.premerge_terms = premerge_terms
        self.s_mode = s_mode

    @property
    def size(self):
        return len(self.terms)

    def as_tensor(self):
        t = TensorSquare(self.pres)
        for l, r in self.terms:
            t = t + TensorSquare(self.pres, {(lw, r): c for lw, c in l.terms.items()})
        return t

    def dump(self):
        return {
            "family": self.family,
            "mu": self.mu,
            "terms": [{"left": str(l), "right": " ".join(r) or "1"} for l, r in self.terms],
        }

    def __repr__(self):
        return f"<ConnectionValue {self.family} mu={self.mu} size={self.size}>"


def _merge_groups(pres, groups):
    """Merge (left poly, right word) pairs with equal right word, sorted by right leg.

    Right legs are normal-formed first; a rewrite with several result words
    splits the pair, with coefficients absorbed into the left legs.
    """
    acc = {}
    for l, r in groups:
        for rw, cc in pres.poly({r: ONE}).normal_form().terms.items():
            piece = l if cc == ONE else l.scale(cc)
            cur = acc.get(rw)
            acc[rw] = piece if cur is None else cur + piece
    out = []
    for r in sorted(acc, key=pres.word_key):
        l = acc[r].normal_form()
        if not l.is_zero:
            out.append((l, r))
    return out


def _family1_base(pres, positive):
    q, p = Q, P
    one = pres.one()
    if positive:  # ell(u)
        l2 = (q * pres.gen("b") * (one - pres.poly({"a a*": 1}))).normal_form()
        return [(pres.gen("a*"), pres.word("a")), (l2, pres.word("b*"))]
    l2 = (p * pres.gen("a") * (one - pres.poly({"b b*": 1}))).normal_form()
    return [(pres.gen("b*"), pres.word("b")), (l2, pres.word("a*"))]


def ell_family1(mu):
    """Connection value for the Heegaard sphere, argument u^(-mu)."""
    pres = heegaard()
    n = -mu  # power of u actually built
    if n == 0:
        return ConnectionValue(FAMILY1, mu, pres, [(pres.one(), ())], premerge_terms=1)
    base = _family1_base(pres, n > 0)
    terms = [(pres.one(), ())]
    for _ in range(abs(n)):
        terms = [(lb * l, r + rb) for lb, rb in base for l, r in terms]
    premerge = len(terms)
    return ConnectionValue(
        FAMILY1, mu, pres, _merge_groups(pres, terms), premerge_terms=premerge
    )


def splitting_factor(j, kind, s_mode="symbolic"):
    """h_j or k_j from the circle splitting, with s symbolic or rational."""
    U = qsu2()
    q = Q
    s = S if s_mode == "symbolic" else rf(Fraction(s_mode))
    ga_part = U.gen("gamma") - q * U.gen("gamma*")
    if kind == "h":
        num = U.gen("alpha") + (q**j * s) * ga_part + (q ** (2 * j) * s * s) * U.gen("alpha*")
        den = 1 + q ** (2 * j) * s * s
    else:
        num = U.gen("alpha*") - (q**-j * s) * ga_part + (q ** (-2 * j) * s * s) * U.gen("alpha")
        den = 1 + q ** (-2 * j) * s * s
    return (ONE / den) * num


def circle_splitting(mu, s_mode="symbolic"):
    """i(u^(-mu)): ordered product of h_j (mu < 0) or k_j (mu > 0), increasing j left to right."""
    U = qsu2()
    # coefficient growth under repeated products needs gcd cancellation
    with gcd_reduction(True):
        acc = U.one()
        if mu < 0:
            for j in range(-mu):
                acc = acc * splitting_factor(j, "h", s_mode)
        else:
            for j in range(mu):
                acc = acc * splitting_factor(j, "k", s_mode)
        return acc.normal_form()


def ell_family2(mu, s_mode="symbolic"):
    """Connection value for the Podles spheres: (S (x) id) Delta i(u^(-mu))."""
    pres = qsu2()
    with gcd_reduction(True):
        t = coproduct(circle_splitting(mu, s_mode)).map_left(antipode)
        groups = [
            (NCPolynomial(pres, {lw: c}), rw) for (lw, rw), c in t.terms.items()
        ]
        merged = _merge_groups(pres, groups)
    return ConnectionValue(FAMILY2, mu, pres, merged, s_mode=s_mode)


def _splitting_denominator(mu, s_mode):
    """Product of the h_j or k_j denominators entering ell(u^(-mu))."""
    q = Q
    s = S if s_mode in (None, "symbolic") else rf(Fraction(s_mode))
    D = ONE
    if mu < 0:
        for j in range(-mu):
            D = D * (1 + q ** (2 * j) * s * s)
    else:
        for j in range(mu):
            D = D * (1 + q ** (-2 * j) * s * s)
    return D


def splitting_class(w, qb):
    """Quotient class of i(u^w) as coordinates over qb's representatives.

    These classes are the group-like elements of the quotient coalgebra and
    realize its isomorphism with O(U(1)): u^w corresponds to class(i(u^w)).
    At s = 0 this collapses to class(alpha^w), but for s != 0 the two bases
    differ and only this one makes the canonical-map condition exact.
    """
    memo = qb.__dict__.setdefault("_section_classes", {})
    if w in memo:
        return memo[w]
    poly = circle_splitting(-w, "symbolic" if qb.s_mode == "symbolic" else qb.s_mode)
    out = {}
    with gcd_reduction(True):
        for word, c in poly.terms.items():
            for rep, v in qb.coordinates(word).items():
                cur = out.get(rep)
                val = c * v if cur is None else cur + c * v
                if val.is_zero:
                    out.pop(rep, None)
                else:
                    out[rep] = val
    memo[w] = out
    return out


def splitting_classes_independent(qb):
    """Whether {class(i(u^w)) : |w| <= d} is linearly independent, hence a basis."""
    with gcd_reduction(True):
        basis = GaussianBasis(qb.pres.word_key)
        rank = 0
        for w in range(-qb.d, qb.d + 1):
            if basis.add(dict(splitting_class(w, qb))) is not None:
                rank += 1
        return rank == 2 * qb.d + 1


def splitting_class_group_like(w, qb):
    """Whether class(i(u^w)) is group-like under the quotient coalgebra structure."""
    g = splitting_class(w, qb)
    poly = circle_splitting(-w, "symbolic" if qb.s_mode == "symbolic" else qb.s_mode)
    lhs = {}
    with gcd_reduction(True):
        for (lw, rw), c in coproduct(poly).terms.items():
            cl = qb.coordinates(lw)
            cr = qb.coordinates(rw)
            for r1, v1 in cl.items():
                for r2, v2 in cr.items():
                    key = (r1, r2)
                    val = c * v1 * v2
                    cur = lhs.get(key)
                    tot = val if cur is None else cur + val
                    if tot.is_zero:
                        lhs.pop(key, None)
                    else:
                        lhs[key] = tot
        for r1, v1 in g.items():
            for r2, v2 in g.items():
                key = (r1, r2)
                cur = lhs.get(key)
                tot = -(v1 * v2) if cur is None else cur - v1 * v2
                if tot.is_zero:
                    lhs.pop(key, None)
                else:
                    lhs[key] = tot
        return not lhs


class IdempotentMatrix:
    """E_ij = normal_form(r_i l_j) for a connection value's term list."""

    __slots__ = ("pres", "entries")

    def __init__(self, pres, entries):
        self.pres = pres
        self.entries = entries

    @property
    def size(self):
        return len(self.entries)

    def trace(self):
        acc = self.pres.zero()
        for i in range(self.size):
            acc = acc + self.entries[i][i]
        return acc.normal_form()

    def _coeffs_mention_s(self):
        for row in self.entries:
            for e in row:
                for c in e.terms.values():
                    for poly in (c.numerator, c.denominator):
                        for (_, _, es), _ in poly.terms():
                            if es:
                                return True
        return False

    def square_defect(self):
        """Entrywise normal form of E*E - E; zero matrix iff E is idempotent."""
        n = self.size
        out = []
        # gcd pruning pays off only for two-variable coefficients; at rational
        # s everything lives in Q(q) and the sympy round-trips dominate instead
        with gcd_reduction(self.pres.name == "qsu2" and self._coeffs_mention_s()):
            for i in range(n):
                row = []
                for k in range(n):
                    acc = self.pres.zero()
                    for j in range(n):
                        acc = acc + self.entries[i][j] * self.entries[j][k]
                    row.append((acc.normal_form() - self.entries[i][k]).normal_form())
                out.append(row)
        return out

    def is_idempotent(self):
        return all(e.is_zero for row in self.square_defect() for e in row)

    def star_defect(self):
        """Entrywise star(E_ij) - E_ji; reported, never asserted zero."""
        n = self.size
        return [
            [(self.entries[i][j].star().normal_form() - self.entries[j][i]).normal_form() for j in range(n)]
            for i in range(n)
        ]


def idempotent(c):
    pres = c.pres
    n = len(c.terms)
    entries = []
    with gcd_reduction(c.family == FAMILY2):
        for i in range(n):
            _, ri = c.terms[i]
            row = []
            for j in range(n):
                lj, _ = c.terms[j]
                row.append((pres.poly({ri: ONE}) * lj).normal_form())
            entries.append(row)
    return IdempotentMatrix(pres, entries)


def trace_element(c):
    """x_mu = sum of r_i l_i, the degree-0 Chern character representative."""
    pres = c.pres
    with gcd_reduction(c.family == FAMILY2):
        acc = pres.zero()
        for l, r in c.terms:
            acc = acc + pres.poly({r: ONE}) * l
        return acc.normal_form()


def _family1_windings(c, report):
    pres = c.pres
    contractions = {}
    for l, r in c.terms:
        w = pres.word_degree(r)
        cur = contractions.get(w, pres.zero())
        contractions[w] = cur + l * pres.poly({r: ONE})
    report["windings"] = {}
    for w in sorted(contractions):
        val = contractions[w].normal_form()
        want = pres.one() if w == -c.mu else pres.zero()
        good = val == want
        report["windings"][w] = good
        if not good:
            report["ok"] = False
            report["failures"].append(f"winding {w} contraction = {val}")
    if -c.mu not in contractions and c.terms:
        report["ok"] = False
        report["failures"].append(f"no winding {-c.mu} component present")


def _family2_windings(c, qb, report, deep):
    # contraction taken in quotient coordinates, so this also covers s = 1
    # where the representatives stop being pure alpha powers
    pres = c.pres
    if qb.s_mode != "symbolic" and c.s_mode not in ("symbolic", qb.s_mode):
        raise ValueError("connection value and quotient basis use different s")
    if qb.s_mode == "symbolic" and c.s_mode != "symbolic":
        raise ValueError("rational-s connection value needs a matching quotient basis")
    specialize = qb.s_mode != "symbolic" and c.s_mode == "symbolic"

    expected = splitting_class(-c.mu, qb)
    good = True
    with gcd_reduction(True):
        # contract the left legs against Delta of the right legs in the
        # algebra first; only the surviving right legs then pass through the
        # quotient, which keeps the costly coordinate arithmetic out of the
        # inner product loop.  Scaling by the common splitting denominator
        # makes every coefficient a plain polynomial, so the loop never
        # touches gcd cancellation.
        scale = _splitting_denominator(
            c.mu, qb.s_mode if specialize else c.s_mode
        )
        acc = TensorSquare(pres)
        for l, r in c.terms:
            lv = at_s(l, qb.s_mode) if specialize else l
            left = TensorSquare(
                pres, {(w, ()): scale * cc for w, cc in lv.terms.items()}
            )
            acc = acc + left.mul(coproduct(pres.poly({r: ONE})))

        contr = {}
        for (lw, rw), cc in acc.terms.items():
            if lw != ():
                good = False
                report["failures"].append(
                    f"left residue {pres.poly({lw: cc})} against right leg {' '.join(rw) or '1'}"
                )
                continue
            for rep, v in qb.coordinates(rw).items():
                cur = contr.get(rep)
                val = cc * v if cur is None else cur + cc * v
                if val.is_zero:
                    contr.pop(rep, None)
                else:
                    contr[rep] = val

        for rep in sorted(set(contr) | set(expected), key=pres.word_key):
            got = contr.get(rep)
            want = expected.get(rep)
            want = None if want is None else scale * want
            match = (want is None and got is None) or (
                got is not None and want is not None and (got - want).is_zero
            )
            if not match:
                good = False
                report["failures"].append(
                    f"contraction against class({' '.join(rep) or '1'}) = "
                    f"{got}, expected {want}"
                )
    report["windings"] = {-c.mu: good}
    if not good:
        report["ok"] = False

    report["section_independent"] = splitting_classes_independent(qb)
    if not report["section_independent"]:
        report["ok"] = False
        report["failures"].append("splitting classes are linearly dependent")
    if deep:
        report["section_group_like"] = splitting_class_group_like(-c.mu, qb)
        if not report["section_group_like"]:
            report["ok"] = False
            report["failures"].append(f"class(i(u^{-c.mu})) is not group-like")


def verify_connection(c, qb=None, deep=False):
    """Check the strong-connection conditions; returns a report dict.

    (i) unit: sum of l_i r_i normal-forms to 1.
    (ii) canonical map: contracting left legs against the quotient
        decomposition of the right legs yields exactly 1 (x) u^(-mu).
        Family 1 reads windings off the grading; family 2 needs qb and
        compares against the group-like class of i(u^(-mu)), additionally
        checking that the splitting classes form a basis (and, with deep,
        that the target class really is group-like).
    (iii) mu = 0 value is exactly 1 (x) 1.
    """
    pres = c.pres
    report = {"family": c.family, "mu": c.mu, "ok": True, "failures": []}

    with gcd_reduction(c.family == FAMILY2):
        unit = pres.zero()
        for l, r in c.terms:
            unit = unit + l * pres.poly({r: ONE})
        unit = unit.normal_form()
    report["unit"] = unit == pres.one()
    if not report["unit"]:
        report["ok"] = False
        report["failures"].append(f"sum l_i r_i = {unit}")

    if c.family == FAMILY1:
        _family1_windings(c, report)
    else:
        if qb is None:
            raise ValueError("family 2 winding verification needs a quotient basis")
        _family2_windings(c, qb, report, deep)

    if c.mu == 0:
        trivial = c.terms == [(pres.one(), ())]
        report["unit_value"] = trivial
        if not trivial:
            report["ok"] = False
            report["failures"].append("ell(1) differs from 1 (x) 1")
    return report
