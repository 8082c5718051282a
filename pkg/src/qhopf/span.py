"""Expressing coinvariant elements in base-subalgebra monomials.

The trace pairings evaluate elements of the base sphere algebra under its
representations, so ambient normal forms have to be rewritten as polynomials
in the sphere generators first.  A SpanningSet holds formal generator words
together with their ambient images; express solves the exact linear system
over ambient normal-form words.

Ordered monomials g0^i g1^j (plus their starred column) are the expected
spanning family, but they are not always enough: on the Heegaard sphere the
product f1 f1* collapses through the gluing relation to aa* + bb* - 1, so
mixed words are needed to reach aa*.  The word fallback closes that gap.
"""

from __future__ import annotations

from .field import ONE, RationalFunction, gcd_reduction
from .hopf import at_s, podles_K, podles_L, podles_Lstar
from .linear import GaussianBasis, solve_in_span
from .rewriting import NCPolynomial, heegaard, qsu2

FAMILY1 = "heegaard"
FAMILY2 = "podles"


class NotInSpan(Exception):
    """Raised when the solver cannot reach x; carries the unreachable residual."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"residual {residual}")


def base_generators(family, s_mode="symbolic"):
    """Formal generator name -> normal-formed ambient image."""
    if family == FAMILY1:
        pres = heegaard()
        f1 = pres.poly({"a b": 1}).normal_form()
        return pres, {"f0": pres.poly({"b b*": 1}).normal_form(), "f1": f1, "f1*": f1.star().normal_form()}
    pres = qsu2()
    gens = {"K": podles_K(), "L": podles_L(), "L*": podles_Lstar()}
    if s_mode != "symbolic":
        gens = {name: at_s(img, s_mode) for name, img in gens.items()}
    return pres, gens


def _mono_label(key):
    if not key:
        return "1"
    out = []
    i = 0
    while i < len(key):
        j = i
        while j < len(key) and key[j] == key[i]:
            j += 1
        out.append(key[i] if j - i == 1 else f"{key[i]}^{j - i}")
        i = j
    return " ".join(out)


def _monos_for(pres, gens, keys):
    monos = []
    for key in keys:
        img = pres.one()
        for name in key:
            img = img * gens[name]
        monos.append((key, img.normal_form()))
    return monos


class SpanningSet:
    __slots__ = ("family", "pres", "gens", "monos", "kind", "bound")

    def __init__(self, family, pres, gens, monos, kind, bound):
        self.family = family
        self.pres = pres
        self.gens = gens
        self.kind = kind
        self.bound = bound
        self.monos = monos

    @property
    def labels(self):
        return [_mono_label(k) for k, _ in self.monos]

    def __len__(self):
        return len(self.monos)

    def __repr__(self):
        return f"<SpanningSet {self.family} {self.kind} bound={self.bound} size={len(self)}>"


def build_span(family, degree_bound, s_mode="symbolic"):
    """Ordered monomials g0^i g1^j and g0^i g1*^j with image degree <= bound."""
    if degree_bound < 0:
        raise ValueError("degree bound must be >= 0")
    pres, gens = base_generators(family, s_mode)
    g0, g1, g1s = ("f0", "f1", "f1*") if family == FAMILY1 else ("K", "L", "L*")
    keys = []
    for total in range(degree_bound // 2 + 1):
        for j in range(total + 1):
            i = total - j
            keys.append((g0,) * i + (g1,) * j)
            if j > 0:
                keys.append((g0,) * i + (g1s,) * j)
    return SpanningSet(family, pres, gens, _monos_for(pres, gens, keys), "ordered", degree_bound)


def word_fallback_span(family, length_bound, s_mode="symbolic"):
    """Generator words up to the length bound, pruned to independent images.

    A word whose image already lies in the span of kept images is dropped and
    never extended: its extensions are products of spanned elements, so the
    kept extensions reach them too.  This keeps the solve small while spanning
    the same subspace as the full word list.
    """
    if length_bound < 0:
        raise ValueError("length bound must be >= 0")
    pres, gens = base_generators(family, s_mode)
    names = ("f0", "f1", "f1*") if family == FAMILY1 else ("K", "L", "L*")
    monos = [((), pres.one())]
    basis = GaussianBasis(pres.word_key)
    basis.add({(): ONE})
    layer = list(monos)
    with gcd_reduction(pres.name == "qsu2"):
        for _ in range(length_bound):
            kept = []
            for w, wimg in layer:
                for n in names:
                    img = (wimg * gens[n]).normal_form()
                    if basis.reduce(dict(img.terms)):
                        basis.add(dict(img.terms))
                        kept.append((w + (n,), img))
            monos.extend(kept)
            layer = kept
    return SpanningSet(family, pres, gens, monos, "words", length_bound)


class BaseExpression:
    """x written as a finite combination of formal base monomials."""

    __slots__ = ("span", "coefficients")

    def __init__(self, span, coefficients):
        self.span = span
        self.coefficients = {k: c for k, c in coefficients.items() if not c.is_zero}

    def items(self):
        return sorted(self.coefficients.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def to_ambient(self):
        acc = self.span.pres.zero()
        images = dict(self.span.monos)
        for key, c in self.coefficients.items():
            acc = acc + c * images[key]
        return acc.normal_form()

    def dump(self):
        return {_mono_label(k): str(c) for k, c in self.items()}

    def __str__(self):
        if not self.coefficients:
            return "0"
        return " + ".join(f"({c}) {_mono_label(k)}" for k, c in self.items())


def express(x, span):
    """Exact coefficients of x over the span's images, or raise NotInSpan."""
    if x.pres is not span.pres:
        raise ValueError("presentation mismatch")
    n = x.normal_form()
    vectors = [dict(img.terms) for _, img in span.monos]
    # two-variable coefficients grow fast under elimination without gcd pruning
    with gcd_reduction(span.pres.name == "qsu2"):
        coeffs = solve_in_span(vectors, dict(n.terms), span.pres.word_key)
        if coeffs is None:
            basis = GaussianBasis(span.pres.word_key)
            for v in vectors:
                basis.add(dict(v))
            residual = NCPolynomial(span.pres, basis.reduce(dict(n.terms)))
            raise NotInSpan(residual)
    return BaseExpression(span, {key: c for (key, _), c in zip(span.monos, coeffs)})


def express_in_base(x, family, start_bound=None, s_mode="symbolic"):
    """Escalating driver: ordered spans, then word spans of growing length.

    Starts at the ambient degree of x (or start_bound), widens twice by +2,
    then walks word spans up to that degree; gluing collapse means generator
    words may need as many letters as the ambient degree of x.
    """
    n = x.normal_form()
    deg = max((len(w) for w in n.terms), default=0)
    bound = deg if start_bound is None else start_bound
    if bound % 2:
        bound += 1
    last = None
    for widened in (bound, bound + 2, bound + 4):
        try:
            return express(n, build_span(family, widened, s_mode))
        except NotInSpan as e:
            last = e
    for length in range(1, max(bound, 1) + 1):
        try:
            return express(n, word_fallback_span(family, length, s_mode))
        except NotInSpan as e:
            last = e
    raise last
