"""Hopf axioms on O(SU_q(2)), the sphere embedding, coactions, quotient basis."""

import random
from fractions import Fraction

import pytest

from qhopf.field import ONE, Q, S, rf
from qhopf.hopf import (
    DegenerateQuotient,
    DegreeExceeded,
    QuotientBasis,
    TensorSquare,
    antipode,
    at_s,
    coaction_family1,
    coaction_family2,
    coproduct,
    counit,
    podles_K,
    podles_L,
    podles_Lstar,
    quotient_basis,
)
from qhopf.rewriting import PresentationMismatch, heegaard, qsu2

q, s = Q, S
U = qsu2()
H = heegaard()


def ts(pairs):
    return TensorSquare.from_pairs(U, [(rf(c), U.word(l), U.word(r)) for c, l, r in pairs])


def test_coproduct_generators():
    assert coproduct(U.one()) == ts([(1, "", "")])
    assert coproduct(U.gen("alpha")) == ts([(1, "alpha", "alpha"), (-q, "gamma*", "gamma")])
    assert coproduct(U.gen("gamma")) == ts([(1, "gamma", "alpha"), (1, "alpha*", "gamma")])
    assert coproduct(U.gen("gamma*")) == ts([(1, "gamma*", "alpha*"), (1, "alpha", "gamma*")])
    assert coproduct(U.gen("alpha*")) == ts([(1, "alpha*", "alpha*"), (-q, "gamma", "gamma*")])


def test_coproduct_is_morphism():
    x = U.poly({"alpha gamma": 1})
    assert coproduct(x) == coproduct(U.gen("alpha")).mul(coproduct(U.gen("gamma")))


def test_coproduct_wrong_presentation():
    with pytest.raises(PresentationMismatch):
        coproduct(H.gen("a"))


def test_counit():
    assert counit(U.gen("alpha")) == 1
    assert counit(U.gen("alpha*")) == 1
    assert counit(U.gen("gamma")) == 0
    assert counit(podles_K()) == 0
    assert counit(podles_L()) == s
    assert counit(U.poly({"alpha alpha*": 1})) == 1


def test_antipode():
    assert antipode(U.gen("alpha")) == U.gen("alpha*")
    assert antipode(U.gen("alpha*")) == U.gen("alpha")
    assert antipode(U.gen("gamma")) == -q * U.gen("gamma")
    assert antipode(U.gen("gamma*")) == (-(ONE / q)) * U.gen("gamma*")
    # S(gamma gamma*) = S(gamma*) S(gamma) = gamma* gamma -> gamma gamma*
    assert antipode(U.poly({"gamma gamma*": 1})) == U.poly({"gamma gamma*": 1})


def _random_words(rng, count, maxlen=4):
    out = []
    for _ in range(count):
        out.append(tuple(rng.choice(U.letters) for _ in range(rng.randrange(maxlen + 1))))
    return out


def _tensor3(t2, expand_left):
    out = {}
    for (lw, rw), c in t2.terms.items():
        inner = coproduct(U.poly({(lw if expand_left else rw): ONE}))
        for (w1, w2), c2 in inner.terms.items():
            key = (w1, w2, rw) if expand_left else (lw, w1, w2)
            cur = out.get(key)
            v = c * c2
            acc = v if cur is None else cur + v
            if acc.is_zero:
                out.pop(key, None)
            else:
                out[key] = acc
    return out


def _dict_eq(d1, d2):
    if set(d1) != set(d2):
        return False
    return all(d2[k] == v for k, v in d1.items())


def test_hopf_axioms_generators_and_random_words():
    rng = random.Random(60214)
    sample = [(x,) for x in U.letters] + _random_words(rng, 20)
    for w in sample:
        x = U.poly({w: 1})
        d = coproduct(x)
        # coassociativity
        assert _dict_eq(_tensor3(d, True), _tensor3(d, False))
        # counit axiom, both sides
        left = U.zero()
        right = U.zero()
        for (lw, rw), c in d.terms.items():
            left = left + counit(U.poly({lw: ONE})) * U.poly({rw: c})
            right = right + counit(U.poly({rw: ONE})) * U.poly({lw: c})
        nx = x.normal_form()
        assert left.normal_form() == nx
        assert right.normal_form() == nx
        # antipode axiom, both sides
        eps = counit(x) * U.one()
        assert d.map_left(antipode).contract() == eps
        assert d.map_right(antipode).contract() == eps


def test_antipode_is_antihomomorphism():
    rng = random.Random(3317)
    for _ in range(10):
        w1, w2 = _random_words(rng, 2, maxlen=3)
        x, y = U.poly({w1: 1}), U.poly({w2: 1})
        assert antipode(x * y) == (antipode(y) * antipode(x)).normal_form()


def test_podles_relations():
    K, L, Ls = podles_K(), podles_L(), podles_Lstar()
    one = U.one()
    assert K.star().normal_form() == K
    assert (L * K).normal_form() == (q * q) * (K * L).normal_form()
    lhs = (Ls * L + K * K).normal_form()
    assert lhs == ((1 - s * s) * K + s * s * one).normal_form()
    lhs2 = (L * Ls + (q**4) * K * K).normal_form()
    assert lhs2 == ((1 - s * s) * (q * q) * K + s * s * one).normal_form()


def test_counit_fixes_sphere_parameters():
    assert counit(podles_Lstar()) == s


def test_coaction_family1():
    assert coaction_family1(H.poly({"a b": 1})) == [(H.poly({"a b": 1}), 0)]
    assert coaction_family1(H.poly({"b b*": 1})) == [(H.poly({"b b*": 1}), 0)]
    assert coaction_family1(H.gen("a")) == [(H.gen("a"), 1)]
    comps = coaction_family1(H.gen("a") + H.gen("b"))
    assert [(str(c), w) for c, w in comps] == [("b", -1), ("a", 1)]


def test_coaction_family1_windings_add():
    rng = random.Random(909)
    for _ in range(10):
        w1 = tuple(rng.choice(H.letters) for _ in range(rng.randrange(1, 4)))
        w2 = tuple(rng.choice(H.letters) for _ in range(rng.randrange(1, 4)))
        d1 = H.poly({w1: 1}).degree()
        d2 = H.poly({w2: 1}).degree()
        for _, wind in coaction_family1(H.poly({w1 + w2: 1})):
            assert wind == d1 + d2


def test_quotient_dimensions():
    for d in (1, 2):
        for mode in (Fraction(1, 3), Fraction(1, 2), "symbolic"):
            qb = quotient_basis(mode, d)
            assert len(qb.representatives) == 2 * d + 1
    qb = quotient_basis(Fraction(1, 2), 1)
    assert qb.representatives == [(), ("alpha",), ("alpha*",)]
    assert set(qb.windings) == {-1, 0, 1}


def test_quotient_coordinates_idempotent():
    qb = quotient_basis(Fraction(1, 2), 2)
    for w in qb.representatives:
        assert qb.coordinates(w) == {w: ONE}


def test_quotient_degree_exceeded():
    qb = quotient_basis(Fraction(1, 2), 1)
    with pytest.raises(DegreeExceeded):
        qb.coordinates(("alpha", "alpha"))


def test_quotient_s1_degenerates_identification():
    # dimensions survive at s=1 but alpha* - alpha lies in the ideal, so the
    # alpha-power identification cannot: windings must refuse
    qb = QuotientBasis(Fraction(1), 2)
    assert len(qb.representatives) == 5
    with pytest.raises(DegenerateQuotient):
        qb.windings
    red = qb.basis.reduce({("alpha*",): ONE})
    assert red == {("alpha",): ONE}


def test_coaction_family2_examples():
    # pi_s(gamma) = s/(1-s^2) (u - u^{-1}) is nonzero away from s=0, so alpha
    # picks up a gamma* correction in its winding split; at s=0 it is clean
    qb = quotient_basis(Fraction(1, 2), 2)
    one = coaction_family2(U.one(), qb)
    assert one == [(U.one(), 0)]
    c = 2 * q / 3  # q * s/(1-s^2) at s = 1/2
    al = coaction_family2(U.gen("alpha"), qb)
    assert al == [
        (c * U.gen("gamma*"), -1),
        (U.gen("alpha") - c * U.gen("gamma*"), 1),
    ]
    als = coaction_family2(U.gen("alpha*"), qb)
    assert als == [
        (U.gen("alpha*") - (c / q) * U.gen("gamma"), -1),
        ((c / q) * U.gen("gamma"), 1),
    ]
    qb0 = quotient_basis(Fraction(0), 2)
    assert coaction_family2(U.gen("alpha"), qb0) == [(U.gen("alpha"), 1)]


@pytest.mark.parametrize("mode", [Fraction(1, 3), Fraction(1, 2), "symbolic"])
def test_embedded_generators_coinvariant(mode):
    qb = quotient_basis(mode, 2)
    for x in (podles_K(), podles_L(), podles_Lstar()):
        comps = coaction_family2(x, qb)
        assert len(comps) == 1
        comp, wind = comps[0]
        assert wind == 0
        expect = x if mode == "symbolic" else at_s(x, mode)
        assert comp == expect.normal_form()


def test_tensor_square_normalization():
    t = TensorSquare.from_pairs(
        U,
        [
            (ONE, U.word("alpha* alpha"), U.word("")),
            (ONE, U.word("gamma gamma*"), U.word("")),
        ],
    )
    # legs are normal-formed, so alpha* alpha collapses and merges
    assert t == TensorSquare.from_pairs(U, [(ONE, U.word(""), U.word(""))])


def test_quotient_dump():
    qb = quotient_basis(Fraction(1, 2), 1)
    d = qb.dump()
    assert d["dimension"] == 3
    assert d["representatives"] == ["1", "alpha", "alpha*"]
    assert d["s"] == "1/2"
