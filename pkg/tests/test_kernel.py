"""The compiled kernel must agree with the pure-Python reference op by op."""

import random

import pytest

from qhopf import _kernel, _kernel_cy, _kernel_py


def rand_poly(rng, terms=25, max_exp=9):
    out = {}
    for _ in range(terms):
        k = _kernel_py.pack(rng.randrange(max_exp), rng.randrange(max_exp), rng.randrange(4))
        out[k] = rng.randint(-999, 999) or 7
    return out


@pytest.fixture(scope="module")
def polys():
    rng = random.Random(987654321)
    return [rand_poly(rng) for _ in range(12)] + [{}, {0: 4}, {_kernel_py.pack(3, 0, 1): -6}]


def test_impl_tags():
    assert _kernel_py.IMPL == "py"
    assert _kernel_cy.IMPL == "cy"
    assert _kernel.IMPL in ("py", "cy")


def test_pack_round_trip():
    rng = random.Random(5)
    for _ in range(200):
        e = (rng.randrange(1000), rng.randrange(1000), rng.randrange(1000))
        k_py, k_cy = _kernel_py.pack(*e), _kernel_cy.pack(*e)
        assert k_py == k_cy
        assert _kernel_py.unpack(k_py) == _kernel_cy.unpack(k_cy) == e
        assert _kernel_py.key_degree(k_py) == _kernel_cy.key_degree(k_cy) == sum(e)


def test_binary_ops_agree(polys):
    for a in polys:
        for b in polys:
            for name in ("padd", "psub", "pmul"):
                assert getattr(_kernel_py, name)(a, b) == getattr(_kernel_cy, name)(a, b), name


def test_paddmul_agrees_and_mutates(polys):
    for a in polys[:6]:
        for b in polys[:6]:
            acc_py, acc_cy = dict(polys[1]), dict(polys[1])
            out_py = _kernel_py.paddmul(acc_py, a, b)
            out_cy = _kernel_cy.paddmul(acc_cy, a, b)
            assert out_py == out_cy == acc_py == acc_cy
            assert out_py is acc_py


def test_unary_ops_agree(polys):
    for a in polys:
        assert _kernel_py.pneg(a) == _kernel_cy.pneg(a)
        for c in (-3, 1, 12):
            assert _kernel_py.pscale(a, c) == _kernel_cy.pscale(a, c)
        for seed in (0, 6):
            assert _kernel_py.content(a, seed) == _kernel_cy.content(a, seed)
        g = _kernel_py.content(a, 0)
        if g:
            assert _kernel_py.pdiv_scalar(a, g) == _kernel_cy.pdiv_scalar(a, g)
        if a:
            m_py, m_cy = _kernel_py.mono_min(a), _kernel_cy.mono_min(a)
            assert m_py == m_cy
            assert _kernel_py.pshift_down(a, m_py) == _kernel_cy.pshift_down(a, m_py)
            assert _kernel_py.lead_key(a) == _kernel_cy.lead_key(a)


def test_mono_min2_agrees():
    rng = random.Random(77)
    for _ in range(100):
        m1 = _kernel_py.pack(rng.randrange(30), rng.randrange(30), rng.randrange(30))
        m2 = _kernel_py.pack(rng.randrange(30), rng.randrange(30), rng.randrange(30))
        assert _kernel_py.mono_min2(m1, m2) == _kernel_cy.mono_min2(m1, m2)


def test_pmul_structure(polys):
    # sanity on the shared semantics, not just cross-agreement
    a = {_kernel_py.pack(1, 0, 0): 2}
    b = {_kernel_py.pack(0, 2, 1): 3, 0: -1}
    want = {_kernel_py.pack(1, 2, 1): 6, _kernel_py.pack(1, 0, 0): -2}
    assert _kernel_py.pmul(a, b) == want
    assert _kernel_cy.pmul(a, b) == want
