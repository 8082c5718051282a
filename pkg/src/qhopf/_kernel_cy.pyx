# cython: language_level=3, boundscheck=False, wraparound=False
"""Sparse trivariate polynomial kernel, compiled twin of `_kernel_py`.

Same data model: dict from packed exponent key (20 bits per variable) to a
nonzero integer coefficient.  Coefficients stay arbitrary-precision Python
ints; the win over the reference implementation is typed key arithmetic and
tighter dict loops.
"""

from math import gcd

IMPL = "cy"

DEF FIELD_BITS = 20

cdef long long _FIELD_MASK = (1 << FIELD_BITS) - 1
cdef int _Q_SHIFT = FIELD_BITS
cdef int _S_SHIFT = 2 * FIELD_BITS

FIELD_MASK = _FIELD_MASK
Q_SHIFT = _Q_SHIFT
S_SHIFT = _S_SHIFT


def pack(ep, eq, es):
    return ep | (eq << _Q_SHIFT) | (es << _S_SHIFT)


def unpack(key):
    cdef long long k = key
    return (k & _FIELD_MASK, (k >> _Q_SHIFT) & _FIELD_MASK, k >> _S_SHIFT)


def key_degree(key):
    cdef long long k = key
    return (k & _FIELD_MASK) + ((k >> _Q_SHIFT) & _FIELD_MASK) + (k >> _S_SHIFT)


def padd(dict a, dict b):
    cdef dict out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = v
        else:
            w = w + v
            if w:
                out[k] = w
            else:
                del out[k]
    return out


def psub(dict a, dict b):
    cdef dict out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = -v
        else:
            w = w - v
            if w:
                out[k] = w
            else:
                del out[k]
    return out


def pneg(dict a):
    cdef dict out = {}
    for k, v in a.items():
        out[k] = -v
    return out


def pscale(dict a, c):
    if c == 1:
        return dict(a)
    cdef dict out = {}
    for k, v in a.items():
        out[k] = v * c
    return out


def pmul(dict a, dict b):
    if not a or not b:
        return {}
    if len(b) < len(a):
        a, b = b, a
    cdef dict out = {}
    cdef long long ka, kb, k
    for ka_o, va in a.items():
        ka = ka_o
        for kb_o, vb in b.items():
            kb = kb_o
            k = ka + kb
            w = out.get(k)
            if w is None:
                out[k] = va * vb
            else:
                w = w + va * vb
                if w:
                    out[k] = w
                else:
                    del out[k]
    return out


def paddmul(dict acc, dict a, dict b):
    cdef long long ka, kb, k
    for ka_o, va in a.items():
        ka = ka_o
        for kb_o, vb in b.items():
            kb = kb_o
            k = ka + kb
            w = acc.get(k)
            if w is None:
                acc[k] = va * vb
            else:
                w = w + va * vb
                if w:
                    acc[k] = w
                else:
                    del acc[k]
    return acc


def content(dict a, seed=0):
    g = seed
    for v in a.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def pdiv_scalar(dict a, g):
    if g == 1:
        return dict(a)
    cdef dict out = {}
    for k, v in a.items():
        out[k] = v // g
    return out


def mono_min(dict a):
    cdef long long mp = _FIELD_MASK, mq = _FIELD_MASK, ms = _FIELD_MASK
    cdef long long k, ep, eq, es
    for k_o in a:
        k = k_o
        ep = k & _FIELD_MASK
        eq = (k >> _Q_SHIFT) & _FIELD_MASK
        es = k >> _S_SHIFT
        if ep < mp:
            mp = ep
        if eq < mq:
            mq = eq
        if es < ms:
            ms = es
        if not (mp or mq or ms):
            return 0
    return mp | (mq << _Q_SHIFT) | (ms << _S_SHIFT)


def mono_min2(m1, m2):
    cdef long long a = m1, b = m2
    cdef long long rp = min(a & _FIELD_MASK, b & _FIELD_MASK)
    cdef long long rq = min((a >> _Q_SHIFT) & _FIELD_MASK, (b >> _Q_SHIFT) & _FIELD_MASK)
    cdef long long rs = min(a >> _S_SHIFT, b >> _S_SHIFT)
    return rp | (rq << _Q_SHIFT) | (rs << _S_SHIFT)


def pshift_down(dict a, m):
    if m == 0:
        return dict(a)
    cdef long long mm = m
    cdef dict out = {}
    cdef long long k
    for k_o, v in a.items():
        k = k_o
        out[k - mm] = v
    return out


def lead_key(dict a):
    cdef long long best = -1, bestdeg = -1, k, d
    for k_o in a:
        k = k_o
        d = (k & _FIELD_MASK) + ((k >> _Q_SHIFT) & _FIELD_MASK) + (k >> _S_SHIFT)
        if d > bestdeg or (d == bestdeg and k > best):
            best = k
            bestdeg = d
    return best
