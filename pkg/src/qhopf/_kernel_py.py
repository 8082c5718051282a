"""Sparse trivariate polynomial kernel, pure-Python reference implementation.

A polynomial over the parameters (p, q, s) is a dict mapping a packed exponent
key to a nonzero integer coefficient.  Exponents are packed 20 bits per
variable (p low, q middle, s high) so that monomial multiplication is a single
integer addition.  All functions return freshly built, zero-free dicts.

The compiled twin `_kernel_cy` must keep byte-identical semantics.
"""

from math import gcd

IMPL = "py"

FIELD_BITS = 20
FIELD_MASK = (1 << FIELD_BITS) - 1
Q_SHIFT = FIELD_BITS
S_SHIFT = 2 * FIELD_BITS


def pack(ep, eq, es):
    return ep | (eq << Q_SHIFT) | (es << S_SHIFT)


def unpack(key):
    return (key & FIELD_MASK, (key >> Q_SHIFT) & FIELD_MASK, key >> S_SHIFT)


def key_degree(key):
    return (key & FIELD_MASK) + ((key >> Q_SHIFT) & FIELD_MASK) + (key >> S_SHIFT)


def padd(a, b):
    """a + b."""
    out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = v
        else:
            w += v
            if w:
                out[k] = w
            else:
                del out[k]
    return out


def psub(a, b):
    """a - b."""
    out = dict(a)
    for k, v in b.items():
        w = out.get(k)
        if w is None:
            out[k] = -v
        else:
            w -= v
            if w:
                out[k] = w
            else:
                del out[k]
    return out


def pneg(a):
    return {k: -v for k, v in a.items()}


def pscale(a, c):
    """a * c for a nonzero integer c."""
    if c == 1:
        return dict(a)
    return {k: v * c for k, v in a.items()}


def pmul(a, b):
    """a * b."""
    if not a or not b:
        return {}
    if len(b) < len(a):
        a, b = b, a
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            w = out.get(k)
            if w is None:
                out[k] = va * vb
            else:
                w += va * vb
                if w:
                    out[k] = w
                else:
                    del out[k]
    return out


def paddmul(acc, a, b):
    """acc + a*b, in place on acc (returned for convenience)."""
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            w = acc.get(k)
            if w is None:
                acc[k] = va * vb
            else:
                w += va * vb
                if w:
                    acc[k] = w
                else:
                    del acc[k]
    return acc


def content(a, seed=0):
    """gcd of all coefficients of a and the nonnegative seed."""
    g = seed
    for v in a.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def pdiv_scalar(a, g):
    """a / g for an integer g dividing every coefficient."""
    if g == 1:
        return dict(a)
    return {k: v // g for k, v in a.items()}


def mono_min(a):
    """Packed componentwise minimum exponent over the keys of a (a nonempty)."""
    mp = mq = ms = FIELD_MASK
    for k in a:
        ep = k & FIELD_MASK
        eq = (k >> Q_SHIFT) & FIELD_MASK
        es = k >> S_SHIFT
        if ep < mp:
            mp = ep
        if eq < mq:
            mq = eq
        if es < ms:
            ms = es
        if not (mp or mq or ms):
            return 0
    return mp | (mq << Q_SHIFT) | (ms << S_SHIFT)


def mono_min2(m1, m2):
    """Packed componentwise minimum of two packed monomials."""
    return (
        min(m1 & FIELD_MASK, m2 & FIELD_MASK)
        | (min((m1 >> Q_SHIFT) & FIELD_MASK, (m2 >> Q_SHIFT) & FIELD_MASK) << Q_SHIFT)
        | (min(m1 >> S_SHIFT, m2 >> S_SHIFT) << S_SHIFT)
    )


def pshift_down(a, m):
    """Divide a by the monomial m (every exponent componentwise >= m)."""
    if m == 0:
        return dict(a)
    return {k - m: v for k, v in a.items()}


def lead_key(a):
    """Largest key in graded-lex order (degree first, then s over q over p)."""
    best = -1
    bestdeg = -1
    for k in a:
        d = (k & FIELD_MASK) + ((k >> Q_SHIFT) & FIELD_MASK) + (k >> S_SHIFT)
        if d > bestdeg or (d == bestdeg and k > best):
            best = k
            bestdeg = d
    return best
