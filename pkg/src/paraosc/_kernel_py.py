"""Pure-Python arithmetic kernel for cyclotomic coefficients and radical terms.

A cyclotomic element is a tuple ``(c_0, ..., c_{d-1}, den)`` of Python ints
meaning ``(sum c_k x^k) / den`` modulo the cyclotomic polynomial, with
``den > 0`` and ``gcd(c_0, ..., c_{d-1}, den) == 1``.  The zero element has
all numerators zero and ``den == 1``.

A scalar (the payload of :class:`paraosc.qscalar.QScalar`) is a dict mapping a
radical bitmask to a nonzero cyclotomic element.
"""

from math import gcd

IMPLEMENTATION = "python"


def normalize(nums, den):
    if den < 0:
        nums = [-c for c in nums]
        den = -den
    if den != 1:
        g = den
        for c in nums:
            if c:
                g = gcd(g, c)
                if g == 1:
                    break
        if g != 1:
            nums = [c // g for c in nums]
            den //= g
    nums.append(den)
    return tuple(nums)


def is_zero(a):
    for c in a[:-1]:
        if c:
            return False
    return True


def cyc_add(a, b):
    d = len(a) - 1
    da = a[d]
    db = b[d]
    if da == db:
        return normalize([a[k] + b[k] for k in range(d)], da)
    return normalize([a[k] * db + b[k] * da for k in range(d)], da * db)


def cyc_neg(a):
    return tuple(-c for c in a[:-1]) + (a[-1],)


def cyc_mul(a, b, red):
    d = len(a) - 1
    prod = [0] * (2 * d - 1)
    for i in range(d):
        ai = a[i]
        if ai:
            for j in range(d):
                bj = b[j]
                if bj:
                    prod[i + j] += ai * bj
    for k in range(d, 2 * d - 1):
        c = prod[k]
        if c:
            row = red[k - d]
            for j in range(d):
                if row[j]:
                    prod[j] += c * row[j]
    del prod[d:]
    return normalize(prod, a[d] * b[d])


def qs_add(a, b):
    out = dict(a)
    for mask, cb in b.items():
        ca = out.get(mask)
        if ca is None:
            out[mask] = cb
        else:
            s = cyc_add(ca, cb)
            if is_zero(s):
                del out[mask]
            else:
                out[mask] = s
    return out


def qs_mul(a, b, red, mask_factor):
    """Multiply two radical expansions; ``mask_factor[m]`` is the cyclotomic
    value of the product of the squared radicals in ``m``."""
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            c = cyc_mul(ca, cb, red)
            common = ma & mb
            if common:
                c = cyc_mul(c, mask_factor[common], red)
            m = ma ^ mb
            prev = out.get(m)
            if prev is not None:
                c = cyc_add(prev, c)
            out[m] = c
    return {m: c for m, c in out.items() if not is_zero(c)}
