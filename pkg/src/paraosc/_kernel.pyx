# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of :mod:`paraosc._kernel_py`.

Same data layout and the same functions; numerators stay Python ints so the
arithmetic remains exact, only loop control and indexing are compiled.
"""

from math import gcd

IMPLEMENTATION = "cython"


cpdef tuple normalize(list nums, object den):
    cdef Py_ssize_t k, n = len(nums)
    cdef object g
    if den < 0:
        for k in range(n):
            nums[k] = -nums[k]
        den = -den
    if den != 1:
        g = den
        for k in range(n):
            if nums[k]:
                g = gcd(g, nums[k])
                if g == 1:
                    break
        if g != 1:
            for k in range(n):
                nums[k] = nums[k] // g
            den = den // g
    nums.append(den)
    return tuple(nums)


cpdef bint is_zero(tuple a):
    cdef Py_ssize_t k, d = len(a) - 1
    for k in range(d):
        if a[k]:
            return False
    return True


cpdef tuple cyc_add(tuple a, tuple b):
    cdef Py_ssize_t k, d = len(a) - 1
    cdef object da = a[d], db = b[d]
    cdef list out = [0] * d
    if da == db:
        for k in range(d):
            out[k] = a[k] + b[k]
        return normalize(out, da)
    for k in range(d):
        out[k] = a[k] * db + b[k] * da
    return normalize(out, da * db)


cpdef tuple cyc_neg(tuple a):
    cdef Py_ssize_t k, d = len(a) - 1
    cdef list out = [0] * (d + 1)
    for k in range(d):
        out[k] = -a[k]
    out[d] = a[d]
    return tuple(out)


cpdef tuple cyc_mul(tuple a, tuple b, tuple red):
    cdef Py_ssize_t i, j, k, d = len(a) - 1
    cdef list prod = [0] * (2 * d - 1)
    cdef object ai, bj, c
    cdef tuple row
    for i in range(d):
        ai = a[i]
        if ai:
            for j in range(d):
                bj = b[j]
                if bj:
                    prod[i + j] = prod[i + j] + ai * bj
    for k in range(d, 2 * d - 1):
        c = prod[k]
        if c:
            row = red[k - d]
            for j in range(d):
                if row[j]:
                    prod[j] = prod[j] + c * row[j]
    del prod[d:]
    return normalize(prod, a[d] * b[d])


cpdef dict qs_add(dict a, dict b):
    cdef dict out = dict(a)
    cdef object mask, ca, cb
    cdef tuple s
    for mask, cb in b.items():
        ca = out.get(mask)
        if ca is None:
            out[mask] = cb
        else:
            s = cyc_add(<tuple>ca, <tuple>cb)
            if is_zero(s):
                del out[mask]
            else:
                out[mask] = s
    return out


cpdef dict qs_mul(dict a, dict b, tuple red, dict mask_factor):
    cdef dict out = {}
    cdef long ma, mb, common, m
    cdef tuple ca, cb, c
    cdef object prev
    for ma, ca in a.items():
        for mb, cb in b.items():
            c = cyc_mul(ca, cb, red)
            common = ma & mb
            if common:
                c = cyc_mul(c, <tuple>mask_factor[common], red)
            m = ma ^ mb
            prev = out.get(m)
            if prev is not None:
                c = cyc_add(<tuple>prev, c)
            out[m] = c
    return {m: c for m, c in out.items() if not is_zero(c)}
