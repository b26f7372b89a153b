"""Deformed su(2) / su(1,1) structures built from ``b`` and ``bbar``.

``b_z`` is the r-commutator ``[b, bbar]_r`` (variant 1) or ``[bbar, b]_r``
(variant 2).  The structure parameter ``r`` is found by requiring
``[b_z, b]_r`` to be proportional to ``b``.  The residual after projecting
out ``b`` is a matrix polynomial of degree two in ``r``; its entries share
the admissible roots.

For ``p = 1`` the residual is identically zero because ``bbar b^2 = 0`` on
two levels, so the matrix test admits every ``r``.  In that case (and as a
cross-check for every ``p``) the same computation is done in the abstract
q-oscillator algebra with basis ``bbar^i b^j`` and ``b bbar = 1 + q^2 bbar b``.
"""

from __future__ import annotations

import sympy

from paraosc import linalg
from paraosc.frame import OperatorSet
from paraosc.report import Check, Report, check_zero

__all__ = [
    "VARIANTS",
    "bz",
    "r_commutator",
    "solve_structure_parameter",
    "abstract_residual_poly",
    "verify_deformed_algebra",
    "deformed_report",
]

VARIANTS = ("bz_from_b_bbar", "bz_from_bbar_b")


def _variant(v) -> int:
    if v in (1, VARIANTS[0]):
        return 1
    if v in (2, VARIANTS[1]):
        return 2
    raise ValueError(f"unknown variant {v!r}")


def r_commutator(a, b, r):
    return a @ b - r * (b @ a)


def bz(variant, r, ops: OperatorSet):
    b, bb = ops.b, ops.b_bar
    if _variant(variant) == 1:
        return r_commutator(b, bb, r)
    return r_commutator(bb, b, r)


# -- polynomials in r with ring coefficients ----------------------------------


def _padd(a, b, ring):
    n = max(len(a), len(b))
    out = [ring.zero()] * n
    for i, c in enumerate(a):
        out[i] = out[i] + c
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _ptrim(out, ring)


def _pscale(a, c, ring):
    return _ptrim([x * c for x in a], ring)


def _pmul(a, b, ring):
    if not a or not b:
        return []
    out = [ring.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _ptrim(out, ring)


def _ptrim(a, ring):
    a = list(a)
    while a and ring.is_zero(a[-1]):
        a.pop()
    return a


def _peval(a, x, ring):
    acc = ring.zero()
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _pmonic(a, ring):
    return _pscale(a, ring.inv(a[-1]), ring)


def _pmod(a, b, ring):
    a = list(a)
    inv_lead = ring.inv(b[-1])
    while len(a) >= len(b):
        f = a[-1] * inv_lead
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - f * c
        a = _ptrim(a[:-1], ring)
    return a


def _pgcd(a, b, ring):
    a, b = _ptrim(a, ring), _ptrim(b, ring)
    while b:
        a, b = b, _pmod(a, b, ring)
    return _pmonic(a, ring) if a else a


def _roots(poly, ring) -> list:
    """Roots of a monic polynomial of degree <= 2 with multiplicity."""
    if len(poly) <= 1:
        return []
    if len(poly) == 2:
        return [-poly[0]]
    c0, c1 = poly[0], poly[1]
    disc = c1 * c1 - c0 * ring.scalar(4)
    if ring.is_zero(disc):
        r = -c1 * ring.inv(ring.scalar(2))
        return [r, r]
    found = []
    for k in range(ring.params.order):
        z = ring.root(k)
        if ring.is_zero(_peval(poly, z, ring)):
            found.append(z)
    if len(found) == 2:
        return found
    return _roots_outside_field(poly)


def _roots_outside_field(poly) -> list:
    x = sympy.Symbol("x")
    expr = sum(c.to_sympy() * x**i for i, c in enumerate(poly))
    sols = sympy.solve(sympy.expand(expr), x)
    raise ArithmeticError(f"structure-parameter roots {sols} leave the exact field")


# -- matrix route -------------------------------------------------------------


def _residual_poly_entries(variant, ops: OperatorSet) -> list:
    """Entry polynomials of ``[b_z, b]_r`` with the ``b`` component removed."""
    ring = ops.ring
    b, bb = ops.b, ops.b_bar
    X, Y = (b @ bb, bb @ b) if _variant(variant) == 1 else (bb @ b, b @ bb)
    # [X - rY, b]_r = Xb - r(Yb + bX) + r^2 bY
    coeffs = [X @ b, -(Y @ b + b @ X), b @ Y]
    flat_b = list(b.flat)
    j = next(i for i, v in enumerate(flat_b) if not ring.is_zero(v))
    inv_bj = ring.inv(flat_b[j])
    resid = []
    for C in coeffs:
        cf = list(C.flat)
        lam = cf[j] * inv_bj
        resid.append([c - lam * bv for c, bv in zip(cf, flat_b)])
    out = []
    for idx in range(len(flat_b)):
        poly = _ptrim([resid[k][idx] for k in range(3)], ring)
        if poly:
            out.append(poly)
    return out


# -- abstract q-oscillator route -----------------------------------------------


class _QOsc:
    """Elements ``sum c_ij(r) bbar^i b^j`` with ``b bbar = 1 + q^2 bbar b``."""

    def __init__(self, ring, terms=None):
        self.ring = ring
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def gen(cls, ring, i, j, poly=None):
        return cls(ring, {(i, j): poly or [ring.one()]})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = _padd(out.get(k, []), v, self.ring)
        return _QOsc(self.ring, out)

    def scale(self, poly):
        return _QOsc(self.ring, {k: _pmul(v, poly, self.ring) for k, v in self.terms.items()})

    def __neg__(self):
        return self.scale([-self.ring.one()])

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        out = _QOsc(self.ring)
        for (i, j), c1 in self.terms.items():
            for (k, l), c2 in other.terms.items():
                for (a, b_), c in _order(self.ring, j, k).items():
                    term = _QOsc(self.ring, {(i + a, b_ + l): _pmul(_pmul(c1, c2, self.ring), [c], self.ring)})
                    out = out + term
        return out


_ORDER_CACHE: dict = {}


def _order(ring, j, k):
    """``b^j bbar^k`` as ``{(a, b): coeff}`` in ``bbar^a b^b`` order."""
    key = (ring.p, ring.exact, j, k)
    if key in _ORDER_CACHE:
        return _ORDER_CACHE[key]
    if j == 0 or k == 0:
        res = {(k, j): ring.one()}
    else:
        # b bbar^k = q^(2k) bbar^k b + [k] bbar^(k-1)
        res = {}
        for (a, b_), c in _order(ring, j - 1, k).items():
            # b^(j-1) bbar^k = sum c bbar^a b^b_, then left-multiply by b
            for (a2, b2), c2 in _b_times(ring, a).items():
                kk = (a2, b2 + b_)
                res[kk] = res.get(kk, ring.zero()) + c * c2
        res = {kk: v for kk, v in res.items() if not ring.is_zero(v)}
    _ORDER_CACHE[key] = res
    return res


def _b_times(ring, k):
    """``b bbar^k = q^(2k) bbar^k b + [k] bbar^(k-1)``."""
    if k == 0:
        return {(0, 1): ring.one()}
    return {(k, 1): ring.q2pow(k), (k - 1, 0): ring.bracket(k)}


def abstract_residual_poly(variant, ring) -> list:
    """Coefficient of ``bbar b^2`` in ``[b_z, b]_r`` as a polynomial in ``r``.

    Every other monomial of the residual is a multiple of ``b``.
    """
    r = [ring.zero(), ring.one()]
    b = _QOsc.gen(ring, 0, 1)
    bb = _QOsc.gen(ring, 1, 0)
    if _variant(variant) == 1:
        bz_ = (b @ bb) - (bb @ b).scale(r)
    else:
        bz_ = (bb @ b) - (b @ bb).scale(r)
    res = (bz_ @ b) - (b @ bz_).scale(r)
    extra = [k for k in res.terms if k not in ((0, 1), (1, 2))]
    if extra:
        raise AssertionError(f"unexpected monomials {extra}")
    return res.terms.get((1, 2), [])


def solve_structure_parameter(variant, ops: OperatorSet) -> dict:
    """Admissible ``r`` values.

    Returns ``{"roots": [...], "source": "matrix" | "abstract", ...}``;
    roots are listed with multiplicity.
    """
    ring = ops.ring
    abstract = _pmonic(abstract_residual_poly(variant, ring), ring)
    entries = _residual_poly_entries(variant, ops)
    if entries:
        g = entries[0]
        for e in entries[1:]:
            g = _pgcd(g, e, ring)
        g = _pmonic(g, ring)
        source = "matrix"
    else:
        g = abstract
        source = "abstract"
    roots = _roots(g, ring)
    agree = len(g) == len(abstract) and all(
        ring.is_zero(x - y) if ring.exact else abs(x - y) < 1e-9 for x, y in zip(g, abstract)
    )
    return {"roots": roots, "source": source, "degenerate_matrix_test": not entries, "abstract_agrees": agree}


def _distinct(roots, ring):
    out = []
    for r in roots:
        if not any(ring.is_zero(r - s) for s in out):
            out.append(r)
    return out


def verify_deformed_algebra(variant, r, coeff, ops: OperatorSet, label: str = "", tol: float = 1e-10) -> Report:
    """``[b_z, b]_r = coeff b`` and ``[bbar, b_z]_r = coeff bbar`` with the chosen ``b_z``."""
    ring = ops.ring
    b, bb = ops.b, ops.b_bar
    Z = bz(variant, r, ops)
    tag = label or f"variant {_variant(variant)}"
    rep = Report("deformed")
    defn = r_commutator(b, bb, r) if _variant(variant) == 1 else r_commutator(bb, b, r)
    rep.add(check_zero(ring, f"{tag}: b_z definition", defn - Z, tol))
    rep.add(check_zero(ring, f"{tag}: [b_z, b]_r = k b", r_commutator(Z, b, r) - coeff * b, tol))
    rep.add(check_zero(ring, f"{tag}: [bbar, b_z]_r = k bbar", r_commutator(bb, Z, r) - coeff * bb, tol))
    return rep


def _proportional_to_b(ops: OperatorSet, M) -> bool:
    ring = ops.ring
    flat_b = list(ops.b.flat)
    j = next(i for i, v in enumerate(flat_b) if not ring.is_zero(v))
    lam = list(M.flat)[j] * ring.inv(flat_b[j])
    return linalg.is_zero_matrix(ring, M - lam * ops.b)


def deformed_report(ops: OperatorSet) -> Report:
    """Root sets, every relation triple, and the ``r = 1`` negative control."""
    ring = ops.ring
    p = ring.p
    q2, q2b = ring.q2pow(1), ring.q2pow(-1)
    rep = Report("deformed")

    def same_set(found, expect):
        if len(found) != len(expect):
            return False
        rest = list(found)
        for e in expect:
            hit = next((i for i, f in enumerate(rest) if ring.is_zero(f - e) or (not ring.exact and abs(f - e) < 1e-9)), None)
            if hit is None:
                return False
            rest.pop(hit)
        return True

    v1 = solve_structure_parameter(1, ops)
    v2 = solve_structure_parameter(2, ops)
    ok1 = same_set(v1["roots"], [q2, q2b]) and v1["abstract_agrees"]
    ok2 = same_set(v2["roots"], [q2b, q2b]) and v2["abstract_agrees"]
    rep.add(Check("variant 1 roots = {q^2, qbar^2}", "pass" if ok1 else "fail", 0.0, v1["source"]))
    rep.add(Check("variant 2 roots = {qbar^2} (double)", "pass" if ok2 else "fail", 0.0, v2["source"]))
    rep.extend(verify_deformed_algebra(1, q2, 1 - q2, ops, "su_q2(2)"))
    rep.extend(verify_deformed_algebra(1, q2b, q2b * q2b - q2b, ops, "su_qbar2(2)"))
    k = p  # q^(2(k+1)) = 1
    rep.extend(verify_deformed_algebra(1, ring.q2pow(k), ring.q2pow(k - 1) - ring.q2pow(k), ops, "su_q2k(2)"))
    rep.extend(verify_deformed_algebra(2, ring.q2pow(k), ring.q2pow(k - 1) - ring.q2pow(k), ops, "su(1,1)_q2k"))
    if p >= 2:
        for variant in (1, 2):
            Z = bz(variant, ring.one(), ops)
            prop = _proportional_to_b(ops, r_commutator(Z, ops.b, ring.one()))
            rep.add(
                Check(
                    f"variant {variant}: r = 1 rejected",
                    "pass" if not prop else "fail",
                    0.0,
                )
            )
    return rep
