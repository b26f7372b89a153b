"""Para-Grassmann polynomials in canonical normal order.

Generators are ``theta_i`` and ``thetabar_i`` with ``g**(p+1) = 0``.  The
canonical order is ascending ``(index, barred)``; for generators
``early < late`` we use ``early * late = q^2 * late * early``.  For the pair
``theta, thetabar`` this is the defining relation, and at ``p = 1``
(``q^2 = -1``) it reduces to ordinary anticommutation.

All exchange phases are powers of ``q^2`` and are tracked as integers ``k``
meaning ``q^(2k)``.
"""

from __future__ import annotations

from typing import NamedTuple

__all__ = [
    "PGVar",
    "PGPoly",
    "theta",
    "thetabar",
    "mono_mul",
    "mono_charge",
    "pg_mul",
    "berezin",
    "move_through_level",
]


class PGVar(NamedTuple):
    index: int
    barred: bool = False

    @property
    def conj(self) -> "PGVar":
        return PGVar(self.index, not self.barred)

    def __str__(self):
        return f"{'thetabar' if self.barred else 'theta'}{self.index}"


def theta(i: int = 0) -> PGVar:
    return PGVar(i, False)


def thetabar(i: int = 0) -> PGVar:
    return PGVar(i, True)


def mono_mul(m1: tuple, m2: tuple, p: int):
    """Product of canonical monomials: ``(k, mono)`` meaning ``q^(2k) * mono``,
    or ``None`` when nilpotency kills it."""
    if not m1:
        return 0, m2
    if not m2:
        return 0, m1
    k = 0
    for g2, e2 in m2:
        for g1, e1 in m1:
            if g1 > g2:
                k -= e1 * e2
    merged = dict(m1)
    for g, e in m2:
        e_new = merged.get(g, 0) + e
        if e_new > p:
            return None
        merged[g] = e_new
    return k, tuple(sorted(merged.items()))


def mono_charge(mono: tuple) -> int:
    """Number of theta factors minus number of thetabar factors."""
    return sum(-e if g.barred else e for g, e in mono)


class PGPoly:
    """Para-Grassmann polynomial with coefficients from a ring.

    ``terms`` maps canonical monomials (sorted tuples of ``(PGVar, exp)``) to
    nonzero coefficients.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms: dict | None = None):
        self.ring = ring
        self.terms = {}
        if terms:
            p = ring.p
            for mono, c in terms.items():
                mono = tuple(sorted((g, e) for g, e in mono if e))
                if any(e > p for _, e in mono):
                    continue
                if not ring.is_zero(c):
                    self.terms[mono] = c

    @classmethod
    def const(cls, ring, c=1):
        return cls(ring, {(): ring.scalar(c)})

    @classmethod
    def var(cls, ring, v: PGVar, exp: int = 1, coeff=1):
        return cls(ring, {((v, exp),): ring.scalar(coeff)})

    @classmethod
    def monomial(cls, ring, factors, coeff=1):
        """Build ``coeff * g1^e1 * g2^e2 * ...`` in the given (any) order."""
        out = cls.const(ring, coeff)
        for g, e in factors:
            out = out * cls.var(ring, g, e)
        return out

    def _new(self, terms):
        out = PGPoly.__new__(PGPoly)
        out.ring = self.ring
        out.terms = terms
        return out

    def _lift(self, other):
        if isinstance(other, PGPoly):
            return other
        return PGPoly.const(self.ring, other)

    def __add__(self, other):
        other = self._lift(other)
        ring = self.ring
        terms = dict(self.terms)
        for m, c in other.terms.items():
            if m in terms:
                s = terms[m] + c
                if ring.is_zero(s):
                    del terms[m]
                else:
                    terms[m] = s
            else:
                terms[m] = c
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, PGPoly):
            c = self.ring.scalar(other)
            if self.ring.is_zero(c):
                return self._new({})
            return self._new({m: v * c for m, v in self.terms.items()})
        return pg_mul(self, other)

    def __rmul__(self, other):
        # scalars commute with every generator
        return self * other

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, PGPoly):
            other = PGPoly.const(self.ring, other)
        if self.ring.exact:
            return self.terms == other.terms
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coeff(self, mono=()):
        return self.terms.get(tuple(sorted(mono)), self.ring.zero())

    def variables(self) -> set:
        return {g for m in self.terms for g, _ in m}

    def max_abs_diff(self, other) -> float:
        d = self - other
        return max((abs(self.ring.to_complex(c)) for c in d.terms.values()), default=0.0)

    def pass_left(self, shift: int) -> "PGPoly":
        """Phase picked up when this polynomial moves left past an object of
        level charge ``shift`` (ket level ``n`` -> ``+n``, bra level ``n`` -> ``-n``)."""
        if not shift:
            return self
        ring = self.ring
        out = {}
        for m, c in self.terms.items():
            k = mono_charge(m) * shift
            out[m] = c * ring.q2pow(k) if k % (ring.p + 1) else c
        return self._new(out)

    def scale_var(self, v: PGVar, factor) -> "PGPoly":
        """Substitute ``v -> factor * v`` (``v^n`` picks up ``factor^n``)."""
        factor = self.ring.scalar(factor)
        out = {}
        for m, c in self.terms.items():
            e = dict(m).get(v, 0)
            out[m] = c * factor**e if e else c
        return PGPoly(self.ring, out)

    def integrate(self, v: PGVar) -> "PGPoly":
        return berezin(self, v)

    def to_complex_poly(self, float_ring) -> "PGPoly":
        return PGPoly(float_ring, {m: self.ring.to_complex(c) for m, c in self.terms.items()})

    def to_json(self) -> list:
        out = []
        for m in sorted(self.terms):
            c = self.terms[m]
            out.append(
                {
                    "exponents": [[g.index, g.barred, e] for g, e in m],
                    "coeff": c.to_json() if self.ring.exact else [c.real, c.imag],
                }
            )
        return out

    def __repr__(self):
        if not self.terms:
            return "PGPoly(0)"
        parts = []
        for m in sorted(self.terms):
            c = self.ring.to_complex(self.terms[m])
            mono = "*".join(f"{g}^{e}" if e > 1 else str(g) for g, e in m) or "1"
            parts.append(f"({c.real:.4g}{c.imag:+.4g}j)*{mono}")
        return "PGPoly(" + " + ".join(parts) + ")"


def pg_mul(a: PGPoly, b: PGPoly) -> PGPoly:
    if a.ring.p != b.ring.p or a.ring.exact != b.ring.exact:
        raise ValueError("mismatched parameter sets")
    ring = a.ring
    p = ring.p
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            r = mono_mul(m1, m2, p)
            if r is None:
                continue
            k, m = r
            c = c1 * c2
            if k % (p + 1):
                c = c * ring.q2pow(k)
            if m in out:
                out[m] = out[m] + c
            else:
                out[m] = c
    return PGPoly(ring, out)


def berezin(poly: PGPoly, v: PGVar) -> PGPoly:
    """``int d v`` applied from the left: ``int dv v^n = delta_{n,p} sqrt([p]!)``.

    The ``v`` block is first commuted to the front of each monomial.
    """
    ring = poly.ring
    p = ring.p
    weight = ring.sqrt_factorial(p)
    out = {}
    for m, c in poly.terms.items():
        e = dict(m).get(v, 0)
        if e != p:
            continue
        k = 0
        rest = []
        for g, eg in m:
            if g < v:
                k += e * eg
            if g != v:
                rest.append((g, eg))
        val = c * weight
        if k % (p + 1):
            val = val * ring.q2pow(k)
        out[tuple(rest)] = val
    return PGPoly(ring, out)


def move_through_level(mono: tuple, n: int, side: str, ring, basis: str = "psi"):
    """Phase from moving ``mono`` rightward past a level-``n`` ket or bra:
    ``mono |n> = phase * |n> mono``.  Both frame bases share the table."""
    if side not in ("ket", "bra"):
        raise ValueError("side must be 'ket' or 'bra'")
    if basis not in ("psi", "phi"):
        raise ValueError("basis must be 'psi' or 'phi'")
    c = mono_charge(tuple(mono))
    return ring.q2pow(-n * c if side == "ket" else n * c)
