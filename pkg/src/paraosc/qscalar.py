"""Exact scalars over Q(zeta_M), M = 4(p+1), with formal q-bracket radicals.

The deformation parameter is ``q = exp(i*pi/(p+1)) = zeta_M**2``.  The field
also contains ``q**(1/2) = zeta_M`` (needed for the symmetric-bracket roots
``sqrt([[n]]) = q**(-(n-1)/2) * sqrt([n])``) and ``i = zeta_M**(p+1)`` (needed
for Gaussian-rational frames).

A :class:`QScalar` is a finite sum ``sum_S c_S * prod_{n in S} sqrt([n])`` where
``S`` ranges over subsets of ``{2, ..., p}`` and every ``c_S`` lies in the
cyclotomic field.  ``sqrt([1])`` is identified with 1.  Products are rewritten
with ``sqrt([n])**2 = [n]`` so each radical appears at most once; this
canonical form is what equality compares.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from paraosc import kernel

__all__ = [
    "DeformParams",
    "QScalar",
    "ExactRing",
    "FloatRing",
    "cyclotomic_poly",
    "q_bracket",
    "qq_bracket",
    "radical_reduce",
    "eval_complex",
]


def _poly_exact_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        c //= lead
        out[k] = c
        for j, y in enumerate(den):
            num[k + j] -= c * y
    if any(num[: len(den) - 1]):
        raise ArithmeticError("nonzero remainder")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Integer coefficients of Phi_m, lowest degree first."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _frac_vector(values):
    """Pack a list of rationals into the kernel's (nums..., den) layout."""
    den = 1
    for v in values:
        den = den * Fraction(v).denominator // math.gcd(den, Fraction(v).denominator)
    nums = [int(Fraction(v) * den) for v in values]
    return kernel.normalize(nums, den)


class DeformParams:
    """Nilpotency index ``p`` with all precomputed field tables.

    Use :meth:`of` to get the shared instance for a given ``p``.
    """

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 1:
            raise ValueError(f"p must be a positive integer, got {p!r}")
        self.p = p
        self.order = 4 * (p + 1)
        phi = cyclotomic_poly(self.order)
        self.degree = d = len(phi) - 1
        self.modulus = phi

        # x^k mod Phi for k = 0 .. M-1 as integer vectors
        roots = []
        vec = [1] + [0] * (d - 1)
        for _ in range(self.order):
            roots.append(tuple(vec) + (1,))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for j in range(d):
                    vec[j] -= top * phi[j]
        self._roots = roots
        self._red = tuple(tuple(roots[k][:d]) for k in range(d, 2 * d - 1))
        self._zero_cyc = (0,) * d + (1,)
        self._one_cyc = roots[0]

        omega = cmath.exp(2j * math.pi / self.order)
        self._omega_pows = [omega**k for k in range(self.order)]
        self.radicals = tuple(range(2, p + 1))

        # cyclotomic value of [n] for n = 0 .. p+1
        self._bracket_cyc = []
        for n in range(p + 2):
            acc = self._zero_cyc
            for j in range(n):
                acc = kernel.cyc_add(acc, roots[(4 * j) % self.order])
            self._bracket_cyc.append(acc)
        if not kernel.is_zero(self._bracket_cyc[p + 1]):
            raise ArithmeticError("[p+1] did not vanish")

        self._mask_factor = {}
        for mask in range(1, 1 << max(0, p - 1)):
            acc = self._one_cyc
            for n in self.radicals:
                if mask & self.bit(n):
                    acc = kernel.cyc_mul(acc, self._bracket_cyc[n], self._red)
            self._mask_factor[mask] = acc

        self._radical_values = {
            n: cmath.sqrt(self.cyc_value(self._bracket_cyc[n])) for n in self.radicals
        }
        # conj(sqrt[n]) = zeta^(-2(n-1)) sqrt[n] under the principal branch
        for n in self.radicals:
            lhs = self._radical_values[n].conjugate()
            rhs = self._omega_pows[(-2 * (n - 1)) % self.order] * self._radical_values[n]
            if abs(lhs - rhs) > 1e-9:
                raise ArithmeticError(f"unexpected branch for sqrt([{n}])")

    @staticmethod
    @lru_cache(maxsize=None)
    def of(p: int) -> "DeformParams":
        return DeformParams(p)

    def __repr__(self):
        return f"DeformParams(p={self.p})"

    def __eq__(self, other):
        return isinstance(other, DeformParams) and other.p == self.p

    def __hash__(self):
        return hash(("DeformParams", self.p))

    def __reduce__(self):
        return (DeformParams.of, (self.p,))

    @property
    def q(self) -> complex:
        return cmath.exp(1j * math.pi / (self.p + 1))

    def bit(self, n: int) -> int:
        return 1 << (n - 2)

    def root_cyc(self, k: int) -> tuple:
        return self._roots[k % self.order]

    def cyc_value(self, c: tuple) -> complex:
        d = self.degree
        acc = 0j
        for k in range(d):
            if c[k]:
                acc += c[k] * self._omega_pows[k]
        return acc / c[d]

    def cyc_conj(self, c: tuple) -> tuple:
        d = self.degree
        acc = self._zero_cyc
        for k in range(d):
            if c[k]:
                r = self._roots[(-k) % self.order]
                acc = kernel.cyc_add(acc, tuple(c[k] * x for x in r[:d]) + (1,))
        return kernel.normalize(list(acc[:d]), acc[d] * c[d])

    def cyc_inverse(self, c: tuple) -> tuple:
        """Inverse in Q(zeta_M) by solving (multiplication by c) x = 1."""
        d = self.degree
        if kernel.is_zero(c):
            raise ZeroDivisionError("inverse of zero")
        # column j of the multiplication matrix is c * x^j
        cols = []
        for j in range(d):
            prod = kernel.cyc_mul(c, self._roots[j], self._red)
            cols.append([Fraction(prod[k], prod[d]) for k in range(d)])
        aug = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        for col in range(d):
            piv = next(r for r in range(col, d) if aug[r][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            pv = aug[col][col]
            aug[col] = [v / pv for v in aug[col]]
            for r in range(d):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return _frac_vector([aug[i][d] for i in range(d)])


class QScalar:
    """Immutable exact scalar; see the module docstring for the representation."""

    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params: DeformParams, terms: dict):
        self.params = params
        self.terms = terms
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, params):
        return cls(params, {})

    @classmethod
    def from_rational(cls, params, value):
        value = Fraction(value)
        if value == 0:
            return cls(params, {})
        d = params.degree
        return cls(params, {0: (value.numerator,) + (0,) * (d - 1) + (value.denominator,)})

    @classmethod
    def root(cls, params, k: int):
        """zeta_M**k; ``q = root(2)``, ``q**2 = root(4)``."""
        return cls(params, {0: params.root_cyc(k)})

    @classmethod
    def radical(cls, params, n: int):
        """The formal square root of [n]."""
        if n == 0 or n == params.p + 1:
            return cls(params, {})
        if n == 1:
            return cls.from_rational(params, 1)
        if not 2 <= n <= params.p:
            raise ValueError(f"radical sqrt([{n}]) outside 0..p+1")
        return cls(params, {params.bit(n): params._one_cyc})

    # -- coercion -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QScalar):
            if other.params.p != self.params.p:
                raise ValueError("mismatched deformation parameters")
            return other
        if isinstance(other, (int, Rational)):
            return QScalar.from_rational(self.params, other)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        return QScalar(self.params, kernel.qs_add(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return QScalar(self.params, {m: kernel.cyc_neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return QScalar(self.params, {})
        pr = self.params
        return QScalar(pr, kernel.qs_mul(self.terms, other.terms, pr._red, pr._mask_factor))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QScalar.from_rational(self.params, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "QScalar":
        if not self.terms:
            raise ZeroDivisionError("QScalar division by zero")
        pr = self.params
        present = 0
        for m in self.terms:
            present |= m
        if not present:
            return QScalar(pr, {0: pr.cyc_inverse(self.terms[0])})
        # peel off the highest radical: x = a + b*r  ->  (a - b*r) / (a^2 - b^2 [n])
        bit = 1 << (present.bit_length() - 1)
        n = bit.bit_length() + 1
        a = QScalar(pr, {m: c for m, c in self.terms.items() if not m & bit})
        b = QScalar(pr, {m ^ bit: c for m, c in self.terms.items() if m & bit})
        r = QScalar.radical(pr, n)
        norm = a * a - b * b * QScalar(pr, {0: pr._bracket_cyc[n]})
        if norm.is_zero():
            raise ZeroDivisionError("QScalar is a zero divisor in the radical extension")
        return (a - b * r) * norm.inverse()

    def conj(self) -> "QScalar":
        """Complex conjugation, consistent with :meth:`to_complex`."""
        pr = self.params
        out = QScalar(pr, {})
        for m, c in self.terms.items():
            cc = pr.cyc_conj(c)
            shift = 0
            for n in pr.radicals:
                if m & pr.bit(n):
                    shift -= 2 * (n - 1)
            if shift:
                cc = kernel.cyc_mul(cc, pr.root_cyc(shift), pr._red)
            out = out + QScalar(pr, {m: cc})
        return out

    # -- predicates & comparison ---------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, QScalar) and other.params.p != self.params.p:
            return False
        try:
            other = self._coerce(other)
        except ValueError:
            return False
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.params.p, frozenset(self.terms.items())))
        return self._hash

    # -- output ---------------------------------------------------------
    def to_complex(self) -> complex:
        pr = self.params
        acc = 0j
        for m, c in self.terms.items():
            v = pr.cyc_value(c)
            for n in pr.radicals:
                if m & pr.bit(n):
                    v *= pr._radical_values[n]
            acc += v
        return acc

    __complex__ = to_complex

    def radical_set(self, mask: int) -> list:
        return [n for n in self.params.radicals if mask & self.params.bit(n)]

    def to_json(self) -> dict:
        d = self.params.degree
        terms = []
        for m in sorted(self.terms):
            c = self.terms[m]
            terms.append(
                {
                    "radicals": self.radical_set(m),
                    "zeta_coeffs": [str(Fraction(c[k], c[d])) for k in range(d)],
                }
            )
        v = self.to_complex()
        return {"order": self.params.order, "terms": terms, "approx": [v.real, v.imag]}

    @classmethod
    def from_json(cls, params, data):
        out = cls.zero(params)
        for t in data["terms"]:
            c = _frac_vector([Fraction(s) for s in t["zeta_coeffs"]])
            term = cls(params, {0: c})
            for n in t["radicals"]:
                term = term * cls.radical(params, n)
            out = out + term
        return out

    def to_sympy(self):
        import sympy

        pr = self.params
        z = sympy.exp(2 * sympy.pi * sympy.I / pr.order)
        acc = sympy.Integer(0)
        d = pr.degree
        for m, c in self.terms.items():
            v = sum(sympy.Rational(c[k], c[d]) * z**k for k in range(d) if c[k])
            for n in self.radical_set(m):
                v *= sympy.sqrt(sum(z ** (4 * j) for j in range(n)))
            acc += v
        return acc

    def __repr__(self):
        v = self.to_complex()
        return f"QScalar(p={self.params.p}, ~{v.real:.6g}{v.imag:+.6g}j, terms={len(self.terms)})"


def q_bracket(n: int, params: DeformParams) -> QScalar:
    """[n] = sum_{j<n} q^(2j)."""
    if n <= params.p + 1:
        c = params._bracket_cyc[n]
        return QScalar(params, {} if kernel.is_zero(c) else {0: c})
    return _geometric(params, n, 4, 0)


def _geometric(params, n, step, offset):
    acc = QScalar.zero(params)
    for j in range(n):
        acc = acc + QScalar.root(params, offset + step * j)
    return acc


def qq_bracket(n: int, params: DeformParams) -> QScalar:
    """[[n]] = sum_{j<n} q^(n-1-2j)."""
    acc = QScalar.zero(params)
    for j in range(n):
        acc = acc + QScalar.root(params, 2 * (n - 1 - 2 * j))
    return acc


def radical_reduce(raw: dict, params: DeformParams) -> QScalar:
    """Canonicalize ``{tuple of radical indices (repeats allowed): coefficient}``.

    Each key lists the bracket radicals multiplied together, e.g. ``(2, 2, 2)``
    for ``sqrt([2])**3``; the value is a rational or a radical-free QScalar.
    """
    out = QScalar.zero(params)
    for rads, coeff in raw.items():
        term = coeff if isinstance(coeff, QScalar) else QScalar.from_rational(params, coeff)
        for n in rads:
            term = term * QScalar.radical(params, n)
        out = out + term
    return out


def eval_complex(s: QScalar, params: DeformParams | None = None) -> complex:
    return s.to_complex()


class ExactRing:
    """Coefficient ring for the exact backend."""

    exact = True
    tol = 0.0

    def __init__(self, p: int):
        self.params = DeformParams.of(p)
        self.p = p
        self._cache = {}

    def __repr__(self):
        return f"ExactRing(p={self.p})"

    def _cached(self, key, fn):
        v = self._cache.get(key)
        if v is None:
            v = self._cache[key] = fn()
        return v

    def zero(self):
        return QScalar.zero(self.params)

    def one(self):
        return QScalar.from_rational(self.params, 1)

    def scalar(self, value):
        """Lift an int, Fraction or Gaussian ``complex`` with rational parts."""
        if isinstance(value, QScalar):
            return value
        if isinstance(value, complex):
            return self.gaussian(Fraction(repr(value.real)), Fraction(repr(value.imag)))
        if isinstance(value, float):
            return QScalar.from_rational(self.params, Fraction(repr(value)))
        return QScalar.from_rational(self.params, value)

    def gaussian(self, re, im):
        out = QScalar.from_rational(self.params, re)
        if im:
            out = out + QScalar.from_rational(self.params, im) * self.imag_unit()
        return out

    def imag_unit(self):
        return QScalar.root(self.params, self.p + 1)

    def root(self, k: int):
        k %= self.params.order
        return self._cached(("root", k), lambda: QScalar.root(self.params, k))

    def qpow(self, k: int):
        return self.root(2 * k)

    def q2pow(self, k: int):
        return self.root(4 * k)

    def bracket(self, n: int):
        return self._cached(("br", n), lambda: q_bracket(n, self.params))

    def qq_bracket(self, n: int):
        return self._cached(("qq", n), lambda: qq_bracket(n, self.params))

    def sqrt_bracket(self, n: int):
        return self._cached(("sb", n), lambda: QScalar.radical(self.params, n))

    def sqrt_qq_bracket(self, n: int):
        # sqrt([[n]]) = q^{-(n-1)/2} sqrt([n]) = zeta^{-(n-1)} sqrt([n])
        return self._cached(("sqq", n), lambda: self.root(-(n - 1)) * self.sqrt_bracket(n))

    def factorial(self, n: int):
        def build():
            acc = self.one()
            for k in range(1, n + 1):
                acc = acc * self.bracket(k)
            return acc

        return self._cached(("fact", n), build)

    def sqrt_factorial(self, n: int):
        def build():
            acc = self.one()
            for k in range(1, n + 1):
                acc = acc * self.sqrt_bracket(k)
            return acc

        return self._cached(("sfact", n), build)

    def conj(self, x):
        return x.conj()

    def inv(self, x):
        return x.inverse()

    def is_zero(self, x) -> bool:
        return x.is_zero() if isinstance(x, QScalar) else x == 0

    def to_complex(self, x) -> complex:
        return x.to_complex() if isinstance(x, QScalar) else complex(x)


class FloatRing:
    """Complex floating-point coefficient ring mirroring :class:`ExactRing`."""

    exact = False

    def __init__(self, p: int, tol: float = 1e-12):
        self.params = DeformParams.of(p)
        self.p = p
        self.tol = tol
        self._omega = cmath.exp(2j * math.pi / self.params.order)

    def __repr__(self):
        return f"FloatRing(p={self.p})"

    def zero(self):
        return 0j

    def one(self):
        return 1 + 0j

    def scalar(self, value):
        if isinstance(value, QScalar):
            return value.to_complex()
        return complex(value)

    def gaussian(self, re, im):
        return complex(float(re), float(im))

    def imag_unit(self):
        return 1j

    def root(self, k: int):
        return cmath.exp(2j * math.pi * (k % self.params.order) / self.params.order)

    def qpow(self, k: int):
        return self.root(2 * k)

    def q2pow(self, k: int):
        return self.root(4 * k)

    def bracket(self, n: int):
        return sum(self.q2pow(j) for j in range(n)) if n else 0j

    def qq_bracket(self, n: int):
        return sum(self.qpow(n - 1 - 2 * j) for j in range(n)) if n else 0j

    def sqrt_bracket(self, n: int):
        if n == 0 or n == self.p + 1:
            return 0j
        return cmath.sqrt(self.bracket(n))

    def sqrt_qq_bracket(self, n: int):
        return self.root(-(n - 1)) * self.sqrt_bracket(n)

    def factorial(self, n: int):
        acc = 1 + 0j
        for k in range(1, n + 1):
            acc *= self.bracket(k)
        return acc

    def sqrt_factorial(self, n: int):
        acc = 1 + 0j
        for k in range(1, n + 1):
            acc *= self.sqrt_bracket(k)
        return acc

    def conj(self, x):
        return complex(x).conjugate()

    def inv(self, x):
        if abs(x) <= self.tol:
            raise ZeroDivisionError("near-zero pivot")
        return 1 / x

    def is_zero(self, x) -> bool:
        return abs(x) <= self.tol

    def to_complex(self, x) -> complex:
        return complex(x)


def make_ring(p: int, backend: str = "exact"):
    if backend == "exact":
        return ExactRing(p)
    if backend == "float":
        return FloatRing(p)
    raise ValueError(f"unknown backend {backend!r}")
