"""Biorthonormal frames and the pseudo-Hermitian ladder operators.

A frame is fixed by the matrix ``psi`` whose columns are the kets
``|psi_n>``.  The dual kets are the columns of ``phi = (psi^-1)^dagger``, so
``<phi_n|`` is row ``n`` of ``psi^-1``.  Operators are built in level
coordinates and mapped to the standard basis by a similarity transform.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from paraosc import linalg
from paraosc.linalg import SingularMatrixError
from paraosc.report import Report, check_zero

__all__ = [
    "Frame",
    "FrameError",
    "OperatorSet",
    "build_frame",
    "ladder_ops",
    "level_ops",
    "verify_oscillator_relations",
]


class FrameError(ValueError):
    pass


class Frame:
    """``psi`` columns are ``|psi_n>``, ``phi`` columns are ``|phi_n>``."""

    def __init__(self, ring, psi, dim: int | None = None):
        self.ring = ring
        self.dim = ring.p + 1 if dim is None else dim
        psi = np.asarray(psi)
        if psi.shape != (self.dim, self.dim):
            raise FrameError(f"psi must be {self.dim}x{self.dim}, got {psi.shape}")
        self.psi = psi
        try:
            self.psi_inv = linalg.inverse(ring, psi)
        except SingularMatrixError:
            raise FrameError("frame not invertible") from None
        self.phi = linalg.dagger(ring, self.psi_inv)
        self.phi_inv = linalg.dagger(ring, psi)
        self.eta = self.phi @ self.psi_inv
        self.eta_inv = psi @ self.phi_inv
        self.rows = None  # exact Gaussian-rational entries when known

    # -- constructors ---------------------------------------------------
    @classmethod
    def identity(cls, ring, dim: int | None = None):
        dim = ring.p + 1 if dim is None else dim
        return cls._with_rows(ring, [[int(i == j) for j in range(dim)] for i in range(dim)], dim)

    @classmethod
    def random(cls, ring, seed: int, dim: int | None = None, max_num: int = 2, dens=(1, 2)):
        """``I`` plus a strictly upper triangular Gaussian-rational perturbation."""
        rng = random.Random(seed)
        dim = ring.p + 1 if dim is None else dim
        rows = [[0] * dim for _ in range(dim)]
        for i in range(dim):
            rows[i][i] = 1
            for j in range(i + 1, dim):
                d = rng.choice(dens)
                re = Fraction(rng.randint(-max_num, max_num), d)
                im = Fraction(rng.randint(-max_num, max_num), d)
                rows[i][j] = (re, im)
        return cls._with_rows(ring, rows, dim)

    @classmethod
    def from_rows(cls, ring, rows, dim: int | None = None):
        """``rows`` is a nested list of numbers or ``[re, im]`` pairs."""
        return cls._with_rows(ring, rows, dim)

    @classmethod
    def _with_rows(cls, ring, rows, dim):
        out = cls(ring, _lift_rows(ring, rows), dim)
        try:
            out.rows = [[_exact_pair(v) for v in row] for row in rows]
        except (TypeError, ValueError):
            out.rows = None
        return out

    @classmethod
    def from_json(cls, ring, data: dict):
        if "psi" not in data:
            raise FrameError("frame file: missing field 'psi'")
        if "p" in data and data["p"] != ring.p:
            raise FrameError(f"frame file: field 'p' is {data['p']}, expected {ring.p}")
        return cls.from_rows(ring, data["psi"])

    @classmethod
    def load(cls, ring, path):
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FrameError(f"frame file: invalid JSON ({exc.msg})") from None
        return cls.from_json(ring, data)

    def to_json(self) -> dict:
        """``psi`` is exact (``"a/b"`` strings) when the frame came from rational
        rows; ``phi`` and ``eta`` are informational floats."""

        def enc(m):
            return [[_pair(self.ring.to_complex(x)) for x in row] for row in m]

        psi = enc(self.psi) if self.rows is None else [[[str(re), str(im)] for re, im in row] for row in self.rows]
        return {"p": self.ring.p, "psi": psi, "phi": enc(self.phi), "eta": enc(self.eta)}

    def with_ring(self, ring) -> "Frame":
        """Same frame over another ring (exact -> float)."""
        rows = [[self.ring.to_complex(x) for x in row] for row in self.psi]
        if ring.exact and not self.ring.exact:
            raise FrameError("cannot lift a float frame to the exact backend")
        return Frame(ring, linalg.as_matrix(ring, rows) if not ring.exact else self.psi, self.dim)

    # -- coordinate maps -------------------------------------------------
    def kets(self, basis: str):
        return self.psi if basis == "psi" else self.phi

    def bras(self, basis: str):
        """Matrix whose row ``n`` is the bra ``<basis_n|``."""
        return self.phi_inv if basis == "psi" else self.psi_inv

    def to_standard(self, level_matrix, ket_basis="psi", bra_basis=None):
        """``sum_mn X[m,n] |ket_m><bra_n|`` as a standard-basis matrix."""
        bra_basis = bra_basis or ("phi" if ket_basis == "psi" else "psi")
        return self.kets(ket_basis) @ level_matrix @ self.bras(bra_basis)

    def check_invariants(self) -> Report:
        ring = self.ring
        ident = linalg.eye(ring, self.dim)
        rep = Report("frame")
        rep.add(check_zero(ring, "<phi_m|psi_n> = delta_mn", linalg.dagger(ring, self.phi) @ self.psi - ident))
        rep.add(check_zero(ring, "sum |psi_n><phi_n| = I", self.psi @ linalg.dagger(ring, self.phi) - ident))
        rep.add(check_zero(ring, "eta eta^-1 = I", self.eta @ self.eta_inv - ident))
        rep.add(check_zero(ring, "eta hermitian", self.eta - linalg.dagger(ring, self.eta)))
        return rep

    @property
    def is_identity(self) -> bool:
        return linalg.is_zero_matrix(self.ring, self.psi - linalg.eye(self.ring, self.dim))


def _pair(z: complex) -> list:
    return [z.real, z.imag]


def _lift_entry(ring, v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise FrameError("frame entries must be numbers or [re, im] pairs")
        re, im = v
        if ring.exact:
            return ring.gaussian(_to_fraction(re), _to_fraction(im))
        return complex(float(re), float(im))
    if ring.exact:
        return ring.scalar(_to_fraction(v) if isinstance(v, (float, str)) else v)
    return complex(v)


def _exact_pair(v):
    if isinstance(v, (list, tuple)):
        re, im = v
    elif isinstance(v, complex):
        raise TypeError("complex entries are not exact")
    else:
        re, im = v, 0
    if isinstance(re, float) or isinstance(im, float):
        raise TypeError("float entries are not exact")
    return _to_fraction(re), _to_fraction(im)


def _to_fraction(v):
    if isinstance(v, float):
        return Fraction(repr(v))
    return Fraction(v)


def _lift_rows(ring, rows):
    dim = len(rows)
    out = linalg.zeros(ring, dim, dim)
    for i, row in enumerate(rows):
        if len(row) != dim:
            raise FrameError("frame matrix must be square")
        for j, v in enumerate(row):
            out[i, j] = _lift_entry(ring, v)
    return out


def build_frame(ring, spec="identity", seed: int = 0) -> Frame:
    """``spec`` is ``"identity"``, ``"random"``, a file path, or a matrix."""
    if isinstance(spec, str):
        if spec == "identity":
            return Frame.identity(ring)
        if spec == "random":
            return Frame.random(ring, seed)
        return Frame.load(ring, spec)
    return Frame.from_rows(ring, spec)


def level_ops(ring) -> dict:
    """Level-coordinate matrices shared by every frame."""
    dim = ring.p + 1
    z = linalg.zeros
    a = z(ring, dim)
    b = z(ring, dim)
    bbar = z(ring, dim)
    for n in range(dim - 1):
        a[n, n + 1] = ring.sqrt_qq_bracket(n + 1)
        b[n, n + 1] = ring.sqrt_bracket(n + 1)
        bbar[n + 1, n] = ring.sqrt_bracket(n + 1)
    return {
        "a": a,
        "b": b,
        "b_bar": bbar,
        "N": linalg.diag(ring, list(range(dim))),
        "br": linalg.diag(ring, [ring.bracket(n) for n in range(dim)]),
        "qqbr": linalg.diag(ring, [ring.qq_bracket(n) for n in range(dim)]),
    }


def q_power_diag(ring, k: int):
    """Level matrix ``q^(k n)``."""
    return linalg.diag(ring, [ring.qpow(k * n) for n in range(ring.p + 1)])


@dataclass
class OperatorSet:
    frame: Frame
    a: object
    a_sharp: object
    a_tilde: object
    a_dagger: object
    b: object
    b_bar: object
    c: object
    c_bar: object
    N: object
    N_prime: object

    @property
    def ring(self):
        return self.frame.ring

    def psi_diag(self, values):
        return self.frame.to_standard(linalg.diag(self.ring, values), "psi")

    def phi_diag(self, values):
        return self.frame.to_standard(linalg.diag(self.ring, values), "phi")

    def q_pow_N(self, k: int, prime: bool = False):
        """``q^(k N)`` (or ``q^(k N')``) in the standard basis."""
        vals = [self.ring.qpow(k * n) for n in range(self.frame.dim)]
        return self.phi_diag(vals) if prime else self.psi_diag(vals)

    @property
    def b_sharp(self):
        f = self.frame
        return f.eta_inv @ linalg.dagger(self.ring, self.b) @ f.eta

    def replace(self, **kw) -> "OperatorSet":
        data = {k: getattr(self, k) for k in self.__dataclass_fields__}
        data.update(kw)
        return OperatorSet(**data)


def ladder_ops(frame: Frame) -> OperatorSet:
    ring = frame.ring
    lv = level_ops(ring)
    a = frame.to_standard(lv["a"], "psi")
    a_dag = linalg.dagger(ring, a)
    return OperatorSet(
        frame=frame,
        a=a,
        a_sharp=frame.eta_inv @ a_dag @ frame.eta,
        a_tilde=frame.eta @ a @ frame.eta_inv,
        a_dagger=a_dag,
        b=frame.to_standard(lv["b"], "psi"),
        b_bar=frame.to_standard(lv["b_bar"], "psi"),
        c=frame.to_standard(lv["b"], "phi"),
        c_bar=frame.to_standard(lv["b_bar"], "phi"),
        N=frame.to_standard(lv["N"], "psi"),
        N_prime=frame.to_standard(lv["N"], "phi"),
    )


def verify_oscillator_relations(ops: OperatorSet, tol: float = 1e-10) -> Report:
    ring = ops.ring
    f = ops.frame
    dim = f.dim
    ident = linalg.eye(ring, dim)
    q, qi, q2 = ring.qpow(1), ring.qpow(-1), ring.q2pow(1)
    a, ash, at, ad = ops.a, ops.a_sharp, ops.a_tilde, ops.a_dagger
    b, bb, c, cb = ops.b, ops.b_bar, ops.c, ops.c_bar
    N, Np = ops.N, ops.N_prime
    br = [ring.bracket(n) for n in range(dim)]
    qq = [ring.qq_bracket(n) for n in range(dim)]
    rep = Report("oscillator")

    def add(name, residual, group):
        rep.add(check_zero(ring, name, residual, tol, detail=group))

    add("a a# - q a# a = q^-N", a @ ash - q * (ash @ a) - ops.q_pow_N(-1), "a")
    add("a a# - q^-1 a# a = q^N", a @ ash - qi * (ash @ a) - ops.q_pow_N(1), "a")
    add("a# a = diag([[n]])", ash @ a - ops.psi_diag(qq), "a")
    add("a~ a+ - q a+ a~ = q^-N'", at @ ad - q * (ad @ at) - ops.q_pow_N(-1, prime=True), "a")
    add("a~ a+ - q^-1 a+ a~ = q^N'", at @ ad - qi * (ad @ at) - ops.q_pow_N(1, prime=True), "a")
    add("a+ a~ = diag'([[n]])", ad @ at - ops.phi_diag(qq), "a")
    add("b bbar - q^2 bbar b = 1", b @ bb - q2 * (bb @ b) - ident, "b")
    add("b bbar - bbar b = q^2N", b @ bb - bb @ b - ops.q_pow_N(2), "b")
    add("bbar b = diag([n])", bb @ b - ops.psi_diag(br), "b")
    add("c cbar - q^2 cbar c = 1", c @ cb - q2 * (cb @ c) - ident, "c")
    add("c cbar - cbar c = q^2N'", c @ cb - cb @ c - ops.q_pow_N(2, prime=True), "c")
    add("cbar c = diag'([n])", cb @ c - ops.phi_diag(br), "c")
    add("[N, a] = -a", N @ a - a @ N + a, "N")
    add("[N, a#] = a#", N @ ash - ash @ N - ash, "N")
    add("[N, b] = -b", N @ b - b @ N + b, "N")
    add("[N, bbar] = bbar", N @ bb - bb @ N - bb, "N")
    add("[N', c] = -c", Np @ c - c @ Np + c, "N")
    add("[N', cbar] = cbar", Np @ cb - cb @ Np - cb, "N")
    add("b# = bbar q^-N", ops.b_sharp - bb @ ops.q_pow_N(-1), "b")
    return rep
