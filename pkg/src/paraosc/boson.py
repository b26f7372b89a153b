"""Truncated pseudo-boson sector: supercoherent and supersqueezed states and
the two-level supersymmetric Hamiltonian.

The boson space keeps levels ``0..M``.  Boson slots in a :class:`PGTensor`
are ungraded, so para-Grassmann coefficients pass them without a phase.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
import scipy.linalg
import sympy

from paraosc.frame import Frame, ladder_ops
from paraosc.pgalg import PGPoly, theta
from paraosc.pgtensor import PGTensor, Slot
from paraosc.qscalar import ExactRing, FloatRing
from paraosc import linalg
from paraosc.report import Check, Report, check_zero
from paraosc.states import coherent, ladder, squeezed_state

__all__ = [
    "TruncationError",
    "BosonSector",
    "truncation_tail",
    "supercoherent",
    "supercoherent_eigen_residual",
    "boson_squeezed_vacuum",
    "boson_squeeze_operator",
    "squeezed_vacuum_closed_form",
    "supersqueeze",
    "susy_check",
]


class TruncationError(ValueError):
    pass


def truncation_tail(alpha: complex, M: int) -> float:
    """``exp(-|a|^2) sum_{n>M} |a|^(2n)/n!`` by direct summation."""
    x = abs(alpha) ** 2
    if x == 0:
        return 0.0
    n = M + 1
    term = math.exp(n * math.log(x) - math.lgamma(n + 1) - x)
    total = 0.0
    while term > 1e-300 and (term > total * 1e-17 or n < M + 10):
        total += term
        n += 1
        term *= x / n
    return total


class BosonSector:
    """Levels ``0..M`` with frame ``frame`` (identity when omitted)."""

    def __init__(self, M: int = 24, frame: Frame | None = None, tol: float = 1e-10):
        self.M = M
        self.dim = M + 1
        self.tol = tol
        self.ring = FloatRing(1)
        if frame is None:
            frame = Frame.identity(self.ring, self.dim)
        elif frame.ring.exact:
            frame = frame.with_ring(self.ring)
        if frame.dim != self.dim:
            raise ValueError(f"boson frame must be {self.dim}-dimensional")
        self.frame = frame
        self.a_level = np.diag(np.sqrt(np.arange(1, self.dim, dtype=float)), 1).astype(complex)

    def op(self, name: str) -> np.ndarray:
        """Standard-basis ``a``, ``a_sharp``, ``a_tilde`` or ``a_dagger``."""
        f = self.frame
        A = self.a_level
        return {
            "a": f.to_standard(A, "psi"),
            "a_sharp": f.to_standard(A.T, "psi"),
            "a_tilde": f.to_standard(A, "phi"),
            "a_dagger": f.to_standard(A.T, "phi"),
        }[name]

    def level_op(self, name: str, basis: str, ring) -> PGTensor:
        """Ungraded level-coordinate ``a`` or ``a_sharp`` over the float ``ring``."""
        A = self.a_level if name == "a" else self.a_level.T
        return PGTensor.operator(ring, A.tolist(), ket_basis=basis, graded=False)

    def coherent_levels(self, alpha: complex) -> np.ndarray:
        tail = truncation_tail(alpha, self.M)
        if tail > self.tol:
            raise TruncationError(f"truncation tail {tail:.3e} exceeds tolerance {self.tol:.1e}; raise M")
        n = np.arange(self.dim)
        logf = np.array([math.lgamma(k + 1) for k in n]) / 2
        amps = np.array([alpha**k for k in n], dtype=complex) * np.exp(-logf)
        return math.exp(-abs(alpha) ** 2 / 2) * amps


def _pg_float(ring) -> FloatRing:
    return ring if not ring.exact else FloatRing(ring.p)


def supercoherent(alpha: complex, boson: BosonSector, ring, boson_dual=False, pg_dual=False, index=0) -> PGTensor:
    """``|alpha> (x) |theta>`` in the four plain/dual combinations."""
    fr = _pg_float(ring)
    amps = boson.coherent_levels(alpha)
    bslot = Slot("ket", "phi" if boson_dual else "psi", False)
    bos = PGTensor(fr, (bslot,), {(n,): complex(c) for n, c in enumerate(amps)})
    return bos.tensor(coherent(fr, theta(index), dual=pg_dual))


def supercoherent_eigen_residual(alpha, boson: BosonSector, ring, boson_dual=False, pg_dual=False) -> float:
    """``max |(A (x) b)|alpha,theta> - alpha theta |alpha,theta>|``."""
    fr = _pg_float(ring)
    st = supercoherent(alpha, boson, fr, boson_dual, pg_dual)
    lhs = st.apply(boson.level_op("a", "phi" if boson_dual else "psi", fr), 0)
    lhs = lhs.apply(ladder(fr, "b", "phi" if pg_dual else "psi"), 1)
    rhs = st.lmul(PGPoly.var(fr, theta(0), 1, alpha))
    return lhs.max_abs_diff(rhs)


def boson_squeezed_vacuum(z: complex, boson: BosonSector, dual: bool = False) -> np.ndarray:
    """Level coefficients of ``S(z)|psi_0>`` (or ``S'(z)|phi_0>`` if dual).

    ``S(z)`` is ``psi``-form and ``S'(z)`` is ``phi``-form, so both are
    similarity transforms of one level-coordinate exponential.  Working in
    level coordinates avoids the conditioning of large non-unitary frames.
    """
    A = boson.a_level
    gen = 0.5 * (z * A.T @ A.T - np.conj(z) * A @ A)
    del dual  # same level vector, different ket basis
    return scipy.linalg.expm(gen)[:, 0]


def boson_squeeze_operator(z: complex, boson: BosonSector, dual: bool = False) -> np.ndarray:
    """Standard-basis ``S(z)`` built from ``a#, a`` (``S'(z)`` from ``a+, a~``)."""
    if dual:
        ad, at = boson.op("a_dagger"), boson.op("a_tilde")
        gen = 0.5 * (z * ad @ ad - np.conj(z) * at @ at)
    else:
        ash, a = boson.op("a_sharp"), boson.op("a")
        gen = 0.5 * (z * ash @ ash - np.conj(z) * a @ a)
    return scipy.linalg.expm(gen)


def squeezed_vacuum_closed_form(z: complex, M: int) -> np.ndarray:
    """``cosh(r)^-1/2 sum_n (e^{i phi} tanh r)^n sqrt((2n)!)/(2^n n!) |2n>``."""
    r, ph = abs(z), cmath.phase(z)
    out = np.zeros(M + 1, dtype=complex)
    t = cmath.exp(1j * ph) * math.tanh(r)
    for n in range(M // 2 + 1):
        log_c = 0.5 * math.lgamma(2 * n + 1) - n * math.log(2) - math.lgamma(n + 1)
        out[2 * n] = t**n * math.exp(log_c)
    return out / math.sqrt(math.cosh(r))


def supersqueeze(z: complex, boson: BosonSector, ring, boson_dual=False, pg_dual=False, index=0) -> PGTensor:
    """``(S(z) (x) S(theta))`` applied to the two vacua, four variants."""
    fr = _pg_float(ring)
    amps = boson_squeezed_vacuum(z, boson, boson_dual)
    tail = float(np.sum(np.abs(amps[-4:]) ** 2))
    if tail > boson.tol:
        raise TruncationError(f"squeezed vacuum reaches the truncation edge (weight {tail:.3e}); raise M")
    bslot = Slot("ket", "phi" if boson_dual else "psi", False)
    bos = PGTensor(fr, (bslot,), {(n,): complex(c) for n, c in enumerate(amps)})
    if fr.p == 1:
        pg = PGTensor.basis_ket(fr, 0, "phi" if pg_dual else "psi")
    else:
        pg = squeezed_state(fr, index, pg_dual)
    return bos.tensor(pg)


# -- two-level supersymmetry ------------------------------------------------


def _sym(mat) -> sympy.Matrix:
    return sympy.Matrix(mat.shape[0], mat.shape[1], lambda i, j: sympy.nsimplify(mat[i, j].to_sympy()))


def _zero_check(name, mat, mask=None) -> Check:
    mat = sympy.Matrix(mat).applyfunc(sympy.expand)
    if mask is not None:
        mat = mat.extract(mask, mask)
    bad = [x for x in mat if sympy.simplify(x) != 0]
    err = max((abs(complex(sympy.N(x))) for x in bad), default=0.0)
    return Check(name, "fail" if bad else "pass", err)


def susy_check(M: int = 10, boson_frame: Frame | None = None, frame: Frame | None = None) -> Report:
    """Exact checks of ``H1 = a# a + b# b`` with ``Q = a# b`` at ``p = 1``.

    The supercharge identities are checked in level coordinates on boson
    levels ``0..M-1``; pseudo-Hermiticity is checked in the standard basis.
    """
    ring = ExactRing(1)
    dim = M + 1
    boson_frame = boson_frame or Frame.identity(ring, dim)
    frame = frame or Frame.identity(ring)
    ops = ladder_ops(frame)
    rep = Report("susy")

    # pseudo-fermion: b b# + b# b = 1 in the frame
    bs = ops.b_sharp
    rep.add(_zero_check("b b# + b# b = 1", _sym(ops.b @ bs + bs @ ops.b) - sympy.eye(2)))

    A = sympy.Matrix(dim, dim, lambda i, j: sympy.sqrt(j) if j == i + 1 else 0)
    As = A.T  # a# in level coordinates
    B = sympy.Matrix([[0, 1], [0, 0]])
    Bs = sympy.Matrix([[0, 0], [1, 0]])  # b# = bbar q^-N = bbar at p = 1
    kp = sympy.kronecker_product
    I_b, I_f = sympy.eye(dim), sympy.eye(2)
    H1 = kp(As * A, I_f) + kp(I_b, Bs * B)
    Q = kp(As, B)
    Qs = kp(A, Bs)
    keep = [i for i in range(2 * dim) if i // 2 < M]
    rep.add(_zero_check("H1 = Q Q# + Q# Q", Q * Qs + Qs * Q - H1, keep))
    rep.add(_zero_check("[Q, H1] = 0", Q * H1 - H1 * Q, keep))
    rep.add(_zero_check("[Q#, H1] = 0", Qs * H1 - H1 * Qs, keep))

    # (eta' (x) eta)-pseudo-Hermiticity in the standard basis; H1 is rational
    # in level coordinates, so the exact ring suffices here
    h_level = linalg.zeros(ring, 2 * dim)
    for i in range(2 * dim):
        h_level[i, i] = ring.scalar(int(H1[i, i]))
    psi = linalg.kron(ring, boson_frame.psi, frame.psi)
    psi_inv = linalg.kron(ring, boson_frame.psi_inv, frame.psi_inv)
    h_std = psi @ h_level @ psi_inv
    eta = linalg.kron(ring, boson_frame.eta, frame.eta)
    eta_inv = linalg.kron(ring, boson_frame.eta_inv, frame.eta_inv)
    resid = eta_inv @ linalg.dagger(ring, h_std) @ eta - h_std
    rep.add(check_zero(ring, "eta^-1 H1^dagger eta = H1", resid))
    return rep
