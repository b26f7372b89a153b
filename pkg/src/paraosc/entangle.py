"""Entangled states from weighted Berezin integrals of coherent products.

A construction is a weight polynomial, a list of coherent factors and an
integration order (innermost first).  The product ``w |f_1>|f_2>...`` is
formed under the full exchange rules and integrated; what survives is a
PG-free tensor in level coordinates.

Named constructions carry the weight and target as printed in the
literature.  :func:`make_named_state` tries the printed weight first; when
the output disagrees with the printed target it either recognises a known
misprint in the target or solves for a weight that does produce it, and
says which in ``weight_source`` and ``notes``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from paraosc import linalg
from paraosc.linalg import InconsistentSystemError
from paraosc.pgalg import PGPoly, PGVar, theta, thetabar
from paraosc.pgtensor import PGTensor, Slot
from paraosc.states import coherent, to_standard_vector

__all__ = [
    "CoherentFactor",
    "TensorState",
    "NoWeightError",
    "product_state",
    "integrate_tensor",
    "target_state",
    "solve_weight",
    "Display",
    "DISPLAYS",
    "NamedResult",
    "make_named_state",
    "pbell",
    "w_state",
    "ghz",
    "qutrit_bell",
    "subspace_entangler",
    "qudit_diag_weight",
    "qudit_factors",
    "schmidt_rank",
]


class NoWeightError(ValueError):
    pass


@dataclass(frozen=True)
class CoherentFactor:
    var: PGVar
    scale: int = 1
    dual: bool = False

    @property
    def basis(self) -> str:
        return "phi" if self.dual else "psi"


@dataclass
class TensorState:
    tensor: PGTensor
    partially_integrated: bool = False

    @property
    def ring(self):
        return self.tensor.ring

    @property
    def bases(self) -> tuple:
        return tuple(s.basis for s in self.tensor.slots)

    def coeffs(self) -> dict:
        return self.tensor.scalar_entries()

    def norm_eta(self) -> float:
        """Norm with ``eta`` on ``psi`` slots and ``eta^-1`` on ``phi`` slots;
        this is the plain norm of the level coefficients."""
        return math.sqrt(sum(abs(self.ring.to_complex(v)) ** 2 for v in self.coeffs().values()))

    def norm_standard(self, frames) -> float:
        vec = to_standard_vector(self.tensor, frames)
        return math.sqrt(sum(abs(self.ring.to_complex(v)) ** 2 for v in vec))

    def standard_vector(self, frames) -> np.ndarray:
        vec = to_standard_vector(self.tensor, frames)
        return np.array([self.ring.to_complex(v) for v in vec])

    def to_json(self, frames=None) -> dict:
        ring = self.ring
        out = {
            "dims": [ring.p + 1] * len(self.tensor.slots),
            "bases": list(self.bases),
            "partially_integrated": self.partially_integrated,
        }
        if self.partially_integrated:
            out["tensor"] = self.tensor.to_json()
            return out
        coeffs = self.coeffs()
        out["coeffs"] = [
            {
                "index": list(k),
                "value": coeffs[k].to_json() if ring.exact else [coeffs[k].real, coeffs[k].imag],
            }
            for k in sorted(coeffs)
        ]
        out["norm_eta"] = self.norm_eta()
        if frames is not None:
            out["norm_standard"] = self.norm_standard(frames)
        return out


def product_state(ring, factors) -> PGTensor:
    out = None
    for f in factors:
        ket = coherent(ring, f.var, dual=f.dual, scale=f.scale)
        out = ket if out is None else out.tensor(ket)
    return out


def integrate_tensor(ring, weight: PGPoly, factors, order) -> TensorState:
    """``int d(order[-1]) ... d(order[0]) w |f_1>...|f_n>`` (``order`` innermost first)."""
    known = {f.var for f in factors} | set(order)
    stray = weight.variables() - known
    if stray:
        raise ValueError(f"weight uses variables outside the integration: {sorted(map(str, stray))}")
    out = product_state(ring, factors).lmul(weight).integrate_all(order)
    return TensorState(out, partially_integrated=bool(out.variables()))


def target_state(ring, terms: dict, bases) -> PGTensor:
    """Tensor with ket slots on ``bases`` and integer/ring coefficients ``terms``."""
    slots = tuple(Slot("ket", b) for b in bases)
    return PGTensor(ring, slots, {tuple(k): ring.scalar(v) for k, v in terms.items()})


def _monomials(ring, vars_):
    for exps in itertools.product(range(ring.p + 1), repeat=len(vars_)):
        yield exps, PGPoly.monomial(ring, [(v, e) for v, e in zip(vars_, exps) if e])


def solve_weight(ring, target: PGTensor, factors, vars_, order=None) -> PGPoly:
    """Weight ``sum w_e prod_i v_i^(e_i)`` (product in the order of ``vars_``)
    whose integral against ``factors`` equals ``target``.

    Unknowns the system leaves free are set to zero.
    """
    order = list(order if order is not None else vars_)
    prod = product_state(ring, factors)
    if prod.slots != target.slots:
        raise ValueError("target slots do not match the factor bases")
    monos, columns = [], []
    for _, mono in _monomials(ring, vars_):
        res = prod.lmul(mono).integrate_all(order)
        if res.variables():
            raise ValueError("integration order does not exhaust the variables")
        monos.append(mono)
        columns.append(res.scalar_entries())
    keys = sorted(set(target.entries) | {k for c in columns for k in c})
    tgt = target.scalar_entries()
    rows = [[c.get(k, ring.zero()) for c in columns] for k in keys]
    rhs = [tgt.get(k, ring.zero()) for k in keys]
    try:
        sol, _ = linalg.solve_linear(ring, rows, rhs)
    except InconsistentSystemError:
        raise NoWeightError("no weight exists for this target/factor combination") from None
    out = PGPoly(ring)
    for mono, c in zip(monos, sol):
        if not ring.is_zero(c):
            out = out + mono * c
    return out


def schmidt_rank(state: TensorState) -> int:
    ring = state.ring
    d = ring.p + 1
    if len(state.tensor.slots) != 2:
        raise ValueError("Schmidt rank needs a two-party state")
    m = linalg.zeros(ring, d, d)
    for (i, j), v in state.coeffs().items():
        m[i, j] = v
    return linalg.rank(ring, m)


# -- printed constructions ------------------------------------------------------


@dataclass
class Display:
    """One printed construction: weight, factors, order and target."""

    key: str
    p: int
    weight: object  # ring -> PGPoly
    factors: tuple
    order: tuple
    target: dict  # levels -> int, as printed
    target_bases: tuple  # as printed
    corrected: tuple | None = None  # (target, bases) when the print has a known misprint
    textbook: dict | None = None  # eta = 1 target
    corrected_weight: object = None  # ring -> PGPoly, a known fix of a misprinted weight

    def bases(self) -> tuple:
        return tuple(f.basis for f in self.factors)


@dataclass
class NamedResult:
    key: str
    state: TensorState
    weight: PGPoly
    weight_source: str  # "printed", "corrected" or "solved"
    printed_weight_output: TensorState
    printed_target: PGTensor
    matches_printed: bool
    notes: list = field(default_factory=list)

    def to_json(self, frames=None) -> dict:
        return {
            "key": self.key,
            "weight_source": self.weight_source,
            "matches_printed_target": self.matches_printed,
            "weight": self.weight.to_json(),
            "state": self.state.to_json(frames),
            "notes": list(self.notes),
        }


def _tensor_eq(a: PGTensor, b: PGTensor) -> bool:
    if a.slots != b.slots:
        return False
    if a.ring.exact:
        return a == b
    return a.max_abs_diff(b) <= 1e-10


def make_named_state(ring, disp: Display) -> NamedResult:
    if ring.p != disp.p:
        raise ValueError(f"{disp.key} needs p = {disp.p}")
    w_printed = disp.weight(ring)
    out = integrate_tensor(ring, w_printed, disp.factors, disp.order)
    printed = target_state(ring, disp.target, disp.target_bases)
    notes = []
    if not out.partially_integrated and _tensor_eq(out.tensor, printed):
        return NamedResult(disp.key, out, w_printed, "printed", out, printed, True)
    if disp.corrected is not None:
        fixed = target_state(ring, *disp.corrected)
        if not out.partially_integrated and _tensor_eq(out.tensor, fixed):
            notes.append("printed target has a misprint; printed weight gives the corrected target")
            return NamedResult(disp.key, out, w_printed, "printed", out, printed, False, notes)
        printed = fixed
        notes.append("printed target has a misprint; compared against the corrected target")
    if disp.corrected_weight is not None:
        w = disp.corrected_weight(ring)
        fixed_out = integrate_tensor(ring, w, disp.factors, disp.order)
        if not fixed_out.partially_integrated and _tensor_eq(fixed_out.tensor, printed):
            notes.append("printed weight has a misprint; the corrected weight gives the target")
            return NamedResult(disp.key, fixed_out, w, "corrected", out, printed, False, notes)
    vars_ = _weight_vars(disp)
    w = solve_weight(ring, printed, disp.factors, vars_, disp.order)
    solved = integrate_tensor(ring, w, disp.factors, disp.order)
    notes.append("printed weight does not give the printed target; weight re-solved")
    return NamedResult(disp.key, solved, w, "solved", out, printed, False, notes)


def _weight_vars(disp: Display) -> list:
    """Monomial basis for re-solving: the integration variables, outermost first."""
    return list(reversed(disp.order))


# -- weights used in the printed constructions -----------------------------------


def _const(c):
    return lambda ring: PGPoly.const(ring, c)


def _one_plus_t1t2(ring):
    return PGPoly.const(ring, 1) + PGPoly.monomial(ring, [(theta(1), 1), (theta(2), 1)])


def _ghz_weight(n, sign=None):
    sign = (-1) ** (n // 2) if sign is None else sign

    def build(ring):
        mono = PGPoly.monomial(ring, [(theta(i), 1) for i in range(n, 0, -1)])
        return PGPoly.const(ring, sign) + mono

    return build


def _qutrit_w1(sign, mid=1):
    def build(ring):
        t, tb = theta(0), thetabar(0)
        return (
            PGPoly.monomial(ring, [(t, 2), (tb, 2)], ring.inv(ring.factorial(2)))
            + PGPoly.monomial(ring, [(t, 1), (tb, 1)], sign * ring.inv(ring.factorial(mid)))
            + PGPoly.const(ring, ring.q2pow(1))
        )

    return build


def _qutrit_w2(sign, mid=1):
    def build(ring):
        t, tb = theta(0), thetabar(0)
        s2 = ring.inv(ring.sqrt_factorial(2))
        return (
            PGPoly.var(ring, t, 2, s2)
            + PGPoly.monomial(ring, [(t, 1), (tb, 1)], sign * ring.inv(ring.factorial(mid)))
            + PGPoly.var(ring, tb, 2, ring.q2pow(1) * s2)
        )

    return build


def _subspace_weight(ring):
    t, tb = theta(0), thetabar(0)
    return PGPoly.monomial(ring, [(t, 2), (tb, 2)], ring.inv(ring.factorial(2))) + PGPoly.const(ring, ring.q2pow(1))


_B = {False: "psi", True: "phi"}
_PAIRS = [(False, False), (True, True), (False, True), (True, False)]


def pbell(line: int, sign: int) -> Display:
    """Qubit Bell-type lines 1-8; ``sign`` is the upper (+1) or lower (-1) choice."""
    if not 1 <= line <= 8 or sign not in (1, -1):
        raise ValueError("pbell line is 1..8 and sign is +1 or -1")
    d1, d2 = _PAIRS[(line - 1) % 4]
    bases = (_B[d1], _B[d2])
    if line <= 4:
        # int dtheta |-+theta>|-theta> = |0 1> +- |1 0>
        factors = (CoherentFactor(theta(0), -sign, d1), CoherentFactor(theta(0), -1, d2))
        return Display(
            f"pbell-{line}{'+' if sign > 0 else '-'}", 1, _const(1), factors, (theta(0),),
            {(0, 1): 1, (1, 0): sign}, bases, textbook={(0, 1): 1, (1, 0): sign},
        )
    # int dtheta2 dtheta1 (1 + theta1 theta2)|theta1>|s theta2> = |00> +- |11>
    s = sign if line == 5 else -sign
    factors = (CoherentFactor(theta(1), 1, d1), CoherentFactor(theta(2), s, d2))
    corrected = None
    target = {(0, 0): 1, (1, 1): sign}
    if line == 8:
        target = {(0, 1): 1, (1, 0): sign}
        corrected = ({(0, 0): 1, (1, 1): sign}, bases)
    return Display(
        f"pbell-{line}{'+' if sign > 0 else '-'}", 1, _one_plus_t1t2, factors, (theta(1), theta(2)),
        target, bases, corrected, textbook={(0, 0): 1, (1, 1): sign},
    )


def w_state(n: int, j: int) -> Display:
    """``W^(n)_j``: the first ``j-1`` slots dual, one shared variable, weight -1."""
    if not 1 <= j <= n + 1:
        raise ValueError("W index j runs over 1..n+1")
    duals = [i < j - 1 for i in range(n)]
    factors = tuple(CoherentFactor(theta(0), 1, d) for d in duals)
    target = {tuple(1 if i == k else 0 for i in range(n)): 1 for k in range(n)}
    return Display(f"w{n}-{j}", 1, _const(-1), factors, (theta(0),), target, tuple(_B[d] for d in duals),
                   textbook=dict(target))


def ghz(n: int, duals=None) -> Display:
    """``GHZ^(n)`` with factors ``|theta_n>...|theta_1>`` and per-slot dual flags."""
    duals = tuple(duals) if duals is not None else (False,) * n
    if len(duals) != n:
        raise ValueError("one dual flag per party")
    factors = tuple(CoherentFactor(theta(n - i), 1, d) for i, d in enumerate(duals))
    target = {(0,) * n: 1, (1,) * n: 1}
    tag = "".join("t" if d else "p" for d in duals)
    return Display(
        f"ghz{n}-{tag}", 1, _ghz_weight(n), factors, tuple(theta(i) for i in range(n, 0, -1)),
        target, tuple(_B[d] for d in duals), textbook=dict(target),
        corrected_weight=_ghz_weight(n, (-1) ** (n * (n + 1) // 2)),
    )


def qutrit_bell(block: int, line: int, sign: int) -> Display:
    """Qutrit lines: block 1 targets the diagonal, block 2 the anti-diagonal."""
    if block not in (1, 2) or not 1 <= line <= 4 or sign not in (1, -1):
        raise ValueError("qutrit block is 1 or 2, line 1..4, sign +-1")
    d1, d2 = [(False, False), (True, False), (False, True), (True, True)][line - 1]
    factors = (CoherentFactor(theta(0), 1, d1), CoherentFactor(thetabar(0), 1, d2))
    bases = (_B[d1], _B[d2])
    if block == 1:
        target = {(0, 0): 1, (1, 1): sign, (2, 2): 1}
        weight, fixed_w = _qutrit_w1(sign), _qutrit_w1(sign, 2)
    else:
        target = {(0, 2): 1, (1, 1): sign, (2, 0): 1}
        weight, fixed_w = _qutrit_w2(sign), _qutrit_w2(sign, 2)
    corrected = None
    printed_bases = bases
    if line == 3:
        # printed as |psi_0 phi_0> +- |phi_1 psi_1> + |phi_2 psi_2>: mixed slot bases
        printed_bases = ("psi", "phi")
        corrected = (target, bases)
    return Display(
        f"qutrit{block}-{line}{'+' if sign > 0 else '-'}", 2, weight, factors, (theta(0), thetabar(0)),
        target, printed_bases, corrected, textbook=dict(target), corrected_weight=fixed_w,
    )


def subspace_entangler(dual: bool = False) -> Display:
    factors = (CoherentFactor(theta(0), 1, dual), CoherentFactor(thetabar(0), 1, dual))
    target = {(0, 0): 1, (2, 2): 1}
    return Display(
        f"subspace-{'tilde' if dual else 'plain'}", 2, _subspace_weight, factors, (theta(0), thetabar(0)),
        target, (_B[dual], _B[dual]), textbook=dict(target),
    )


def all_displays() -> list:
    out = [pbell(line, s) for line in range(1, 9) for s in (1, -1)]
    out += [w_state(n, j) for n in (2, 3, 4) for j in range(1, n + 2)]
    for n in (2, 3, 4):
        out += [ghz(n), ghz(n, (True,) + (False,) * (n - 1)), ghz(n, (True,) * n)]
    out += [qutrit_bell(b, line, s) for b in (1, 2) for line in range(1, 5) for s in (1, -1)]
    out += [subspace_entangler(False), subspace_entangler(True)]
    return out


DISPLAYS = {d.key: d for d in all_displays()}


# -- qudit diagonal target --------------------------------------------------------


def qudit_factors(dual: bool = False) -> tuple:
    return (CoherentFactor(theta(0), 1, dual), CoherentFactor(thetabar(0), 1, dual))


def qudit_diag_weight(ring) -> PGPoly:
    """``sum_k c_{p-k,p-k}^-1 q^(2pk)/[p]! thetabar^k theta^k`` with
    ``c_ij = q^((j-i)^2 + i + j) / sqrt([i]![j]!)`` (normalisation dropped)."""
    p = ring.p
    t, tb = theta(0), thetabar(0)
    out = PGPoly(ring)
    for k in range(p + 1):
        i = p - k
        c_ii = ring.qpow(2 * i) * ring.inv(ring.factorial(i))  # sqrt([i]![i]!) = [i]!
        coeff = ring.inv(c_ii) * ring.q2pow(p * k) * ring.inv(ring.factorial(p))
        out = out + PGPoly.monomial(ring, [(tb, k), (t, k)], coeff)
    return out


def qudit_solve(ring, dual: bool = False) -> PGPoly:
    """Solve for the diagonal target over the basis ``thetabar^k theta^l``."""
    dim = ring.p + 1
    factors = qudit_factors(dual)
    basis = "phi" if dual else "psi"
    target = target_state(ring, {(i, i): 1 for i in range(dim)}, (basis, basis))
    return solve_weight(ring, target, factors, [thetabar(0), theta(0)], order=[theta(0), thetabar(0)])
