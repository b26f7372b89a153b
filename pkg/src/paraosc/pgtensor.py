"""Kets, bras and operators with para-Grassmann coefficients.

Everything is stored in level coordinates: an entry ``levels -> P`` of a
tensor with slots ``(ket psi, bra phi)`` stands for ``P |psi_m><phi_n|``.
Coefficients always sit to the left.  A monomial of charge ``c``
(#theta - #thetabar) moving left past a ket of level ``n`` picks up
``q^(2cn)``, past a bra of level ``n`` it picks up ``q^(-2cn)``.

Contractions ``<phi_n|psi_m>`` and ``<psi_n|phi_m>`` are Kronecker deltas.
Contracting matching bases (``<psi|psi>``) would need the metric and is
rejected: the exchange relations are only consistent level by level.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from paraosc.pgalg import PGPoly, PGVar

__all__ = ["Slot", "PGTensor", "dual_basis"]


def dual_basis(basis: str) -> str:
    if basis not in ("psi", "phi"):
        raise ValueError(f"unknown basis {basis!r}")
    return "phi" if basis == "psi" else "psi"


class Slot(NamedTuple):
    kind: str  # "ket" or "bra"
    basis: str  # "psi" or "phi"
    graded: bool = True

    def charge(self, level: int) -> int:
        if not self.graded:
            return 0
        return level if self.kind == "ket" else -level

    def label(self) -> str:
        return f"{self.kind}:{self.basis}" + ("" if self.graded else ":boson")


class PGTensor:
    __slots__ = ("ring", "slots", "entries")

    def __init__(self, ring, slots, entries: dict | None = None):
        self.ring = ring
        self.slots = tuple(Slot(*s) for s in slots)
        self.entries = {}
        for lv, poly in (entries or {}).items():
            if not isinstance(poly, PGPoly):
                poly = PGPoly.const(ring, poly)
            if not poly.is_zero():
                self.entries[tuple(lv)] = poly

    # -- constructors ---------------------------------------------------
    @classmethod
    def operator(cls, ring, matrix, ket_basis="psi", bra_basis=None, graded=True):
        """Constant operator ``sum_mn M[m][n] |m><n|`` in the given bases."""
        bra_basis = bra_basis or dual_basis(ket_basis)
        entries = {}
        for m, row in enumerate(matrix):
            for n, v in enumerate(row):
                if isinstance(v, PGPoly) or not ring.is_zero(ring.scalar(v)):
                    entries[(m, n)] = v if isinstance(v, PGPoly) else ring.scalar(v)
        return cls(ring, (Slot("ket", ket_basis, graded), Slot("bra", bra_basis, graded)), entries)

    @classmethod
    def identity(cls, ring, dim, ket_basis="psi", graded=True):
        return cls.operator(ring, np.eye(dim, dtype=int).tolist(), ket_basis, graded=graded)

    @classmethod
    def poly_times_identity(cls, ring, poly: PGPoly, dim, ket_basis="psi"):
        slots = (Slot("ket", ket_basis), Slot("bra", dual_basis(ket_basis)))
        return cls(ring, slots, {(n, n): poly for n in range(dim)})

    @classmethod
    def basis_ket(cls, ring, level, basis="psi", graded=True):
        return cls(ring, (Slot("ket", basis, graded),), {(level,): ring.one()})

    def _new(self, slots, entries):
        out = PGTensor.__new__(PGTensor)
        out.ring = self.ring
        out.slots = tuple(slots)
        out.entries = {k: v for k, v in entries.items() if not v.is_zero()}
        return out

    def _charge(self, levels) -> int:
        return sum(s.charge(n) for s, n in zip(self.slots, levels))

    # -- linear structure ----------------------------------------------
    def _check_slots(self, other):
        if self.slots != other.slots:
            raise ValueError(f"slot mismatch: {self.slots} vs {other.slots}")

    def __add__(self, other):
        self._check_slots(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return self._new(self.slots, out)

    def __neg__(self):
        return self._new(self.slots, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PGTensor":
        c = self.ring.scalar(c)
        return self._new(self.slots, {k: v * c for k, v in self.entries.items()})

    def lmul(self, poly) -> "PGTensor":
        """``poly * self`` with ``poly`` placed left of all coefficients."""
        if not isinstance(poly, PGPoly):
            return self.scale(poly)
        return self._new(self.slots, {k: poly * v for k, v in self.entries.items()})

    def rmul(self, poly: PGPoly) -> "PGTensor":
        """``self * poly``: ``poly`` is commuted left past every slot."""
        return self._new(
            self.slots,
            {k: v * poly.pass_left(self._charge(k)) for k, v in self.entries.items()},
        )

    def map_levels(self, fn) -> "PGTensor":
        """Multiply each entry by the scalar ``fn(levels)``."""
        return self._new(self.slots, {k: v * fn(k) for k, v in self.entries.items()})

    def map_polys(self, fn) -> "PGTensor":
        return self._new(self.slots, {k: fn(v) for k, v in self.entries.items()})

    # -- products -------------------------------------------------------
    def tensor(self, other: "PGTensor") -> "PGTensor":
        """``self (x) other``; coefficients of ``other`` pass the slots of ``self``."""
        out = {}
        for k1, v1 in self.entries.items():
            d = self._charge(k1)
            for k2, v2 in other.entries.items():
                key = k1 + k2
                val = v1 * v2.pass_left(d)
                out[key] = out[key] + val if key in out else val
        return self._new(self.slots + other.slots, out)

    def apply(self, op: "PGTensor", slot: int = 0) -> "PGTensor":
        """Act with the one-space operator ``op`` on ket slot ``slot``."""
        ks, bs = op.slots
        target = self.slots[slot]
        if target.kind != "ket":
            raise ValueError("apply() acts on ket slots; use apply_right for bras")
        if bs.basis != dual_basis(target.basis):
            raise ValueError(f"cannot contract <{bs.basis}| with |{target.basis}>")
        by_col = {}
        for (m, n), o in op.entries.items():
            by_col.setdefault(n, []).append((m, o))
        shift_graded = ks.graded and target.graded
        out = {}
        for key, v in self.entries.items():
            for m, o in by_col.get(key[slot], ()):
                vv = v.pass_left(m - key[slot]) if shift_graded else v
                new_key = key[:slot] + (m,) + key[slot + 1 :]
                val = o * vv
                out[new_key] = out[new_key] + val if new_key in out else val
        slots = list(self.slots)
        slots[slot] = Slot("ket", ks.basis, target.graded)
        return self._new(slots, out)

    def apply_right(self, op: "PGTensor", slot: int = 0) -> "PGTensor":
        """``self * op`` for a bra-valued ``self`` (``op`` acts to the left)."""
        ks, bs = op.slots
        target = self.slots[slot]
        if target.kind != "bra":
            raise ValueError("apply_right() acts on bra slots")
        if ks.basis != dual_basis(target.basis):
            raise ValueError(f"cannot contract <{target.basis}| with |{ks.basis}>")
        by_row = {}
        for (m, n), o in op.entries.items():
            by_row.setdefault(m, []).append((n, o))
        out = {}
        for key, v in self.entries.items():
            d = self._charge(key)
            for n, o in by_row.get(key[slot], ()):
                new_key = key[:slot] + (n,) + key[slot + 1 :]
                val = v * o.pass_left(d)
                out[new_key] = out[new_key] + val if new_key in out else val
        slots = list(self.slots)
        slots[slot] = Slot("bra", bs.basis, target.graded)
        return self._new(slots, out)

    def compose(self, other: "PGTensor") -> "PGTensor":
        """Operator product ``self @ other`` of two one-space operators."""
        (ka, ba), (kb, bb) = self.slots, other.slots
        if ba.basis != dual_basis(kb.basis):
            raise ValueError(f"cannot contract <{ba.basis}| with |{kb.basis}>")
        by_row = {}
        for (k, l), o in other.entries.items():
            by_row.setdefault(k, []).append((l, o))
        graded = ka.graded and kb.graded
        out = {}
        for (m, n), a in self.entries.items():
            for l, b in by_row.get(n, ()):
                val = a * (b.pass_left(m - n) if graded else b)
                key = (m, l)
                out[key] = out[key] + val if key in out else val
        return self._new((ka, bb), out)

    __matmul__ = compose

    def power(self, k: int, dim: int) -> "PGTensor":
        out = PGTensor.identity(self.ring, dim, self.slots[0].basis, self.slots[0].graded)
        for _ in range(k):
            out = out.compose(self)
        return out

    def integrate(self, v: PGVar) -> "PGTensor":
        return self._new(self.slots, {k: p.integrate(v) for k, p in self.entries.items()})

    def integrate_all(self, order) -> "PGTensor":
        out = self
        for v in order:
            out = out.integrate(v)
        return out

    def scale_var(self, v: PGVar, factor) -> "PGTensor":
        return self._new(self.slots, {k: p.scale_var(v, factor) for k, p in self.entries.items()})

    # -- inspection -----------------------------------------------------
    def variables(self) -> set:
        out = set()
        for p in self.entries.values():
            out |= p.variables()
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, PGTensor) or self.slots != other.slots:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def max_abs_diff(self, other) -> float:
        self._check_slots(other)
        d = self - other
        return max((p.max_abs_diff(PGPoly(p.ring)) for p in d.entries.values()), default=0.0)

    def scalar_entries(self) -> dict:
        """Entries as plain scalars; raises if any PG variable survives."""
        out = {}
        for k, p in self.entries.items():
            if set(p.terms) - {()}:
                raise ValueError("tensor still carries para-Grassmann variables")
            out[k] = p.coeff(())
        return out

    def to_float(self, float_ring) -> "PGTensor":
        return self._new(self.slots, {k: p.to_complex_poly(float_ring) for k, p in self.entries.items()})

    def to_json(self) -> dict:
        return {
            "slots": [s.label() for s in self.slots],
            "entries": [
                {"index": list(k), "coeff": self.entries[k].to_json()} for k in sorted(self.entries)
            ],
        }

    def __repr__(self):
        return f"PGTensor(slots={[s.label() for s in self.slots]}, nnz={len(self.entries)})"
