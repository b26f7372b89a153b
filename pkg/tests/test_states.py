import cmath

import numpy as np
import pytest

from paraosc import linalg, states
from paraosc.frame import Frame, ladder_ops
from paraosc.pgalg import PGPoly, theta, thetabar
from paraosc.pgtensor import PGTensor
from paraosc.qscalar import ExactRing, FloatRing

from conftest import ring_for


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_eigen_report(p, backend):
    rep = states.eigen_report(ring_for(p, backend))
    assert rep.passed, [c.relation for c in rep.failed()]


@pytest.mark.parametrize("p", [1, 3])
def test_coherent_components(p):
    ring = ExactRing(p)
    for dual, basis in ((False, "psi"), (True, "phi")):
        st = states.coherent(ring, dual=dual)
        assert st.slots[0].basis == basis
        for n in range(p + 1):
            # q^(n(n+1)) theta^n / sqrt([n]!) on level n
            expect = PGPoly.var(ring, theta(), n, ring.qpow(n * (n + 1)) * ring.inv(ring.sqrt_factorial(n)))
            assert st.entries[(n,)] == expect


def test_eigen_relation_detects_wrong_eigenvalue():
    ring = ExactRing(2)
    st = states.coherent(ring)
    lhs = st.apply(states.ladder(ring, "b"))
    assert lhs != st.lmul(PGPoly.var(ring, theta(), 1, 2))


@pytest.mark.parametrize("p", [1, 2, 3])
def test_level_operators_match_frame_operators(p, backend):
    ring = ring_for(p, backend)
    frame = Frame.random(ring, 2)
    ops = ladder_ops(frame)
    for name, basis, attr in (("b", "psi", "b"), ("b_bar", "psi", "b_bar"), ("b", "phi", "c"), ("b_bar", "phi", "c_bar")):
        std = states.to_standard_operator(states.ladder(ring, name, basis), frame)
        assert linalg.is_zero_matrix(ring, std - getattr(ops, attr)), (name, basis)


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_identity_weight_solve_matches_closed_form(p):
    ring = ExactRing(p)
    w = states.solve_identity_weight(ring)
    assert w == states.identity_weight_formula(ring)
    assert states.resolution_report(ring, w).passed


def test_identity_weight_at_p1():
    ring = ExactRing(1)
    w = states.solve_identity_weight(ring)
    assert w == PGPoly.const(ring) + PGPoly.monomial(ring, [(theta(), 1), (thetabar(), 1)])


def test_wrong_weight_fails_resolution():
    ring = ExactRing(2)
    assert not states.resolution_report(ring, PGPoly.const(ring)).passed


def test_squeeze_low_orders_match_printed():
    ring = ExactRing(2)
    for dual in (False, True):
        got = states.squeeze_orders(ring, 0, dual)
        printed = states.printed_squeeze(ring, 0, dual)
        for k in range(3):
            assert got[k] == printed[k]


def test_squeeze_series_has_higher_orders():
    ring = ExactRing(2)
    orders = states.squeeze_orders(ring)
    assert len(orders) == 5  # X^3 and X^4 survive, X^5 vanishes
    x3 = orders[3].entries
    assert set(x3) == {(0, 2), (2, 0)}
    assert set(orders[4].entries) == {(0, 0), (2, 2)}


def test_squeezed_vacuum_coefficient():
    ring = ExactRing(2)
    st = states.squeezed_state(ring)
    tt = ((theta(), 1), (thetabar(), 1))
    c = st.entries[(0,)].coeff(tt)
    assert c == ring.bracket(2) * ring.inv(ring.scalar(-8))
    assert c != ring.bracket(2) * ring.inv(ring.scalar(-4))
    assert st.entries[(2,)].coeff(((theta(), 1),)) == ring.sqrt_bracket(2) * ring.inv(ring.scalar(2))


def test_squeeze_is_identity_at_zero_generator():
    ring = ExactRing(1)
    # at p = 1 b^2 = 0, so the squeeze operator is trivial
    assert states.squeeze(ring) == PGTensor.identity(ring, 2)


def test_stability_check():
    assert states.stability_check(states.Spectrum.linear(2, 0.5, 3)) == (True, 0.5)
    assert states.stability_check(states.Spectrum((0, 1, 2)))[1] is None
    assert states.stability_check(states.Spectrum((1, 2, 4)))[0] is False


def test_coherent_evolution_factorizes():
    ring = FloatRing(3)
    spec = states.Spectrum.linear(0.8, 0.25, 3)
    for t in np.linspace(0, 3, 10):
        assert states.coherent_evolution_residual(ring, spec, t) <= 1e-10
        assert states.coherent_evolution_residual(ring, spec, t, dual=True) <= 1e-10


def test_evolution_oracle():
    ring = FloatRing(2)
    spec = states.Spectrum((0.3, 1.0, 2.5))
    t = 0.7
    out = states.evolve(states.coherent(ring), spec, t)
    for n in range(3):
        expect = states.coherent(ring).entries[(n,)].coeff(((theta(), n),) if n else ())
        got = out.entries[(n,)].coeff(((theta(), n),) if n else ())
        assert abs(got - expect * cmath.exp(-1j * spec.energies[n] * t)) < 1e-14


def test_nonlinear_spectrum_rejected():
    with pytest.raises(ValueError):
        states.coherent_evolution_residual(FloatRing(2), states.Spectrum((0, 1, 3)), 1.0)


def test_squeezed_evolution_factorizes_any_spectrum():
    ring = FloatRing(2)
    spec = states.Spectrum((0.5, 1.3, 2.9))
    for t in np.linspace(0, 3, 10):
        assert states.squeezed_evolution_residual(ring, spec, t) <= 1e-10


def test_exact_evolution_is_formal():
    ring = ExactRing(1)
    st = states.coherent(ring)
    with pytest.raises(TypeError):
        states.evolve(st, states.Spectrum((1, 2)), 1.0)
    formal = states.formal_evolution(st, states.Spectrum((1, 2)))
    assert str(formal[(1,)][0]) == "exp(-2*I*t)"


def test_standard_vector_of_basis_ket():
    ring = ExactRing(2)
    frame = Frame.random(ring, 5)
    v = states.to_standard_vector(PGTensor.basis_ket(ring, 1, "phi"), [frame])
    assert all(x == y for x, y in zip(v, frame.phi[:, 1]))


def test_squeeze_report(backend):
    rep = states.squeeze_report(ring_for(2, backend))
    assert rep.passed
    assert [c.status for c in rep.checks] == ["pass", "pass", "pass", "note", "note"]
