import numpy as np
import pytest

from paraosc import entangle as ent
from paraosc.frame import Frame
from paraosc.pgalg import PGPoly, theta, thetabar
from paraosc.qscalar import ExactRing, FloatRing

from conftest import ring_for


def _expected_target(disp, ring):
    terms, bases = disp.corrected if disp.corrected else (disp.target, disp.target_bases)
    return ent.target_state(ring, terms, bases)


@pytest.mark.parametrize("key", sorted(ent.DISPLAYS))
def test_every_display_reaches_its_target(key, backend):
    disp = ent.DISPLAYS[key]
    ring = ring_for(disp.p, backend)
    res = ent.make_named_state(ring, disp)
    assert not res.state.partially_integrated
    assert res.state.tensor.max_abs_diff(_expected_target(disp, ring)) <= 1e-10
    if ring.exact:
        assert res.state.tensor == _expected_target(disp, ring)


def _source(key):
    return ent.make_named_state(ExactRing(ent.DISPLAYS[key].p), ent.DISPLAYS[key])


def test_printed_weights_that_work():
    for key in ("pbell-1+", "pbell-4-", "pbell-6+", "w3-2", "ghz2-pp", "ghz4-tppp", "subspace-plain"):
        res = _source(key)
        assert res.weight_source == "printed" and res.matches_printed, key


def test_bell_block2_first_line_needs_a_new_weight():
    for sign in "+-":
        res = _source(f"pbell-5{sign}")
        assert res.weight_source == "solved"
        assert not ent._tensor_eq(res.printed_weight_output.tensor, res.printed_target)


def test_bell_line8_target_misprint():
    res = _source("pbell-8+")
    assert res.weight_source == "printed" and not res.matches_printed
    assert set(res.state.coeffs()) == {(0, 0), (1, 1)}


def test_ghz3_constant():
    for key in ("ghz3-ppp", "ghz3-tpp", "ghz3-ttt"):
        res = _source(key)
        assert res.weight_source == "corrected"
        # the printed constant flips the relative sign
        out = res.printed_weight_output.coeffs()
        assert out[(1, 1, 1)] == -out[(0, 0, 0)]


def test_qutrit_weight_uses_second_factorial():
    ring = ExactRing(2)
    for block in (1, 2):
        for line in (1, 2, 4):
            res = _source(f"qutrit{block}-{line}+")
            assert res.weight_source == "corrected"
            mid = res.weight.coeff(((theta(), 1), (thetabar(), 1)))
            assert mid == ring.inv(ring.factorial(2))


def test_solved_weight_agrees_with_corrected_weight():
    ring = ExactRing(2)
    disp = ent.DISPLAYS["qutrit1-1-"]
    tgt = ent.target_state(ring, disp.target, disp.target_bases)
    solved = ent.solve_weight(ring, tgt, disp.factors, [theta(), thetabar()], disp.order)
    assert solved == disp.corrected_weight(ring)


@pytest.mark.parametrize("key", sorted(ent.DISPLAYS))
def test_identity_metric_gives_textbook_vector(key):
    disp = ent.DISPLAYS[key]
    ring = FloatRing(disp.p)
    res = ent.make_named_state(ring, disp)
    d = disp.p + 1
    frames = [Frame.identity(ring)] * len(disp.factors)
    ref = np.zeros(d ** len(disp.factors), dtype=complex)
    for idx, c in disp.textbook.items():
        vec = np.array([1.0])
        for i in idx:
            vec = np.kron(vec, np.eye(d)[i])
        ref += c * vec
    assert np.max(np.abs(res.state.standard_vector(frames) - ref)) < 1e-12


def test_random_frame_vector_oracle():
    ring = FloatRing(2)
    frame = Frame.random(ring, 9)
    res = ent.make_named_state(ring, ent.DISPLAYS["qutrit1-3-"])
    ref = np.zeros(9, dtype=complex)
    for (i, j), c in res.state.coeffs().items():
        ref += c * np.kron(frame.psi[:, i], frame.phi[:, j])
    assert np.allclose(res.state.standard_vector([frame, frame]), ref)
    assert abs(res.state.norm_standard([frame, frame]) - np.linalg.norm(ref)) < 1e-12


@pytest.mark.parametrize("p", [2, 3, 4])
def test_qudit_closed_form_round_trip(p):
    ring = ExactRing(p)
    closed = ent.qudit_diag_weight(ring)
    for dual in (False, True):
        assert ent.qudit_solve(ring, dual) == closed
        st = ent.integrate_tensor(ring, closed, ent.qudit_factors(dual), [theta(), thetabar()])
        basis = "phi" if dual else "psi"
        assert st.tensor == ent.target_state(ring, {(i, i): 1 for i in range(p + 1)}, (basis, basis))


def test_schmidt_rank():
    ring = ExactRing(2)
    sub = ent.make_named_state(ring, ent.DISPLAYS["subspace-plain"]).state
    assert ent.schmidt_rank(sub) == 2
    qutrit = ent.make_named_state(ring, ent.DISPLAYS["qutrit1-1+"]).state
    assert ent.schmidt_rank(qutrit) == 3
    prod = ent.integrate_tensor(ring, PGPoly.const(ring), ent.qudit_factors(), [theta(), thetabar()])
    assert ent.schmidt_rank(prod) == 1


def test_unreachable_target_raises():
    ring = ExactRing(1)
    factors = (ent.CoherentFactor(theta(0)), ent.CoherentFactor(theta(0)))
    tgt = ent.target_state(ring, {(0, 0): 1, (1, 1): 1}, ("psi", "psi"))
    with pytest.raises(ent.NoWeightError, match="no weight exists"):
        ent.solve_weight(ring, tgt, factors, [theta(0)])


def test_partial_integration_is_flagged():
    ring = ExactRing(1)
    factors = (ent.CoherentFactor(theta(1)), ent.CoherentFactor(theta(2)))
    st = ent.integrate_tensor(ring, PGPoly.const(ring), factors, [theta(1)])
    assert st.partially_integrated
    assert "tensor" in st.to_json()


def test_stray_weight_variable_rejected():
    ring = ExactRing(1)
    with pytest.raises(ValueError, match="outside"):
        ent.integrate_tensor(ring, PGPoly.var(ring, theta(5)), (ent.CoherentFactor(theta(0)),), [theta(0)])


def test_norms():
    ring = ExactRing(1)
    st = ent.make_named_state(ring, ent.DISPLAYS["pbell-1+"]).state
    assert abs(st.norm_eta() - np.sqrt(2)) < 1e-12
    js = st.to_json([Frame.identity(ring)] * 2)
    assert abs(js["norm_standard"] - np.sqrt(2)) < 1e-12


def test_display_argument_checks():
    with pytest.raises(ValueError):
        ent.pbell(9, 1)
    with pytest.raises(ValueError):
        ent.w_state(3, 5)
    with pytest.raises(ValueError):
        ent.ghz(3, [True])
    with pytest.raises(ValueError):
        ent.make_named_state(ExactRing(2), ent.DISPLAYS["ghz2-pp"])
