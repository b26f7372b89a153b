import numpy as np
import pytest

from paraosc import boson
from paraosc.boson import BosonSector, TruncationError
from paraosc.frame import Frame
from paraosc.qscalar import ExactRing, FloatRing


def test_truncation_tail_oracle():
    # direct comparison against a long explicit sum
    from math import exp, factorial

    for alpha, M in ((1.0, 10), (2.0, 24), (0.5, 3)):
        x = alpha**2
        ref = exp(-x) * sum(x**n / factorial(n) for n in range(M + 1, M + 80))
        assert abs(boson.truncation_tail(alpha, M) - ref) <= 1e-15 + 1e-9 * ref


def test_coherent_levels_normalised_and_tail_guard():
    b = BosonSector(24)
    amps = b.coherent_levels(1.5)
    assert abs(np.vdot(amps, amps) - 1) < 1e-9
    with pytest.raises(TruncationError):
        BosonSector(5).coherent_levels(2.0)


@pytest.mark.parametrize("boson_dual", [False, True])
@pytest.mark.parametrize("pg_dual", [False, True])
def test_supercoherent_eigen(boson_dual, pg_dual):
    b = BosonSector(24)
    for ring in (ExactRing(2), FloatRing(3)):
        res = boson.supercoherent_eigen_residual(0.8 + 0.3j, b, ring, boson_dual, pg_dual)
        assert res < 1e-8


def test_boson_operators_in_random_frame():
    ring = ExactRing(1)
    frame = Frame.random(ring, 3, dim=6)
    b = BosonSector(5, frame)
    a, ash = b.op("a"), b.op("a_sharp")
    comm = a @ ash - ash @ a
    # [a, a#] = 1 except at the truncation edge
    assert np.allclose(b.frame.psi_inv @ comm @ b.frame.psi, np.diag([1, 1, 1, 1, 1, -5]))


def test_squeezed_vacuum_matches_closed_form():
    b = BosonSector(40)
    for z in (0.3, 0.2 + 0.25j):
        got = boson.boson_squeezed_vacuum(z, b)
        ref = boson.squeezed_vacuum_closed_form(z, 40)
        assert np.max(np.abs(got[:30] - ref[:30])) < 1e-10


def test_squeeze_small_z_series():
    b = BosonSector(12)
    z = 1e-5
    got = boson.boson_squeezed_vacuum(z, b)
    ref = np.zeros(13, dtype=complex)
    ref[0] = 1
    ref[2] = z / np.sqrt(2)
    assert np.max(np.abs(got - ref)) < 1e-8


def test_squeeze_operator_identity_frame_and_zero():
    b = BosonSector(12)
    assert np.allclose(boson.boson_squeeze_operator(0, b), np.eye(13))
    s = boson.boson_squeeze_operator(0.2, b)
    assert np.allclose(s[:, 0], boson.boson_squeezed_vacuum(0.2, b))
    assert np.allclose(boson.boson_squeeze_operator(0.2, b, dual=True), s)


def test_supersqueeze_shape():
    b = BosonSector(30)
    st = boson.supersqueeze(0.2, b, ExactRing(2))
    assert [s.basis for s in st.slots] == ["psi", "psi"]
    assert st.variables()
    one = boson.supersqueeze(0.0, b, FloatRing(1))
    assert set(one.entries) == {(0, 0)}


def test_supersqueeze_truncation_guard():
    with pytest.raises(TruncationError):
        boson.supersqueeze(2.5, BosonSector(8), FloatRing(2))


def test_susy_identity_and_random_frames():
    assert boson.susy_check(10).passed
    ring = ExactRing(1)
    rep = boson.susy_check(6, Frame.random(ring, 1, dim=7), Frame.random(ring, 2))
    assert rep.passed, [c.relation for c in rep.failed()]
