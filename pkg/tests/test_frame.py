import json

import numpy as np
import pytest

from paraosc import linalg
from paraosc.frame import Frame, FrameError, build_frame, ladder_ops, verify_oscillator_relations
from paraosc.qscalar import ExactRing, FloatRing

from conftest import ring_for


@pytest.mark.parametrize("p", [1, 2, 3])
def test_frame_invariants(p, backend):
    ring = ring_for(p, backend)
    for seed in range(3):
        f = Frame.random(ring, seed)
        assert f.check_invariants().passed
        # biorthonormality <phi_m|psi_n> = delta and completeness
        gram = linalg.dagger(ring, f.phi) @ f.psi
        assert linalg.is_zero_matrix(ring, gram - linalg.eye(ring, p + 1))
        assert linalg.is_zero_matrix(ring, f.eta @ f.eta_inv - linalg.eye(ring, p + 1))


def test_eta_is_hermitian_positive():
    f = Frame.random(FloatRing(3), 4)
    assert np.allclose(f.eta, f.eta.conj().T)
    assert np.all(np.linalg.eigvalsh(f.eta) > 0)


def test_random_is_deterministic_and_not_identity():
    r = ExactRing(2)
    a, b = Frame.random(r, 11), Frame.random(r, 11)
    assert linalg.is_zero_matrix(r, a.psi - b.psi)
    assert any(not Frame.random(r, s).is_identity for s in range(5))
    assert Frame.identity(r).is_identity


def test_singular_frame_rejected():
    with pytest.raises(FrameError, match="frame not invertible"):
        Frame.from_rows(ExactRing(1), [[1, 1], [1, 1]])


def test_file_round_trip(tmp_path):
    r = ExactRing(2)
    f = Frame.random(r, 3)
    path = tmp_path / "frame.json"
    path.write_text(json.dumps(f.to_json()))
    g = build_frame(r, str(path))
    assert linalg.is_zero_matrix(r, f.psi - g.psi)


def test_file_errors_name_the_field(tmp_path):
    r = ExactRing(2)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"phi": []}))
    with pytest.raises(FrameError, match="'psi'"):
        Frame.load(r, bad)
    bad.write_text(json.dumps({"p": 3, "psi": [[1, 0], [0, 1]]}))
    with pytest.raises(FrameError, match="'p'"):
        Frame.load(r, bad)
    bad.write_text("{not json")
    with pytest.raises(FrameError, match="invalid JSON"):
        Frame.load(r, bad)


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_oscillator_relations(p, backend):
    ring = ring_for(p, backend)
    for seed in range(3):
        rep = verify_oscillator_relations(ladder_ops(Frame.random(ring, seed)))
        assert rep.passed, [c.relation for c in rep.failed()]


def test_relations_fail_on_a_broken_operator():
    ops = ladder_ops(Frame.random(ExactRing(2), 1))
    broken = ops.replace(b=ops.b * 2)
    assert not verify_oscillator_relations(broken).passed


def test_identity_frame_gives_hermitian_pairs():
    ring = FloatRing(3)
    ops = ladder_ops(Frame.identity(ring))
    assert np.allclose(ops.a_sharp, ops.a.conj().T)
    assert np.allclose(ops.a_dagger, ops.a.conj().T)
    assert np.allclose(ops.a_tilde, ops.a)
