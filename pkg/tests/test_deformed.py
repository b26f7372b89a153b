import pytest

from paraosc import deformed
from paraosc.frame import Frame, ladder_ops
from paraosc.qscalar import ExactRing

from conftest import ring_for


def _same(ring, found, expect):
    rest = list(found)
    for e in expect:
        hit = next(i for i, f in enumerate(rest) if ring.is_zero(f - e) or (not ring.exact and abs(f - e) < 1e-9))
        rest.pop(hit)
    return not rest


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_structure_parameter_roots(p, backend):
    ring = ring_for(p, backend)
    ops = ladder_ops(Frame.random(ring, p))
    v1 = deformed.solve_structure_parameter(1, ops)
    v2 = deformed.solve_structure_parameter(2, ops)
    assert _same(ring, v1["roots"], [ring.q2pow(1), ring.q2pow(-1)])
    assert _same(ring, v2["roots"], [ring.q2pow(-1)] * 2)
    assert v1["abstract_agrees"] and v2["abstract_agrees"]
    assert v1["degenerate_matrix_test"] == (p == 1)


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_deformed_report(p, backend):
    ring = ring_for(p, backend)
    for seed in range(2):
        rep = deformed.deformed_report(ladder_ops(Frame.random(ring, seed)))
        assert rep.passed, [c.relation for c in rep.failed()]


def test_r_equal_one_fails():
    ring = ExactRing(3)
    ops = ladder_ops(Frame.identity(ring))
    rep = deformed.verify_deformed_algebra(1, ring.one(), ring.zero(), ops)
    assert not rep.passed


def test_abstract_residual_polynomial_p2():
    # variant 1: (q^2 - r)(1 - r q^2); variant 2: (1 - r q^2)^2, up to normalisation
    ring = ExactRing(2)
    q2 = ring.q2pow(1)
    for variant, roots in ((1, [q2, ring.q2pow(-1)]), (2, [ring.q2pow(-1)] * 2)):
        poly = deformed.abstract_residual_poly(variant, ring)
        for r in roots:
            val = sum((c * r**k for k, c in enumerate(poly)), ring.zero())
            assert ring.is_zero(val)


def test_r_commutator():
    ring = ExactRing(2)
    ops = ladder_ops(Frame.identity(ring))
    z = deformed.r_commutator(ops.b, ops.b_bar, ring.one())
    assert (z == ops.b @ ops.b_bar - ops.b_bar @ ops.b).all()
