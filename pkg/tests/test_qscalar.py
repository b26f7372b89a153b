import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paraosc.qscalar import DeformParams, ExactRing, FloatRing, QScalar, make_ring


def q_of(p):
    return cmath.exp(1j * cmath.pi / (p + 1))


def bracket_ref(p, n):
    q = q_of(p)
    return (q ** (2 * n) - 1) / (q**2 - 1)


def qq_ref(p, n):
    q = q_of(p)
    return (q**n - q ** (-n)) / (q - 1 / q)


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_brackets_match_complex_formulas(p):
    ring = ExactRing(p)
    for n in range(p + 2):
        assert abs(ring.to_complex(ring.bracket(n)) - bracket_ref(p, n)) < 1e-12
        assert abs(ring.to_complex(ring.qq_bracket(n)) - qq_ref(p, n)) < 1e-12


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_bracket_vanishes_at_p_plus_one(p):
    ring = ExactRing(p)
    assert ring.is_zero(ring.bracket(p + 1))
    for n in range(1, p + 1):
        assert not ring.is_zero(ring.bracket(n))


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_square_roots_square_back(p):
    ring = ExactRing(p)
    for n in range(1, p + 1):
        s = ring.sqrt_bracket(n)
        assert s * s == ring.bracket(n)
        t = ring.sqrt_qq_bracket(n)
        assert t * t == ring.qq_bracket(n)
        f = ring.sqrt_factorial(n)
        assert f * f == ring.factorial(n)


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_root_is_principal_branch(p):
    ring = ExactRing(p)
    for n in range(1, p + 1):
        z = cmath.sqrt(bracket_ref(p, n))
        assert abs(ring.to_complex(ring.sqrt_bracket(n)) - z) < 1e-12


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_conjugation_matches_complex(p):
    ring = ExactRing(p)
    for n in range(1, p + 1):
        for x in (ring.sqrt_bracket(n), ring.sqrt_qq_bracket(n), ring.root(3) * ring.sqrt_bracket(n)):
            assert abs(ring.to_complex(ring.conj(x)) - ring.to_complex(x).conjugate()) < 1e-12
    # [[n]] is real, so its root is self-conjugate
    for n in range(1, p + 1):
        s = ring.sqrt_qq_bracket(n)
        assert ring.conj(s) == s


def test_q_and_i_live_in_the_field():
    ring = ExactRing(3)
    assert ring.qpow(8) == ring.one()
    assert ring.imag_unit() * ring.imag_unit() == ring.scalar(-1)
    assert ring.q2pow(4) == ring.one()


def _elements(p):
    ring = ExactRing(p)
    gens = [ring.root(k) for k in range(ring.params.order)] + [ring.sqrt_bracket(n) for n in range(1, p + 1)]
    rat = st.fractions(min_value=-3, max_value=3, max_denominator=4)
    term = st.tuples(rat, st.sampled_from(gens), st.sampled_from(gens))
    return st.lists(term, min_size=1, max_size=3).map(
        lambda ts: sum((ring.scalar(c) * a * b for c, a, b in ts), ring.zero())
    )


P = 3
R = ExactRing(P)
elems = _elements(P)


@settings(max_examples=60, deadline=None)
@given(elems, elems, elems)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == R.zero()


@settings(max_examples=60, deadline=None)
@given(elems, elems)
def test_evaluation_is_a_homomorphism(a, b):
    za, zb = R.to_complex(a), R.to_complex(b)
    assert abs(R.to_complex(a * b) - za * zb) < 1e-9
    assert abs(R.to_complex(a + b) - (za + zb)) < 1e-9
    assert abs(R.to_complex(R.conj(a)) - za.conjugate()) < 1e-9


@settings(max_examples=40, deadline=None)
@given(elems)
def test_inverse(a):
    if R.is_zero(a):
        with pytest.raises(ZeroDivisionError):
            R.inv(a)
    else:
        assert a * R.inv(a) == R.one()


@settings(max_examples=30, deadline=None)
@given(elems)
def test_json_round_trip(a):
    assert QScalar.from_json(R.params, a.to_json()) == a


def test_mixed_parameter_sets_rejected():
    with pytest.raises(ValueError):
        ExactRing(2).one() + ExactRing(3).one()


def test_scalar_lifts():
    ring = ExactRing(2)
    assert ring.scalar(Fraction(1, 2)) * 2 == ring.one()
    assert ring.scalar(1j) == ring.imag_unit()
    assert ring.gaussian(1, -1) == ring.one() - ring.imag_unit()


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_float_ring_agrees(p):
    ex, fl = ExactRing(p), FloatRing(p)
    for name in ("bracket", "qq_bracket", "sqrt_bracket", "sqrt_qq_bracket", "factorial", "sqrt_factorial"):
        for n in range(1, p + 1):
            assert abs(ex.to_complex(getattr(ex, name)(n)) - getattr(fl, name)(n)) < 1e-12


def test_make_ring():
    assert make_ring(2).exact
    assert not make_ring(2, "float").exact
    with pytest.raises(ValueError):
        make_ring(2, "quad")


def test_params_cached():
    assert DeformParams.of(4) is DeformParams.of(4)
