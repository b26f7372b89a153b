import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paraosc.pgalg import PGPoly, PGVar, berezin, move_through_level, theta, thetabar
from paraosc.qscalar import ExactRing, FloatRing

P = 2
R = ExactRing(P)
VARS = [theta(0), thetabar(0), theta(1), thetabar(1)]


def word_product(ring, words):
    """Oracle: multiply words by concatenation, then bubble-sort each word into
    ascending generator order; every swap of an adjacent ``late, early`` pair
    costs ``q^-2``.  Powers above ``p`` vanish."""
    out = {}
    for w, c in words:
        w = list(w)
        k = 0
        changed = True
        while changed:
            changed = False
            for i in range(len(w) - 1):
                if w[i] > w[i + 1]:
                    w[i], w[i + 1] = w[i + 1], w[i]
                    k -= 1
                    changed = True
        counts = {}
        for g in w:
            counts[g] = counts.get(g, 0) + 1
        if any(e > ring.p for e in counts.values()):
            continue
        mono = tuple(sorted(counts.items()))
        out[mono] = out.get(mono, ring.zero()) + c * ring.q2pow(k)
    return PGPoly(ring, out)


def word_poly(ring, words):
    return word_product(ring, [(w, ring.scalar(c)) for w, c in words])


word = st.lists(st.sampled_from(VARS), max_size=4)
poly_words = st.lists(st.tuples(word, st.integers(-3, 3)), min_size=1, max_size=3)


@settings(max_examples=80, deadline=None)
@given(poly_words, poly_words)
def test_product_matches_word_sorting_oracle(a, b):
    pa, pb = word_poly(R, a), word_poly(R, b)
    expect = word_product(R, [(wa + wb, R.scalar(ca * cb)) for wa, ca in a for wb, cb in b])
    assert pa * pb == expect


@settings(max_examples=60, deadline=None)
@given(poly_words, poly_words, poly_words)
def test_associative(a, b, c):
    pa, pb, pc = (word_poly(R, x) for x in (a, b, c))
    assert (pa * pb) * pc == pa * (pb * pc)
    assert pa * (pb + pc) == pa * pb + pa * pc


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_nilpotency_and_exchange(p):
    ring = ExactRing(p)
    t, tb = PGPoly.var(ring, theta()), PGPoly.var(ring, thetabar())
    tp = PGPoly.const(ring)
    for _ in range(p + 1):
        tp = tp * t
    assert tp.is_zero()
    assert t * tb == tb * t * ring.q2pow(1)


def test_grassmann_at_p1():
    ring = ExactRing(1)
    a, b = PGPoly.var(ring, theta(1)), PGPoly.var(ring, theta(2))
    assert a * b == -(b * a)


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_berezin(p):
    ring = ExactRing(p)
    for n in range(p + 1):
        val = berezin(PGPoly.var(ring, theta(), n), theta())
        expect = PGPoly.const(ring, ring.sqrt_factorial(p)) if n == p else PGPoly(ring)
        assert val == expect


def test_berezin_moves_variable_to_front():
    ring = ExactRing(2)
    # int dtheta (thetabar theta^2) = q^-4 * int dtheta theta^2 thetabar
    poly = PGPoly.var(ring, thetabar()) * PGPoly.var(ring, theta(), 2)
    lead = PGPoly.var(ring, theta(), 2) * PGPoly.var(ring, thetabar())
    assert berezin(poly, theta()) == berezin(lead, theta()) * ring.q2pow(-2)
    assert berezin(lead, theta()) == PGPoly.var(ring, thetabar(), 1, ring.sqrt_factorial(2))


def test_move_through_level():
    ring = ExactRing(3)
    mono = ((theta(), 2),)
    assert move_through_level(mono, 1, "ket", ring) == ring.q2pow(-2)
    assert move_through_level(mono, 1, "bra", ring) == ring.q2pow(2)
    with pytest.raises(ValueError):
        move_through_level(mono, 1, "side", ring)


def test_float_conversion():
    poly = PGPoly.var(R, theta(), 1, R.sqrt_bracket(2)) + 1
    fl = poly.to_complex_poly(FloatRing(P))
    assert abs(fl.coeff(((theta(), 1),)) - R.to_complex(R.sqrt_bracket(2))) < 1e-12


def test_pass_left_and_scale_var():
    ring = ExactRing(2)
    t = PGPoly.var(ring, theta())
    assert t.pass_left(1) == t * ring.q2pow(1) or t.pass_left(1) == t * ring.q2pow(-1)
    assert PGPoly.var(ring, theta(), 2).scale_var(theta(), 3) == PGPoly.var(ring, theta(), 2, 9)


def test_variables_and_json():
    ring = ExactRing(1)
    poly = PGPoly.monomial(ring, [(theta(2), 1), (thetabar(1), 1)], 2)
    assert poly.variables() == {theta(2), thetabar(1)}
    js = poly.to_json()
    assert js[0]["exponents"] == [[1, True, 1], [2, False, 1]]
    assert str(PGVar(3, True)) == "thetabar3"
