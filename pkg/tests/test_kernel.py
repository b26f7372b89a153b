import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paraosc import _kernel_py, kernel
from paraosc.qscalar import ExactRing

compiled = pytest.importorskip("paraosc._kernel", reason="compiled kernel not built")

R = ExactRing(4)
GENS = [R.root(k) for k in range(R.params.order)] + [R.sqrt_bracket(n) for n in range(1, 5)]
rat = st.fractions(min_value=-5, max_value=5, max_denominator=6)
elem = st.lists(st.tuples(rat, st.sampled_from(GENS), st.sampled_from(GENS)), min_size=1, max_size=4).map(
    lambda ts: sum((R.scalar(c) * a * b for c, a, b in ts), R.zero())
)


@settings(max_examples=80, deadline=None)
@given(elem, elem)
def test_mul_and_add_agree(a, b):
    red, masks = R.params._red, R.params._mask_factor
    assert compiled.qs_mul(a.terms, b.terms, red, masks) == _kernel_py.qs_mul(a.terms, b.terms, red, masks)
    assert compiled.qs_add(a.terms, b.terms) == _kernel_py.qs_add(a.terms, b.terms)


@settings(max_examples=80, deadline=None)
@given(elem)
def test_cyclotomic_ops_agree(a):
    for c in a.terms.values():
        assert compiled.cyc_neg(c) == _kernel_py.cyc_neg(c)
        assert compiled.is_zero(c) == _kernel_py.is_zero(c)
        assert compiled.cyc_mul(c, c, R.params._red) == _kernel_py.cyc_mul(c, c, R.params._red)


def test_default_selection_prefers_compiled():
    if os.environ.get("PARAOSC_PURE_PYTHON"):
        assert kernel.IMPLEMENTATION == "python"
    else:
        assert kernel.IMPLEMENTATION == "cython"


def test_env_var_forces_fallback():
    env = dict(os.environ, PARAOSC_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from paraosc import kernel; print(kernel.IMPLEMENTATION)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
