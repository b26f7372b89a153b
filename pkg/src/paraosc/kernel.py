"""Select the arithmetic kernel at import time.

The compiled extension is used when it has been built; set
``PARAOSC_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

if os.environ.get("PARAOSC_PURE_PYTHON"):
    from paraosc import _kernel_py as _impl
else:
    try:
        from paraosc import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        from paraosc import _kernel_py as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION
normalize = _impl.normalize
is_zero = _impl.is_zero
cyc_add = _impl.cyc_add
cyc_neg = _impl.cyc_neg
cyc_mul = _impl.cyc_mul
qs_add = _impl.qs_add
qs_mul = _impl.qs_mul

__all__ = [
    "IMPLEMENTATION",
    "normalize",
    "is_zero",
    "cyc_add",
    "cyc_neg",
    "cyc_mul",
    "qs_add",
    "qs_mul",
]
