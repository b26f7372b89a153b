"""Compare the compiled kernel against the pure-Python fallback.

Two measurements:
  * the raw scalar multiply/add on random field elements, both modules
    imported side by side;
  * an end-to-end workload (oscillator relations on a random frame and the
    qudit weight solve) run in a subprocess per kernel, since the kernel is
    chosen at import.

    python3 benchmarks/bench_kernel.py [--p 4] [--repeat 3]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit

WORKLOAD = r"""
import json, time
from paraosc import kernel
from paraosc.qscalar import ExactRing
from paraosc.frame import Frame, ladder_ops, verify_oscillator_relations
from paraosc import entangle
p = {p}
ring = ExactRing(p)
t0 = time.perf_counter()
for seed in range(3):
    assert verify_oscillator_relations(ladder_ops(Frame.random(ring, seed))).passed
t1 = time.perf_counter()
entangle.qudit_solve(ring)
t2 = time.perf_counter()
print(json.dumps({{"impl": kernel.IMPLEMENTATION, "oscillator": t1 - t0, "qudit_solve": t2 - t1}}))
"""


def _random_scalars(ring, n, rng):
    out = []
    for _ in range(n):
        x = ring.zero()
        for _ in range(3):
            x = x + ring.root(rng.randrange(ring.params.order)) * ring.sqrt_bracket(rng.randrange(1, ring.p + 1))
        out.append(x)
    return out


def micro(p, repeat):
    from paraosc import _kernel_py
    from paraosc.qscalar import ExactRing

    try:
        from paraosc import _kernel
    except ImportError:
        _kernel = None
    ring = ExactRing(p)
    xs = _random_scalars(ring, 50, random.Random(0))
    pairs = [(a, b) for a in xs for b in xs[:10]]
    params = ring.params
    red = params._red
    masks = params._mask_factor
    rows = {}
    mods = [("python", _kernel_py)] + ([("cython", _kernel)] if _kernel else [])
    for name, mod in mods:
        mul = min(timeit.repeat(lambda: [mod.qs_mul(a.terms, b.terms, red, masks) for a, b in pairs], number=1, repeat=repeat))
        add = min(timeit.repeat(lambda: [mod.qs_add(a.terms, b.terms) for a, b in pairs], number=1, repeat=repeat))
        rows[name] = {"qs_mul": mul, "qs_add": add}
    return rows


def end_to_end(p):
    rows = {}
    for name, env in (("python", {"PARAOSC_PURE_PYTHON": "1"}), ("default", {})):
        full = {k: v for k, v in os.environ.items() if k != "PARAOSC_PURE_PYTHON"}
        full.update(env)
        res = subprocess.run([sys.executable, "-c", WORKLOAD.format(p=p)], env=full, capture_output=True, text=True, check=True)
        rows[name] = json.loads(res.stdout)
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    m = micro(args.p, args.repeat)
    print(f"scalar kernel, p={args.p}, 500 products")
    for name, r in m.items():
        print(f"  {name:8s} mul {r['qs_mul'] * 1e3:8.2f} ms   add {r['qs_add'] * 1e3:8.2f} ms")
    if "cython" in m:
        print(f"  speedup  mul {m['python']['qs_mul'] / m['cython']['qs_mul']:.2f}x   "
              f"add {m['python']['qs_add'] / m['cython']['qs_add']:.2f}x")
    e = end_to_end(args.p)
    print(f"end to end, p={args.p}")
    for name, r in e.items():
        print(f"  {r['impl']:8s} oscillator x3 {r['oscillator']:.3f} s   qudit solve {r['qudit_solve']:.3f} s")


if __name__ == "__main__":
    main()
