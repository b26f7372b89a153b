"""Command-line driver: verification suites, state dumps, weights, entangled states.

Every run prints one JSON document on stdout.  Exit status is 0 when all
checks pass, 1 when a verification fails and 2 for bad arguments or inputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from paraosc import __version__
from paraosc import entangle as ent
from paraosc.boson import BosonSector, TruncationError, supercoherent, supersqueeze
from paraosc.deformed import deformed_report
from paraosc.frame import FrameError, build_frame, ladder_ops, verify_oscillator_relations
from paraosc.pgalg import PGPoly, PGVar, theta, thetabar
from paraosc.qscalar import make_ring
from paraosc.report import Check
from paraosc import states

SCHEMA_VERSION = "1.0"


class UsageError(Exception):
    """Bad arguments or input files (exit 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- helpers -----------------------------------------------------------------


def _ring(args):
    if args.p < 1:
        raise UsageError("field 'p': must be >= 1")
    return make_ring(args.p, args.backend)


def _frame(args, ring):
    spec = args.frame
    if spec.startswith("file:"):
        spec = spec[5:]
    elif spec not in ("identity", "random"):
        raise UsageError(f"field 'frame': expected identity, random or file:PATH, got {spec!r}")
    try:
        return build_frame(ring, spec, args.seed)
    except FileNotFoundError:
        raise UsageError(f"field 'frame': no such file {spec!r}") from None
    except FrameError as exc:
        raise UsageError(str(exc)) from None


def _complex(text: str, field: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"field '{field}': not a number: {text!r}") from None


def _levels(text: str, field: str) -> dict:
    """``"0,0=1;1,1=-1"`` -> ``{(0, 0): 1, (1, 1): -1}``."""
    out = {}
    try:
        for part in filter(None, (s.strip() for s in text.split(";"))):
            idx, val = part.split("=")
            out[tuple(int(i) for i in idx.split(","))] = int(val)
    except ValueError:
        raise UsageError(f"field '{field}': expected entries like '0,0=1;1,1=1'") from None
    if not out:
        raise UsageError(f"field '{field}': empty")
    return out


def _config(args) -> dict:
    out = {k: v for k, v in vars(args).items() if k not in ("func",) and v is not None}
    return dict(sorted(out.items()))


def _poly_dump(poly: PGPoly) -> list:
    return poly.to_json()


def _weight_dump(poly: PGPoly) -> list:
    """``{k, l, coeff}`` rows for a weight in ``theta^k thetabar^l``."""
    rows = []
    for term in poly.to_json():
        k = sum(e for _, barred, e in term["exponents"] if not barred)
        l = sum(e for _, barred, e in term["exponents"] if barred)
        rows.append({"k": k, "l": l, "coeff": term["coeff"]})
    return rows


def _state_dump(tensor) -> list:
    return [
        {"basis": [s.basis for s in tensor.slots], "index": list(k), "coeff": tensor.entries[k].to_json()}
        for k in sorted(tensor.entries)
    ]


# -- subcommands --------------------------------------------------------------


def cmd_verify(args) -> tuple[dict, bool]:
    ring = _ring(args)
    frame = _frame(args, ring)
    suites = ["oscillator", "deformed", "resolution"] if args.suite == "all" else [args.suite]
    reports = []
    if "oscillator" in suites or "deformed" in suites:
        ops = ladder_ops(frame)
    for name in suites:
        if name == "oscillator":
            rep = frame.check_invariants()
            rep.extend(verify_oscillator_relations(ops))
            rep.name = "oscillator"
        elif name == "deformed":
            rep = deformed_report(ops)
        else:
            w = states.solve_identity_weight(ring)
            rep = states.resolution_report(ring, w)
            formula = states.identity_weight_formula(ring)
            rep.add(Check("solved weight = closed form", "pass" if w.max_abs_diff(formula) <= ring.tol else "fail",
                          w.max_abs_diff(formula)))
            rep.extend(states.eigen_report(ring))
        reports.append(rep)
    ok = all(r.passed for r in reports)
    return {"suites": [r.to_json() for r in reports], "frame": frame.to_json()}, ok


def cmd_state(args) -> tuple[dict, bool]:
    ring = _ring(args)
    if args.kind == "coherent":
        tensor = states.coherent(ring, theta(0), dual=args.dual)
    elif args.kind == "squeezed":
        tensor = states.squeezed_state(ring, 0, args.dual)
        if ring.p == 2:
            rep = states.squeeze_report(ring, args.dual)
            return {"state": _state_dump(tensor), "report": rep.to_json()}, rep.passed
    else:
        alpha = _complex(args.alpha, "alpha")
        boson = BosonSector(args.M)
        try:
            if args.kind == "supercoherent":
                tensor = supercoherent(alpha, boson, ring, args.boson_dual, args.dual)
            else:
                tensor = supersqueeze(alpha, boson, ring, args.boson_dual, args.dual)
        except TruncationError as exc:
            raise UsageError(f"field 'M': {exc}") from None
    return {"state": _state_dump(tensor)}, True


def cmd_weight(args) -> tuple[dict, bool]:
    ring = _ring(args)
    if args.kind == "identity":
        w = states.solve_identity_weight(ring)
        rep = states.resolution_report(ring, w)
        return {"weight": _weight_dump(w), "report": rep.to_json()}, rep.passed
    terms = _levels(args.target, "target") if args.target else {(i, i): 1 for i in range(ring.p + 1)}
    for idx in terms:
        if len(idx) != 2 or any(not 0 <= n <= ring.p for n in idx):
            raise UsageError(f"field 'target': index {idx} outside two slots of 0..{ring.p}")
    basis = "phi" if args.dual else "psi"
    tgt = ent.target_state(ring, terms, (basis, basis))
    try:
        w = ent.solve_weight(ring, tgt, ent.qudit_factors(args.dual), [thetabar(0), theta(0)],
                             order=[theta(0), thetabar(0)])
    except ent.NoWeightError as exc:
        return {"error": str(exc)}, False
    out = ent.integrate_tensor(ring, w, ent.qudit_factors(args.dual), [theta(0), thetabar(0)])
    ok = ent._tensor_eq(out.tensor, tgt)
    return {"weight": _weight_dump(w), "state": out.to_json()}, ok


def _named_display(args):
    try:
        if args.name == "bell":
            return ent.pbell(args.line, args.sign)
        if args.name == "w":
            return ent.w_state(args.parties, args.j)
        if args.name == "ghz":
            duals = [c == "t" for c in args.duals] if args.duals else None
            return ent.ghz(args.parties, duals)
        if args.name == "qutrit":
            return ent.qutrit_bell(args.block, args.line, args.sign)
        return ent.subspace_entangler(args.dual)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_entangle(args) -> tuple[dict, bool]:
    if args.name == "qudit":
        ring = _ring(args)
        w = ent.qudit_diag_weight(ring)
        st = ent.integrate_tensor(ring, w, ent.qudit_factors(args.dual), [theta(0), thetabar(0)])
        basis = "phi" if args.dual else "psi"
        tgt = ent.target_state(ring, {(i, i): 1 for i in range(ring.p + 1)}, (basis, basis))
        ok = not st.partially_integrated and ent._tensor_eq(st.tensor, tgt)
        return {"weight": _weight_dump(w), "state": st.to_json()}, ok
    if args.name == "custom":
        return _custom(args)
    disp = _named_display(args)
    if args.p is not None and args.p != disp.p:
        raise UsageError(f"field 'p': {disp.key} is defined at p = {disp.p}")
    args.p = disp.p
    ring = _ring(args)
    frame = _frame(args, ring) if args.frame != "identity" else None
    res = ent.make_named_state(ring, disp)
    frames = [frame] * len(disp.factors) if frame is not None else None
    out = res.to_json(frames)
    out["target"] = {"index": [list(k) for k in sorted(disp.target)], "bases": list(disp.target_bases)}
    return out, not res.state.partially_integrated


def _parse_var(v, field):
    if isinstance(v, list) and len(v) == 2 and isinstance(v[0], int) and isinstance(v[1], bool):
        return PGVar(v[0], v[1])
    raise UsageError(f"field '{field}': a variable is [index, barred]")


def _custom(args) -> tuple[dict, bool]:
    if not args.spec:
        raise UsageError("field 'spec': custom entanglement needs --spec FILE")
    try:
        with open(args.spec) as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"field 'spec': {exc}") from None
    args.p = spec.get("p", args.p or 1)
    ring = _ring(args)
    try:
        factors = [
            ent.CoherentFactor(_parse_var(f["var"], "factors.var"), f.get("scale", 1), f.get("dual", False))
            for f in spec["factors"]
        ]
        order = [_parse_var(v, "order") for v in spec["order"]]
    except KeyError as exc:
        raise UsageError(f"field {exc.args[0]!r}: missing") from None
    if "weight" in spec:
        w = PGPoly(ring)
        for i, term in enumerate(spec["weight"]):
            c = term.get("coeff", 1)
            c = ring.gaussian(*c) if isinstance(c, list) else ring.scalar(c)
            mono = [(_parse_var(v, f"weight[{i}]"), e) for v, e in term.get("factors", [])]
            w = w + PGPoly.monomial(ring, mono, c)
        source = "given"
    elif "target" in spec:
        tgt = ent.target_state(ring, _levels(spec["target"], "target"), [f.basis for f in factors])
        try:
            w = ent.solve_weight(ring, tgt, factors, list(reversed(order)), order)
        except ent.NoWeightError as exc:
            return {"error": str(exc)}, False
        source = "solved"
    else:
        raise UsageError("field 'weight': give a weight or a target")
    st = ent.integrate_tensor(ring, w, factors, order)
    return {"weight_source": source, "weight": _poly_dump(w), "state": st.to_json()}, True


def _t_grid(text: str) -> list:
    try:
        if ":" in text:
            a, b, n = text.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            a, b = float(a), float(b)
            return [a + (b - a) * k / max(n - 1, 1) for k in range(n)]
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError("field 't': expected start:stop:count or a comma list") from None


def cmd_evolve(args) -> tuple[dict, bool]:
    ring = _ring(args)
    try:
        with open(args.spectrum) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"field 'spectrum': {exc}") from None
    energies = data.get("energies") if isinstance(data, dict) else data
    if not isinstance(energies, list) or not all(isinstance(e, (int, float)) for e in energies):
        raise UsageError("field 'energies': expected a list of numbers")
    if len(energies) != ring.p + 1:
        raise UsageError(f"field 'energies': need {ring.p + 1} levels, got {len(energies)}")
    spec = states.Spectrum(tuple(energies))
    stable, c = states.stability_check(spec)
    out = {"stable": stable, "c": None if c is None else float(c)}
    if ring.exact:
        st = states.coherent(ring) if args.state == "coherent" else states.squeezed_state(ring)
        formal = states.formal_evolution(st, spec)
        out["formal"] = [
            {"index": list(k), "phase": str(ph), "coeff": v.to_json()} for k, (ph, v) in sorted(formal.items())
        ]
        return out, True
    ts = _t_grid(args.t)
    rows = []
    ok = True
    for t in ts:
        if args.state == "coherent":
            if not stable:
                res = None
            else:
                res = states.coherent_evolution_residual(ring, spec, t, args.dual)
        else:
            if ring.p != 2:
                raise UsageError("field 'p': the squeezed evolution is the three-level case (p = 2)")
            res = states.squeezed_evolution_residual(ring, spec, t, args.dual)
        rows.append({"t": t, "factorization_residual": res})
        ok = ok and res is not None and res <= 1e-10
    out["trajectory"] = rows
    return out, ok


# -- entry point --------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--p", type=int, default=None, help="truncation order (levels 0..p)")
    p.add_argument("--backend", choices=("exact", "float"), default="exact")
    p.add_argument("--frame", default="identity", help="identity, random or file:PATH")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dual", action="store_true", help="use the tilde (phi-basis) family")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="paraosc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"paraosc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=("all", "oscillator", "deformed", "resolution"), default="all")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("state", parents=[common], help="dump a state")
    s.add_argument("kind", choices=("coherent", "squeezed", "supercoherent", "supersqueezed"))
    s.add_argument("--alpha", default="1", help="boson amplitude (or squeeze parameter z)")
    s.add_argument("--M", type=int, default=24, help="boson truncation")
    s.add_argument("--boson-dual", action="store_true")
    s.set_defaults(func=cmd_state)

    w = sub.add_parser("weight", parents=[common], help="solve a weight")
    w.add_argument("kind", choices=("identity", "target"))
    w.add_argument("--target", help="two-slot target such as '0,0=1;1,1=1' (default: diagonal)")
    w.set_defaults(func=cmd_weight)

    e = sub.add_parser("entangle", parents=[common], help="synthesize an entangled state")
    e.add_argument("name", choices=("bell", "w", "ghz", "qutrit", "subspace", "qudit", "custom"))
    e.add_argument("--parties", type=int, default=2)
    e.add_argument("--j", type=int, default=1, help="W variant (first j-1 slots dual)")
    e.add_argument("--line", type=int, default=1)
    e.add_argument("--block", type=int, default=1)
    e.add_argument("--sign", type=int, choices=(1, -1), default=1)
    e.add_argument("--duals", help="GHZ dual pattern such as 'tpp' (t = tilde)")
    e.add_argument("--spec", help="JSON file for a custom construction")
    e.set_defaults(func=cmd_entangle)

    ev = sub.add_parser("evolve", parents=[common], help="time evolution under a spectrum")
    ev.add_argument("--spectrum", required=True, help="JSON file with the level energies")
    ev.add_argument("--t", default="0:1:10", help="start:stop:count or a comma list")
    ev.add_argument("--state", choices=("coherent", "squeezed"), default="coherent")
    ev.set_defaults(func=cmd_evolve)
    return parser


def _emit(doc: dict):
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def run(argv=None) -> int:
    doc = {"schema_version": SCHEMA_VERSION}
    try:
        args = build_parser().parse_args(argv)
        doc["command"] = args.command
        if args.p is None and not (args.command == "entangle" and args.name not in ("qudit",)):
            args.p = 2
        body, ok = args.func(args)
        doc["config"] = _config(args)
    except UsageError as exc:
        doc.update({"passed": False, "error": str(exc)})
        _emit(doc)
        return 2
    doc.update(body)
    doc["passed"] = ok
    _emit(doc)
    return 0 if ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
