"""Command-line front end.

Every command prints a JSON report on stdout. ``build`` and ``simulate``
write a state file to ``--out``; the other commands write the report there.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bell, diagnostics, optics, states
from .files import (
    file_digest,
    make_report,
    read_scheme,
    read_state,
    write_state,
)
from .linalg import (
    PSD_TOL,
    Bipartition,
    InvalidStateError,
    hermitian_spectrum,
    n_qubits_of,
    projector,
    purity,
    tensor,
    trace_distance,
)

FAMILIES = ("smolin", "abls", "dur_cirac", "dur", "llk", "chi3", "upb", "ghz")


class CliError(Exception):
    """User-facing failure; ``invariant`` names what was violated."""

    def __init__(self, invariant: str, message: str):
        super().__init__(message)
        self.invariant = invariant


def parse_number(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError("params", f"cannot parse number {text!r}") from exc


def parse_params(items: list[str]) -> dict[str, str]:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise CliError("params", f"expected key=value, got {item!r}")
        out[key] = val
    return out


def parse_cut(n: int, text: str) -> Bipartition:
    try:
        qubits = [int(q) for q in text.split(",") if q.strip()]
        return Bipartition.from_qubits(n, qubits)
    except ValueError as exc:
        raise CliError("cut", f"invalid cut {text!r} for {n} qubits: {exc}") from exc


def _take(params: dict, allowed: set[str], family: str):
    extra = set(params) - allowed
    if extra:
        raise CliError("params", f"unknown parameter(s) for {family}: {', '.join(sorted(extra))}")


def build_family(family: str, params: dict[str, str]) -> tuple[np.ndarray, list[str], dict]:
    """Construct a named family. Returns the state, advisory notes and the resolved parameters."""
    notes: list[str] = []
    num = {k: parse_number(v) for k, v in params.items() if k != "sign"}
    try:
        if family == "smolin":
            _take(num, set(), family)
            return states.smolin_bell(), notes, {}
        if family == "upb":
            _take(num, set(), family)
            return states.upb_state(), notes, {}
        if family == "ghz":
            _take(params, {"n", "sign"}, family)
            n = int(num.get("n", 3))
            sign = params.get("sign", "+")
            return projector(states.ghz(n, sign)), notes, {"n": n, "sign": sign}
        if family == "abls":
            _take(num, {"a", "b", "c"}, family)
            p = states.ABLSParams(num.get("a", 2.0), num.get("b", 3.0), num.get("c", 5.0))
            if not p.flag_entangled:
                notes.append("abc = 1: separable boundary of the ABLS family")
            return states.abls(p), notes, {"a": p.a, "b": p.b, "c": p.c, "flag_entangled": p.flag_entangled}
        if family == "dur":
            _take(num, {"n", "x"}, family)
            n = int(num.get("n", 4))
            x = num.get("x", 1 / (n + 1))
            if x > 1 / (n + 1) + 1e-15:
                notes.append(f"x > 1/(N+1) = {1 / (n + 1):.6g}: entangled but outside the bound-entangled range")
            return states.dur_state(n, x), notes, {"n": n, "x": x}
        if family == "llk":
            _take(num, {"n", "x"}, family)
            n = int(num.get("n", 4))
            x = num.get("x", 1 / (n - 1))
            if x > 1 / (n - 1) + 1e-15:
                notes.append(f"x > 1/(N-1) = {1 / (n - 1):.6g}: outside the bound-entangled range")
            return states.llk_state(n, x), notes, {"n": n, "x": x}
        if family == "chi3":
            _take(num, {"x"}, family)
            x = num.get("x", 1 / 3)
            if x > 1 / 3 + 1e-15:
                notes.append("x > 1/3: outside the bound-entangled range 0 < x <= 1/3")
            return states.chi3(x), notes, {"x": x}
        if family == "dur_cirac":
            spec = dc_spec_from_params(num)
            return states.dur_cirac(spec), notes, spec.to_dict()
    except ValueError as exc:
        raise CliError("params", str(exc)) from exc
    raise CliError("family", f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def dc_spec_from_params(num: dict[str, float]) -> states.DurCiracSpec:
    """``n=3 l0p=1/3 l0m=0 lambda_1=1/6 lambda_3=1/6``."""
    lambdas = {}
    for k, v in num.items():
        if k.startswith("lambda_"):
            lambdas[int(k.removeprefix("lambda_"))] = v
        elif k not in ("n", "l0p", "l0m"):
            raise CliError("params", f"unknown parameter for dur_cirac: {k}")
    spec = states.DurCiracSpec(int(num.get("n", 3)), num.get("l0p", 1.0), num.get("l0m", 0.0), lambdas)
    if not spec.is_normalized():
        raise CliError("normalization", f"Dur-Cirac coefficients sum to {spec.total():.12g}, not 1")
    return spec


def builtin_scheme(name: str, params: dict[str, str]) -> optics.MixingScheme:
    num = {k: parse_number(v) for k, v in params.items() if k != "sign"}
    try:
        if name == "abls":
            return optics.scheme_abls(num.get("a", 2.0), num.get("b", 3.0), num.get("c", 5.0))
        if name == "upb":
            return optics.scheme_upb()
        if name == "smolin":
            return optics.scheme_smolin()
        if name == "dur":
            n = int(num.get("n", 4))
            return optics.scheme_dur_cirac(states.dur_spec(n, num.get("x", 1 / (n + 1))))
        if name == "llk":
            n = int(num.get("n", 4))
            return optics.scheme_dur_cirac(states.llk_spec(n, num.get("x", 1 / (n - 1))))
        if name == "chi3":
            return optics.scheme_dur_cirac(states.chi3_spec(num.get("x", 1 / 3)))
        if name == "dur_cirac":
            return optics.scheme_dur_cirac(dc_spec_from_params(num))
        if name == "ghz":
            n = int(num.get("n", 3))
            return optics.scheme_ghz_mixture(n, [(0, params.get("sign", "+"), 1.0)])
    except ValueError as exc:
        raise CliError("params", str(exc)) from exc
    raise CliError("scheme", f"unknown builtin scheme {name!r}")


def _load_state(path: str) -> tuple[np.ndarray, dict]:
    try:
        return read_state(path)
    except FileNotFoundError as exc:
        raise CliError("input", f"no such file: {path}") from exc
    except InvalidStateError as exc:
        raise CliError(exc.invariant, str(exc)) from exc


def _state_summary(rho: np.ndarray) -> dict:
    ev = hermitian_spectrum(rho)
    return {
        "n_qubits": n_qubits_of(rho),
        "trace": float(np.trace(rho).real),
        "rank": int(np.sum(ev > 1e-10)),
        "purity": purity(rho),
    }


# -- commands ------------------------------------------------------------------


def cmd_build(args) -> dict:
    params = parse_params(args.params)
    rho, notes, resolved = build_family(args.family, params)
    if args.out:
        write_state(args.out, rho, family=args.family)
    results = {**_state_summary(rho), "params": resolved, "notes": notes}
    if args.out:
        results["written"] = str(args.out)
    return make_report("build", {"family": args.family, "params": params}, results, None, None)


def diagnose_state(rho: np.ndarray, family: str | None, tol: float) -> tuple[dict, str]:
    n = n_qubits_of(rho)
    if n < 2:
        raise CliError("shape", "diagnostics need at least two qubits")
    try:
        verdict = diagnostics.certify_bound_entangled(rho, family_hint=family, tol=tol)
    except ValueError as exc:
        raise CliError("shape", str(exc)) from exc
    results = {
        **_state_summary(rho),
        "cuts": [r.to_dict() for r in verdict.profile],
        "pt_value": diagnostics.pt_inequality_value(rho),
        "pt_violation": diagnostics.pt_inequality_value(rho) > 1,
        "dc_spec": diagnostics.project_to_dc(rho).to_dict(),
        "certificate": verdict.to_dict(),
    }
    return results, verdict.verdict.value


def cmd_diagnose(args) -> dict:
    rho, data = _load_state(args.input)
    family = args.family or data.get("family")
    results, verdict = diagnose_state(rho, family, args.tol)
    inputs = {"file": str(args.input), "digest": file_digest(args.input), "family_hint": family, "tol": args.tol}
    return make_report("diagnose", inputs, results, verdict, None)


def cmd_simulate(args) -> dict:
    inputs: dict = {"seed": args.seed}
    if args.scheme:
        try:
            scheme = read_scheme(args.scheme)
        except FileNotFoundError as exc:
            raise CliError("input", f"no such file: {args.scheme}") from exc
        except (ValueError, json.JSONDecodeError) as exc:
            raise CliError("scheme", str(exc)) from exc
        inputs.update(scheme=str(args.scheme), digest=file_digest(args.scheme))
    elif args.builtin:
        params = parse_params(args.params)
        scheme = builtin_scheme(args.builtin, params)
        inputs.update(builtin=args.builtin, params=params)
    else:
        raise CliError("scheme", "give --scheme PATH or --builtin NAME")

    try:
        rho = optics.assemble_mixture(scheme)
    except optics.SchemeError as exc:
        invariant = "probabilities" if "probabilities" in str(exc) else "scheme"
        raise CliError(invariant, str(exc)) from exc
    results: dict = {**_state_summary(rho), "branches": len(scheme.branches)}
    if args.out:
        write_state(args.out, rho, family=args.builtin)
        results["written"] = str(args.out)

    target = None
    if args.target:
        target, _ = _load_state(args.target)
        inputs.update(target=str(args.target), target_digest=file_digest(args.target))
    elif args.builtin and args.builtin != "dur_cirac":
        target, _, _ = build_family(args.builtin, parse_params(args.params))
    if target is not None:
        if target.shape != rho.shape:
            raise CliError("dimension", f"target has shape {target.shape}, scheme output {rho.shape}")
        results["target_distance"] = trace_distance(rho, target)

    if args.shots:
        try:
            sample = optics.sample_mixture(scheme, args.shots, args.seed)
        except optics.SchemeError as exc:
            raise CliError("sampling", str(exc)) from exc
        results["sampling"] = {
            "shots": sample.shots,
            "accepted": sample.accepted,
            "counts": sample.counts,
            "empirical_distance": sample.distance,
        }
    return make_report("simulate", inputs, results, None, args.seed)


def cmd_noise_sweep(args) -> dict:
    rho, _ = _load_state(args.input)
    n = n_qubits_of(rho)
    cut = parse_cut(n, args.cut)
    if not 0 <= args.eps_max <= 1:
        raise CliError("params", "eps-max must lie in [0, 1]")
    grid = np.linspace(0, args.eps_max, args.steps)
    table = [{"eps": e, "negativity": v} for e, v in diagnostics.negativity_sweep(rho, cut, grid)]
    results: dict = {"cut": list(cut.group_a), "table": table}
    verdict = None
    if args.threshold:
        try:
            th = diagnostics.noise_threshold(rho, cut, args.width, args.tol)
        except ValueError as exc:
            raise CliError("ppt", str(exc)) from exc
        results["threshold"] = {"eps": th.eps, "lower": th.lower, "upper": th.upper, "width": th.width,
                                "iterations": th.iterations}
        verdict = "threshold_found"
    inputs = {"file": str(args.input), "digest": file_digest(args.input), "cut": args.cut,
              "eps_max": args.eps_max, "steps": args.steps, "threshold": args.threshold}
    return make_report("noise-sweep", inputs, results, verdict, None)


def cmd_bell(args) -> dict:
    rho, _ = _load_state(args.input)
    n = n_qubits_of(rho)
    if n > bell.MAX_BELL_QUBITS or n < 2:
        raise CliError("size", f"Bell search supports 2..{bell.MAX_BELL_QUBITS} qubits, got {n}")
    res = bell.mk_optimize(rho, restarts=args.restarts, iterations=args.iters, seed=args.seed)
    results = {
        "best_value": res.best_value,
        "lhv_bound": 1.0,
        "quantum_bound": bell.mk_quantum_bound(n),
        "violation": res.violation,
        "settings": res.settings.to_dict(),
        "restart_values": list(res.restart_values),
    }
    inputs = {"file": str(args.input), "digest": file_digest(args.input), "restarts": args.restarts,
              "iters": args.iters}
    return make_report("bell", inputs, results, "violation" if res.violation else "no_violation", args.seed)


def cmd_upb_check(args) -> dict:
    basis = states.upb_basis()
    if args.drop:
        if not 1 <= args.drop <= len(basis):
            raise CliError("params", f"--drop must be in 1..{len(basis)}")
        basis = [b for i, b in enumerate(basis, start=1) if i != args.drop]
    gram = np.array([[np.vdot(a, b) for b in basis] for a in basis])
    witness = diagnostics.find_orthogonal_product(basis, args.tol)
    rho = states.upb_state()
    decomposed = sum(projector(p) for p in states.upb_phi_decomposition()) / 4
    results = {
        "basis_size": len(basis),
        "unextendible": witness is None,
        "gram_identity_error": float(np.max(np.abs(gram - np.eye(len(basis))))),
        "decomposition_residual": float(np.max(np.abs(rho - decomposed))),
        "all_cuts_ppt": diagnostics.ppt_profile(rho, args.tol).all_ppt,
    }
    if witness is not None:
        w = tensor(*witness)
        results["witness_factors"] = [{"re": f.real.tolist(), "im": f.imag.tolist()} for f in witness]
        results["witness_max_overlap"] = float(max(abs(np.vdot(w, b)) for b in basis))
    verdict = "unextendible" if witness is None else "extendible"
    return make_report("upb-check", {"drop": args.drop}, results, verdict, None)


COMMANDS = {
    "build": cmd_build,
    "diagnose": cmd_diagnose,
    "simulate": cmd_simulate,
    "noise-sweep": cmd_noise_sweep,
    "bell": cmd_bell,
    "upb-check": cmd_upb_check,
}


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="output path (state file for build/simulate, report otherwise)")
    common.add_argument("--seed", type=int, default=0, help="master RNG seed")
    common.add_argument("--tol", type=float, default=PSD_TOL, help="PPT tolerance on eigenvalues")

    parser = argparse.ArgumentParser(prog="boundent", description="Multi-qubit bound-entanglement toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="construct a state family")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("params", nargs="*", metavar="key=value")

    p = sub.add_parser("diagnose", parents=[common], help="PPT profile, negativities and verdict")
    p.add_argument("input")
    p.add_argument("--all-cuts", action="store_true", help="accepted for compatibility; all cuts are always listed")
    p.add_argument("--family", help="family hint (e.g. upb)")

    p = sub.add_parser("simulate", parents=[common], help="assemble an optical mixing scheme")
    p.add_argument("--scheme", help="scheme JSON file")
    p.add_argument("--builtin", choices=FAMILIES)
    p.add_argument("--target", help="state file to compare against")
    p.add_argument("--shots", type=int)
    p.add_argument("params", nargs="*", metavar="key=value")

    p = sub.add_parser("noise-sweep", parents=[common], help="negativity under depolarizing noise")
    p.add_argument("input")
    p.add_argument("--cut", required=True, help="group A qubits, e.g. 1,2")
    p.add_argument("--eps-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--threshold", action="store_true", help="also bisect for the PPT threshold")
    p.add_argument("--width", type=float, default=1e-6, help="bisection bracket width")

    p = sub.add_parser("bell", parents=[common], help="Mermin-Klyshko violation search")
    p.add_argument("input")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--iters", type=int, default=200)

    p = sub.add_parser("upb-check", parents=[common], help="verify the SHIFTS UPB construction")
    p.add_argument("--drop", type=int, help="remove basis state i (1-based) before the search")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error [{exc.invariant}]: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2)
    print(text)
    if args.out and args.command not in ("build", "simulate"):
        Path(args.out).write_text(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
