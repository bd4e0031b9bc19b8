"""Command-line interface.

Subcommands: ``effects``, ``alphas``, ``threshold``, ``prob``,
``simulate``, ``ks-check``, ``verify``.  Angles are radians unless
``--degrees`` is given.  Every command prints a human-readable summary
and, with ``--output PATH``, writes the same results as a JSON report
with stable key order; identical invocations produce byte-identical
output.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, formats, verify
from .ks_solver import ks_pipeline
from .misalignment import QuadratureSpec, UniformCap
from .spin_core import unit_from_polar
from .unsharp_povm import (
    alphas_axial,
    alphas_uniform_cap,
    condition2_check,
    effects,
    outcome_probabilities,
    simulate_outcomes,
    threshold_epsilon,
)


_OUTCOME_LABEL = {1: "+1", 0: "0", -1: "-1"}


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _print_matrix(label: str, m: np.ndarray, out) -> None:
    out.write(f"{label}:\n")
    for row in np.asarray(m, dtype=complex):
        out.write("  " + "  ".join(f"{_fmt_complex(z):>30s}" for z in row) + "\n")


def _matrix_rows(m: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _parse_pair(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise SystemExit(f"error: {flag} expects two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise SystemExit(f"error: {flag} has a non-numeric component in {text!r}") from None


def _parse_state(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise SystemExit(f"error: --state expects three comma-separated amplitudes, got {text!r}")
    amplitudes = []
    for part in parts:
        try:
            amplitudes.append(complex(part.strip().replace("i", "j")))
        except ValueError:
            raise SystemExit(f"error: --state amplitude {part!r} is not a number") from None
    v = np.array(amplitudes)
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        raise SystemExit("error: --state must be a nonzero vector")
    return v / norm


def _angle(value: float, degrees: bool) -> float:
    return float(np.radians(value)) if degrees else float(value)


def _direction(args) -> np.ndarray:
    theta, phi = _parse_pair(args.direction, "--direction")
    return unit_from_polar(_angle(theta, args.degrees), _angle(phi, args.degrees))


def _epsilon(args) -> float:
    eps = _angle(args.epsilon, args.degrees)
    if not 0.0 < eps <= np.pi:
        raise SystemExit(f"error: --epsilon must be in (0, pi] radians, got {eps}")
    return eps


def _delta(args) -> float:
    if not 0.0 <= args.delta < 0.5:
        raise SystemExit(f"error: --delta must satisfy 0 <= delta < 0.5, got {args.delta}")
    return float(args.delta)


def _model(args):
    if getattr(args, "profile", None):
        try:
            return formats.load_profile_file(args.profile)
        except (OSError, ValueError) as exc:
            raise SystemExit(f"error: --profile: {exc}") from None
    return UniformCap(_epsilon(args))


def _quadrature(args) -> QuadratureSpec:
    if not getattr(args, "quadrature", None):
        return QuadratureSpec()
    nt, np_ = _parse_pair(args.quadrature, "--quadrature")
    try:
        return QuadratureSpec(int(nt), int(np_))
    except ValueError as exc:
        raise SystemExit(f"error: --quadrature: {exc}") from None


def _emit(args, report: dict, out) -> None:
    if args.output:
        formats.write_report(args.output, report)
        out.write(f"report written to {args.output}\n")


def _alphas_payload(alphas) -> dict:
    a1, a2, a3, a4 = alphas.as_tuple()
    return {"a1": a1, "a2": a2, "a3": a3, "a4": a4}


def cmd_effects(args, out) -> int:
    n = _direction(args)
    model = _model(args)
    spec = _quadrature(args)
    triple = effects(n, model, spec)
    total = sum(triple.as_tuple())
    residual_identity = float(np.max(np.abs(total - np.eye(3))))
    eig_min, eig_max = 1.0, 0.0
    for i in (1, 0, -1):
        w = np.linalg.eigvalsh(triple.effect(i))
        eig_min = min(eig_min, float(w[0]))
        eig_max = max(eig_max, float(w[-1]))
        _print_matrix(f"effect({_OUTCOME_LABEL[i]})", triple.effect(i), out)
    out.write(f"sum-to-identity residual: {residual_identity:.3e}\n")
    out.write(f"eigenvalue range: [{eig_min:.12g}, {eig_max:.12g}]\n")
    report = {
        "command": "effects",
        "direction": [float(x) for x in n],
        "model": model.describe(),
        "quadrature": {"n_theta": spec.n_theta, "n_phi": spec.n_phi},
        "effects": {
            "plus": _matrix_rows(triple.f_plus),
            "zero": _matrix_rows(triple.f_zero),
            "minus": _matrix_rows(triple.f_minus),
        },
        "residuals": {
            "sum_to_identity": residual_identity,
            "eigenvalue_min": eig_min,
            "eigenvalue_max": eig_max,
        },
    }
    _emit(args, report, out)
    return 0


def cmd_alphas(args, out) -> int:
    model = _model(args)
    quadrature_alphas = alphas_axial(model)
    if isinstance(model, UniformCap):
        closed = alphas_uniform_cap(model.epsilon)
    else:
        closed = None
    out.write(f"model: {model.describe()}\n")
    tags = ("a1", "a2", "a3", "a4")
    for tag, value in zip(tags, quadrature_alphas.as_tuple()):
        out.write(f"{tag} (quadrature)  = {value:.12g}\n")
    payload = {
        "command": "alphas",
        "model": model.describe(),
        "quadrature": _alphas_payload(quadrature_alphas),
    }
    if closed is not None:
        diff = max(
            abs(a - b)
            for a, b in zip(closed.as_tuple(), quadrature_alphas.as_tuple())
        )
        for tag, value in zip(tags, closed.as_tuple()):
            out.write(f"{tag} (closed form) = {value:.12g}\n")
        out.write(f"closed form vs quadrature: {diff:.3e}\n")
        payload["closed_form"] = _alphas_payload(closed)
        payload["max_difference"] = diff
    _emit(args, payload, out)
    return 0


def cmd_threshold(args, out) -> int:
    delta = _delta(args)
    if delta == 0.0:
        raise SystemExit("error: --delta must be positive for the threshold search")
    eps = threshold_epsilon(delta)
    degrees = float(np.degrees(eps))
    out.write(f"epsilon* = {eps:.3f} rad = {degrees:.1f} deg\n")
    out.write(f"full precision: {eps!r} rad\n")
    ok, margins = condition2_check(alphas_uniform_cap(eps), delta)
    out.write(f"condition at threshold: ok={ok}, margins={ {k: round(v, 9) for k, v in margins.items()} }\n")
    report = {
        "command": "threshold",
        "delta": delta,
        "epsilon_rad": eps,
        "epsilon_deg": degrees,
        "condition2": {"ok": ok, "margins": margins},
    }
    _emit(args, report, out)
    return 0


def cmd_prob(args, out) -> int:
    psi = _parse_state(args.state)
    n = _direction(args)
    model = _model(args)
    triple = effects(n, model, _quadrature(args))
    p = outcome_probabilities(psi, triple)
    for outcome, value in zip((1, 0, -1), p):
        out.write(f"P(outcome {_OUTCOME_LABEL[outcome]}) = {value:.12g}\n")
    out.write(f"sum = {sum(p):.12g}\n")
    report = {
        "command": "prob",
        "state": [[float(a.real), float(a.imag)] for a in psi],
        "direction": [float(x) for x in n],
        "model": model.describe(),
        "probabilities": {"plus": p[0], "zero": p[1], "minus": p[2]},
    }
    _emit(args, report, out)
    return 0


def cmd_simulate(args, out) -> int:
    if args.trials < 1:
        raise SystemExit(f"error: --trials must be >= 1, got {args.trials}")
    psi = _parse_state(args.state)
    n = _direction(args)
    model = _model(args)
    counts = simulate_outcomes(psi, n, model, args.trials, args.seed)
    probs = outcome_probabilities(psi, effects(n, model, _quadrature(args)))
    out.write(f"trials = {args.trials}, seed = {args.seed}\n")
    for outcome, c, p in zip((1, 0, -1), counts, probs):
        freq = c / args.trials
        sigma = max(float(np.sqrt(p * (1.0 - p) / args.trials)), 1e-300)
        out.write(
            f"outcome {_OUTCOME_LABEL[outcome]}: count {c} freq {freq:.6f} "
            f"analytic {p:.6f} deviation {abs(freq - p) / sigma:.2f} sigma\n"
        )
    report = {
        "command": "simulate",
        "state": [[float(a.real), float(a.imag)] for a in psi],
        "direction": [float(x) for x in n],
        "model": model.describe(),
        "trials": args.trials,
        "seed": args.seed,
        "counts": {"plus": counts[0], "zero": counts[1], "minus": counts[2]},
        "probabilities": {"plus": probs[0], "zero": probs[1], "minus": probs[2]},
    }
    _emit(args, report, out)
    return 0


def cmd_ks_check(args, out) -> int:
    try:
        name, directions = formats.load_direction_file(args.directions)
    except (OSError, ValueError) as exc:
        raise SystemExit(f"error: --directions: {exc}") from None
    delta = _delta(args)
    model = _model(args)
    report = ks_pipeline(directions, model, delta, name=name)
    out.write(f"direction set: {name} ({len(directions)} directions)\n")
    out.write(f"model: {report.model_description}, delta = {delta}\n")
    a1, a2, a3, a4 = report.alphas.as_tuple()
    out.write(f"alphas: a1={a1:.6f} a2={a2:.6f} a3={a3:.6f} a4={a4:.6f}\n")
    out.write(f"condition2: {'ok' if report.condition2_ok else 'FAILED'}\n")
    if report.solve is not None:
        out.write(
            f"eigenrays: {report.ray_count}, orthogonal pairs: "
            f"{report.ortho_pair_count}, tripods: {report.tripod_count}\n"
        )
        out.write(
            f"solver: {report.solve.verdict} "
            f"({report.solve.nodes_explored} nodes, depth {report.solve.max_depth})\n"
        )
    out.write(f"conclusion: {report.conclusion}\n")
    _emit(args, report.to_dict(), out)
    return 0


def cmd_verify(args, out) -> int:
    ok, results = verify.run_verification(stream=out)
    passed = sum(1 for r in results if r["ok"])
    out.write(f"{passed}/{len(results)} properties passed\n")
    _emit(args, {"command": "verify", "ok": ok, "results": results}, out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unsharp-spin",
        description=(
            "Unsharp spin-1 effects from misalignment densities and "
            "Kochen-Specker non-colorability checks."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, direction=False, epsilon=False, state=False):
        if direction:
            p.add_argument("--direction", required=True, metavar="THETA,PHI",
                           help="intended direction in polar angles")
        if epsilon:
            p.add_argument("--epsilon", type=float, required=False,
                           help="uniform-cap half-angle (radians unless --degrees)")
        if state:
            p.add_argument("--state", required=True, metavar="A,B,C",
                           help="state amplitudes, e.g. 0,1,0 or 0.5+0.5j,0,0.707")
        p.add_argument("--profile", help="tabulated axial profile file (overrides --epsilon model)")
        p.add_argument("--quadrature", metavar="NT,NP", help="quadrature node counts")
        p.add_argument("--degrees", action="store_true", help="interpret input angles as degrees")
        p.add_argument("--output", help="also write a JSON report to this path")

    p = sub.add_parser("effects", help="construct the three unsharp effects")
    add_common(p, direction=True, epsilon=True)
    p.set_defaults(func=cmd_effects)

    p = sub.add_parser("alphas", help="effect eigenvalues (closed form and quadrature)")
    add_common(p, epsilon=True)
    p.set_defaults(func=cmd_alphas)

    p = sub.add_parser("threshold", help="largest cap half-angle passing the separation condition")
    p.add_argument("--delta", type=float, required=True, help="unsharpness tolerance in [0, 0.5)")
    p.add_argument("--output", help="also write a JSON report to this path")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("prob", help="outcome probabilities for a pure state")
    add_common(p, direction=True, epsilon=True, state=True)
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("simulate", help="stochastic outcome simulation")
    add_common(p, direction=True, epsilon=True, state=True)
    p.add_argument("--trials", type=int, required=True, help="number of trials (>= 1)")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ks-check", help="noncontextuality check for a direction set")
    p.add_argument("--directions", required=True, help="direction-set file")
    p.add_argument("--epsilon", type=float, help="uniform-cap half-angle")
    p.add_argument("--delta", type=float, required=True, help="unsharpness tolerance in [0, 0.5)")
    p.add_argument("--profile", help="tabulated axial profile file (overrides --epsilon model)")
    p.add_argument("--degrees", action="store_true", help="interpret input angles as degrees")
    p.add_argument("--output", help="also write a JSON report to this path")
    p.set_defaults(func=cmd_ks_check)

    p = sub.add_parser("verify", help="run the full invariant suite")
    p.add_argument("--output", help="also write a JSON report to this path")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "epsilon", None) is None and hasattr(args, "epsilon"):
        if not getattr(args, "profile", None):
            parser.error(f"{args.command}: --epsilon is required unless --profile is given")
    try:
        return args.func(args, sys.stdout)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
