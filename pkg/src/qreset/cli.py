"""Command-line front end.

Each subcommand writes CSV or JSON to ``--out`` (plus a ``<out>.manifest.json``
sidecar describing the run) or to stdout when ``--out`` is omitted.

Angles accept multiples of pi: ``pi``, ``2pi/3``, ``2/3pi``, ``0.5pi``, ``-pi/6``
or a plain number of radians.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import subprocess
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigurationError
from .linalg import density_matrix, su2_exponential
from .metrics import ChshSettings, chsh_value, correlator, entanglement_fidelity, overlap_fidelity
from .noise import SpdcParams, apply_werner, p_from_counts, predicted_fidelities, visibility
from .protocol import (
    Mode,
    ProtocolConfig,
    haar_sweep,
    heralded_outcome,
    herald_filter,
    trajectory,
)
from .quantum import SINGLE_QUBIT_LABELS, HamiltonianAxis, interaction_gate, named_state

EXIT_CONFIG = 2
EXIT_IO = 3

RESET_SWEEP_HEADER = ["T", "t", "fidelity_free", "bloch_x", "bloch_y", "bloch_z", "fidelity_reset", "success_prob"]
FIDELITY_TABLE_HEADER = ["state", "fidelity_reset_ideal", "fidelity_reset_noisy", "fidelity_no_reset", "success_prob"]
HAAR_SWEEP_HEADER = ["seed", "total_success_prob", "min_reset_fidelity"]

_ANGLE_RE = re.compile(
    r"""^\s*(?P<sign>[-+]?)\s*
        (?:(?P<num>\d+(?:\.\d*)?|\.\d+)\s*(?:/\s*(?P<den>\d+))?\s*\*?\s*)?
        pi
        (?:\s*/\s*(?P<den2>\d+))?\s*$""",
    re.VERBOSE | re.IGNORECASE,
)


def parse_angle(text: str) -> float:
    """Radians from ``"2/3pi"``-style notation or a plain float."""
    m = _ANGLE_RE.match(text)
    if m is None:
        try:
            value = float(text)
        except ValueError:
            raise ConfigurationError(f"cannot parse angle {text!r}") from None
        if not math.isfinite(value):
            raise ConfigurationError(f"angle must be finite, got {text!r}")
        return value
    factor = Fraction(m["num"]) if m["num"] else Fraction(1)
    for den in (m["den"], m["den2"]):
        if den:
            if int(den) == 0:
                raise ConfigurationError(f"zero denominator in angle {text!r}")
            factor /= int(den)
    if m["sign"] == "-":
        factor = -factor
    return float(factor) * math.pi


def parse_axis(text: str) -> HamiltonianAxis:
    named = {"z": HamiltonianAxis.z, "y": HamiltonianAxis.y, "x": HamiltonianAxis.x}
    if text.strip().lower() in named:
        return named[text.strip().lower()]()
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigurationError(f"axis must be 'theta,phi' or one of x/y/z, got {text!r}")
    return HamiltonianAxis(parse_angle(parts[0]), parse_angle(parts[1]))


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigurationError(f"expected comma-separated numbers, got {text!r}") from None


def fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".12g")


def _round(x):
    return None if x is None else float(fmt(x))


def git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() if out.returncode == 0 and out.stdout.strip() else "unknown"


def _jsonable(value):
    if isinstance(value, HamiltonianAxis):
        return {"theta": value.theta, "phi": value.phi}
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    return value


def build_manifest(args: argparse.Namespace) -> dict:
    params = {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in ("func", "command", "argv")}
    return {
        "command": args.command,
        "argv": getattr(args, "argv", None),
        "parameters": params,
        "git_describe": git_describe(),
        "package_version": __version__,
        "seed": getattr(args, "seed", None),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([r if isinstance(r, str) else fmt(r) for r in row])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def emit(args: argparse.Namespace, text: str, out: str | None = None) -> None:
    out = out if out is not None else args.out
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.write_text(text, encoding="utf-8", newline="\n")
    manifest = Path(str(path) + ".manifest.json")
    manifest.write_text(_json_text(build_manifest(args)), encoding="utf-8", newline="\n")


def _single_config(args, label: str, T: float) -> ProtocolConfig:
    gate = interaction_gate(args.circuit)
    return ProtocolConfig(args.axis, T, gate, named_state(label), herald_filter(gate))


def cmd_reset_sweep(args) -> int:
    rows = []
    for T in args.T:
        config = _single_config(args, args.initial, T)
        grid = np.linspace(0.0, 4 * T, args.points) if T != 0 else np.array([0.0])
        reset = heralded_outcome(config)
        for i, point in enumerate(trajectory(config, grid)):
            at_end = i == len(grid) - 1
            rows.append([
                T,
                point.time,
                point.fidelity,
                *point.bloch,
                reset.reset_fidelity if at_end else None,
                reset.probability if at_end else None,
            ])
    emit(args, _csv_text(RESET_SWEEP_HEADER, rows))
    return 0


def fidelity_table(axis: HamiltonianAxis, circuit: str, T: float, noise_p: float | None = None) -> list[dict]:
    gate = interaction_gate(circuit)
    vis = visibility(noise_p, "I" if gate.label == "SWAP" else "II") if noise_p is not None else None
    u_total = su2_exponential(axis, 4 * T)
    rows = []
    for label in SINGLE_QUBIT_LABELS:
        psi0 = named_state(label)
        rho0 = density_matrix(psi0)
        outcome = heralded_outcome(ProtocolConfig(axis, T, gate, psi0, herald_filter(gate)))
        noisy = None
        if vis is not None and outcome.defined:
            noisy = overlap_fidelity(apply_werner(outcome.post_state, vis, 1), rho0)
        rows.append({
            "state": label,
            "fidelity_reset_ideal": outcome.reset_fidelity,
            "fidelity_reset_noisy": noisy,
            "fidelity_no_reset": overlap_fidelity(density_matrix(u_total @ psi0), rho0),
            "success_prob": outcome.probability,
        })
    return rows


def cmd_fidelity_table(args) -> int:
    rows = fidelity_table(args.axis, args.circuit, args.T, args.noise_p)
    if args.format == "json":
        payload = {
            "rows": [{k: (v if k == "state" else _round(v)) for k, v in r.items()} for r in rows],
            "mean_no_reset": _round(float(np.mean([r["fidelity_no_reset"] for r in rows]))),
        }
        emit(args, _json_text(payload))
    else:
        emit(args, _csv_text(FIDELITY_TABLE_HEADER, [[r[h] for h in FIDELITY_TABLE_HEADER] for r in rows]))
    return 0


def _two_qubit_summary(rho2, settings: ChshSettings) -> dict:
    return {
        "XX": _round(correlator(rho2, "XX")),
        "YY": _round(correlator(rho2, "YY")),
        "ZZ": _round(correlator(rho2, "ZZ")),
        "entanglement_fidelity": _round(entanglement_fidelity(rho2)),
        "chsh": _round(chsh_value(rho2, settings)),
    }


def entanglement_report(
    axis: HamiltonianAxis,
    circuit: str,
    T: float,
    noise_p: float | None = None,
    settings: ChshSettings | None = None,
) -> dict:
    """Ideal, noisy and no-reset two-qubit figures for a reset half of a singlet."""
    settings = settings or ChshSettings.singlet_optimal()
    gate = interaction_gate(circuit)
    singlet = named_state("PsiMinus")
    outcome = heralded_outcome(ProtocolConfig(axis, T, gate, singlet, herald_filter(gate), Mode.ENTANGLED))
    if not outcome.defined:
        raise ConfigurationError("heralded outcome has zero probability for this configuration")
    u_total = np.kron(np.eye(2), su2_exponential(axis, 4 * T))
    report = {
        "settings": {"a": settings.a, "a_prime": settings.a_prime, "b": settings.b, "b_prime": settings.b_prime},
        "success_prob": _round(outcome.probability),
        "ideal": _two_qubit_summary(outcome.post_state, settings),
        "no_reset": _two_qubit_summary(density_matrix(u_total @ singlet), settings),
    }
    if noise_p is not None:
        vis = visibility(noise_p, "I" if gate.label == "SWAP" else "II")
        report["noisy"] = {"visibility": _round(vis), **_two_qubit_summary(apply_werner(outcome.post_state, vis, 2), settings)}
    return report


def cmd_entanglement(args) -> int:
    settings = None
    if args.chsh is not None:
        angles = [parse_angle(a) for a in args.chsh.split(",")]
        if len(angles) != 4:
            raise ConfigurationError("--chsh takes four angles a,a',b,b'")
        settings = ChshSettings(*angles)
    emit(args, _json_text(entanglement_report(args.axis, args.circuit, args.T, args.noise_p, settings)))
    return 0


def cmd_haar_sweep(args) -> int:
    initial = named_state(args.initial)
    report = haar_sweep(args.axis, args.T, args.samples, args.seed, initial)
    rows = [[str(s.seed), s.total_success, s.min_reset_fidelity] for s in report.samples]
    summary = {
        "n_samples": args.samples,
        "seed": args.seed,
        "mean": _round(report.mean_success),
        "standard_error": _round(report.standard_error),
        "max": _round(report.max_success),
        "fidelity_failures": report.fidelity_failures,
        "fraction_fidelity_failures": report.fidelity_failures / args.samples,
    }
    csv_text = _csv_text(HAAR_SWEEP_HEADER, rows)
    if args.out is None:
        sys.stdout.write(csv_text)
        sys.stderr.write(_json_text(summary))
    else:
        emit(args, csv_text)
        emit(args, _json_text(summary), out=str(Path(args.out).with_suffix(".summary.json")))
    return 0


def noise_prediction(rates: list[float], rep_rate: float, etas: list[float], per_arm: bool = False) -> dict:
    if len(rates) != len(etas) or not rates:
        raise ConfigurationError("need equally many (non-zero) coincidence rates and efficiencies")
    sources = []
    for c, eta in zip(rates, etas):
        params = SpdcParams.from_arm_efficiency(c, rep_rate, eta) if per_arm else SpdcParams(c, rep_rate, eta)
        sources.append(p_from_counts(params))
    p_mean = float(np.mean(sources))
    return {
        "p": [_round(p) for p in sources],
        "p_mean": _round(p_mean),
        "visibility": {"I": _round(visibility(p_mean, "I")), "II": _round(visibility(p_mean, "II"))},
        "fidelities": {k: _round(v) for k, v in predicted_fidelities(p_mean).as_dict().items()},
    }


def cmd_noise_predict(args) -> int:
    emit(args, _json_text(noise_prediction(args.rates, args.rep_rate, args.eta, args.per_arm)))
    return 0


def _circuit(text: str) -> str:
    if text not in ("I", "II"):
        raise argparse.ArgumentTypeError("circuit must be I or II")
    return text


def _wrap(fn):
    # argparse turns ValueError/TypeError into a usage error (exit 2)
    def inner(text):
        try:
            return fn(text)
        except ConfigurationError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    inner.__name__ = fn.__name__
    return inner


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qreset", description="Quantum resetting simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, T_list=False):
        p.add_argument("--axis", type=_wrap(parse_axis), default=HamiltonianAxis.z(), help="theta,phi or x/y/z (default z)")
        p.add_argument("--circuit", type=_circuit, default="I")
        if T_list:
            p.add_argument("--T", type=_wrap(lambda s: [parse_angle(x) for x in s.split(",")]), default=[2 * math.pi / 3])
        else:
            p.add_argument("--T", type=_wrap(parse_angle), default=2 * math.pi / 3)
        p.add_argument("--out", default=None)

    p = sub.add_parser("reset-sweep", help="free-evolution fidelity curve with the reset point at t=4T")
    common(p, T_list=True)
    p.add_argument("--initial", choices=SINGLE_QUBIT_LABELS, default="D")
    p.add_argument("--points", type=int, default=49)
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=cmd_reset_sweep)

    p = sub.add_parser("fidelity-table", help="reset fidelity for the six polarization states")
    common(p)
    p.add_argument("--noise-p", type=float, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_fidelity_table)

    p = sub.add_parser("entanglement", help="correlators, singlet fidelity and CHSH after resetting half a singlet")
    common(p)
    p.add_argument("--noise-p", type=float, default=None)
    p.add_argument("--chsh", default=None, help="analyzer angles a,a',b,b'")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_entanglement)

    p = sub.add_parser("haar-sweep", help="success probability with Haar-random interactions")
    p.add_argument("--axis", type=_wrap(parse_axis), default=HamiltonianAxis.z())
    p.add_argument("--T", type=_wrap(parse_angle), default=2 * math.pi / 3)
    p.add_argument("--initial", choices=SINGLE_QUBIT_LABELS, default="D")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=cmd_haar_sweep)

    p = sub.add_parser("noise-predict", help="down-conversion probability and predicted fidelities")
    p.add_argument("--rates", type=_wrap(_float_list), required=True, help="coincidence rates C in Hz")
    p.add_argument("--rep-rate", type=float, default=76e6, help="pump repetition rate M in Hz")
    p.add_argument("--eta", type=_wrap(_float_list), required=True, help="collection efficiencies, one per source")
    p.add_argument("--per-arm", action="store_true", help="--eta values are single-arm efficiencies; square them")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_noise_predict)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
