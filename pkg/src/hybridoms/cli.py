"""Command-line front end.

Every subcommand takes ``--preset``, ``--config`` and per-parameter flags;
explicit flags override the config file, which overrides the preset. Output
goes to ``--out`` (written atomically) or stdout. Exit status is 0 on success,
1 on invalid input and 2 on numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from .ladder import GROUND_LABEL, DressedLabel, ladder_labels, total_energy
from .lindblad import SolverError, TruncationSpec, photon_number_sweep
from .overlaps import overlap_matrix
from .params import CONFIG_KEYS, SystemParams
from .presets import PRESETS, get_preset
from .pulse import (InitialState, PulseSpec, default_transmission_grid, qubit_initial_state,
                    transmission_spectrum)
from .qubit import QubitDensityMatrix
from .scattering import ScatteringContext, cavity_excitation_spectrum, default_excitation_grid
from .tomography import fidelity, measure_all, reconstruct, tomography_pulse


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def fmt(x: float) -> str:
    return f"{x:.12g}"


def write_atomic(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def series_csv(header, series) -> str:
    return csv_text(header, zip(series.grid, series.values))


def _floats(text: str, count: int, what: str):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be {count} comma-separated numbers") from None
    if len(vals) != count:
        raise UsageError(f"{what} must be {count} comma-separated numbers")
    return vals


def parse_window(text: str):
    lo, hi, n = _floats(text, 3, "--window")
    if not hi > lo or n < 2 or n != int(n):
        raise UsageError("--window needs lo < hi and an integer point count >= 2")
    return np.linspace(lo, hi, int(n))


_PARAM_FLAGS = {key: "--" + key.replace("_", "-") for key in CONFIG_KEYS}


def _add_common(p):
    p.add_argument("--preset", choices=sorted(PRESETS), help="figure preset supplying defaults")
    p.add_argument("--config", help="JSON file with all ten parameter keys")
    p.add_argument("--out", help="output file (default: stdout)")
    for key, flag in _PARAM_FLAGS.items():
        p.add_argument(flag, dest="p_" + key, type=float, metavar="X", help=f"override {key}")


def resolve_params(args) -> SystemParams:
    preset = get_preset(args.preset) if args.preset else None
    params = preset.params if preset else SystemParams()
    if args.config:
        try:
            params = SystemParams.from_json(args.config)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
    overrides = {key: getattr(args, "p_" + key) for key in CONFIG_KEYS
                 if getattr(args, "p_" + key) is not None}
    return params.replace(**overrides) if overrides else params


def _preset(args):
    return get_preset(args.preset) if args.preset else None


def cmd_ladder(args):
    p = resolve_params(args)
    rows = []
    for m in (0, 1):
        for lab in ladder_labels(args.n_max):
            rows.append((str(m), str(lab.n), lab.xi, total_energy(m, lab, p)))
    return csv_text(["m", "n", "xi", "energy"], rows)


def cmd_overlaps(args):
    om = overlap_matrix(resolve_params(args), args.n_trunc)
    rows = [(str(r.n), r.xi, str(c.n), c.xi, om.entries[i, j])
            for i, r in enumerate(om.labels) for j, c in enumerate(om.labels)]
    return csv_text(["row_n", "row_xi", "col_n", "col_xi", "value"], rows)


def cmd_excitation(args):
    ctx = ScatteringContext.build(resolve_params(args))
    initial = DressedLabel.parse(args.initial)
    grid = parse_window(args.window) if args.window else default_excitation_grid(ctx, initial)
    return series_csv(["delta_k", "excitation"], cavity_excitation_spectrum(ctx, initial, grid))


def _parse_amplitudes(text: str) -> dict:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        return {DressedLabel.parse(text): 1.0}
    if isinstance(raw, str):
        return {DressedLabel.parse(raw): 1.0}
    if not isinstance(raw, dict) or not raw:
        raise UsageError("--initial must be a label or a JSON object of label: amplitude")
    amps = {}
    for key, val in raw.items():
        if isinstance(val, (list, tuple)) and len(val) == 2:
            val = complex(val[0], val[1])
        elif isinstance(val, bool) or not isinstance(val, (int, float)):
            raise UsageError(f"amplitude for {key!r} must be a number or [re, im]")
        amps[DressedLabel.parse(key)] = complex(val)
    norm = sum(abs(c) ** 2 for c in amps.values())
    return {k: c / np.sqrt(norm) for k, c in amps.items()}


def cmd_transmit(args):
    p = resolve_params(args)
    ctx = ScatteringContext.build(p)
    preset = _preset(args)
    if args.rho and args.initial:
        raise UsageError("give either --initial or --rho, not both")
    if args.rho:
        initial = qubit_initial_state(ctx, QubitDensityMatrix.from_bloch(*_floats(args.rho, 3, "--rho")))
    elif args.initial:
        initial = InitialState.pure(_parse_amplitudes(args.initial))
    else:
        initial = InitialState.pure(preset.initial if preset else GROUND_LABEL)
    if args.pulse_center is not None:
        center = args.pulse_center
    elif preset:
        center = preset.pulse(p).center_detuning(p)
    else:
        center = -ctx.derived.delta1 - ctx.derived.delta2
    width = args.pulse_width if args.pulse_width is not None else (
        preset.pulse(p).d if preset else p.kappa)
    pulse = PulseSpec.at_detuning(p, center, width)
    grid = parse_window(args.window) if args.window else default_transmission_grid(ctx, pulse, initial)
    return series_csv(["delta_k", "s_value"], transmission_spectrum(ctx, pulse, initial, grid))


def cmd_lindblad(args):
    p = resolve_params(args)
    preset = _preset(args)
    eta = args.eta if args.eta is not None else (preset.eta(p) if preset else p.kappa / 50)
    trunc = TruncationSpec.parse(args.trunc) if args.trunc else TruncationSpec()
    if args.window:
        grid = parse_window(args.window)
    else:
        d1 = p.g**2 / p.omega_b
        grid = np.linspace(-d1 - 0.5 * p.omega_b, -d1 + 2.5 * p.omega_b, 601)
    series = photon_number_sweep(p, eta, grid, trunc)
    return series_csv(["delta_l", "mean_photon_number"], series)


def _matrix_json(rho) -> list:
    m = np.asarray(rho)
    # row-major list of [re, im] pairs
    return [[float(fmt(m[i, j].real)), float(fmt(m[i, j].imag))] for i in range(2) for j in range(2)]


def cmd_tomography_simulate(args):
    p = resolve_params(args)
    preset = _preset(args)
    if args.rho:
        bloch = _floats(args.rho, 3, "--rho")
    elif preset and preset.bloch:
        bloch = preset.bloch
    else:
        raise UsageError("--rho rx,ry,rz is required")
    ctx = ScatteringContext.build(p)
    width = args.pulse_width if args.pulse_width is not None else 0.2 * p.kappa
    probs = measure_all(ctx, QubitDensityMatrix.from_bloch(*bloch), tomography_pulse(ctx, width))
    return json.dumps({"p": [[float(fmt(v)) for v in row] for row in probs]}, indent=2) + "\n"


def cmd_tomography_reconstruct(args):
    try:
        with open(args.probs) as fh:
            data = json.load(fh)
        probs = np.array(data["p"], dtype=float)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read probabilities from {args.probs}: {exc}") from None
    rho = reconstruct(probs)
    out = {"rho": _matrix_json(rho.matrix), "bloch": [float(fmt(v)) for v in rho.bloch]}
    if args.truth:
        truth = QubitDensityMatrix.from_bloch(*_floats(args.truth, 3, "--truth"))
        out["fidelity"] = float(fmt(fidelity(truth.matrix, rho.matrix)))
    return json.dumps(out, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hybridoms", description="Single-photon spectroscopy of a hybrid optomechanical system.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ladder", help="zero- and one-photon energy ladder")
    _add_common(p)
    p.add_argument("--n-max", type=int, default=5)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("overlaps", help="dressed-state overlap matrix")
    _add_common(p)
    p.add_argument("--n-trunc", type=int)
    p.set_defaults(func=cmd_overlaps)

    p = sub.add_parser("excitation", help="cavity excitation spectrum")
    _add_common(p)
    p.add_argument("--initial", default="0g", help="initial dressed state, e.g. 0g or 1,+")
    p.add_argument("--window", help="lo,hi,points in cavity detuning")
    p.set_defaults(func=cmd_excitation)

    p = sub.add_parser("transmit", help="transmitted single-photon spectrum")
    _add_common(p)
    p.add_argument("--pulse-center", type=float, help="pulse centre as cavity detuning")
    p.add_argument("--pulse-width", type=float, help="pulse width d")
    p.add_argument("--initial", help='label or JSON amplitudes, e.g. {"0g": 0.6, "1+": [0, 0.8]}')
    p.add_argument("--rho", help="TLS Bloch vector rx,ry,rz (mechanics in vacuum)")
    p.add_argument("--window", help="lo,hi,points in cavity detuning")
    p.set_defaults(func=cmd_transmit)

    p = sub.add_parser("lindblad", help="master-equation photon number versus drive detuning")
    _add_common(p)
    p.add_argument("--eta", type=float, help="drive amplitude (default kappa/50)")
    p.add_argument("--window", help="lo,hi,points in drive detuning")
    p.add_argument("--trunc", help="n_c,n_b Fock cutoffs (default 3,25)")
    p.set_defaults(func=cmd_lindblad)

    p = sub.add_parser("tomography", help="MUB tomography from transmitted peak heights")
    tsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = tsub.add_parser("simulate", help="simulated outcome probabilities")
    _add_common(q)
    q.add_argument("--rho", help="true TLS Bloch vector rx,ry,rz")
    q.add_argument("--pulse-width", type=float, help="pulse width d (default 0.2 kappa)")
    q.set_defaults(func=cmd_tomography_simulate)
    q = tsub.add_parser("reconstruct", help="density matrix from a probability table")
    q.add_argument("--probs", required=True, help='JSON file {"p": [[p1d, p1u], ...]}')
    q.add_argument("--truth", help="true Bloch vector for a fidelity score")
    q.add_argument("--out", help="output file (default: stdout)")
    q.set_defaults(func=cmd_tomography_reconstruct)
    return parser


_LIST_FLAGS = ("--window", "--rho", "--truth")


def _attach_list_values(argv):
    """Join ``--window -1.5,-1,11`` into ``--window=-1.5,-1,11``.

    argparse reads a leading minus as a new option unless the token is a
    plain number, so comma lists starting with a negative value need this.
    """
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _LIST_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and "," in argv[i + 1]:
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _attach_list_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        text = args.func(args)
        write_atomic(args.out, text)
    except (UsageError, ValueError) as exc:
        print(f"hybridoms: error: {exc}", file=sys.stderr)
        return 1
    except (SolverError, ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"hybridoms: numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
