"""Command-line front end.

    diracsu11 spectrum     --gamma 0.5 --k -1 --n-max 5
    diracsu11 wavefunction --gamma 0.5 --k -1 --n 1 --rho-max 20 --samples 200
    diracsu11 verify       --gamma 0.5 --k -1 --n-max 5 --out report.json
    diracsu11 diagram      --gamma 0.5 --k-max 3 --N-max 5 --format svg

Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Sequence
from xml.sax.saxutils import escape

import numpy as np

from . import __version__
from .errors import DomainError
from .ladder import run_suite
from .spectrum import DiagramData, QuantumNumbers, diagram_columns, energy_of, level_diagram
from .states import spinor_state

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    """Nine significant digits, locale independent."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.9g}"


def _json_number(x: Any) -> Any:
    if isinstance(x, bool) or not isinstance(x, (float, np.floating)):
        return x
    if not math.isfinite(x):
        # JSON has no infinity; report the largest float instead
        return 1.7976931348623157e308 if x > 0 or math.isnan(x) else -1.7976931348623157e308
    return float(f"{float(x):.9g}")


def _rounded(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return _json_number(obj)


def to_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def to_json(obj: Any) -> str:
    return json.dumps(_rounded(obj), indent=2, sort_keys=False) + "\n"


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _require_format(fmt_name: str, allowed: Sequence[str], command: str) -> None:
    if fmt_name not in allowed:
        raise UsageError(f"{command} supports --format {'/'.join(allowed)}, not {fmt_name}")


# -- commands -------------------------------------------------------------------


def cmd_spectrum(args: argparse.Namespace) -> int:
    _require_format(args.format, ("csv", "json"), "spectrum")
    if not 0 <= args.n_max <= 50:
        raise DomainError("n-max must lie in [0, 50]")
    n_min = 1 if args.k > 0 else 0
    header = ["n", "N", "s", "xi", "E_over_m", "E"]
    rows = []
    for n in range(n_min, args.n_max + 1):
        q = QuantumNumbers(k=args.k, n=n, gamma=args.gamma, mass=args.mass)
        p = energy_of(q)
        rows.append([n, q.principal, p.s, p.xi, p.energy_over_m, p.energy])
    if args.format == "csv":
        _emit(to_csv(header, rows), args.out)
    else:
        payload = {
            "parameters": {"gamma": args.gamma, "k": args.k, "n_max": args.n_max, "mass": args.mass},
            "levels": [dict(zip(header, row)) for row in rows],
        }
        _emit(to_json(payload), args.out)
    return EXIT_OK


def cmd_wavefunction(args: argparse.Namespace) -> int:
    _require_format(args.format, ("csv",), "wavefunction")
    if args.samples < 2 or not args.rho_max > 0:
        raise DomainError("need --samples >= 2 and --rho-max > 0")
    q = QuantumNumbers(k=args.k, n=args.n, gamma=args.gamma, mass=args.mass)
    state = spinor_state(q)
    rho = np.linspace(0.0, args.rho_max, args.samples)
    columns: dict[str, np.ndarray] = {"rho": rho}
    which = args.component
    if which in ("upper", "both"):
        columns["F1"] = state.upper(rho) if state.upper is not None else np.zeros_like(rho)
    if which in ("lower", "both"):
        columns["F2"] = state.lower(rho)
    header = list(columns)
    rows = list(zip(*(columns[h] for h in header)))
    _emit(to_csv(header, rows), args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    _require_format(args.format, ("json",), "verify")
    if not 0 <= args.n_max <= 20:
        raise DomainError("n-max must lie in [0, 20]")
    report = run_suite(gamma=args.gamma, k=args.k, n_max=args.n_max, perturb=args.perturb)
    params = {"gamma": args.gamma, "k": args.k, "n_max": args.n_max}
    if args.perturb:
        params["perturb"] = True
    _emit(to_json(report.to_dict(params)), args.out)
    if not report.passed:
        failed = len(report.failures())
        print(f"verification failed: {failed} of {len(report)} checks", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


_SVG_COL_WIDTH = 60
_SVG_LEVEL_WIDTH = 40
_SVG_TOP, _SVG_BOTTOM = 40.0, 360.0


def render_svg(data: DiagramData) -> str:
    cols = diagram_columns(data.k_max)
    x_of = {k: 80 + i * _SVG_COL_WIDTH + (10 if i % 2 else 0) for i, k in enumerate(cols)}
    energies = [lv.energy_over_m for lv in data.levels]
    lo, hi = min(energies), max(energies)
    span = hi - lo or 1.0

    def y_of(e: float) -> float:
        return _SVG_BOTTOM - (e - lo) / span * (_SVG_BOTTOM - _SVG_TOP)

    width = 80 + len(cols) * _SVG_COL_WIDTH + 40
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="420" viewBox="0 0 {width} 420">',
        '<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto">'
        '<path d="M0,0 L6,3 L0,6 z"/></marker></defs>',
        f'<text x="10" y="20" font-size="12">gamma = {fmt(data.gamma)}</text>',
    ]
    for k in cols:
        out.append(
            f'<text class="column-label" x="{x_of[k] + _SVG_LEVEL_WIDTH / 2:.3f}" y="395" '
            f'font-size="11" text-anchor="middle">k = {k}</text>'
        )
    for lv in data.levels:
        x0, y = x_of[lv.k], y_of(lv.energy_over_m)
        dash = ' stroke-dasharray="4,3"' if lv.dashed else ""
        out.append(
            f'<line class="level" data-k="{lv.k}" data-n="{lv.n}" data-N="{lv.N}" '
            f'data-energy="{fmt(lv.energy_over_m)}" data-dashed="{str(lv.dashed).lower()}" '
            f'x1="{x0:.3f}" y1="{y:.3f}" x2="{x0 + _SVG_LEVEL_WIDTH:.3f}" y2="{y:.3f}" '
            f'stroke="black" stroke-width="2"{dash}/>'
        )
    for arrow in data.arrows:
        src, dst = data.level(*arrow.source), data.level(*arrow.target)
        if src is None or dst is None:
            continue
        if arrow.orientation == "vertical":
            x = x_of[src.k] + _SVG_LEVEL_WIDTH / 2 + (6 if arrow.label.endswith("+") else -6)
            x1 = x2 = x
            y1, y2 = y_of(src.energy_over_m), y_of(dst.energy_over_m)
        else:
            y_shift = -5 if arrow.label.endswith("-") else 5
            y1 = y2 = y_of(src.energy_over_m) + y_shift
            x1 = x_of[src.k] + (_SVG_LEVEL_WIDTH if src.k < dst.k else 0)
            x2 = x_of[dst.k] + (0 if src.k < dst.k else _SVG_LEVEL_WIDTH)
        out.append(
            f'<line class="arrow" data-label="{escape(arrow.label)}" data-orientation="{arrow.orientation}" '
            f'x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
            f'stroke="gray" stroke-width="1" marker-end="url(#head)"/>'
        )
        out.append(
            f'<text class="arrow-label" x="{(x1 + x2) / 2 + 3:.3f}" y="{(y1 + y2) / 2 - 2:.3f}" '
            f'font-size="9">{escape(arrow.label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_diagram(args: argparse.Namespace) -> int:
    _require_format(args.format, ("svg", "csv"), "diagram")
    data = level_diagram(args.gamma, args.k_max, args.N_max)
    if args.format == "csv":
        header = ["k", "n", "N", "E_over_m", "dashed"]
        rows = [[lv.k, lv.n, lv.N, lv.energy_over_m, "true" if lv.dashed else "false"] for lv in data.levels]
        _emit(to_csv(header, rows), args.out)
    else:
        _emit(render_svg(data), args.out)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracsu11",
        description="su(1,1) treatment of the Dirac-Coulomb bound states: spectra, wavefunctions, checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_format: str) -> None:
        p.add_argument("--gamma", type=float, default=0.5, help="coupling z e^2 / (hbar c) (default 0.5)")
        p.add_argument("--format", default=default_format, choices=("json", "csv", "svg"))
        p.add_argument("--out", default="-", help="output path, '-' for stdout (default)")

    p = sub.add_parser("spectrum", help="bound-state energies for one k")
    common(p, "csv")
    p.add_argument("--k", type=int, default=-1)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--mass", type=float, default=1.0, help="energy scale m (default 1)")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("wavefunction", help="sample the normalized radial components")
    common(p, "csv")
    p.add_argument("--k", type=int, default=-1)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--component", choices=("upper", "lower", "both"), default="both")
    p.add_argument("--rho-max", type=float, default=20.0)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--mass", type=float, default=1.0)
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("verify", help="run the full verification suite, JSON report")
    common(p, "json")
    p.add_argument("--k", type=int, default=-1)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diagram", help="level diagram as SVG or CSV")
    common(p, "svg")
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--N-max", type=int, default=5)
    p.set_defaults(func=cmd_diagram)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
