"""Command-line surface: reproducible JSON/CSV output for every solver op.

Subcommands: slip, series, profile, scan-alpha, scan-q, exact, dimensional,
inverse, selftest.  Exit codes: 0 success, 1 validation error, 2 numerical
failure.  Floats are printed with 9 significant digits; two runs with the
same flags produce byte-identical bodies.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import exact as exact_mod
from . import neumann, profile
from .dimensional import (DimensionalResult, GasParameters, dimensional_slip,
                          slip_coefficient)
from .errors import KramersError
from .kernel import make_context
from .moments import KGrid
from .neumann import build_series, inverse_kramers, slip_velocity

__all__ = ["RunConfig", "run", "emit", "main"]


@dataclass
class RunConfig:
    """Parsed invocation: one command plus its numeric arguments."""

    command: str
    alpha: float = -30.0
    q: float = 1.0
    order: int = 3
    fmt: str = "json"
    path: str | None = None
    extra: dict = field(default_factory=dict)


class _ValidationError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 on bad flags, not argparse's 2
        raise _ValidationError(f"{message}\n{self.format_usage()}")


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def _round9(obj):
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(v) for v in obj]
    return obj


def emit(result, fmt: str, path: str | None) -> None:
    """Write a result dict (json) or (header, rows) table (csv)."""
    if fmt == "json":
        text = json.dumps(_round9(result), indent=2) + "\n"
    elif fmt == "csv":
        header, rows = result
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) if isinstance(v, float) else str(v)
                           for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        raise _ValidationError(f"unknown format {fmt!r}")
    if path:
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as err:
            raise KramersError(f"cannot write {path}: {err}") from err
    else:
        sys.stdout.write(text)


def _kernel_payload(ctx) -> dict:
    return {"alpha": ctx.alpha, "l0": ctx.l0, "l1": ctx.l1, "l2": ctx.l2}


def _grid_payload(grid: KGrid) -> dict:
    return {"nodes": int(grid.size), "k_max": grid.k_max}


def _cmd_slip(cfg: RunConfig):
    series = build_series(cfg.alpha, cfg.order)
    exact_ref = None
    if cfg.extra.get("with_exact"):
        exact_ref = exact_mod.exact_slip_diffuse(cfg.alpha, ctx=series.ctx)
    sol = slip_velocity(cfg.alpha, cfg.q, cfg.order, series,
                        exact_reference=exact_ref)
    payload = {
        "alpha": cfg.alpha, "q": cfg.q, "order": cfg.order,
        "C": sol.C, "partials": list(sol.partials), "U": list(series.U),
        "kernel": _kernel_payload(series.ctx),
    }
    if exact_ref is not None:
        payload["exact_q1"] = exact_ref
    return payload


def _cmd_series(cfg: RunConfig):
    series = build_series(cfg.alpha, cfg.order)
    return {
        "alpha": cfg.alpha, "order": cfg.order, "U": list(series.U),
        "grid": _grid_payload(series.cache.grid),
        "kernel": _kernel_payload(series.ctx),
    }


def _cmd_profile(cfg: RunConfig):
    series = build_series(cfg.alpha, cfg.order)
    x_max = cfg.extra.get("x_max", 25.0)
    step = cfg.extra.get("x_step", 0.125)
    x = np.arange(0.0, x_max + 1e-9, step)
    prof = profile.full_profile(series, cfg.q, x)
    header = (["x"] + [f"Uc{n}" for n in range(cfg.order + 1)]
              + ["U_total", "U_asymptote"])
    rows = [[float(prof.x[i])]
            + [float(prof.Uc_by_order[n, i]) for n in range(cfg.order + 1)]
            + [float(prof.total[i]), float(prof.asymptote[i])]
            for i in range(prof.x.size)]
    return header, rows


def _scan_alpha_point(args):
    alpha, q, order = args
    series = build_series(alpha, order)
    sol = slip_velocity(alpha, q, order, series)
    k_v = slip_coefficient(alpha, q, order, series)
    return [alpha, k_v, sol.C] + list(series.U)


def _cmd_scan_alpha(cfg: RunConfig):
    lo = cfg.extra.get("alpha_from", -10.0)
    hi = cfg.extra.get("alpha_to", 4.0)
    steps = cfg.extra.get("steps", 15)
    alphas = np.linspace(lo, hi, steps)
    jobs = [(float(a), cfg.q, cfg.order) for a in alphas]
    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(_scan_alpha_point, jobs))
    header = ["alpha", "Kv", "C"] + [f"U{n}" for n in range(cfg.order + 1)]
    return header, rows


def _cmd_scan_q(cfg: RunConfig):
    lo = cfg.extra.get("q_from", 0.1)
    hi = cfg.extra.get("q_to", 1.0)
    steps = cfg.extra.get("steps", 19)
    series = build_series(cfg.alpha, cfg.order)
    rows = []
    for q in np.linspace(lo, hi, steps):
        sol = slip_velocity(cfg.alpha, float(q), cfg.order, series)
        k_v = slip_coefficient(cfg.alpha, float(q), cfg.order, series)
        rows.append([float(q), k_v, sol.C])
    return ["q", "Kv", "C"], rows


def _cmd_exact(cfg: RunConfig):
    ctx = make_context(cfg.alpha)
    return {
        "alpha": cfg.alpha,
        "V1": exact_mod.exact_slip_diffuse(cfg.alpha, ctx=ctx),
        "wall_exact": exact_mod.exact_wall_velocity(cfg.alpha, ctx=ctx),
    }


def _cmd_dimensional(cfg: RunConfig):
    params = GasParameters(
        mass=cfg.extra["mass"],
        temperature=cfg.extra["temperature"],
        collision_frequency=cfg.extra["collision_frequency"],
        number_density=cfg.extra.get("number_density"),
        gradient=cfg.extra.get("gradient", 0.0),
    )
    res: DimensionalResult = dimensional_slip(params, cfg.alpha, cfg.q,
                                              cfg.order)
    return {
        "alpha": cfg.alpha, "q": cfg.q,
        "eta_Pa_s": res.viscosity,
        "mfp_m": res.mean_free_path,
        "Kv": res.Kv,
        "u_sl_m_per_s": res.u_sl,
    }


def _cmd_inverse(cfg: RunConfig):
    u_sl = cfg.extra["u_sl"]
    g_v = inverse_kramers(u_sl, cfg.alpha, cfg.q, cfg.order)
    return {"alpha": cfg.alpha, "q": cfg.q, "order": cfg.order,
            "u_sl": u_sl, "G_v": g_v}


def _cmd_selftest(cfg: RunConfig):
    from .moments import MomentCache, coupling_J, kernel_S, moment_T
    from .quadrature import integrate

    report: dict = {}
    for alpha in (-30.0, -5.0, 0.0, 2.0):
        ctx = make_context(alpha)
        norm = integrate(ctx.kernel_values, -ctx.cutoff, ctx.cutoff)
        cache = MomentCache(ctx)
        residuals = cache.identity_residuals()
        t1_zero = ctx.l1 / ctx.l0
        j_vs_s = abs(coupling_J(0.7, 1.3, ctx)
                     - moment_T(1, 0.7, ctx) * moment_T(1, 1.3, ctx) / t1_zero
                     - 0.7**2 * kernel_S(0.7, 1.3, ctx))
        report[f"alpha={alpha:g}"] = {
            "kernel_norm_defect": abs(norm - 1.0),
            "coupling_identity": j_vs_s,
            **residuals,
        }
    series = build_series(-30.0, 2)
    g = inverse_kramers(slip_velocity(-30.0, 0.8, 2, series).C * 2.5,
                        -30.0, 0.8, 2, series)
    report["inverse_roundtrip_defect"] = abs(g - 2.5)
    worst = max(
        v for entry in report.values() if isinstance(entry, dict)
        for v in entry.values())
    report["worst_identity_residual"] = worst
    report["status"] = "ok" if worst < 1e-8 else "FAIL"
    if report["status"] == "FAIL":
        raise KramersError(f"selftest residual {worst:.3e} above 1e-8")
    return report


_COMMANDS = {
    "slip": (_cmd_slip, "json"),
    "series": (_cmd_series, "json"),
    "profile": (_cmd_profile, "csv"),
    "scan-alpha": (_cmd_scan_alpha, "csv"),
    "scan-q": (_cmd_scan_q, "csv"),
    "exact": (_cmd_exact, "json"),
    "dimensional": (_cmd_dimensional, "json"),
    "inverse": (_cmd_inverse, "json"),
    "selftest": (_cmd_selftest, "json"),
}


def run(cfg: RunConfig) -> int:
    """Execute one configured command and emit its artifact."""
    handler, default_fmt = _COMMANDS[cfg.command]
    result = handler(cfg)
    emit(result, cfg.fmt or default_fmt, cfg.path)
    return 0


def _add_common(p: argparse.ArgumentParser, q_default: float = 1.0) -> None:
    p.add_argument("--alpha", type=float, default=-30.0,
                   help="reduced chemical potential")
    p.add_argument("--q", type=float, default=q_default,
                   help="diffuseness in (0, 1]")
    p.add_argument("--order", type=int, default=3,
                   help="number of corrections (default 3)")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--output", default=None, help="output path (default stdout)")


def build_parser() -> _Parser:
    parser = _Parser(prog="kramers",
                     description="Isothermal slip of a quantum Fermi gas")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("slip", "series", "exact"):
        p = sub.add_parser(name)
        _add_common(p)
        if name == "slip":
            p.add_argument("--with-exact", action="store_true",
                           help="include the exact diffuse value")

    p = sub.add_parser("profile")
    _add_common(p)
    p.add_argument("--x-max", type=float, default=25.0)
    p.add_argument("--x-step", type=float, default=0.125)

    p = sub.add_parser("scan-alpha")
    _add_common(p)
    p.add_argument("--alpha-from", type=float, default=-10.0)
    p.add_argument("--alpha-to", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=15)

    p = sub.add_parser("scan-q")
    _add_common(p)
    p.add_argument("--q-from", type=float, default=0.1)
    p.add_argument("--q-to", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=19)

    p = sub.add_parser("dimensional")
    _add_common(p)
    p.add_argument("--mass", type=float, required=True, help="kg")
    p.add_argument("--temperature", type=float, required=True, help="K")
    p.add_argument("--collision-frequency", type=float, required=True,
                   help="1/s")
    p.add_argument("--number-density", type=float, default=None, help="1/m^3")
    p.add_argument("--gradient", type=float, default=0.0, help="1/s")

    p = sub.add_parser("inverse")
    _add_common(p)
    p.add_argument("--u-sl", type=float, required=True,
                   help="prescribed slip velocity (same units as G_v)")

    p = sub.add_parser("selftest")
    _add_common(p)
    return parser


_EXTRA_KEYS = ("with_exact", "x_max", "x_step", "alpha_from", "alpha_to",
               "steps", "q_from", "q_to", "mass", "temperature",
               "collision_frequency", "number_density", "gradient", "u_sl")


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    extra = {k: getattr(ns, k) for k in _EXTRA_KEYS
             if getattr(ns, k, None) is not None}
    return RunConfig(command=ns.command, alpha=ns.alpha, q=ns.q,
                     order=ns.order, fmt=ns.format, path=ns.output,
                     extra=extra)


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except _ValidationError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    try:
        return run(cfg)
    except (ValueError, _ValidationError) as err:
        print(f"invalid request: {err}", file=sys.stderr)
        return 1
    except KramersError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
