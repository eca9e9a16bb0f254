"""Command-line front end.

Subcommands: observable, moments, landscape, construct, detect, simulate.
JSON is used for single structured objects, CSV for grids and curves. Exit
codes: 0 success, 2 usage/input error, 3 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from . import constructions, landscape, qla, simulate
from .bloch import (
    BipartiteState,
    decompose,
    gell_mann_basis,
    max_entangled_state,
    pure_state,
    state_from_json,
    state_to_json,
)
from .criteria import detect_generalized, detect_schmidt
from .moments import normalized_point
from .observables import spectrum_full, spectrum_rank4

_BUILTIN_STATES = ("product", "bell", "iso")


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_state(spec: str, d: int | None, p: float | None) -> BipartiteState:
    if spec in _BUILTIN_STATES:
        if d is None:
            raise ValueError(f"builtin state '{spec}' requires --d")
        if spec == "product":
            vec = np.zeros(d * d)
            vec[0] = 1.0
            return pure_state(vec, d, d)
        if spec == "bell":
            return max_entangled_state(d)
        if p is None:
            raise ValueError("builtin state 'iso' requires --p")
        return simulate.isotropic_state(d, p)
    try:
        with open(spec, encoding="utf-8") as fh:
            obj = json.load(fh)
    except FileNotFoundError:
        raise ValueError(f"state file not found: {spec}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed state JSON at {spec}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return state_from_json(obj)


def cmd_observable(args) -> int:
    spec = spectrum_rank4(args.d) if args.rank4 else spectrum_full(args.d)
    payload = {
        "d": spec.d,
        "kind": spec.kind,
        "match_order": spec.match_order,
        "eigenvalues": [{"re": ev.real, "im": ev.imag} for ev in spec.eigenvalues],
    }
    _write_text(args.out, _json_dumps(payload))
    return 0


def cmd_moments(args) -> int:
    state = _load_state(args.state, args.d, args.p)
    point = normalized_point(decompose(state, gell_mann_basis(state.d1), gell_mann_basis(state.d2)))
    payload = {
        "d1": point.d1,
        "d2": point.d2,
        "s2": point.s2,
        "s4": point.s4,
        "r2": point.r2t,
        "r4": point.r4t,
    }
    _write_text(args.out, _json_dumps(payload))
    return 0


def cmd_landscape(args) -> int:
    curves = landscape.emit_curves(args.d1, args.d2, args.k, args.samples)
    lines = ["x,lower,upper,k,d1,d2,is_kink"]
    for x, lo, up, is_kink in curves.samples:
        lines.append(f"{x!r},{lo!r},{up!r},{curves.k},{curves.d1},{curves.d2},{int(is_kink)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    meta = _json_dumps(
        {
            "k": curves.k,
            "upper_tight": curves.upper_tight,
            "n_kinks": len(curves.kinks),
            "x_max": landscape.purity_cap_x(curves.d1, curves.d2, curves.k),
        }
    )
    # metadata cannot live inside the pinned CSV schema
    (sys.stdout if args.out else sys.stderr).write(meta)
    return 0


def cmd_construct(args) -> int:
    if args.kind == "trio":
        eset = constructions.qubit_trio()
    elif args.kind == "sicpad":
        if args.d is None:
            raise ValueError("--kind sicpad requires --d")
        eset = constructions.pad_sic(args.d)
    else:
        if args.d is None or args.m is None:
            raise ValueError("--kind mub requires --d and --m")
        mubs = constructions.mub_prime(args.d)
        state = constructions.theorem3_state(mubs, args.m)
        report = constructions.projector_report(state, 1.0 / args.m)
        return _emit_construct(args, state, report)
    if args.p is None:
        state = constructions.theorem2_state(eset)
        scale = (eset.d - 1) / len(eset)
        report = constructions.projector_report(state, scale)
    else:
        state = constructions.corollary1_family(eset, args.p)
        expected = constructions.corollary1_expected_spectrum(eset.d, len(eset) - 1, args.p)
        report = constructions.spectrum_report(state, expected)
    return _emit_construct(args, state, report)


def _emit_construct(args, state, report) -> int:
    state_json = state_to_json(state)
    report_json = {"identity": report.identity, "residual": report.residual, "pass": report.passed}
    if args.out:
        _write_text(args.out, _json_dumps(state_json))
        sys.stdout.write(_json_dumps(report_json))
    else:
        sys.stdout.write(_json_dumps({"state": state_json, "verification": report_json}))
    return 0


def cmd_detect(args) -> int:
    state = _load_state(args.state, args.d, args.p)
    if args.x is not None or args.y is not None:
        verdict = detect_generalized(state, args.k, args.x or 0.0, args.y or 0.0)
    else:
        deco = decompose(state, gell_mann_basis(state.d1), gell_mann_basis(state.d2))
        verdict = detect_schmidt(deco, args.k)
    payload = {
        "trace_norm_value": verdict.trace_norm_value,
        "bound": verdict.bound,
        "k_tested": verdict.k_tested,
        "detected": verdict.detected,
        "margin": verdict.margin,
    }
    _write_text(args.out, _json_dumps(payload))
    return 0


_CONFIG_KEYS = {"d", "p", "M", "K", "reps", "k_target", "seed"}


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def cmd_simulate(args) -> int:
    try:
        with open(args.config, "rb") as fh:
            cfg = tomllib.load(fh)
    except FileNotFoundError:
        raise ValueError(f"config file not found: {args.config}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ValueError(f"malformed TOML config: {exc}") from None
    unknown = cfg.keys() - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    for key in ("d", "p"):
        if key not in cfg:
            raise ValueError(f"config is missing required field '{key}'")
    d_values = _as_list(cfg["d"])
    p_values = _as_list(cfg["p"])
    k_values = _as_list(cfg.get("k_target", 1))
    m_values = tuple(_as_list(cfg.get("M", list(simulate.DEFAULT_M_VALUES))))
    shots = int(cfg.get("K", 100))
    reps = int(cfg.get("reps", 100))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))

    header = "d,p,k,M,K,reps,r2_mean,r2_std,r4_mean,r4_std,stat_mean,stat_std,m_star,total"
    lines = [header]
    meta_lines = []
    grid_index = 0
    for d in d_values:
        for p in p_values:
            for k in k_values:
                study = simulate.run_budget_study(
                    int(d), float(p), int(k), m_values, shots, reps, seed, grid_index
                )
                for row in study.rows:
                    lines.append(
                        f"{row.d},{row.p!r},{row.k},{row.M},{row.K},{row.reps},"
                        f"{row.r2_mean!r},{row.r2_std!r},{row.r4_mean!r},{row.r4_std!r},"
                        f"{row.stat_mean!r},{row.stat_std!r},{row.m_star!r},"
                        f"{row.total_measurements!r}"
                    )
                meta_lines.append(
                    _json_dumps(
                        {
                            "d": row.d,
                            "p": row.p,
                            "k": row.k,
                            "p_min": study.p_min,
                            "p_max": study.p_max,
                            "window_empty": study.window_empty,
                            "m_star": study.m_star,
                            "total": study.total_measurements,
                        }
                    )
                )
                grid_index += 1
    _write_text(args.out, "\n".join(lines) + "\n")
    (sys.stdout if args.out else sys.stderr).write("".join(meta_lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrmoments",
        description="Correlation-matrix geometry: moment observables, Schmidt-number "
        "criteria, boundary curves, extremal constructions, and measurement simulation.",
    )
    parser.add_argument("--seed", type=int, default=None, help="master RNG seed (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_obs = sub.add_parser("observable", help="moment-matching observable spectrum (JSON)")
    p_obs.add_argument("--d", type=int, required=True, help="local dimension (2..10)")
    p_obs.add_argument("--rank4", action="store_true", help="rank-4 observable instead of full")
    p_obs.add_argument("--out", help="output file (default stdout)")
    p_obs.set_defaults(func=cmd_observable)

    p_mom = sub.add_parser("moments", help="normalized (R2, R4) of a state (JSON)")
    p_mom.add_argument(
        "--state", required=True, help="state JSON file or builtin: product | bell | iso"
    )
    p_mom.add_argument("--d", type=int, help="local dimension for builtin states")
    p_mom.add_argument("--p", type=float, help="noise parameter for the iso builtin")
    p_mom.add_argument("--out", help="output file (default stdout)")
    p_mom.set_defaults(func=cmd_moments)

    p_land = sub.add_parser("landscape", help="boundary curves of a Schmidt-number region (CSV)")
    p_land.add_argument("--d1", type=int, required=True)
    p_land.add_argument("--d2", type=int, required=True)
    p_land.add_argument("--k", type=int, default=1, help="Schmidt number of the region")
    p_land.add_argument("--samples", type=int, default=200, help="grid size (kinks always added)")
    p_land.add_argument("--out", help="CSV file (default stdout; metadata then goes to stderr)")
    p_land.set_defaults(func=cmd_landscape)

    p_con = sub.add_parser("construct", help="extremal separable state + verification report")
    p_con.add_argument("--kind", required=True, choices=("trio", "sicpad", "mub"))
    p_con.add_argument("--d", type=int, help="local dimension (sicpad: 3 or 4; mub: 2,3,4,5,7)")
    p_con.add_argument("--m", type=int, help="number of bases used (mub kind)")
    p_con.add_argument(
        "--p", type=float, help="interpolation weight: boundary family instead of the kink state"
    )
    p_con.add_argument("--out", help="write state JSON here; report goes to stdout")
    p_con.set_defaults(func=cmd_construct)

    p_det = sub.add_parser("detect", help="Schmidt-number criterion verdict (JSON)")
    p_det.add_argument("--state", required=True, help="state JSON file or builtin name")
    p_det.add_argument("--d", type=int, help="local dimension for builtin states")
    p_det.add_argument("--p", type=float, help="noise parameter for the iso builtin")
    p_det.add_argument("--k", type=int, required=True, help="Schmidt number to test against")
    p_det.add_argument("--x", type=float, help="augmented-criterion weight on side A")
    p_det.add_argument("--y", type=float, help="augmented-criterion weight on side B")
    p_det.add_argument("--out", help="output file (default stdout)")
    p_det.set_defaults(func=cmd_detect)

    p_sim = sub.add_parser("simulate", help="measurement-budget study over a TOML grid (CSV)")
    p_sim.add_argument("--config", required=True, help="TOML file with SimulationConfig fields")
    p_sim.add_argument("--out", help="CSV file (default stdout; window JSON then on stderr)")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except qla.ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
