"""Command line front end: config parsing, experiment execution, CSV and
metadata artifact emission."""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import experiments, grp, riemann, scheme
from .core import ConservedState, StateSpaceClass, classify
from .errors import ParseError, SolverError, ValidationError
from .experiments import (
    CONVERGENCE_NS,
    GaussianInitial,
    RiemannInitial,
    TestCase,
    TravellingWaveInitial,
)
from .scheme import BoundaryCondition, LimiterMode, SchemeKind

_KNOWN_KEYS = frozenset({
    "case", "scheme", "N", "cfl", "theta", "limiter", "t_end",
    "domain_lo", "domain_hi", "bc", "left", "right", "x_jump",
    "profile", "output",
})

_CUSTOM_REQUIRED = ("domain_lo", "domain_hi", "t_end", "N")


@dataclass(frozen=True)
class RunConfig:
    case: TestCase
    scheme: SchemeKind
    output: str


def _fmt(x) -> str:
    # shortest round-trip decimal form, at most 17 significant digits
    return repr(float(x))


def _parse_float(value: str, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ValidationError(f"key {key!r} needs a number, got {value!r}", key=key)


def _parse_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ValidationError(f"key {key!r} needs an integer, got {value!r}", key=key)


def _parse_enum(value: str, enum_cls, key: str):
    for member in enum_cls:
        if member.value == value:
            return member
    allowed = ", ".join(m.value for m in enum_cls)
    raise ValidationError(f"key {key!r} must be one of {allowed}, got {value!r}",
                          key=key)


def _parse_state(value: str, key: str) -> ConservedState:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 4:
        raise ValidationError(f"key {key!r} needs 'f,b,g,q', got {value!r}", key=key)
    state = ConservedState(*(_parse_float(p, key) for p in parts))
    if classify(state) is not StateSpaceClass.U:
        raise ValidationError(f"key {key!r}: state {value!r} is outside the "
                              "admissible set", key=key)
    return state


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a `key = value` run configuration."""
    pairs: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}",
                             line_no=line_no)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key:
            raise ParseError("missing key before '='", line_no=line_no)
        if key not in _KNOWN_KEYS:
            raise ValidationError(f"unknown key {key!r}", key=key)
        if key in pairs:
            raise ValidationError(f"duplicate key {key!r}", key=key)
        if not value:
            raise ValidationError(f"empty value for key {key!r}", key=key)
        pairs[key] = value
    return _resolve(pairs)


def _resolve(pairs: dict[str, str]) -> RunConfig:
    if "case" not in pairs:
        raise ValidationError("config must set 'case'", key="case")
    name = pairs["case"]
    kind = _parse_enum(pairs.get("scheme", "grp"), SchemeKind, "scheme")

    if name == "custom":
        for key in _CUSTOM_REQUIRED:
            if key not in pairs:
                raise ValidationError(f"custom case needs key {key!r}", key=key)
        if "profile" in pairs:
            for key in ("left", "right", "x_jump"):
                if key in pairs:
                    raise ValidationError(
                        f"key {key!r} conflicts with 'profile'", key=key)
            profile = pairs["profile"]
            if profile == "travelling-wave":
                initial = TravellingWaveInitial()
            elif profile == "gaussian":
                initial = GaussianInitial()
            else:
                raise ValidationError(
                    f"unknown profile {profile!r} (travelling-wave, gaussian)",
                    key="profile")
        else:
            for key in ("left", "right"):
                if key not in pairs:
                    raise ValidationError(
                        "custom case needs 'left' and 'right' states or a "
                        "'profile'", key=key)
            initial = RiemannInitial(
                _parse_state(pairs["left"], "left"),
                _parse_state(pairs["right"], "right"),
                x_jump=_parse_float(pairs.get("x_jump", "0"), "x_jump"),
            )
        case = TestCase(
            name="custom",
            x_lo=_parse_float(pairs["domain_lo"], "domain_lo"),
            x_hi=_parse_float(pairs["domain_hi"], "domain_hi"),
            t_end=_parse_float(pairs["t_end"], "t_end"),
            n_cells=_parse_int(pairs["N"], "N"),
            initial=initial,
            cfl=_parse_float(pairs.get("cfl", "0.4"), "cfl"),
            theta=_parse_float(pairs.get("theta", "1.0"), "theta"),
            bc=_parse_enum(pairs.get("bc", "outflow"), BoundaryCondition, "bc"),
            limiter=_parse_enum(pairs.get("limiter", "minmod"), LimiterMode,
                                "limiter"),
        )
    else:
        builtin = experiments.builtin_cases()
        if name not in builtin:
            known = ", ".join(sorted(builtin))
            raise ValidationError(f"unknown case {name!r} (use {known}, or "
                                  "'custom')", key="case")
        for key in ("left", "right", "x_jump", "profile"):
            if key in pairs:
                raise ValidationError(
                    f"key {key!r} is only valid with case = custom", key=key)
        case = builtin[name]
        overrides = {}
        if "N" in pairs:
            overrides["n_cells"] = _parse_int(pairs["N"], "N")
        if "t_end" in pairs:
            overrides["t_end"] = _parse_float(pairs["t_end"], "t_end")
        if "domain_lo" in pairs:
            overrides["x_lo"] = _parse_float(pairs["domain_lo"], "domain_lo")
        if "domain_hi" in pairs:
            overrides["x_hi"] = _parse_float(pairs["domain_hi"], "domain_hi")
        if "cfl" in pairs:
            overrides["cfl"] = _parse_float(pairs["cfl"], "cfl")
        if "theta" in pairs:
            overrides["theta"] = _parse_float(pairs["theta"], "theta")
        if "bc" in pairs:
            overrides["bc"] = _parse_enum(pairs["bc"], BoundaryCondition, "bc")
        if "limiter" in pairs:
            overrides["limiter"] = _parse_enum(pairs["limiter"], LimiterMode,
                                               "limiter")
        if overrides:
            case = replace(case, **overrides)

    if case.x_hi <= case.x_lo:
        raise ValidationError("domain_hi must exceed domain_lo", key="domain_hi")
    if case.t_end < 0.0:
        raise ValidationError("t_end must be nonnegative", key="t_end")
    if case.n_cells < 3:
        raise ValidationError("need at least 3 cells", key="N")
    if not 0.0 < case.cfl <= 1.0:
        raise ValidationError("cfl must lie in (0, 1]", key="cfl")
    if not 0.0 <= case.theta < 2.0:
        raise ValidationError("theta must lie in [0, 2)", key="theta")

    output = pairs.get("output", f"{case.name}_{kind.value}.csv")
    return RunConfig(case=case, scheme=kind, output=output)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _solution_csv(grid) -> str:
    lines = ["x,f,b,g,q"]
    X = grid.centers()
    U = grid.averages
    for j in range(grid.n_cells):
        lines.append(",".join((_fmt(X[j]), _fmt(U[0, j]), _fmt(U[1, j]),
                               _fmt(U[2, j]), _fmt(U[3, j]))))
    return "\n".join(lines) + "\n"


def _meta_lines(cfg: RunConfig, grid, log) -> str:
    lines = [
        f"case = {cfg.case.name}",
        f"scheme = {cfg.scheme.value}",
        f"N = {grid.n_cells}",
        f"cfl = {_fmt(cfg.case.cfl)}",
        f"theta = {_fmt(cfg.case.theta)}",
        f"limiter = {cfg.case.limiter.value}",
        f"bc = {cfg.case.bc.value}",
        f"t_end = {_fmt(cfg.case.t_end)}",
        f"steps = {log.steps}",
        f"wall_seconds = {_fmt(log.wall_seconds)}",
        "conserved_start = " + ",".join(_fmt(v) for v in log.conserved_start),
        "conserved_end = " + ",".join(_fmt(v) for v in log.conserved_end),
    ]
    return "\n".join(lines) + "\n"


def cmd_run(config_path: str) -> int:
    with open(config_path, encoding="utf-8") as fh:
        cfg = parse_config(fh.read())
    grid, log = experiments.run_case(cfg.case, cfg.scheme)
    _write_text(cfg.output, _solution_csv(grid))
    _write_text(cfg.output + ".meta", _meta_lines(cfg, grid, log))
    print(f"{cfg.case.name}: {cfg.scheme.value}, N={grid.n_cells}, "
          f"{log.steps} steps to t={_fmt(grid.t)} -> {cfg.output}")
    return 0


def _convergence_rows():
    kinds = (SchemeKind.GRP2, SchemeKind.MUSCL_RK2)
    tasks = [(kind, n) for kind in kinds for n in CONVERGENCE_NS]
    workers = max(1, int(os.environ.get("GRP_THREADS", "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {t: pool.submit(experiments.convergence_point, *t)
                       for t in tasks}
            results = {t: f.result() for t, f in futures.items()}
    else:
        results = {t: experiments.convergence_point(*t) for t in tasks}

    rows = []
    for n in CONVERGENCE_NS:
        for kind in kinds:
            report, _ = results[(kind, n)]
            prev = None
            i = CONVERGENCE_NS.index(n)
            if i > 0:
                prev, _ = results[(kind, CONVERGENCE_NS[i - 1])]
            for var in experiments.VARIABLES:
                cells = [str(n), kind.value, var]
                for norm in ("l1", "l2", "linf"):
                    err = getattr(report, norm)[var]
                    cells.append(_fmt(err))
                    if prev is None:
                        cells.append("")
                    else:
                        order = experiments.observed_order(
                            getattr(prev, norm)[var], err)
                        cells.append(_fmt(order))
                cells.append(_fmt(report.wall_seconds))
                rows.append(",".join(cells))
    return rows


def cmd_convergence(out_dir: str) -> int:
    os.makedirs(out_dir, exist_ok=True)
    header = "N,scheme,var,L1,L1_order,L2,L2_order,Linf,Linf_order,wall_seconds"
    rows = _convergence_rows()
    path = os.path.join(out_dir, "convergence.csv")
    _write_text(path, "\n".join([header] + rows) + "\n")
    print(f"wrote {path} ({len(rows)} rows)")
    return 0


def _fan_speed_window(fan) -> tuple[float, float]:
    speeds = [fan.wave1_speeds[0], fan.wave1_speeds[1], fan.sigma2,
              fan.sigma3, fan.wave4_speeds[0], fan.wave4_speeds[1]]
    return min(speeds), max(speeds)


def _riemann_summary(fan, t: float) -> str:
    w1 = "rarefaction" if fan.config.wave1 is riemann.WaveKind.RAREFACTION else "shock"
    w4 = "rarefaction" if fan.config.wave4 is riemann.WaveKind.RAREFACTION else "shock"
    lines = [
        f"configuration = {fan.describe()}",
        f"time = {_fmt(t)}",
        "left = " + ",".join(_fmt(v) for v in fan.UL.as_array()),
        "right = " + ",".join(_fmt(v) for v in fan.UR.as_array()),
        "star_left = " + ",".join(_fmt(v) for v in fan.star_left.as_array()),
        "star_middle = " + ",".join(_fmt(v) for v in fan.star_middle.as_array()),
        "star_right = " + ",".join(_fmt(v) for v in fan.star_right.as_array()),
        f"ustar = {_fmt(fan.ustar)}",
        f"vstar = {_fmt(fan.vstar)}",
        f"wave1 = {w1} speeds {_fmt(fan.wave1_speeds[0])}"
        f",{_fmt(fan.wave1_speeds[1])}",
        f"sigma2 = {_fmt(fan.sigma2)}",
        f"sigma3 = {_fmt(fan.sigma3)}",
        f"wave4 = {w4} speeds {_fmt(fan.wave4_speeds[0])}"
        f",{_fmt(fan.wave4_speeds[1])}",
    ]
    return "\n".join(lines) + "\n"


def cmd_riemann(left: str, right: str, time: float, samples: int,
                out: str) -> int:
    UL = _parse_state(left, "left")
    UR = _parse_state(right, "right")
    if time <= 0.0:
        raise ValidationError("--time must be positive", key="t_end")
    if samples < 2:
        raise ValidationError("--samples must be at least 2", key="N")
    fan = riemann.solve_star_states(UL, UR)
    smin, smax = _fan_speed_window(fan)
    half = 1.25 * time * max(abs(smin), abs(smax), 0.8)
    x = np.linspace(-half, half, samples)
    vals = riemann.sample_many(fan, x / time)
    lines = ["x,f,b,g,q"]
    for j in range(samples):
        lines.append(",".join((_fmt(x[j]), _fmt(vals[0, j]), _fmt(vals[1, j]),
                               _fmt(vals[2, j]), _fmt(vals[3, j]))))
    _write_text(out, "\n".join(lines) + "\n")
    summary = _riemann_summary(fan, time)
    _write_text(out + ".meta", summary)
    sys.stdout.write(summary)
    print(f"wrote {out}")
    return 0


def _compare_component(solver_val: float, oracle_val: float, tol: float):
    # components below 1e-8 in the oracle are compared absolutely
    if abs(oracle_val) < 1e-8:
        err = abs(solver_val - oracle_val)
        return err, "abs", err <= 1e-6
    err = abs(solver_val - oracle_val) / abs(oracle_val)
    return err, "rel", err <= tol


def cmd_grp_check(out_dir: str) -> int:
    os.makedirs(out_dir, exist_ok=True)
    rows = ["case,component,solver,oracle,error,mode,tol,status"]
    n_failed = 0
    for case in experiments.grp_check_cases():
        _, dudt = grp.grp_interface(case.left, np.asarray(case.dleft),
                                    case.right, np.asarray(case.dright))
        oracle = experiments.fd_derivative_oracle(
            case.left, case.dleft, case.right, case.dright, n_ref=case.n_ref)
        worst = 0.0
        case_failed = 0
        for i, var in enumerate(experiments.VARIABLES):
            err, mode, ok = _compare_component(dudt[i], oracle[i], case.tol)
            if case.gated:
                status = "pass" if ok else "fail"
                case_failed += 0 if ok else 1
            else:
                status = "info"
            worst = max(worst, err) if mode == "rel" else worst
            rows.append(",".join((case.name, var, _fmt(dudt[i]),
                                  _fmt(oracle[i]), _fmt(err), mode,
                                  _fmt(case.tol), status)))
        n_failed += case_failed
        tag = "info" if not case.gated else ("ok" if case_failed == 0 else "FAIL")
        print(f"{case.name}: worst relative error {worst:.3e} [{tag}]")
    path = os.path.join(out_dir, "grp_check.csv")
    _write_text(path, "\n".join(rows) + "\n")
    print(f"wrote {path}")
    if n_failed:
        print(f"{n_failed} component comparison(s) out of tolerance",
              file=sys.stderr)
        return 1
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twolayerfilm",
        description="Finite-volume solvers for a 4x4 two-layer thin-film "
                    "system with a second-order interface-derivative method.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one simulation from a config file")
    p_run.add_argument("config", help="path to a key = value config file")

    p_conv = sub.add_parser("convergence",
                            help="travelling-wave error table for the "
                                 "second-order schemes")
    p_conv.add_argument("--out", default=".", help="output directory")

    p_rie = sub.add_parser("riemann", help="sample an exact Riemann solution")
    p_rie.add_argument("--left", required=True, metavar="f,b,g,q")
    p_rie.add_argument("--right", required=True, metavar="f,b,g,q")
    p_rie.add_argument("--time", required=True, type=float)
    p_rie.add_argument("--samples", type=int, default=400)
    p_rie.add_argument("--out", default="riemann.csv")

    p_chk = sub.add_parser("grp-check",
                           help="compare interface time derivatives against "
                                "a fine-grid finite-difference oracle")
    p_chk.add_argument("--out", default=".", help="output directory")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args.config)
        if args.command == "convergence":
            return cmd_convergence(args.out)
        if args.command == "riemann":
            return cmd_riemann(args.left, args.right, args.time, args.samples,
                               args.out)
        if args.command == "grp-check":
            return cmd_grp_check(args.out)
    except (SolverError, OSError) as exc:
        where = getattr(exc, "line_no", None)
        prefix = f"error (line {where})" if where is not None else "error"
        print(f"{prefix}: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
