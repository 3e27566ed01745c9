"""Command-line driver: solve configs, run sweeps, validate, export regions.

Config files are flat structured text with dotted keys ("network.h_SD =
0.4,0.4"). Complex gains accept "re,im", a bare real, or polar "mag<deg"
(also written "mag∠deg"). Reports echo the full-precision config followed
by "result.*" lines, so a report file round-trips as a config file
(result lines are ignored on ingest). Rates print with 6 significant digits
unless --precise is given.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from . import analytic, informed, matrixgame, montecarlo, regions
from .channel import NetworkConfig, compute_snrs, gain_from_polar
from .errors import (
    ConfigError,
    DegenerateGeometryError,
    EmptyReductionError,
    LpFailureError,
    ResolutionError,
    WrongCaseError,
)
from .reduction import reduce_game

JOBS_ENV = "SECRECYGAME_JOBS"
DEFAULT_LP_T = 400
DEFAULT_GRID = 201
DEFAULT_MC_PROBES = 300

PROBLEMS = ("p1", "p1-nocodebook", "p2-noise", "p2-codeword")

#: Fixed sweep column order (CSV schema sweep-v1).
SCENARIOS = (
    "p1",
    "p1-nocodebook",
    "p2-noise",
    "p2-noise-xr-z",
    "p2-noise-xr-rho-xs",
    "p2-codeword",
    "p2-codeword-xr-z",
    "p2-codeword-xr-rho-xs",
)

_DEFAULT_SCENARIOS = {
    "p1": ("p1",),
    "p1-nocodebook": ("p1-nocodebook",),
    "p2-noise": ("p2-noise", "p2-noise-xr-z", "p2-noise-xr-rho-xs"),
    "p2-codeword": ("p2-codeword", "p2-codeword-xr-z", "p2-codeword-xr-rho-xs"),
}

_GAIN_KEYS = ("h_SD", "h_RD", "h_SE", "h_RE")


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter sweep: evenly spaced points, one CSV row per point."""

    parameter: str
    start: float
    stop: float
    steps: int
    scenarios: tuple = ()


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs: the network plus solver knobs."""

    network: NetworkConfig
    problem: str = "p1"
    lp_T: int = DEFAULT_LP_T
    grid_resolution: int = DEFAULT_GRID
    mc_blocks: int | None = None
    seed: int = 0
    sweep: SweepSpec | None = None

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        if self.lp_T < 2:
            raise ConfigError(f"lp_T must be >= 2, got {self.lp_T}")
        if self.grid_resolution < 3:
            raise ConfigError(f"grid_resolution must be >= 3, got {self.grid_resolution}")
        if self.mc_blocks is not None and self.mc_blocks < 1:
            raise ConfigError(f"mc_blocks must be >= 1, got {self.mc_blocks}")
        if self.sweep is not None and self.sweep.steps < 2:
            raise ConfigError(f"sweep.steps must be >= 2, got {self.sweep.steps}")


# ---------------------------------------------------------------------------
# parsing and formatting


def parse_complex(text: str) -> complex:
    """Parse "re,im", "mag<deg" / "mag∠deg", or a bare real."""
    s = text.strip()
    for angle_mark in ("∠", "<"):
        if angle_mark in s:
            mag_s, _, deg_s = s.partition(angle_mark)
            return gain_from_polar(float(mag_s), math.radians(float(deg_s)))
    if "," in s:
        re_s, _, im_s = s.partition(",")
        return complex(float(re_s), float(im_s))
    return complex(float(s), 0.0)


def format_complex(z: complex) -> str:
    return f"{z.real!r},{z.imag!r}"


def parse_config_text(text: str) -> dict:
    """Flat dotted-key config; '#' comments; 'result.*' and 'schema' ignored."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key == "schema" or key.startswith("result."):
            continue
        out[key] = value.strip()
    return out


def build_run_config(kv: dict, overrides: dict | None = None) -> RunConfig:
    """Assemble a RunConfig from parsed key/values plus CLI overrides."""
    kv = dict(kv)
    kv.update({k: v for k, v in (overrides or {}).items() if v is not None})

    def take(key, default=None):
        return kv.pop(key, default)

    gains = {}
    for name in _GAIN_KEYS:
        raw = take(f"network.{name}")
        if raw is None:
            raise ConfigError(f"missing config key network.{name}")
        gains[name] = parse_complex(str(raw))
    net = NetworkConfig(
        P_S=float(take("network.P_S", 0.0)),
        P_R=float(take("network.P_R", 0.0)),
        N_0=float(take("network.N_0", 0.0)),
        **gains,
    )
    sweep = None
    if any(k.startswith("sweep.") for k in kv):
        raw_scen = str(take("sweep.scenarios", "")).strip()
        if raw_scen in ("", "default"):
            scenarios = ()
        elif raw_scen == "all":
            scenarios = SCENARIOS
        else:
            scenarios = tuple(s.strip() for s in raw_scen.split(",") if s.strip())
            unknown = [s for s in scenarios if s not in SCENARIOS]
            if unknown:
                raise ConfigError(f"unknown sweep scenarios {unknown}")
        sweep = SweepSpec(
            parameter=str(take("sweep.parameter", "")),
            start=float(take("sweep.start", 0.0)),
            stop=float(take("sweep.stop", 0.0)),
            steps=int(take("sweep.steps", 0)),
            scenarios=scenarios,
        )
    mc_raw = take("mc_blocks")
    cfg = RunConfig(
        network=net,
        problem=str(take("problem", "p1")),
        lp_T=int(take("lp_T", DEFAULT_LP_T)),
        grid_resolution=int(take("grid_resolution", DEFAULT_GRID)),
        mc_blocks=None if mc_raw in (None, "", "none") else int(mc_raw),
        seed=int(take("seed", 0)),
        sweep=sweep,
    )
    if kv:
        raise ConfigError(f"unknown config keys: {sorted(kv)}")
    return cfg


def load_config_file(path: str, overrides: dict | None = None) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return build_run_config(parse_config_text(fh.read()), overrides)


def config_lines(cfg: RunConfig) -> list:
    """Full-precision config echo; re-ingesting reproduces the run exactly."""
    lines = [("schema", "report-v1")]
    for name in _GAIN_KEYS:
        lines.append((f"network.{name}", format_complex(getattr(cfg.network, name))))
    for name in ("P_S", "P_R", "N_0"):
        lines.append((f"network.{name}", repr(getattr(cfg.network, name))))
    lines.append(("problem", cfg.problem))
    lines.append(("lp_T", str(cfg.lp_T)))
    lines.append(("grid_resolution", str(cfg.grid_resolution)))
    lines.append(("seed", str(cfg.seed)))
    if cfg.mc_blocks is not None:
        lines.append(("mc_blocks", str(cfg.mc_blocks)))
    if cfg.sweep is not None:
        lines.append(("sweep.parameter", cfg.sweep.parameter))
        lines.append(("sweep.start", repr(cfg.sweep.start)))
        lines.append(("sweep.stop", repr(cfg.sweep.stop)))
        lines.append(("sweep.steps", str(cfg.sweep.steps)))
        if cfg.sweep.scenarios:
            lines.append(("sweep.scenarios", ",".join(cfg.sweep.scenarios)))
    return lines


def apply_sweep_parameter(net: NetworkConfig, path: str, value: float) -> NetworkConfig:
    """Return a copy of the network with one swept parameter replaced.

    Paths: P_S, P_R, N_0, or h_XY.{real,imag,magnitude,phase} with phase in
    radians (magnitude preserved when setting phase and vice versa).
    """
    if path in ("P_S", "P_R", "N_0"):
        return replace(net, **{path: value})
    gain, _, attr = path.partition(".")
    if gain in _GAIN_KEYS and attr in ("real", "imag", "magnitude", "phase"):
        z = getattr(net, gain)
        if attr == "real":
            new = complex(value, z.imag)
        elif attr == "imag":
            new = complex(z.real, value)
        elif attr == "magnitude":
            new = gain_from_polar(value, cmath.phase(z) if z != 0 else 0.0)
        else:
            new = gain_from_polar(abs(z), value)
        return net.replace_gain(gain, new)
    raise ConfigError(f"unknown sweep parameter path {path!r}")


# ---------------------------------------------------------------------------
# solving


def _fmt(v: float, precise: bool) -> str:
    if precise:
        return repr(float(v))
    return f"{float(v):.6g}"


def _strategy_lines(prefix: str, strat: analytic.MixedStrategy, precise: bool) -> list:
    lines = [
        (f"{prefix}.support_lo", _fmt(strat.support_lo, precise)),
        (f"{prefix}.support_hi", _fmt(strat.support_hi, precise)),
        (
            f"{prefix}.atoms",
            ";".join(f"{_fmt(l, precise)}:{_fmt(m, precise)}" for l, m in strat.atoms),
        ),
    ]
    if strat.segments:
        seg_text = "|".join(
            ",".join(
                _fmt(getattr(seg, f), precise)
                for f in ("lo", "hi", "x0", "span", "s", "A", "B", "C")
            )
            for seg in strat.segments
        )
        lines.append((f"{prefix}.segments", seg_text))
    return lines


def solve_problem(cfg: RunConfig):
    """Dispatch one problem instance; returns an analytic or informed report."""
    if cfg.problem in ("p1", "p1-nocodebook"):
        cp = regions.corner_points(compute_snrs(cfg.network))
        if cfg.problem == "p1":
            return analytic.solve_problem1(cp, cfg.lp_T)
        return analytic.solve_unknown_codebook(cp)
    z_kind = (
        informed.GAUSSIAN_NOISE if cfg.problem == "p2-noise" else informed.STRUCTURED_CODEWORD
    )
    return informed.solve_informed(cfg.network, z_kind, cfg.grid_resolution)


def run(cfg: RunConfig, precise: bool = False) -> list:
    """Solve per the config and return the report document as (key, value) lines."""
    return document_lines(cfg, solve_problem(cfg), precise)


def document_lines(cfg: RunConfig, report, precise: bool = False) -> list:
    lines = config_lines(cfg)
    lines.append(("result.problem", cfg.problem))
    if isinstance(report, analytic.EquilibriumReport):
        lines.append(("result.case", report.case))
        lines.append(("result.method", report.method))
        lines.append(("result.value", _fmt(report.value, precise)))
        lines.append(("result.error_bound", _fmt(report.error_bound, precise)))
        lines.extend(_strategy_lines("result.source", report.source_strategy, precise))
        lines.extend(_strategy_lines("result.jammer", report.jammer_strategy, precise))
        for i, note in enumerate(report.notes):
            lines.append((f"result.note.{i}", note))
        if cfg.mc_blocks is not None:
            if cfg.problem != "p1":
                raise ConfigError("Monte Carlo validation applies to problem p1 only")
            cp = regions.corner_points(compute_snrs(cfg.network))
            stats = montecarlo.play(
                cp, report.source_strategy, report.jammer_strategy, cfg.mc_blocks, cfg.seed
            )
            gap_s, gap_j = montecarlo.audit_deviations(
                cp,
                report.source_strategy,
                report.jammer_strategy,
                probe_count=DEFAULT_MC_PROBES,
                seed=cfg.seed,
            )
            lines.extend(_mc_lines(stats, gap_s, gap_j, precise))
    else:
        method = "informed-noise" if cfg.problem == "p2-noise" else "informed-codeword"
        lines.append(("result.method", method))
        lines.append(("result.special_case", report.special_case))
        lines.append(("result.value", _fmt(report.value, precise)))
        lines.append(("result.policy.rho", format_complex(report.policy.rho)))
        lines.append(("result.policy.N_Z", _fmt(report.policy.N_Z, precise)))
        lines.append(("result.policy.z_kind", report.policy.z_kind))
        lines.append(("result.N_D_eff", _fmt(report.N_D_eff, precise)))
        lines.append(("result.N_E_eff", _fmt(report.N_E_eff, precise)))
        if report.R_Z_max is not None:
            lines.append(("result.R_Z_max", _fmt(report.R_Z_max, precise)))
    return lines


def _mc_lines(stats: montecarlo.PlayStats, gap_s: float, gap_j: float, precise: bool) -> list:
    return [
        ("result.mc.blocks", str(stats.blocks)),
        ("result.mc.empirical_mean", _fmt(stats.empirical_mean, precise)),
        ("result.mc.std_error", _fmt(stats.std_error, precise)),
        ("result.mc.deviation_gap_source", _fmt(gap_s, precise)),
        ("result.mc.deviation_gap_jammer", _fmt(gap_j, precise)),
        ("result.mc.rng", stats.rng_algorithm),
    ]


def render_document(lines: list) -> str:
    return "".join(f"{k} = {v}\n" for k, v in lines)


# ---------------------------------------------------------------------------
# sweep


def scenario_value(net: NetworkConfig, scenario: str, lp_T: int, grid_resolution) -> float:
    """Equilibrium secrecy rate of one scenario column at one sweep point."""
    if scenario == "p1":
        cp = regions.corner_points(compute_snrs(net))
        return analytic.solve_problem1(cp, lp_T).value
    if scenario == "p1-nocodebook":
        cp = regions.corner_points(compute_snrs(net))
        return analytic.solve_unknown_codebook(cp).value
    z_kind = informed.GAUSSIAN_NOISE if "p2-noise" in scenario else informed.STRUCTURED_CODEWORD
    if scenario.endswith("-xr-z"):
        return informed.grid_minimize(net, z_kind, grid_resolution, restrict="xr-z").value
    if scenario.endswith("-xr-rho-xs"):
        return informed.grid_minimize(net, z_kind, grid_resolution, restrict="xr-rho-xs").value
    return informed.solve_informed(net, z_kind, grid_resolution).value


def _sweep_point(args):
    index, net, scenarios, lp_T, grid_resolution, param_value = args
    values = [scenario_value(net, s, lp_T, grid_resolution) for s in scenarios]
    return index, param_value, values


def sweep_rows(cfg: RunConfig, jobs: int = 1):
    """Evaluate every sweep point; rows come back ordered by sweep index."""
    if cfg.sweep is None:
        raise ConfigError("config has no sweep block")
    spec = cfg.sweep
    scenarios = spec.scenarios or _DEFAULT_SCENARIOS[cfg.problem]
    step = (spec.stop - spec.start) / (spec.steps - 1)
    tasks = []
    for i in range(spec.steps):
        value = spec.start + i * step
        net = apply_sweep_parameter(cfg.network, spec.parameter, value)
        tasks.append((i, net, scenarios, cfg.lp_T, cfg.grid_resolution, value))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    results.sort(key=lambda r: r[0])
    header = ["index", spec.parameter] + list(scenarios)
    rows = [[i, pv] + vals for i, pv, vals in results]
    return header, rows


def write_csv(path, header, rows, schema: str, precise: bool = False) -> None:
    """CSV with a schema comment line; UTF-8, LF endings."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# schema: {schema}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [c if isinstance(c, (int, str)) else _fmt(c, precise) for c in row]
            )


# ---------------------------------------------------------------------------
# auxiliary outputs


def region_rows(cfg: RunConfig, points: int = 513):
    cp = regions.corner_points(compute_snrs(cfg.network))
    hi = 1.25 * max(cp.Omega_R, cp.omega_R, 1e-3)
    etas = [i * hi / (points - 1) for i in range(points)]
    rows = [
        [eta, regions.dest_boundary(cp, eta), regions.eaves_boundary(cp, eta)]
        for eta in etas
    ]
    return ["eta", "dest_boundary", "eaves_boundary"], rows


def strategy_rows(report: analytic.EquilibriumReport, points: int = 257):
    rows = []
    for player, strat in (
        ("source", report.source_strategy),
        ("jammer", report.jammer_strategy),
    ):
        for loc, mass in strat.atoms:
            rows.append([player, "atom", loc, mass])
        span = strat.support_hi - strat.support_lo
        for i in range(points):
            x = strat.support_lo + span * i / (points - 1)
            rows.append([player, "cdf", x, float(strat.cdf(x))])
    return ["player", "kind", "rate", "value"], rows


# ---------------------------------------------------------------------------
# entry points

_CONFIG_ERRORS = (ConfigError, ResolutionError, DegenerateGeometryError, ValueError)
_SOLVER_ERRORS = (LpFailureError, EmptyReductionError, WrongCaseError)


def _overrides(ns: argparse.Namespace) -> dict:
    out = {}
    for attr, key in (
        ("problem", "problem"),
        ("lp_T", "lp_T"),
        ("grid_resolution", "grid_resolution"),
        ("seed", "seed"),
        ("mc_blocks", "mc_blocks"),
    ):
        v = getattr(ns, attr, None)
        if v is not None:
            out[key] = str(v)
    return out


def _cmd_solve(ns) -> int:
    cfg = load_config_file(ns.config, _overrides(ns))
    report = solve_problem(cfg)
    text = render_document(document_lines(cfg, report, precise=ns.precise))
    sys.stdout.write(text)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    if ns.strategy_csv:
        if not isinstance(report, analytic.EquilibriumReport):
            raise ConfigError("--strategy-csv applies to problem p1 variants only")
        header, rows = strategy_rows(report, ns.strategy_points)
        write_csv(ns.strategy_csv, header, rows, "strategy-v1", precise=True)
    if ns.dump_matrix:
        cp = regions.corner_points(compute_snrs(cfg.network))
        game = matrixgame.discretize(reduce_game(cp), cfg.lp_T)
        matrixgame.game_to_csv(game, ns.dump_matrix)
    return 0


def _cmd_sweep(ns) -> int:
    cfg = load_config_file(ns.config, _overrides(ns))
    jobs = ns.jobs or int(os.environ.get(JOBS_ENV, "1"))
    header, rows = sweep_rows(cfg, jobs=jobs)
    write_csv(ns.output, header, rows, "sweep-v1", precise=ns.precise)
    sys.stdout.write(f"wrote {len(rows)} sweep rows to {ns.output}\n")
    return 0


def _cmd_validate(ns) -> int:
    cfg = load_config_file(ns.config, _overrides(ns))
    if cfg.problem != "p1":
        raise ConfigError("validate runs Monte Carlo play for problem p1 only")
    blocks = cfg.mc_blocks or 100_000
    cfg = replace(cfg, mc_blocks=blocks)
    doc = run(cfg, precise=ns.precise)
    text = render_document(doc)
    sys.stdout.write(text)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0


def _cmd_dump_regions(ns) -> int:
    cfg = load_config_file(ns.config, _overrides(ns))
    header, rows = region_rows(cfg, points=ns.points)
    write_csv(ns.output, header, rows, "regions-v1", precise=True)
    sys.stdout.write(f"wrote {len(rows)} boundary rows to {ns.output}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secrecygame",
        description="Nash-equilibrium secrecy rates for source vs jammer-relay games",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output_required=False):
        p.add_argument("--config", required=True, help="flat dotted-key config file")
        p.add_argument("--problem", choices=PROBLEMS)
        p.add_argument("--lp-T", dest="lp_T", type=int)
        p.add_argument("--grid-resolution", dest="grid_resolution", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--mc-blocks", dest="mc_blocks", type=int)
        p.add_argument("--precise", action="store_true", help="full-precision output")
        if output_required:
            p.add_argument("--output", required=True)
        else:
            p.add_argument("--output")

    p_solve = sub.add_parser("solve", help="solve one game instance")
    common(p_solve)
    p_solve.add_argument("--strategy-csv", help="write sampled strategy cdfs")
    p_solve.add_argument("--strategy-points", type=int, default=257)
    p_solve.add_argument("--dump-matrix", help="write the discretized payoff matrix")
    p_solve.set_defaults(func=_cmd_solve)

    p_sweep = sub.add_parser("sweep", help="evaluate a parameter sweep to CSV")
    common(p_sweep, output_required=True)
    p_sweep.add_argument("--jobs", type=int, help=f"parallel workers (default ${JOBS_ENV} or 1)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_val = sub.add_parser("validate", help="Monte Carlo play plus deviation audit")
    common(p_val)
    p_val.set_defaults(func=_cmd_validate)

    p_dump = sub.add_parser("dump-regions", help="export boundary polylines to CSV")
    common(p_dump, output_required=True)
    p_dump.add_argument("--points", type=int, default=513)
    p_dump.set_defaults(func=_cmd_dump_regions)
    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except _SOLVER_ERRORS as exc:
        sys.stderr.write(f"error.kind = {type(exc).__name__}\nerror.message = {exc}\n")
        return 3
    except _CONFIG_ERRORS as exc:
        sys.stderr.write(f"error.kind = {type(exc).__name__}\nerror.message = {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
