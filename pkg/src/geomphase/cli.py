"""Command-line front end.

    geomphase phase   --config s.yaml [--backends a,b] [--out f.csv] [--degrees]
    geomphase sweep   --config s.yaml --param bfield.components.0.amplitude --values 0.02,0.1
    geomphase regimes --config s.yaml
    geomphase oracle  --config s.yaml

Exit codes: 0 ok, 2 bad config or arguments, 3 physics-domain error, 4 oracle failure.
CSV output is always in radians, 17 significant digits, LF line endings.
"""

from __future__ import annotations

import argparse
import math
import sys
from itertools import combinations

from . import backends as bk
from . import regimes
from .config import BACKENDS, ScenarioConfig, load_config, with_parameter
from .errors import ConfigError, OracleError, PhysicsDomainError
from .systems import ParityDoubletSystem

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_ORACLE = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(_fmt(v) for v in row) for row in rows]
    data = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(data)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(data)


def _angle(x, degrees):
    return math.degrees(x) if degrees else x


def _unit(degrees):
    return "deg" if degrees else "rad"


def _csv_layout(backends):
    ref = backends[0]
    cols = [f"phase_{b}" for b in backends] + [f"residual_{b}" for b in backends[1:]]
    if "oracle" in backends:
        cols.append("adiabaticity_oracle")
    return ref, cols


def _csv_values(results):
    phases = [r.phase for r in results]
    vals = phases + [p - phases[0] for p in phases[1:]]
    for r in results:
        if r.backend == "oracle":
            vals.append(r.extras["adiabaticity"])
    return vals


def _backends(cfg: ScenarioConfig, arg):
    if arg is None:
        return cfg.backends
    names = [b.strip() for b in arg.split(",") if b.strip()]
    if not names:
        raise ConfigError("--backends: empty list")
    for b in names:
        if b not in BACKENDS:
            raise ConfigError(f"--backends: unknown backend {b!r} (choose from {', '.join(BACKENDS)})")
    return tuple(dict.fromkeys(names))


def _report(cfg, results, degrees, out=None):
    out = out or sys.stdout
    u = _unit(degrees)
    print(f"system {cfg.kind}, duration T = {cfg.duration:.10g}", file=out)
    width = max(len(r.backend) for r in results) + 2
    print(f"{'backend':<{width}}phase [{u}]", file=out)
    for r in results:
        print(f"{r.backend:<{width}}{_angle(r.phase, degrees):.12g}", file=out)
    if len(results) > 1:
        print("pairwise residuals (b - a, relative to a):", file=out)
        for a, b in combinations(results, 2):
            diff = b.phase - a.phase
            rel = diff / abs(a.phase) if a.phase else math.nan
            print(f"  {b.backend} - {a.backend}: {_angle(diff, degrees):.6g} {u} (relative {rel:.3g})", file=out)
    for r in results:
        if r.backend == "oracle":
            ad = r.extras["adiabaticity"]
            flag = "" if ad < 0.1 else "  (not adiabatic: comparison untrustworthy)"
            print(f"oracle adiabaticity {ad:.3g}, unitarity drift {r.extras['unitarity_drift']:.3g}{flag}", file=out)


def cmd_phase(cfg: ScenarioConfig, backends=None, out=None, degrees=False) -> int:
    names = backends or cfg.backends
    results = bk.run_backends(cfg, names)
    _report(cfg, results, degrees)
    path = out if out is not None else cfg.output
    if path:
        _, cols = _csv_layout(names)
        _write_csv(path, cols, [_csv_values(results)])
    return EXIT_OK


def cmd_oracle(cfg: ScenarioConfig, out=None, degrees=False) -> int:
    [res] = bk.run_backends(cfg, ("oracle",))
    rep = res.extras["report"]
    u = _unit(degrees)
    print(f"system {cfg.kind}, duration T = {cfg.duration:.10g}, {rep.steps} steps")
    print(f"{'level':<10}{'total':>22}{'dynamical':>22}{'geometric':>22}  [{u}]")
    for lv in rep.labels:
        print(
            f"{str(lv):<10}{_angle(rep.total_phase[lv], degrees):>22.12g}"
            f"{_angle(rep.dynamical_phase[lv], degrees):>22.12g}"
            f"{_angle(rep.geometric_phase[lv], degrees):>22.12g}"
        )
    print(f"stretched-state geometric difference {_angle(rep.geometric_difference, degrees):.12g} {u}")
    print(f"adiabaticity {rep.adiabaticity:.3g}, unitarity drift {rep.unitarity_drift:.3g}")
    path = out if out is not None else cfg.output
    if path:
        header, row = [], []
        for lv in rep.labels:
            tag = str(lv).replace(" ", "").replace(",", "_").strip("()")
            header += [f"total_{tag}", f"dynamical_{tag}", f"geometric_{tag}"]
            row += [rep.total_phase[lv], rep.dynamical_phase[lv], rep.geometric_phase[lv]]
        header += ["geometric_difference", "adiabaticity", "unitarity_drift"]
        row += [rep.geometric_difference, rep.adiabaticity, rep.unitarity_drift]
        _write_csv(path, header, [row])
    return EXIT_OK


def sweep_rows(cfg: ScenarioConfig, param: str, values, backends=None):
    """(header, rows) of a parameter sweep, rows in grid order."""
    names = backends or cfg.backends
    _, cols = _csv_layout(names)
    rows = []
    for v in values:
        point = with_parameter(cfg, param, v)
        rows.append([v] + _csv_values(bk.run_backends(point, names)))
    return ["swept_value"] + cols, rows


def cmd_sweep(cfg: ScenarioConfig, param=None, values=None, backends=None, out=None) -> int:
    param = param or cfg.sweep_param
    if param is None:
        raise ConfigError("sweep needs --param or a sweep block in the config")
    values = cfg.sweep_values if values is None else values
    # validate the path even for an empty grid
    with_parameter(cfg, param, _leaf(cfg, param))
    header, rows = sweep_rows(cfg, param, values, backends)
    _write_csv(out if out is not None else cfg.output, header, rows)
    return EXIT_OK


def _leaf(cfg, path):
    node = cfg.raw
    for part in path.split("."):
        if isinstance(node, dict) and part in node:
            node = node[part]
        elif isinstance(node, list) and part.isdigit() and int(part) < len(node):
            node = node[int(part)]
        else:
            raise ConfigError(f"unknown parameter path '{path}' (no '{part}')")
    return node


def regime_params(cfg: ScenarioConfig) -> regimes.RegimeParams:
    if not isinstance(cfg.system, ParityDoubletSystem):
        raise ConfigError("regimes: system.kind must be parity_doublet")
    table, rot, ez, bz = bk.doublet_layout(cfg)
    comp = bk._single(rot)
    return regimes.RegimeParams(cfg.system, ez, bz, comp.amplitude, comp.angular_frequency, table)


def cmd_regimes(cfg: ScenarioConfig, degrees=False) -> int:
    p = regime_params(cfg)
    T = cfg.duration
    u = _unit(degrees)
    sc = p.scales()
    print("energy scales: " + ", ".join(f"{k} = {v:.6g}" for k, v in sc.items()))
    case = regimes.classify(p)
    full = regimes.full_phase(p, T)
    if case is None:
        print(f"table {p.table}: no clean regime (separation factor {regimes.SEPARATION_FACTOR:g})")
        print(f"full perturbative phase {_angle(full, degrees):.12g} {u}")
        return EXIT_OK
    lim = regimes.limiting_phase(case, p, T)
    dev = (lim - full) / full if full else math.nan
    print(f"regime: {case.name} ({case.ordering})")
    print(f"limiting-form phase     {_angle(lim, degrees):.12g} {u}")
    print(f"full perturbative phase {_angle(full, degrees):.12g} {u}")
    print(f"relative deviation      {dev:.3g}")
    return EXIT_OK


def _values(arg):
    if arg is None:
        return None
    out = []
    for tok in arg.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            out.append(float(tok))
        except ValueError:
            raise ConfigError(f"--values: not a number: {tok!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="geomphase", description="Geometric phases from energy shifts, solid angles and direct evolution.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, with_backends=True):
        sp.add_argument("--config", required=True, help="scenario YAML file")
        if with_backends:
            sp.add_argument("--backends", help="comma-separated backends (overrides run.backends)")
        sp.add_argument("--out", help="CSV output path (overrides run.output)")
        sp.add_argument("--degrees", action="store_true", help="report angles in degrees (CSV stays radians)")
        sp.add_argument("--seed-free", action="store_true", help="accepted for reproducibility scripts; nothing is random")

    common(sub.add_parser("phase", help="run backends and compare"))
    sw = sub.add_parser("sweep", help="sweep one numeric config leaf, write CSV")
    common(sw)
    sw.add_argument("--param", help="dotted path, e.g. bfield.components.0.amplitude")
    sw.add_argument("--values", help="comma-separated grid values")
    common(sub.add_parser("regimes", help="classify a parity-doublet scenario"), with_backends=False)
    common(sub.add_parser("oracle", help="direct-integration run with per-level phases"), with_backends=False)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config)
        if args.command == "phase":
            return cmd_phase(cfg, _backends(cfg, args.backends), args.out, args.degrees)
        if args.command == "sweep":
            return cmd_sweep(cfg, args.param, _values(args.values), _backends(cfg, args.backends), args.out)
        if args.command == "regimes":
            return cmd_regimes(cfg, args.degrees)
        return cmd_oracle(cfg, args.out, args.degrees)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicsDomainError as exc:
        check = f" [check: {exc.check}]" if exc.check else ""
        print(f"physics domain error{check}: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except OracleError as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
