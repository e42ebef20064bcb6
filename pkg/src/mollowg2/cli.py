"""Command-line front end.

Subcommands: ``scan`` (angular or delay scans of g2), ``chi`` (Cauchy-Schwarz
parameter versus opening angle), ``tau`` (delay curves), ``intensity``
(weak-drive scattered intensity) and ``scaling`` (unnormalized G2 versus N).

Exit codes: 0 success, 1 configuration error, 2 runtime/numerical error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import COMMANDS, CONFIG_KEYS, ConfigError, RunConfig, emit_config, parse_config
from .observables import (ScanSpec, cauchy_schwarz_chi, g2_scaling_report, intensity_curve,
                          scan)
from .output import Column, Table, to_csv, to_json

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_IO = 0, 1, 2, 3

COMMAND_HELP = {
    "scan": "g2 of band pairs along phi, phi0 or tau",
    "chi": "Cauchy-Schwarz parameter versus opening angle",
    "tau": "g2 versus delay at fixed angles",
    "intensity": "weak-drive scattered intensity versus angle",
    "scaling": "unnormalized G2(0) versus atom number",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key = value configuration file")
    for key, f in CONFIG_KEYS.items():
        names = [f"--{key}"]
        if "_" in key:
            names.append(f"--{key.replace('_', '-')}")
        common.add_argument(*names, dest=key, metavar="VALUE", default=None,
                            help=f.metadata["help"])
    parser = _Parser(prog="mollowg2", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=COMMAND_HELP[name])
    return parser


def config_from_args(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    flags = {k: getattr(args, k) for k in CONFIG_KEYS if getattr(args, k) is not None}
    return parse_config(args.command, path=args.config, flags=flags)


def _angle_table(cfg: RunConfig) -> Table:
    grid = cfg.grid()
    rad = np.deg2rad(grid)
    drive = cfg.drive
    if cfg.command == "chi":
        curve = cauchy_schwarz_chi(rad, cfg.schemes, drive)
        cols = [Column(f"chi_{s}", v, "LR", s, "chi") for s, v in curve.values.items()]
        return Table("abscissa_deg", grid, cols)
    if cfg.command == "intensity":
        curve = intensity_curve(rad, cfg.schemes, drive, cfg.n_atoms)
        cols = [Column(f"intensity_{s}", v, "", s, "intensity") for s, v in curve.values.items()]
        return Table("abscissa_deg", grid, cols)
    tau_scan = cfg.scan == "tau"
    cols = []
    for pair in cfg.pairs:
        spec = ScanSpec(cfg.scan, grid if tau_scan else rad, pair, cfg.schemes,
                        phi=np.deg2rad(cfg.phi), phi0=np.deg2rad(cfg.phi0), tau=cfg.tau)
        curve = scan(spec, drive)
        cols += [Column(f"g2_{pair}_{s}", v, pair.label, s) for s, v in curve.values.items()]
    return Table("tau" if tau_scan else "abscissa_deg", grid, cols)


def _scaling_table(cfg: RunConfig) -> Table:
    n = np.array(cfg.n_grid, dtype=float)
    cols, slopes = [], {}
    first = None
    for scheme in cfg.schemes:
        report = g2_scaling_report(n, cfg.drive, cfg.pairs, scheme,
                                   np.deg2rad(cfg.phi), np.deg2rad(cfg.phi0))
        if first is None:
            first = report
            cols += [Column(f"I_{b}", v, "", "", "intensity")
                     for b, v in report.intensities.items()]
        for label, G in report.G2.items():
            name = f"G2_{label}_{scheme.name}"
            cols.append(Column(name, G, label, scheme.name, "G2"))
            slopes[name] = report.slopes[label]
    return Table("N", n, cols, extra={"loglog_slopes": slopes})


def compute(cfg: RunConfig) -> Table:
    if cfg.command == "scaling":
        return _scaling_table(cfg)
    return _angle_table(cfg)


def summarize(cfg: RunConfig, table: Table) -> str:
    lines = [f"mollowg2 {cfg.command}: {len(table.abscissa)} points, "
             f"{table.abscissa_name} in [{table.abscissa[0]:g}, {table.abscissa[-1]:g}]"]
    for c in table.columns:
        v = np.asarray(c.values, dtype=float)
        finite = v[np.isfinite(v)]
        gaps = v.size - finite.size
        if finite.size:
            lines.append(f"  {c.name:<22} first {v[0]:.6g}  min {finite.min():.6g}  "
                         f"max {finite.max():.6g}" + (f"  gaps {gaps}" if gaps else ""))
        else:
            lines.append(f"  {c.name:<22} no finite values")
    for name, slope in (table.extra or {}).get("loglog_slopes", {}).items():
        lines.append(f"  log-log slope of {name}: {slope:.12g}")
    return "\n".join(lines)


def write_outputs(cfg: RunConfig, table: Table):
    text = to_csv(table) if cfg.format == "csv" else to_json(table, {"command": cfg.command,
                                                                     **cfg.as_dict()})
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        out = Path(cfg.output)
        out.write_text(text, encoding="utf-8", newline="")
        if cfg.format == "csv":
            # CSV has no room for metadata; the sidecar re-runs the computation via --config
            Path(str(out) + ".cfg").write_text(emit_config(cfg), encoding="utf-8")
    if cfg.figure:
        from .plotting import plot_table
        xlabel = {"phi": r"$\phi$ (deg)", "phi0": r"$\phi_0$ (deg)"}.get(cfg.scan)
        if cfg.command == "scaling" or cfg.scan == "tau":
            xlabel = None
        plot_table(table, cfg.figure, title=f"mollowg2 {cfg.command}", xlabel=xlabel,
                   log=cfg.command == "scaling")


def run(cfg: RunConfig) -> int:
    try:
        table = compute(cfg)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        write_outputs(cfg, table)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    print(summarize(cfg, table), file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
