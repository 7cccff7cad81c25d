"""Command-line front end.

Exit codes: 0 success, 1 a validation check failed, 2 bad configuration or
arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np
from scipy import stats

from . import geometry as geo
from . import interference as itf
from . import oracle, probability
from .config import ExperimentConfig, load_config
from .errors import ConfigError, TorsionQMError

EXIT_VALIDATE = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    return cfg.with_overrides(epsilon=args.epsilon, samples=getattr(args, "samples", None))


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _out(args, cfg):
    return args.out or cfg.output


def cmd_pattern(args):
    cfg = _config(args)
    cfg.require_single_defect()
    free = itf.pattern_scan(cfg.packet, 0.0, cfg.experiment, workers=args.workers)
    tors = itf.pattern_scan(cfg.packet, cfg.epsilon, cfg.experiment, workers=args.workers)
    out = _out(args, cfg)
    _emit(itf.profile_to_csv(tors), out)
    if out:
        p = Path(out)
        p.with_name(p.stem + "_free" + p.suffix).write_text(itf.profile_to_csv(free), encoding="utf-8")
    info = sys.stderr
    print("peaks (torsion-free): position_nm height", file=info)
    for pk in itf.principal_peaks(itf.find_peaks(free), n=5):
        print(f"  {pk.position:.6f} {pk.height:.6e}", file=info)
    print("peaks (with torsion): position_nm height", file=info)
    for pk in itf.principal_peaks(itf.find_peaks(tors), n=5):
        print(f"  {pk.position:.6f} {pk.height:.6e}", file=info)
    print(f"epsilon = {cfg.epsilon:g}", file=info)
    print(f"peak displacement = {itf.peak_displacement(tors, free):.6e} nm", file=info)
    print(f"asymmetry = {itf.asymmetry(tors):.6e}", file=info)
    print(f"min/max = {tors.valley_ratio():.4f}", file=info)
    return 0


def cmd_scan_epsilon(args):
    cfg = _config(args)
    cfg.require_single_defect()
    eps = list(args.eps)
    if not eps:
        raise ConfigError("scan-epsilon needs at least one epsilon")
    for e in eps:
        if not (0 <= e < 0.5):
            raise ConfigError(f"epsilon {e} outside [0, 0.5)")
    free = itf.pattern_scan(cfg.packet, 0.0, cfg.experiment, workers=args.workers)
    lines = ["epsilon,displacement_nm,asymmetry"]
    disp = []
    for e in eps:
        prof = itf.pattern_scan(cfg.packet, e, cfg.experiment, workers=args.workers)
        d = itf.peak_displacement(prof, free)
        disp.append(d)
        lines.append("%.17g,%.17g,%.17g" % (e, d, itf.asymmetry(prof)))
    _emit("\n".join(lines) + "\n", _out(args, cfg))
    if len(eps) >= 2 and len(set(eps)) > 1:
        fit = stats.linregress(eps, disp)
        print(f"slope = {fit.slope:.6e} nm, intercept = {fit.intercept:.6e} nm, R^2 = {fit.rvalue**2:.6f}", file=sys.stderr)
    return 0


def cmd_probability(args):
    cfg = _config(args)
    cfg.require_single_defect()
    run = cfg.probability
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", probability.RegionTooSmallWarning)
        rows = probability.norm_series(run.packet, cfg.epsilon, run.times(), grid_n=run.grid_n)
    _emit(probability.series_to_csv(rows), _out(args, cfg))
    if caught:
        print(f"warning: {caught[-1].message}", file=sys.stderr)
    totals = [r[3] for r in rows]
    print(f"total drift = {max(totals) - min(totals):.3e}", file=sys.stderr)
    return 0


def cmd_validate(args):
    results = oracle.run_validation()
    _emit(oracle.report(results), args.out)
    return 0 if all(r.passed for r in results) else EXIT_VALIDATE


def cmd_geometry(args):
    cfg = _config(args)
    d = cfg.defects
    x = np.array(args.point, float)
    fr = geo.frame(x, d)
    big = float(np.abs(d.positions).max()) + 1.0
    loop = geo.circle(tuple(d.positions.mean(0)), big + float(np.abs(d.positions - d.positions.mean(0)).max()))
    out = {
        "point": x.tolist(),
        "epsilon": d.epsilon,
        "defects": d.positions.tolist(),
        "phase": float(geo.phase(x, d)),
        "tetrad": fr.tetrad.tolist(),
        "metric": fr.metric.tolist(),
        "metric_first_order": fr.metric_first_order.tolist(),
        "lambda": float(geo.lambda_field(x, d)),
        "winding_all": geo.winding_integral(loop, d) / (2 * math.pi),
        "torsion_flux_all": geo.torsion_flux(loop, d),
        "curvature_residual": geo.curvature_check(x, d).tolist(),
    }
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return 0


def build_parser():
    p = _Parser(prog="torsionqm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, samples=True):
        sp.add_argument("--config", help="INI configuration file")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--epsilon", type=float, help="override the defect depth")
        if samples:
            sp.add_argument("--samples", type=int, help="override the number of screen samples")
            sp.add_argument("--workers", type=int, default=1, help="threads for the screen scan")

    sp = sub.add_parser("pattern", help="screen intensity with and without torsion")
    common(sp)
    sp.set_defaults(func=cmd_pattern)

    sp = sub.add_parser("scan-epsilon", help="peak displacement and asymmetry versus epsilon")
    common(sp)
    sp.add_argument("--eps", type=float, nargs="*", default=[0.05, 0.1, 0.2])
    sp.set_defaults(func=cmd_scan_epsilon)

    sp = sub.add_parser("probability", help="norm, atom weight and total over time")
    common(sp, samples=False)
    sp.set_defaults(func=cmd_probability)

    sp = sub.add_parser("validate", help="run every oracle check")
    sp.add_argument("--out", help="report file (default: stdout)")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("geometry", help="tetrad, metric and torsion diagnostics at a point")
    common(sp, samples=False)
    sp.add_argument("--point", type=float, nargs=2, default=[1.0, 1.0], metavar=("X1", "X2"))
    sp.set_defaults(func=cmd_geometry)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (TorsionQMError, ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
