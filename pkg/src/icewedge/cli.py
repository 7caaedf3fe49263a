"""``ice`` command-line entry point.

Errors are reported on stderr as a single line ``error: <Code>: <message>``;
exit status is 1 for runtime errors and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .bootstrap import read_scatter_csv, resample, write_scatter_csv
from .data_model import ArmSample, ingest_csv, summarize
from .errors import ConfigError, IceError, IoError
from .frontier import compute_frontier, read_options_csv
from .preference import Grid, PreferenceMap, check_axioms, omega_bounds, returns_to_scale
from .report import (
    DEFAULT_BINS,
    StudyResults,
    preference_histogram,
    render_histogram_svg,
    render_scatter_svg,
    study_report,
)
from .scale import Perspective, PriceSource, ShadowPrice, ice_scale
from .wedge import compute_wedge, quadrant_counts

SUBCOMMANDS = ("scale", "bootstrap", "wedge", "prefmap", "frontier", "report")
REPORT_FILES = ("report.txt", "scatter.svg", "wedge_nb.svg", "wedge_omega.svg", "hist_nb.svg", "hist_omega.svg", "scatter.csv")


@dataclass
class RunConfig:
    input: Optional[Path] = None
    reps: int = 25000
    seed: int = 42
    lam: Optional[float] = None  # None means auto
    perspective: Perspective = Perspective.ALIAS
    confidence: float = 0.95
    beta: float = 1.0
    gamma: Optional[float] = None  # None means OMEGA * beta
    tails: str = "symmetric"
    outdir: Optional[Path] = None
    scale_rule: str = "se"
    bins: int = DEFAULT_BINS

    def validate(self) -> "RunConfig":
        if self.reps < 100:
            raise ConfigError(f"--reps must be at least 100, got {self.reps}")
        if not 0.5 <= self.confidence < 1:
            raise ConfigError(f"--confidence must lie in [0.5, 1), got {self.confidence}")
        if self.lam is not None and not (math.isfinite(self.lam) and self.lam > 0):
            raise ConfigError(f"--lambda must be positive or 'auto', got {self.lam}")
        for name in ("beta", "gamma"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0):
                raise ConfigError(f"--{name} must be positive, got {v}")
        if self.tails not in ("symmetric", "equal"):
            raise ConfigError(f"--tails must be symmetric or equal, got {self.tails}")
        if self.scale_rule not in ("se", "pooled"):
            raise ConfigError(f"--scale-rule must be se or pooled, got {self.scale_rule}")
        if self.bins < 5:
            raise ConfigError(f"--bins must be at least 5, got {self.bins}")
        return self

    def nonlinear_map(self, lam: ShadowPrice) -> PreferenceMap:
        if self.gamma is None:
            return PreferenceMap.ice_omega(self.beta, lam)
        return PreferenceMap(self.beta, self.gamma, lam)


def resolve_lambda(std: ArmSample, new: ArmSample, lam: Optional[float], rule: str = "se"):
    """Return (shadow price, statistical ratio or None)."""
    if lam is not None:
        return ShadowPrice(lam, PriceSource.USER_SUPPLIED), None
    ratio, rec = ice_scale(std, new, rule)
    return rec, ratio


def run_report(cfg: RunConfig, threads: Optional[int] = None) -> StudyResults:
    cfg.validate()
    if cfg.outdir is None:
        raise ConfigError("--outdir is required")
    std, new = ingest_csv(cfg.input)
    lam, ratio = resolve_lambda(std, new, cfg.lam, cfg.scale_rule)
    scatter = resample(std, new, cfg.reps, cfg.seed, lam, cfg.perspective, threads=threads)
    wedge = compute_wedge(scatter, cfg.confidence, cfg.tails)
    nb = PreferenceMap.net_benefit(lam)
    nl = cfg.nonlinear_map(lam)
    hist_nb = preference_histogram(scatter, nb, cfg.bins)
    hist_nl = preference_histogram(scatter, nl, cfg.bins)
    res = StudyResults(
        summaries={a.arm.label: {v: summarize(a, v) for v in ("effe", "cost")} for a in (std, new)},
        arm_sizes={"Std": std.n, "New": new.n},
        lam=lam,
        ratio=ratio,
        scale_rule=cfg.scale_rule,
        scatter=scatter,
        wedge=wedge,
        quadrants=quadrant_counts(scatter),
        hist_nb=hist_nb,
        hist_nonlinear=hist_nl,
        nonlinear_map=nl,
    )
    out = Path(cfg.outdir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {out}: {exc.strerror or exc}") from None
    (out / "report.txt").write_text(study_report(res), encoding="utf-8")
    write_scatter_csv(scatter, out / "scatter.csv")
    render_scatter_svg(scatter, out / "scatter.svg", title="Bootstrap ICE scatter")
    render_scatter_svg(scatter, out / "wedge_nb.svg", wedge=wedge, pmap=nb, title="Wedge coloured by Net Benefit")
    render_scatter_svg(scatter, out / "wedge_omega.svg", wedge=wedge, pmap=nl, title=f"Wedge coloured by {hist_nl.label}")
    render_histogram_svg(hist_nb, out / "hist_nb.svg")
    render_histogram_svg(hist_nl, out / "hist_omega.svg")
    return res


# --- argument parsing -------------------------------------------------------

def _lambda_arg(text: str) -> Optional[float]:
    if text.strip().lower() == "auto":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number or 'auto', got {text!r}") from None


def _fmt_summary(arm: ArmSample) -> list[str]:
    lines = [f"{arm.arm.label} arm (n = {arm.n})"]
    lines.append(f"  {'':5}" + "".join(f"{h:>11}" for h in ("Min", "1st Qu", "Median", "Mean", "3rd Qu", "Max", "SD")))
    for var in ("effe", "cost"):
        lines.append(f"  {var:5}" + "".join(f"{v:>11.4f}" for v in summarize(arm, var).as_row()))
    return lines


def cmd_scale(args) -> int:
    std, new = ingest_csv(args.input)
    ratio, lam = ice_scale(std, new, args.scale_rule)
    print(f"ratio ({args.scale_rule}): {ratio:.6g}")
    print(f"recommended lambda: {lam.value:g}")
    for arm in (std, new):
        print("\n".join(_fmt_summary(arm)))
    return 0


def cmd_bootstrap(args) -> int:
    cfg = RunConfig(input=args.input, reps=args.reps, seed=args.seed, lam=args.lam,
                    perspective=Perspective.parse(args.perspective), scale_rule=args.scale_rule).validate()
    std, new = ingest_csv(cfg.input)
    lam, ratio = resolve_lambda(std, new, cfg.lam, cfg.scale_rule)
    if ratio is not None:
        print(f"statistical ratio: {ratio:.6g}; lambda: {lam.value:g}")
    scatter = resample(std, new, cfg.reps, cfg.seed, lam, cfg.perspective)
    write_scatter_csv(scatter, args.out)
    print(f"wrote {scatter.r} replicates to {args.out}")
    return 0


def cmd_wedge(args) -> int:
    scatter = read_scatter_csv(args.scatter)
    w = compute_wedge(scatter, args.confidence, args.tails)
    print(f"confidence: {w.confidence * 100:g}% ({w.tails} rule)")
    print(f"center angle: {math.degrees(w.center):.6f} deg")
    print(f"lower limit: {math.degrees(w.lower):.6f} deg")
    print(f"upper limit: {math.degrees(w.upper):.6f} deg")
    print(f"half-width: {math.degrees(w.half_angle):.6f} deg")
    print(f"below: {w.count_below}")
    print(f"above: {w.count_above}")
    print(f"inside: {w.count_inside + w.count_origin}")
    print(f"r: {w.r}")
    return 0


def cmd_prefmap(args) -> int:
    pmap = PreferenceMap(args.beta, args.gamma)
    lo, hi = omega_bounds()
    state = "valid" if pmap.monotone_valid else "INVALID"
    print(f"beta = {pmap.beta:g}, gamma = {pmap.gamma:g}, gamma/beta = {pmap.ratio:.6g}")
    print(f"monotone range [{lo:.7f}, {hi:.6f}]: {state}")
    print(f"returns to scale: {returns_to_scale(pmap).value}")
    if args.check_axioms:
        report = check_axioms(pmap, Grid.square(args.grid, args.range))
        print(f"axiom check on {args.grid}x{args.grid} grid over [-{args.range:g}, {args.range:g}]^2")
        print("\n".join(report.lines()))
    return 0


def cmd_frontier(args) -> int:
    res = compute_frontier(read_options_csv(args.options))
    print("frontier: " + ", ".join(res.frontier_names))
    for o, by in res.dominated:
        print(f"{o.name}: strictly dominated by {by}")
    for o, (a, b) in res.extendedly_dominated:
        print(f"{o.name}: extendedly dominated by mixtures of {a} and {b}")
    for a, b, icer_ in res.incremental_ratios():
        val = "undefined" if icer_ is None else f"{icer_:.6g}"
        print(f"ICER {a} -> {b}: {val}")
    return 0


def cmd_report(args) -> int:
    cfg = RunConfig(
        input=args.input, reps=args.reps, seed=args.seed, lam=args.lam,
        perspective=Perspective.parse(args.perspective), confidence=args.confidence,
        beta=args.beta, gamma=args.gamma, tails=args.tails, outdir=args.outdir,
        scale_rule=args.scale_rule, bins=args.bins,
    )
    res = run_report(cfg)
    if res.ratio is not None:
        print(f"statistical ratio: {res.ratio:.6g}; lambda: {res.lam.value:g}")
    print(f"wrote {', '.join(REPORT_FILES)} to {cfg.outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ice",
        description="Nonparametric incremental cost-effectiveness inference. "
        "All randomness comes from --seed; ICE_THREADS caps bootstrap threads (speed only).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{" + ",".join(SUBCOMMANDS) + "}")

    def data_opts(p, required=True):
        p.add_argument("--input", type=Path, required=required, help="CSV with columns trtm,effe,cost (trtm 0=Std, 1=New)")
        p.add_argument("--scale-rule", choices=("se", "pooled"), default="se",
                       help="spread used for the statistical lambda ratio (default: se)")

    def boot_opts(p):
        p.add_argument("--reps", type=int, default=25000, help="bootstrap replications, at least 100 (default: 25000)")
        p.add_argument("--seed", type=int, default=42, help="master random seed (default: 42)")
        p.add_argument("--lambda", dest="lam", type=_lambda_arg, default=None, metavar="L|auto",
                       help="shadow price of health, or 'auto' for the nearest power of 10 (default: auto)")
        p.add_argument("--perspective", choices=("alias", "alibi"), default="alias",
                       help="alias: effectiveness units; alibi: cost units (default: alias)")

    p = sub.add_parser("scale", help="statistical shadow-price ratio and recommended lambda")
    data_opts(p)
    p.set_defaults(func=cmd_scale)

    p = sub.add_parser("bootstrap", help="resample patients and write a scatter CSV (rep,x,y; rep 0 = observed)")
    data_opts(p)
    boot_opts(p)
    p.add_argument("--out", type=Path, required=True, help="output scatter CSV")
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("wedge", help="confidence wedge over a scatter CSV")
    p.add_argument("--scatter", type=Path, required=True, help="scatter CSV written by 'ice bootstrap'")
    p.add_argument("--confidence", type=float, default=0.95, help="confidence level in [0.5, 1) (default: 0.95)")
    p.add_argument("--tails", choices=("symmetric", "equal"), default="symmetric",
                   help="symmetric half-width about the observed ray, or equal tail counts (default: symmetric)")
    p.set_defaults(func=cmd_wedge)

    p = sub.add_parser("prefmap", help="validity, returns to scale and axiom checks for a preference map")
    p.add_argument("--beta", type=float, required=True, help="radius power (returns to scale)")
    p.add_argument("--gamma", type=float, required=True, help="signed-power exponent (nonlinearity)")
    p.add_argument("--check-axioms", action="store_true", help="run the four coherence axioms on a grid")
    p.add_argument("--grid", type=int, default=41, help="grid points per axis (default: 41)")
    p.add_argument("--range", type=float, default=2.0, help="grid half-range R, covering [-R, R]^2 (default: 2)")
    p.set_defaults(func=cmd_prefmap)

    p = sub.add_parser("frontier", help="cost-effectiveness frontier of treatment options")
    p.add_argument("--options", type=Path, required=True, help="CSV with columns name,effe,cost")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("report", help="full pipeline: summaries, bootstrap, wedge, plots and text report")
    data_opts(p)
    boot_opts(p)
    p.add_argument("--confidence", type=float, default=0.95, help="wedge confidence level (default: 0.95)")
    p.add_argument("--tails", choices=("symmetric", "equal"), default="symmetric", help="wedge tail rule")
    p.add_argument("--beta", type=float, default=1.0, help="nonlinear map beta (default: 1)")
    p.add_argument("--gamma", type=float, default=None, help="nonlinear map gamma (default: Omega * beta)")
    p.add_argument("--bins", type=int, default=DEFAULT_BINS, help=f"histogram bins (default: {DEFAULT_BINS})")
    p.add_argument("--outdir", type=Path, required=True, help="directory for the seven output files")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: ValueError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
