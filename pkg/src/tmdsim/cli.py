"""Command-line front end: writes figure data as CSV or JSON.

Exit codes: 0 success, 2 usage error, 3 numeric or degenerate input.
"""

from __future__ import annotations

import argparse
import os
import shlex
import sys
import tempfile
import warnings

import numpy as np

from . import __version__
from .coherent import N_BINS, click_distribution
from .detection import ClickDistribution, DetectorModel, TermLimitError, p_correct, pmn
from .fit import ClickHistogram, UnidentifiableFitError, fit_histogram
from .montecarlo import (
    CoherentSource,
    FockSource,
    McConfig,
    sample_coherent_clicks,
    sample_fock_clicks,
)
from .network import build_layout
from .oracle import p_all

EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def _provenance(argv: list[str]) -> str:
    return f"tmdsim {__version__}: tmdsim {shlex.join(argv)}"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    # write-then-rename so a failed run never leaves a partial file
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmdsim-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        os.unlink(tmp)
        raise


def _unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise UsageError(f"--{name} must lie in [0, 1], got {value}")


def cmd_pmn(args, argv) -> None:
    if not 0 <= args.n <= N_BINS:
        raise UsageError(f"--n must lie in 0..{N_BINS}")
    _unit("eta", args.eta)
    _unit("f", args.f)
    dist = pmn(args.n, args.f, args.eta)
    _emit(ClickDistribution(dist.probs[: args.n + 1]).to_csv(_provenance(argv)), args.out)


def _parse_n_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--n-list must be comma-separated integers, got {text!r}") from None
    if not values:
        raise UsageError("--n-list is empty")
    if any(not 0 <= v <= N_BINS for v in values):
        raise UsageError(f"--n-list entries must lie in 0..{N_BINS}")
    return values


def cmd_sweep(args, argv) -> None:
    n_list = _parse_n_list(args.n_list)
    _unit("eta-min", args.eta_min)
    _unit("eta-max", args.eta_max)
    _unit("f", args.f)
    if args.steps < 1 or args.eta_min > args.eta_max:
        raise UsageError("sweep is empty: need --steps >= 1 and --eta-min <= --eta-max")
    if args.analytic and args.f != 1.0:
        raise UsageError("--analytic column is only defined for --f 1")
    etas = np.linspace(args.eta_min, args.eta_max, args.steps)
    lines = [f"# {_provenance(argv)}", "eta,n,p_correct" + (",p_analytic" if args.analytic else "")]
    for n in n_list:
        for eta in etas:
            row = f"{eta:.17g},{n},{p_correct(n, args.f, DetectorModel(float(eta))):.17g}"
            if args.analytic:
                row += f",{p_all(N_BINS, n, float(eta)):.17g}"
            lines.append(row)
    _emit("\n".join(lines) + "\n", args.out)


def cmd_coherent(args, argv) -> None:
    if args.eta_l_mu0 < 0:
        raise UsageError("--eta-l-mu0 must be non-negative")
    dist = ClickDistribution(click_distribution(args.eta_l_mu0 / N_BINS))
    _emit(dist.to_csv(_provenance(argv)), args.out)


def cmd_mc(args, argv) -> None:
    if args.shots < 1:
        raise UsageError("--shots must be at least 1")
    _unit("eta", args.eta)
    _unit("f", args.f)
    if args.mode == "fock":
        if args.n is None or args.n < 0:
            raise UsageError("--mode fock needs --n >= 0")
        params = FockSource(args.n, args.f, args.eta)
        sampler = sample_fock_clicks
    else:
        if (args.mu0 is None) == (args.eta_l_mu0 is None):
            raise UsageError("--mode coherent needs exactly one of --mu0, --eta-l-mu0")
        if args.eta_l_mu0 is not None:
            if args.exact_loss:
                raise UsageError("--exact-loss needs --mu0, --eta and --f")
            params = CoherentSource(args.eta_l_mu0, eta=1.0, l=1.0, equal_loss=True)
        else:
            _unit("l", args.l)
            params = CoherentSource(
                args.mu0, args.eta, l=args.l, f=args.f, equal_loss=not args.exact_loss
            )
        if params.mu0 < 0:
            raise UsageError("mean photon number must be non-negative")
        sampler = sample_coherent_clicks
    result = sampler(McConfig(args.shots, args.seed, params, workers=args.workers))
    _emit(result.histogram.to_csv(_provenance(argv)), args.out)


def cmd_fit(args, argv) -> None:
    try:
        with open(args.input) as fh:
            hist = ClickHistogram.from_csv(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"{args.input}: {exc}") from None
    if len(hist.counts) != N_BINS + 1:
        raise UsageError(f"{args.input}: expected {N_BINS + 1} rows, got {len(hist.counts)}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = fit_histogram(hist)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(result.to_json() + "\n", args.out)


def cmd_layout(args, argv) -> None:
    _emit(build_layout().to_json() + "\n", args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmdsim", description="Time-multiplexed photon-number detector simulator."
    )
    parser.add_argument("--version", action="version", version=f"tmdsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pmn", help="P(m|n) for a Fock input via the quantum pipeline")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eta", type=float, default=0.43)
    p.add_argument("--f", type=float, default=0.97)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pmn)

    p = sub.add_parser("sweep", help="P(n|n) against detector efficiency")
    p.add_argument("--n-list", default="1,2,3,4,5")
    p.add_argument("--eta-min", type=float, default=0.0)
    p.add_argument("--eta-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--f", type=float, default=1.0)
    p.add_argument("--analytic", action="store_true", help="add the lossless closed-form column")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("coherent", help="binomial click distribution for a coherent input")
    p.add_argument("--eta-l-mu0", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_coherent)

    p = sub.add_parser("mc", help="Monte Carlo click histogram")
    p.add_argument("--mode", choices=("fock", "coherent"), required=True)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int)
    p.add_argument("--mu0", type=float)
    p.add_argument("--eta-l-mu0", type=float)
    p.add_argument("--eta", type=float, default=0.43)
    p.add_argument("--f", type=float, default=0.97)
    p.add_argument("--l", type=float, default=0.55)
    p.add_argument("--exact-loss", action="store_true", help="per-bin f**b loss instead of l/16")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("fit", help="least-squares fit of a click histogram")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("layout", help="dump the 23-mode table as JSON")
    p.add_argument("--out")
    p.set_defaults(func=cmd_layout)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, argv)
    except UsageError as exc:
        print(f"tmdsim {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnidentifiableFitError, TermLimitError, FloatingPointError) as exc:
        print(f"tmdsim {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
