"""Command-line front end: ``lambdas``, ``stats`` and ``verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 float precision exhausted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

from . import __version__
from .errors import BlockedStateError, CobosonError, PrecisionDomainError, ProfileError
from .fock_oracle import MAX_CHECK_MODES, CheckReport, verify_profile
from .norm_recursion import build_norm_table
from .profiles import (HYDROGENIC_PROFILE_POWER, HydrogenicProfile, ModeProfile, exchange_table,
                       hydrogenic_lambda_quadrature, hydrogenic_table, load_profile,
                       random_rational_profile, uniform_profile)
from .statistics import moment_report

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3

STATS_COLUMNS = ("N", "eta", "mean_n", "mean_n2", "variance", "Q", "g2", "Q_approx",
                 "g2_approx_a", "g2_approx_b", "g2_large_sample", "g2_elementary",
                 "Q_elementary", "status")


class UsageError(CobosonError):
    """Invalid command-line configuration."""


@dataclass(frozen=True)
class RunConfig:
    profile_spec: Optional[str]
    n_range: range
    mode: str = "rational"
    output: str = "csv"
    out_path: Optional[str] = None
    seed: int = 0
    lambda_max: Optional[int] = None
    random_profiles: int = 0
    random_modes: int = 6

    def __post_init__(self):
        if len(self.n_range) == 0:
            raise UsageError("N range is empty")
        if self.n_range.start < 1:
            raise UsageError("N range must start at 1 or above")
        if self.mode not in ("rational", "float"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.output not in ("csv", "json"):
            raise UsageError(f"unknown output format {self.output!r}")
        if self.profile_spec and self.profile_spec.startswith("hydrogenic:") \
                and self.mode == "rational":
            raise UsageError("hydrogenic scatterings involve pi; use --mode float")


def parse_n_range(text: str) -> range:
    """``"7"``, ``"2..100"`` or ``"2..100:5"`` (inclusive, optional stride)."""
    try:
        body, _, stride = text.partition(":")
        lo, sep, hi = body.partition("..")
        lo = int(lo)
        hi = int(hi) if sep else lo
        step = int(stride) if stride else 1
    except ValueError as exc:
        raise UsageError(f"cannot parse N range {text!r}; expected A..B or A..B:S") from exc
    if step < 1:
        raise UsageError("N range stride must be positive")
    return range(lo, hi + 1, step)


def parse_profile_spec(spec: str, mode: str) -> Union[ModeProfile, HydrogenicProfile]:
    kind, _, arg = spec.partition(":")
    try:
        if kind == "uniform":
            return uniform_profile(int(arg), mode)
        if kind == "hydrogenic":
            return HydrogenicProfile(float(arg))
        if kind == "file":
            return load_profile(arg, mode)
    except ValueError as exc:
        raise UsageError(f"bad profile spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown profile spec {spec!r}; use uniform:M, hydrogenic:a_over_L or file:PATH")


def _metadata(command: str, config: RunConfig, extra: Optional[dict] = None) -> dict:
    meta = {
        "tool": "coboson_stats",
        "version": __version__,
        "command": command,
        "profile": config.profile_spec,
        "mode": config.mode,
        "hydrogenic_profile_power": HYDROGENIC_PROFILE_POWER,
        "hydrogenic_profile": "|<k|nu0>|^2 = 64 pi (a_B/L)^3 / (1 + k^2 a_B^2)^4",
    }
    if config.lambda_max is not None:
        meta["lambda_max"] = config.lambda_max
        meta["lambda_max_note"] = "lambda_n set to 0 for n > lambda_max (performance experiment)"
    meta.update(extra or {})
    return meta


def _exchange_and_norms(profile, config: RunConfig, n_max: int):
    if isinstance(profile, HydrogenicProfile):
        lam = hydrogenic_table(profile.a_over_L, n_max + 2, config.lambda_max)
    else:
        lam = exchange_table(profile.as_mode(config.mode), n_max + 2)
    return lam, build_norm_table(lam, n_max)


def _stats_row(table, N: int, a_over_L: Optional[float]) -> dict:
    eta = N * a_over_L ** 3 if a_over_L is not None else None
    row = dict.fromkeys(STATS_COLUMNS)
    row["N"] = N
    row["eta"] = eta
    try:
        rep = moment_report(table, N, eta)
    except BlockedStateError:
        row["status"] = "blocked"
        return row
    row.update(mean_n=rep.mean_n, mean_n2=rep.mean_n2, variance=rep.variance, Q=rep.mandel_q,
               g2=rep.g2, Q_approx=rep.approx_q, g2_approx_a=rep.approx_g2_a,
               g2_approx_b=rep.approx_g2_b, g2_large_sample=rep.approx_g2_large,
               g2_elementary=rep.baseline_g2, Q_elementary=rep.baseline_q, status="ok")
    return row


def run_stats(config: RunConfig):
    """One row per N; returns ``(metadata, rows)``."""
    profile = parse_profile_spec(config.profile_spec, config.mode)
    n_max = config.n_range[-1]
    lam, table = _exchange_and_norms(profile, config, n_max)
    last = table.last_reliable_n()
    if config.n_range[-1] > last:
        raise PrecisionDomainError(
            f"float round-off exceeds F_N beyond N={last}; requested up to N={n_max}",
            last_reliable_n=last)
    a_over_L = getattr(profile, "a_over_L", None)
    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(lambda N: _stats_row(table, N, a_over_L), config.n_range))
    return _metadata("stats", config, {"n_range": [config.n_range.start, n_max, config.n_range.step]}), rows


def run_lambdas(config: RunConfig, quadrature: bool = False):
    profile = parse_profile_spec(config.profile_spec, config.mode)
    n_max = config.n_range[-1]
    if isinstance(profile, HydrogenicProfile):
        lam = hydrogenic_table(profile.a_over_L, n_max, config.lambda_max)
    else:
        lam = exchange_table(profile.as_mode(config.mode), n_max)
    rows = []
    for n in config.n_range:
        row = {"n": n, "lambda": lam[n]}
        if quadrature:
            if not isinstance(profile, HydrogenicProfile):
                raise UsageError("--quadrature applies to hydrogenic profiles only")
            row["lambda_quadrature"] = hydrogenic_lambda_quadrature(n, profile.a_over_L)
        rows.append(row)
    return _metadata("lambdas", config), rows


def run_verify(config: RunConfig) -> CheckReport:
    """Identity suite and oracle equivalence on one or more discrete profiles."""
    profiles: List[ModeProfile] = []
    if config.random_profiles:
        rng = random.Random(config.seed)
        profiles = [random_rational_profile(config.random_modes, rng, label=f"random-{i}")
                    for i in range(config.random_profiles)]
    if config.profile_spec:
        profile = parse_profile_spec(config.profile_spec, config.mode)
        if isinstance(profile, HydrogenicProfile):
            raise UsageError("verify needs a discrete profile; hydrogenic profiles have no finite mode basis")
        profiles.append(profile)
    if not profiles:
        raise UsageError("verify needs --profile or --random")
    report = CheckReport(label="verify")
    for profile in profiles:
        if profile.n_modes > MAX_CHECK_MODES:
            raise UsageError(f"verify supports at most {MAX_CHECK_MODES} modes, got {profile.n_modes}")
        n_max = min(config.n_range[-1], profile.n_modes)
        prefix = f"{profile.label}/" if len(profiles) > 1 else ""
        report.extend(verify_profile(profile, n_max), prefix)
    return report


# -- output ------------------------------------------------------------------------------

def format_scalar(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (Fraction, int)):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _json_scalar(value):
    if isinstance(value, Fraction):
        return str(value)
    return value


def render(metadata: dict, rows: List[dict], fmt: str) -> str:
    if fmt == "json":
        payload = {"metadata": metadata,
                   "rows": [{k: _json_scalar(v) for k, v in row.items()} for row in rows]}
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([format_scalar(v) for v in row.values()])
    return buf.getvalue()


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coboson-stats",
        description="Mandel Q and g2 of N composite bosons from Pauli exchange scatterings.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_format="csv"):
        p.add_argument("--mode", choices=("rational", "float"), default=None,
                       help="numeric mode (default: float for hydrogenic, rational otherwise)")
        p.add_argument("--format", choices=("csv", "json"), default=default_format, dest="fmt")
        p.add_argument("--out", default=None, help="write output to PATH instead of stdout")

    p = sub.add_parser("lambdas", help="tabulate exchange scatterings lambda_n")
    p.add_argument("--profile", required=True, help="uniform:M | hydrogenic:a_over_L | file:PATH")
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--quadrature", action="store_true",
                   help="add the numerical-quadrature value (hydrogenic only)")
    p.add_argument("--lambda-max", type=int, default=None)
    common(p)

    p = sub.add_parser("stats", help="moments, Mandel Q and g2 over a range of N")
    p.add_argument("--profile", required=True, help="uniform:M | hydrogenic:a_over_L | file:PATH")
    p.add_argument("--n", required=True, help="N range A..B or A..B:STRIDE")
    p.add_argument("--lambda-max", type=int, default=None,
                   help="zero lambda_n beyond this n (hydrogenic; performance experiments)")
    common(p)

    p = sub.add_parser("verify", help="exact oracle checks of every closed form")
    p.add_argument("--profile", default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--random", type=int, default=0, help="number of random rational profiles")
    p.add_argument("--modes", type=int, default=6, help="modes per random profile")
    p.add_argument("--seed", type=int, default=0)
    common(p, default_format="json")
    return parser


def _config_from_args(args) -> RunConfig:
    spec = getattr(args, "profile", None)
    mode = args.mode
    if mode is None:
        mode = "float" if spec and spec.startswith("hydrogenic:") else "rational"
    if args.command == "stats":
        n_range = parse_n_range(args.n)
    elif args.command == "lambdas":
        n_range = range(1, args.n_max + 1)
    else:
        if spec and spec.startswith("hydrogenic:"):
            raise UsageError("verify needs a discrete profile; hydrogenic profiles have no finite mode basis")
        n_max = args.n_max if args.n_max is not None else MAX_CHECK_MODES
        n_range = range(1, n_max + 1)
    return RunConfig(profile_spec=spec, n_range=n_range, mode=mode, output=args.fmt,
                     out_path=args.out, seed=getattr(args, "seed", 0),
                     lambda_max=getattr(args, "lambda_max", None),
                     random_profiles=getattr(args, "random", 0),
                     random_modes=getattr(args, "modes", 6))


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "stats":
            meta, rows = run_stats(config)
            _emit(render(meta, rows, config.output), config.out_path)
            return EXIT_OK
        if args.command == "lambdas":
            meta, rows = run_lambdas(config, quadrature=args.quadrature)
            _emit(render(meta, rows, config.output), config.out_path)
            return EXIT_OK
        report = run_verify(config)
        if config.output == "json":
            text = report.to_json(indent=2) + "\n"
        else:
            text = render({}, report.to_json_list(), "csv")
        _emit(text, config.out_path)
        failed = len(report.failures)
        print(f"{len(report.results) - failed}/{len(report.results)} checks passed",
              file=sys.stderr)
        return EXIT_OK if report.passed else EXIT_VERIFY_FAILED
    except PrecisionDomainError as exc:
        print(f"precision error: {exc} (last reliable N: {exc.last_reliable_n})", file=sys.stderr)
        return EXIT_PRECISION
    except (UsageError, ProfileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
