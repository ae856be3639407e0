"""Command-line experiment runner.

    lfunlab <subcommand> --q <int|lo-hi|list> --subgroups <all|even|list> --out PATH
            [--format jsonl|csv] [--cutoff-euler N] [--cutoff-resonator N]
            [--afe-A A] [--threads N] [--b-sigma theorem|proof] [--config FILE]

Settings come from built-in defaults, then an INI file, then flags (flags win).
The manifest written next to the data file stores the merged result.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import logging
import os
import platform
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .. import __version__
from ..modarith import is_prime
from .emit import dumps_record, write_csv, write_jsonl, write_manifest
from .runner import SUBCOMMANDS, RunConfig, as_float_params, run

log = logging.getLogger("lfunlab")

THREADS_ENV = "LFUNLAB_THREADS"

# flag name -> (type, default); None defaults mean "not given"
_COMMON = {
    "subgroups": (str, "all"),
    "format": (str, "jsonl"),
    "cutoff_euler": (int, 10**6),
    "cutoff_resonator": (int, 10**5),
    "afe_A": (int, 4),
    "b_sigma": (str, "theorem"),
}

# subcommand-specific numeric knobs, all optional
_PARAMS = {
    "sigma": float,
    "T": float,
    "h": int,
    "N": int,
    "N_exp": float,
    "Hlen": int,
    "Hlen_exp": float,
    "Hscale": float,
    "gamma": float,
    "alpha": float,
    "delta": float,
    "kappa": float,
    "eta": float,
    "x_floor": float,
    "y_floor": float,
    "min_H": int,
}

_MODE_DEFAULTS = {
    "extreme-s1": {"x_floor": 3.0},
    "extreme-sigma": {"sigma": 0.75, "y_floor": 3.0},
    "zerodensity": {"sigma": 0.6, "T": 5.0},
}


def parse_q_range(text: str) -> tuple[int, ...]:
    """'499', '100-200' (inclusive, primes only) or '101,499,1009' (kept as given)."""
    text = text.strip()
    if "," in text:
        return tuple(int(x) for x in text.split(",") if x.strip())
    if "-" in text:
        lo, hi = (int(x) for x in text.split("-", 1))
        if lo > hi:
            raise argparse.ArgumentTypeError(f"empty range {text}")
        return tuple(n for n in range(max(lo, 3), hi + 1) if is_prime(n))
    return (int(text),)


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", THREADS_ENV, env)
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lfunlab", description="Dirichlet L-function experiments over character subgroups")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="mode", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--q", required=True, type=parse_q_range, help="prime, inclusive range lo-hi, or comma list")
        p.add_argument("--subgroups", default=None, help="all | even | comma-separated divisors of q-1")
        p.add_argument("--out", required=True, type=Path)
        p.add_argument("--format", default=None, choices=["jsonl", "csv"])
        p.add_argument("--cutoff-euler", dest="cutoff_euler", type=int, default=None)
        p.add_argument("--cutoff-resonator", dest="cutoff_resonator", type=int, default=None)
        p.add_argument("--afe-A", dest="afe_A", type=int, default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--b-sigma", dest="b_sigma", choices=["theorem", "proof"], default=None)
        p.add_argument("--config", type=Path, default=None, help="INI file with [run] and [params] sections")
        for key, typ in _PARAMS.items():
            p.add_argument(f"--{key.replace('_', '-')}", dest=f"param_{key}", type=typ, default=None)
    return ap


def _read_config(path: Path | None, mode: str) -> tuple[dict, dict]:
    if path is None:
        return {}, {}
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep case: T, N, Hlen
    if not cp.read(path):
        raise SystemExit(f"cannot read config file {path}")
    run_sec, params = {}, {}
    for section in ("run", mode):
        if cp.has_section(section):
            for k, v in cp.items(section):
                k = k.replace("-", "_")
                if k in _COMMON:
                    run_sec[k] = _COMMON[k][0](v)
                elif k == "threads":
                    run_sec[k] = int(v)
                elif k in _PARAMS:
                    params[k] = _PARAMS[k](v)
    if cp.has_section("params"):
        for k, v in cp.items("params"):
            k = k.replace("-", "_")
            if k not in _PARAMS:
                raise SystemExit(f"unknown parameter {k!r} in {path}")
            params[k] = _PARAMS[k](v)
    return run_sec, params


def merge_config(args: argparse.Namespace) -> RunConfig:
    file_run, file_params = _read_config(args.config, args.mode)
    merged = {k: default for k, (_, default) in _COMMON.items()}
    merged["threads"] = default_threads()
    merged.update(file_run)
    for k in list(_COMMON) + ["threads"]:
        v = getattr(args, k, None)
        if v is not None:
            merged[k] = v
    params = dict(_MODE_DEFAULTS.get(args.mode, {}))
    params.update(file_params)
    for key in _PARAMS:
        v = getattr(args, f"param_{key}")
        if v is not None:
            params[key] = v
    return RunConfig(
        mode=args.mode,
        qs=tuple(args.q),
        subgroups=merged["subgroups"],
        out=str(args.out),
        fmt=merged["format"],
        cutoff_euler=merged["cutoff_euler"],
        cutoff_resonator=merged["cutoff_resonator"],
        afe_A=merged["afe_A"],
        threads=merged["threads"],
        b_sigma=merged["b_sigma"],
        params=params,
    )


def run_id(cfg: RunConfig) -> str:
    return hashlib.sha256(dumps_record(cfg.echo()).encode()).hexdigest()[:16]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = merge_config(args)
    except ValueError as err:
        print(f"lfunlab: {err}", file=sys.stderr)
        return 2
    rid = run_id(cfg)
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    records = []
    for rec in run(cfg):
        rec = as_float_params(rec)
        rec["run_id"] = rid
        rec["config"] = cfg.echo()
        records.append(rec)
        log.info("q=%s H=%s valid=%s", rec["q"], rec["H"], rec["valid"])
    out = Path(cfg.out)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        if cfg.fmt == "jsonl":
            write_jsonl(records, out)
        else:
            write_csv(records, out)
        n_valid = sum(r["valid"] for r in records)
        write_manifest(
            out,
            {
                "run_id": rid,
                "config": cfg.echo(),
                "threads": cfg.threads,
                "output": str(out),
                "format": cfg.fmt,
                "version": __version__,
                "python": platform.python_version(),
                "numpy": np.__version__,
                "started": started.isoformat(),
                "wall_time_s": time.perf_counter() - t0,
                "records": len(records),
                "valid": n_valid,
                "invalid": len(records) - n_valid,
            },
        )
    except OSError as err:
        print(f"lfunlab: cannot write output: {err}", file=sys.stderr)
        return 3
    return 0 if all(r["valid"] for r in records) else 1


if __name__ == "__main__":
    sys.exit(main())
