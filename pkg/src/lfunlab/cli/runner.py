"""Work items for each subcommand. Each item is one (q, subgroup) or (q, setting)
pair and yields exactly one record; failures become records, not exceptions."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .. import charstats
from ..characters import subgroup
from ..modarith import CompositeModulusError, build_context, divisors
from ..resonance import (
    ResonanceConfig,
    ResonanceReport,
    resonance_half_line,
    resonance_sigma1,
    resonance_sigma_interior,
)

SUBCOMMANDS = (
    "extreme-s1",
    "extreme-sigma",
    "extreme-half",
    "meanvalue",
    "hbsum",
    "zerodensity",
    "spacings",
    "paircorr",
)


@dataclass(frozen=True)
class RunConfig:
    mode: str
    qs: tuple[int, ...]
    subgroups: str = "all"  # all | even | comma-separated divisor list
    out: str = "results.jsonl"
    fmt: str = "jsonl"
    cutoff_euler: int = 10**6
    cutoff_resonator: int = 10**5
    afe_A: int = 4
    threads: int = 1
    b_sigma: str = "theorem"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.mode}")
        if self.fmt not in ("jsonl", "csv"):
            raise ValueError("format must be jsonl or csv")
        if self.cutoff_euler < 2 or self.cutoff_resonator < 1 or self.afe_A < 2:
            raise ValueError("cutoffs must be positive (euler >= 2, afe A >= 2)")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.b_sigma not in ("theorem", "proof"):
            raise ValueError("b-sigma must be theorem or proof")

    def echo(self) -> dict:
        """Everything that determines the data bytes (threads and output path excluded)."""
        return {
            "mode": self.mode,
            "qs": list(self.qs),
            "subgroups": self.subgroups,
            "cutoff_euler": self.cutoff_euler,
            "cutoff_resonator": self.cutoff_resonator,
            "afe_A": self.afe_A,
            "b_sigma": self.b_sigma,
            "params": dict(sorted(self.params.items())),
        }


@lru_cache(maxsize=32)
def _context(q: int):
    return build_context(q)


def select_subgroups(q: int, selector: str, min_H: int = 1, even: bool = False) -> list[int]:
    divs = divisors(q - 1)
    if selector == "all":
        chosen = divs
    elif selector == "even":
        chosen = [d for d in divs if d % 2 == 0]
    else:
        wanted = [int(x) for x in selector.split(",") if x.strip()]
        chosen = [d for d in wanted if (q - 1) % d == 0]
    if even:
        chosen = [d for d in chosen if d % 2 == 0]
    return sorted(d for d in chosen if d >= min_H)


def _report_fields(r: ResonanceReport) -> dict:
    return {
        "S1": r.S1,
        "S2": r.S2,
        "ratio": r.ratio,
        "ratio_nonprincipal": r.ratio_nonprincipal,
        "lower_bound": r.lower_bound,
        "witness_e": r.witness.e,
        "exhaustive_max": r.exhaustive_max,
        "truncation_error": r.truncation_error,
        "chain_ok": r.chain_ok,
        "max_ok_with_chi0": r.max_ok,
        "max_ok": r.max_ok_nonprincipal,
        "details": {k: v for k, v in r.params.items()},
    }


def _res_config(cfg: RunConfig, H: int) -> ResonanceConfig:
    p = cfg.params
    base = ResonanceConfig(
        delta=p.get("delta", 1.0),
        kappa=p.get("kappa", 0.3),
        eta=p.get("eta", 0.02),
        euler_cutoff=cfg.cutoff_euler,
        truncation_cutoff=cfg.cutoff_resonator,
    )
    X = max(base.X_for(H), p.get("x_floor", 0.0))
    Y = max(base.Y_for(H), p.get("y_floor", 0.0))
    return ResonanceConfig(
        delta=base.delta,
        kappa=base.kappa,
        eta=base.eta,
        euler_cutoff=base.euler_cutoff,
        truncation_cutoff=base.truncation_cutoff,
        X_override=X,
        Y_override=Y,
    )


# -- per-item workers ------------------------------------------------------------


def _extreme(cfg: RunConfig, q: int, H: int) -> dict:
    ctx = _context(q)
    if cfg.mode == "extreme-s1":
        rep = resonance_sigma1(ctx, H, _res_config(cfg, H))
    elif cfg.mode == "extreme-sigma":
        rep = resonance_sigma_interior(ctx, H, cfg.params.get("sigma", 0.75), _res_config(cfg, H), cfg.b_sigma)
    else:
        h = int(cfg.params.get("h", 0)) or max(1, int(H / math.sqrt(q)))
        rep = resonance_half_line(ctx, H, min(h, q))
    rec = _report_fields(rep)
    if cfg.mode == "extreme-half":
        d = rep.params
        rec["chain_ok"] = bool(
            d["S1_full_group"] <= d["S1_full_group_bound"] * (1 + 1e-12)
            and d["R_chi0_sq"] <= d["R_chi0_bound"] * (1 + 1e-12)
            and d["mass"] == d["size_M"] <= d["h"]
        )
    rec["verified"] = bool(rec["chain_ok"] and rec["max_ok"])
    return rec


def _meanvalue(cfg: RunConfig, q: int, H: int) -> dict:
    ctx = _context(q)
    N = _length(cfg, q, "N_exp", 0.5)
    rep = charstats.mean_value_M(subgroup(ctx, H), N)
    ok = math.isfinite(rep.ratio) and rep.ratio > 0
    return {"N": N, "M": rep.M, "K": rep.K, "envelope": rep.envelope, "ratio": rep.ratio, "verified": ok}


def _hbsum(cfg: RunConfig, q: int, H: int) -> dict:
    ctx = _context(q)
    N = _length(cfg, q, "N_exp", 0.5)
    chars = list(subgroup(ctx, H))
    val = charstats.hb_double_sum(chars, N)
    env = charstats.hb_envelope(N, len(chars), q)
    return {"N": N, "R": len(chars), "value": val, "envelope": env, "ratio": val / env, "verified": math.isfinite(val)}


def _zerodensity(cfg: RunConfig, q: int, H: int) -> dict:
    ctx = _context(q)
    sigma = cfg.params.get("sigma", 0.6)
    T = cfg.params.get("T", 5.0)
    agg = charstats.zero_density_aggregate(subgroup(ctx, H), sigma, T)
    return {
        "sigma": sigma,
        "T": T,
        "total": agg.total,
        "per_char": {str(e): c for e, c in sorted(agg.per_char.items())},
        "envelope": agg.bound_envelope,
        "contour_margin": agg.margin,
        "verified": agg.total >= 0,
    }


def _length(cfg: RunConfig, q: int, key: str, default_exp: float) -> int:
    if key.replace("_exp", "") in cfg.params:
        return int(cfg.params[key.replace("_exp", "")])
    return min(q - 1, math.ceil(q ** cfg.params.get(key, default_exp)))


def _spacings(cfg: RunConfig, q: int, _H: int) -> dict:
    ctx = _context(q)
    N = _length(cfg, q, "N_exp", 0.72)
    Hlen = _length(cfg, q, "Hlen_exp", 0.45)
    num = charstats.variance_numerator(ctx, Hlen, N)
    f = charstats.window_counts_all(ctx, Hlen, N)
    return {
        "N": N,
        "Hlen": Hlen,
        "g": ctx.g,
        "V": num / q**2,
        "variance_sum": num / q,
        "ratio_to_HN": (num / q) / (Hlen * N),
        "sum_f": int(f.sum()),
        "verified": int(f.sum()) == Hlen * N and num >= 0,
    }


def _paircorr(cfg: RunConfig, q: int, _H: int) -> dict:
    ctx = _context(q)
    N = _length(cfg, q, "N_exp", 0.7)
    Hscale = float(cfg.params.get("Hscale", N))
    gamma = float(cfg.params.get("gamma", 1.0))
    alphas = [k / 10 for k in range(10)] if "alpha" not in cfg.params else [float(cfg.params["alpha"])]
    C = charstats.pair_difference_counts(ctx, N)
    vals = []
    for a in alphas:
        lo, hi = charstats.r2_window(q, Hscale, a, gamma)
        vals.append(int(C[lo + 1 : hi + 1].sum()) / N if hi > lo else 0.0)
    mean = math.fsum(vals) / len(vals)
    return {
        "N": N,
        "Hscale": Hscale,
        "gamma": gamma,
        "alphas": alphas,
        "R2": vals,
        "R2_mean": mean,
        "deviation": abs(mean - gamma),
        "verified": all(v >= 0 for v in vals),
    }


_WORKERS = {
    "extreme-s1": _extreme,
    "extreme-sigma": _extreme,
    "extreme-half": _extreme,
    "meanvalue": _meanvalue,
    "hbsum": _hbsum,
    "zerodensity": _zerodensity,
    "spacings": _spacings,
    "paircorr": _paircorr,
}


def work_items(cfg: RunConfig) -> list[tuple[int, int | None, str | None]]:
    """(q, H, error) triples in a fixed order; composite q yields one error item."""
    items: list[tuple[int, int | None, str | None]] = []
    per_subgroup = cfg.mode not in ("spacings", "paircorr")
    min_H = int(cfg.params.get("min_H", 4 if cfg.mode.startswith("extreme") else 2))
    for q in cfg.qs:
        try:
            _context(q)
        except CompositeModulusError as err:
            items.append((q, None, str(err)))
            continue
        if not per_subgroup:
            items.append((q, None, None))
            continue
        even = cfg.mode == "extreme-half"
        for H in select_subgroups(q, cfg.subgroups, min_H, even):
            items.append((q, H, None))
    return items


def _run_item(cfg: RunConfig, item) -> dict:
    q, H, error = item
    rec = {"subcommand": cfg.mode, "q": q, "H": H}
    if error is None:
        try:
            rec.update(_WORKERS[cfg.mode](cfg, q, H))
            rec["error"] = None
        except Exception as err:  # one failing pair must not stop the run
            rec.update({"verified": False, "error": f"{type(err).__name__}: {err}"})
    else:
        rec.update({"verified": False, "error": error})
    rec["valid"] = bool(rec.get("verified")) and rec["error"] is None
    return rec


def run(cfg: RunConfig) -> list[dict]:
    """Evaluate every work item; output order is the work-item order regardless of threads."""
    items = work_items(cfg)
    if cfg.threads == 1 or len(items) <= 1:
        return [_run_item(cfg, it) for it in items]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(lambda it: _run_item(cfg, it), items))


def as_float_params(rec: dict) -> dict:
    """numpy scalars to builtin Python values, recursively."""
    out = {}
    for k, v in rec.items():
        if isinstance(v, dict):
            out[k] = as_float_params(v)
        elif isinstance(v, np.generic):
            out[k] = v.item()
        else:
            out[k] = v
    return out
