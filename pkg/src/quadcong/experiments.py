"""Moment sweeps across moduli, exponent fitting, and bound comparison.

A sweep computes the class-count histogram for one box per modulus, turns it
into the exact second moment V and optional per-divisor strata, and emits
records comparing V against (M+N)^2 and against q^(4/3) * r^3 (the latter
only for square boxes, where that bound applies). Only the emitted report
fields are floats; every comparison upstream of them is exact.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .counting import BoxSpec, count_distribution, second_moment, strata_moments
from .errors import DegenerateFit, OutOfRange
from .numtheory import ModulusProfile

log = logging.getLogger(__name__)

BOX_RULES = ("two-thirds", "fixed", "ratio")

CSV_HEADER = "q,M,N,V,theorem_base,ratio_theorem,r,hb_bound,ratio_hb"


@dataclass(frozen=True)
class SweepConfig:
    """Which moduli to sweep and how to pick the box for each.

    Moduli come from an explicit q_list or from [q_min, q_max] with q_step
    (even values skipped). Box rules: "two-thirds" sets M = N = ceil(q^(2/3));
    "fixed" uses M, N clamped to [1, q]; "ratio" uses floor(rho * q) clamped
    to [1, q] for each side.
    """

    q_list: tuple[int, ...] | None = None
    q_min: int | None = None
    q_max: int | None = None
    q_step: int = 2
    box_rule: str = "two-thirds"
    M: int | None = None
    N: int | None = None
    rho_m: Fraction | None = None
    rho_n: Fraction | None = None
    seed: int = 42
    stratify: bool = False
    output: str | None = None

    def __post_init__(self):
        if self.box_rule not in BOX_RULES:
            raise OutOfRange(f"box_rule must be one of {BOX_RULES}, got {self.box_rule!r}")
        if self.q_list is None and (self.q_min is None or self.q_max is None):
            raise OutOfRange("config needs q_list or q_min/q_max")
        if self.box_rule == "fixed" and (self.M is None or self.N is None):
            raise OutOfRange("box_rule 'fixed' needs M and N")
        if self.box_rule == "ratio" and (self.rho_m is None or self.rho_n is None):
            raise OutOfRange("box_rule 'ratio' needs rho_m and rho_n")

    @classmethod
    def from_json(cls, path: str | Path) -> "SweepConfig":
        raw = json.loads(Path(path).read_text())
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepConfig":
        def frac(key):
            if key not in raw:
                return None
            num, den = str(raw[key]).split("/")
            return Fraction(int(num), int(den))

        return cls(
            q_list=tuple(raw["q_list"]) if "q_list" in raw else None,
            q_min=raw.get("q_min"),
            q_max=raw.get("q_max"),
            q_step=raw.get("q_step", 2),
            box_rule=raw.get("box_rule", "two-thirds"),
            M=raw.get("M"),
            N=raw.get("N"),
            rho_m=frac("rho_m"),
            rho_n=frac("rho_n"),
            seed=raw.get("seed", 42),
            stratify=bool(raw.get("stratify", False)),
            output=raw.get("output"),
        )

    def moduli(self) -> list[int]:
        if self.q_list is not None:
            return list(self.q_list)
        qs = []
        q = self.q_min
        while q <= self.q_max:
            if q % 2 == 1:
                qs.append(q)
            q += self.q_step
        return qs

    def box_for(self, q: int) -> BoxSpec:
        if self.box_rule == "two-thirds":
            side = min(q, ceil_two_thirds_power(q))
            return BoxSpec(M=side, N=side, q=q)
        if self.box_rule == "fixed":
            clamp = lambda v: max(1, min(q, v))
            return BoxSpec(M=clamp(self.M), N=clamp(self.N), q=q)
        side = lambda rho: max(1, min(q, (rho.numerator * q) // rho.denominator))
        return BoxSpec(M=side(self.rho_m), N=side(self.rho_n), q=q)


def ceil_two_thirds_power(q: int) -> int:
    """ceil(q^(2/3)) exactly: the least c with c^3 >= q^2."""
    target = q * q
    c = round(target ** (1.0 / 3.0))
    while c**3 < target:
        c += 1
    while c > 1 and (c - 1) ** 3 >= target:
        c -= 1
    return c


def heath_brown_bound(q: int, r: int) -> float:
    """q^(4/3) * r^3 as a float, the square-box comparison scale."""
    return float(q) ** (4.0 / 3.0) * r**3


@dataclass(frozen=True)
class MomentRecord:
    q: int
    M: int
    N: int
    V: Fraction
    theorem_base: int
    hb_r: int
    hb_bound: float
    ratio_theorem: float
    ratio_hb: float | None
    strata: dict[int, Fraction] | None = None

    @property
    def V_float(self) -> float:
        return float(self.V)


@dataclass(frozen=True)
class SweepResult:
    records: tuple[MomentRecord, ...]
    skipped: tuple[tuple[int, str], ...] = field(default_factory=tuple)


def _record_for(q: int, config: SweepConfig) -> MomentRecord:
    profile = ModulusProfile.from_q(q)
    box = config.box_for(q)
    hist = count_distribution(box)
    v = second_moment(box, hist)
    strata = strata_moments(box, hist) if config.stratify else None
    base = (box.M + box.N) ** 2
    bound = heath_brown_bound(q, profile.r)
    return MomentRecord(
        q=q,
        M=box.M,
        N=box.N,
        V=v,
        theorem_base=base,
        hb_r=profile.r,
        hb_bound=bound,
        ratio_theorem=float(v / base),
        ratio_hb=float(v) / bound if box.M == box.N else None,
        strata=strata,
    )


def run_sweep(config: SweepConfig, workers: int = 1) -> SweepResult:
    """One MomentRecord per odd modulus, ordered by q; even moduli are
    skipped with a warning. Worker count never changes the records."""
    moduli = sorted(config.moduli())
    skipped = []
    todo = []
    for q in moduli:
        if q % 2 == 0:
            log.warning("skipping even modulus %d: theory requires odd q", q)
            skipped.append((q, "even modulus"))
        elif q < 3:
            log.warning("skipping modulus %d: sweeps need q >= 3", q)
            skipped.append((q, "modulus below 3"))
        else:
            todo.append(q)
    if workers > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda q: _record_for(q, config), todo))
    else:
        records = [_record_for(q, config) for q in todo]
    records.sort(key=lambda rec: rec.q)
    return SweepResult(records=tuple(records), skipped=tuple(skipped))


def fit_exponent(points) -> tuple[float, float]:
    """Least-squares slope and intercept of log y against log x.

    Points with y = 0 are discarded; fewer than two usable points, or any
    nonpositive coordinate among them, is a DegenerateFit.
    """
    usable = [(x, y) for x, y in points if y != 0]
    if len(usable) < 2:
        raise DegenerateFit(f"need >= 2 points with y > 0, have {len(usable)}")
    if any(x <= 0 or y < 0 for x, y in usable):
        raise DegenerateFit("log-log fit needs positive coordinates")
    lx = np.log([float(x) for x, _ in usable])
    ly = np.log([float(y) for _, y in usable])
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(intercept)


@dataclass(frozen=True)
class BoundReport:
    slope_v: float | None
    slope_residual: float | None
    max_ratio_theorem: float
    max_ratio_hb: float | None
    verdicts: tuple[str, ...]


def bound_report(records, residual_threshold: float = 0.5) -> BoundReport:
    """Fitted exponents of V and of V/(M+N)^2 against q, worst ratios, and a
    verdict line per bound."""
    records = list(records)
    if len(records) < 2:
        raise DegenerateFit(f"bound report needs >= 2 records, have {len(records)}")
    if all(rec.V == 0 for rec in records):
        return BoundReport(
            slope_v=None,
            slope_residual=None,
            max_ratio_theorem=0.0,
            max_ratio_hb=None,
            verdicts=("degenerate: zero moments",),
        )
    slope_v, _ = fit_exponent([(rec.q, rec.V) for rec in records])
    slope_res, _ = fit_exponent(
        [(rec.q, rec.V / rec.theorem_base) for rec in records]
    )
    max_theorem = max(rec.ratio_theorem for rec in records)
    hb_ratios = [rec.ratio_hb for rec in records if rec.ratio_hb is not None]
    max_hb = max(hb_ratios) if hb_ratios else None
    verdicts = []
    if slope_res <= residual_threshold:
        verdicts.append(
            f"theorem envelope: consistent at desk scale "
            f"(residual exponent {slope_res:.4f} <= {residual_threshold})"
        )
    else:
        verdicts.append(
            f"theorem envelope: residual exponent {slope_res:.4f} exceeds {residual_threshold}"
        )
    if max_hb is not None:
        verdicts.append(
            f"square-box scale q^(4/3)*r^3: max ratio {max_hb:.6g} (context only, no assertion)"
        )
    else:
        verdicts.append("square-box scale q^(4/3)*r^3: not applicable (no M = N records)")
    return BoundReport(
        slope_v=slope_v,
        slope_residual=slope_res,
        max_ratio_theorem=max_theorem,
        max_ratio_hb=max_hb,
        verdicts=tuple(verdicts),
    )


def _sig12(x: float) -> str:
    return f"{x:.12g}"


def csv_lines(records) -> list[str]:
    lines = [CSV_HEADER]
    for rec in records:
        ratio_hb = _sig12(rec.ratio_hb) if rec.ratio_hb is not None else ""
        lines.append(
            ",".join(
                [
                    str(rec.q),
                    str(rec.M),
                    str(rec.N),
                    _sig12(rec.V_float),
                    str(rec.theorem_base),
                    _sig12(rec.ratio_theorem),
                    str(rec.hb_r),
                    _sig12(rec.hb_bound),
                    ratio_hb,
                ]
            )
        )
    return lines


def write_csv(records, path: str | Path) -> None:
    Path(path).write_text("\n".join(csv_lines(records)) + "\n")


def records_to_json(records) -> list[dict]:
    out = []
    for rec in records:
        entry = {
            "q": rec.q,
            "M": rec.M,
            "N": rec.N,
            "V": rec.V_float,
            "theorem_base": rec.theorem_base,
            "ratio_theorem": rec.ratio_theorem,
            "r": rec.hb_r,
            "hb_bound": rec.hb_bound,
            "ratio_hb": rec.ratio_hb,
        }
        if rec.strata is not None:
            entry["strata"] = {str(d): float(s) for d, s in sorted(rec.strata.items())}
        out.append(entry)
    return out


def write_json(records, path: str | Path) -> None:
    Path(path).write_text(json.dumps(records_to_json(records), indent=2, sort_keys=True) + "\n")


def write_records(records, path: str | Path) -> None:
    """CSV or JSON by file extension (.json gets JSON, everything else CSV)."""
    if str(path).endswith(".json"):
        write_json(records, path)
    else:
        write_csv(records, path)
