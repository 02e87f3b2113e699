"""Parameter scans over state families and bisection for detection thresholds.

A *criterion* here is a named margin function of the family parameter: it is
positive exactly where the criterion reports detection.  Thresholds are
measured on the computed pipeline, not taken from closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import correlations as corr
from . import criteria
from . import verify
from .errors import InputError
from .states import StateFamily, family

__all__ = [
    "CRITERIA",
    "ScanResult",
    "Threshold",
    "criterion_names",
    "find_threshold",
    "margin",
    "scan",
]

_KIND_BY_THEOREM = {v: k for k, v in criteria.THEOREM.items()}


def _kind_margin(kind: str) -> Callable:
    def fn(report, rho, x):
        margins = [r.margin for r in report.by_kind(kind) if r.margin is not None]
        if not margins:
            raise InputError(f"{criteria.THEOREM[kind]} does not apply to this state")
        return max(margins)

    return fn


def _agg_margin(name: str, attr: str) -> Callable:
    def fn(report, rho, x):
        try:
            agg = report.aggregate(name)
        except KeyError:
            raise InputError(f"{name} does not apply to this state") from None
        value = getattr(agg, attr)
        if value is None:
            raise InputError(f"{name}: {agg.error}")
        return value

    return fn


def _ppt_margin(report, rho, x):
    return -min(verify.ppt_min_eigenvalue(rho, side) for side in verify.bipartitions(rho.n_parties))


def _ref_margin(key: str) -> Callable:
    return lambda report, rho, x: criteria.reference_curves(x)[key]


# Margin > 0 <=> detection.  Partition criteria take the largest margin over
# all role variants of that kind (detection across at least one such cut).
CRITERIA: dict[str, Callable] = {
    **{theorem: _kind_margin(kind) for theorem, kind in _KIND_BY_THEOREM.items()},
    "gme3-theorem3": _agg_margin("gme3", "margin"),
    "gme3-corollary1": _agg_margin("gme3", "corollary_margin"),
    "gme4-theorem7": _agg_margin("gme4", "margin"),
    "gme4-corollary2": _agg_margin("gme4", "corollary_margin"),
    "ppt": _ppt_margin,
    "f2": _ref_margin("f2"),
    "f6": _ref_margin("f6"),
    "f7": _ref_margin("f7"),
}


def criterion_names() -> list[str]:
    return sorted(CRITERIA)


def _resolve(fam: StateFamily | str) -> StateFamily:
    return family(fam) if isinstance(fam, str) else fam


def margin(fam: StateFamily | str, criterion: str, x: float, phase: str = "plus", bound_variant: str = "proof") -> float:
    """Margin of ``criterion`` for the family member at ``x``."""
    fam = _resolve(fam)
    if criterion not in CRITERIA:
        raise InputError(f"unknown criterion {criterion!r}; choose from {criterion_names()}")
    if criterion in ("f2", "f6", "f7"):
        return CRITERIA[criterion](None, None, x)
    rho = fam(x)
    report = None
    if criterion != "ppt":
        report = criteria.evaluate_data(corr.extract(rho, phase), bound_variant)
    return float(CRITERIA[criterion](report, rho, x))


@dataclass(frozen=True)
class Threshold:
    family: str
    criterion: str
    threshold: float
    bracket: tuple[float, float]
    bracket_margins: tuple[float, float]
    detected_side: str
    iterations: int

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "criterion": self.criterion,
            "threshold": self.threshold,
            "bracket": list(self.bracket),
            "bracket_margins": list(self.bracket_margins),
            "detected_side": self.detected_side,
            "iterations": self.iterations,
        }


def find_threshold(
    fam: StateFamily | str,
    criterion: str,
    tol: float = 1e-9,
    lo: float = 0.0,
    hi: float = 1.0,
    phase: str = "plus",
    bound_variant: str = "proof",
    grid: int = 101,
) -> Threshold:
    """Locate the sign change of a criterion's margin on ``[lo, hi]`` by bisection.

    If the endpoint margins share a sign, the first sign change on a uniform
    grid of ``grid`` points is bracketed instead.  The returned threshold is
    the bracket midpoint, within ``tol`` of the root.
    """
    fam = _resolve(fam)
    if tol < 1e-9:
        raise InputError("tol must be >= 1e-9")
    if not 0.0 <= lo < hi <= 1.0:
        raise InputError(f"need 0 <= lo < hi <= 1, got [{lo}, {hi}]")

    def m(x):
        return margin(fam, criterion, x, phase, bound_variant)

    a, b = lo, hi
    ma, mb = m(a), m(b)
    if (ma > 0) == (mb > 0):
        xs = np.linspace(lo, hi, grid)
        prev_x, prev_m = xs[0], ma
        for x in xs[1:]:
            mx = m(x)
            if (mx > 0) != (prev_m > 0):
                a, b, ma, mb = prev_x, float(x), prev_m, mx
                break
            prev_x, prev_m = float(x), mx
        else:
            raise InputError(
                f"{criterion} margin does not change sign on [{lo}, {hi}] for {fam.name} "
                f"(margin {ma:.6g} at {lo}, {mb:.6g} at {hi})"
            )
    side = "below" if ma > 0 else "above"
    iterations = 0
    while b - a > 2 * tol:
        mid = 0.5 * (a + b)
        mm = m(mid)
        if (mm > 0) == (ma > 0):
            a, ma = mid, mm
        else:
            b, mb = mid, mm
        iterations += 1
    return Threshold(fam.name, criterion, 0.5 * (a + b), (a, b), (ma, mb), side, iterations)


@dataclass
class ScanResult:
    family: str
    xs: list[float]
    records: list[dict] = field(default_factory=list)

    def columns(self) -> list[str]:
        """CSV column order: x, partition margins, aggregate scores, reference curves."""
        first = self.records[0]
        cols = ["x"]
        cols += [f"margin[{p['partition']}]" for p in first["partitions"]]
        for agg in first["aggregates"]:
            cols += [f"{agg['name']}.{k}" for k in ("score", "max_bound", "mean_bound", "margin", "corollary_margin")]
        cols += sorted(first["reference"])
        return cols

    def rows(self) -> list[list[float | None]]:
        out = []
        for rec in self.records:
            row = [rec["x"]]
            row += [p["margin"] for p in rec["partitions"]]
            for agg in rec["aggregates"]:
                row += [agg[k] for k in ("score", "max_bound", "mean_bound", "margin", "corollary_margin")]
            row += [rec["reference"][k] for k in sorted(rec["reference"])]
            out.append(row)
        return out

    def to_dict(self) -> dict:
        return {"family": self.family, "grid": list(self.xs), "records": self.records}


def scan(
    fam: StateFamily | str,
    start: float = 0.0,
    stop: float = 1.0,
    steps: int = 101,
    phase: str = "plus",
    bound_variant: str = "proof",
) -> ScanResult:
    """Evaluate every criterion on a uniform grid of the family parameter."""
    fam = _resolve(fam)
    if not 0.0 <= start < stop <= 1.0:
        raise InputError(f"need 0 <= from < to <= 1, got [{start}, {stop}]")
    if steps < 2:
        raise InputError("steps must be >= 2")
    xs = [float(x) for x in np.linspace(start, stop, steps)]
    result = ScanResult(fam.name, xs)
    for x in xs:
        report = criteria.evaluate_data(corr.extract(fam(x), phase), bound_variant)
        result.records.append(
            {
                "x": x,
                "partitions": [
                    {k: r.to_dict()[k] for k in ("partition", "trace_norm", "bound", "margin", "detected")}
                    for r in report.records
                ],
                "aggregates": [a.to_dict() for a in report.aggregates],
                "reference": criteria.reference_curves(x),
            }
        )
    return result

