"""Trace-norm separability and GME criteria built from HW correlation tensors.

Every criterion assembles a real block matrix ``S`` from correlation tensors
of the state and compares its trace norm with a closed-form bound that holds
for all states separable under the corresponding partition.  A trace norm
strictly above the bound certifies entanglement across that partition.

Partition kinds and the block layout of ``S`` (rows x columns):

``tri-bipartition``  f|gh      [[2, T^g', T^gh'], [2 T^f, T^fg, T^fgh]]
``tri-full``         f|g|h     [[2, T^g', T^h'],  [2 T^f, T^fg, T^fh]]
``quad-1v3``         f|ghe     [[2, T^h', T^ghe'], [2 T^f, T^fh, T^fghe]]
``quad-2v2``         fg|he     [[2, T^h', T^he'], [2 T^fg, T^fgh, T^fghe]]
``quad-tripartition`` f|g|he   [[T^g', T^gh', T^ghe'], [T^fg, T^fgh, T^fghe]]

Multi-party blocks are matricized with :func:`hwent.correlations.matricize`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import correlations as corr
from .correlations import CorrelationData
from .errors import CriterionInapplicable, InputError
from .states import DensityMatrix

__all__ = [
    "BOUND_VARIANTS",
    "KINDS",
    "CriterionReport",
    "GMEAggregate",
    "PartitionRecord",
    "PartitionSpec",
    "SMatrix",
    "bound",
    "bound_quad_1v3",
    "bound_quad_2v2",
    "bound_quad_tripart",
    "bound_tri_bipartition",
    "bound_tri_full",
    "evaluate",
    "evaluate_all",
    "evaluate_data",
    "gme3",
    "gme4",
    "partitions",
    "permutation_deviation",
    "reference_curves",
    "s_matrix",
    "s_quad_1v3",
    "s_quad_2v2",
    "s_quad_tripart",
    "s_tri_bipartition",
    "s_tri_full",
    "trace_norm",
]

KINDS = ("tri-bipartition", "tri-full", "quad-1v3", "quad-2v2", "quad-tripartition")
THEOREM = {
    "tri-bipartition": "theorem1",
    "tri-full": "theorem2",
    "quad-1v3": "theorem4",
    "quad-2v2": "theorem5",
    "quad-tripartition": "theorem6",
}
BOUND_VARIANTS = ("proof", "statement")
PERMUTATION_TOL = 1e-10
# Trace norms carry ~1e-15 relative rounding and pure product states sit
# exactly on the f|g|h bound, so a margin must clear this before it counts.
DETECTION_TOL = 1e-10


def trace_norm(mat: np.ndarray) -> float:
    """Sum of singular values of a real or complex matrix."""
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0.0
    if not np.all(np.isfinite(mat)):
        raise InputError("trace norm of a matrix with non-finite entries")
    return float(np.sum(np.linalg.svd(mat, compute_uv=False)))


# --- partitions ---------------------------------------------------------------


@dataclass(frozen=True)
class PartitionSpec:
    """A partition kind plus the party playing each role letter (0-based).

    Unused letters are ``None``.  ``f`` is always the row party; for
    ``quad-2v2`` the row pair is ``(f, g)``.
    """

    kind: str
    f: int
    g: int
    h: int | None = None
    e: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown partition kind {self.kind!r}")
        roles = self.roles()
        n = 3 if self.kind.startswith("tri") else 4
        if sorted(roles.values()) != list(range(n)):
            raise InputError(f"roles {roles} are not a permutation of {n} parties for {self.kind}")

    @property
    def n_parties(self) -> int:
        return 3 if self.kind.startswith("tri") else 4

    def roles(self) -> dict[str, int]:
        return {k: v for k, v in (("f", self.f), ("g", self.g), ("h", self.h), ("e", self.e)) if v is not None}

    @property
    def theorem(self) -> str:
        return THEOREM[self.kind]

    @property
    def label(self) -> str:
        """1-based label with the role choice that affects ``S`` in brackets."""
        f, g, h, e = (None if p is None else p + 1 for p in (self.f, self.g, self.h, self.e))
        if self.kind == "tri-bipartition":
            lo, hi = sorted((g, h))
            return f"{f}|{lo}{hi}[g={g}]"
        if self.kind == "tri-full":
            return f"{f}|{g}|{h}"
        if self.kind == "quad-1v3":
            rest = "".join(str(p) for p in sorted((g, h, e)))
            return f"{f}|{rest}[h={h}]"
        if self.kind == "quad-2v2":
            return f"{f}{g}|{''.join(str(p) for p in sorted((h, e)))}[h={h}]"
        lo, hi = sorted((h, e))
        return f"{f}|{g}|{lo}{hi}[h={h}]"


def _others(n: int, *used: int) -> list[int]:
    return [p for p in range(n) if p not in used]


def partitions(kind: str, canonical_only: bool = False) -> list[PartitionSpec]:
    """Enumerate role assignments of a partition kind in a fixed order.

    Canonical roles fill unassigned letters with the remaining parties in
    ascending order.  The full enumerations are: f|gh 6, f|g|h 3, f|ghe 12,
    fg|he 12, f|g|he 24 (canonical: 3, 3, 4, 12, 24).
    """
    specs = []
    if kind == "tri-bipartition":
        for f in range(3):
            rest = _others(3, f)
            orders = [tuple(rest)] if canonical_only else list(itertools.permutations(rest))
            specs += [PartitionSpec(kind, f, g, h) for g, h in orders]
    elif kind == "tri-full":
        for f in range(3):
            g, h = _others(3, f)
            specs.append(PartitionSpec(kind, f, g, h))
    elif kind == "quad-1v3":
        for f in range(4):
            rest = _others(4, f)
            for h in rest[:1] if canonical_only else rest:
                g, e = _others(4, f, h)
                specs.append(PartitionSpec(kind, f, g, h, e))
    elif kind == "quad-2v2":
        for f, g in itertools.combinations(range(4), 2):
            for h in _others(4, f, g):
                (e,) = _others(4, f, g, h)
                specs.append(PartitionSpec(kind, f, g, h, e))
    elif kind == "quad-tripartition":
        for f, g, h in itertools.permutations(range(4), 3):
            (e,) = _others(4, f, g, h)
            specs.append(PartitionSpec(kind, f, g, h, e))
    else:
        raise InputError(f"unknown partition kind {kind!r}")
    return specs


# --- S matrices -----------------------------------------------------------------


@dataclass(frozen=True)
class SMatrix:
    """An assembled criterion matrix with its block layout.

    ``row_blocks`` / ``col_blocks`` list ``(label, size)`` pairs; the label
    names the party subset whose tensor enters the block (``"1"`` for the
    constant row or column).
    """

    partition: PartitionSpec
    matrix: np.ndarray
    row_blocks: tuple[tuple[str, int], ...]
    col_blocks: tuple[tuple[str, int], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def _size(dims: Sequence[int], parties: Sequence[int]) -> int:
    return math.prod(dims[p] ** 2 - 1 for p in parties)


def _assemble(
    data: CorrelationData,
    spec: PartitionSpec,
    row_parties: tuple[int, ...],
    col_groups: list[tuple[int, ...]],
    leading: bool,
) -> SMatrix:
    """Two block-rows: a constant row over ``T^C`` and a row party set ``R``.

    With ``leading`` a first column ``[2, 2 T^R]`` is prepended; without it
    the blocks are ``[T^C'; T^(R u C)]`` only.
    """
    dims = data.dims
    top, bottom = [], []
    col_blocks = []
    if leading:
        top.append(np.array([[2.0]]))
        bottom.append(2.0 * data.vector(row_parties)[:, None])
        col_blocks.append(("1", 1))
    for cols in col_groups:
        top.append(data.vector(cols)[None, :])
        bottom.append(corr.matricize(data, row_parties, cols))
        col_blocks.append((corr.subset_label(cols), _size(dims, cols)))
    mat = np.block([top, bottom])
    row_blocks = (("1", 1), (corr.subset_label(row_parties), _size(dims, row_parties)))
    return SMatrix(spec, mat, row_blocks, tuple(col_blocks))


def _check_arity(data: CorrelationData, spec: PartitionSpec) -> None:
    if data.n_parties != spec.n_parties:
        raise InputError(f"{spec.kind} needs {spec.n_parties} parties, state has {data.n_parties}")


def s_matrix(data: CorrelationData, spec: PartitionSpec) -> SMatrix:
    """Assemble ``S`` for any partition spec."""
    _check_arity(data, spec)
    f, g, h, e = spec.f, spec.g, spec.h, spec.e
    if spec.kind == "tri-bipartition":
        return _assemble(data, spec, (f,), [(g,), (g, h)], leading=True)
    if spec.kind == "tri-full":
        return _assemble(data, spec, (f,), [(g,), (h,)], leading=True)
    if spec.kind == "quad-1v3":
        return _assemble(data, spec, (f,), [(h,), (g, h, e)], leading=True)
    if spec.kind == "quad-2v2":
        return _assemble(data, spec, (f, g), [(h,), (h, e)], leading=True)
    return _assemble(data, spec, (f,), [(g,), (g, h), (g, h, e)], leading=False)


def s_tri_bipartition(data: CorrelationData, f: int, g: int | None = None, h: int | None = None) -> SMatrix:
    g, h = _fill(3, (f,), g, h)
    return s_matrix(data, PartitionSpec("tri-bipartition", f, g, h))


def s_tri_full(data: CorrelationData, f: int, g: int | None = None, h: int | None = None) -> SMatrix:
    g, h = _fill(3, (f,), g, h)
    return s_matrix(data, PartitionSpec("tri-full", f, g, h))


def s_quad_1v3(data: CorrelationData, f: int, h: int | None = None) -> SMatrix:
    return s_matrix(data, _spec_1v3(f, h))


def s_quad_2v2(data: CorrelationData, f: int, g: int, h: int | None = None) -> SMatrix:
    return s_matrix(data, _spec_2v2(f, g, h))


def s_quad_tripart(data: CorrelationData, f: int, g: int, h: int, e: int | None = None) -> SMatrix:
    (e_,) = _others(4, f, g, h)
    if e is not None and e != e_:
        raise InputError(f"e must be the remaining party {e_}")
    return s_matrix(data, PartitionSpec("quad-tripartition", f, g, h, e_))


def _fill(n: int, fixed: tuple[int, ...], *given: int | None) -> tuple[int, ...]:
    """Complete unassigned roles with the remaining parties in ascending order."""
    pool = [p for p in range(n) if p not in fixed and p not in given]
    return tuple(pool.pop(0) if r is None else r for r in given)


def _spec_1v3(f: int, h: int | None) -> PartitionSpec:
    rest = _others(4, f)
    h = rest[0] if h is None else h
    g, e = _others(4, f, h)
    return PartitionSpec("quad-1v3", f, g, h, e)


def _spec_2v2(f: int, g: int, h: int | None) -> PartitionSpec:
    f, g = sorted((f, g))
    rest = _others(4, f, g)
    h = rest[0] if h is None else h
    (e,) = _others(4, f, g, h)
    return PartitionSpec("quad-2v2", f, g, h, e)


# --- bounds ------------------------------------------------------------------------


def _local_factor(d: int) -> float:
    """``sqrt(1 + 4(d-1)/d^2) = sqrt((d^2 + 4d - 4)/d^2)``; max of ``sqrt(1 + |v|^2)`` over pure qudits."""
    return math.sqrt((d * d + 4 * d - 4) / (d * d))


def bound_tri_bipartition(dims: Sequence[int], f: int, g: int | None = None, h: int | None = None) -> float:
    g, h = _fill(3, (f,), g, h)
    df, dg, dh = dims[f], dims[g], dims[h]
    inner = (df * df + 4 * df - 4) * (
        dg**3 * dh**3 + dg**2 * dh**3 - dg * dh**3 + 4 * dg**2 * dh**2 - 4 * dg**2
    ) / (dg * dh)
    return 2.0 / (df * dg * dh) * math.sqrt(inner)


def bound_tri_full(
    dims: Sequence[int], f: int, g: int | None = None, h: int | None = None, variant: str = "proof"
) -> float:
    """Fully-separable bound for ``f|g|h``.

    ``"proof"`` uses ``dg^2 dh^2 + dg^2 (dh-1) + dh^2 (dg-1)``, the quantity the
    triangle-inequality argument actually bounds.  ``"statement"`` uses the
    smaller ``dg^2 dh^2 + dg + dh - 2``, which pure product states can exceed
    (``sqrt(12) > 3`` for qubits), so it is not a valid separability bound.
    """
    g, h = _fill(3, (f,), g, h)
    df, dg, dh = dims[f], dims[g], dims[h]
    if variant == "proof":
        second = dg**2 * dh**2 + dg**2 * (dh - 1) + dh**2 * (dg - 1)
    elif variant == "statement":
        second = dg**2 * dh**2 + dg + dh - 2
    else:
        raise InputError(f"bound variant must be one of {BOUND_VARIANTS}, got {variant!r}")
    return 2.0 / (df * dg * dh) * math.sqrt((df * df + 4 * df - 4) * second)


def bound_quad_1v3(dims: Sequence[int], f: int, h: int | None = None) -> float:
    spec = _spec_1v3(f, h)
    dg, dh, de = dims[spec.g], dims[spec.h], dims[spec.e]
    if not corr.pairwise_product_condition(dg, dh, de):
        raise CriterionInapplicable(
            f"f|ghe bound needs d_i d_j >= d_k on the three-party side, got {(dg, dh, de)}"
        )
    first = (4 * dh * dh + 4 * dh - 4) / (dh * dh) + corr.triple_norm_bound(dg, dh, de)
    return math.sqrt(first) * _local_factor(dims[spec.f])


def bound_quad_2v2(dims: Sequence[int], f: int, g: int, h: int | None = None) -> float:
    spec = _spec_2v2(f, g, h)
    df, dg, dh, de = (dims[p] for p in (spec.f, spec.g, spec.h, spec.e))
    rows = 1.0 + corr.pair_norm_bound(df, dg)
    cols = 4.0 + 4.0 * (dh - 1) / dh**2 + corr.pair_norm_bound(dh, de)
    return math.sqrt(rows) * math.sqrt(cols)


def bound_quad_tripart(dims: Sequence[int], f: int, g: int, h: int, e: int | None = None) -> float:
    (e,) = _others(4, f, g, h)
    df, dg, dh, de = dims[f], dims[g], dims[h], dims[e]
    cols = 1.0 + 4.0 * (dh - 1) / dh**2 + corr.pair_norm_bound(dh, de)
    return _local_factor(df) * math.sqrt(cols) * math.sqrt(4.0 * (dg - 1) / dg**2)


def bound(dims: Sequence[int], spec: PartitionSpec, variant: str = "proof") -> float:
    """Closed-form separability bound for ``spec``."""
    if spec.kind == "tri-bipartition":
        return bound_tri_bipartition(dims, spec.f, spec.g, spec.h)
    if spec.kind == "tri-full":
        return bound_tri_full(dims, spec.f, spec.g, spec.h, variant)
    if spec.kind == "quad-1v3":
        return bound_quad_1v3(dims, spec.f, spec.h)
    if spec.kind == "quad-2v2":
        return bound_quad_2v2(dims, spec.f, spec.g, spec.h)
    return bound_quad_tripart(dims, spec.f, spec.g, spec.h)


# --- records ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionRecord:
    partition: str
    kind: str
    theorem: str
    roles: dict
    trace_norm: float | None
    bound: float | None
    bound_variant: str | None
    margin: float | None
    detected: bool
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate(data: CorrelationData, spec: PartitionSpec, variant: str = "proof") -> PartitionRecord:
    """Trace norm, bound and verdict for one partition.

    An inapplicable bound is reported in ``error`` with ``detected=False``.
    """
    s = s_matrix(data, spec)
    norm = trace_norm(s.matrix)
    roles = {k: v + 1 for k, v in spec.roles().items()}
    used_variant = variant if spec.kind == "tri-full" else None
    try:
        b = bound(data.dims, spec, variant)
    except CriterionInapplicable as exc:
        return PartitionRecord(spec.label, spec.kind, spec.theorem, roles, norm, None, used_variant, None, False, str(exc))
    margin = norm - b
    return PartitionRecord(spec.label, spec.kind, spec.theorem, roles, norm, b, used_variant, margin, margin > DETECTION_TOL)


def permutation_deviation(data: CorrelationData) -> float:
    """Largest tensor change under any transposition of two parties.

    Infinite when party dimensions differ (the state cannot be invariant).
    """
    dims = data.dims
    if len(set(dims)) > 1:
        return math.inf
    worst = 0.0
    n = len(dims)
    for i, j in itertools.combinations(range(n), 2):
        swap = {i: j, j: i}
        for subset in corr.subsets(n):
            image = tuple(sorted(swap.get(p, p) for p in subset))
            t = data.tensor(subset)
            # axis a of T^image corresponds to party image[a] = swap(subset[k])
            perm = [image.index(swap.get(p, p)) for p in subset]
            moved = data.tensor(image).transpose(perm)
            worst = max(worst, float(np.max(np.abs(moved - t))))
    return worst


@dataclass(frozen=True)
class GMEAggregate:
    """Mean trace norm over the aggregated partitions and its two thresholds.

    ``detected`` compares ``score`` with ``max_bound`` (valid for every
    state); ``corollary_detected`` compares with ``mean_bound``, which is only
    established for permutation-invariant states (``corollary_applicable``).
    """

    name: str
    score: float | None
    max_bound: float | None
    mean_bound: float | None
    detected: bool
    corollary_detected: bool
    corollary_applicable: bool
    permutation_deviation: float
    terms: tuple[str, ...] = field(default=())
    error: str | None = None

    @property
    def margin(self) -> float | None:
        return None if self.score is None else self.score - self.max_bound

    @property
    def corollary_margin(self) -> float | None:
        return None if self.score is None else self.score - self.mean_bound

    def to_dict(self) -> dict:
        out = asdict(self)
        out["terms"] = list(self.terms)
        out["margin"] = self.margin
        out["corollary_margin"] = self.corollary_margin
        if math.isinf(self.permutation_deviation):
            out["permutation_deviation"] = None
        return out


def _aggregate(name: str, data: CorrelationData, specs: list[PartitionSpec]) -> GMEAggregate:
    norms = [trace_norm(s_matrix(data, s).matrix) for s in specs]
    bounds = [bound(data.dims, s) for s in specs]
    score = sum(norms) / len(specs)
    max_bound = max(bounds)
    mean_bound = sum(bounds) / len(bounds)
    deviation = permutation_deviation(data)
    return GMEAggregate(
        name=name,
        score=score,
        max_bound=max_bound,
        mean_bound=mean_bound,
        detected=score - max_bound > DETECTION_TOL,
        corollary_detected=score - mean_bound > DETECTION_TOL,
        corollary_applicable=deviation <= PERMUTATION_TOL,
        permutation_deviation=deviation,
        terms=tuple(s.label for s in specs),
    )


def gme3(data: CorrelationData) -> GMEAggregate:
    """Tripartite GME score ``M1(rho)`` with thresholds ``M1`` (max) and ``J1`` (mean).

    ``M1(rho)`` is the mean of the three ``f|gh`` trace norms with canonical
    roles; the thresholds are the max and the mean of the matching bounds.
    """
    if data.n_parties != 3:
        raise InputError("gme3 needs a tripartite state")
    return _aggregate("gme3", data, partitions("tri-bipartition", canonical_only=True))


def gme4(data: CorrelationData) -> GMEAggregate:
    """Four-partite GME score ``M2(rho)`` with thresholds ``M2`` (max) and ``J2`` (mean).

    Sixteen terms: the four ``f|ghe`` cuts with canonical ``h`` and the six
    ``fg|he`` cuts, each with both choices of ``h``.  Raises
    :class:`CriterionInapplicable` if any ``f|ghe`` bound is not established.
    """
    if data.n_parties != 4:
        raise InputError("gme4 needs a four-partite state")
    specs = partitions("quad-1v3", canonical_only=True) + partitions("quad-2v2")
    return _aggregate("gme4", data, specs)


def reference_curves(x: float) -> dict[str, float]:
    """Comparison curves quoted from other criteria, for plots and tables only.

    ``f2`` accompanies the noisy GHZ3 family, ``f6``/``f7`` the noisy GHZ4 family.
    """
    return {
        "f2": -3.0 * x + 4.0 - 2.0 * math.sqrt(3.0),
        "f6": 9.0 * x * x - 4.0,
        "f7": 9.0 * x * x - 3.0,
    }


# --- full report -----------------------------------------------------------------------


@dataclass(frozen=True)
class CriterionReport:
    dims: tuple[int, ...]
    phase: str
    bound_variant: str
    records: tuple[PartitionRecord, ...]
    aggregates: tuple[GMEAggregate, ...]

    @property
    def detections(self) -> list[PartitionRecord]:
        return [r for r in self.records if r.detected]

    def by_kind(self, kind: str) -> list[PartitionRecord]:
        return [r for r in self.records if r.kind == kind]

    def record(self, label: str) -> PartitionRecord:
        for r in self.records:
            if r.partition == label:
                return r
        raise KeyError(label)

    def aggregate(self, name: str) -> GMEAggregate:
        for a in self.aggregates:
            if a.name == name:
                return a
        raise KeyError(name)

    def any_detection(self) -> bool:
        return bool(self.detections) or any(a.detected for a in self.aggregates)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "phase": self.phase,
            "bound_variant": self.bound_variant,
            "records": [r.to_dict() for r in self.records],
            "aggregates": [a.to_dict() for a in self.aggregates],
        }


def _failed_aggregate(name: str, exc: Exception) -> GMEAggregate:
    return GMEAggregate(name, None, None, None, False, False, False, math.inf, (), str(exc))


def evaluate_data(data: CorrelationData, bound_variant: str = "proof") -> CriterionReport:
    """Evaluate every criterion (all role variants) that applies to the arity of ``data``."""
    if bound_variant not in BOUND_VARIANTS:
        raise InputError(f"bound variant must be one of {BOUND_VARIANTS}, got {bound_variant!r}")
    n = data.n_parties
    if n == 3:
        kinds, agg = ("tri-bipartition", "tri-full"), gme3
    elif n == 4:
        kinds, agg = ("quad-1v3", "quad-2v2", "quad-tripartition"), gme4
    else:
        raise InputError(f"criteria apply to 3 or 4 parties, state has {n}")
    records = tuple(evaluate(data, spec, bound_variant) for kind in kinds for spec in partitions(kind))
    try:
        aggregates = (agg(data),)
    except CriterionInapplicable as exc:
        aggregates = (_failed_aggregate(agg.__name__, exc),)
    return CriterionReport(data.dims, data.phase, bound_variant, records, aggregates)


def evaluate_all(rho: DensityMatrix, phase: str = "plus", bound_variant: str = "proof") -> CriterionReport:
    """Validate ``rho``, extract its tensors and evaluate every criterion."""
    rho.checked()
    return evaluate_data(corr.extract(rho, phase), bound_variant)
