"""Independent cross-checks for the main pipeline.

These use the slow, obvious algorithms on purpose: full ``D x D`` operator
products for correlation tensors, a Hermitian block embedding for singular
values, and an explicit partial transpose for the PPT comparator.  Agreement
with the fast paths is then evidence rather than tautology.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import correlations as corr
from .errors import InputError
from .hw_basis import basis_set
from .states import DensityMatrix, kron

__all__ = [
    "bipartitions",
    "extract_bruteforce",
    "partial_transpose",
    "ppt_min_eigenvalue",
    "ppt_report",
    "trace_norm_oracle",
]

MAX_BRUTEFORCE_SIZE = 81


def _subset(parties: Iterable[int], n: int) -> tuple[int, ...]:
    subset = tuple(sorted(set(int(p) for p in parties)))
    if not subset or len(subset) == n or any(p < 0 or p >= n for p in subset):
        raise InputError(f"{subset} is not a nonempty proper subset of {n} parties")
    return subset


def partial_transpose(rho: DensityMatrix, parties: Iterable[int]) -> np.ndarray:
    """Transpose the ket and bra indices of the given parties."""
    n = rho.n_parties
    subset = _subset(parties, n)
    dims = rho.dims
    axes = list(range(2 * n))
    for p in subset:
        axes[p], axes[n + p] = axes[n + p], axes[p]
    return rho.matrix.reshape(dims + dims).transpose(axes).reshape(rho.size, rho.size)


def ppt_min_eigenvalue(rho: DensityMatrix, parties: Iterable[int]) -> float:
    """Smallest eigenvalue of the partial transpose on ``parties``.

    Negative means the state is entangled across the cut ``parties | rest``.
    """
    pt = partial_transpose(rho, parties)
    pt = 0.5 * (pt + pt.conj().T)
    return float(np.linalg.eigvalsh(pt)[0])


def bipartitions(n: int) -> list[tuple[int, ...]]:
    """Each bipartition of ``n`` parties once, as its smaller side (ties: the side holding party 0)."""
    seen, out = set(), []
    for k in range(1, n // 2 + 1):
        for side in itertools.combinations(range(n), k):
            rest = tuple(p for p in range(n) if p not in side)
            key = frozenset((side, rest))
            if key not in seen:
                seen.add(key)
                out.append(side)
    return out


@dataclass(frozen=True)
class PPTRecord:
    cut: str
    min_eigenvalue: float
    npt: bool

    def to_dict(self) -> dict:
        return {"cut": self.cut, "min_eigenvalue": self.min_eigenvalue, "npt": self.npt}


def ppt_report(rho: DensityMatrix, tol: float = 1e-11) -> list[PPTRecord]:
    """PPT minimum eigenvalue for every bipartition; ``npt`` when below ``-tol``."""
    n = rho.n_parties
    out = []
    for side in bipartitions(n):
        rest = [p for p in range(n) if p not in side]
        label = "".join(str(p + 1) for p in side) + "|" + "".join(str(p + 1) for p in rest)
        val = ppt_min_eigenvalue(rho, side)
        out.append(PPTRecord(label, val, val < -tol))
    return out


def trace_norm_oracle(mat: np.ndarray) -> float:
    """Trace norm from the spectrum of the Hermitian embedding ``[[0, M], [M^dagger, 0]]``.

    The embedding has eigenvalues ``+-sigma_i`` plus zeros, so the positive
    part of the spectrum sums to the trace norm.
    """
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0.0
    r, c = mat.shape
    emb = np.zeros((r + c, r + c), dtype=np.result_type(mat, float))
    emb[:r, r:] = mat
    emb[r:, :r] = mat.conj().T
    emb = 0.5 * (emb + emb.conj().T)
    eig = np.linalg.eigvalsh(emb)
    return float(np.sum(eig[eig > 0]))


def extract_bruteforce(rho: DensityMatrix, phase: str = "plus") -> corr.CorrelationData:
    """Correlation tensors from explicit ``D x D`` Kronecker-product operators.

    Each coefficient is ``2^k / (d_f1 ... d_fk) * Tr[rho (Q (x) I (x) ...)]``
    with the full operator materialized.
    """
    dims = rho.dims
    n = len(dims)
    if rho.size > MAX_BRUTEFORCE_SIZE:
        raise InputError(f"brute-force extraction limited to D <= {MAX_BRUTEFORCE_SIZE}, got {rho.size}")
    bases = [basis_set(d, phase).observables for d in dims]
    tensors = {}
    residue = 0.0
    for subset in corr.subsets(n):
        shape = tuple(dims[p] ** 2 - 1 for p in subset)
        scale = 2 ** len(subset) / math.prod(dims[p] for p in subset)
        t = np.zeros(shape)
        for labels in itertools.product(*(range(s) for s in shape)):
            ops = {p: bases[p][a] for p, a in zip(subset, labels)}
            value = scale * expectation(rho, ops)
            residue = max(residue, abs(value.imag))
            t[labels] = value.real
        tensors[subset] = t
    return corr.CorrelationData(dims, tensors, phase, residue)


def expectation(rho: DensityMatrix, ops: dict[int, np.ndarray]) -> complex:
    """``Tr[rho (x)_p A_p]`` with identities on parties missing from ``ops``."""
    factors = [ops.get(p, np.eye(d)) for p, d in enumerate(rho.dims)]
    return complex(np.trace(rho.matrix @ kron(*factors)))
