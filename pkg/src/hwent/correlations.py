"""HW correlation tensors of 1- to 4-partite states.

For a nonempty party subset ``S`` the correlation tensor has entries

    t^S[a_f for f in S] = 2^|S| / prod_{f in S} d_f * Tr[rho Q_{a_f1} (x) ... (x) Q_{a_fk}]

with identities on the parties outside ``S``.  Tensors are stored as real
arrays with one axis per party of ``S`` (ascending), each axis running over
that party's ``d**2 - 1`` labels in canonical order.  Their C-order
flattening is the canonical vector: earlier party major.
"""

from __future__ import annotations

import itertools
import math
import string
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import InputError, NumericalError
from .hw_basis import basis_set
from .states import DensityMatrix

__all__ = [
    "CorrelationData",
    "extract",
    "from_full_expectations",
    "matricize",
    "norm_sq",
    "pair_norm_bound",
    "purity_identity",
    "reconstruct",
    "subsets",
    "triple_norm_bound",
]

IMAG_TOL = 1e-10


def subsets(n: int) -> list[tuple[int, ...]]:
    """Nonempty subsets of ``range(n)``, by size then lexicographically."""
    return [s for k in range(1, n + 1) for s in itertools.combinations(range(n), k)]


def subset_label(subset: Iterable[int]) -> str:
    """1-based display label, e.g. ``(0, 2) -> "13"``."""
    return "".join(str(p + 1) for p in sorted(subset))


def parse_subset_label(label: str) -> tuple[int, ...]:
    try:
        return tuple(sorted(int(ch) - 1 for ch in label))
    except ValueError:
        raise InputError(f"bad subset label {label!r}") from None


@dataclass(frozen=True)
class CorrelationData:
    """All correlation tensors ``T^(S)`` of one state.

    ``tensors`` maps each sorted party tuple to a real ndarray whose axes
    follow the parties of the subset in ascending order.
    """

    dims: tuple[int, ...]
    tensors: Mapping[tuple[int, ...], np.ndarray]
    phase: str = "plus"
    imag_residue: float = field(default=0.0, compare=False)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def tensor(self, subset: Iterable[int]) -> np.ndarray:
        key = tuple(sorted(set(subset)))
        try:
            return self.tensors[key]
        except KeyError:
            raise InputError(f"no correlation tensor for parties {key}") from None

    def vector(self, subset: Iterable[int]) -> np.ndarray:
        """Canonical flat vector of ``T^(S)``."""
        return self.tensor(subset).reshape(-1)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "phase": self.phase,
            "tensors": {subset_label(s): self.vector(s).tolist() for s in subsets(self.n_parties)},
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "CorrelationData":
        dims = tuple(int(d) for d in obj["dims"])
        tensors = {}
        for label, flat in obj["tensors"].items():
            key = parse_subset_label(label)
            shape = tuple(dims[p] ** 2 - 1 for p in key)
            tensors[key] = np.asarray(flat, dtype=float).reshape(shape)
        return cls(dims, tensors, obj.get("phase", "plus"))


def _full_basis(dims: tuple[int, ...], phase: str) -> list[np.ndarray]:
    return [basis_set(d, phase).with_identity() for d in dims]


def from_full_expectations(
    expectations: np.ndarray, dims: tuple[int, ...], phase: str, imag_residue: float = 0.0
) -> CorrelationData:
    """Build :class:`CorrelationData` from ``E[a_0, ..., a_{n-1}] = Tr[rho B_a0 (x) ...]``.

    ``B_0`` is the identity and ``B_a`` (``a >= 1``) are the HW observables,
    so index 0 along an axis means "party not in the subset".
    """
    n = len(dims)
    tensors = {}
    for subset in subsets(n):
        index = tuple(slice(1, None) if p in subset else 0 for p in range(n))
        scale = 2 ** len(subset) / math.prod(dims[p] for p in subset)
        block = scale * np.real(expectations[index])
        block.setflags(write=False)
        tensors[subset] = block
    return CorrelationData(tuple(dims), tensors, phase, imag_residue)


def extract(rho: DensityMatrix, phase: str = "plus") -> CorrelationData:
    """Compute every correlation tensor of ``rho``.

    All expectation values ``Tr[rho B_a0 (x) ... (x) B_a(n-1)]`` are obtained
    in one tensor contraction of ``rho`` against the per-party operator
    stacks, without forming any ``D x D`` operator product.
    """
    dims = rho.dims
    n = len(dims)
    letters = iter(string.ascii_letters)
    ket = [next(letters) for _ in range(n)]
    bra = [next(letters) for _ in range(n)]
    out = [next(letters) for _ in range(n)]
    # Tr[rho B] = sum_{ij} rho[i, j] B[j, i]
    terms = ["".join(ket + bra)] + [out[p] + bra[p] + ket[p] for p in range(n)]
    spec = ",".join(terms) + "->" + "".join(out)
    tensor = rho.hermitian_part().reshape(dims + dims)
    full = np.einsum(spec, tensor, *_full_basis(dims, phase), optimize="greedy")
    residue = float(np.max(np.abs(full.imag))) if full.size else 0.0
    if residue > IMAG_TOL * max(1.0, float(np.max(np.abs(full.real)))):
        raise NumericalError(f"correlation coefficients have imaginary residue {residue:.3g}")
    return from_full_expectations(full, dims, phase, residue)


def norm_sq(data: CorrelationData, subset: Iterable[int]) -> float:
    """Squared Euclidean norm ``||T^(S)||^2``."""
    subset = tuple(subset)
    if not subset:
        raise InputError("subset must be nonempty")
    t = data.tensor(subset)
    return float(np.sum(t * t))


def matricize(data: CorrelationData, rows: Iterable[int], cols: Iterable[int]) -> np.ndarray:
    """Reshape ``T^(rows U cols)`` into a matrix.

    Row index runs over the labels of ``rows`` (ascending parties, earlier
    party major), column index over those of ``cols``.  For a product state
    across the cut this is the outer product of the two canonical vectors.
    """
    rows = tuple(sorted(set(rows)))
    cols = tuple(sorted(set(cols)))
    if not rows or not cols:
        raise InputError("row and column party sets must be nonempty")
    if set(rows) & set(cols):
        raise InputError(f"row parties {rows} and column parties {cols} overlap")
    union = tuple(sorted(rows + cols))
    t = data.tensor(union)
    perm = [union.index(p) for p in rows + cols]
    nrow = math.prod(t.shape[union.index(p)] for p in rows)
    return t.transpose(perm).reshape(nrow, -1)


def reconstruct(data: CorrelationData) -> DensityMatrix:
    """Evaluate the HW expansion of the state from its correlation tensors.

    ``rho = I/D + sum_S prod_{f in S} d_f / (2^|S| D) sum_a t^S_a Q_a``.
    """
    dims = data.dims
    n = len(dims)
    size = math.prod(dims)
    coeff = np.zeros(tuple(d * d for d in dims))
    coeff[(0,) * n] = 1.0
    for subset, t in data.tensors.items():
        index = tuple(slice(1, None) if p in subset else 0 for p in range(n))
        coeff[index] = t * (math.prod(dims[p] for p in subset) / 2 ** len(subset))
    coeff /= size
    letters = iter(string.ascii_letters)
    idx = [next(letters) for _ in range(n)]
    ket = [next(letters) for _ in range(n)]
    bra = [next(letters) for _ in range(n)]
    terms = ["".join(idx)] + [idx[p] + ket[p] + bra[p] for p in range(n)]
    spec = ",".join(terms) + "->" + "".join(ket + bra)
    mat = np.einsum(spec, coeff.astype(complex), *_full_basis(dims, data.phase), optimize="greedy")
    return DensityMatrix(mat.reshape(size, size), dims)


def purity_identity(data: CorrelationData) -> float:
    """``Tr rho^2`` evaluated from tensor norms.

    ``1/D + sum_S prod_{f in S} d_f^2 / (4^|S| D) ||T^(S)||^2``; for two
    parties this is ``1/(d1 d2) + d1/(4 d2)||T1||^2 + d2/(4 d1)||T2||^2 +
    d1 d2/16 ||T12||^2``.
    """
    if data.n_parties < 2:
        raise InputError("purity identity needs at least two parties")
    size = math.prod(data.dims)
    total = 1.0 / size
    for subset in subsets(data.n_parties):
        weight = math.prod(data.dims[p] ** 2 for p in subset) / (4 ** len(subset) * size)
        total += weight * norm_sq(data, subset)
    return total


def pair_norm_bound(d1: int, d2: int) -> float:
    """Upper bound on ``||T^(12)||^2`` for pure bipartite states."""
    return 16.0 * (d2 * d2 - 1) / (d1 * d2**3)


def triple_norm_bound(d1: int, d2: int, d3: int) -> float:
    """Upper bound on ``||T^(123)||^2`` for pure tripartite states.

    Established when ``d_i d_j >= d_k`` for every pair; symmetric in its
    arguments.
    """
    prod = d1 * d2 * d3
    pair_sq = (d1 * d2) ** 2 + (d1 * d3) ** 2 + (d2 * d3) ** 2
    return 64.0 * (prod * (prod + 2) - pair_sq) / prod**3


def pairwise_product_condition(d1: int, d2: int, d3: int) -> bool:
    """``d_i d_j >= d_k`` for all three choices of ``k``."""
    return d1 * d2 >= d3 and d1 * d3 >= d2 and d2 * d3 >= d1
