"""Multipartite density matrices, the noisy GHZ families and random test states.

Parties are indexed from 0.  A state on parties with dimensions
``(d_0, ..., d_{n-1})`` is a ``D x D`` matrix with ``D = prod(dims)``, where the
Kronecker order puts party 0 most significant.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "HERMITIAN_TOL",
    "PSD_TOL",
    "TRACE_TOL",
    "DensityMatrix",
    "StateFamily",
    "ValidationReport",
    "FAMILIES",
    "family",
    "ghz",
    "kron",
    "load_state",
    "maximally_mixed",
    "partial_trace",
    "permute_parties",
    "purity",
    "random_mixed",
    "random_product_mixture",
    "random_pure",
    "save_state",
    "state_from_dict",
    "state_to_dict",
    "validate",
]

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
# Mixtures of exact states accumulate rounding around 1e-13; leave headroom.
PSD_TOL = 1e-9

MAX_PARTIES = 4


@dataclass(frozen=True)
class DensityMatrix:
    """A square complex matrix together with its per-party dimensions.

    Construction only checks shapes.  Use :func:`validate` (or
    :meth:`checked`) to test Hermiticity, trace and positivity.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not 1 <= len(dims) <= MAX_PARTIES:
            raise InputError(f"expected 1 to {MAX_PARTIES} parties, got {len(dims)}")
        if any(d < 2 for d in dims):
            raise InputError(f"party dimensions must be >= 2, got {dims}")
        mat = np.array(self.matrix, dtype=complex)
        size = math.prod(dims)
        if mat.shape != (size, size):
            raise InputError(f"matrix shape {mat.shape} does not match dims {dims} (expected {size}x{size})")
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def checked(self) -> "DensityMatrix":
        """Return ``self`` if it is a valid state, else raise :class:`InputError`."""
        report = validate(self)
        if not report.ok:
            raise InputError(f"invalid density matrix: {report.summary()}")
        return self

    def hermitian_part(self) -> np.ndarray:
        return 0.5 * (self.matrix + self.matrix.conj().T)


@dataclass(frozen=True)
class ValidationReport:
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def ok(self) -> bool:
        return (
            self.hermiticity_defect <= HERMITIAN_TOL
            and self.trace_defect <= TRACE_TOL
            and self.min_eigenvalue >= -PSD_TOL
        )

    def summary(self) -> str:
        return (
            f"hermiticity defect {self.hermiticity_defect:.3g}, "
            f"trace defect {self.trace_defect:.3g}, "
            f"min eigenvalue {self.min_eigenvalue:.3g}"
        )


def validate(rho: DensityMatrix) -> ValidationReport:
    """Measure how far ``rho`` is from being a density matrix."""
    mat = rho.matrix
    herm = float(np.max(np.abs(mat - mat.conj().T)))
    trace = float(abs(np.trace(mat) - 1.0))
    min_eig = float(np.linalg.eigvalsh(rho.hermitian_part())[0])
    return ValidationReport(herm, trace, min_eig)


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of the factors, left factor most significant."""
    if not factors:
        raise InputError("kron needs at least one factor")
    return reduce(np.kron, factors)


def _normalize_subset(parties: Iterable[int], n: int) -> tuple[int, ...]:
    subset = tuple(sorted(set(int(p) for p in parties)))
    if any(p < 0 or p >= n for p in subset):
        raise InputError(f"party indices {subset} out of range for {n} parties")
    return subset


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the parties in ``keep`` (returned in ascending order)."""
    n = rho.n_parties
    keep = _normalize_subset(keep, n)
    if not keep or len(keep) == n:
        raise InputError("keep must be a nonempty proper subset of the parties")
    dims = rho.dims
    tensor = rho.matrix.reshape(dims + dims)
    # einsum with repeated ket/bra label traces the party out
    ket = list(range(n))
    bra = [n + p if p in keep else p for p in range(n)]
    out = keep + tuple(n + p for p in keep)
    reduced = np.einsum(tensor, ket + bra, list(out))
    size = math.prod(dims[p] for p in keep)
    return DensityMatrix(reduced.reshape(size, size), tuple(dims[p] for p in keep))


def permute_parties(rho: DensityMatrix, order: Sequence[int]) -> DensityMatrix:
    """Relabel parties: new party ``i`` is old party ``order[i]``."""
    n = rho.n_parties
    if sorted(order) != list(range(n)):
        raise InputError(f"{order} is not a permutation of {n} parties")
    dims = rho.dims
    tensor = rho.matrix.reshape(dims + dims)
    axes = list(order) + [n + p for p in order]
    new_dims = tuple(dims[p] for p in order)
    size = rho.size
    return DensityMatrix(tensor.transpose(axes).reshape(size, size), new_dims)


def purity(rho: DensityMatrix) -> float:
    """``Tr rho^2``."""
    mat = rho.matrix
    return float(np.real(np.einsum("ij,ji->", mat, mat)))


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    size = math.prod(dims)
    return DensityMatrix(np.eye(size) / size, tuple(dims))


def _projector(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj())


def ghz(n: int, d: int = 2) -> DensityMatrix:
    """Projector onto ``(1/sqrt(d)) sum_k |k...k>`` for ``n`` in {3, 4} parties."""
    if n not in (3, 4):
        raise InputError(f"GHZ states are provided for 3 or 4 parties, got {n}")
    if d < 2:
        raise InputError(f"local dimension must be >= 2, got {d}")
    size = d**n
    vec = np.zeros(size, dtype=complex)
    # |k...k> sits at index k * (d^(n-1) + ... + 1)
    stride = sum(d**j for j in range(n))
    vec[np.arange(d) * stride] = 1.0 / math.sqrt(d)
    return DensityMatrix(_projector(vec), (d,) * n)


@dataclass(frozen=True)
class StateFamily:
    """A one-parameter family ``x -> rho(x)`` on ``x`` in ``[0, 1]``.

    ``mixing`` records which term ``x`` multiplies: ``"noise-weight"`` means
    ``x`` weights the maximally mixed state, ``"state-weight"`` means ``x``
    weights the pure target.  The two GHZ families use opposite conventions.
    """

    name: str
    dims: tuple[int, ...]
    mixing: str
    generator: Callable[[float], DensityMatrix]
    parameter: str = "x"

    def __call__(self, x: float) -> DensityMatrix:
        x = float(x)
        if not 0.0 <= x <= 1.0 or math.isnan(x):
            raise InputError(f"{self.name}: parameter must lie in [0, 1], got {x}")
        return self.generator(x)


def _white_noise(target: DensityMatrix, noise_weight: float) -> DensityMatrix:
    size = target.size
    mat = noise_weight * np.eye(size) / size + (1.0 - noise_weight) * target.matrix
    return DensityMatrix(mat, target.dims)


_GHZ3 = ghz(3, 2)
_GHZ4 = ghz(4, 2)

FAMILIES: dict[str, StateFamily] = {
    # rho = x I/8 + (1 - x) |GHZ><GHZ|
    "ghz3-white-noise": StateFamily(
        "ghz3-white-noise", (2, 2, 2), "noise-weight", lambda x: _white_noise(_GHZ3, x)
    ),
    # rho = x |GHZ><GHZ| + (1 - x) I/16
    "ghz4-white-noise": StateFamily(
        "ghz4-white-noise", (2, 2, 2, 2), "state-weight", lambda x: _white_noise(_GHZ4, 1.0 - x)
    ),
}


def family(name: str) -> StateFamily:
    try:
        return FAMILIES[name]
    except KeyError:
        raise InputError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None


def _random_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def random_pure(dims: Sequence[int], seed=None) -> DensityMatrix:
    """Projector onto a Haar-random vector.

    Components are i.i.d. complex Gaussians from ``numpy.random.default_rng(seed)``
    (real parts drawn before imaginary parts), then normalized.
    """
    rng = np.random.default_rng(seed)
    dims = tuple(dims)
    return DensityMatrix(_projector(_random_vector(math.prod(dims), rng)), dims)


def random_product_mixture(dims: Sequence[int], terms: int = 4, seed=None) -> DensityMatrix:
    """Fully separable state ``sum_l p_l rho_l^(0) (x) ... (x) rho_l^(n-1)``.

    Each local factor is a Haar-random pure state and the weights ``p`` are
    drawn from a flat Dirichlet distribution.
    """
    if terms < 1:
        raise InputError("terms must be >= 1")
    rng = np.random.default_rng(seed)
    dims = tuple(dims)
    weights = rng.dirichlet(np.ones(terms))
    size = math.prod(dims)
    mat = np.zeros((size, size), dtype=complex)
    for p in weights:
        mat += p * kron(*(_projector(_random_vector(d, rng)) for d in dims))
    return DensityMatrix(mat, dims)


def random_mixed(dims: Sequence[int], rank: int | None = None, seed=None) -> DensityMatrix:
    """Random mixed state ``G G^dagger / Tr`` from a complex Ginibre ``G`` (``D x rank``)."""
    rng = np.random.default_rng(seed)
    dims = tuple(dims)
    size = math.prod(dims)
    rank = size if rank is None else rank
    g = rng.standard_normal((size, rank)) + 1j * rng.standard_normal((size, rank))
    mat = g @ g.conj().T
    return DensityMatrix(mat / np.trace(mat).real, dims)


# --- JSON file format -------------------------------------------------------
# {"dims": [2, 2, 2], "matrix": [[[re, im], ...], ...]}, row-major.


def state_to_dict(rho: DensityMatrix) -> dict:
    return {
        "dims": list(rho.dims),
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in rho.matrix],
    }


def state_from_dict(obj: dict) -> DensityMatrix:
    """Parse the JSON state format; the result must pass :func:`validate`."""
    if not isinstance(obj, dict) or "dims" not in obj or "matrix" not in obj:
        raise InputError('state object needs "dims" and "matrix" keys')
    try:
        dims = tuple(int(d) for d in obj["dims"])
        entries = np.asarray(obj["matrix"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed state: {exc}") from None
    if entries.ndim != 3 or entries.shape[2] != 2:
        raise InputError("matrix must be an array of rows of [re, im] pairs")
    rho = DensityMatrix(entries[..., 0] + 1j * entries[..., 1], dims)
    return rho.checked()


def load_state(path: str | Path) -> DensityMatrix:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return state_from_dict(obj)


def save_state(rho: DensityMatrix, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(state_to_dict(rho), fh)
