r"""Heisenberg-Weyl displacement operators and the Hermitian HW observable basis.

For a qudit of dimension ``d`` the displacement operators are

.. math::
    D(l, m) = \sum_k \omega^{kl} |k\rangle\langle k+m \bmod d|,
    \qquad \omega = e^{2\pi i/d},

The observables are built from a rephased displacement
``W(l, m) = exp(i pi s / d) D(l, m)`` with ``s = l m mod d``:

.. math::
    Q(l, m) = X W(l, m) + X^* W(l, m)^\dagger,

with ``X = (1 + i)/2`` (phase ``"plus"``) or ``X = (1 - i)/2`` (phase
``"minus"``).  With the bare ``D(l, m)`` the pair ``(l, m), (-l, -m)`` has
overlap ``Tr[Q(l,m) Q(-l,-m)] = -+d sin(2 pi l m / d)``, which is nonzero for
``d >= 3``.  The extra phase makes ``Tr[W(l,m) W(-l,-m)]`` real, which
restores ``Tr[Q(l,m) Q(l',m')] = d delta_ll' delta_mm'``.  Labels with
``2 l m = d (mod d)`` are already fine and keep ``s = 0``, so for ``d = 2``
the construction is the bare one: ``Q(0,1) = sigma_x``, ``Q(1,0) = sigma_z``,
``Q(1,1) = -+ sigma_y``.

Labels are ordered lexicographically, ``l`` major and ``m`` minor, with the
identity label ``(0, 0)`` omitted.  Every other module inherits this order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

__all__ = [
    "PHASES",
    "HWBasis",
    "basis_set",
    "hw_displacement",
    "hw_observable",
    "labels",
    "weyl_displacement",
]

PHASES = ("plus", "minus")


def _check_dim(d: int) -> int:
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise InputError(f"dimension must be an integer >= 2, got {d!r}")
    return int(d)


def _check_index(d: int, l: int, m: int) -> None:
    if not (0 <= l < d and 0 <= m < d):
        raise InputError(f"HW indices (l={l}, m={m}) out of range for d={d}")


def _phase_coefficient(phase: str) -> complex:
    if phase == "plus":
        return complex(0.5, 0.5)
    if phase == "minus":
        return complex(0.5, -0.5)
    raise InputError(f"phase must be one of {PHASES}, got {phase!r}")


def hw_displacement(d: int, l: int, m: int) -> np.ndarray:
    """Return the ``d x d`` displacement operator ``D(l, m)``.

    Phases are evaluated as explicit ``cos``/``sin`` of ``2 pi k l / d`` rather
    than powers of a root of unity, so the phase error does not accumulate
    with ``k``.

    >>> hw_displacement(2, 0, 1).real
    array([[0., 1.],
           [1., 0.]])
    """
    d = _check_dim(d)
    _check_index(d, l, m)
    k = np.arange(d)
    angle = 2.0 * np.pi * ((k * l) % d) / d
    out = np.zeros((d, d), dtype=complex)
    out[k, (k + m) % d] = np.cos(angle) + 1j * np.sin(angle)
    return out


def _weyl_shift(d: int, l: int, m: int) -> int:
    """Exponent ``s`` in ``W(l, m) = exp(i pi s / d) D(l, m)``.

    ``s = l m mod d``, except ``s = 0`` when ``2 l m = d (mod d)``: there the
    bare ``D(l, m)`` already has a real overlap with its partner and keeping
    it preserves the phase-sign dependence (``-+ sigma_y`` at ``d = 2``).
    """
    r = (l * m) % d
    return 0 if 2 * r == d else r


def weyl_displacement(d: int, l: int, m: int) -> np.ndarray:
    """``exp(i pi s / d) D(l, m)`` with ``s`` from :func:`_weyl_shift`, phases reduced modulo ``2 pi``."""
    d = _check_dim(d)
    _check_index(d, l, m)
    k = np.arange(d)
    angle = np.pi * ((2 * k * l + _weyl_shift(d, l, m)) % (2 * d)) / d
    out = np.zeros((d, d), dtype=complex)
    out[k, (k + m) % d] = np.cos(angle) + 1j * np.sin(angle)
    return out


def hw_observable(d: int, l: int, m: int, phase: str = "plus") -> np.ndarray:
    """Return the Hermitian observable ``Q(l, m)`` for the chosen phase sign."""
    chi = _phase_coefficient(phase)
    disp = weyl_displacement(d, l, m)
    return chi * disp + chi.conjugate() * disp.conj().T


def labels(d: int) -> list[tuple[int, int]]:
    """Canonical ``(l, m)`` labels, ``l`` major, without ``(0, 0)``."""
    d = _check_dim(d)
    return [(l, m) for l in range(d) for m in range(d) if (l, m) != (0, 0)]


@dataclass(frozen=True)
class HWBasis:
    """The ``d**2 - 1`` non-identity HW observables of one qudit.

    ``observables`` has shape ``(d**2 - 1, d, d)`` and is ordered like
    ``labels``.  The array is marked read-only.
    """

    d: int
    labels: tuple[tuple[int, int], ...]
    observables: np.ndarray
    phase: str = "plus"

    def __len__(self) -> int:
        return len(self.labels)

    def with_identity(self) -> np.ndarray:
        """Stack ``I`` in front of the observables: shape ``(d**2, d, d)``."""
        eye = np.eye(self.d, dtype=complex)[None]
        return np.concatenate([eye, self.observables])

    def gram(self) -> np.ndarray:
        """Matrix of ``Tr[Q_a Q_b]``; equals ``d * I`` for a valid basis."""
        return np.einsum("aij,bji->ab", self.observables, self.observables)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "phase": self.phase,
            "labels": [list(lab) for lab in self.labels],
            "observables": [
                [[[float(z.real), float(z.imag)] for z in row] for row in q]
                for q in self.observables
            ],
        }


def basis_set(d: int, phase: str = "plus") -> HWBasis:
    """Build the full HW observable basis for dimension ``d``."""
    d = _check_dim(d)
    _phase_coefficient(phase)
    labs = tuple(labels(d))
    obs = np.stack([hw_observable(d, l, m, phase) for l, m in labs])
    obs.setflags(write=False)
    return HWBasis(d=d, labels=labs, observables=obs, phase=phase)
