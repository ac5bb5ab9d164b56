"""Exact 2x2 complex transfer-matrix algebra for two-path optical fields.

Conventions used throughout the package:

* A two-path field is a length-2 complex vector ``(upper, lower)`` whose
  entries carry sqrt-intensity units; the canonical input is ``(E0, 0)``
  with ``I0 = |E0|**2 = 1``.
* A 50/50 beam splitter is ``(1/sqrt(2)) [[1, 1j], [1j, 1]]``.
* A phase shifter multiplies one arm by ``exp(1j*phase)`` and leaves the
  other untouched.
* Chains are written in physical order (first element hit by the light
  comes first); :func:`compose` therefore puts the first element rightmost
  in the matrix product.
* Global phase is never normalised away.  Matrix-level comparisons against
  closed forms are made either up to a global phase or at intensity level.

All constructors broadcast over array-valued phases and return stacks of
matrices with shape ``(..., 2, 2)``, which keeps dense parameter sweeps in
numpy instead of Python loops.
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

import numpy as np

__all__ = [
    "UNITARY_TOL",
    "Arm",
    "apply",
    "beam_splitter",
    "compose",
    "intensities",
    "is_unitary",
    "mzi",
    "phase_element",
]

# Single tolerance for "is this still unitary" checks.  Double precision
# keeps products of <= 20 elementary 2x2 unitaries well inside 1e-12.
UNITARY_TOL = 1e-12

_IDENTITY = np.eye(2, dtype=complex)


class Arm(Enum):
    """Which interferometer path a phase element acts on."""

    UPPER = "upper"
    LOWER = "lower"


def beam_splitter() -> np.ndarray:
    """Return the 50/50 beam-splitter matrix ``(1/sqrt(2)) [[1, i], [i, 1]]``."""
    return np.array([[1, 1j], [1j, 1]], dtype=complex) / np.sqrt(2.0)


def phase_element(arm: Arm, phase) -> np.ndarray:
    """Diagonal phase shifter: ``exp(i*phase)`` on ``arm``, 1 on the other.

    ``phase`` may be a scalar or an array; the result has shape
    ``phase.shape + (2, 2)``.  Non-finite phases are rejected.
    """
    phase = np.asarray(phase, dtype=float)
    if not np.all(np.isfinite(phase)):
        raise ValueError("phase must be finite")
    out = np.zeros(phase.shape + (2, 2), dtype=complex)
    factor = np.exp(1j * phase)
    if arm is Arm.UPPER:
        out[..., 0, 0] = factor
        out[..., 1, 1] = 1.0
    elif arm is Arm.LOWER:
        out[..., 0, 0] = 1.0
        out[..., 1, 1] = factor
    else:
        raise TypeError(f"arm must be an Arm, got {arm!r}")
    return out


def mzi(arm: Arm, phase) -> np.ndarray:
    """Mach-Zehnder block ``[BS] [phase] [BS]`` with the phase on ``arm``.

    For ``arm=Arm.LOWER`` this equals
    ``(1/2) [[1 - e, i(1 + e)], [i(1 + e), -(1 - e)]]`` with
    ``e = exp(1j*phase)``: phase 0 routes everything to the cross port,
    phase pi to the bar port.
    """
    bs = beam_splitter()
    return bs @ phase_element(arm, phase) @ bs


def compose(elements: Sequence[np.ndarray]) -> np.ndarray:
    """Multiply a chain of elements given in physical order.

    The first element acts on the field first, i.e. the result is
    ``elements[-1] @ ... @ elements[0]``.  Entries may be single matrices
    or broadcast-compatible stacks of shape ``(..., 2, 2)``.
    """
    if len(elements) == 0:
        raise ValueError("cannot compose an empty element chain")
    result = np.asarray(elements[0], dtype=complex)
    for element in elements[1:]:
        result = np.asarray(element, dtype=complex) @ result
    return result


def apply(matrix: np.ndarray, field) -> np.ndarray:
    """Propagate a two-path field through ``matrix`` (plain matrix-vector product)."""
    matrix = np.asarray(matrix, dtype=complex)
    field = np.asarray(field, dtype=complex)
    return np.einsum("...ij,...j->...i", matrix, field)


def intensities(field) -> tuple:
    """Return ``(|upper|**2, |lower|**2)`` of a two-path field."""
    field = np.asarray(field, dtype=complex)
    upper = np.abs(field[..., 0]) ** 2
    lower = np.abs(field[..., 1]) ** 2
    if upper.ndim == 0:
        return float(upper), float(lower)
    return upper, lower


def is_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    """True iff ``max |M^dag M - I| <= tol`` entrywise (stacks: all members)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    matrix = np.asarray(matrix, dtype=complex)
    gram = np.swapaxes(matrix.conj(), -1, -2) @ matrix
    return bool(np.max(np.abs(gram - _IDENTITY)) <= tol)
