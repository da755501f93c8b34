"""Orthonormal trigonometric basis on the interval [-1, 1].

The family is indexed from 1:

    phi_1(s) = 1/sqrt(2)
    phi_n(s) = sin((n/2) * pi * s)        for even n
    phi_n(s) = cos((n//2) * pi * s)       for odd n >= 3

Every member has unit L2 norm on [-1, 1] and pairwise zero inner
products (the bare constant 1 would have squared norm 2, hence the
1/sqrt(2) scaling of the first member).  Derivatives are bounded by
pi*n, and integrals of monomials against any member have closed forms
through an integration-by-parts recurrence; both facts are load-bearing
for the estimation error bounds and the covering-set argument used
elsewhere in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TRIGONOMETRIC = "trigonometric"

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class BasisSpec:
    """Orthonormal function family on [-1, 1].

    Only the trigonometric family is implemented; ``max_index_hint`` is
    advisory (callers may precompute tables up to it, nothing here does).
    """

    family: str = TRIGONOMETRIC
    max_index_hint: int = 32

    def __post_init__(self) -> None:
        if self.family != TRIGONOMETRIC:
            raise ValueError(f"unsupported basis family: {self.family!r}")
        if self.max_index_hint < 1:
            raise ValueError("max_index_hint must be a positive integer")


def _check_index(n: int) -> int:
    if n != int(n) or n < 1:
        raise ValueError(f"basis index must be a positive integer, got {n}")
    return int(n)


def _check_state(s):
    arr = np.asarray(s, dtype=float)
    if np.any(arr < -1.0) or np.any(arr > 1.0) or np.any(~np.isfinite(arr)):
        raise ValueError(f"state outside [-1, 1]: {s!r}")
    return arr


def eval_basis(basis: BasisSpec, n: int, s: float) -> float:
    """Evaluate the n-th basis function at s in [-1, 1]."""
    n = _check_index(n)
    arr = _check_state(s)
    if n == 1:
        out = np.full_like(arr, _INV_SQRT2)
    elif n % 2 == 0:
        out = np.sin((n // 2) * math.pi * arr)
    else:
        out = np.cos((n // 2) * math.pi * arr)
    return float(out) if np.isscalar(s) or arr.ndim == 0 else out


def eval_basis_deriv(basis: BasisSpec, n: int, s: float) -> float:
    """Evaluate d/ds of the n-th basis function at s.

    The result is bounded by pi*n in absolute value for every member of
    the trigonometric family.
    """
    n = _check_index(n)
    arr = _check_state(s)
    if n == 1:
        out = np.zeros_like(arr)
    elif n % 2 == 0:
        w = (n // 2) * math.pi
        out = w * np.cos(w * arr)
    else:
        w = (n // 2) * math.pi
        out = -w * np.sin(w * arr)
    return float(out) if np.isscalar(s) or arr.ndim == 0 else out


def eval_phi_vector(basis: BasisSpec, k: int, s: float) -> np.ndarray:
    """First k basis functions evaluated at a single state, as a vector."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return eval_phi_matrix(basis, k, [s])[0]


def eval_phi_matrix(basis: BasisSpec, k: int, s) -> np.ndarray:
    """Evaluate the first k basis functions on an array of states.

    Returns an array of shape (len(s), k) with entry [r, n-1] equal to
    the n-th basis function at s[r].
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    arr = _check_state(s).ravel()
    out = np.empty((arr.size, k))
    out[:, 0] = _INV_SQRT2
    for n in range(2, k + 1):
        w = (n // 2) * math.pi
        if n % 2 == 0:
            out[:, n - 1] = np.sin(w * arr)
        else:
            out[:, n - 1] = np.cos(w * arr)
    return out


def eval_phi_deriv_matrix(basis: BasisSpec, k: int, s) -> np.ndarray:
    """Derivatives of the first k basis functions on an array of states."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    arr = _check_state(s).ravel()
    out = np.empty((arr.size, k))
    out[:, 0] = 0.0
    for n in range(2, k + 1):
        w = (n // 2) * math.pi
        if n % 2 == 0:
            out[:, n - 1] = w * np.cos(w * arr)
        else:
            out[:, n - 1] = -w * np.sin(w * arr)
    return out


@lru_cache(maxsize=None)
def _sin_moment(m: int, p: int) -> float:
    # int_{-1}^{1} s^m sin(p*pi*s) ds for integer p >= 1, by parts in m.
    # sin(p*pi*(+-1)) = 0, cos(p*pi*(+-1)) = (-1)^p kill most boundary terms.
    if m == 0:
        return 0.0
    w = p * math.pi
    cos_w = -1.0 if p % 2 else 1.0
    boundary = cos_w * ((-1.0) ** m - 1.0) / w
    return boundary + (m / w) * _cos_moment(m - 1, p)


@lru_cache(maxsize=None)
def _cos_moment(m: int, p: int) -> float:
    if m == 0:
        return 0.0
    w = p * math.pi
    return -(m / w) * _sin_moment(m - 1, p)


def moment_integral(basis: BasisSpec, m: int, n: int) -> float:
    """Closed-form value of the integral of s^m times the n-th basis function.

    Exact up to floating-point rounding; O(m) via the integration-by-parts
    recurrence, memoised across calls.
    """
    if m != int(m) or m < 0:
        raise ValueError(f"monomial power must be a nonnegative integer, got {m}")
    n = _check_index(n)
    m = int(m)
    if n == 1:
        return 0.0 if m % 2 else (2.0 / (m + 1)) * _INV_SQRT2
    if n % 2 == 0:
        return _sin_moment(m, n // 2)
    return _cos_moment(m, n // 2)
