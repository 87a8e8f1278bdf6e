"""Lorentz-Minkowski space R^{n+1}_1 with signature (-, +, ..., +).

Vectors are plain 1-D float numpy arrays; index 0 is the time coordinate.
The ambient dimension is whatever length the arrays have (at least 3).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError

LIGHTLIKE_EPS = 1e-9


class CausalClass(enum.Enum):
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"
    TIMELIKE = "timelike"
    ZERO = "zero"


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a finite float vector of length >= 3 (or exactly ``dim``)."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise InputError(f"expected a 1-D vector, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise InputError(f"expected dimension {dim}, got {v.shape[0]}")
    if v.shape[0] < 3:
        raise InputError(f"ambient dimension must be >= 3, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise InputError("vector has non-finite entries")
    return v


def e0(dim: int) -> np.ndarray:
    v = np.zeros(dim)
    v[0] = 1.0
    return v


def metric(dim: int) -> np.ndarray:
    """Diagonal Gram matrix of the pseudo scalar product."""
    g = np.eye(dim)
    g[0, 0] = -1.0
    return g


def pseudo_product(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise InputError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return float(-x[0] * y[0] + np.dot(x[1:], y[1:]))


def lorentz_norm(x) -> float:
    return float(np.sqrt(abs(pseudo_product(x, x))))


def is_lightlike(x, eps: float = LIGHTLIKE_EPS) -> bool:
    x = np.asarray(x, dtype=float)
    scale = max(1.0, float(np.dot(x, x)))
    return abs(pseudo_product(x, x)) <= eps * scale


def causal_class(x, eps: float = LIGHTLIKE_EPS) -> CausalClass:
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        return CausalClass.ZERO
    x = x / np.max(np.abs(x))       # avoid under/overflow in the squares
    q = pseudo_product(x, x)
    # relative band so the answer is invariant under x -> lambda*x
    if abs(q) <= eps * float(np.dot(x, x)):
        return CausalClass.LIGHTLIKE
    return CausalClass.SPACELIKE if q > 0 else CausalClass.TIMELIKE


def det(rows) -> float:
    """Determinant by fraction-free (Bareiss) elimination with partial pivoting."""
    a = np.array(rows, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"determinant needs a square matrix, got {a.shape}")
    m = a.shape[0]
    if m == 0:
        return 1.0
    sign = 1.0
    prev = 1.0
    for k in range(m - 1):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0.0:
            return 0.0
        if p != k:
            a[[k, p]] = a[[p, k]]
            sign = -sign
        piv = a[k, k]
        a[k + 1:, k + 1:] = (piv * a[k + 1:, k + 1:]
                             - np.outer(a[k + 1:, k], a[k, k + 1:])) / prev
        a[k + 1:, k] = 0.0
        prev = piv
    return sign * float(a[m - 1, m - 1])


def wedge(*vectors) -> np.ndarray:
    """Lorentzian wedge of n vectors in R^{n+1}_1.

    Cofactor expansion of the determinant whose first row is
    (-e_0, e_1, ..., e_n) and whose remaining rows are the inputs, so that
    <x, x_1 ^ ... ^ x_n> = det(x, x_1, ..., x_n).
    """
    if len(vectors) == 1 and np.ndim(vectors[0]) == 2:
        vectors = tuple(vectors[0])
    if not vectors:
        raise InputError("wedge needs at least one vector")
    rows = np.array([as_vector(v) for v in vectors])
    dim = rows.shape[1]
    if rows.shape[0] != dim - 1:
        raise InputError(f"wedge in dimension {dim} needs {dim - 1} vectors, "
                         f"got {rows.shape[0]}")
    out = np.empty(dim)
    for j in range(dim):
        cof = (-1.0) ** j * det(np.delete(rows, j, axis=1))
        out[j] = -cof if j == 0 else cof
    return out


def project_to_lightcone_sphere(x, eps: float = LIGHTLIKE_EPS) -> np.ndarray:
    """Rescale a lightlike vector to the lightcone unit sphere (first coordinate 1)."""
    x = as_vector(x)
    if x[0] == 0.0:
        raise DomainError("cannot project onto the lightcone sphere: x_0 = 0")
    if not is_lightlike(x, eps):
        raise DomainError("cannot project onto the lightcone sphere: "
                          f"vector is not lightlike (<x,x> = {pseudo_product(x, x):.3g})")
    return x / x[0]


@dataclass(frozen=True)
class LightlikeHyperplane:
    """HP(v, c) = {x : <x, v> = c} for a lightlike pseudo normal v."""

    pseudo_normal: np.ndarray
    offset: float

    def __post_init__(self):
        v = as_vector(self.pseudo_normal)
        if not np.any(v):
            raise DomainError("pseudo normal must be nonzero")
        if not is_lightlike(v):
            raise DomainError("pseudo normal of a lightlike hyperplane must be lightlike")
        object.__setattr__(self, "pseudo_normal", v)
        object.__setattr__(self, "offset", float(self.offset))

    def residual(self, x) -> float:
        return hyperplane_residual(self, x)


def hyperplane_residual(h: LightlikeHyperplane, x) -> float:
    return pseudo_product(x, h.pseudo_normal) - h.offset
