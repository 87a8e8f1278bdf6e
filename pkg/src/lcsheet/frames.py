"""Timelike normal n^T and pseudo-orthonormal spacelike normal frames."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, InputError
from .minkowski import metric, pseudo_product

PIVOT_TOL = 1e-8


@dataclass(frozen=True)
class NormalFrame:
    """n^T together with spacelike nS[0..k-2] spanning the normal space of W."""

    nT: np.ndarray
    nS: np.ndarray      # (k-1, n+1)

    @property
    def k(self):
        return self.nS.shape[0] + 1

    def residuals(self, pe=None) -> dict:
        """Largest violation of each frame invariant (for assertions)."""
        G = metric(self.nT.shape[0])
        S = self.nS
        out = {
            "nT_unit": abs(pseudo_product(self.nT, self.nT) + 1.0),
            "nS_orthonormal": float(np.max(np.abs(S @ G @ S.T - np.eye(len(S))))),
            "nT_nS": float(np.max(np.abs(S @ G @ self.nT))),
            "future": float(self.nT[0] <= 0),
        }
        if pe is not None:
            out["nT_Xu"] = float(np.max(np.abs(pe.Xu @ G @ self.nT)))
            out["nS_Xu"] = float(np.max(np.abs(pe.Xu @ G @ S.T)))
            # nT must lie in span(X_t, X_u)
            T = np.vstack([pe.Xt, pe.Xu])
            coef, *_ = np.linalg.lstsq(T.T, self.nT, rcond=None)
            out["nT_tangent"] = float(np.max(np.abs(T.T @ coef - self.nT)))
        return out


@dataclass(frozen=True)
class SphereAngles:
    """A point of the unit sphere S^{k-2} in the spacelike normal space.

    For k = 2 the sphere is {+1, -1} and only ``sign`` matters; otherwise
    ``angles`` are k-2 spherical coordinates (empty means all zero).
    """

    angles: tuple = ()
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        if self.sign not in (1, -1):
            raise InputError(f"sign must be +1 or -1, got {self.sign}")

    def weights(self, k) -> np.ndarray:
        """Coefficients of xi in the basis nS_1..nS_{k-1}."""
        if k == 2:
            return np.array([float(self.sign)])
        angles = self.angles or (0.0,) * (k - 2)
        if len(angles) != k - 2:
            raise InputError(f"need {k - 2} angles for k={k}, got {len(self.angles)}")
        w = np.empty(k - 1)
        prod = 1.0
        for i, a in enumerate(angles):
            w[i] = prod * np.cos(a)
            prod *= np.sin(a)
        w[-1] = prod
        return w


def timelike_normal(pe) -> np.ndarray:
    """Future-directed unit timelike normal of S_t tangent to W.

    The part of X_t pseudo-orthogonal to T_p S_t, normalized; it is the only
    candidate in N_p(S_t) that is also tangent to W.
    """
    G = metric(pe.dim)
    coeff = pe.g_inv @ (pe.Xu @ G @ pe.Xt)
    v = pe.Xt - coeff @ pe.Xu
    q = pseudo_product(v, v)
    if not q < -1e-12 * max(1.0, float(np.dot(v, v))):
        raise DegeneracyError(f"tangential complement of X_t is not timelike "
                              f"(<v,v> = {q:.3g}) at u={pe.u.tolist()}, t={pe.t}")
    n = v / np.sqrt(-q)
    if n[0] < 0:
        n = -n
    return n


def _complement_projector(B, G):
    """Pseudo-orthogonal projection onto the complement of span(rows of B)."""
    gram = B @ G @ B.T
    gi = np.linalg.inv(gram)

    def project(x):
        return x - (gi @ (B @ G @ x)) @ B
    return project


def spacelike_frame(pe, nT, reference=None) -> NormalFrame:
    """Gram-Schmidt under the pseudo scalar product in {X_u, n^T}^perp.

    Seeds are the canonical vectors e_1, ..., e_n, e_0 in order; a seed is
    accepted when its projection exceeds PIVOT_TOL (lowest index wins).
    With ``reference`` (a neighboring frame's nS rows) those vectors are
    tried first, which keeps frames continuous along grid sweeps.
    """
    dim = pe.dim
    k = dim - pe.s
    G = metric(dim)
    B = np.vstack([pe.Xu, nT])
    project = _complement_projector(B, G)
    seeds = [np.eye(dim)[i] for i in list(range(1, dim)) + [0]]
    if reference is not None:
        seeds = list(np.asarray(reference)) + seeds
    basis = []
    for seed in seeds:
        if len(basis) == k - 1:
            break
        w = project(seed)
        for b in basis:
            w = w - pseudo_product(w, b) * b
        q = pseudo_product(w, w)
        if q <= PIVOT_TOL**2:
            continue
        w = w / np.sqrt(q)
        # second pass against round-off
        w = project(w)
        for b in basis:
            w = w - pseudo_product(w, b) * b
        w = w / np.sqrt(pseudo_product(w, w))
        basis.append(w)
    if len(basis) < k - 1:
        raise DegeneracyError(f"normal space has rank {len(basis)} < {k - 1} "
                              f"at u={pe.u.tolist()}, t={pe.t}")
    nS = np.array(basis)
    if reference is not None and k == 2:
        # align sign with the neighbor
        if pseudo_product(nS[0], reference[0]) < 0:
            nS = -nS
    return NormalFrame(nT, nS)


def normal_frame(pe, reference=None) -> NormalFrame:
    return spacelike_frame(pe, timelike_normal(pe), reference)


def xi_from_angles(frame: NormalFrame, a: SphereAngles) -> np.ndarray:
    return a.weights(frame.k) @ frame.nS


def resolve_xi(frame: NormalFrame, xi) -> np.ndarray:
    """Accept SphereAngles, a +/-1 sign, or an explicit normal vector."""
    if isinstance(xi, SphereAngles):
        return xi_from_angles(frame, xi)
    if isinstance(xi, (int, np.integer)) and xi in (1, -1):
        return xi_from_angles(frame, SphereAngles(sign=int(xi)))
    v = np.asarray(xi, dtype=float)
    if v.shape != frame.nT.shape:
        raise InputError(f"xi has shape {v.shape}, expected {frame.nT.shape}")
    return v


def xi_residuals(frame, xi, pe) -> dict:
    G = metric(pe.dim)
    return {
        "unit": abs(pseudo_product(xi, xi) - 1.0),
        "nT": abs(pseudo_product(xi, frame.nT)),
        "Xu": float(np.max(np.abs(pe.Xu @ G @ xi))),
    }
