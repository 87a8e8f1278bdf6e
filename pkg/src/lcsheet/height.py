"""Lightcone height functions H, extended height functions H~ and the Morse-family rank test."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import worldsheet
from .curvature import curvature_at, lightcone_gauss
from .errors import DomainError, PreconditionError
from .frames import SphereAngles
from .jets import Jet2, eval_jet2
from .minkowski import as_vector, is_lightlike, metric, project_to_lightcone_sphere

RANK_TOL = 1e-8
SIGMA_STAR_TOL = 1e-9


@dataclass(frozen=True)
class HeightEval:
    value: float
    grad_u: np.ndarray
    hess_u: np.ndarray
    det_hess: float
    rank_hess: int


def _rank(m, tol, floor=1.0):
    sv = np.linalg.svd(np.atleast_2d(m), compute_uv=False)
    if sv.size == 0:
        return 0
    return int(np.sum(sv > tol * max(floor, sv[0])))


def _height_from_pe(pe, v, shift=0.0, rank_tol=1e-9):
    G = metric(pe.dim)
    Gv = G @ v
    hess = pe.Xuu @ Gv
    hess = 0.5 * (hess + hess.T)
    return HeightEval(float(pe.position @ Gv) - shift, pe.Xu @ Gv, hess,
                      float(np.linalg.det(hess)), _rank(hess, rank_tol))


def height(spec, u, t, v, pe=None, rank_tol=1e-9) -> HeightEval:
    """u -> <X(u, t), v> for v on the lightcone unit sphere (v_0 = 1)."""
    v = as_vector(v, spec.ambient_dim)
    if abs(v[0] - 1.0) > 1e-9 or not is_lightlike(v):
        raise DomainError("height function needs v lightlike with v_0 = 1")
    if pe is None:
        pe = worldsheet.evaluate(spec, u, t)
    return _height_from_pe(pe, v, rank_tol=rank_tol)


def extended_height(spec, u, t, v, pe=None, rank_tol=1e-9) -> HeightEval:
    """u -> <X(u, t), v~> - v_0 for lightlike v with v_0 != 0."""
    v = as_vector(v, spec.ambient_dim)
    vt = project_to_lightcone_sphere(v)
    if pe is None:
        pe = worldsheet.evaluate(spec, u, t)
    return _height_from_pe(pe, vt, shift=float(v[0]), rank_tol=rank_tol)


def critical_lightcone_direction(frame, xi) -> np.ndarray:
    """The direction v on the lightcone sphere at which grad_u H vanishes: LG~(xi)."""
    return lightcone_gauss(frame, xi)[1]


def hessian_identity_check(spec, u, t, xi=SphereAngles()) -> dict:
    """Compare Hess_u H at v = LG~ with (1/ell0) h and with -(1/ell0) h.

    Direct differentiation gives the + sign; the opposite sign is reported so
    the discrepancy with the alternative convention stays visible.
    """
    pe, frame, xv, cd = curvature_at(spec, u, t, xi)
    he = _height_from_pe(pe, cd.LG_normalized)
    target = cd.h / cd.ell0
    return {
        "max_dev": float(np.max(np.abs(he.hess_u - target))),
        "max_dev_opposite_sign": float(np.max(np.abs(he.hess_u + target))),
        "grad_norm": float(np.max(np.abs(he.grad_u))),
    }


def pedal_vector(pe, cd) -> np.ndarray:
    return float(pe.position @ metric(pe.dim) @ cd.LG_normalized) * cd.LG_normalized


def morse_matrix(spec, u, t, v) -> np.ndarray:
    """The (s+1) x n block B of d(H~, H~_u) with respect to v.

    LC* is charted by (v_1, ..., v_n) with v_0 = sign(v_0) |(v_1..v_n)|, the
    branch being that of the given v.  Derivatives come from jets over the
    variables (u_1..u_s, v_1..v_n) at fixed t.
    """
    v = as_vector(v, spec.ambient_dim)
    s, n = spec.s, spec.n
    m = s + n
    point = np.append(np.asarray(u, dtype=float), float(t))
    # coordinate jets in (u, t), re-expressed over (u, w) with t frozen
    X = []
    for e in spec.coord_exprs:
        j = eval_jet2(e, point)
        g = np.zeros(m)
        g[:s] = j.grad[:s]
        hs = np.zeros((m, m))
        hs[:s, :s] = j.hess[:s, :s]
        X.append(Jet2(j.value, g, hs))
    w = [Jet2.variable(v[c], s + c - 1, m) for c in range(1, n + 1)]
    sign = 1.0 if v[0] > 0 else -1.0
    r2 = w[0] * w[0]
    for wc in w[1:]:
        r2 = r2 + wc * wc
    r = r2.chain(np.sqrt(r2.value), 0.5 / np.sqrt(r2.value), -0.25 / r2.value ** 1.5)
    v0 = r * sign
    inner = X[1] * w[0]
    for c in range(2, n + 1):
        inner = inner + X[c] * w[c - 1]
    Ht = inner / v0 - X[0] - v0
    B = np.empty((s + 1, n))
    B[0] = Ht.grad[s:]
    B[1:] = Ht.hess[:s, s:]
    return B


def on_sigma_star(spec, u, t, v, tol=SIGMA_STAR_TOL) -> tuple:
    """(ok, residual) for H~ = grad_u H~ = 0 at (u, t, v)."""
    v = as_vector(v, spec.ambient_dim)
    if v[0] == 0.0 or not is_lightlike(v):
        return False, float("inf")
    he = extended_height(spec, u, t, v)
    scale = max(1.0, float(np.max(np.abs(v))))
    res = max(abs(he.value), float(np.max(np.abs(he.grad_u)))) / scale
    return res <= tol, res


def morse_family_rank(spec, u, t, xi=SphereAngles(), v=None, tol=RANK_TOL,
                      sigma_tol=SIGMA_STAR_TOL) -> int:
    """Numerical rank of B at (u, t, v); v defaults to the pedal point of xi.

    Raises PreconditionError when (u, t, v) is not on the zero set of
    (H~, grad_u H~).
    """
    if v is None:
        pe, frame, xv, cd = curvature_at(spec, u, t, xi)
        v = pedal_vector(pe, cd)
    ok, res = on_sigma_star(spec, u, t, v, sigma_tol)
    if not ok:
        raise PreconditionError(f"(u, t, v) is not a zero of (H~, grad_u H~) "
                                f"(residual {res:.3g})")
    B = morse_matrix(spec, u, t, v)
    sv = np.linalg.svd(B, compute_uv=False)
    return int(np.sum(sv >= tol * sv[0])) if sv[0] > 0 else 0
