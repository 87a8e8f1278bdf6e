"""Lightcone Gauss maps, lightcone second fundamental invariants and curvatures."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import worldsheet
from .frames import SphereAngles, normal_frame, resolve_xi
from .minkowski import LightlikeHyperplane, hyperplane_residual, metric, pseudo_product


@dataclass(frozen=True)
class CurvatureData:
    LG: np.ndarray
    LG_normalized: np.ndarray
    ell0: float
    h: np.ndarray
    shape: np.ndarray
    kappas: np.ndarray
    K_ell: float
    kappas_normalized: np.ndarray
    K_ell_normalized: float

    @property
    def s(self):
        return self.h.shape[0]


@dataclass(frozen=True)
class PointClassification:
    parabolic: bool
    umbilical: bool
    flat_umbilical: bool


def lightcone_gauss(frame, xi):
    """Return (LG, normalized LG, ell0) for LG = n^T + xi."""
    LG = frame.nT + np.asarray(xi, dtype=float)
    ell0 = float(LG[0])
    return LG, LG / ell0, ell0


def second_fundamental(pe, LG) -> np.ndarray:
    """h_ij = <LG, X_{u_i u_j}>."""
    h = pe.Xuu @ metric(pe.dim) @ LG
    return 0.5 * (h + h.T)


def principal_curvatures(h, g) -> np.ndarray:
    """Eigenvalues of h g^{-1}, ascending, via the symmetric form C^{-1} h C^{-T}."""
    C = np.linalg.cholesky(g)
    Ci = np.linalg.inv(C)
    L = Ci @ h @ Ci.T
    return np.linalg.eigvalsh(0.5 * (L + L.T))


def shape_and_curvatures(pe, h, LG, ell0=None) -> CurvatureData:
    if ell0 is None:
        ell0 = float(LG[0])
    shape = h @ pe.g_inv
    kappas = principal_curvatures(h, pe.g)
    K = float(np.linalg.det(h) / pe.det_g)
    s = h.shape[0]
    return CurvatureData(LG=LG, LG_normalized=LG / ell0, ell0=ell0, h=h, shape=shape,
                         kappas=kappas, K_ell=K, kappas_normalized=kappas / ell0,
                         K_ell_normalized=K / ell0**s)


def curvature_at(spec, u, t, xi=SphereAngles(), frame=None, pe=None):
    """Convenience wrapper: evaluate, build a frame, and compute CurvatureData.

    Returns (pe, frame, xi_vector, CurvatureData).
    """
    if pe is None:
        pe = worldsheet.evaluate(spec, u, t)
    if frame is None:
        frame = normal_frame(pe)
    xv = resolve_xi(frame, xi)
    LG, _, ell0 = lightcone_gauss(frame, xv)
    h = second_fundamental(pe, LG)
    return pe, frame, xv, shape_and_curvatures(pe, h, LG, ell0)


def big_shape_matrix(cd: CurvatureData, k: int) -> np.ndarray:
    """Block upper-triangular matrix of the shape operator on the normal bundle.

    The tangential block is (h_i^j); the fiber block is -I_{k-2}.  The
    off-diagonal block vanishes because moving xi along the fiber sphere
    changes LG by a normal vector only.
    """
    s = cd.s
    M = np.zeros((s + k - 2, s + k - 2))
    M[:s, :s] = cd.shape
    M[s:, s:] = -np.eye(k - 2)
    return M


def big_shape_spectrum(cd: CurvatureData, k: int) -> np.ndarray:
    """kappa_1..kappa_s followed by k-2 copies of exactly -1."""
    return np.concatenate([cd.kappas, -np.ones(k - 2)])


def classify_point(cd: CurvatureData, tol=None) -> PointClassification:
    if tol is None:
        tol = 1e-8 * (1.0 + float(np.linalg.norm(cd.h)))
    s = cd.s
    kbar = np.trace(cd.shape) / s
    parabolic = abs(cd.K_ell) <= tol
    umbilical = float(np.linalg.norm(cd.shape - kbar * np.eye(s))) <= tol
    flat = float(np.linalg.norm(cd.h)) <= tol
    return PointClassification(parabolic or flat, umbilical or flat, flat)


def _tangential_coeffs(pe, V):
    """Coefficients c with pi^t(V) = sum_j c_j X_{u_j}."""
    return pe.g_inv @ (pe.Xu @ metric(pe.dim) @ V)


def _shifted_frames(spec, u, t, i, step, frame):
    out = []
    for sgn in (1.0, -1.0):
        uu = np.array(u, dtype=float)
        uu[i] += sgn * step
        pe = worldsheet.evaluate(spec, uu, t)
        out.append((pe, normal_frame(pe, reference=frame.nS)))
    return out


def weingarten_residuals(spec, u, t, xi=SphereAngles(), step=1e-4) -> dict:
    """Finite-difference checks of the lightcone Weingarten formulas at one point.

    The section nS is continued to neighbouring points by seeding the frame
    with the centre frame, keeping the same sphere weights.  Reports the
    max deviation of pi^t(LG_{u_i}) from -h_i^j X_{u_j}, of the normalized
    version from -(1/ell0) h_i^j X_{u_j}, and of -<LG_{u_i}, X_{u_j}> from h_ij.
    """
    pe, frame, xv, cd = curvature_at(spec, u, t, xi)
    G = metric(pe.dim)
    weights = frame.nS @ G @ xv        # xi in the orthonormal nS basis
    res = {"weingarten": 0.0, "normalized_weingarten": 0.0, "h_formulas": 0.0}
    for i in range(pe.s):
        (_, fp), (_, fm) = _shifted_frames(spec, u, t, i, step, frame)
        LGp = fp.nT + weights @ fp.nS
        LGm = fm.nT + weights @ fm.nS
        dLG = (LGp - LGm) / (2 * step)
        dLGn = (LGp / LGp[0] - LGm / LGm[0]) / (2 * step)
        expect = -cd.shape[i]
        got = _tangential_coeffs(pe, dLG)
        gotn = _tangential_coeffs(pe, dLGn)
        # compare as vectors in R^{n+1}
        res["weingarten"] = max(res["weingarten"], float(np.max(np.abs(
            (got - expect) @ pe.Xu))))
        res["normalized_weingarten"] = max(res["normalized_weingarten"], float(np.max(np.abs(
            (gotn - expect / cd.ell0) @ pe.Xu))))
        h_fd = -(pe.Xu @ G @ dLG)
        res["h_formulas"] = max(res["h_formulas"],
                                float(np.max(np.abs(h_fd - cd.h[i]))))
    return res


@dataclass(frozen=True)
class ConstancyReport:
    constant: bool
    spread: float
    v: np.ndarray | None
    c: float | None
    max_residual: float | None
    max_abs_K: float
    max_abs_h: float = 0.0

    def to_dict(self):
        return {
            "constant": self.constant,
            "angular_spread": self.spread,
            "normal": None if self.v is None else self.v.tolist(),
            "offset": self.c,
            "max_hyperplane_residual": self.max_residual,
            "max_abs_K_ell": self.max_abs_K,
            "max_abs_h": self.max_abs_h,
        }


def section_frames(spec, t0, u_counts):
    """Frames over the u-grid at fixed t, each seeded with its raster predecessor."""
    axes = [spec.u_axis(i, c) for i, c in enumerate(u_counts)]
    shape = tuple(len(a) for a in axes)
    out = {}
    for idx in np.ndindex(*shape):
        u = np.array([axes[i][j] for i, j in enumerate(idx)])
        pe = worldsheet.evaluate(spec, u, t0)
        ref = raster_predecessor(idx)
        frame = normal_frame(pe, None if ref is None else out[ref][1].nS)
        out[idx] = (pe, frame)
    return out


def raster_predecessor(idx):
    """Neighbor visited just before ``idx`` along its row (C-order), or None at the origin."""
    nz = [p for p, i in enumerate(idx) if i > 0]
    if not nz:
        return None
    prev = list(idx)
    prev[nz[-1]] -= 1
    return tuple(prev)


def gauss_map_constancy(spec, t0, xi=SphereAngles(), u_counts=None, tol=1e-8):
    """Sweep the u-grid at t0 and test whether the normalized Gauss map is constant.

    When it is (angular spread <= tol), fit the lightlike hyperplane
    HP(v, c) containing S_{t0} and report its largest residual.
    """
    if u_counts is None:
        u_counts = (worldsheet.DEFAULT_GRID,) * spec.s
    frames = section_frames(spec, t0, u_counts)
    dirs, positions, Ks, hs = [], [], [], []
    for pe, frame in frames.values():
        xv = resolve_xi(frame, xi)
        LG, LGn, ell0 = lightcone_gauss(frame, xv)
        cd = shape_and_curvatures(pe, second_fundamental(pe, LG), LG, ell0)
        dirs.append(LGn[1:] / np.linalg.norm(LGn[1:]))
        positions.append(pe.position)
        Ks.append(abs(cd.K_ell))
        hs.append(float(np.max(np.abs(cd.h))))
    D = np.array(dirs)
    cosines = np.clip(D @ D.T, -1.0, 1.0)
    spread = float(np.max(np.arccos(cosines)))
    max_K, max_h = float(max(Ks)), float(max(hs))
    if spread > tol:
        return ConstancyReport(False, spread, None, None, None, max_K, max_h)
    w = D.mean(axis=0)
    v = np.concatenate([[1.0], w / np.linalg.norm(w)])
    vals = np.array([pseudo_product(x, v) for x in positions])
    plane = LightlikeHyperplane(v, float(np.mean(vals)))
    resid = max(abs(hyperplane_residual(plane, x)) for x in positions)
    return ConstancyReport(True, spread, v, plane.offset, float(resid), max_K, max_h)


def curvature_grid(spec, u_counts, t_count, xis):
    """Rows of curvature data over the chart grid with frames continued along each t-slice."""
    rows = []
    for t in spec.t_axis(t_count):
        frames = section_frames(spec, float(t), u_counts)
        for idx, (pe, frame) in frames.items():
            for xi in xis:
                xv = resolve_xi(frame, xi)
                LG, _, ell0 = lightcone_gauss(frame, xv)
                cd = shape_and_curvatures(pe, second_fundamental(pe, LG), LG, ell0)
                rows.append((pe, xi, cd, classify_point(cd)))
    return rows
