"""Lightcone pedal maps, big wave fronts and their singular sets.

The unfolded pedal map sends a parameter (u, xi, t) to (LP, t) where
LP = <X, LG~> LG~ lies on the lightcone.  A front mesh samples it on a
structured grid; Jacobians come from finite differences between grid
neighbours, with each neighbour's normal frame seeded by the centre frame so
the xi-section is consistent across the stencil.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from . import worldsheet
from .curvature import curvature_at, lightcone_gauss, raster_predecessor
from .errors import ConfigError
from .frames import SphereAngles, normal_frame, spacelike_frame
from .minkowski import LightlikeHyperplane, metric

DEGENERATE_TOL = 1e-9
FRONT_RANK_TOL = 1e-6


class DegeneratePedalWarning(UserWarning):
    """The pedal point is the lightcone vertex, so it leaves LC*."""


@dataclass(frozen=True)
class PedalPoint:
    vector: np.ndarray
    scalar: float
    direction: np.ndarray       # LG~
    degenerate_zero: bool


def _pedal(position, direction, tol=DEGENERATE_TOL):
    G = metric(position.shape[0])
    c = float(position @ G @ direction)
    degenerate = abs(c) <= tol * max(1.0, float(np.max(np.abs(position))))
    return PedalPoint(c * direction, c, direction, degenerate)


def pedal_point(spec, u, t, xi=SphereAngles()) -> PedalPoint:
    """Momentary lightcone pedal <X, LG~> LG~ at (u, t, xi)."""
    pe, frame, xv, cd = curvature_at(spec, u, t, xi)
    return _pedal(pe.position, cd.LG_normalized)


def unfolded_pedal(spec, u, t, xi=SphereAngles()):
    return pedal_point(spec, u, t, xi).vector, float(t)


def tangent_lightlike_hyperplane(spec, u, t, xi=SphereAngles()) -> LightlikeHyperplane:
    """HP(LG~, <X, LG~>): the lightlike hyperplane tangent to S_t at X(u, t).

    When the pedal point is the vertex the plane passes through the origin
    and a DegeneratePedalWarning is issued.
    """
    p = pedal_point(spec, u, t, xi)
    if p.degenerate_zero:
        warnings.warn("pedal point is the lightcone vertex; tangent hyperplane "
                      "passes through the origin", DegeneratePedalWarning, stacklevel=2)
        return LightlikeHyperplane(p.direction, 0.0)
    return LightlikeHyperplane(p.direction, p.scalar)


@dataclass(frozen=True)
class FrontSample:
    u: tuple
    xi: SphereAngles
    t: float
    pedal: np.ndarray
    jac_rank: int
    space_rank: int
    legendrian_singular: bool
    space_singular: bool
    degenerate_zero: bool

    @property
    def unfolded(self):
        return self.pedal, self.t


@dataclass
class FrontMesh:
    """Structured samples of the unfolded pedal map.

    Arrays are indexed ``[branch, *param_index]`` where the parameter axes are
    the u-axes, then the sphere-angle axes (k >= 3), then t.  For k = 2 each
    branch is one sign of xi; otherwise there is a single branch.
    """

    spec: object
    axes: list                  # 1-D sample arrays per parameter axis
    periodic: list
    axis_kinds: list            # "u", "angle" or "t"
    branches: list              # SphereAngles template per branch (sign for k=2)
    pedal: np.ndarray           # (B, *shape, n+1)
    scalar: np.ndarray          # (B, *shape)
    jacobian: np.ndarray        # (B, *shape, n+2, n)
    jac_rank: np.ndarray = None
    space_rank: np.ndarray = None
    legendrian: np.ndarray = None
    space_singular: np.ndarray = None
    degenerate: np.ndarray = None
    scanned: bool = False
    rank_tol: float = FRONT_RANK_TOL
    meta: dict = field(default_factory=dict)

    @property
    def shape(self):
        return tuple(len(a) for a in self.axes)

    @property
    def n(self):
        return self.spec.n

    def params(self, b, idx):
        u, ang, t = [], [], None
        for kind, axis, i in zip(self.axis_kinds, self.axes, idx):
            if kind == "u":
                u.append(float(axis[i]))
            elif kind == "angle":
                ang.append(float(axis[i]))
            else:
                t = float(axis[i])
        xi = SphereAngles(tuple(ang), self.branches[b].sign)
        return tuple(u), xi, t

    def samples(self):
        if not self.scanned:
            singular_scan(self)
        out = []
        for b in range(len(self.branches)):
            for idx in np.ndindex(*self.shape):
                u, xi, t = self.params(b, idx)
                key = (b,) + idx
                out.append(FrontSample(
                    u, xi, t, self.pedal[key], int(self.jac_rank[key]),
                    int(self.space_rank[key]), bool(self.legendrian[key]),
                    bool(self.space_singular[key]), bool(self.degenerate[key])))
        return out

    def slice_triangles(self):
        """Triangles over the (u, xi) slice grid (for 2-D slices), flat indices within a slice."""
        dims = [i for i, k in enumerate(self.axis_kinds) if k != "t"]
        if len(dims) != 2:
            return []
        shp = [self.shape[d] for d in dims]
        per = [self.periodic[d] for d in dims]
        return grid_triangles(shp, per)

    def slice_segments(self):
        dims = [i for i, k in enumerate(self.axis_kinds) if k != "t"]
        if len(dims) != 1:
            return []
        return grid_segments(self.shape[dims[0]], self.periodic[dims[0]])

    def surface_triangles(self):
        """Triangles over the (slice-parameter, t) grid when slices are 1-D."""
        if len(self.shape) != 2:
            return []
        return grid_triangles(list(self.shape), [self.periodic[0], False])


def grid_segments(m, periodic):
    segs = [(i, i + 1) for i in range(m - 1)]
    if periodic and m > 2:
        segs.append((m - 1, 0))
    return segs


def grid_triangles(shape, periodic):
    """Split each grid quad into two triangles; periodic axes wrap around."""
    a, b = shape
    tris = []
    ia = range(a if periodic[0] and a > 2 else a - 1)
    ib = range(b if periodic[1] and b > 2 else b - 1)
    for i in ia:
        for j in ib:
            i2, j2 = (i + 1) % a, (j + 1) % b
            p00, p01, p10, p11 = i * b + j, i * b + j2, i2 * b + j, i2 * b + j2
            tris.append((p00, p10, p11))
            tris.append((p00, p11, p01))
    return tris


def _angle_axes(k, count):
    axes, per = [], []
    for i in range(k - 2):
        if i < k - 3:
            axes.append(np.linspace(0.0, math.pi, count))
            per.append(False)
        else:
            axes.append(2 * math.pi * np.arange(count) / count)
            per.append(True)
    return axes, per


def front_mesh(spec, u_counts=None, t_count=worldsheet.DEFAULT_GRID, xi_count=16,
               signs=(1,), t_values=None, degenerate_tol=DEGENERATE_TOL) -> FrontMesh:
    """Sample the unfolded pedal map on a structured (u, xi, t) grid.

    Jacobians are finite differences with step equal to the grid spacing
    (central inside, one-sided at closed ends, wrapped on periodic axes).
    """
    s, k, n = spec.s, spec.k, spec.n
    if u_counts is None:
        u_counts = (worldsheet.DEFAULT_GRID,) * s
    u_axes = [spec.u_axis(i, c) for i, c in enumerate(u_counts)]
    t_axis = np.asarray(t_values, dtype=float) if t_values is not None else spec.t_axis(t_count)
    ang_axes, ang_per = _angle_axes(k, xi_count) if k >= 3 else ([], [])
    axes = u_axes + ang_axes + [t_axis]
    periodic = list(spec.periodic) + ang_per + [False]
    kinds = ["u"] * s + ["angle"] * (k - 2) + ["t"]
    for kind, a in zip(kinds, axes):
        if len(a) < 3:
            raise ConfigError(f"front mesh needs at least 3 points per axis ({kind} axis has {len(a)})")
    branches = [SphereAngles(sign=int(sg)) for sg in signs] if k == 2 else [SphereAngles()]
    shape = tuple(len(a) for a in axes)

    # frames on the (u, t) node grid
    node_shape = tuple(len(a) for a in u_axes) + (len(t_axis),)
    pes, frames = {}, {}
    for node in np.ndindex(*node_shape):
        u = np.array([u_axes[i][j] for i, j in enumerate(node[:-1])])
        pe = worldsheet.evaluate(spec, u, float(t_axis[node[-1]]))
        pes[node] = pe
        ref = raster_predecessor(node)
        frames[node] = normal_frame(pe, None if ref is None else frames[ref].nS)

    node_axes = [i for i, kd in enumerate(kinds) if kd != "angle"]
    ang_idx = [i for i, kd in enumerate(kinds) if kd == "angle"]
    nb = len(branches)
    pedal = np.zeros((nb,) + shape + (n + 1,))
    scalar = np.zeros((nb,) + shape)
    degenerate = np.zeros((nb,) + shape, dtype=bool)
    jac = np.zeros((nb,) + shape + (n + 2, n))
    G = metric(n + 1)

    def weights(b, idx):
        ang = tuple(float(axes[i][idx[i]]) for i in ang_idx)
        return SphereAngles(ang, branches[b].sign).weights(k)

    def value(pe, frame, w):
        xv = w @ frame.nS
        _, LGn, _ = lightcone_gauss(frame, xv)
        c = float(pe.position @ G @ LGn)
        return c * LGn, c

    for b in range(nb):
        for idx in np.ndindex(*shape):
            node = tuple(idx[i] for i in node_axes)
            w = weights(b, idx)
            p, c = value(pes[node], frames[node], w)
            pedal[(b,) + idx] = p
            scalar[(b,) + idx] = c
            scale = max(1.0, float(np.max(np.abs(pes[node].position))))
            degenerate[(b,) + idx] = abs(c) <= degenerate_tol * scale

    reseeded = {}
    for b in range(nb):
        for idx in np.ndindex(*shape):
            node = tuple(idx[i] for i in node_axes)
            center_frame = frames[node]
            w = weights(b, idx)
            for a in range(len(axes)):
                col = _axis_derivative(spec, axes, periodic, kinds, a, idx, node_axes,
                                       pes, center_frame, w, b, value, pedal, reseeded)
                jac[(b,) + idx][: n + 1, a] = col
                jac[(b,) + idx][n + 1, a] = 1.0 if kinds[a] == "t" else 0.0

    return FrontMesh(spec, axes, periodic, kinds, branches, pedal, scalar, jac,
                     degenerate=degenerate)


def _axis_derivative(spec, axes, periodic, kinds, a, idx, node_axes, pes, center_frame,
                     w, b, value, pedal, cache):
    m = len(axes[a])
    i = idx[a]
    if periodic[a]:
        lo, hi = (i - 1) % m, (i + 1) % m
        span = axes[a][1] - axes[a][0]
        h_lo = h_hi = span
    else:
        lo, hi = max(i - 1, 0), min(i + 1, m - 1)
        h_lo = axes[a][i] - axes[a][lo]
        h_hi = axes[a][hi] - axes[a][i]

    def neighbour(j):
        nidx = list(idx)
        nidx[a] = j
        nidx = tuple(nidx)
        if kinds[a] == "angle":
            return pedal[(b,) + nidx]
        # re-seed the neighbour's frame with the centre frame
        node = tuple(nidx[q] for q in node_axes)
        center = tuple(idx[q] for q in node_axes)
        pe = pes[node]
        key = (center, node)
        if key not in cache:
            cache[key] = spacelike_frame(pe, normal_frame(pe).nT, reference=center_frame.nS)
        return value(pe, cache[key], w)[0]

    p_hi = neighbour(hi) if hi != i else pedal[(b,) + idx]
    p_lo = neighbour(lo) if lo != i else pedal[(b,) + idx]
    return (p_hi - p_lo) / (h_lo + h_hi)


def singular_scan(mesh: FrontMesh, tol=None) -> FrontMesh:
    """Fill rank and singularity flags.

    Legendrian singular: rank of d(pedal, t) < n.  Space singular: rank of
    d(pedal) < n.  Samples at the lightcone vertex are flagged degenerate
    and excluded (both singular flags False).  The time projection always
    has rank 1 here since t is itself a parameter, so no sample is
    time-singular.
    """
    tol = mesh.rank_tol if tol is None else tol
    n = mesh.n
    J = mesh.jacobian
    sv_full = np.linalg.svd(J, compute_uv=False)
    sv_space = np.linalg.svd(J[..., : n + 1, :], compute_uv=False)

    def rank(sv):
        top = sv[..., :1]
        return np.sum(sv > tol * np.where(top > 0, top, np.inf), axis=-1)

    mesh.jac_rank = rank(sv_full)
    mesh.space_rank = rank(sv_space)
    mesh.legendrian = (mesh.jac_rank < n) & ~mesh.degenerate
    mesh.space_singular = (mesh.space_rank < n) & ~mesh.degenerate
    mesh.scanned = True
    mesh.meta["time_singular_count"] = 0
    return mesh


@dataclass
class DiscriminantReport:
    caustic_points: list
    maxwell_pairs: list
    delta_points: list
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        def pt(p):
            return {"pedal": [float(x) for x in p[0]], "t": float(p[1])}
        return {
            "caustic": [pt(p) for p in self.caustic_points],
            "maxwell": [{"a": list(a), "b": list(b), "pedal": [float(x) for x in v],
                         "t": float(t)} for a, b, v, t in self.maxwell_pairs],
            "delta": [pt(p) for p in self.delta_points],
            "counts": {"caustic": len(self.caustic_points),
                       "maxwell": len(self.maxwell_pairs),
                       "delta": len(self.delta_points)},
            "meta": self.meta,
        }


def _index_distance(a, b, mesh):
    if a[0] != b[0]:
        return math.inf
    d = 0
    for ax, (i, j) in enumerate(zip(a[1:], b[1:])):
        m = mesh.shape[ax]
        diff = abs(i - j)
        if mesh.periodic[ax]:
            diff = min(diff, m - diff)
        d = max(d, diff)
    return d


def discriminant_extract(mesh: FrontMesh, match_tol=None, sep=10) -> DiscriminantReport:
    """Caustic, Maxwell pairs and critical values of the space projection.

    ``match_tol`` defaults to 1e-6 times the bounding-box diagonal of the
    non-degenerate (pedal, t) points; ``sep`` is the minimum parameter
    separation of a Maxwell pair in grid cells.
    """
    if not mesh.scanned:
        singular_scan(mesh)
    keys = [(b,) + idx for b in range(len(mesh.branches)) for idx in np.ndindex(*mesh.shape)]
    t_ax = mesh.axis_kinds.index("t")

    def point(key):
        return mesh.pedal[key], float(mesh.axes[t_ax][key[1 + t_ax]])

    caustic = [point(key) for key in keys if mesh.legendrian[key]]
    delta = [point(key) for key in keys
             if mesh.space_singular[key] and not mesh.legendrian[key]]

    good = [key for key in keys if not mesh.degenerate[key]]
    maxwell = []
    if good:
        pts = np.array([np.append(mesh.pedal[key], point(key)[1]) for key in good])
        diag = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
        tol = match_tol if match_tol is not None else 1e-6 * diag
        if tol > 0:
            tree = cKDTree(pts)
            for i, j in sorted(tree.query_pairs(tol, p=np.inf)):
                if _index_distance(good[i], good[j], mesh) > sep:
                    maxwell.append((good[i], good[j], pts[i][:-1], pts[i][-1]))
    else:
        tol = match_tol
    meta = {"match_tol": tol, "separation_cells": sep, "samples": len(keys),
            "degenerate": int(np.sum(mesh.degenerate)), "time_singular": 0}
    return DiscriminantReport(caustic, maxwell, delta, meta)


__all__ = [
    "PedalPoint", "FrontSample", "FrontMesh", "DiscriminantReport",
    "DegeneratePedalWarning", "pedal_point", "unfolded_pedal",
    "tangent_lightlike_hyperplane", "front_mesh", "singular_scan",
    "discriminant_extract", "grid_triangles", "grid_segments",
]
