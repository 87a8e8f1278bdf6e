"""Deterministic writers for JSON reports, CSV tables and OBJ meshes.

Floats are written in shortest round-trip form (``repr``), JSON keys are
sorted, and rows follow grid order, so identical inputs give identical bytes.
"""
from __future__ import annotations

import csv
import json
import math
import os

import numpy as np


def plain(obj):
    """Convert numpy scalars/arrays and tuples into JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
        return x
    return obj


def dumps(obj) -> str:
    return json.dumps(plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))
    return path


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def curvature_rows(spec, grid_rows):
    """Header and rows for the curvature CSV (see README for the column order)."""
    s, k = spec.s, spec.k
    xi_cols = ["sign"] if k == 2 else [f"a{i + 1}" for i in range(k - 2)]
    header = ([f"u{i + 1}" for i in range(s)] + ["t"] + xi_cols
              + [f"kappa{i + 1}" for i in range(s)]
              + ["K_ell", "ell0", "K_ell_normalized", "parabolic", "umbilical", "flat_umbilical"])
    rows = []
    for pe, xi, cd, cls in grid_rows:
        xi_vals = [xi.sign] if k == 2 else list(xi.angles or (0.0,) * (k - 2))
        rows.append(list(pe.u) + [pe.t] + xi_vals + list(cd.kappas)
                    + [cd.K_ell, cd.ell0, cd.K_ell_normalized,
                       cls.parabolic, cls.umbilical, cls.flat_umbilical])
    return header, rows


def front_rows(mesh):
    spec = mesh.spec
    s, k, n = spec.s, spec.k, spec.n
    xi_cols = ["sign"] if k == 2 else [f"a{i + 1}" for i in range(k - 2)]
    header = (["branch"] + [f"u{i + 1}" for i in range(s)] + xi_cols + ["t"]
              + [f"p{i}" for i in range(n + 1)]
              + ["scalar", "jac_rank", "space_rank", "legendrian_singular",
                 "space_singular", "degenerate_zero"])
    rows = []
    for b in range(len(mesh.branches)):
        for idx in np.ndindex(*mesh.shape):
            u, xi, t = mesh.params(b, idx)
            key = (b,) + idx
            xi_vals = [xi.sign] if k == 2 else list(xi.angles)
            rows.append([b] + list(u) + xi_vals + [t] + list(mesh.pedal[key])
                        + [mesh.scalar[key], mesh.jac_rank[key], mesh.space_rank[key],
                           mesh.legendrian[key], mesh.space_singular[key],
                           mesh.degenerate[key]])
    return header, rows


def _branch_label(mesh, b):
    if mesh.spec.k == 2:
        return "branch_plus" if mesh.branches[b].sign > 0 else "branch_minus"
    return "front"


def _obj_vertex(v):
    return "v " + " ".join(fmt(x) for x in v) + "\n"


def write_front_obj(mesh, out_dir, stem="front"):
    """Write OBJ files for the front; returns the written paths.

    Ambient dimension 3: one file whose vertices are (p1, p2, t), with
    triangles over the (u, t) grid and one polyline per t-slice.
    Ambient dimension 4: one file per t-slice with vertices (p1, p2, p3).
    Higher dimensions have no OBJ rendering and return [].
    """
    dim = mesh.spec.ambient_dim
    t_ax = mesh.axis_kinds.index("t")
    mt = mesh.shape[t_ax]
    if dim == 3:
        path = os.path.join(out_dir, f"{stem}.obj")
        mu = mesh.shape[0]
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("# unfolded lightcone pedal: x y = spatial pedal, z = t\n")
            base = 0
            for b in range(len(mesh.branches)):
                fh.write(f"o {_branch_label(mesh, b)}\n")
                for i in range(mu):
                    for j in range(mt):
                        p = mesh.pedal[b, i, j]
                        fh.write(_obj_vertex([p[1], p[2], mesh.axes[t_ax][j]]))
                for tri in mesh.surface_triangles():
                    fh.write("f " + " ".join(str(base + q + 1) for q in tri) + "\n")
                for j in range(mt):
                    ids = [base + i * mt + j + 1 for i in range(mu)]
                    if mesh.periodic[0]:
                        ids.append(ids[0])
                    fh.write("l " + " ".join(map(str, ids)) + "\n")
                base += mu * mt
        return [path]
    if dim == 4:
        paths = []
        slice_shape = tuple(m for a, m in enumerate(mesh.shape) if a != t_ax)
        tris = mesh.slice_triangles()
        segs = mesh.slice_segments()
        for j in range(mt):
            path = os.path.join(out_dir, f"{stem}_t{j:04d}.obj")
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(f"# lightcone pedal slice t = {fmt(mesh.axes[t_ax][j])}\n")
                base = 0
                for b in range(len(mesh.branches)):
                    fh.write(f"o {_branch_label(mesh, b)}\n")
                    for idx in np.ndindex(*slice_shape):
                        full = idx[:t_ax] + (j,) + idx[t_ax:]
                        fh.write(_obj_vertex(mesh.pedal[(b,) + full][1:]))
                    for tri in tris:
                        fh.write("f " + " ".join(str(base + q + 1) for q in tri) + "\n")
                    for a, c in segs:
                        fh.write(f"l {base + a + 1} {base + c + 1}\n")
                    base += int(np.prod(slice_shape))
            paths.append(path)
        return paths
    return []
