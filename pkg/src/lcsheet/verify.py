"""Residual suites for the curvature, height-function and Morse-family identities.

Each check samples the chart grid (u-grid times a few t-slices times a few
points of the normal sphere) and reports its largest residual against a
named tolerance.  Check names describe the identity being tested.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import worldsheet
from .curvature import (big_shape_matrix, big_shape_spectrum, classify_point, curvature_at,
                        gauss_map_constancy, weingarten_residuals)
from .errors import LightconeError
from .frames import SphereAngles
from .height import (_height_from_pe, _rank, morse_matrix, on_sigma_star, pedal_vector)

DEFAULT_TOLERANCES = {
    "validation": 1e-9,
    "weingarten": 1e-5,
    "fd_step": 1e-4,
    "spectrum": 1e-9,
    "constancy": 1e-8,
    "hyperplane": 1e-9,
    "flat": 1e-10,
    "height": 1e-9,
    "sigma_star": 1e-9,
    "morse_rank": 1e-8,
    "classification": 1e-8,
    "front_rank": 1e-6,
    "degenerate": 1e-9,
    "maxwell_separation": 10,
    "maxwell_match": None,
}

WORKERS_ENV = "LCSHEET_WORKERS"


def worker_count():
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn, items, workers=None):
    """map() over a process pool when more than one worker is requested; order is kept."""
    workers = worker_count() if workers is None else workers
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def sphere_samples(k, count):
    """A small deterministic set of SphereAngles covering S^{k-2}."""
    if k == 2:
        return [SphereAngles(sign=1), SphereAngles(sign=-1)]
    axes = []
    for i in range(k - 2):
        if i < k - 3:
            axes.append(np.linspace(0.0, math.pi, count))
        else:
            axes.append(2 * math.pi * np.arange(count) / count)
    return [SphereAngles(tuple(float(axes[i][j]) for i, j in enumerate(idx)))
            for idx in np.ndindex(*[len(a) for a in axes])]


@dataclass
class Check:
    name: str
    tolerance: float
    max_residual: float = 0.0
    samples: int = 0
    failures: int = 0
    extra: dict = field(default_factory=dict)

    def record(self, residual, ok=None):
        residual = float(residual)
        self.samples += 1
        self.max_residual = max(self.max_residual, residual)
        if ok is None:
            ok = residual <= self.tolerance
        if not ok:
            self.failures += 1

    @property
    def passed(self):
        return self.failures == 0

    def to_dict(self):
        d = {"passed": self.passed, "max_residual": self.max_residual,
             "tolerance": self.tolerance, "samples": self.samples, "failures": self.failures}
        d.update(self.extra)
        return d


def _point_task(args):
    spec, u, t, xi, tol = args
    try:
        return _point_checks(spec, u, t, xi, tol)
    except LightconeError as exc:
        return {"error": f"u={list(u)}, t={t}: {exc}"}


def _point_checks(spec, u, t, xi, tol):
    out = {}
    out["weingarten"] = weingarten_residuals(spec, u, t, xi, step=tol["fd_step"])
    pe, frame, xv, cd = curvature_at(spec, u, t, xi)
    k = spec.k
    M = big_shape_matrix(cd, k)
    listed = np.sort(big_shape_spectrum(cd, k))
    eig = np.sort(np.linalg.eigvals(M).real)
    out["spectrum"] = float(np.max(np.abs(eig - listed))) / (1.0 + float(np.max(np.abs(listed))))
    out["spectrum_exact"] = bool(np.all(big_shape_spectrum(cd, k)[spec.s:] == -1.0))

    he = _height_from_pe(pe, cd.LG_normalized)
    target = cd.h / cd.ell0
    out["grad"] = float(np.max(np.abs(he.grad_u)))
    out["hess"] = float(np.max(np.abs(he.hess_u - target)))
    out["hess_opposite"] = float(np.max(np.abs(he.hess_u + target)))

    ctol = tol["classification"]
    cls = classify_point(cd, ctol * (1.0 + float(np.linalg.norm(cd.h))))
    hess_scale = (1.0 + float(np.linalg.norm(he.hess_u))) ** spec.s
    det_zero = abs(he.det_hess) <= ctol * hess_scale
    out["parabolic_agree"] = bool(cls.parabolic == det_zero)
    rank_zero = _rank(he.hess_u, ctol) == 0
    out["flat_agree"] = bool(cls.flat_umbilical == rank_zero)

    v = pedal_vector(pe, cd)
    scale = max(1.0, float(np.max(np.abs(pe.position))))
    if abs(v[0]) <= tol["degenerate"] * scale:
        out["sigma"] = None
        out["rank"] = None
    else:
        ok, res = on_sigma_star(spec, u, t, v, math.inf)
        out["sigma"] = res
        if res <= tol["sigma_star"]:
            sv = np.linalg.svd(morse_matrix(spec, u, t, v), compute_uv=False)
            out["rank"] = int(np.sum(sv >= tol["morse_rank"] * sv[0])) if sv[0] > 0 else 0
        else:
            out["rank"] = None
    return out


def verify(spec, u_counts=None, t_count=5, xi_count=4, tolerances=None, workers=None) -> dict:
    """Run every residual suite; returns a JSON-ready report with per-check pass/fail."""
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    if u_counts is None:
        u_counts = (worldsheet.DEFAULT_GRID,) * spec.s
    u_axes = [spec.u_axis(i, c) for i, c in enumerate(u_counts)]
    t_values = spec.t_axis(t_count)
    xis = sphere_samples(spec.k, xi_count)
    tasks = []
    for t in t_values:
        for idx in np.ndindex(*[len(a) for a in u_axes]):
            u = tuple(float(u_axes[i][j]) for i, j in enumerate(idx))
            for xi in xis:
                tasks.append((spec, u, float(t), xi, tol))
    results = ordered_map(_point_task, tasks, workers)

    checks = {name: Check(name, t_) for name, t_ in [
        ("weingarten", tol["weingarten"]),
        ("normalized_weingarten", tol["weingarten"]),
        ("h_formulas", tol["weingarten"]),
        ("big_shape_spectrum", tol["spectrum"]),
        ("height_criticality", tol["height"]),
        ("height_hessian_identity", tol["height"]),
        ("parabolic_equivalence", 0.0),
        ("flat_umbilical_equivalence", 0.0),
        ("pedal_zero_set", tol["sigma_star"]),
        ("morse_family_rank", 0.0),
    ]}
    errors = []
    opposite = 0.0
    skipped = 0
    for r in results:
        if "error" in r:
            errors.append(r["error"])
            continue
        for key in ("weingarten", "normalized_weingarten", "h_formulas"):
            checks[key].record(r["weingarten"][key])
        checks["big_shape_spectrum"].record(
            r["spectrum"], r["spectrum"] <= tol["spectrum"] and r["spectrum_exact"])
        checks["height_criticality"].record(r["grad"])
        checks["height_hessian_identity"].record(r["hess"])
        opposite = max(opposite, r["hess_opposite"])
        checks["parabolic_equivalence"].record(0.0 if r["parabolic_agree"] else 1.0)
        checks["flat_umbilical_equivalence"].record(0.0 if r["flat_agree"] else 1.0)
        if r["sigma"] is None:
            skipped += 1
            continue
        checks["pedal_zero_set"].record(r["sigma"])
        if r["rank"] is not None:
            checks["morse_family_rank"].record(abs(r["rank"] - (spec.s + 1)))
    checks["height_hessian_identity"].extra["max_residual_opposite_sign"] = opposite
    checks["pedal_zero_set"].extra["skipped_vertex_samples"] = skipped
    checks["morse_family_rank"].extra["expected_rank"] = spec.s + 1
    checks["big_shape_spectrum"].extra["fiber_eigenvalue"] = -1.0

    hp = Check("lightlike_hyperplane_equivalence", tol["hyperplane"])
    slices = []
    u_counts_c = tuple(u_counts)
    for t in t_values:
        for xi in xis:
            rep = gauss_map_constancy(spec, float(t), xi, u_counts_c, tol["constancy"])
            # constant Gauss map <=> contained in HP(v, c) <=> h == 0 on the slice
            flat = rep.max_abs_h <= tol["flat"]
            if rep.constant:
                ok = rep.max_residual <= tol["hyperplane"] and flat
                hp.record(rep.max_residual, ok)
            else:
                hp.record(0.0, not flat)
            slices.append({"t": float(t), "xi": _xi_label(xi), "constant": rep.constant,
                           "angular_spread": rep.spread, "flat": flat})
    hp.extra["slices"] = slices
    checks[hp.name] = hp

    for c in checks.values():
        if c.samples == 0 and errors:
            c.failures += 1
    failed = sorted(name for name, c in checks.items() if not c.passed)
    return {
        "worldsheet": spec.name,
        "grid": {"u": list(u_counts), "t": int(t_count), "xi": len(xis)},
        "tolerances": {k: v for k, v in tol.items() if v is not None},
        "checks": {name: c.to_dict() for name, c in sorted(checks.items())},
        "errors": errors,
        "failed": failed + (["evaluation"] if errors else []),
        "passed": not failed and not errors,
    }


def _xi_label(xi):
    return list(xi.angles) if xi.angles else xi.sign
