"""World sheets X : U x I -> R^{n+1}_1 and their pointwise first-order data."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, InputError
from .expr import Node, parse_expr, variables
from .jets import eval_jet2
from .minkowski import metric

DEFAULT_GRID = 33


@dataclass(frozen=True)
class WorldSheetSpec:
    """Coordinate expressions of a world sheet plus its chart domain.

    ``coord_exprs[c]`` is the c-th Minkowski coordinate as a tree over the
    chart ``(u1, ..., us, t)``.  ``periodic[i]`` marks u-axis i as periodic,
    in which case its domain is sampled half-open.
    """

    coord_exprs: tuple
    s: int
    u_domain: tuple
    t_domain: tuple
    periodic: tuple = ()
    sources: tuple = ()
    name: str = "worldsheet"

    def __post_init__(self):
        dim = len(self.coord_exprs)
        if self.s < 1:
            raise InputError(f"s must be >= 1, got {self.s}")
        if dim < 3:
            raise InputError(f"ambient dimension must be >= 3, got {dim}")
        if dim - self.s < 2:
            raise InputError(f"k = n+1-s must be >= 2 (n+1={dim}, s={self.s})")
        if len(self.u_domain) != self.s:
            raise InputError(f"need {self.s} u-intervals, got {len(self.u_domain)}")
        periodic = tuple(self.periodic) or (False,) * self.s
        if len(periodic) != self.s:
            raise InputError(f"need {self.s} periodicity flags, got {len(periodic)}")
        object.__setattr__(self, "periodic", tuple(bool(p) for p in periodic))
        object.__setattr__(self, "u_domain",
                           tuple((float(a), float(b)) for a, b in self.u_domain))
        a, b = self.t_domain
        object.__setattr__(self, "t_domain", (float(a), float(b)))
        for lo, hi in self.u_domain + (self.t_domain,):
            if not lo <= hi:
                raise InputError(f"empty interval [{lo}, {hi}]")
        for e in self.coord_exprs:
            if not isinstance(e, Node):
                raise InputError("coordinate expressions must be parsed trees")
            if any(i > self.s for i in variables(e)):
                raise InputError("expression references an undeclared variable")

    @classmethod
    def from_strings(cls, coords, s, u_domain, t_domain, periodic=(), params=None,
                     name="worldsheet"):
        chart = chart_names(s)
        exprs = tuple(parse_expr(c, chart, params) for c in coords)
        return cls(exprs, s, tuple(u_domain), tuple(t_domain), tuple(periodic),
                   tuple(coords), name)

    @property
    def ambient_dim(self) -> int:
        return len(self.coord_exprs)

    @property
    def n(self) -> int:
        return self.ambient_dim - 1

    @property
    def k(self) -> int:
        return self.ambient_dim - self.s

    @property
    def chart(self):
        return chart_names(self.s)

    def u_axis(self, i, count):
        lo, hi = self.u_domain[i]
        return sample_axis(lo, hi, count, self.periodic[i])

    def t_axis(self, count):
        return sample_axis(*self.t_domain, count, False)


def chart_names(s):
    return [f"u{i + 1}" for i in range(s)] + ["t"]


def sample_axis(lo, hi, count, periodic=False):
    if count < 1:
        raise InputError("grid counts must be positive")
    if count == 1:
        return np.array([lo])
    if periodic:
        return lo + (hi - lo) * np.arange(count) / count
    return np.linspace(lo, hi, count)


@dataclass(frozen=True)
class PointEval:
    """Position, first and second u-partials, X_t and the metric at one chart point."""

    u: np.ndarray
    t: float
    position: np.ndarray
    Xt: np.ndarray
    Xu: np.ndarray          # (s, n+1)
    Xuu: np.ndarray         # (s, s, n+1)
    g: np.ndarray
    g_inv: np.ndarray
    det_g: float
    Xut: np.ndarray = field(default=None, repr=False)   # (s, n+1)

    @property
    def s(self):
        return self.Xu.shape[0]

    @property
    def dim(self):
        return self.position.shape[0]

    def tangent_gram(self) -> np.ndarray:
        """Gram matrix of (X_t, X_u1, ..., X_us) under the pseudo scalar product."""
        T = np.vstack([self.Xt, self.Xu])
        return T @ metric(self.dim) @ T.T


def _assemble(spec, u, t):
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if u.shape != (spec.s,):
        raise InputError(f"expected {spec.s} u-coordinates, got {u.shape}")
    point = np.append(u, float(t))
    jets = [eval_jet2(e, point) for e in spec.coord_exprs]
    s = spec.s
    position = np.array([j.value for j in jets])
    grads = np.array([j.grad for j in jets])           # (n+1, s+1)
    hess = np.array([j.hess for j in jets])            # (n+1, s+1, s+1)
    Xu = grads[:, :s].T.copy()
    Xt = grads[:, s].copy()
    Xuu = np.moveaxis(hess[:, :s, :s], 0, -1).copy()
    Xut = hess[:, :s, s].T.copy()
    G = metric(spec.ambient_dim)
    g = Xu @ G @ Xu.T
    g = 0.5 * (g + g.T)
    return u, float(t), position, Xt, Xu, Xuu, Xut, g


def evaluate(spec: WorldSheetSpec, u, t, det_tol: float = 1e-12) -> PointEval:
    """All first/second partials and the induced metric at (u, t).

    Raises DegeneracyError when det g is not positive.
    """
    u, t, position, Xt, Xu, Xuu, Xut, g = _assemble(spec, u, t)
    det_g = float(np.linalg.det(g))
    if not det_g > det_tol * max(1.0, float(np.max(np.abs(g)))) ** spec.s:
        raise DegeneracyError(f"singular or indefinite metric at u={u.tolist()}, t={t} "
                              f"(det g = {det_g:.3g})")
    g_inv = np.linalg.inv(g)
    return PointEval(u, t, position, Xt, Xu, Xuu, g, g_inv, det_g, Xut)


@dataclass
class ValidationReport:
    points: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def count(self, check):
        return sum(1 for v in self.violations if v["check"] == check)

    def to_dict(self):
        checks = ("spacelike", "timelike", "immersion", "evaluation")
        return {
            "passed": self.passed,
            "points": self.points,
            "failures": {c: self.count(c) for c in checks},
            "violations": self.violations,
        }


def check_point(spec, u, t, tol=1e-9):
    """Return a list of (check, detail) failures at a single chart point."""
    try:
        u, t, position, Xt, Xu, Xuu, Xut, g = _assemble(spec, u, t)
    except ArithmeticError as exc:
        return [("evaluation", str(exc))]
    out = []
    w = np.linalg.eigvalsh(g)
    if not w[0] > tol * max(1.0, float(np.max(np.abs(w)))):
        out.append(("spacelike", f"min eigenvalue of g = {w[0]:.6g}"))
    T = np.vstack([Xt, Xu])
    gram = T @ metric(spec.ambient_dim) @ T.T
    ev = np.linalg.eigvalsh(0.5 * (gram + gram.T))
    thr = tol * max(np.linalg.norm(gram, 2), 1e-300)
    neg = int(np.sum(ev < -thr))
    pos = int(np.sum(ev > thr))
    if not (neg == 1 and pos == spec.s):
        out.append(("timelike", f"tangent Gram eigenvalues {ev.tolist()}"))
    sv = np.linalg.svd(T, compute_uv=False)
    rank = int(np.sum(sv > tol * max(sv[0], 1e-300)))
    if rank < spec.s + 1:
        out.append(("immersion", f"rank {rank} < {spec.s + 1}"))
    return out


def grid_points(spec, u_counts, t_count):
    axes = [spec.u_axis(i, c) for i, c in enumerate(u_counts)]
    for t in spec.t_axis(t_count):
        for u in itertools.product(*axes):
            yield np.array(u), float(t)


def validate(spec: WorldSheetSpec, u_counts=None, t_count=DEFAULT_GRID,
             tol: float = 1e-9) -> ValidationReport:
    """Sample the chart domain and check the standing hypotheses at each point.

    (a) g positive definite, (b) the tangent Gram matrix of (X_t, X_u) has
    Lorentz signature, (c) the tangent vectors have full rank s+1.
    """
    if u_counts is None:
        u_counts = (DEFAULT_GRID,) * spec.s
    report = ValidationReport()
    for u, t in grid_points(spec, u_counts, t_count):
        report.points += 1
        for check, detail in check_point(spec, u, t, tol):
            report.violations.append({"check": check, "u": u.tolist(), "t": t,
                                      "detail": detail})
    return report
