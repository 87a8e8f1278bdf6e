"""Second-order forward-mode jets.

A :class:`Jet2` carries the value, gradient and Hessian of a scalar with
respect to a fixed list of variables.  Arithmetic on jets propagates all
three exactly (up to rounding), so evaluating an expression tree on jets
yields its exact first and second partials.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import EvaluationError
from .expr import Node, evaluate, unparse


class Jet2:
    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = float(value)
        self.grad = grad
        self.hess = hess

    @classmethod
    def constant(cls, value, nvars):
        return cls(value, np.zeros(nvars), np.zeros((nvars, nvars)))

    @classmethod
    def variable(cls, value, index, nvars):
        g = np.zeros(nvars)
        g[index] = 1.0
        return cls(value, g, np.zeros((nvars, nvars)))

    @property
    def nvars(self):
        return self.grad.shape[0]

    def __repr__(self):
        return f"Jet2(value={self.value!r}, grad={self.grad!r}, hess={self.hess!r})"

    def _lift(self, other):
        if isinstance(other, Jet2):
            return other
        return Jet2.constant(other, self.nvars)

    def __add__(self, other):
        o = self._lift(other)
        return Jet2(self.value + o.value, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Jet2(self.value - o.value, self.grad - o.grad, self.hess - o.hess)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            c = float(other)
            return Jet2(c * self.value, c * self.grad, c * self.hess)
        a, b = self, other
        cross = np.outer(a.grad, b.grad)
        return Jet2(a.value * b.value,
                    a.value * b.grad + b.value * a.grad,
                    a.value * b.hess + b.value * a.hess + cross + cross.T)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            return self * (1.0 / float(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, n):
        n = int(n)
        x = self.value
        if n == 0:
            return Jet2.constant(1.0, self.nvars)
        if x == 0.0 and n < 0:
            raise EvaluationError("zero to a negative power")
        d1 = n * x ** (n - 1)
        d2 = n * (n - 1) * x ** (n - 2) if n not in (0, 1) else 0.0
        return self.chain(x ** n, d1, d2)

    def chain(self, f, d1, d2):
        """Compose with a scalar function given f, f' and f'' at ``self.value``."""
        return Jet2(f, d1 * self.grad,
                    d1 * self.hess + d2 * np.outer(self.grad, self.grad))

    def reciprocal(self):
        x = self.value
        if x == 0.0:
            raise EvaluationError("division by zero")
        return self.chain(1.0 / x, -1.0 / x**2, 2.0 / x**3)


def sin(a: Jet2) -> Jet2:
    s, c = math.sin(a.value), math.cos(a.value)
    return a.chain(s, c, -s)


def cos(a: Jet2) -> Jet2:
    s, c = math.sin(a.value), math.cos(a.value)
    return a.chain(c, -s, -c)


def exp(a: Jet2) -> Jet2:
    try:
        e = math.exp(a.value)
    except OverflowError:
        raise EvaluationError("exp overflow") from None
    return a.chain(e, e, e)


def log(a: Jet2) -> Jet2:
    x = a.value
    if x <= 0.0:
        raise EvaluationError("log of nonpositive value")
    return a.chain(math.log(x), 1.0 / x, -1.0 / x**2)


def sqrt(a: Jet2) -> Jet2:
    x = a.value
    # derivatives blow up at 0, so 0 is outside the domain as well
    if x <= 0.0:
        raise EvaluationError("sqrt of nonpositive value (derivative undefined)")
    r = math.sqrt(x)
    return a.chain(r, 0.5 / r, -0.25 / (r * x))


_UNARY = {"sin": sin, "cos": cos, "exp": exp, "log": log, "sqrt": sqrt}


def eval_jet2(node: Node, point) -> Jet2:
    """Value, gradient and Hessian of ``node`` at ``point`` (one entry per chart variable)."""
    point = np.asarray(point, dtype=float)
    m = point.shape[0]
    return _eval(node, point, m)


def _eval(node, point, m):
    k = node.kind
    if k == "const":
        return Jet2.constant(node.value, m)
    if k == "var":
        return Jet2.variable(point[node.value], node.value, m)
    try:
        if k == "neg":
            return -_eval(node.args[0], point, m)
        if k == "pow":
            return _eval(node.args[0], point, m) ** node.value
        if k in _UNARY:
            return _UNARY[k](_eval(node.args[0], point, m))
        a = _eval(node.args[0], point, m)
        b = _eval(node.args[1], point, m)
        if k == "add":
            return a + b
        if k == "sub":
            return a - b
        if k == "mul":
            return a * b
        if k == "div":
            return a / b
    except EvaluationError as exc:
        if exc.subexpr is None:
            raise EvaluationError(str(exc), unparse(node)) from None
        raise
    raise ValueError(f"unknown node kind {k!r}")


def finite_diff_oracle(node: Node, point, step: float = 1e-4) -> Jet2:
    """Central-difference value, gradient and Hessian.

    Uses plain float evaluation only, so it is independent of the jet path.
    Intended for tests.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    x = np.asarray(point, dtype=float)
    m = x.shape[0]
    f0 = evaluate(node, x)
    h = step
    basis = np.eye(m) * h
    fp = np.array([evaluate(node, x + basis[i]) for i in range(m)])
    fm = np.array([evaluate(node, x - basis[i]) for i in range(m)])
    grad = (fp - fm) / (2 * h)
    hess = np.empty((m, m))
    for i in range(m):
        hess[i, i] = (fp[i] - 2 * f0 + fm[i]) / h**2
        for j in range(i + 1, m):
            fpp = evaluate(node, x + basis[i] + basis[j])
            fpm = evaluate(node, x + basis[i] - basis[j])
            fmp = evaluate(node, x - basis[i] + basis[j])
            fmm = evaluate(node, x - basis[i] - basis[j])
            hess[i, j] = hess[j, i] = (fpp - fpm - fmp + fmm) / (4 * h**2)
    return Jet2(f0, grad, hess)
