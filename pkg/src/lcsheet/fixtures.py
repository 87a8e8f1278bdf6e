"""Built-in world sheets used by the tests and the ``--fixture`` CLI option.

Names accept parameter overrides, e.g. ``cyl:r=0.5`` or ``flt:a=2,c=1``.
"""
from __future__ import annotations

import math

from .errors import ConfigError
from .worldsheet import WorldSheetSpec

TWO_PI = 2 * math.pi


def cylinder(r=2.0, t_domain=(-1.0, 1.0)):
    """Static round cylinder X = (t, r cos u, r sin u) in R^3_1."""
    return WorldSheetSpec.from_strings(
        ["t", "r*cos(u1)", "r*sin(u1)"], 1, [(0.0, TWO_PI)], t_domain,
        periodic=[True], params={"r": r}, name=f"cyl(r={r:g})")


def flat(a=0.5, c=0.0, t_domain=(-1.0, 1.0)):
    """X = (t, a t + c, u): each S_t is a line inside a lightlike plane."""
    return WorldSheetSpec.from_strings(
        ["t", "a*t + c", "u1"], 1, [(-1.0, 1.0)], t_domain,
        params={"a": a, "c": c}, name=f"flt(a={a:g},c={c:g})")


def sphere(R=2.0, t_domain=(-1.0, 1.0)):
    """Static round 2-sphere of radius R in R^4_1 (poles excluded)."""
    return WorldSheetSpec.from_strings(
        ["t", "R*sin(u1)*cos(u2)", "R*sin(u1)*sin(u2)", "R*cos(u1)"], 2,
        [(0.3, math.pi - 0.3), (0.0, TWO_PI)], t_domain,
        periodic=[False, True], params={"R": R}, name=f"sph(R={R:g})")


def cylinder_line(r=2.0, t_domain=(-1.0, 1.0)):
    """Product of a circle and a line in R^4_1; parabolic, not umbilical."""
    return WorldSheetSpec.from_strings(
        ["t", "r*cos(u1)", "r*sin(u1)", "u2"], 2, [(0.0, TWO_PI), (-1.0, 1.0)],
        t_domain, periodic=[True, False], params={"r": r}, name=f"cylline(r={r:g})")


def tilted_sphere(R=2.0, b=0.5, c=0.3, t_domain=(-1.0, 1.0)):
    """A moving, tilted 2-sphere in R^5_1 (s = 2, k = 3)."""
    return WorldSheetSpec.from_strings(
        ["t", "R*sin(u1)*cos(u2)", "R*sin(u1)*sin(u2)", "R*cos(u1)",
         "b*sin(u1)*cos(u2) + c*t"], 2,
        [(0.3, math.pi - 0.3), (0.0, TWO_PI)], t_domain,
        periodic=[False, True], params={"R": R, "b": b, "c": c},
        name=f"sph5(R={R:g},b={b:g},c={c:g})")


FIXTURES = {
    "cyl": cylinder,
    "flt": flat,
    "sph": sphere,
    "cylline": cylinder_line,
    "sph5": tilted_sphere,
}


def fixture(name: str, **overrides) -> WorldSheetSpec:
    """Look up ``name[:key=val,...]`` in the registry."""
    base, _, arg = name.partition(":")
    if base not in FIXTURES:
        raise ConfigError(f"unknown fixture {base!r}; choose from {sorted(FIXTURES)}")
    kwargs = {}
    for item in filter(None, arg.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ConfigError(f"bad fixture parameter {item!r} (expected key=value)")
        try:
            kwargs[key.strip()] = float(val)
        except ValueError:
            raise ConfigError(f"fixture parameter {key!r} is not a number") from None
    kwargs.update(overrides)
    try:
        return FIXTURES[base](**kwargs)
    except TypeError as exc:
        raise ConfigError(f"fixture {base!r}: {exc}") from None
