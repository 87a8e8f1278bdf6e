import math

import numpy as np
import pytest
from scipy.linalg import null_space

from lcsheet.fixtures import cylinder, fixture, flat, sphere
from lcsheet.frames import (SphereAngles, normal_frame, resolve_xi, timelike_normal,
                            xi_from_angles, xi_residuals)
from lcsheet.minkowski import metric
from lcsheet.worldsheet import evaluate

FIXTURES = ("cyl", "flt", "sph", "cylline", "sph5")


def test_cylinder_frame():
    pe = evaluate(cylinder(2.0), [0.0], 0.3)
    np.testing.assert_allclose(timelike_normal(pe), [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(normal_frame(pe).nS[0], [0, 1, 0], atol=1e-15)


def test_flat_frame():
    pe = evaluate(flat(0.5), [0.2], 0.0)
    np.testing.assert_allclose(timelike_normal(pe), [2 / math.sqrt(3), 1 / math.sqrt(3), 0])
    nS = normal_frame(pe).nS[0]
    np.testing.assert_allclose(nS, [1 / math.sqrt(3), 2 / math.sqrt(3), 0], atol=1e-15)


def test_flat_frame_against_null_space_oracle():
    pe = evaluate(flat(0.5), [0.2], 0.0)
    fr = normal_frame(pe)
    G = metric(3)
    # oracle: vectors orthogonal (pseudo) to X_u and nT
    N = null_space(np.vstack([pe.Xu[0], fr.nT]) @ G)[:, 0]
    N = N / math.sqrt(N @ G @ N)
    assert abs(abs(N @ G @ fr.nS[0]) - 1.0) <= 1e-12


def test_sphere_frame():
    pe = evaluate(sphere(2.0), [math.pi / 2, 0.0], 0.0)
    np.testing.assert_allclose(normal_frame(pe).nS[0], [0, 1, 0, 0], atol=1e-15)


def test_past_directed_candidate_is_flipped():
    # X_t points to the past; n^T must still be future directed
    from lcsheet.worldsheet import WorldSheetSpec
    spec = WorldSheetSpec.from_strings(["-t", "2*cos(u1)", "2*sin(u1)"], 1,
                                       [(0, 6)], (-1, 1))
    nT = timelike_normal(evaluate(spec, [0.4], 0.0))
    np.testing.assert_allclose(nT, [1, 0, 0], atol=1e-15)


@pytest.mark.parametrize("name", FIXTURES)
def test_frame_invariants(name):
    spec = fixture(name)
    rng = np.random.default_rng(11)
    for _ in range(25):
        u = [rng.uniform(*d) for d in spec.u_domain]
        pe = evaluate(spec, u, rng.uniform(-1, 1))
        fr = normal_frame(pe)
        res = fr.residuals(pe)
        assert res["future"] == 0.0
        assert max(v for k, v in res.items() if k != "future") <= 1e-9
        assert fr.k == spec.k


def test_xi_from_angles():
    pe = evaluate(fixture("sph5"), [0.9, 0.4], 0.2)
    fr = normal_frame(pe)
    np.testing.assert_allclose(xi_from_angles(fr, SphereAngles((0.0,))), fr.nS[0])
    th = 0.7
    xi = xi_from_angles(fr, SphereAngles((th,)))
    np.testing.assert_allclose(xi, math.cos(th) * fr.nS[0] + math.sin(th) * fr.nS[1])
    rng = np.random.default_rng(3)
    for _ in range(20):
        xi = xi_from_angles(fr, SphereAngles((rng.uniform(0, 2 * math.pi),)))
        assert max(xi_residuals(fr, xi, pe).values()) <= 1e-12


def test_sign_and_resolve():
    pe = evaluate(cylinder(2.0), [0.0], 0.0)
    fr = normal_frame(pe)
    np.testing.assert_allclose(xi_from_angles(fr, SphereAngles(sign=-1)), -fr.nS[0])
    np.testing.assert_allclose(resolve_xi(fr, -1), -fr.nS[0])
    np.testing.assert_allclose(resolve_xi(fr, [0, 1, 0]), [0, 1, 0])


def test_frames_continuous_along_path():
    for name, path in (("cyl", lambda s: ([s], 0.2)),
                       ("sph", lambda s: ([0.5 + 0.3 * s, s], 0.2)),
                       ("sph5", lambda s: ([0.5 + 0.3 * s, s], 0.2))):
        spec = fixture(name)
        steps = np.linspace(0, 2 * math.pi, 400)
        prev = None
        worst = 0.0
        for s in steps:
            u, t = path(s)
            fr = normal_frame(evaluate(spec, u, t), None if prev is None else prev.nS)
            if prev is not None:
                worst = max(worst, float(np.abs(fr.nS - prev.nS).max()))
            prev = fr
        assert worst < 0.1, name
