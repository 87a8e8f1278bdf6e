import math

import numpy as np
import pytest

from lcsheet.errors import DegeneracyError, InputError
from lcsheet.fixtures import cylinder, fixture, flat, sphere
from lcsheet.worldsheet import WorldSheetSpec, evaluate, sample_axis, validate


def test_cylinder_point():
    pe = evaluate(cylinder(2.0), [0.0], 0.0)
    np.testing.assert_allclose(pe.position, [0, 2, 0], atol=1e-15)
    np.testing.assert_allclose(pe.Xu[0], [0, 0, 2], atol=1e-15)
    np.testing.assert_allclose(pe.Xt, [1, 0, 0])
    np.testing.assert_allclose(pe.g, [[4.0]])
    assert pe.det_g == pytest.approx(4.0)
    np.testing.assert_allclose(pe.g @ pe.g_inv, np.eye(1), atol=1e-12)


def test_flat_point():
    pe = evaluate(flat(0.5, 0.0), [0.0], 0.0)
    np.testing.assert_allclose(pe.Xt, [1, 0.5, 0])
    np.testing.assert_allclose(pe.Xu[0], [0, 0, 1])
    np.testing.assert_allclose(pe.g, [[1.0]])


def test_sphere_point():
    pe = evaluate(sphere(2.0), [math.pi / 2, 0.0], 0.0)
    np.testing.assert_allclose(pe.g, np.diag([4.0, 4.0]), atol=1e-12)
    assert pe.Xuu.shape == (2, 2, 4)
    np.testing.assert_allclose(pe.Xuu[0, 1], pe.Xuu[1, 0])


def test_validate_cylinder_passes():
    rep = validate(cylinder(2.0))
    assert rep.passed and rep.points == 33 * 33


def test_validate_flat_timelike_failure_everywhere():
    rep = validate(flat(2.0), (9,), 9)
    assert not rep.passed
    assert rep.count("timelike") == rep.points == 81
    assert rep.to_dict()["failures"]["spacelike"] == 0


def test_validate_collinear_tangents():
    # X_u2 = X_u1 everywhere, so g is singular and the tangent vectors drop rank
    spec = WorldSheetSpec.from_strings(["t", "u1 + u2", "u1 + u2", "0"], 2,
                                       [(0, 1), (0, 1)], (0, 1))
    rep = validate(spec, (3, 3), 3)
    kinds = {v["check"] for v in rep.violations}
    assert "spacelike" in kinds and "immersion" in kinds
    with pytest.raises(DegeneracyError):
        evaluate(spec, [0.5, 0.5], 0.5)


def test_single_variable_spec_passes_metric():
    spec = WorldSheetSpec.from_strings(["t", "u1", "u1"], 1, [(0, 1)], (0, 1))
    pe = evaluate(spec, [0.2], 0.1)
    assert pe.g[0, 0] == pytest.approx(2.0)
    assert validate(spec, (5,), 5).passed


def test_spec_rejects_bad_dimensions():
    with pytest.raises(InputError):
        WorldSheetSpec.from_strings(["t", "u1"], 1, [(0, 1)], (0, 1))
    with pytest.raises(InputError):
        WorldSheetSpec.from_strings(["t", "u1", "u2"], 2, [(0, 1), (0, 1)], (0, 1))


def test_periodic_axis_is_half_open():
    a = sample_axis(0, 2 * math.pi, 4, periodic=True)
    np.testing.assert_allclose(a, [0, math.pi / 2, math.pi, 3 * math.pi / 2])
    assert sample_axis(-1, 1, 3)[-1] == 1.0


def test_evaluate_is_deterministic():
    spec = fixture("sph5")
    a = evaluate(spec, [0.7, 1.1], 0.3)
    b = evaluate(spec, [0.7, 1.1], 0.3)
    assert np.array_equal(a.Xuu, b.Xuu) and np.array_equal(a.g, b.g)


def test_tangent_gram_signature_on_fixtures():
    for name in ("cyl", "flt", "sph", "cylline", "sph5"):
        spec = fixture(name)
        rng = np.random.default_rng(0)
        for _ in range(10):
            u = [rng.uniform(*d) for d in spec.u_domain]
            ev = np.linalg.eigvalsh(evaluate(spec, u, rng.uniform(-1, 1)).tangent_gram())
            assert (ev < 0).sum() == 1 and (ev > 0).sum() == spec.s
