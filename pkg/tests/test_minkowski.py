import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcsheet.errors import DomainError, InputError
from lcsheet.minkowski import (CausalClass, LightlikeHyperplane, causal_class, det,
                               hyperplane_residual, is_lightlike, lorentz_norm,
                               project_to_lightcone_sphere, pseudo_product, wedge)


def test_pseudo_product_examples():
    assert pseudo_product([1, 0, 0], [1, 0, 0]) == -1
    assert pseudo_product([1, 1, 0], [1, 1, 0]) == 0
    assert pseudo_product([1, 2, 3], [4, 5, 6]) == 24


def test_pseudo_product_dimension_mismatch():
    with pytest.raises(InputError):
        pseudo_product([1, 0, 0], [1, 0, 0, 0])


@pytest.mark.parametrize("x, cls", [
    ([1, 0, 0], CausalClass.TIMELIKE),
    ([1, 1, 0], CausalClass.LIGHTLIKE),
    ([0, 2, 1], CausalClass.SPACELIKE),
    ([0, 0, 0], CausalClass.ZERO),
])
def test_causal_class(x, cls):
    assert causal_class(x) is cls


def test_lorentz_norm():
    assert lorentz_norm([1, 0, 0]) == 1
    assert lorentz_norm([3, 5, 0]) == pytest.approx(4)
    assert lorentz_norm([1, 1, 0]) == 0


def test_wedge_examples():
    np.testing.assert_allclose(wedge([0, 1, 0], [0, 0, 1]), [-1, 0, 0])
    np.testing.assert_allclose(wedge([0, 1, 2], [0, 2, 4]), [0, 0, 0])
    with pytest.raises(InputError):
        wedge([0, 1, 0])


def test_det_matches_numpy():
    rng = np.random.default_rng(1)
    for m in range(1, 7):
        a = rng.normal(size=(m, m))
        assert det(a) == pytest.approx(np.linalg.det(a), rel=1e-10, abs=1e-12)
    assert det(np.zeros((3, 3))) == 0.0


def test_wedge_pseudo_orthogonal():
    rng = np.random.default_rng(2)
    for dim in (3, 4, 5, 6):
        xs = rng.normal(size=(dim - 1, dim))
        w = wedge(*xs)
        for x in xs:
            assert abs(pseudo_product(x, w)) <= 1e-10 * (1 + np.abs(w).max())


def test_projection_examples():
    np.testing.assert_allclose(project_to_lightcone_sphere([2, 2, 0]), [1, 1, 0])
    np.testing.assert_allclose(project_to_lightcone_sphere([-3, 0, 3]), [1, 0, -1])
    with pytest.raises(DomainError):
        project_to_lightcone_sphere([0, 1, 1])
    with pytest.raises(DomainError):
        project_to_lightcone_sphere([1, 2, 0])


def test_hyperplane_residual_examples():
    hp = LightlikeHyperplane([1, 1, 0], 0)
    assert hyperplane_residual(hp, [1, 1, 5]) == 0
    assert hyperplane_residual(LightlikeHyperplane([1, 1, 0], 2), [0, 2, 0]) == 0
    # -(1)(1) + 0 - 0
    assert hyperplane_residual(hp, [1, 0, 0]) == -1


def test_hyperplane_rejects_non_lightlike_normal():
    with pytest.raises(DomainError):
        LightlikeHyperplane([1, 0, 0], 0)


vec3 = st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3)


@settings(max_examples=200, deadline=None)
@given(vec3, vec3, vec3, st.floats(-10, 10), st.floats(-10, 10))
def test_bilinear_symmetric(x, y, z, a, b):
    x, y, z = map(np.array, (x, y, z))
    lhs = pseudo_product(a * x + b * y, z)
    rhs = a * pseudo_product(x, z) + b * pseudo_product(y, z)
    scale = 1 + np.abs(a * x).sum() * np.abs(z).sum() + np.abs(b * y).sum() * np.abs(z).sum()
    assert abs(lhs - rhs) <= 1e-12 * scale
    assert pseudo_product(x, y) == pseudo_product(y, x)


@settings(max_examples=200, deadline=None)
@given(vec3, st.floats(1e-3, 1e3), st.sampled_from([1, -1]))
def test_causal_class_scale_invariant(x, lam, sign):
    x = np.array(x)
    if np.any(x) and not np.any(lam * x):
        return  # underflow to the zero vector
    assert causal_class(sign * lam * x) is causal_class(x)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=2, max_size=5), st.floats(0.1, 50),
       st.sampled_from([1, -1]))
def test_projection_lands_on_lightcone(spatial, x0, sign):
    sp = np.array(spatial)
    if np.linalg.norm(sp) < 1e-6:
        return
    x = np.concatenate([[sign * x0], x0 * sp / np.linalg.norm(sp)])
    p = project_to_lightcone_sphere(x)
    assert p[0] == 1.0
    assert is_lightlike(p)
    assert causal_class(p) is CausalClass.LIGHTLIKE
