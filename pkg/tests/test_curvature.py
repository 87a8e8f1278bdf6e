import math

import numpy as np
import pytest

from lcsheet.curvature import (big_shape_matrix, big_shape_spectrum, classify_point,
                               curvature_at, curvature_grid, gauss_map_constancy,
                               lightcone_gauss, principal_curvatures, second_fundamental,
                               shape_and_curvatures, weingarten_residuals)
from lcsheet.fixtures import cylinder, cylinder_line, fixture, flat, sphere
from lcsheet.frames import NormalFrame, SphereAngles, normal_frame
from lcsheet.minkowski import CausalClass, causal_class, project_to_lightcone_sphere
from lcsheet.worldsheet import evaluate

PLUS, MINUS = SphereAngles(sign=1), SphereAngles(sign=-1)


def test_lightcone_gauss_examples():
    _, _, _, cd = curvature_at(cylinder(2.0), [0.0], 0.0, PLUS)
    np.testing.assert_allclose(cd.LG, [1, 1, 0], atol=1e-15)
    assert cd.ell0 == pytest.approx(1.0)
    _, _, _, cd = curvature_at(flat(0.5), [0.3], 0.0, PLUS)
    np.testing.assert_allclose(cd.LG_normalized, [1, 1, 0], atol=1e-15)
    assert cd.ell0 == pytest.approx(math.sqrt(3))


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 5.0])
def test_cylinder_h_and_kappa(r):
    spec = cylinder(r)
    _, _, _, cd = curvature_at(spec, [1.1], 0.4, PLUS)
    np.testing.assert_allclose(cd.h, [[-r]], atol=1e-12)
    assert cd.kappas[0] == pytest.approx(-1 / r, abs=1e-12)
    _, _, _, cd = curvature_at(spec, [1.1], 0.4, MINUS)
    np.testing.assert_allclose(cd.h, [[r]], atol=1e-12)
    assert cd.K_ell == pytest.approx(1 / r, abs=1e-12)


def test_sphere_curvatures():
    spec = sphere(2.0)
    pe = evaluate(spec, [1.0, 2.0], 0.0)
    radial = np.concatenate([[0.0], pe.position[1:] / 2.0])
    _, _, _, cd = curvature_at(spec, pe.u, pe.t, radial, pe=pe)
    np.testing.assert_allclose(cd.kappas, [-0.5, -0.5], atol=1e-12)
    assert cd.K_ell == pytest.approx(0.25, abs=1e-12)
    _, _, _, cd = curvature_at(spec, pe.u, pe.t, -radial, pe=pe)
    np.testing.assert_allclose(cd.kappas, [0.5, 0.5], atol=1e-12)


def test_flat_zero():
    _, _, _, cd = curvature_at(flat(0.5), [0.1], 0.2, PLUS)
    assert np.all(cd.h == 0) and cd.K_ell == 0 and np.all(cd.kappas == 0)


def test_curvature_record_invariants():
    rng = np.random.default_rng(5)
    for name in ("cyl", "flt", "sph", "cylline", "sph5"):
        spec = fixture(name)
        for _ in range(20):
            u = [rng.uniform(*d) for d in spec.u_domain]
            xi = SphereAngles(tuple(rng.uniform(0, 6, spec.k - 2)), int(rng.choice([1, -1])))
            pe, _, _, cd = curvature_at(spec, u, rng.uniform(-1, 1), xi)
            assert causal_class(cd.LG) is CausalClass.LIGHTLIKE
            np.testing.assert_allclose(cd.LG_normalized, project_to_lightcone_sphere(cd.LG))
            assert cd.ell0 > 0
            assert cd.K_ell == pytest.approx(np.linalg.det(cd.shape), rel=1e-9, abs=1e-12)
            np.testing.assert_allclose(np.sort(np.linalg.eigvals(cd.shape).real), cd.kappas,
                                       atol=1e-9)
            np.testing.assert_allclose(cd.kappas_normalized, cd.kappas / cd.ell0, rtol=1e-12)
            assert cd.K_ell_normalized == pytest.approx(cd.K_ell / cd.ell0 ** spec.s,
                                                        rel=1e-12, abs=1e-15)


def test_principal_curvatures_nonsymmetric_metric_case():
    h = np.array([[1.0, 0.2], [0.2, -0.5]])
    g = np.array([[2.0, 0.3], [0.3, 1.0]])
    expect = np.sort(np.linalg.eigvals(h @ np.linalg.inv(g)).real)
    np.testing.assert_allclose(principal_curvatures(h, g), expect, atol=1e-12)


def test_classification():
    _, _, _, cd = curvature_at(flat(0.5), [0.0], 0.0)
    c = classify_point(cd)
    assert c.parabolic and c.umbilical and c.flat_umbilical
    _, _, _, cd = curvature_at(sphere(2.0), [1.0, 1.0], 0.0)
    c = classify_point(cd)
    assert c.umbilical and not c.parabolic and not c.flat_umbilical
    _, _, _, cd = curvature_at(cylinder_line(2.0), [0.4, 0.2], 0.0)
    np.testing.assert_allclose(cd.kappas, [-0.5, 0.0], atol=1e-12)
    c = classify_point(cd)
    assert c.parabolic and not c.umbilical


def test_gauge_invariance_k3():
    spec = fixture("sph5")
    pe = evaluate(spec, [0.8, 0.5], 0.3)
    fr = normal_frame(pe)
    xi = 0.6 * fr.nS[0] + 0.8 * fr.nS[1]
    th = 0.9
    R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    rotated = NormalFrame(fr.nT, R @ fr.nS)
    a = curvature_at(spec, pe.u, pe.t, xi, frame=fr, pe=pe)[3]
    b = curvature_at(spec, pe.u, pe.t, xi, frame=rotated, pe=pe)[3]
    np.testing.assert_allclose(a.h, b.h, atol=1e-10)
    np.testing.assert_allclose(a.kappas, b.kappas, atol=1e-10)
    assert abs(a.K_ell - b.K_ell) <= 1e-10


def test_second_fundamental_symmetric():
    pe = evaluate(fixture("sph5"), [1.0, 0.3], 0.1)
    LG, _, ell0 = lightcone_gauss(normal_frame(pe), normal_frame(pe).nS[1])
    h = second_fundamental(pe, LG)
    assert np.array_equal(h, h.T)
    assert shape_and_curvatures(pe, h, LG).ell0 == ell0


@pytest.mark.parametrize("name", ["cyl", "flt", "sph", "cylline", "sph5"])
def test_weingarten_residuals(name):
    spec = fixture(name)
    rng = np.random.default_rng(8)
    for _ in range(10):
        u = [rng.uniform(*d) for d in spec.u_domain]
        xi = SphereAngles(tuple(rng.uniform(0, 6, spec.k - 2)), int(rng.choice([1, -1])))
        res = weingarten_residuals(spec, u, rng.uniform(-1, 1), xi)
        assert max(res.values()) <= 1e-5


def test_big_shape_spectrum_block_form():
    spec = fixture("sph5")
    _, _, _, cd = curvature_at(spec, [1.0, 0.7], 0.2, SphereAngles((0.4,)))
    M = big_shape_matrix(cd, spec.k)
    spec_list = big_shape_spectrum(cd, spec.k)
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(M).real), np.sort(spec_list),
                               atol=1e-12)
    assert spec_list[-1] == -1.0
    assert np.all(M[:2, 2:] == 0)
    # k = 2: the spectrum is just the principal curvatures
    _, _, _, cd = curvature_at(cylinder(2.0), [0.0], 0.0)
    np.testing.assert_array_equal(big_shape_spectrum(cd, 2), cd.kappas)


def test_gauss_map_constancy_flat():
    rep = gauss_map_constancy(flat(0.5), 0.0)
    assert rep.constant
    np.testing.assert_allclose(rep.v, [1, 1, 0], atol=1e-12)
    assert rep.max_residual <= 1e-9
    assert rep.max_abs_K <= 1e-10 and rep.max_abs_h == 0.0


def test_gauss_map_constancy_cylinder():
    rep = gauss_map_constancy(cylinder(2.0), 0.0)
    assert not rep.constant
    assert rep.spread >= 1.0
    assert rep.to_dict()["normal"] is None


def test_curvature_grid_rows():
    rows = curvature_grid(cylinder(2.0), (5,), 3, [PLUS, MINUS])
    assert len(rows) == 5 * 3 * 2
    for pe, xi, cd, cls in rows:
        assert cd.kappas[0] == pytest.approx(-0.5 * xi.sign, abs=1e-12)
