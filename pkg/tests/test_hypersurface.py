import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahlercheck import ambient as A
from kahlercheck import hypersurface as H
from kahlercheck.errors import ParameterError

FLAT, CH, CP = A.flat(2), A.complex_hyperbolic(2), A.complex_projective(2)


def test_flat_unit_sphere_frame():
    s = H.sphere(FLAT, 1.0)
    p = np.array([0.6, 0.0, 0.0, 0.8])
    f = H.frame_at(s, p)
    assert np.allclose(f.shape, np.eye(3), atol=1e-12)
    assert float(f.H) == pytest.approx(3.0)
    assert float(f.alpha) == pytest.approx(1.0)
    assert float(f.H_b) == pytest.approx(2.0)
    assert complex(H.levi_form(f, 0, 0)).real == pytest.approx(2.0)


def test_ch_sphere_spectrum():
    a = 0.5
    s = H.sphere(CH, a)
    p = s.sample(1, 3)[0]
    spec = H.shape_spectrum(s, p)
    assert spec.t_eigenvalue == pytest.approx(2 / math.tanh(2 * a), abs=1e-10)
    # 2coth(1) = 2.626071 (the closed form; see README)
    assert spec.t_eigenvalue == pytest.approx(2.626071, abs=1e-6)
    contact = sorted(spec.eigenvalues)[:2]
    assert np.allclose(contact, 1 / math.tanh(a), atol=1e-10)
    assert contact[0] == pytest.approx(2.163953, abs=1e-6)
    f = H.frame_at(s, p)
    assert complex(H.levi_form(f, 0, 0)).real == pytest.approx(2 / math.tanh(a), abs=1e-10)


def test_cp_sphere_spectrum():
    a = math.pi / 6
    s = H.sphere(CP, a)
    spec = H.shape_spectrum(s, s.sample(1, 5)[0])
    assert spec.t_eigenvalue == pytest.approx(1.154701, abs=1e-6)
    assert sorted(spec.eigenvalues)[1] == pytest.approx(1.732051, abs=1e-6)


def test_cp3_tube_spectrum():
    s = H.tube(A.complex_projective(3), 1, 0.4)
    spec = H.shape_spectrum(s, s.sample(1, 0)[0])
    expected = sorted([2 / math.tan(0.8)] + [1 / math.tan(0.4)] * 2 + [-math.tan(0.4)] * 2)
    assert np.allclose(sorted(spec.eigenvalues), expected, atol=1e-9)
    assert spec.t_eigenvalue == pytest.approx(2 / math.tan(0.8), abs=1e-9)
    assert [m for _, m in spec.clusters] == [2, 1, 2]


@pytest.mark.parametrize(
    "surface",
    [H.sphere(FLAT, 1.0), H.sphere(CH, 0.5), H.sphere(CP, 0.7), H.tube(A.complex_projective(3), 1, 0.4)],
    ids=["flat", "ch", "cp", "tube"],
)
def test_hopf_residual_vanishes(surface):
    f = H.frames(surface, surface.sample(20, 1))
    assert float(np.max(H.hopf_residual(f))) <= 1e-9


def test_ellipsoid_is_not_hopf():
    s = H.ellipsoid(FLAT, [1.0, 2.0])
    f = H.frame_at(s, s.sample(1, 2)[0])
    assert float(H.hopf_residual(f)) > 1e-3


def test_sphere_chart_radius_and_validation():
    assert H.sphere(CH, 0.5).params["chart_radius"] == pytest.approx(0.462117, abs=1e-6)
    assert H.sphere(CP, math.pi / 4).params["chart_radius"] == pytest.approx(1.0)
    with pytest.raises(ParameterError):
        H.sphere(CP, 2.0)
    with pytest.raises(ParameterError):
        H.tube(CH, 1, 0.4)


def test_tube_over_point_is_sphere():
    a = 0.6
    t = H.tube(CP, 0, a)
    pts = t.sample(30, 0)
    assert np.allclose(np.linalg.norm(pts, axis=1), math.tan(a), atol=1e-12)
    assert np.allclose([float(A.dist_to_center(CP, p)) for p in pts], a, atol=1e-12)


def test_tube_over_line_is_at_distance_a():
    # k = 1 in CP^2: CP^1 = {z2 = 0}; the tube is the sphere of radius
    # pi/2 - a about the dual point [0:0:1], i.e. |z2|/|(1, z1, z2)| = sin a
    a = 0.5
    t = H.tube(CP, 1, a)
    pts = t.sample(30, 1)
    z = pts[:, 0::2] + 1j * pts[:, 1::2]
    ratio = np.abs(z[:, 1]) / np.sqrt(1 + np.sum(np.abs(z) ** 2, axis=1))
    assert np.allclose(ratio, math.sin(a), atol=1e-12)


def test_frame_is_orthonormal_and_unitary():
    s = H.ellipsoid(FLAT, [1.0, 1.2])
    f = H.frames(s, s.sample(10, 4))
    for i in range(10):
        g, nu, t, x = f.g[i], f.nu[i], f.T[i], f.X[i][0]
        assert nu @ g @ nu == pytest.approx(1.0)
        assert t @ g @ t == pytest.approx(1.0)
        assert abs(nu @ g @ t) <= 1e-13
        assert abs(x @ g @ x.conj() - 1.0) <= 1e-12  # <X, conj X> = 1
        assert abs(x @ g @ x) <= 1e-12  # X is of type (1,0)
        assert abs(x @ g @ nu) <= 1e-12 and abs(x @ g @ t) <= 1e-12


def test_frame_at_rejects_off_surface_points():
    with pytest.raises(ParameterError):
        H.frame_at(H.sphere(FLAT, 1.0), np.array([0.5, 0, 0, 0]))


@settings(max_examples=8)
@given(st.floats(0.1, 1.4), st.integers(0, 1000))
def test_geodesic_sphere_closed_forms_cp(a, seed):
    s = H.sphere(CP, a)
    spec = H.shape_spectrum(s, s.sample(1, seed)[0])
    assert spec.t_eigenvalue == pytest.approx(2 / math.tan(2 * a), abs=1e-8 * max(1, abs(2 / math.tan(2 * a))))


@settings(max_examples=8)
@given(st.floats(0.2, 2.0), st.integers(0, 1000))
def test_geodesic_sphere_levi_form_ch(a, seed):
    s = H.sphere(CH, a)
    f = H.frame_at(s, s.sample(1, seed)[0])
    assert complex(H.levi_form(f, 0, 0)).real == pytest.approx(2 / math.tanh(a), rel=1e-9)


def test_cluster():
    assert H.cluster([1.0, 1.0 + 1e-12, 3.0]) == [(pytest.approx(1.0), 2), (3.0, 1)]
