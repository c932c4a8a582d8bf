import math

import jax

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahlercheck import crextend as C
from kahlercheck import verify as V
from kahlercheck.errors import ParameterError
from kahlercheck.jets import ScalarField, constant, coordinate

z1, z2 = coordinate(0), coordinate(1)


@pytest.fixture(scope="module")
def points():
    rng = np.random.default_rng(0)
    u = rng.normal(size=(40, 4))
    return u / np.linalg.norm(u, axis=1, keepdims=True) * 0.5 * rng.uniform(size=(40, 1)) ** 0.25


def test_kernel_nodes_area():
    _, w = C.kernel_nodes(2, 8)
    assert w.sum() == pytest.approx(2 * math.pi**2, rel=1e-13)


def test_constant_data(points):
    ext = C.PoissonExtension(constant(1.0))
    v, g, h = ext.jets(points)
    # the order-32 rule converges like |x|^32 (about 2e-10 at |x| = 1/2)
    assert np.abs(v - 1).max() <= 1e-9
    assert np.abs(g).max() <= 1e-7  # differentiating costs a factor ~ order


def test_harmonic_polynomials_reproduce(points):
    F = z1.real
    ext = C.PoissonExtension(F)
    v = ext(points)
    exact = np.array([complex(F(p)) for p in points])
    assert np.abs(v - exact).max() / np.abs(exact).max() <= 1e-7
    assert ext.harmonicity(points).max() <= 1e-10


def test_holomorphic_data_gives_holomorphic_extension(points):
    F = z1 * z1 * z2
    ext = C.PoissonExtension(F)
    v, g, h = ext.jets(points)
    dbar = np.asarray(jax.vmap(C._flat_invariants)(g, h)[0])
    assert dbar.max() <= 1e-6
    assert np.abs(v - np.array([complex(F(p)) for p in points])).max() <= 1e-6


def test_jets_match_ad_through_the_sum():
    ext = C.PoissonExtension(z1 * z2.conj() + z2, order=8)
    x = np.array([0.1, -0.2, 0.3, 0.05])
    j = ext.jet(x)
    ad = ext.field.jet(x)
    assert complex(j.value) == pytest.approx(complex(ad.value), abs=1e-13)
    assert np.abs(j.grad - ad.grad).max() <= 1e-12
    assert np.abs(j.hess - ad.hess).max() <= 1e-11


def test_extend_returns_jet():
    j = C.extend(z1, np.array([0.2, 0.1, 0.0, 0.0]))
    assert complex(j.value) == pytest.approx(0.2 + 0.1j, abs=1e-9)


def test_refuses_points_near_the_sphere():
    with pytest.raises(ParameterError):
        C.PoissonExtension(z1, order=8)(np.array([0.95, 0, 0, 0]))


@settings(max_examples=5)
@given(st.integers(0, 2**31 - 1))
def test_reproduction_of_harmonic_polynomials_degree_4(seed):
    # Re/Im of holomorphic and antiholomorphic monomials of degree <= 4 are harmonic
    rng = np.random.default_rng(seed)
    a, b = rng.integers(0, 3, size=2)
    c = complex(*rng.normal(size=2))
    F = ScalarField(lambda z: c * z[0] ** a * z[1] ** b + np.conj(c) * z[0].conj() ** b * z[1].conj() ** a, "h")
    ext = C.PoissonExtension(F, order=48)
    x = np.array([[0.3, -0.1, 0.2, 0.25], [0.0, 0.4, -0.2, 0.1]])
    exact = np.array([complex(F(p)) for p in x])
    err = np.abs(ext(x) - exact).max() / max(np.abs(exact).max(), 1e-3)
    assert err <= 1e-6


@pytest.mark.parametrize(
    "label,F",
    [("z1^2 z2", z1 * z1 * z2), ("1/(z1-2)", ScalarField(lambda z: 1 / (z[0] - 2), "1/(z1-2)")), ("z2^3", z2 * z2 * z2)],
)
def test_holomorphy_report_cr_data(label, F):
    rep = C.holomorphy_report(F, label=label)
    assert rep.status == V.PASS
    assert rep.metadata["max_dbar_F"] <= 1e-5
    assert abs(rep.metadata["energy_lhs"]) <= 1e-5 and abs(rep.metadata["energy_rhs"]) <= 1e-5
    assert rep.anchor == "Theorem ext"


def test_holomorphy_report_non_cr_control():
    rep = C.holomorphy_report(z1.conj(), order=16)
    assert rep.status == V.HYPOTHESIS_FAILED
    assert rep.metadata["max_dbar_F"] == pytest.approx(math.sqrt(2), rel=1e-3)
    assert rep.metadata["energy_identity"] == "not applicable"
