import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahlercheck import ambient as A
from kahlercheck import boundary as B
from kahlercheck import hypersurface as H
from kahlercheck._field import PolynomialField
from kahlercheck.jets import constant, coordinate

z1, z2 = coordinate(0), coordinate(1)
FLAT_S = H.sphere(A.flat(2), 1.0)
CH_S = H.sphere(A.complex_hyperbolic(2), 0.5)
CP_S = H.sphere(A.complex_projective(2), math.pi / 6)
ELL = H.ellipsoid(A.flat(2), [1.0, 1.2])
SURFACES = [FLAT_S, CH_S, CP_S, ELL]
IDS = ["flat", "ch", "cp", "ellipsoid"]


@pytest.mark.parametrize("surface", SURFACES, ids=IDS)
def test_cr_and_constant_data(surface):
    pts = surface.sample(20, 0)
    for F in (z1 * z2, z1, constant(2.0)):
        f = B.BoundaryFunction(F, surface)
        assert np.abs(B.dbar_b(f, pts)).max() <= 1e-13
        assert np.abs(B.kohn_laplacian(f, pts)).max() <= 1e-12


def test_antiholomorphic_data_is_not_cr():
    f = B.BoundaryFunction(z1.conj(), FLAT_S)
    assert np.abs(B.dbar_b(f, FLAT_S.sample(10, 0))).max() > 0.1


@pytest.mark.parametrize("surface", SURFACES, ids=IDS)
def test_div_T_vanishes(surface):
    assert np.abs(B.div_T(surface, surface.sample(50, 1))).max() <= 1e-8


@pytest.mark.parametrize(
    "surface,F",
    [(FLAT_S, z1.real), (CP_S, z2.imag), (CH_S, z1 * z2.conj() + z2), (ELL, z1.real * z2)],
    ids=["flat-Re z1", "cp-Im z2", "ch-mixed", "ellipsoid-mixed"],
)
def test_compare_identity(surface, F):
    rep = B.compare_identity(B.BoundaryFunction(F, surface), surface.sample(50, 2))
    assert rep.passed and rep.residual <= 1e-7
    assert rep.anchor == "eq. (compare)"


def test_compare_constant_is_zero():
    res, _ = B.compare_residual(B.BoundaryFunction(constant(1.0), CH_S), CH_S.sample(10, 0))
    assert res.max() == 0.0


def test_duality_examples():
    one = B.BoundaryFunction(constant(1.0), FLAT_S)
    lhs, rhs = B.duality_integrals(one, one, order=8)
    assert abs(lhs) == 0 and abs(rhs) == 0
    rep = B.duality_check(B.BoundaryFunction(z1.real, FLAT_S), B.BoundaryFunction(z2.imag, FLAT_S))
    assert rep.passed and rep.relative <= 1e-6


def test_duality_on_ch_sphere_random_pair():
    f = B.BoundaryFunction(z1 * z1.conj() * z2 + 0.3 * z2.conj(), CH_S)
    g = B.BoundaryFunction(z1.real + z1 * z2, CH_S)
    rep = B.duality_check(f, g)
    assert rep.passed, rep


def test_kohn_frame_independent_of_pairing():
    # the Kohn Laplacian of |z1|^2 on the flat unit sphere: the three frame
    # terms assemble to a real value
    f = B.BoundaryFunction(z1 * z1.conj(), FLAT_S)
    d = B.boundary_data(f, FLAT_S.sample(10, 3))
    assert np.abs(np.imag(d["kohn"])).max() <= 1e-12


@settings(max_examples=10)
@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), st.integers(0, 999))
def test_dbar_b_is_tangential(c, seed):
    # dbar_b f depends only on boundary values: adding rho * (z1 + 2) with
    # rho = |z|^2 - 1 changes nothing on the unit sphere. Coefficient fields
    # of one degree share a compiled kernel across examples.
    F = PolynomialField.from_terms(2, 3, {(1, 0, 0, 1): 1.0, (0, 1, 0, 0): c})
    G = PolynomialField.from_terms(
        2,
        3,
        {
            (1, 0, 0, 1): 1.0,
            (0, 1, 0, 0): c,
            (2, 0, 1, 0): 1.0,
            (1, 0, 1, 0): 2.0,
            (1, 1, 0, 1): 1.0,
            (0, 1, 0, 1): 2.0,
            (1, 0, 0, 0): -1.0,
            (0, 0, 0, 0): -2.0,
        },
    )
    pts = FLAT_S.sample(5, seed)
    a = B.dbar_b(B.BoundaryFunction(F, FLAT_S), pts)
    b = B.dbar_b(B.BoundaryFunction(G, FLAT_S), pts)
    assert np.abs(a - b).max() <= 1e-12 * max(1.0, abs(c))
