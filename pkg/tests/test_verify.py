import json
import math

import numpy as np
import pytest

from kahlercheck import ambient as A
from kahlercheck import hypersurface as H
from kahlercheck import verify as V
from kahlercheck.jets import constant, coordinate

z1, z2 = coordinate(0), coordinate(1)
FLAT, CH, CP = A.flat(2), A.complex_hyperbolic(2), A.complex_projective(2)
FLAT_S = H.sphere(FLAT, 1.0)
CH_S = H.sphere(CH, 0.5)
CP_S = H.sphere(CP, math.pi / 6)
ELL = H.ellipsoid(FLAT, [1.0, 1.2])


# reports ---------------------------------------------------------------------


def test_report_dict_is_ordered_and_json_ready():
    rep = V.equality_report("x", "eq. (id)", 1.0 + 1e-9, 1.0, 1e-6, geometry="g", b=2, a=np.float64(1.5))
    d = rep.to_dict()
    assert list(d) == ["check_id", "anchor", "geometry", "kind", "status", "pass", "lhs", "rhs", "residual", "relative", "tolerance", "metadata"]
    assert list(d["metadata"]) == sorted(d["metadata"])
    assert json.loads(json.dumps(d))["pass"] is True
    c = V.equality_report("c", "a", 1j, 1j, 1e-6).to_dict()
    assert c["lhs"] == [0.0, 1.0]


def test_report_kinds():
    assert V.bound_report("b", "a", 2e-9, 1e-8).passed
    assert not V.bound_report("b", "a", 2e-8, 1e-8).passed
    ineq = V.inequality_report("i", "a", 2.0, 1.0, 1e-6)
    assert ineq.passed and ineq.residual == 1.0 and ineq.metadata["equality"] is False
    assert not V.inequality_report("i", "a", 1.0, 2.0, 1e-6).passed
    skip = V.skipped_report("s", "a", V.HYPOTHESIS_FAILED, "why")
    assert skip.status == "hypothesis failed" and not skip.passed


def test_battery():
    battery = V.field_battery(2)
    assert len(battery) == V.BATTERY_SIZE == 12
    assert len({F.name for F in battery}) == 12
    # deterministic in the seed
    x = np.array([0.1, 0.2, -0.3, 0.1])
    again = V.field_battery(2)
    assert all(complex(a(x)) == complex(b(x)) for a, b in zip(battery, again))


# main identity ---------------------------------------------------------------


def test_main_identity_constant():
    rep = V.check_main_identity(FLAT_S, constant(1.0), order=8, volume_order=8, radial_order=8)
    assert rep.lhs == 0 and rep.rhs == 0 and rep.passed


def test_main_identity_flat_ball():
    rep = V.check_main_identity(FLAT_S, z1 * z1.conj() + z2.real)
    assert rep.passed and rep.relative <= 1e-6
    assert rep.anchor == "eq. (id)"


def test_main_identity_ch_ball():
    rep = V.check_main_identity(CH_S, z1 * z2.conj() + z2)
    assert rep.passed and rep.relative <= 1e-6


def test_main_identity_antiholomorphic_control():
    rep = V.check_main_identity(FLAT_S, z1.conj())
    assert rep.passed


def test_main_identity_on_non_circular_levelset():
    import jax.numpy as jnp

    surface = H.levelset(FLAT, lambda x: x[0] ** 2 + x[1] ** 2 / 1.69 + jnp.sum(x[2:] ** 2) - 1.0, 1.0)
    # the phase-dependent radial function needs more nodes than a ball
    rep = V.check_main_identity(surface, z1 * z1 * z2.conj() + z2.real * z1, 32, 24, 16)
    assert rep.passed, rep
    assert rep.metadata["rhs_error_estimate"] <= 1e-2


# ambient checks --------------------------------------------------------------


@pytest.mark.parametrize("space", [FLAT, CH, CP], ids=["flat", "ch", "cp"])
def test_curvature_and_potential_checks(space):
    assert V.check_curvature_normalization(space).passed
    assert V.check_potential_hessian(space).passed


def test_hessian_r_closed_form_values():
    assert V.hessian_r_eigenvalues(CH, 0.5)[1] == pytest.approx(2 / math.tanh(1.0))
    assert V.hessian_r_eigenvalues(CH, 0.5)[1] == pytest.approx(2.626071, abs=1e-6)
    assert V.hessian_r_eigenvalues(CH, 0.5)[2] == pytest.approx(2.163953, abs=1e-6)
    rep = V.check_hessian_r(CH)
    assert rep.passed and rep.metadata["radial_error"] <= 1e-8


# boundary checks -------------------------------------------------------------


@pytest.mark.parametrize("surface", [FLAT_S, CH_S, ELL], ids=["flat", "ch", "ellipsoid"])
def test_div_T_check(surface):
    assert V.check_div_T(surface).passed


def test_duality_check_on_random_pairs():
    rep = V.check_duality(CH_S, count=5)
    assert rep.passed and rep.metadata["pairs"] == 5


# spectra, Minkowski, inequalities ---------------------------------------------


@pytest.mark.parametrize("surface", [FLAT_S, CH_S, CP_S, H.tube(A.complex_projective(3), 1, 0.4)], ids=["flat", "ch", "cp", "tube"])
def test_spectrum(surface):
    rep = V.check_spectrum(surface)
    assert rep.passed, rep


def test_tube_spectrum_closed_form():
    spec = V.tube_spectrum_closed_form(2, 1, 0.4)
    assert [m for _, m in spec] == [2, 1, 2]
    assert spec[0][0] == pytest.approx(-math.tan(0.4))


def test_minkowski_flat_unit_sphere():
    rep = V.check_minkowski(FLAT_S)
    assert rep.lhs == pytest.approx(4 * math.pi**2, rel=1e-10)
    assert rep.relative <= 1e-10


@pytest.mark.parametrize("surface", [CH_S, CP_S], ids=["ch", "cp"])
def test_minkowski_curved(surface):
    rep = V.check_minkowski(surface)
    assert rep.passed and rep.relative <= 1e-6


def test_minkowski_needs_hopf():
    assert V.check_minkowski(ELL).status == V.HYPOTHESIS_FAILED


def test_invHb_flat_ball_equality():
    rep = V.check_invHb(FLAT_S)
    assert rep.lhs == pytest.approx(math.pi**2, rel=1e-10)
    assert rep.rhs == pytest.approx(math.pi**2, rel=1e-10)
    assert rep.metadata["equality"]


def test_invHb_ch_ball_equality():
    rep = V.check_invHb(H.sphere(CH, 0.7))
    assert rep.passed and abs(rep.relative) <= 1e-6


def test_iso_equality_on_balls():
    rep = V.check_iso(FLAT_S)
    assert rep.lhs == pytest.approx(2 * math.pi**2, rel=1e-10)
    assert abs(rep.relative) <= 1e-6
    rep = V.check_iso(CH_S)
    assert rep.metadata["inf_H_b"] == pytest.approx(2 / math.tanh(0.5), rel=1e-10)
    assert abs(rep.relative) <= 1e-6


def test_inequalities_strict_on_ellipsoid():
    for rep in (V.check_invHb(ELL), V.check_iso(ELL)):
        assert rep.passed and rep.residual > 1e-3


# rigidity and the equality case ----------------------------------------------


def test_rigidity_chain_ch_sphere():
    reps = V.check_rigidity_chain(CH_S)
    assert [r.check_id for r in reps] == ["rigidity.cod", "rigidity.qr", "rigidity.comp"]
    assert all(r.passed for r in reps)


def test_rigidity_chain_tube():
    reps = V.check_rigidity_chain(H.tube(A.complex_projective(3), 1, 0.4))
    ids = [r.check_id for r in reps]
    assert ids == ["rigidity.cod", "rigidity.fundB"]
    assert all(r.passed for r in reps)
    # cot a * (-tan a) = -1 exactly; the float product is off by rounding only
    assert reps[1].metadata["closed_form_residual"] <= 1e-15


def test_rigidity_needs_hopf():
    reps = V.check_rigidity_chain(ELL)
    assert len(reps) == 1 and reps[0].status == V.HYPOTHESIS_FAILED


@pytest.mark.parametrize("surface", [FLAT_S, CH_S, CP_S], ids=["flat", "ch", "cp"])
def test_equality_case(surface):
    assert V.check_equality_case_lemma(surface).passed
    assert V.check_jaj(surface).passed
    assert V.check_alpha_constant(surface).passed


def test_equality_case_not_applicable_off_spheres():
    assert V.check_equality_case_lemma(ELL).status == V.NOT_APPLICABLE
    assert V.check_alpha_constant(ELL).status == V.HYPOTHESIS_FAILED


def test_refinement_resolves_anisotropic_levelset():
    import jax.numpy as jnp

    w = jnp.asarray([1.0, 1 / 1.69, 1.0, 1.0])
    surface = H.levelset(FLAT, lambda x: jnp.sum(w * x * x) - 1.0, 1.0)
    pairs = V.random_pairs(2, 2, 0)
    coarse = V.check_duality(surface, pairs, refine=False)
    assert coarse.status == V.FAIL and coarse.metadata["orders_tried"] == [24]
    fine = V.check_duality(surface, pairs)
    assert fine.passed and fine.metadata["orders_tried"] == [24, 32, 48]


def test_refinement_is_not_used_when_resolved():
    rep = V.check_duality(CH_S, count=2)
    assert rep.metadata["orders_tried"] == [V.DUALITY_ORDER]
    rep = V.check_main_identity(CH_S, z1 * z2.conj() + z2)
    assert rep.metadata["surface_order"] == V.IDENTITY_SURFACE_ORDER
