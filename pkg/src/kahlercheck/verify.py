"""The check suite.

Every check turns one identity, inequality or spectrum statement into a
computed residual or margin and returns a :class:`ResidualReport`. Reports
are plain data: deterministic given the inputs, JSON-ready via ``to_dict``.

Anchors name the statement being checked (equation tags such as ``(id)`` or
theorem names such as ``Theorem iso``).
"""

from dataclasses import dataclass, field
from typing import List, Optional

import jax
import jax.numpy as jnp
import numpy as np
from scipy.optimize import minimize

from ._batch import field_map, point_map
from ._complex import wirtinger_blocks
from ._field import PolynomialField, ScalarField, monomial_exponents
from .ambient import (
    SpaceForm,
    J,
    chart_radius,
    metric,
    phi_field,
    real_metric,
    sectional_curvature,
)
from .boundary import BoundaryFunction, boundary_data
from .errors import DegenerateGeometryError, ParameterError
from .hypersurface import Hypersurface, frames, param_geometry, shape_spectrum
from .jets import covariant_hessian, frame_hessian, unitary_frame
from .quadrature import surface_nodes, volume_nodes, weighted_sum

PASS = "pass"
FAIL = "fail"
HYPOTHESIS_FAILED = "hypothesis failed"
NOT_APPLICABLE = "not applicable"

# default quadrature for n = 2 (see README for timings)
IDENTITY_SURFACE_ORDER = 24
IDENTITY_VOLUME_ORDER = 16
IDENTITY_RADIAL_ORDER = 12
# (surface, volume, radial) orders for domains the defaults do not resolve
IDENTITY_REFINE = ((32, 24, 16),)
SURFACE_ORDER = 32
# duality integrands are smooth and low-degree: order 24 reaches round-off
DUALITY_ORDER = 24
DUALITY_REFINE = (32, 48)
VOLUME_ORDER = 16
RADIAL_ORDER = 12
POINTS = 50

TOL = {
    "main_identity": 1e-5,
    "curvature": 1e-8,
    "potential": 1e-9,
    "div_T": 1e-8,
    "duality": 1e-6,
    "compare": 1e-7,
    "sphere_spectrum": 1e-8,
    "tube_spectrum": 1e-6,
    "minkowski": 1e-6,
    "invHb": 1e-6,
    "iso": 1e-6,
    "hessian_r": 1e-8,
    "cod": 1e-7,
    "qr": 1e-8,
    "fundB": 1e-7,
    "comp": 0.0,
    "equality_lemma": 1e-7,
    "alpha_constant": 1e-7,
    "jaj": 1e-8,
    "hopf": 1e-7,
    "holomorphy": 1e-5,
    "energy": 1e-5,
}


# ---------------------------------------------------------------------------
# reports


@dataclass
class ResidualReport:
    """Outcome of one check.

    ``residual`` is absolute; ``relative`` divides it by ``scale`` (at least
    ``max(|lhs|, |rhs|)``; see the individual checks for the scale used).
    For inequalities ``residual`` is the signed margin (positive = holds) and
    ``passed`` means ``margin >= -tolerance``.
    """

    check_id: str
    anchor: str
    status: str
    lhs: complex
    rhs: complex
    residual: float
    relative: float
    tolerance: float
    kind: str = "equality"
    geometry: str = ""
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "anchor": self.anchor,
            "geometry": self.geometry,
            "kind": self.kind,
            "status": self.status,
            "pass": self.passed,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "residual": _jsonable(self.residual),
            "relative": _jsonable(self.relative),
            "tolerance": float(self.tolerance),
            "metadata": {k: _jsonable(self.metadata[k]) for k in sorted(self.metadata)},
        }


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(v[k]) for k in sorted(v)}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, str) or v is None:
        return v
    v = complex(v)
    if v.imag == 0.0:
        return float(v.real)
    return [float(v.real), float(v.imag)]


def _scalar(v):
    v = complex(v)
    return v.real if v.imag == 0.0 else v


def equality_report(check_id, anchor, lhs, rhs, tol, *, scale=None, relative=True, geometry="", **meta):
    """Report for ``lhs == rhs``; passes when the (relative) residual <= tol."""
    lhs, rhs = _scalar(lhs), _scalar(rhs)
    res = float(abs(lhs - rhs))
    denom = max(abs(lhs), abs(rhs), 1e-30)
    if scale is not None:
        denom = max(denom, float(scale))
    rel = res / denom
    measure = rel if relative else res
    meta["criterion"] = "relative" if relative else "absolute"
    status = PASS if measure <= tol else FAIL
    return ResidualReport(check_id, anchor, status, lhs, rhs, res, rel, tol, "equality", geometry, meta)


def bound_report(check_id, anchor, value, tol, *, geometry="", **meta):
    """Report for ``|value| <= tol`` (a residual that should vanish)."""
    value = float(value)
    status = PASS if value <= tol else FAIL
    return ResidualReport(check_id, anchor, status, value, 0.0, value, value, tol, "bound", geometry, meta)


def inequality_report(check_id, anchor, lhs, rhs, tol, *, geometry="", **meta):
    """Report for ``lhs >= rhs``; margin relative to ``max(|lhs|, |rhs|)``."""
    lhs, rhs = float(np.real(lhs)), float(np.real(rhs))
    margin = lhs - rhs
    rel = margin / max(abs(lhs), abs(rhs), 1e-30)
    meta["equality"] = bool(abs(rel) <= tol)
    status = PASS if rel >= -tol else FAIL
    return ResidualReport(check_id, anchor, status, lhs, rhs, margin, rel, tol, "inequality", geometry, meta)


def skipped_report(check_id, anchor, status, reason, *, geometry="", tol=0.0, **meta):
    meta["reason"] = reason
    return ResidualReport(check_id, anchor, status, 0.0, 0.0, 0.0, 0.0, tol, "skipped", geometry, meta)


def describe(surface: Hypersurface) -> str:
    return f"{surface.space.name}(n={surface.n}) {surface.tag}"


def is_geodesic_sphere(surface: Hypersurface) -> bool:
    """Geodesic sphere about the chart origin (a tube about a point counts)."""
    p = surface.params
    return "a" in p and p.get("k", 0) == 0


# ---------------------------------------------------------------------------
# test-function battery


def _poly(n, degree, terms, name):
    """Polynomial from ``{(a, b): c}`` with ``a, b`` exponent tuples over
    the first coordinates (padded with zeros to length n)."""
    full = {}
    for (a, b), c in terms.items():
        a = tuple(a) + (0,) * (n - len(a))
        b = tuple(b) + (0,) * (n - len(b))
        full[a + b] = full.get(a + b, 0) + c
    return PolynomialField.from_terms(n, degree, full, name)


def _random_poly(n, degree, rng, mask, name, real=False):
    exps = monomial_exponents(n, degree)
    deg = exps.sum(axis=1)
    c = (rng.normal(size=len(exps)) + 1j * rng.normal(size=len(exps))) / (1.0 + deg)
    c = np.where(mask(exps[:, :n], exps[:, n:]), c, 0.0)
    if real:
        # P + conj(P): conj swaps holomorphic and antiholomorphic exponents
        index = {tuple(e): i for i, e in enumerate(exps)}
        swapped = np.zeros_like(c)
        for i, e in enumerate(exps):
            swapped[index[tuple(e[n:]) + tuple(e[:n])]] += np.conj(c[i])
        c = c + swapped
    return PolynomialField(n, degree, c, name)


BATTERY_DEGREE = 4
BATTERY_SIZE = 12


def field_battery(n: int = 2, seed: int = 0):
    """Twelve fixed test fields: holomorphic, antiholomorphic, mixed,
    radial, pluriharmonic and constant. All are polynomials of one shape,
    so a surface compiles the identity kernels once for the whole battery."""
    d = BATTERY_DEGREE
    rng = np.random.default_rng(seed)
    holo = lambda a, b: b.sum(axis=1) == 0  # noqa: E731
    anti = lambda a, b: a.sum(axis=1) == 0  # noqa: E731
    low = lambda a, b: (a.sum(axis=1) + b.sum(axis=1)) <= 3  # noqa: E731
    fields = [
        _poly(n, d, {((2, 1), ()): 1.0}, "holomorphic z1^2 z2"),
        _random_poly(n, d, rng, holo, "holomorphic random"),
        _poly(n, d, {((), (1, 2)): 1.0}, "antiholomorphic conj(z1 z2^2)"),
        _random_poly(n, d, rng, anti, "antiholomorphic random"),
        _poly(n, d, {((1,), (1,)): 1.0, ((0, 1), ()): 0.5, ((), (0, 1)): 0.5}, "mixed |z1|^2 + Re z2"),
        _poly(n, d, {((1,), (0, 1)): 1.0, ((0, 1), ()): 1.0}, "mixed z1 conj(z2) + z2"),
        _random_poly(n, d, rng, low, "mixed random"),
        _random_poly(n, d, rng, low, "mixed random real", real=True),
        _poly(n, d, {((1,), (1,)): 1.0, ((0, 1), (0, 1)): 1.0}, "radial |z|^2"),
        _poly(
            n,
            d,
            {((2,), (2,)): 1.0, ((0, 2), (0, 2)): 1.0, ((1, 1), (1, 1)): 2.0, ((1,), (1,)): -3.0, ((0, 1), (0, 1)): -3.0},
            "radial |z|^4 - 3|z|^2",
        ),
        _poly(
            n,
            d,
            {((3,), ()): 0.5, ((), (3,)): 0.5, ((1, 1), ()): -0.5j, ((), (1, 1)): 0.5j},
            "pluriharmonic Re z1^3 + Im z1 z2",
        ),
        _poly(n, d, {((), ()): 1.0}, "constant 1"),
    ]
    assert len(fields) == BATTERY_SIZE
    return fields


# ---------------------------------------------------------------------------
# main identity


def _identity_density(space, F, x):
    """``sqrt 2 (|box F|^2 - |D^{1,1}F|^2)`` and its absolute size."""
    _, _, c = wirtinger_blocks(F.grad(x), F.hess(x))
    k = jnp.linalg.inv(metric(space, x))
    box = jnp.trace(c @ k)
    d11 = jnp.real(jnp.trace(c @ k @ jnp.conj(c).T @ k))
    return jnp.sqrt(2.0) * jnp.stack([jnp.abs(box) ** 2 - d11, jnp.abs(box) ** 2 + d11])


def main_identity_sides(surface: Hypersurface, F: ScalarField, order=None, volume_order=None, radial_order=None):
    """Both sides of the main identity with half-order error estimates.

    Returns ``(lhs, rhs, info)``; ``info`` carries error estimates and the
    residual scale: the largest of the integrals of the absolute integrands
    and the boundary energy ``int_Sigma |dF|^2`` (both sides are quadratic
    in ``F``; for holomorphic ``F`` both integrands vanish identically and
    only the energy gives a meaningful scale).
    """
    order = order or IDENTITY_SURFACE_ORDER
    volume_order = volume_order or IDENTITY_VOLUME_ORDER
    radial_order = radial_order or IDENTITY_RADIAL_ORDER

    def lhs_at(q, rq):
        x, w = volume_nodes(surface, q, rq)
        dens = field_map(_identity_density, surface.space, F, x)
        return weighted_sum(dens, w)

    def rhs_at(q):
        x, w = surface_nodes(surface, q)
        d = boundary_data(BoundaryFunction(F, surface), x)
        # |dF|^2 in the unitary frame (Z, X_a): |ZF|^2 + |Zbar F|^2 + sum |X_a F|^2 + |Xbar_a F|^2
        energy = (
            np.abs(d["zF"]) ** 2
            + np.abs(d["zbF"]) ** 2
            + np.sum(np.abs(d["f_hol"]) ** 2 + np.abs(d["f_bar"]) ** 2, axis=1)
        )
        return (
            weighted_sum(d["identity_rhs"], w),
            max(float(weighted_sum(np.abs(d["identity_rhs"]), w)), float(weighted_sum(energy, w))),
        )

    (lhs, lhs_abs) = lhs_at(volume_order, radial_order)
    lhs_lo = lhs_at(max(volume_order // 2, 1), max(radial_order // 2, 1))[0]
    rhs, rhs_abs = rhs_at(order)
    rhs_lo = rhs_at(max(order // 2, 1))[0]
    info = {
        "lhs_error_estimate": float(abs(lhs - lhs_lo)),
        "rhs_error_estimate": float(abs(rhs - rhs_lo)),
        "scale": float(max(lhs_abs, rhs_abs)),
        "surface_order": order,
        "volume_order": [radial_order, volume_order],
    }
    return complex(lhs), complex(rhs), info


def check_main_identity(surface: Hypersurface, F: ScalarField, order=None, volume_order=None, radial_order=None, tol=None, label=None, refine=True):
    """``sqrt2 int_Omega (|box F|^2 - |D^{1,1}F|^2)`` against the boundary
    integrals of the identity, for ``f = F|_Sigma``.

    The relative residual is taken against the larger of ``|lhs|``, ``|rhs|``
    and the integrals of the absolute integrands, so that fields for which
    both sides vanish (holomorphic ones) are judged on a meaningful scale.
    With ``refine``, a miss whose half-order error estimates exceed the
    tolerance is retried at the orders of ``IDENTITY_REFINE``.
    """
    tol = TOL["main_identity"] if tol is None else tol
    label = label or F.name
    if not surface.closed:
        return skipped_report(f"main_identity[{label}]", "eq. (id)", NOT_APPLICABLE, "surface bounds no star-shaped domain", geometry=describe(surface))
    orders = [(order, volume_order, radial_order)]
    if refine:
        orders += [q for q in IDENTITY_REFINE if q[0] > (order or IDENTITY_SURFACE_ORDER)]
    for q in orders:
        lhs, rhs, info = main_identity_sides(surface, F, *q)
        scale = info.pop("scale")
        rep = equality_report(
            f"main_identity[{label}]", "eq. (id)", lhs, rhs, tol, scale=scale, geometry=describe(surface), field=label, **info
        )
        # refine only while the quadrature itself is unresolved
        unresolved = max(info["lhs_error_estimate"], info["rhs_error_estimate"]) > tol * scale
        if rep.passed or not unresolved:
            break
    return rep


# ---------------------------------------------------------------------------
# ambient checks


def random_points(space: SpaceForm, count: int, seed: int = 0, max_chart_radius=None):
    """Deterministic points spread over a ball of the chart."""
    rng = np.random.default_rng(seed)
    if max_chart_radius is None:
        max_chart_radius = {0: 2.0, -1: 0.9, 1: 3.0}[space.kappa]
    u = rng.normal(size=(count, 2 * space.n))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    r = max_chart_radius * rng.uniform(size=(count, 1)) ** (1.0 / (2 * space.n))
    return u * r


def check_curvature_normalization(space: SpaceForm, count: int = 20, seed: int = 0, tol=None):
    """Holomorphic sections have curvature ``4 kappa`` and totally real
    sections ``kappa`` at random points and directions."""
    tol = TOL["curvature"] if tol is None else tol
    rng = np.random.default_rng(seed + 1)
    pts = random_points(space, count, seed)
    worst_h = worst_r = 0.0
    for p in pts:
        u = rng.normal(size=2 * space.n)
        v = rng.normal(size=2 * space.n)
        g = np.asarray(real_metric(space, p))
        ju = np.asarray(J(space, u))
        # totally real partner: g-orthogonal to u and Ju
        for e in (u, ju):
            v = v - (v @ g @ e) / (e @ g @ e) * e
        kh = float(sectional_curvature(space, p, u, ju))
        kr = float(sectional_curvature(space, p, u, v))
        worst_h = max(worst_h, abs(kh - 4 * space.kappa))
        worst_r = max(worst_r, abs(kr - space.kappa))
    return bound_report(
        "curvature_normalization",
        "eq. (curv)",
        max(worst_h, worst_r),
        tol,
        geometry=space.name,
        holomorphic_max_error=worst_h,
        totally_real_max_error=worst_r,
        points=count,
    )


def _phi_hessian_data(space, _none, x):
    phi = phi_field(space)
    mixed_frame = frame_hessian(space, phi, x)
    c_box = jnp.trace(mixed_frame)
    return jnp.max(jnp.abs(mixed_frame - jnp.eye(space.n))), jnp.abs(c_box - space.n)


def check_potential_hessian(space: SpaceForm, count: int = 100, seed: int = 0, tol=None):
    """``D^{1,1} Phi = I`` in a unitary frame and ``box Phi = m + 1``."""
    tol = TOL["potential"] if tol is None else tol
    pts = random_points(space, count, seed)
    d11_err, box_err = field_map(_phi_hessian_data, space, None, pts)
    return bound_report(
        "potential_hessian",
        "D^{1,1}Phi = I",
        max(float(np.max(d11_err)), float(np.max(box_err))),
        tol,
        geometry=space.name,
        d11_max_error=float(np.max(d11_err)),
        box_max_error=float(np.max(box_err)),
        points=count,
    )


def _r_field(space: SpaceForm) -> ScalarField:
    k = space.kappa

    def fn(z):
        s = jnp.sqrt(jnp.sum(z.real**2 + z.imag**2))
        if k == 0:
            return s + 0j
        if k == -1:
            return jnp.arctanh(s) + 0j
        return jnp.arctan(s) + 0j

    return ScalarField(fn, "r")


def hessian_r_eigenvalues(space: SpaceForm, r):
    """Closed-form eigenvalues of ``D^2 r`` on ``(grad r, J grad r, rest)``."""
    if space.kappa == -1:
        return 0.0, 2.0 / np.tanh(2 * r), 1.0 / np.tanh(r)
    if space.kappa == 1:
        return 0.0, 2.0 / np.tan(2 * r), 1.0 / np.tan(r)
    return 0.0, 1.0 / r, 1.0 / r


def _hessian_r_matrix(space, _none, x):
    rf = _r_field(space)
    g = real_metric(space, x)
    hess = jnp.real(covariant_hessian(space, rf, x))
    e1 = jnp.linalg.solve(g, jnp.real(rf.grad(x)))
    e2 = J(space, e1)
    # orthonormal completion of (e1, e2): QR in coordinates where g = I,
    # with a fixed generic matrix filling the remaining columns
    chol = jnp.linalg.cholesky(g)  # g = L L^T
    fill = jnp.asarray(np.random.default_rng(7).normal(size=(2 * space.n, 2 * space.n - 2)))
    q, _ = jnp.linalg.qr(jnp.concatenate([(chol.T @ jnp.stack([e1, e2], axis=1)), fill], axis=1))
    basis = jnp.linalg.solve(chol.T, q)
    return basis.T @ hess @ basis, dist_r(space, x)


def dist_r(space, x):
    s = jnp.sqrt(jnp.sum(x * x))
    if space.kappa == 0:
        return s
    return jnp.arctanh(s) if space.kappa == -1 else jnp.arctan(s)


def check_hessian_r(space: SpaceForm, points=None, count: int = 50, seed: int = 0, tol=None):
    """The three eigen-relations of ``D^2 r``: ``grad r`` is in the kernel,
    ``J grad r`` has eigenvalue ``2 coth 2r`` and its orthogonal complement
    ``coth r`` (CH; cot forms in CP, ``1/r`` in flat space)."""
    tol = TOL["hessian_r"] if tol is None else tol
    if points is None:
        rng = np.random.default_rng(seed)
        radii = rng.uniform(0.05, 1.5 if space.kappa != 1 else 1.4, size=count)
        u = rng.normal(size=(count, 2 * space.n))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        points = u * np.array([chart_radius(space, r) for r in radii])[:, None]
    mats, rs = field_map(_hessian_r_matrix, space, None, points)
    worst = np.zeros(3)
    for mat, r in zip(mats, rs):
        if r < 0.05 - 1e-12:
            raise ParameterError("check_hessian_r needs points with r >= 0.05")
        l0, l1, l2 = hessian_r_eigenvalues(space, r)
        target = np.diag([l0, l1] + [l2] * (2 * space.n - 2))
        diff = np.abs(mat - target)
        worst = np.maximum(worst, [diff[:, 0].max(), diff[:, 1].max(), diff[:, 2:].max()])
    return bound_report(
        "hessian_r",
        "eq. (Hess)",
        float(worst.max()),
        tol,
        geometry=space.name,
        radial_error=float(worst[0]),
        j_radial_error=float(worst[1]),
        complement_error=float(worst[2]),
        points=len(rs),
    )


# ---------------------------------------------------------------------------
# boundary checks


def surface_points(surface: Hypersurface, count: int = POINTS, seed: int = 0):
    return surface.sample(count, seed)


def check_div_T(surface: Hypersurface, count: int = POINTS, seed: int = 0, tol=None):
    """Pointwise intrinsic divergence of ``T`` vanishes."""
    from .boundary import div_T

    tol = TOL["div_T"] if tol is None else tol
    d = np.abs(div_T(surface, surface_points(surface, count, seed)))
    return bound_report("div_T", "Lemma div T = 0", float(d.max()), tol, geometry=describe(surface), points=count)


def check_compare(surface: Hypersurface, F: ScalarField, count: int = POINTS, seed: int = 0, tol=None, label=None):
    """Pointwise residual of the comparison identity between the Kohn
    Laplacian and the surface Laplacian."""
    from .boundary import compare_residual

    tol = TOL["compare"] if tol is None else tol
    res, _ = compare_residual(BoundaryFunction(F, surface), surface_points(surface, count, seed))
    label = label or F.name
    return bound_report(f"compare[{label}]", "eq. (compare)", float(res.max()), tol, geometry=describe(surface), field=label, points=count)


def random_pairs(n: int, count: int, seed: int = 0, degree: int = 3):
    """Deterministic random low-degree polynomial pairs."""
    rng = np.random.default_rng(seed)
    every = lambda a, b: np.ones(len(a), bool)  # noqa: E731
    return [
        (_random_poly(n, degree, rng, every, f"f{i}"), _random_poly(n, degree, rng, every, f"g{i}"))
        for i in range(count)
    ]


def check_duality(surface: Hypersurface, pairs=None, count: int = 20, seed: int = 0, order=None, tol=None, refine=True):
    """``int <dbar_b f, conj dbar_b g> = -int (box_b f) conj g`` for each
    pair; reports the worst relative residual.

    With ``refine`` a miss is retried at the higher orders of
    ``DUALITY_REFINE`` (surfaces far from round need more nodes); the
    orders tried are recorded in the metadata.
    """
    tol = TOL["duality"] if tol is None else tol
    order = order or DUALITY_ORDER
    geometry = describe(surface)
    if not surface.closed:
        return skipped_report("duality", "Lemma Kohn", NOT_APPLICABLE, "surface has no closed parametrization", geometry=geometry)
    pairs = pairs if pairs is not None else random_pairs(surface.n, count, seed)
    orders = [order] + ([q for q in DUALITY_REFINE if q > order] if refine else [])
    for q in orders:
        rep = _duality_at(surface, pairs, q, tol, geometry)
        if rep.passed:
            break
    rep.metadata["orders_tried"] = orders[: orders.index(q) + 1]
    return rep


def _duality_at(surface, pairs, order, tol, geometry):
    x, w = surface_nodes(surface, order)
    worst, worst_pair = 0.0, (0.0, 0.0)
    cache = {}

    def data(F):
        if id(F) not in cache:
            cache[id(F)] = boundary_data(BoundaryFunction(F, surface), x)
        return cache[id(F)]

    for f, g in pairs:
        df, dg = data(f), data(g)
        lhs = complex(weighted_sum(np.sum(df["f_bar"] * np.conj(dg["f_bar"]), axis=1), w))
        rhs = complex(-weighted_sum(df["kohn"] * np.conj(dg["value"]), w))
        rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)
        if abs(lhs) < 1e-12 and abs(rhs) < 1e-12:
            rel = abs(lhs - rhs)
        if rel >= worst:
            worst, worst_pair = rel, (lhs, rhs)
    rep = equality_report("duality", "Lemma Kohn", worst_pair[0], worst_pair[1], tol, geometry=geometry, pairs=len(pairs), order=order)
    rep.relative = worst
    rep.status = PASS if worst <= tol else FAIL
    return rep


# ---------------------------------------------------------------------------
# spectra


def sphere_spectrum_closed_form(space: SpaceForm, a: float):
    """``(alpha, lambda)``: eigenvalue on ``T`` and on the contact plane."""
    if space.kappa == 0:
        return 1.0 / a, 1.0 / a
    if space.kappa == -1:
        return 2.0 / np.tanh(2 * a), 1.0 / np.tanh(a)
    return 2.0 / np.tan(2 * a), 1.0 / np.tan(a)


def tube_spectrum_closed_form(m: int, k: int, a: float):
    """``[(value, multiplicity)]`` sorted by value for a tube about CP^k."""
    spec = [(2.0 / np.tan(2 * a), 1), (1.0 / np.tan(a), 2 * (m - k)), (-np.tan(a), 2 * k)]
    return sorted([s for s in spec if s[1] > 0])


def _expected_spectrum(surface):
    tag = surface.params
    if "k" in tag:
        return tube_spectrum_closed_form(surface.m, tag["k"], tag["a"]), tube_t_eigenvalue(tag["a"])
    alpha, lam = sphere_spectrum_closed_form(surface.space, tag["a"])
    return sorted([(alpha, 1), (lam, 2 * surface.m)]), alpha


def tube_t_eigenvalue(a):
    return 2.0 / np.tan(2 * a)


def _spectra(surface, pts):
    f = frames(surface, pts)
    shapes = np.asarray(f.shape)
    vals, vecs = np.linalg.eigh(shapes)
    idx = np.argmax(np.abs(vecs[:, 0, :]), axis=1)
    t_vals = vals[np.arange(len(vals)), idx]
    return vals, t_vals, f


def check_spectrum(surface: Hypersurface, count: int = POINTS, seed: int = 0, tol=None):
    """Principal curvatures at sample points against the closed forms of
    geodesic spheres and of tubes about ``CP^k``."""
    geometry = describe(surface)
    if "a" not in surface.params:
        return skipped_report("spectrum", "sphere/tube spectra", NOT_APPLICABLE, "no closed-form spectrum for this surface", geometry=geometry)
    is_tube = "k" in surface.params and surface.params["k"] > 0
    key = "tube_spectrum" if is_tube else "sphere_spectrum"
    tol = TOL[key] if tol is None else tol
    expected, t_expected = _expected_spectrum(surface)
    target = np.concatenate([[v] * mult for v, mult in expected])
    vals, t_vals, _ = _spectra(surface, surface_points(surface, count, seed))
    err = float(max(np.abs(vals - target[None, :]).max(), np.abs(t_vals - t_expected).max()))
    return bound_report(
        key,
        "tube spectrum" if is_tube else "sphere spectrum",
        err,
        tol,
        geometry=geometry,
        expected=[[v, mult] for v, mult in expected],
        points=count,
    )


# ---------------------------------------------------------------------------
# Minkowski formula and inequalities


def _hopf_max(surface, pts):
    from .hypersurface import hopf_residual

    return float(np.max(np.asarray(hopf_residual(frames(surface, pts)))))


def check_minkowski(surface: Hypersurface, order=None, tol=None, hopf_tol=None):
    """``2m |Sigma| = int H_b <grad Phi, nu>`` on closed Hopf surfaces."""
    tol = TOL["minkowski"] if tol is None else tol
    hopf_tol = TOL["hopf"] if hopf_tol is None else hopf_tol
    order = order or SURFACE_ORDER
    geometry = describe(surface)
    anchor = {0: "Minkowski formula (flat)", -1: "eq. (MF)", 1: "Prop. MFP1"}[surface.space.kappa]
    if not surface.closed:
        return skipped_report("minkowski", anchor, NOT_APPLICABLE, "surface has no closed parametrization", geometry=geometry)
    x, w = surface_nodes(surface, order)
    hopf = _hopf_max(surface, x)
    if hopf > hopf_tol:
        return skipped_report("minkowski", anchor, HYPOTHESIS_FAILED, f"surface is not Hopf (|AT - alpha T| up to {hopf:.3g})", geometry=geometry, tol=tol, hopf_residual=hopf)
    d = boundary_data(BoundaryFunction(phi_field(surface.space), surface), x)
    lhs = 2 * surface.m * weighted_sum(np.ones(len(w)), w)
    rhs = weighted_sum(d["H_b"] * np.real(d["nuF"]), w)
    return equality_report("minkowski", anchor, lhs, rhs, tol, geometry=geometry, order=order, hopf_residual=hopf)


def _hb_of_theta(surface, theta):
    from .hypersurface import _frame_data

    return _frame_data(surface, surface.param(theta))["H_b"]


def inf_hb(surface: Hypersurface, order=None):
    """``inf H_b`` over the surface: the smallest value at quadrature nodes,
    refined by bounded quasi-Newton minimisation over the parameter box."""
    order = order or SURFACE_ORDER
    x, _ = surface_nodes(surface, order)
    hb = np.asarray(frames(surface, x).H_b)
    from .quadrature import product_rule

    rule = product_rule(surface.param_box, order)
    theta0 = rule.nodes[int(np.argmin(hb))]
    value = jax.jit(lambda th: _hb_of_theta(surface, th))
    grad = jax.jit(jax.jacfwd(lambda th: _hb_of_theta(surface, th)))

    def obj(th):
        th = jnp.asarray(th)
        return float(value(th)), np.asarray(grad(th), dtype=float)

    res = minimize(obj, theta0, jac=True, method="L-BFGS-B", bounds=list(surface.param_box))
    return float(min(res.fun, hb.min())), float(hb.min()), hb


def check_invHb(surface: Hypersurface, order=None, volume_order=None, radial_order=None, tol=None):
    """``int 1/H_b >= (m+1)/m |Omega|`` when ``H_b > 0``."""
    tol = TOL["invHb"] if tol is None else tol
    order = order or SURFACE_ORDER
    geometry = describe(surface)
    if not surface.closed:
        return skipped_report("invHb", "Theorem invHb", NOT_APPLICABLE, "surface bounds no star-shaped domain", geometry=geometry)
    x, w = surface_nodes(surface, order)
    hb = np.asarray(frames(surface, x).H_b)
    if hb.min() <= 0:
        return skipped_report("invHb", "Theorem invHb", HYPOTHESIS_FAILED, f"H_b <= 0 somewhere (min {hb.min():.3g})", geometry=geometry, tol=tol)
    vol = _volume(surface, volume_order, radial_order)
    m = surface.m
    return inequality_report("invHb", "Theorem invHb", weighted_sum(1.0 / hb, w), (m + 1) / m * vol, tol, geometry=geometry, order=order, min_H_b=float(hb.min()), volume=vol)


def _volume(surface, volume_order=None, radial_order=None):
    _, wv = volume_nodes(surface, volume_order or VOLUME_ORDER, radial_order or RADIAL_ORDER)
    return float(np.sum(wv))


def check_iso(surface: Hypersurface, order=None, volume_order=None, radial_order=None, tol=None):
    """``m |Sigma| >= c (m+1) |Omega|`` with ``c = inf H_b > 0``."""
    tol = TOL["iso"] if tol is None else tol
    order = order or SURFACE_ORDER
    geometry = describe(surface)
    if not surface.closed:
        return skipped_report("iso", "Theorem iso", NOT_APPLICABLE, "surface bounds no star-shaped domain", geometry=geometry)
    c, c_nodes, _ = inf_hb(surface, order)
    if c <= 0:
        return skipped_report("iso", "Theorem iso", HYPOTHESIS_FAILED, f"inf H_b = {c:.3g} <= 0", geometry=geometry, tol=tol)
    _, w = surface_nodes(surface, order)
    area = float(np.sum(w))
    vol = _volume(surface, volume_order, radial_order)
    m = surface.m
    return inequality_report("iso", "Theorem iso", m * area, c * (m + 1) * vol, tol, geometry=geometry, order=order, inf_H_b=c, inf_H_b_nodes=c_nodes, area=area, volume=vol)


# ---------------------------------------------------------------------------
# rigidity constituents and the equality case


def _phi_matrix(m):
    """``J`` on the contact basis ``(u_1, J u_1, ..., u_m, J u_m)``."""
    phi = np.zeros((2 * m, 2 * m))
    for i in range(m):
        phi[2 * i + 1, 2 * i] = 1.0
        phi[2 * i, 2 * i + 1] = -1.0
    return phi


def _contact_blocks(f):
    shapes = np.asarray(f.shape)
    return shapes[:, 1:, 1:], np.asarray(f.alpha), np.asarray(f.H_b)


def check_rigidity_chain(surface: Hypersurface, count: int = POINTS, seed: int = 0, tol=None) -> List[ResidualReport]:
    """The constituents of the rigidity argument on Hopf surfaces with
    constant principal curvatures:

    * ``(Cod)``: ``A phi A - (alpha/2)(A phi + phi A) = kappa phi`` on the
      contact plane (read with ``alpha = Pi(T, T)``);
    * ``(qr)``: ``lambda (c/m - lambda) = alpha c / 2m + kappa`` for every
      contact eigenvalue, ``c = H_b`` (geodesic spheres);
    * ``(fundB)``: ``lambda lambda* + kappa = 0`` for the two contact
      eigenvalues of a tube;
    * Lemma comp: ``alpha > 2`` and ``lambda, lambda* > 1`` on CH spheres.
    """
    tol = dict(TOL, **(tol or {}))
    geometry = describe(surface)
    space = surface.space
    m, kappa = surface.m, space.kappa
    pts = surface_points(surface, count, seed)
    hopf = _hopf_max(surface, pts)
    if hopf > tol["hopf"] or "a" not in surface.params:
        return [
            skipped_report(
                "rigidity",
                "eq. (Cod)",
                HYPOTHESIS_FAILED,
                f"needs a Hopf surface with constant principal curvatures (|AT - alpha T| up to {hopf:.3g})",
                geometry=geometry,
                hopf_residual=hopf,
            )
        ]
    f = frames(surface, pts)
    a_h, alpha, hb = _contact_blocks(f)
    phi = _phi_matrix(m)
    cod = a_h @ phi @ a_h - 0.5 * alpha[:, None, None] * (a_h @ phi + phi @ a_h) - kappa * phi
    cod_err = float(np.max(np.linalg.norm(cod, ord=2, axis=(1, 2))))
    reports = [bound_report("rigidity.cod", "eq. (Cod)", cod_err, tol["cod"], geometry=geometry, points=count)]

    lam = np.linalg.eigvalsh(a_h)  # contact eigenvalues per point
    is_tube = surface.params.get("k", 0) > 0
    if is_tube:
        lo, hi = lam[:, 0], lam[:, -1]
        fund = float(np.max(np.abs(lo * hi + kappa)))
        a = surface.params["a"]
        algebraic = abs((1 / np.tan(a)) * (-np.tan(a)) + kappa)
        reports.append(bound_report("rigidity.fundB", "eq. (fundB)", fund, tol["fundB"], geometry=geometry, closed_form_residual=algebraic, points=count))
    else:
        c = hb[:, None]
        qr = lam * (c / m - lam) - (alpha[:, None] * c / (2 * m) + kappa)
        reports.append(bound_report("rigidity.qr", "eq. (qr)", float(np.max(np.abs(qr))), tol["qr"], geometry=geometry, points=count))
    if kappa == -1 and not is_tube:
        lam_star = hb[:, None] / m - lam
        margins = {
            "alpha_minus_2": float(np.min(alpha) - 2),
            "lambda_minus_1": float(np.min(lam) - 1),
            "lambda_star_minus_1": float(np.min(lam_star) - 1),
        }
        worst = min(margins.values())
        rep = inequality_report("rigidity.comp", "Lemma comp", worst, 0.0, 0.0, geometry=geometry, **margins)
        rep.status = PASS if worst > 0 else FAIL
        reports.append(rep)
    return reports


def check_equality_case_lemma(surface: Hypersurface, count: int = POINTS, seed: int = 0, tol=None):
    """On a geodesic sphere with ``F = Phi - Phi|_Sigma`` solving the
    boundary value problem: ``chi c = 2m``, ``Pi(X_a, conj X_b) =
    delta_ab / chi`` and ``Pi(T, X_a) = 0``, with ``chi = dF/dnu``."""
    tol = TOL["equality_lemma"] if tol is None else tol
    geometry = describe(surface)
    m = surface.m
    if not is_geodesic_sphere(surface):
        return skipped_report("equality_lemma", "Lemma chi c = 2m", NOT_APPLICABLE, "equality case is realised by geodesic spheres", geometry=geometry)
    pts = surface_points(surface, count, seed)
    d = boundary_data(BoundaryFunction(phi_field(surface.space), surface), pts)
    f = frames(surface, pts)
    chi = np.real(d["nuF"])
    c = np.asarray(f.H_b)
    prod_err = np.abs(chi * c - 2 * m)
    pi_err = np.abs(np.asarray(f.Pi_HH) - np.eye(m)[None] / chi[:, None, None]).max(axis=(1, 2))
    tx_err = np.abs(np.asarray(f.Pi_TX)).max(axis=1)
    worst = float(max(prod_err.max(), pi_err.max(), tx_err.max()))
    return bound_report(
        "equality_lemma",
        "Lemma chi c = 2m",
        worst,
        tol,
        geometry=geometry,
        chi_c_error=float(prod_err.max()),
        levi_error=float(pi_err.max()),
        pi_tx_error=float(tx_err.max()),
        chi_mean=float(chi.mean()),
        points=count,
    )


def check_alpha_constant(surface: Hypersurface, count: int = 200, seed: int = 0, tol=None, hopf_tol=None):
    """On Hopf surfaces ``alpha = Pi(T, T)`` is constant."""
    tol = TOL["alpha_constant"] if tol is None else tol
    hopf_tol = TOL["hopf"] if hopf_tol is None else hopf_tol
    geometry = describe(surface)
    pts = surface_points(surface, count, seed)
    hopf = _hopf_max(surface, pts)
    if hopf > hopf_tol:
        return skipped_report("alpha_constant", "Lemma alpha constant", HYPOTHESIS_FAILED, f"surface is not Hopf ({hopf:.3g})", geometry=geometry, tol=tol)
    alpha = np.asarray(frames(surface, pts).alpha)
    return bound_report("alpha_constant", "Lemma alpha constant", float(alpha.max() - alpha.min()), tol, geometry=geometry, alpha_mean=float(alpha.mean()), points=count)


def check_jaj(surface: Hypersurface, count: int = POINTS, seed: int = 0, tol=None):
    """``A - JAJ = (c/m) I`` on the contact plane (equality-case spheres)."""
    tol = TOL["jaj"] if tol is None else tol
    m = surface.m
    if not is_geodesic_sphere(surface):
        return skipped_report("jaj", "eq. (jaj)", NOT_APPLICABLE, "equality case is realised by geodesic spheres", geometry=describe(surface))
    f = frames(surface, surface_points(surface, count, seed))
    a_h, _, hb = _contact_blocks(f)
    phi = _phi_matrix(m)
    op = a_h - phi @ a_h @ phi - (hb / m)[:, None, None] * np.eye(2 * m)[None]
    err = float(np.max(np.linalg.norm(op, ord=2, axis=(1, 2))))
    return bound_report("jaj", "eq. (jaj)", err, tol, geometry=describe(surface), points=count)


def check_hopf(surface: Hypersurface, count: int = POINTS, seed: int = 0, tol=None):
    tol = TOL["hopf"] if tol is None else tol
    r = _hopf_max(surface, surface_points(surface, count, seed))
    return bound_report("hopf", "Hopf definition", r, tol, geometry=describe(surface), points=count)


# ---------------------------------------------------------------------------
# CR extension


def check_energy_identity_CR(f: ScalarField, order: int = 32, **kw):
    """CR data on the unit sphere of flat space: its harmonic extension is
    holomorphic and both sides of the energy identity vanish."""
    from .crextend import holomorphy_report

    return holomorphy_report(f, order=order, **kw)
