"""Tangential operators on a hypersurface: dbar_b, the Kohn Laplacian,
the intrinsic divergence of T and the comparison with the surface Laplacian.

A boundary function is the restriction of an ambient field. Tangential
derivatives are directional derivatives of that field along frame fields,
and second derivatives differentiate through the frame construction itself.
"""

from dataclasses import dataclass

import jax
import jax.numpy as jnp
import numpy as np

from ._batch import field_map
from ._complex import j_matrix
from ._field import ScalarField
from .ambient import real_christoffel, real_metric
from .hypersurface import Hypersurface, _guard, frame_fields, normal_field
from .quadrature import DEFAULT_SURFACE_ORDER, surface_nodes, weighted_sum

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """``f = F|_surface`` for an ambient field ``F``."""

    field: ScalarField
    surface: Hypersurface

    @property
    def name(self) -> str:
        return self.field.name


def _pointwise(surface: Hypersurface, F: ScalarField, x):
    space = surface.space
    m = surface.m
    g = real_metric(space, x)
    gam = real_christoffel(space, x)

    nu, t, xr, pivots = frame_fields(surface, x)
    xb = jnp.conj(xr)
    dnu = jax.jacfwd(lambda y: normal_field(surface, y))(x)
    a_full = dnu + jnp.einsum("cab,b->ca", gam, nu)

    dF = F.grad(x)
    d2F = F.hess(x)
    hess_cov = d2F - jnp.einsum("cab,c->ab", gam, dF)

    z = (nu - 1j * t) / SQRT2
    zF = z @ dF
    zbF = jnp.conj(z) @ dF
    nuF = nu @ dF
    tF = t @ dF

    f_bar = xb @ dF  # X-bar_alpha f
    f_hol = xr @ dF  # X_alpha f

    # X_alpha (X-bar_alpha F): differentiate through the frame
    def xbar_f(y):
        _, _, xr_y, _ = frame_fields(surface, y)
        return jnp.conj(xr_y) @ F.grad(y)

    d_xbar_f = jax.jacfwd(xbar_f)(x)  # [alpha, a]
    term1 = jnp.sum(jnp.einsum("aj,aj->a", xr, d_xbar_f))

    # <nabla_{X_alpha} X-bar_alpha, X_beta>
    dxr = jax.jacfwd(lambda y: frame_fields(surface, y)[2])(x)  # [alpha, c, a]
    nabla = jnp.einsum("kca,ka->kc", jnp.conj(dxr), xr) + jnp.einsum(
        "cab,ka,kb->kc", gam, xr, xb
    )
    conn = jnp.einsum("kc,cd,bd->kb", nabla, g, xr)  # [alpha, beta]
    term2 = jnp.sum(conn.sum(axis=0) * f_bar)

    pi_tx = (a_full @ t) @ g @ xr.T
    term3 = 1j * jnp.sum(pi_tx * f_bar)
    kohn = term1 - term2 + term3

    pi_hh_hol = jnp.einsum("ac,cd,bd->ab", xb @ a_full.T, g, xb)
    alpha = (a_full @ t) @ g @ t
    h_mean = jnp.trace(a_full)
    h_b = h_mean - alpha

    # compare: 2 box_b f = Lap_S f - D2_S f(T,T) + i[2 Pi(T,X)Xbar f - H_b T f]
    lap = jnp.trace(jnp.linalg.solve(g, hess_cov))
    lap_surface = lap - nu @ hess_cov @ nu - h_mean * nuF
    hess_tt_surface = t @ hess_cov @ t - alpha * nuF
    compare_rhs = lap_surface - hess_tt_surface + 1j * (2.0 * jnp.sum(pi_tx * f_bar) - h_b * tF)

    # intrinsic div T = tr(nabla T) - <nabla_nu T, nu>
    jm = jnp.asarray(j_matrix(space.n))

    def t_field(y):
        return jm @ normal_field(surface, y)

    dT = jax.jacfwd(t_field)(x) + jnp.einsum("cab,b->ca", gam, t)
    div_t = jnp.trace(dT) - (dT @ nu) @ g @ nu

    kterm = kohn - 1j * jnp.sum(pi_tx * f_bar)
    identity_rhs = (
        jnp.conj(zbF) * kterm
        + zF * jnp.conj(kterm)
        + SQRT2 * jnp.einsum("ab,a,b->", pi_hh_hol, f_hol, jnp.conj(f_bar))
        + h_b * jnp.abs(zbF) ** 2 / SQRT2
    )
    return dict(
        value=F(x),
        f_bar=f_bar,
        f_hol=f_hol,
        kohn=kohn,
        kohn_terms=jnp.stack([term1, -term2, term3]),
        zF=zF,
        zbF=zbF,
        nuF=nuF,
        tF=tF,
        H=h_mean,
        H_b=h_b,
        alpha=alpha,
        pi_tx=pi_tx,
        compare_lhs=2.0 * kohn,
        compare_rhs=compare_rhs,
        div_t=div_t,
        identity_rhs=identity_rhs,
        pi_hh_hol=pi_hh_hol,
        pivots=pivots,
        grad_norm=jnp.linalg.norm(jax.grad(surface.rho)(x)),
    )


def boundary_data(f: BoundaryFunction, points):
    """All pointwise boundary quantities of ``f`` at surface points."""
    pts = f.surface.space.validate(np.atleast_2d(points))
    data = field_map(_pointwise, f.surface, f.field, pts)
    _guard(data)
    return data


def dbar_b(f: BoundaryFunction, points):
    """Components ``f_{alpha-bar} = X-bar_alpha F``, shape ``(N, m)``."""
    return boundary_data(f, points)["f_bar"]


def kohn_laplacian(f: BoundaryFunction, points):
    """Kohn Laplacian from the unitary-frame formula

    ``X_a Xbar_a f - <nabla_{X_a} Xbar_a, X_b> Xbar_b f + i Pi(T, X_a) Xbar_a f``.
    """
    return boundary_data(f, points)["kohn"]


def div_T(surface: Hypersurface, points):
    """Intrinsic divergence of ``T = J nu`` at surface points."""
    return boundary_data(BoundaryFunction(_ZERO, surface), points)["div_t"]


_ZERO = ScalarField(lambda z: 0.0 * z[0], "0")


def compare_residual(f: BoundaryFunction, points):
    """Pointwise ``|2 box_b f - (Lap_S f - D^2_S f(T,T) + i[...])|``.

    The surface Laplacian and intrinsic Hessian are obtained from the ambient
    ones through the Gauss formula, independently of the Kohn frame formula.
    """
    d = boundary_data(f, points)
    return np.abs(d["compare_lhs"] - d["compare_rhs"]), d


def duality_integrals(f: BoundaryFunction, g: BoundaryFunction, order: int = DEFAULT_SURFACE_ORDER):
    """``(int <dbar_b f, conj dbar_b g>, int (box_b f) conj(g))`` over the surface."""
    x, w = surface_nodes(f.surface, order)
    df = boundary_data(f, x)
    dg = boundary_data(g, x)
    pairing = np.sum(df["f_bar"] * np.conj(dg["f_bar"]), axis=1)
    lhs = weighted_sum(pairing, w)
    rhs = weighted_sum(df["kohn"] * np.conj(dg["value"]), w)
    return complex(lhs), complex(rhs)


def duality_check(f: BoundaryFunction, g: BoundaryFunction, order: int = DEFAULT_SURFACE_ORDER, tol=None):
    """Kohn duality ``int <dbar_b f, dbar_b g> = -int (box_b f) conj g`` for
    one pair, as a report."""
    from .verify import check_duality

    if f.surface is not g.surface:
        raise ValueError("f and g must live on the same surface")
    return check_duality(f.surface, [(f.field, g.field)], order=order, tol=tol)


def compare_identity(f: BoundaryFunction, points, tol=None):
    """Eq. (compare) at the given points, as a report."""
    from .verify import TOL, bound_report, describe

    tol = TOL["compare"] if tol is None else tol
    res, _ = compare_residual(f, points)
    return bound_report(f"compare[{f.name}]", "eq. (compare)", float(res.max()), tol, geometry=describe(f.surface), field=f.name, points=len(res))
