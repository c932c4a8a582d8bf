"""Second-order calculus of scalar fields over a space form.

Jets are exact: fields are JAX functions of the chart coordinates and all
partials come from forward-mode automatic differentiation.
"""

import jax
import jax.numpy as jnp

from ._complex import wirtinger_blocks
from ._field import Jet2, ScalarField, constant, coordinate, norm2
from .ambient import SpaceForm, metric, real_christoffel, real_metric

__all__ = [
    "Jet2",
    "ScalarField",
    "constant",
    "coordinate",
    "norm2",
    "jet",
    "wirtinger",
    "complex_hessian",
    "frame_hessian",
    "d11_norm2",
    "box",
    "dbar_norm2",
    "laplace_beltrami",
    "covariant_hessian",
]


def jet(space: SpaceForm, F: ScalarField, p) -> Jet2:
    return F.jet(space.validate(p))


def wirtinger(j: Jet2):
    """Coordinate Wirtinger data ``(F_i, F_ibar, F_{i jbar})`` of a jet."""
    return wirtinger_blocks(j.grad, j.hess)


def complex_hessian(space: SpaceForm, F: ScalarField, p):
    """Mixed Hessian ``F_{i jbar}`` and the metric ``h`` at ``p``.

    On a Kahler manifold the (1,1) part of the covariant Hessian has no
    Christoffel correction, so the raw mixed partials are returned.
    """
    x = space.validate(p)
    _, _, mixed = wirtinger_blocks(F.grad(x), F.hess(x))
    return mixed, metric(space, x)


def frame_hessian(space: SpaceForm, F: ScalarField, p, frame=None):
    """``D^{1,1}F`` in a unitary frame.

    ``frame`` holds the (1,0)-frame vectors as rows; it defaults to the
    inverse-Cholesky frame of the metric.
    """
    mixed, h = complex_hessian(space, F, p)
    if frame is None:
        frame = unitary_frame(h)
    return frame @ mixed @ jnp.conj(frame).T


def unitary_frame(h):
    """Rows ``E`` with ``E h E^H = I``."""
    chol = jnp.linalg.cholesky(h)  # h = L L^H
    return jnp.linalg.inv(chol)


def d11_norm2(space: SpaceForm, F: ScalarField, p):
    """``|D^{1,1}F|^2 = tr(C h^-1 C^H h^-1)``; frame independent."""
    mixed, h = complex_hessian(space, F, p)
    k = jnp.linalg.inv(h)
    return jnp.real(jnp.trace(mixed @ k @ jnp.conj(mixed).T @ k))


def box(space: SpaceForm, F: ScalarField, p):
    """Complex Laplacian, the trace of ``D^{1,1}F``; half of Laplace-Beltrami."""
    mixed, h = complex_hessian(space, F, p)
    return jnp.trace(mixed @ jnp.linalg.inv(h))


def dbar_norm2(space: SpaceForm, F: ScalarField, p):
    """Hermitian norm squared of the (0,1)-part of ``dF``."""
    x = space.validate(p)
    _, fzb, _ = wirtinger_blocks(F.grad(x), jnp.zeros((2 * space.n,) * 2))
    k = jnp.linalg.inv(metric(space, x))
    return jnp.real(jnp.conj(fzb) @ k.T @ fzb)


def laplace_beltrami(space: SpaceForm, F: ScalarField, p):
    """Real Laplacian ``(1/sqrt g) d_a (sqrt g g^{ab} d_b F)``.

    Built only from the real metric, as an independent check on ``box``.
    """
    x = space.validate(p)

    def flux(y):
        g = real_metric(space, y)
        return jnp.sqrt(jnp.linalg.det(g)) * jnp.linalg.solve(g, F.grad(y))

    div = jnp.trace(jax.jacfwd(flux)(x))
    return div / jnp.sqrt(jnp.linalg.det(real_metric(space, x)))


def covariant_hessian(space: SpaceForm, F: ScalarField, p, gamma=None):
    """Real covariant Hessian ``d_a d_b F - Gamma^c_{ab} d_c F``."""
    x = space.validate(p)
    if gamma is None:
        gamma = real_christoffel(space, x)
    return F.hess(x) - jnp.einsum("cab,c->ab", gamma, F.grad(x))
