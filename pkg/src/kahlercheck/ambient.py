"""The three complex space forms in a single affine chart.

Flat space, the complex hyperbolic ball and the affine chart of complex
projective space all come from the one-parameter family of Kahler potentials

    phi = |z|^2                      (kappa = 0)
    phi = log(1 + kappa |z|^2)/kappa (kappa = -1, +1)

with Hermitian metric ``h_{ij} = (1/2) d_i dbar_j phi``. With this
normalization the flat model is Euclidean and the holomorphic sectional
curvature is ``4 kappa``.

Every function here is traceable by JAX; points given as concrete arrays are
checked against the chart domain first, traced values are not.
"""

from dataclasses import dataclass
import math

import jax
import jax.numpy as jnp
import numpy as np

from ._complex import (
    from_complex,
    holo_matrix,
    j_matrix,
    to_complex,
    wirtinger_blocks,
)
from ._field import ScalarField
from .errors import ChartDomainError, DegenerateGeometryError, ParameterError

CHART_MARGIN = 1e-8


@dataclass(frozen=True)
class SpaceForm:
    """Simply connected complex space form of holomorphic curvature 4*kappa.

    Parameters
    ----------
    kappa : int
        -1 (complex hyperbolic), 0 (flat) or +1 (complex projective).
    n : int
        Complex dimension ``m + 1 >= 2``.
    max_radius : float
        Largest admissible chart radius for the projective chart.
    """

    kappa: int
    n: int = 2
    max_radius: float = 1e4

    def __post_init__(self):
        if self.kappa not in (-1, 0, 1):
            raise ParameterError(f"kappa must be -1, 0 or 1, got {self.kappa}")
        if self.n < 2:
            raise ParameterError(f"complex dimension must be >= 2, got {self.n}")

    @property
    def m(self) -> int:
        return self.n - 1

    @property
    def name(self) -> str:
        return {0: "flat", -1: "ch", 1: "cp"}[self.kappa]

    @property
    def chart_bound(self) -> float:
        if self.kappa == -1:
            return 1.0
        if self.kappa == 1:
            return self.max_radius
        return math.inf

    def validate(self, x):
        """Return ``x`` as a float array after checking the chart domain.

        Tracers pass through untouched: validation happens at the API
        boundary only.
        """
        if isinstance(x, jax.core.Tracer):
            return x
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != 2 * self.n:
            raise ChartDomainError(
                f"expected {2 * self.n} real coordinates, got shape {x.shape}"
            )
        if not np.all(np.isfinite(x)):
            raise ChartDomainError("point has non-finite coordinates")
        r = np.sqrt(np.sum(x * x, axis=-1))
        if np.any(r >= self.chart_bound - CHART_MARGIN):
            raise ChartDomainError(
                f"|z| = {np.max(r):.12g} is not inside the {self.name} chart "
                f"(bound {self.chart_bound}, margin {CHART_MARGIN})"
            )
        return jnp.asarray(x)


def flat(n: int = 2) -> SpaceForm:
    return SpaceForm(0, n)


def complex_hyperbolic(n: int = 2) -> SpaceForm:
    return SpaceForm(-1, n)


def complex_projective(n: int = 2, max_radius: float = 1e4) -> SpaceForm:
    return SpaceForm(1, n, max_radius)


def _abs2(z):
    return jnp.sum(z.real**2 + z.imag**2)


# ---------------------------------------------------------------------------
# potential and metric


def potential(space: SpaceForm, p):
    """Kahler potential ``phi`` at ``p``."""
    x = space.validate(p)
    s = _abs2(to_complex(x))
    if space.kappa == 0:
        return s
    return jnp.log1p(space.kappa * s) / space.kappa


def metric(space: SpaceForm, p):
    """Hermitian metric ``h_{ij}`` in closed form.

    ``h = (1/2) (delta/s - kappa conj(z_i) z_j / s^2)``, ``s = 1 + kappa|z|^2``.
    The real Riemannian pairing is ``2 Re sum h_{ij} u^i conj(v^j)`` on
    (1,0)-components.
    """
    x = space.validate(p)
    z = to_complex(x)
    s = 1.0 + space.kappa * _abs2(z)
    eye = jnp.eye(space.n)
    h = 0.5 * (eye / s - space.kappa * jnp.outer(jnp.conj(z), z) / s**2)
    if not isinstance(h, jax.core.Tracer):
        if s <= 0 or not np.all(np.isfinite(np.asarray(h))):
            raise DegenerateGeometryError(f"metric degenerate at {np.asarray(x)}")
    return h


def metric_from_potential(space: SpaceForm, p):
    """``(1/2) d dbar phi`` by automatic differentiation of the potential."""
    x = space.validate(p)
    hess = jax.hessian(lambda y: potential(space, y))(x)
    _, _, mixed = wirtinger_blocks(jnp.zeros(2 * space.n), hess)
    return 0.5 * mixed


def real_metric(space: SpaceForm, p, h=None):
    """Real ``2n x 2n`` Riemannian metric on the coordinate basis."""
    if h is None:
        h = metric(space, p)
    c = jnp.asarray(holo_matrix(space.n))
    return 2.0 * jnp.real(c.T @ h @ jnp.conj(c))


def hermitian_pair(h, u, v):
    """``<u, conj(v)> = sum h_{ij} u^i conj(v^j)`` for (1,0)-components."""
    return u @ h @ jnp.conj(v)


def pair(g, u, v):
    """Complex-bilinear extension of the metric on real-basis components."""
    return u @ g @ v


def J(space_or_n, v):
    """Apply the complex structure to real-basis components."""
    n = space_or_n.n if isinstance(space_or_n, SpaceForm) else space_or_n
    return jnp.asarray(j_matrix(n)) @ v


# ---------------------------------------------------------------------------
# connection and curvature


def christoffel(space: SpaceForm, p):
    """Holomorphic Christoffel symbols ``G[k, i, j] = h^{k l} d_i h_{j l}``.

    For this family they reduce to
    ``-kappa (delta_ik conj(z_j) + delta_jk conj(z_i)) / (1 + kappa|z|^2)``;
    the mixed-type symbols vanish identically (Kahler condition).
    """
    x = space.validate(p)
    z = to_complex(x)
    s = 1.0 + space.kappa * _abs2(z)
    eye = jnp.eye(space.n)
    zb = jnp.conj(z)
    return -space.kappa * (
        jnp.einsum("ki,j->kij", eye, zb) + jnp.einsum("kj,i->kij", eye, zb)
    ) / s


def real_christoffel(space: SpaceForm, p):
    """Real Christoffel symbols ``G[c, a, b]`` assembled from the holomorphic ones."""
    gam = christoffel(space, p)
    c = jnp.asarray(holo_matrix(space.n))
    return jnp.real(jnp.einsum("ck,kij,ia,jb->cab", jnp.conj(c).T, gam, c, c))


def real_christoffel_from_metric(space: SpaceForm, p):
    """Levi-Civita symbols from derivatives of the real metric (AD path)."""
    x = space.validate(p)
    g_fn = lambda y: real_metric(space, y)  # noqa: E731
    g = g_fn(x)
    dg = jax.jacfwd(g_fn)(x)  # dg[a, b, c] = d_c g_ab
    ginv = jnp.linalg.inv(g)
    # first kind: (d_a g_db + d_b g_da - d_d g_ab) / 2, stored as [d, a, b]
    first = 0.5 * (
        jnp.einsum("dba->dab", dg) + dg - jnp.einsum("abd->dab", dg)
    )
    return jnp.einsum("cd,dab->cab", ginv, first)


def riemann_from_metric(space: SpaceForm, p):
    """``R[d, c, a, b]`` with ``R(d_a, d_b) d_c = R[d, c, a, b] d_d``.

    Computed by differentiating the metric-derived Christoffel symbols, so it
    is independent of the closed-form curvature below.
    """
    x = space.validate(p)
    gam_fn = lambda y: real_christoffel_from_metric(space, y)  # noqa: E731
    gam = gam_fn(x)
    dgam = jax.jacfwd(gam_fn)(x)  # dgam[d, b, c, a] = d_a Gamma^d_{bc}
    term1 = jnp.einsum("dbca->dcab", dgam)  # d_a Gamma^d_{bc}
    term2 = jnp.einsum("dacb->dcab", dgam)  # d_b Gamma^d_{ac}
    term3 = jnp.einsum("dae,ebc->dcab", gam, gam)
    term4 = jnp.einsum("dbe,eac->dcab", gam, gam)
    return term1 - term2 + term3 - term4


def curvature(space: SpaceForm, p, v1, v2, v3, v4):
    """Closed-form curvature tensor of a space form.

    ``kappa [<1,3><2,4> - <1,4><2,3> + <1,J3><2,J4> - <1,J4><2,J3>
    + 2 <1,J2><3,J4>]`` with all pairings taken in the metric at ``p``.
    """
    g = real_metric(space, p)
    jm = jnp.asarray(j_matrix(space.n))

    def ip(a, b):
        return a @ g @ b

    return space.kappa * (
        ip(v1, v3) * ip(v2, v4)
        - ip(v1, v4) * ip(v2, v3)
        + ip(v1, jm @ v3) * ip(v2, jm @ v4)
        - ip(v1, jm @ v4) * ip(v2, jm @ v3)
        + 2.0 * ip(v1, jm @ v2) * ip(v3, jm @ v4)
    )


def curvature_from_metric(space: SpaceForm, p, v1, v2, v3, v4):
    """Same tensor, ``<R(v1, v2) v4, v3>``, from metric derivatives."""
    r = riemann_from_metric(space, p)
    g = real_metric(space, p)
    rv = jnp.einsum("dcab,a,b,c->d", r, v1, v2, v4)
    return v3 @ g @ rv


def sectional_curvature(space: SpaceForm, p, u, v):
    g = real_metric(space, p)
    area2 = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
    return curvature(space, p, u, v, u, v) / area2


# ---------------------------------------------------------------------------
# distance, potentials, geodesics


def dist_to_center(space: SpaceForm, p):
    """Geodesic distance from the chart origin."""
    x = space.validate(p)
    t = jnp.sqrt(_abs2(to_complex(x)))
    if space.kappa == 0:
        return t
    if space.kappa == -1:
        return jnp.arctanh(t)
    if not isinstance(t, jax.core.Tracer) and not np.isfinite(float(t)):
        raise ChartDomainError("point is at the projective hyperplane at infinity")
    return jnp.arctan(t)


def chart_radius(space: SpaceForm, r: float) -> float:
    """Chart radius of the geodesic sphere of radius ``r`` about the origin."""
    if r <= 0:
        raise ParameterError(f"radius must be positive, got {r}")
    if space.kappa == 0:
        return float(r)
    if space.kappa == -1:
        return float(np.tanh(r))
    if r >= np.pi / 2:
        raise ParameterError("radius must be < pi/2 in CP")
    return float(np.tan(r))


def phi_field(space: SpaceForm) -> ScalarField:
    """The distinguished potential with ``D^{1,1} Phi = metric``.

    In the chart this is half the Kahler potential: ``|z|^2/2``,
    ``log cosh r = -(1/2) log(1 - |z|^2)`` and
    ``-log cos r = (1/2) log(1 + |z|^2)``. (``log cos r`` itself has
    ``D^{1,1} = -metric``; the sign is fixed by requiring ``+metric``.)
    """
    k = space.kappa
    if k == 0:
        return ScalarField(lambda z: 0.5 * jnp.sum(z * jnp.conj(z)), "Phi_flat")
    return ScalarField(
        lambda z: 0.5 * jnp.log1p(k * jnp.sum(z * jnp.conj(z)).real) / k + 0j,
        f"Phi_{space.name}",
    )


def phi_closed_form(space: SpaceForm, r):
    """``Phi`` as a function of the distance to the center."""
    if space.kappa == 0:
        return 0.5 * r**2
    if space.kappa == -1:
        return np.log(np.cosh(r))
    if np.any(np.asarray(r) >= np.pi / 2):
        raise ChartDomainError("Phi = -log cos r is undefined for r >= pi/2")
    return -np.log(np.cos(r))


def geodesic(space: SpaceForm, p, v, t):
    """Point reached at time ``t`` along the geodesic from ``p`` with velocity ``v``.

    ``v`` is a real tangent vector (2n components), unit in the metric.
    The curved cases use the homogeneous lift: ``cos t xi + sin t eta`` in
    C^{n+1} for CP, ``cosh t xi + sinh t eta`` with the indefinite form for CH.
    """
    x = space.validate(p)
    v = jnp.asarray(v, dtype=float)
    z = to_complex(x)
    w = v[0::2] + 1j * v[1::2]
    if space.kappa == 0:
        out = from_complex(z + t * w)
    else:
        k = space.kappa
        s = 1.0 + k * _abs2(z)
        xi = jnp.concatenate([jnp.ones(1), z]) / jnp.sqrt(s)
        eta = jnp.concatenate([jnp.zeros(1), xi[0] * w])
        # Hermitian form of signature (k, 1, ..., 1) on the lift
        sig = jnp.concatenate([jnp.array([1.0 if k == 1 else -1.0]), jnp.ones(space.n)])
        coeff = jnp.sum(sig * eta * jnp.conj(xi))
        eta = eta - k * coeff * xi
        if k == 1:
            gam = jnp.cos(t) * xi + jnp.sin(t) * eta
        else:
            gam = jnp.cosh(t) * xi + jnp.sinh(t) * eta
        out = from_complex(gam[1:] / gam[0])
    if not isinstance(out, jax.core.Tracer):
        try:
            space.validate(out)
        except ChartDomainError as exc:
            raise ChartDomainError(f"geodesic leaves the chart at t={t}") from exc
    return out
