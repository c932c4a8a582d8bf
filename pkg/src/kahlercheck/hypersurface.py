"""Real hypersurfaces of a space form and their pointwise frame data.

A hypersurface carries an implicit defining function ``rho`` (the unit
normal points where ``rho`` increases) and, when it is closed inside the
chart, a parametrization used for quadrature. All frame quantities come from
the implicit side: ``nu`` is the metric-normalized gradient of ``rho``, which
extends it to nearby level sets, so the shape operator is simply ``A v =
nabla_v nu``.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import jax
import jax.numpy as jnp
import numpy as np

from ._batch import point_map
from ._complex import from_complex, from_holo, holo_part, j_matrix
from .ambient import (
    SpaceForm,
    chart_radius,
    dist_to_center,
    metric,
    real_christoffel,
    real_metric,
)
from .errors import DegenerateGeometryError, ParameterError

PIVOT_GUARD = 1e-6
GRADIENT_GUARD = 1e-8
CLUSTER_TOL = 1e-6


# ---------------------------------------------------------------------------
# the unit sphere in C^n in amplitude/phase coordinates


def sphere_box(n: int):
    """Parameter box of :func:`sphere_map`: n-1 amplitude angles in
    ``[0, pi/2]`` followed by n phases in ``[0, 2 pi]``."""
    return tuple([(0.0, np.pi / 2)] * (n - 1) + [(0.0, 2 * np.pi)] * n)


def sphere_map(theta, n: int):
    """Point of the unit sphere ``S^{2n-1}`` (interleaved real coordinates)."""
    amps = []
    s = 1.0
    for k in range(n - 1):
        amps.append(s * jnp.cos(theta[k]))
        s = s * jnp.sin(theta[k])
    amps.append(s)
    amps = jnp.stack(amps)
    z = amps * jnp.exp(1j * theta[n - 1 :])
    return from_complex(z)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Hypersurface:
    """Implicit hypersurface, optionally star-shaped about the chart origin.

    Attributes
    ----------
    space : SpaceForm
    rho : callable
        Defining function of the real chart coordinates; traceable.
    radial : callable or None
        Chart radius along a unit direction ``u`` (real 2n-vector). Present
        for closed star-shaped surfaces, which are then parametrized by
        ``radial(u) u`` over the sphere box.
    sampler : callable or None
        ``sampler(rng, count) -> (count, 2n)`` points on the surface, for
        surfaces that are not star-shaped.
    tag : str
    params : dict
        Geometric parameters (radius, semi-axes, ...) echoed into reports.
    """

    space: SpaceForm
    rho: Callable
    radial: Optional[Callable] = None
    sampler: Optional[Callable] = None
    tag: str = "levelset"
    params: dict = field(default_factory=dict)

    @property
    def closed(self) -> bool:
        return self.radial is not None

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def m(self) -> int:
        return self.space.m

    def param(self, theta):
        u = sphere_map(theta, self.n)
        return self.radial(u) * u

    @property
    def param_box(self):
        return sphere_box(self.n)

    def sample(self, count: int, seed: int = 0):
        """Deterministic pseudo-random points on the surface."""
        rng = np.random.default_rng(seed)
        if self.sampler is not None:
            return np.asarray(self.sampler(rng, count))
        u = rng.normal(size=(count, 2 * self.n))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        r = np.asarray(jax.vmap(self.radial)(jnp.asarray(u)))
        return r[:, None] * u


# ---------------------------------------------------------------------------
# constructors


# Constructors are memoized on their parameters: equal surfaces are the same
# object, so compiled kernels and quadrature nodes (keyed by surface) are
# shared between checks.
SURFACE_CACHE = 128


def sphere(space: SpaceForm, a: float) -> Hypersurface:
    """Geodesic sphere of radius ``a`` about the chart origin."""
    return _sphere(space, float(a))


@lru_cache(maxsize=SURFACE_CACHE)
def _sphere(space: SpaceForm, a: float) -> Hypersurface:
    if not a > 0:
        raise ParameterError(f"sphere radius must be positive, got {a}")
    if space.kappa == 1 and a >= np.pi / 2:
        raise ParameterError("radius must be < pi/2 in CP")
    radius = chart_radius(space, a)

    def rho(x):
        return dist_to_center(space, x) - a

    return Hypersurface(
        space,
        rho,
        radial=lambda u: radius,
        tag=f"sphere(a={a:g})",
        params={"a": float(a), "chart_radius": radius},
    )


def ellipsoid(space: SpaceForm, semiaxes) -> Hypersurface:
    """``sum |z_i|^2 / s_i^2 = 1`` in chart coordinates."""
    return _ellipsoid(space, tuple(float(v) for v in np.ravel(semiaxes)))


@lru_cache(maxsize=SURFACE_CACHE)
def _ellipsoid(space: SpaceForm, semiaxes: tuple) -> Hypersurface:
    s = np.asarray(semiaxes, dtype=float)
    if s.shape != (space.n,) or np.any(s <= 0):
        raise ParameterError(f"need {space.n} positive semi-axes, got {semiaxes}")
    if np.max(s) >= space.chart_bound:
        raise ParameterError("ellipsoid leaves the chart")
    inv2 = jnp.asarray(np.repeat(1.0 / s**2, 2))

    def rho(x):
        return jnp.sum(inv2 * x * x) - 1.0

    def radial(u):
        return 1.0 / jnp.sqrt(jnp.sum(inv2 * u * u))

    return Hypersurface(
        space,
        rho,
        radial=radial,
        tag="ellipsoid(" + ",".join(f"{v:g}" for v in s) + ")",
        params={"semiaxes": [float(v) for v in s]},
    )


def levelset(space: SpaceForm, rho: Callable, r0: float, tag="levelset", newton_steps=30):
    """Star-shaped level set ``rho = 0``; radial function found by Newton's
    method along each ray, started at chart radius ``r0``."""

    def radial(u):
        f = lambda r: rho(r * u)  # noqa: E731
        df = jax.grad(f)
        r = jnp.asarray(r0, dtype=float)
        for _ in range(newton_steps):
            r = r - f(r) / df(r)
        return r

    return Hypersurface(space, rho, radial=radial, tag=tag, params={"r0": float(r0)})


def tube(space: SpaceForm, k: int, a: float) -> Hypersurface:
    """Tube of radius ``a`` about the totally geodesic ``CP^k`` spanned by the
    first ``k + 1`` homogeneous coordinates.

    ``sin d = |zeta_{k+1:}| / |zeta|``; for ``k = 0`` this is the geodesic
    sphere about the origin. The normal points away from ``CP^k``.
    """
    if k != int(k):
        raise ParameterError(f"k must be an integer, got {k}")
    return _tube(space, int(k), float(a))


@lru_cache(maxsize=SURFACE_CACHE)
def _tube(space: SpaceForm, k: int, a: float) -> Hypersurface:
    if space.kappa != 1:
        raise ParameterError("tubes are only defined in CP")
    m = space.m
    if not 0 <= k <= m:
        raise ParameterError(f"need 0 <= k <= m = {m}, got k={k}")
    if not 0 < a < np.pi / 2:
        raise ParameterError("tube radius must lie in (0, pi/2)")
    n = space.n
    sin2 = np.sin(a) ** 2

    def rho(x):
        z = x[0::2] + 1j * x[1::2]
        w = jnp.concatenate([jnp.ones(1), z])
        w2 = w.real**2 + w.imag**2
        return jnp.sum(w2[k + 1 :]) / jnp.sum(w2) - sin2

    def sampler(rng, count):
        out = []
        while len(out) < count:
            u = rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1)
            v = rng.normal(size=n - k) + 1j * rng.normal(size=n - k)
            zeta = np.concatenate(
                [np.cos(a) * u / np.linalg.norm(u), np.sin(a) * v / np.linalg.norm(v)]
            )
            if abs(zeta[0]) < 0.25:
                continue
            z = zeta[1:] / zeta[0]
            out.append(np.stack([z.real, z.imag], axis=-1).reshape(-1))
        return np.array(out)

    radial = None
    if k == 0:
        radius = float(np.tan(a))
        radial = lambda u: radius  # noqa: E731
    return Hypersurface(
        space,
        rho,
        radial=radial,
        sampler=None if k == 0 else sampler,
        tag=f"tube(k={k},a={a:g})",
        params={"k": int(k), "a": float(a)},
    )


# ---------------------------------------------------------------------------
# frame fields


def normal_field(surface: Hypersurface, x):
    """Unit normal (real components) extended by the level sets of ``rho``."""
    g = real_metric(surface.space, x)
    d = jax.grad(surface.rho)(x)
    up = jnp.linalg.solve(g, d)
    return up / jnp.sqrt(d @ up)


def frame_fields(surface: Hypersurface, x):
    """``(nu, T, X, pivots)`` at ``x``.

    ``X`` holds the m unitary (1,0) tangent vectors as rows of real-basis
    components. They come from Hermitian Gram-Schmidt seeded with ``Z`` and
    then the coordinate fields in order, skipping the coordinate most aligned
    with ``Z`` (its index is locally constant, so derivatives are clean).
    """
    n = surface.n
    h = metric(surface.space, x)
    nu = normal_field(surface, x)
    t = jnp.asarray(j_matrix(n)) @ nu
    e0 = jnp.sqrt(2.0) * holo_part(nu)

    skip = jnp.argmax(jax.lax.stop_gradient(jnp.abs(e0) ** 2 * jnp.real(jnp.diag(h))))
    orders = jnp.asarray([[j for j in range(n) if j != s] for s in range(n)])
    seeds = jnp.eye(n, dtype=complex)[orders[skip]]

    basis = [e0]
    pivots = []
    for s in seeds:
        v = s
        for e in basis:
            v = v - (v @ h @ jnp.conj(e)) * e
        nrm = jnp.sqrt(jnp.real(v @ h @ jnp.conj(v)))
        pivots.append(nrm)
        basis.append(v / nrm)
    xh = jnp.stack(basis[1:])
    return nu, t, from_holo(xh), jnp.stack(pivots)


@dataclass(frozen=True)
class BoundaryFrame:
    """Per-point hypersurface data. Arrays may carry a leading batch axis.

    Vectors are real-basis components; ``X`` is ``(m, 2n)`` complex.
    ``Pi_HH[a, b] = Pi(X_a, conj X_b)``, ``Pi_HH_hol[a, b] = Pi(conj X_a,
    conj X_b)``, ``Pi_TX[a] = Pi(T, X_a)``, ``alpha = Pi(T, T)``,
    ``H_b = H - alpha``. ``shape`` is the shape operator in the orthonormal
    tangent basis ``(T, u_1, J u_1, ..., u_m, J u_m)`` stored in ``basis``.
    """

    p: jnp.ndarray
    nu: jnp.ndarray
    T: jnp.ndarray
    Z: jnp.ndarray
    X: jnp.ndarray
    Pi_HH: jnp.ndarray
    Pi_HH_hol: jnp.ndarray
    Pi_TX: jnp.ndarray
    alpha: jnp.ndarray
    H: jnp.ndarray
    H_b: jnp.ndarray
    g: jnp.ndarray
    A: jnp.ndarray
    shape: jnp.ndarray
    basis: jnp.ndarray
    pivots: jnp.ndarray
    grad_norm: jnp.ndarray

    @property
    def theta(self):
        """Contact form ``<T, .>``, represented by ``T``."""
        return self.T


def _frame_data(surface: Hypersurface, x):
    space = surface.space
    g = real_metric(space, x)
    gam = real_christoffel(space, x)
    nu, t, xr, pivots = frame_fields(surface, x)
    dnu = jax.jacfwd(lambda y: normal_field(surface, y))(x)
    a_full = dnu + jnp.einsum("cab,b->ca", gam, nu)

    def pi(u, v):
        return (a_full @ u) @ g @ v

    xb = jnp.conj(xr)
    pi_hh = jnp.einsum("ac,cd,bd->ab", xr @ a_full.T, g, xb)
    pi_hh_hol = jnp.einsum("ac,cd,bd->ab", xb @ a_full.T, g, xb)
    pi_tx = (a_full @ t) @ g @ xr.T
    alpha = pi(t, t)
    h_mean = jnp.trace(a_full)

    u = jnp.sqrt(2.0) * jnp.real(xr)
    ju = -jnp.sqrt(2.0) * jnp.imag(xr)
    cols = [t]
    for i in range(surface.m):
        cols += [u[i], ju[i]]
    basis = jnp.stack(cols, axis=1)
    shape = basis.T @ g @ a_full @ basis
    grad_norm = jnp.sqrt(jax.grad(surface.rho)(x) @ jax.grad(surface.rho)(x))
    return dict(
        p=x,
        nu=nu,
        T=t,
        Z=(nu - 1j * t) / jnp.sqrt(2.0),
        X=xr,
        Pi_HH=pi_hh,
        Pi_HH_hol=pi_hh_hol,
        Pi_TX=pi_tx,
        alpha=alpha,
        H=h_mean,
        H_b=h_mean - alpha,
        g=g,
        A=a_full,
        shape=0.5 * (shape + shape.T),
        basis=basis,
        pivots=pivots,
        grad_norm=grad_norm,
    )


def _guard(data):
    piv = np.asarray(data["pivots"])
    if piv.size and np.min(piv) < PIVOT_GUARD:
        raise DegenerateGeometryError(
            f"Gram-Schmidt pivot {np.min(piv):.3g} below guard {PIVOT_GUARD}"
        )
    gn = np.asarray(data["grad_norm"])
    if np.min(gn) < GRADIENT_GUARD:
        raise DegenerateGeometryError(f"|grad rho| = {np.min(gn):.3g} is degenerate")


def frames(surface: Hypersurface, points) -> BoundaryFrame:
    """Frames at a batch of surface points (shape ``(N, 2n)``)."""
    pts = surface.space.validate(np.atleast_2d(points))
    data = point_map(_frame_data, surface, pts)
    _guard(data)
    return BoundaryFrame(**data)


def frame_at(surface: Hypersurface, p, tol: float = 1e-10) -> BoundaryFrame:
    """Frame at one point of the surface."""
    x = surface.space.validate(p)
    r = float(surface.rho(x))
    if abs(r) > tol:
        raise ParameterError(f"point is not on the surface (rho = {r:.3g})")
    f = frames(surface, np.asarray(x)[None])
    return BoundaryFrame(**{k: getattr(f, k)[0] for k in f.__dataclass_fields__})


def levi_form(f: BoundaryFrame, i=None, j=None):
    """Levi form ``L(X_i, X_j) = 2 Pi(X_i, conj X_j)``; whole matrix by default."""
    lmat = 2.0 * f.Pi_HH
    if i is None:
        return lmat
    return lmat[..., i, j]


def hopf_residual(f: BoundaryFrame):
    """Metric norm of ``A T - alpha T``."""
    r = jnp.einsum("...ca,...a->...c", f.A, f.T) - f.alpha[..., None] * f.T
    return jnp.sqrt(jnp.einsum("...a,...ab,...b->...", r, f.g, r))


@dataclass(frozen=True)
class ShapeSpectrum:
    """Sorted principal curvatures, their clusters, and the eigenvalue
    carried by ``T`` (picked by maximal overlap with ``T``)."""

    eigenvalues: np.ndarray
    clusters: list
    t_eigenvalue: float
    t_overlap: float


def cluster(values, tol=CLUSTER_TOL):
    """Group sorted values into ``[(mean, multiplicity), ...]``."""
    values = np.sort(np.asarray(values))
    groups = [[values[0]]]
    for v in values[1:]:
        if abs(v - groups[-1][-1]) <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return [(float(np.mean(gr)), len(gr)) for gr in groups]


def shape_spectrum(surface: Hypersurface, p) -> ShapeSpectrum:
    f = frame_at(surface, p, tol=1e-8)
    vals, vecs = np.linalg.eigh(np.asarray(f.shape))
    # T is the first basis vector of the tangent frame
    idx = int(np.argmax(np.abs(vecs[0, :])))
    return ShapeSpectrum(vals, cluster(vals), float(vals[idx]), float(abs(vecs[0, idx])))


# ---------------------------------------------------------------------------
# the parametrized path (cross-check of the implicit one)


def param_geometry(surface: Hypersurface, theta):
    """``(point, nu, H, H_b, area_element)`` from the parametrization alone.

    The normal is the metric-orthogonal complement of the tangent image
    (oriented radially outward), and the second fundamental form is
    ``-<nu, d_a d_b X + Gamma(d_a X, d_b X)>``.
    """
    space = surface.space
    x = surface.param(theta)
    jac = jax.jacfwd(surface.param)(theta)
    d2 = jax.jacfwd(jax.jacfwd(surface.param))(theta)
    g = real_metric(space, x)
    gam = real_christoffel(space, x)
    # normal covector: kernel of jac^T via SVD
    _, _, vt = jnp.linalg.svd(jac.T)
    covec = vt[-1]
    nu = jnp.linalg.solve(g, covec)
    nu = nu / jnp.sqrt(nu @ g @ nu)
    nu = nu * jnp.sign(nu @ x)
    first = jac.T @ g @ jac
    second = -jnp.einsum("c,cd,dab->ab", nu, g, d2) - jnp.einsum(
        "c,cd,def,ea,fb->ab", nu, g, gam, jac, jac
    )
    h_mean = jnp.trace(jnp.linalg.solve(first, second))
    t = jnp.asarray(j_matrix(space.n)) @ nu
    coeff = jnp.linalg.solve(first, jac.T @ g @ t)
    alpha = coeff @ second @ coeff
    return x, nu, h_mean, h_mean - alpha, jnp.sqrt(jnp.linalg.det(first))


__all__ = [
    "Hypersurface",
    "BoundaryFrame",
    "ShapeSpectrum",
    "sphere",
    "ellipsoid",
    "levelset",
    "tube",
    "sphere_map",
    "sphere_box",
    "normal_field",
    "frame_fields",
    "frames",
    "frame_at",
    "levi_form",
    "hopf_residual",
    "shape_spectrum",
    "cluster",
    "param_geometry",
]
