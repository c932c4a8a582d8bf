"""Product Gauss-Legendre quadrature over closed hypersurfaces and the
star-shaped domains they bound.

Surfaces are integrated over the amplitude/phase box of the unit sphere,
domains over ``[0, 1] x box`` via ``x = s * radial(u) * u``. Every result
carries an error estimate: the difference from the same rule at half order.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import jax
import jax.numpy as jnp
import numpy as np

from ._batch import point_map
from .ambient import real_metric
from .errors import DegenerateGeometryError, QuadratureError
from .hypersurface import Hypersurface, sphere_map

DEFAULT_SURFACE_ORDER = 32
DEFAULT_RADIAL_ORDER = 24


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor-product Gauss-Legendre rule over an axis-aligned box."""

    box: tuple
    orders: tuple
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def measure(self) -> float:
        return float(np.prod([hi - lo for lo, hi in self.box]))


@lru_cache(maxsize=None)
def _gl(order: int):
    return np.polynomial.legendre.leggauss(order)


def product_rule(box: Sequence, orders) -> QuadratureRule:
    """Gauss-Legendre product rule; ``orders`` is an int or one per axis."""
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    if np.isscalar(orders):
        orders = (int(orders),) * len(box)
    orders = tuple(int(q) for q in orders)
    axes_x, axes_w = [], []
    for (lo, hi), q in zip(box, orders):
        t, w = _gl(q)
        axes_x.append(0.5 * (hi - lo) * t + 0.5 * (hi + lo))
        axes_w.append(0.5 * (hi - lo) * w)
    grids = np.meshgrid(*axes_x, indexing="ij")
    wgrids = np.meshgrid(*axes_w, indexing="ij")
    nodes = np.stack([gr.ravel() for gr in grids], axis=1)
    weights = np.prod(np.stack([w.ravel() for w in wgrids], axis=1), axis=1)
    return QuadratureRule(box, orders, nodes, weights)


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error_estimate: float
    node_count: int
    order: int
    history: tuple = ()

    @property
    def real(self) -> float:
        return float(np.real(self.value))


def weighted_sum(values, weights):
    """Deterministic (pairwise) reduction of node values."""
    v = np.asarray(values)
    w = np.asarray(weights)
    if v.ndim > 1:
        w = w.reshape((-1,) + (1,) * (v.ndim - 1))
    return np.sum(v * w, axis=0)


# ---------------------------------------------------------------------------
# node sets


def _surface_node(surface: Hypersurface, theta):
    x = surface.param(theta)
    jac = jax.jacfwd(surface.param)(theta)
    g = real_metric(surface.space, x)
    return x, jnp.linalg.det(jac.T @ g @ jac)


def _frozen(*arrays):
    for a in arrays:
        a.setflags(write=False)
    return arrays


def surface_nodes(surface: Hypersurface, order: int):
    """Chart points and area weights of the order-``order`` surface rule
    (cached per surface; the arrays are read-only)."""
    return _surface_nodes(surface, int(order))


@lru_cache(maxsize=64)
def _surface_nodes(surface: Hypersurface, order: int):
    if not surface.closed:
        raise QuadratureError(f"{surface.tag} has no closed parametrization")
    rule = product_rule(surface.param_box, order)
    x, det = point_map(_surface_node, surface, rule.nodes)
    if np.min(det) <= 0:
        raise DegenerateGeometryError("parametrization is not immersive at a node")
    return _frozen(np.array(x), rule.weights * np.sqrt(det))


def _volume_node(surface: Hypersurface, st):
    def place(s):
        u = sphere_map(s[1:], surface.n)
        return s[0] * surface.radial(u) * u

    x = place(st)
    jac = jax.jacfwd(place)(st)
    g = real_metric(surface.space, x)
    return x, jnp.abs(jnp.linalg.det(jac)) * jnp.sqrt(jnp.linalg.det(g))


def volume_nodes(surface: Hypersurface, order: int, radial_order: int = None):
    """Points and volume weights for the domain bounded by ``surface``
    (cached; read-only arrays)."""
    return _volume_nodes(surface, int(order), int(radial_order or order))


@lru_cache(maxsize=64)
def _volume_nodes(surface: Hypersurface, order: int, radial_order: int):
    if not surface.closed:
        raise QuadratureError(f"{surface.tag} does not bound a star-shaped domain")
    box = ((0.0, 1.0),) + tuple(surface.param_box)
    orders = (radial_order,) + (order,) * len(surface.param_box)
    rule = product_rule(box, orders)
    x, dens = point_map(_volume_node, surface, rule.nodes)
    if not np.all(np.isfinite(dens)):
        raise DegenerateGeometryError("volume density failed near the chart boundary")
    return _frozen(np.array(x), rule.weights * dens)


# ---------------------------------------------------------------------------
# integrals


def _with_estimate(evaluate: Callable, order: int, radial_order=None) -> IntegralResult:
    hi, count = evaluate(order, radial_order)
    lo, _ = evaluate(max(order // 2, 1), radial_order and max(radial_order // 2, 1))
    return IntegralResult(complex(hi), float(abs(hi - lo)), count, order)


def surface_integral(surface: Hypersurface, integrand: Callable, order: int = DEFAULT_SURFACE_ORDER):
    """``integral over the surface of integrand(points)``.

    ``integrand`` maps an ``(N, 2n)`` array of surface points to N values
    (it typically builds frames from them).
    """

    def evaluate(q, _):
        x, w = surface_nodes(surface, q)
        return weighted_sum(integrand(x), w), len(w)

    return _with_estimate(evaluate, order)


def volume_integral(
    surface: Hypersurface,
    integrand: Callable,
    order: int = DEFAULT_SURFACE_ORDER,
    radial_order: int = DEFAULT_RADIAL_ORDER,
):
    """Integral over the star-shaped domain bounded by ``surface``."""

    def evaluate(q, radial_order):
        x, w = volume_nodes(surface, q, radial_order)
        return weighted_sum(integrand(x), w), len(w)

    return _with_estimate(evaluate, order, radial_order)


def area(surface: Hypersurface, order: int = DEFAULT_SURFACE_ORDER) -> IntegralResult:
    return surface_integral(surface, lambda x: np.ones(len(x)), order)


def volume(surface: Hypersurface, order: int = DEFAULT_SURFACE_ORDER, radial_order=DEFAULT_RADIAL_ORDER):
    return volume_integral(surface, lambda x: np.ones(len(x)), order, radial_order)


def converge(op: Callable, tol: float, start: int = 4, max_order: int = 64) -> IntegralResult:
    """Double the order until successive values differ by at most ``tol``.

    ``op(order)`` returns a number. Raises :class:`QuadratureError` with the
    full history when ``max_order`` is reached first.
    """
    history = []
    q = start
    prev = complex(op(q))
    history.append((q, prev, np.inf))
    while q * 2 <= max_order:
        q *= 2
        cur = complex(op(q))
        err = abs(cur - prev)
        history.append((q, cur, err))
        if err <= tol:
            return IntegralResult(cur, err, -1, q, tuple(history))
        prev = cur
    raise QuadratureError(
        f"no convergence to {tol:g} by order {max_order}", history
    )
