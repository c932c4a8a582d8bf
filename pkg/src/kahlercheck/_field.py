"""Scalar fields on a chart and their second-order jets."""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import jax
import jax.numpy as jnp
import numpy as np

from ._complex import to_complex


@dataclass(frozen=True)
class Jet2:
    """Value, real gradient and real Hessian of a complex field at a point."""

    value: complex
    grad: jnp.ndarray
    hess: jnp.ndarray


def _lift(other):
    if isinstance(other, ScalarField):
        return other
    c = complex(other)
    return ScalarField(lambda z: c + 0.0 * z[0], name=repr(other))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A complex-valued field given by a JAX-traceable function of ``z``.

    ``fn`` receives the complex coordinate vector ``z`` (shape ``(n,)``) and
    returns a complex scalar. Built from ``jax.numpy`` primitives it is
    differentiated exactly; there is no finite differencing anywhere on the
    primary path.
    """

    fn: Callable
    name: str = "F"

    def __call__(self, x):
        return jnp.asarray(self.fn(to_complex(x)), dtype=complex)

    def _re_im(self, x):
        v = self(x)
        return jnp.stack([v.real, v.imag])

    def grad(self, x):
        g = jax.jacfwd(self._re_im)(x)
        return g[0] + 1j * g[1]

    def hess(self, x):
        h = jax.jacfwd(jax.jacfwd(self._re_im))(x)
        return h[0] + 1j * h[1]

    def jet(self, x) -> Jet2:
        x = jnp.asarray(x, dtype=float)
        return Jet2(self(x), self.grad(x), self.hess(x))

    # field algebra -------------------------------------------------------
    def __add__(self, other):
        o = _lift(other)
        return ScalarField(lambda z: self.fn(z) + o.fn(z), f"({self.name} + {o.name})")

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        return ScalarField(lambda z: self.fn(z) - o.fn(z), f"({self.name} - {o.name})")

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        o = _lift(other)
        return ScalarField(lambda z: self.fn(z) * o.fn(z), f"{self.name}*{o.name}")

    __rmul__ = __mul__

    def __neg__(self):
        return ScalarField(lambda z: -self.fn(z), f"-{self.name}")

    def __pow__(self, k: int):
        return ScalarField(lambda z: self.fn(z) ** k, f"{self.name}**{k}")

    def conj(self):
        return ScalarField(lambda z: jnp.conj(self.fn(z)), f"conj({self.name})")

    @property
    def real(self):
        return ScalarField(lambda z: jnp.real(self.fn(z)) + 0j, f"Re({self.name})")

    @property
    def imag(self):
        return ScalarField(lambda z: jnp.imag(self.fn(z)) + 0j, f"Im({self.name})")

    def exp(self):
        return ScalarField(lambda z: jnp.exp(self.fn(z)), f"exp({self.name})")

    def log(self):
        return ScalarField(lambda z: jnp.log(self.fn(z)), f"log({self.name})")


def coordinate(i: int) -> ScalarField:
    """The holomorphic coordinate ``z_i`` (0-based)."""
    return ScalarField(lambda z: z[i], f"z{i + 1}")


def norm2() -> ScalarField:
    """``|z|^2``, written as ``z . conj(z)`` so that it is smooth at 0."""
    return ScalarField(lambda z: jnp.sum(z * jnp.conj(z)), "|z|^2")


def constant(c) -> ScalarField:
    return _lift(c)


# ---------------------------------------------------------------------------
# compiled-once families
#
# Fields are pytrees. A plain ScalarField is a leafless node keyed by its
# identity, so every distinct field gets its own compiled kernel. A
# PolynomialField keeps its coefficients as leaves: all polynomials of the
# same (n, degree) share one kernel, which makes test batteries cheap.


def _field_flatten(f):
    return (), f


def _field_unflatten(aux, _):
    return aux


jax.tree_util.register_pytree_node(ScalarField, _field_flatten, _field_unflatten)


@lru_cache(maxsize=None)
def monomial_exponents(n: int, degree: int) -> np.ndarray:
    """Exponent rows ``(a_1..a_n, b_1..b_n)`` of ``z^a conj(z)^b``, total
    degree at most ``degree``, in a fixed graded-lexicographic order."""
    rows = [
        e
        for d in range(degree + 1)
        for e in itertools.product(range(d + 1), repeat=2 * n)
        if sum(e) == d
    ]
    return np.asarray(rows, dtype=int)


class PolynomialField(ScalarField):
    """``sum_k c_k z^{a_k} conj(z)^{b_k}`` over all monomials of bounded degree.

    Powers are gathered from tables of ``1, z, z^2, ...`` rather than computed
    with ``**`` so that derivatives stay finite at ``z = 0``.
    """

    def __init__(self, n: int, degree: int, coeffs, name: str = "P"):
        n_mono = len(monomial_exponents(n, degree))
        coeffs = jnp.asarray(coeffs, dtype=complex)
        if coeffs.shape != (n_mono,):
            raise ValueError(f"expected {n_mono} coefficients, got {coeffs.shape}")
        self._init(n, degree, coeffs, name)

    def _init(self, n, degree, coeffs, name):
        exps = monomial_exponents(n, degree)
        idx = np.arange(n)

        def fn(z):
            zs = jnp.stack([jnp.ones_like(z)] + [z] * degree)
            powers = jnp.cumprod(zs, axis=0)  # powers[k, i] = z_i^k
            mono = jnp.prod(powers[exps[:, :n], idx], axis=1) * jnp.prod(
                jnp.conj(powers)[exps[:, n:], idx], axis=1
            )
            return mono @ self.coeffs

        object.__setattr__(self, "fn", fn)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_terms(cls, n: int, degree: int, terms: dict, name: str = "P"):
        """Build from ``{(a_1..a_n, b_1..b_n): coefficient}``."""
        exps = [tuple(r) for r in monomial_exponents(n, degree)]
        c = np.zeros(len(exps), dtype=complex)
        for e, v in terms.items():
            c[exps.index(tuple(e))] += v
        return cls(n, degree, c, name)


def _poly_flatten(p):
    return (p.coeffs,), (p.n, p.degree)


def _poly_unflatten(aux, leaves):
    p = object.__new__(PolynomialField)
    p._init(aux[0], aux[1], leaves[0], "P")
    return p


jax.tree_util.register_pytree_node(PolynomialField, _poly_flatten, _poly_unflatten)
