"""Conversions between real chart coordinates and complex components.

Real coordinates are interleaved, ``(x_1, y_1, ..., x_n, y_n)``, and a
tangent vector is stored by its 2n (possibly complex) components over the
coordinate basis ``(d/dx_1, d/dy_1, ...)``.
"""

import numpy as np
import jax.numpy as jnp


def to_complex(x):
    """Complex coordinates ``z_i = x_i + i y_i`` from interleaved reals."""
    return x[..., 0::2] + 1j * x[..., 1::2]


def from_complex(z):
    """Interleaved real coordinates from complex ``z``."""
    z = jnp.asarray(z)
    out = jnp.stack([z.real, z.imag], axis=-1)
    return out.reshape(z.shape[:-1] + (2 * z.shape[-1],))


def holo_matrix(n):
    """``C`` with ``(C v)_i`` the (1,0)-component of a real-basis vector ``v``.

    A vector ``a d/dx + b d/dy`` equals ``(a + ib) d/dz + (a - ib) d/dzbar``,
    so ``C[i, 2i] = 1`` and ``C[i, 2i+1] = 1j``.
    """
    c = np.zeros((n, 2 * n), dtype=complex)
    for i in range(n):
        c[i, 2 * i] = 1.0
        c[i, 2 * i + 1] = 1j
    return c


def j_matrix(n):
    """Complex structure on real-basis components: ``(a, b) -> (-b, a)``."""
    j = np.zeros((2 * n, 2 * n))
    for i in range(n):
        j[2 * i, 2 * i + 1] = -1.0
        j[2 * i + 1, 2 * i] = 1.0
    return j


def holo_part(v):
    """(1,0)-components of a real-basis vector (last axis of length 2n)."""
    return v[..., 0::2] + 1j * v[..., 1::2]


def antiholo_part(v):
    """(0,1)-components of a real-basis vector."""
    return v[..., 0::2] - 1j * v[..., 1::2]


def from_holo(w):
    """Real-basis components of the (1,0)-vector ``w^i d/dz_i``.

    ``d/dz = (d/dx - i d/dy) / 2``.
    """
    w = jnp.asarray(w)
    out = jnp.stack([w / 2, -1j * w / 2], axis=-1)
    return out.reshape(w.shape[:-1] + (2 * w.shape[-1],))


def wirtinger_blocks(grad, hess):
    """Coordinate Wirtinger derivatives from real first and second partials.

    Returns ``(d_z F, d_zbar F, d_z d_zbar F)`` with the mixed block indexed
    ``[i, j] = d^2 F / dz_i dzbar_j``.
    """
    gx, gy = grad[..., 0::2], grad[..., 1::2]
    fz = (gx - 1j * gy) / 2
    fzb = (gx + 1j * gy) / 2
    hxx = hess[..., 0::2, 0::2]
    hxy = hess[..., 0::2, 1::2]
    hyx = hess[..., 1::2, 0::2]
    hyy = hess[..., 1::2, 1::2]
    mixed = (hxx + 1j * hxy - 1j * hyx + hyy) / 4
    return fz, fzb, mixed
