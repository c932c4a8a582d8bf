"""Fixed-shape batching for compiled per-point kernels.

Compiled kernels are specialised to their input shape. Padding every batch to
one chunk length means each kernel is compiled once, however many nodes a
quadrature rule or sample set has.
"""

from functools import lru_cache

import jax
import numpy as np

CHUNK = 4096
MIN_CHUNK = 64
# values per chunk for coefficient fields (about 400 MB at n = 3, degree 4)
JET_BUDGET = 1 << 21
# compiled kernels kept alive; older ones are dropped (and recompiled on
# demand) so long sessions over many surfaces stay within memory
KERNEL_CACHE = 96


@lru_cache(maxsize=KERNEL_CACHE)
def _compiled(per_point, context, treedef):
    def run(leaves, x):
        F = jax.tree_util.tree_unflatten(treedef, leaves)
        return jax.vmap(lambda y: per_point(context, F, y))(x)

    return jax.jit(run)


def field_map(per_point, context, field, points, chunk: int = CHUNK):
    """Evaluate ``per_point(context, field, x)`` at every point.

    ``per_point`` must be a module-level function and ``context`` hashable:
    together with the field's tree structure they key the compiled kernel, so
    polynomial fields of one shape share code (see :mod:`kahlercheck._field`).
    """
    leaves, treedef = jax.tree_util.tree_flatten(field)
    fn = _compiled(per_point, context, treedef)
    return map_chunked(lambda x: fn(leaves, x), points, _budget_chunk(leaves, points, chunk))


def _budget_chunk(leaves, points, chunk):
    """Second-order jets of a coefficient field hold about
    ``coefficients * dim^2`` values per point; shrink the chunk (by powers of
    two) to keep that within ``JET_BUDGET``."""
    size = sum(int(np.size(leaf)) for leaf in leaves)
    if size == 0:
        return chunk
    dim = np.shape(np.atleast_2d(points))[1]
    while chunk > MIN_CHUNK and chunk * size * dim * dim > JET_BUDGET:
        chunk //= 2
    return chunk


def map_chunked(fn, points, chunk: int = CHUNK):
    """Apply a batched ``fn`` to ``points`` in padded chunks of one shape
(at most ``chunk`` points).

    ``fn`` returns an array or a dict of arrays with a leading batch axis;
    results are concatenated on the host in input order.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    count = len(pts)
    if count == 0:
        raise ValueError("no points")
    # small batches pad to the next power of two (at least MIN_CHUNK), which
    # keeps the set of compiled shapes small without padding 50 points to 4096
    chunk = min(chunk, max(MIN_CHUNK, 1 << (count - 1).bit_length()))
    outs = []
    for start in range(0, count, chunk):
        block = pts[start : start + chunk]
        real = len(block)
        if real < chunk:
            block = np.concatenate([block, np.repeat(block[:1], chunk - real, axis=0)])
        outs.append(jax.tree_util.tree_map(lambda a: np.asarray(a)[:real], fn(block)))
    return jax.tree_util.tree_map(lambda *parts: np.concatenate(parts), *outs)


def point_map(per_point, context, points, chunk: int = CHUNK):
    """Evaluate ``per_point(context, x)`` at every point (no field argument)."""
    return field_map(_drop_field, (per_point, context), None, points, chunk)


def _drop_field(ctx, _field, x):
    per_point, context = ctx
    return per_point(context, x)
