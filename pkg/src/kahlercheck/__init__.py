"""Numerical verification of integral identities on complex space forms.

Importing the package switches JAX to double precision; every check in the
library relies on float64 derivatives.
"""

import jax

jax.config.update("jax_enable_x64", True)

from .ambient import SpaceForm, flat, complex_hyperbolic, complex_projective  # noqa: E402
from .jets import ScalarField  # noqa: E402

__version__ = "0.1.0"

__all__ = [
    "SpaceForm",
    "flat",
    "complex_hyperbolic",
    "complex_projective",
    "ScalarField",
    "__version__",
]
