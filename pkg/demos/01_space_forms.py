"""Kahler space forms in an affine chart.

flat C^2, complex hyperbolic CH^2 and complex projective CP^2 carry the
metrics h = (1/2) dd-bar phi of their potentials. We check the curvature
normalization (holomorphic sections 4k, totally real sections k), the
distinguished potential Phi of the geodesic distance (D^{1,1}Phi = I,
box Phi = m + 1) and the Hessian of the distance function.
"""

import math

from kahlercheck import ambient as A
from kahlercheck import verify as V

for space in (A.flat(2), A.complex_hyperbolic(2), A.complex_projective(2)):
    curv = V.check_curvature_normalization(space)
    pot = V.check_potential_hessian(space)
    print(f"{space.name:>22}: kappa = {space.kappa:+.0f}")
    print(f"    holomorphic sections 4k, worst error {curv.metadata['holomorphic_max_error']:.1e}")
    print(f"    totally real sections k, worst error {curv.metadata['totally_real_max_error']:.1e}")
    print(f"    D11 Phi = I and box Phi = m+1, worst error {pot.residual:.1e}")

# Along a geodesic sphere of radius r the Hessian of r has eigenvalues
# 0 (radial), the T-direction value and the contact value.
ch = A.complex_hyperbolic(2)
radial, alpha, contact = V.hessian_r_eigenvalues(ch, 0.5)[:3]
print(f"\nHess r on CH^2 at r = 0.5: T-direction {alpha:.6f} (2 coth 1 = {2 / math.tanh(1):.6f}),")
print(f"    contact {contact:.6f} (coth 0.5 = {1 / math.tanh(0.5):.6f})")
print(f"Hess r check against autodiff: {V.check_hessian_r(ch).status}")
