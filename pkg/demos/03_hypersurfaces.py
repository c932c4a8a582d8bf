"""Shape operators of geodesic spheres and tubes.

Spheres in the three space forms and the tube of radius 0.4 about CP^1 in
CP^3 are Hopf hypersurfaces: T = J nu is a principal direction. Their
principal curvatures are constant and match closed forms; the Minkowski
formula 2m |Sigma| = int H_b <grad Phi, nu> holds for spheres.
"""

import math

from kahlercheck import ambient as A
from kahlercheck import hypersurface as H
from kahlercheck import verify as V

surfaces = [
    ("sphere flat a=1", H.sphere(A.flat(2), 1.0)),
    ("sphere CH a=0.5", H.sphere(A.complex_hyperbolic(2), 0.5)),
    ("sphere CP a=pi/6", H.sphere(A.complex_projective(2), math.pi / 6)),
    ("tube CP^3 k=1 a=0.4", H.tube(A.complex_projective(3), 1, 0.4)),
]
for label, s in surfaces:
    spec = H.shape_spectrum(s, s.sample(1, 0)[0])
    clusters = ", ".join(f"{v:.6f} x{k}" for v, k in spec.clusters)
    print(f"{label:>20}: {clusters}; T carries {spec.t_eigenvalue:.6f}")
    print(f"{'':>20}  closed-form residual {V.check_spectrum(s).residual:.1e}")

for label, s in surfaces[:3]:
    rep = V.check_minkowski(s, order=16)
    print(f"Minkowski on {label:>17}: 2m|Sigma| = {rep.lhs:.9f}, int H_b <grad Phi, nu> = {rep.rhs:.9f}")

ell = H.ellipsoid(A.flat(2), [1.0, 1.2])
print(f"\nellipsoid (1, 1.2): Hopf residual {V.check_hopf(ell).residual:.3f}, so Minkowski is {V.check_minkowski(ell).status}")
