"""Theorem invHb, Theorem iso and the rigidity chain.

Both inequalities are equalities on geodesic balls and strict on other
strictly pseudoconvex domains (here chart ellipsoids). The rigidity chain
checks the Codazzi operator (Cod), the quadratic relation (qr), the tube
relation (fundB) and the comparison Lemma comp.
"""

from kahlercheck import ambient as A
from kahlercheck import hypersurface as H
from kahlercheck import verify as V

cases = [
    ("ball flat a=1", H.sphere(A.flat(2), 1.0)),
    ("ball CH a=0.7", H.sphere(A.complex_hyperbolic(2), 0.7)),
    ("ellipsoid (1, 1.2)", H.ellipsoid(A.flat(2), [1.0, 1.2])),
    ("ellipsoid (1, 1.5)", H.ellipsoid(A.flat(2), [1.0, 1.5])),
]
print(f"{'domain':>20} {'invHb margin':>14} {'iso margin':>14}")
for label, s in cases:
    a, b = V.check_invHb(s, 16, 12, 8), V.check_iso(s, 16, 12, 8)
    print(f"{label:>20} {a.residual:14.2e} {b.residual:14.2e}")

# Ball margins are zero up to quadrature error at these modest orders (the
# inf of H_b is refined by L-BFGS-B); ellipsoid margins are far from zero.

print()
for label, s in [("CH sphere a=0.5", H.sphere(A.complex_hyperbolic(2), 0.5)), ("CP^3 tube", H.tube(A.complex_projective(3), 1, 0.4))]:
    for rep in V.check_rigidity_chain(s):
        print(f"{label:>16} {rep.check_id:>15}: residual {rep.residual:.2e} ({rep.status})")
