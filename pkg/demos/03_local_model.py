"""The near-symplectic local model around a vanishing circle."""

import math

import numpy as np

from foldedtoric import local_models as lm

p = lm.Point4(0.0, 1.0, 1.0, 1.0)
print("omega at (0, 1, 1, 1):")
print(lm.omega_A(p))
print("omega ^ omega coefficient:", lm.symplectic_volume(p))

rep = lm.extract_L(lm.omega_A)
print("linearization along the circle:")
print(np.round(rep.matrix, 6))
print("rank", rep.rank, "signature", rep.signature)

# Crossing the seam flips x2 and x3; the form is unchanged by that gluing.
print("seam defect:", lm.seam_defect([2 * math.pi, 1.0, 1.0, 1.0]))

# Away from the circle the form is invertible and every covector has a
# unique dual vector.
eta = np.array([0.0, 0.0, 1.0, 0.0])
x = lm.solve_contraction([0.0, 0.3, -0.2, 0.5], eta)
print("vector dual to dx2:", x)

# Contracting with the two circle directions gives the moment coordinates,
# the first one with a minus sign.
c = lm.CylPoint(alpha=0.4, r=0.6, theta=1.0, z=0.3)
d = lm.moment_condition_defects(c)
print("moment at", c, "->", lm.moment_fold(c))
print(f"alpha residual (+) {d.alpha_plus:.2e}   (-) {d.alpha_minus:.2e}")
print(f"theta residual (+) {d.theta_plus:.2e}")
