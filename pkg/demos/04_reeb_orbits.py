"""Closed and non-closed Reeb orbits on the level sphere x^2 = k."""

import math
from fractions import Fraction

from foldedtoric import reeb

for x3 in (0.0, 1.0, math.sqrt(1 / 3), 1 / 3, 0.3 * math.sqrt(2)):
    orbit = reeb.classify_orbit(x3, 1.0)
    print(f"x3 = {x3:.6f}: {orbit.kind:22s} ratio {orbit.ratio}")

# The same resonant height with exact arithmetic.
print(reeb.classify_orbit(Fraction(1, 3), Fraction(1)))

start = reeb.ReebState.on_sphere(1.0, 1 / 3)
orbit = reeb.classify_orbit(Fraction(1, 3), Fraction(1))
res = reeb.integrate_flow(start, orbit.period, 1e-3)
print(f"after one period {orbit.period:.6f}: start {res.states[0]}, end {res.final}")
print(f"drift in x3 {res.max_drift_x3:.1e}, in r^2 {res.max_drift_r2:.1e}")
