"""Moment components on the fold model and the hypersurface that separates them."""

import numpy as np

from foldedtoric import morse

for xi in ((1, 0), (-1, 0), (1, 0.2), (0, 1)):
    rep = morse.analyze(xi, separatrix_samples=None)
    print(f"xi = {xi}: critical set {rep.critical_set}, Morse-Bott {rep.is_morse_bott}, signature {rep.signature}")

print(morse.analyze((0, 1)).lines())

# For b = 0 the hypersurface is the plane z = 0, whose image is the
# negative p1 axis; tilting b bends the image but keeps it tangent to the
# axis at the origin.
for xi in ((1, 0), (1, 0.2), (1, 0.5)):
    curve = morse.separatrix(xi, samples=8)
    print(xi, "slope at origin", f"{morse.tangency_slope(morse.separatrix(xi)):.2e}")
    print(np.round(curve, 4))
