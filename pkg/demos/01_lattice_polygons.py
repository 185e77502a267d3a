"""Smooth lattice polygons and what breaks them.

Run with ``python demos/01_lattice_polygons.py``.
"""

import random

from foldedtoric.delzant import DelzantPolygon, validate_delzant, weights_at_vertex
from foldedtoric.lattice import random_affine

# The moment triangle of the projective plane is smooth at every vertex:
# the two primitive edge vectors leaving each corner form a basis of Z^2.
unit = DelzantPolygon(((0, 0), (1, 0), (0, 1)))
for i in range(len(unit)):
    print("weights at", unit.vertices[i], "->", weights_at_vertex(unit, i).edge_dirs)
print(validate_delzant(unit).messages)

# Stretch one leg and the corner at (0, 1) stops being smooth.
bad = DelzantPolygon(((0, 0), (2, 0), (0, 1)))
for line in validate_delzant(bad).messages:
    print(line)

# Smoothness only depends on the integral affine structure, so any
# relabeling by an affine map with integer linear part keeps the verdict.
rng = random.Random(0)
mu = random_affine(rng)
print("relabeled by", mu)
print("unit still smooth:", validate_delzant(unit.transform(mu)).ok)
print("bad still broken:", not validate_delzant(bad.transform(mu)).ok)
