"""The standard fold and a folded polygon built around it."""

import numpy as np

from foldedtoric.assembly import cp2cp2_polygon
from foldedtoric.folded import euler_characteristic, render_image, standard_fold, validate_fold_properties, validate_folded_polygon
from foldedtoric.lattice import AffineMapZ

# The fold sends the upper half-plane onto the plane minus a ray, and
# folds its boundary line in half onto that ray.
for x in (-1.0, -0.5, 0.0, 0.5, 1.0):
    print(f"boundary point ({x:+.1f}, 0) ->", standard_fold(x, 0.0))
print("interior point (0, 2) ->", standard_fold(0.0, 2.0))

report = validate_fold_properties(AffineMapZ(), grid=50)
print("fold properties hold on a 50x50 grid:", report.ok)

# A map that squares x1 but forgets the mixing term is not injective.
broken = validate_fold_properties(AffineMapZ(), grid=50, base_map=lambda a, b: (a * a - 0.5 * b, b))
print("x1^2 - x2/2, x2 passes:", broken.ok, broken.failures[:1])

poly = cp2cp2_polygon()
print(validate_folded_polygon(poly).messages)
print("corners:", euler_characteristic(poly))

with open("cp2cp2.svg", "w", encoding="utf-8") as fh:
    fh.write(render_image(poly))
print("wrote cp2cp2.svg")

# Image of a coarse grid of the half-plane, handy for plotting by hand.
xs, ys = np.meshgrid(np.linspace(-1, 1, 5), np.linspace(0, 1, 3))
p1, p2 = standard_fold(xs, ys)
print(np.round(np.stack([p1, p2], axis=-1), 3))
