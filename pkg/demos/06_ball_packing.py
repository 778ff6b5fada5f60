"""Disk packings as a crude mother body.

Each packing level fills more of the polygon with disjoint disks; replacing
every disk by a point mass at its centre is exact outside that disk.  The
exterior error is the uncovered area, which shrinks by roughly a quarter per
level.
"""

import math

import numpy as np

from motherbody import BodyMeasure, Kernel, ball_packing, regular_polygon, validate_polygon
from motherbody.potential import body_potential_many, potential_many

for name, poly in (("square", validate_polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])),
                   ("hexagon", regular_polygon(6, side=1.0))):
    ang = 2 * math.pi * (np.arange(64) + 0.5) / 64
    X = np.array(poly.centroid) + 2 * poly.circumradius * np.column_stack([np.cos(ang), np.sin(ang)])
    ub, _ = body_potential_many(Kernel(2), BodyMeasure(poly, 0.0, 1.0), X, rtol=1e-12)
    print(f"{name}: depth, disks, uncovered fraction, exterior error")
    for depth in range(3, 11):
        mu, residual = ball_packing(poly, depth)
        um, _ = potential_many(Kernel(2), mu, X)
        err = np.abs(um - ub).max() / np.abs(ub).max()
        print(f"  {depth:2d} {len(mu.atoms):6d}  {residual / poly.area:.4f}  {err:.4f}")
