"""An infinite uniform cylinder and a line charge on its axis.

Outside the cylinder both give ``-(lambda / 2 pi eps0) ln(r / a)``.  The 2D
cross-section makes the same point: a uniform disk and a point mass at its
centre have identical exterior log potentials.
"""

import math

import numpy as np

from motherbody import AtomicMeasure, BodyMeasure, Disk, Kernel, PointMass
from motherbody.potential import cylinder_potential_closed, line_potential_closed, potential_many

R, rho, a = 1.0, 1.0, 2.0
lam = math.pi * R**2 * rho
for r in (3.0, 4.0, 6.0):
    cyl = cylinder_potential_closed(R, rho, r, a)
    line = line_potential_closed(lam, r, a)
    print(f"r = {r}: cylinder {cyl:+.15f}  line {line:+.15f}")

disk = BodyMeasure(Disk(R), 0.0, rho)
centre = AtomicMeasure([PointMass((0.0, 0.0), lam)])
ang = np.linspace(0, 2 * math.pi, 7)[:-1]
X = 2.5 * np.column_stack([np.cos(ang), np.sin(ang)])
u_disk, _ = potential_many(Kernel(2), disk, X, rtol=1e-12)
u_point, _ = potential_many(Kernel(2), centre, X)
print("\nmax |disk - point| on a ring of radius 2.5:", float(np.abs(u_disk - u_point).max()))
