"""A uniformly charged sphere looks like a point charge from outside.

Compares three numbers at each radius: the Gauss-law closed form for the
shell, the potential of a point charge of the same total at the centre, and
ring-by-ring quadrature over the shell surface.
"""

import math

import numpy as np

from motherbody import BodyMeasure, ElectroConstants, Kernel, SymmetricBody3D
from motherbody.potential import body_potential_many, shell_potential_closed

R, sigma = 1.0, 1.0
consts = ElectroConstants.from_eps0(1.0)
q = 4 * math.pi * R**2 * sigma
shell = BodyMeasure(SymmetricBody3D("sphere-shell", R), sigma, 0.0)

radii = np.array([1.5, 2.0, 4.0, 8.0])
quad, err = body_potential_many(Kernel(3), shell, np.column_stack([0 * radii, 0 * radii, radii]), rtol=1e-12)

print(f"{'r':>5} {'shell':>12} {'point':>12} {'quadrature':>12} {'est. error':>10}")
for r, u, e in zip(radii, quad, err):
    print(f"{r:5.1f} {shell_potential_closed(R, sigma, r, consts):12.9f} "
          f"{consts.kappa * q / r:12.9f} {u:12.9f} {e:10.1e}")

# inside the shell the potential is flat, the point charge keeps growing
inside, _ = body_potential_many(Kernel(3), shell, np.array([[0.3, 0.0, 0.0]]), rtol=1e-12)
print(f"\nat r = 0.3: shell {inside[0]:.6f}, point {q / (4 * math.pi * 0.3):.6f}")
