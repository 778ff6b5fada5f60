"""A charged conical surface and a line density on its axis.

At the apex the axis density ``2 pi R_i sigma`` (linear in height) gives the
same potential as the surface.  Away from the apex it does not, and the two
densities do not even carry the same charge.
"""

from motherbody import BodyMeasure, SymmetricBody3D, analytic_mother
from motherbody.measure import total_mass
from motherbody.potential import cone_apex_potential_closed, cone_axis_mother_potential
from motherbody.verify import reproduce

R = h = sigma = 1.0
print("apex, surface:", cone_apex_potential_closed(R, h, sigma, 1.0))
print("apex, axis   :", cone_axis_mother_potential(R, h, sigma, 1.0))

cone = BodyMeasure(SymmetricBody3D("cone-surface", R, h=h), sigma, 0.0)
print("\ncharge on the surface     :", total_mass(cone))
print("charge on the axis density:", total_mass(analytic_mother(cone)))
print("mass-matched axis density :", total_mass(analytic_mother(cone, cone_density="mass-matched")))

apex, off = reproduce("cone")
worst = max(off.rows, key=lambda row: row[-1])
print(f"\nworst off-apex relative mismatch {worst[-1]:.3f} at {tuple(round(c, 3) for c in worst[:3])}")
