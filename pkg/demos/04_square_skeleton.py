"""The square's mother body lives on its diagonals.

Fit a nonnegative piecewise-linear density on the medial axis so that its
exterior potential matches the uniform square, then compare it with the
exact density ``dist(x, boundary) * |n_i - n_j|`` (here ``sqrt(2) * dist``,
i.e. arclength from the corner).  The exterior data pin the density down
only weakly, so the fitted profile differs from the exact one while both
reproduce the exterior potential.
"""

import numpy as np

from motherbody import FitConfig, mother_of_polygon, validate_polygon
from motherbody.skeleton import holdout_residual, ridge_density

square = validate_polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
mu, report, basis, c = mother_of_polygon(square, FitConfig.default(square, K=16), return_basis=True)
print(f"holdout relative residual {report.holdout_relative:.1e}, mass error {report.mass_error:.1e}")
print(f"density stdev/mean {c.std() / c.mean():.2f} (a uniform density would give 0)")

exact = ridge_density(square)
far = 5.0 * np.column_stack([np.cos(np.linspace(0, 6, 40)), np.sin(np.linspace(0, 6, 40))])
print(f"exact ridge density, relative exterior residual {holdout_residual(square, exact, far):.1e}")

print("\nedge 0 profile (arclength from first node, fitted, exact):")
atom = exact.atoms[0]
for e, s, v in basis.profiles(c)[: basis.K + 1: 4]:
    print(f"  {s:5.3f}  {v:6.3f}  {atom.density(s / atom.length):6.3f}")
