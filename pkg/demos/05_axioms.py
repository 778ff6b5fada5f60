"""The five axiom checks on a good pairing and on four deliberate failures."""

import math

from motherbody import (
    AtomicMeasure,
    AxiomConfig,
    BodyMeasure,
    Disk,
    FitConfig,
    PointMass,
    SegmentDensity,
    mother_of_polygon,
    validate_polygon,
    verify_all,
)


def show(label, report):
    marks = " ".join("ok " if r.passed else "BAD" for r in report.results())
    print(f"{label:<28} {marks}   overall {report.overall}")


disk = BodyMeasure(Disk(1.0), 0.0, 1.0)
square = validate_polygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
fit, _ = mother_of_polygon(square, FitConfig.default(square))

print(f"{'':<28} 1   2   3   4   5")
show("disk / centre point", verify_all(disk, AtomicMeasure([PointMass((0, 0), math.pi)])))
show("square / fitted diagonals", verify_all(square, fit, AxiomConfig.fitted()))
show("disk / off-centre point", verify_all(disk, AtomicMeasure([PointMass((0.5, 0), math.pi)])))

atoms = list(fit.atoms)
lam = list(atoms[0].lam)
lam[4] = -0.01
atoms[0] = SegmentDensity(atoms[0].p0, atoms[0].p1, lam)
show("square / negative sample", verify_all(square, AtomicMeasure(atoms), AxiomConfig.fitted()))
show("square / itself", verify_all(square, BodyMeasure(square, 0.0, 1.0)))
show("square / its boundary", verify_all(square, BodyMeasure(square, 1.0, 0.0)))
