"""Scene files, point files and number formatting.

Scene JSON::

    {
      "dimension": 2,
      "units": "natural",
      "bodies":   [{"type": "polygon", "vertices": [[-1, -1], ...], "a": 0, "b": 1}],
      "measures": [{"atoms": [{"type": "point", "x": [0, 0], "m": 4}]}]
    }

Body types are ``polygon`` (``vertices``), ``disk`` (``radius``, optional
``center``) and the symmetric 3D kinds ``sphere-shell``, ``solid-ball``,
``solid-cylinder`` and ``cone-surface`` (``R`` plus ``L`` or ``h``).  ``a``
weights the boundary measure and ``b`` the volume measure.

Floats in JSON are written with ``repr``, the shortest string that reads back
to the same double; CSV cells use ``.17g``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .geometry import ConvexPolygon, Disk, SymmetricBody3D, validate_polygon
from .measure import AtomicMeasure, BodyMeasure
from .potential import EPS0_SI, ElectroConstants, Kernel

UNITS = ("natural", "si")


def fmt(v):
    """One CSV cell; floats keep 17 significant digits."""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def json_text(obj):
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# bodies

def body_to_dict(bm):
    body = bm.body
    if isinstance(body, ConvexPolygon):
        d = {"type": "polygon", "vertices": [list(v) for v in body.vertices]}
    elif isinstance(body, Disk):
        d = {"type": "disk", "radius": body.radius, "center": list(body.center)}
    else:
        d = {"type": body.kind, "R": body.R}
        if body.L is not None:
            d["L"] = body.L
        if body.h is not None:
            d["h"] = body.h
    d["a"] = bm.a
    d["b"] = bm.b
    return d


def body_from_dict(d):
    kind = d.get("type")
    if kind == "polygon":
        body = validate_polygon(d["vertices"])
        a, b = 0.0, 1.0
    elif kind == "disk":
        body = Disk(float(d["radius"]), tuple(float(c) for c in d.get("center", (0.0, 0.0))))
        a, b = 0.0, 1.0
    elif kind in ("sphere-shell", "cone-surface"):
        body = SymmetricBody3D(kind, float(d["R"]), d.get("L"), d.get("h"))
        a, b = 1.0, 0.0
    elif kind in ("solid-ball", "solid-cylinder"):
        body = SymmetricBody3D(kind, float(d["R"]), d.get("L"), d.get("h"))
        a, b = 0.0, 1.0
    else:
        raise ValueError(f"unknown body type {kind!r}")
    return BodyMeasure(body, float(d.get("a", a)), float(d.get("b", b)))


# ---------------------------------------------------------------------------
# scenes

@dataclass
class Scene:
    dimension: int
    bodies: list = field(default_factory=list)
    measures: list = field(default_factory=list)
    units: str = "natural"

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ValueError("dimension must be 1, 2 or 3")
        if self.units not in UNITS:
            raise ValueError(f"units must be one of {UNITS}")
        for bm in self.bodies:
            if bm.dim != self.dimension:
                raise ValueError("body dimension differs from the scene dimension")
        for m in self.measures:
            if m.dim is not None and m.dim != self.dimension:
                raise ValueError("measure dimension differs from the scene dimension")

    @property
    def kernel(self):
        return Kernel(self.dimension)

    @property
    def constants(self):
        """Natural units take ``eps0 = 1``; SI uses the vacuum permittivity."""
        return ElectroConstants.from_eps0(EPS0_SI if self.units == "si" else 1.0)

    def potential_scale(self):
        """Factor turning a kernel potential into an electrostatic one."""
        return 1.0 / self.constants.eps0

    def objects(self):
        """``(label, measure)`` for every body and measure in file order."""
        return [(f"body{i}", b) for i, b in enumerate(self.bodies)] + [
            (f"measure{i}", m) for i, m in enumerate(self.measures)
        ]

    def to_dict(self):
        return {
            "dimension": self.dimension,
            "units": self.units,
            "bodies": [body_to_dict(b) for b in self.bodies],
            "measures": [m.to_dict() for m in self.measures],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            dimension=int(d["dimension"]),
            bodies=[body_from_dict(b) for b in d.get("bodies", [])],
            measures=[AtomicMeasure.from_dict(m) for m in d.get("measures", [])],
            units=d.get("units", "natural"),
        )


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_scene(path):
    return Scene.from_dict(read_json(path))


def load_polygon(path):
    """A polygon from ``{"vertices": ...}`` or from the first polygon body of a scene."""
    d = read_json(path)
    if isinstance(d, list):
        return validate_polygon(d)
    if "vertices" in d:
        return validate_polygon(d["vertices"])
    for b in d.get("bodies", []):
        if b.get("type") == "polygon":
            return validate_polygon(b["vertices"])
    raise ValueError(f"{path}: no polygon found")


def load_points(path, dim):
    """Points from a CSV file (optional header row) or a JSON list of lists.

    An empty file yields zero points.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        pts = json.loads(text)
    else:
        pts = []
        for n, row in enumerate(csv.reader(io.StringIO(text))):
            row = [c.strip() for c in row if c.strip()]
            if not row or row[0].startswith("#"):
                continue
            try:
                pts.append([float(c) for c in row])
            except ValueError:
                if n == 0 and not pts:
                    continue  # header
                raise ValueError(f"{path}: malformed row {n + 1}: {row}") from None
    arr = np.asarray(pts, dtype=float).reshape(-1, dim) if pts else np.zeros((0, dim))
    if pts and any(len(p) != dim for p in pts):
        raise ValueError(f"{path}: points must have {dim} coordinates")
    return arr
