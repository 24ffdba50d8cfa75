"""Planar regions enclosed by shapes and their RCC8 classification.

Regions are the bounded faces of a shape's segment arrangement, each reported
by its outer boundary.  Connect, Part and Overlap are realized point-set
topologically (closure intersection, closure containment, interior
intersection with positive area); the eight RCC8 relations follow from them.
Polygon predicates run through shapely on coordinates snapped to a 1e-9 grid,
so points that agree within tolerance touch exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Sequence, Union

import shapely
from shapely.geometry import LineString, Polygon
from shapely.geometry.polygon import orient
from shapely.ops import polygonize, unary_union

from .shapes import EPS_ABS, GRID, Point, Shape

SNAP = 1e-9


class RegionError(ValueError):
    pass


class RegionRelation(str, Enum):
    DC = "DC"
    EC = "EC"
    PO = "PO"
    TPP = "TPP"
    NTPP = "NTPP"
    EQ = "EQ"
    TPPi = "TPPi"
    NTPPi = "NTPPi"

    def inverse(self) -> "RegionRelation":
        return _INVERSE.get(self, self)

    def __str__(self):
        return self.value


_INVERSE = {
    RegionRelation.TPP: RegionRelation.TPPi,
    RegionRelation.TPPi: RegionRelation.TPP,
    RegionRelation.NTPP: RegionRelation.NTPPi,
    RegionRelation.NTPPi: RegionRelation.NTPP,
}

R = RegionRelation
PREPOSITION_MAP: dict[str, frozenset[RegionRelation]] = {
    "at": frozenset({R.TPP, R.NTPP}),
    "on": frozenset({R.EC, R.TPP}),
    "in": frozenset({R.EC, R.TPP, R.NTPP}),
}

# literal region strings carried by the semantic structures
REGION_STRINGS = {"at": "ttp-nttp", "on": "ec-ttp", "in": "ec-ttp-nttp"}
_REGION_TOKENS = {"ec": R.EC, "ttp": R.TPP, "tpp": R.TPP, "nttp": R.NTPP, "ntpp": R.NTPP}


def relations_of(region: str) -> frozenset[RegionRelation]:
    """Decode a region string such as ``"ec-ttp"``."""
    try:
        return frozenset(_REGION_TOKENS[tok] for tok in region.lower().split("-"))
    except KeyError as exc:
        raise RegionError(f"unknown region string {region!r}") from exc


@dataclass(frozen=True)
class Region:
    boundary: tuple[Point, ...]
    source: Shape | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.boundary) < 3:
            raise RegionError("region needs at least three vertices")
        poly = Polygon(self.boundary)
        if not poly.is_valid or poly.area <= EPS_ABS:
            raise RegionError("region boundary must be simple with positive area")

    @classmethod
    def from_polygon(cls, *vertices, source=None) -> "Region":
        poly = orient(Polygon([tuple(map(float, v)) for v in vertices]), 1.0)
        return cls(_ring_points(poly.exterior), source)

    @cached_property
    def polygon(self) -> Polygon:
        return shapely.set_precision(Polygon(self.boundary), SNAP)

    @property
    def area(self) -> float:
        return Polygon(self.boundary).area


Regions = Union[Region, Sequence[Region]]


def _ring_points(ring) -> tuple[Point, ...]:
    pts = [Point(float(x), float(y)) for x, y in list(ring.coords)[:-1]]
    # drop vertices where the boundary runs straight on
    out = []
    n = len(pts)
    for i, p in enumerate(pts):
        a, b = pts[i - 1], pts[(i + 1) % n]
        cross = (p.x - a.x) * (b.y - p.y) - (p.y - a.y) * (b.x - p.x)
        scale = math.hypot(p.x - a.x, p.y - a.y) * math.hypot(b.x - p.x, b.y - p.y)
        if abs(cross) > 1e-12 * max(scale, 1e-300):
            out.append(p)
    if len(out) < 3:
        return tuple(out)
    start = min(range(len(out)), key=lambda i: (round(out[i].x / GRID), round(out[i].y / GRID)))
    return tuple(out[start:] + out[:start])


def extract_regions(shape: Shape) -> list[Region]:
    """Minimal closed cycles of ``shape`` as counterclockwise simple polygons."""
    if not shape.segments:
        return []
    noded = unary_union([LineString([s.p, s.q]) for s in shape.segments])
    seen: dict[tuple, Region] = {}
    for face in polygonize(noded):
        outer = orient(Polygon(face.exterior), 1.0)
        if outer.area <= EPS_ABS:
            continue
        pts = _ring_points(outer.exterior)
        key = tuple((round(p.x / GRID), round(p.y / GRID)) for p in pts)
        if key not in seen:
            seen[key] = Region(pts, shape)
    regions = list(seen.values())
    regions.sort(key=lambda r: (tuple((round(p.x / GRID), round(p.y / GRID)) for p in r.boundary), r.area))
    return regions


def _geom(x: Regions):
    if isinstance(x, Region):
        return x.polygon
    polys = [r.polygon for r in x]
    if not polys:
        raise RegionError("empty region set")
    if len(polys) == 1:
        return polys[0]
    return shapely.set_precision(unary_union(polys), SNAP)


def connect(x: Regions, y: Regions) -> bool:
    return _geom(x).intersects(_geom(y))


def part(x: Regions, y: Regions) -> bool:
    return _geom(x).covered_by(_geom(y))


def overlap(x: Regions, y: Regions) -> bool:
    return _geom(x).relate_pattern(_geom(y), "T********")


def boundaries_touch(x: Regions, y: Regions) -> bool:
    return _geom(x).boundary.intersects(_geom(y).boundary)


def classify(x: Regions, y: Regions) -> RegionRelation:
    gx, gy = _geom(x), _geom(y)
    if not gx.intersects(gy):
        return R.DC
    if not gx.relate_pattern(gy, "T********"):
        return R.EC
    pxy, pyx = gx.covered_by(gy), gy.covered_by(gx)
    if pxy and pyx:
        return R.EQ
    if pxy or pyx:
        touch = gx.boundary.intersects(gy.boundary)
        if pxy:
            return R.TPP if touch else R.NTPP
        return R.TPPi if touch else R.NTPPi
    return R.PO


def check_preposition(prep: str, trajector: Regions, landmark: Regions) -> bool:
    try:
        allowed = PREPOSITION_MAP[prep]
    except KeyError:
        raise RegionError(f"preposition {prep!r} has no region mapping") from None
    return classify(trajector, landmark) in allowed


def shape_relation(a: Shape, b: Shape) -> RegionRelation | None:
    """Relation between the regions of two shapes, or None if either is open."""
    ra, rb = extract_regions(a), extract_regions(b)
    if not ra or not rb:
        return None
    return classify(ra, rb)
