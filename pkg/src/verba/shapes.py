"""Line-segment shapes with labelled points.

A :class:`Shape` is held in maximal form: segments lying on a common carrier
line that overlap or abut are merged, so any two segment lists covering the
same point set produce equal shapes.  Sum, product and difference act on the
one-dimensional parts; crossings of non-collinear segments never create new
segments.

Coordinates are floats.  Two tolerances govern every comparison: ``EPS_ABS``
for point coincidence and ``EPS_REL`` for parallelism of unit directions.
Hash keys quantize coordinates to ``GRID``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

EPS_ABS = 1e-9
EPS_REL = 1e-9
GRID = 1e-6

_LABEL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")


class ShapeError(ValueError):
    """Invalid geometric value (zero-length segment, bad label, degenerate transform)."""


class UnderdeterminedMatch(ShapeError):
    """The pattern shape admits infinitely many placements."""


class Point(NamedTuple):
    x: float
    y: float


def _point(xy) -> Point:
    x, y = float(xy[0]), float(xy[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ShapeError(f"non-finite coordinate {xy!r}")
    return Point(x, y)


def _tol(*pts: Point) -> float:
    m = max((max(abs(p.x), abs(p.y)) for p in pts), default=0.0)
    return EPS_ABS + EPS_REL * m


def coincident(p: Point, q: Point) -> bool:
    return math.hypot(p.x - q.x, p.y - q.y) <= _tol(p, q)


def _q(v: float) -> int:
    return round(v / GRID)


@dataclass(frozen=True, order=True)
class Segment:
    p: Point
    q: Point

    def __post_init__(self):
        p, q = _point(self.p), _point(self.q)
        if math.hypot(q.x - p.x, q.y - p.y) <= _tol(p, q):
            raise ShapeError(f"zero-length segment {p}-{q}")
        if q < p:
            p, q = q, p
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def length(self) -> float:
        return math.hypot(self.q.x - self.p.x, self.q.y - self.p.y)

    def key(self) -> tuple:
        return (_q(self.p.x), _q(self.p.y), _q(self.q.x), _q(self.q.y))


@dataclass(frozen=True)
class Carrier:
    """Infinite line through a segment: unit direction plus signed offset."""

    ux: float
    uy: float
    offset: float

    @classmethod
    def through(cls, p: Point, q: Point) -> "Carrier":
        dx, dy = q.x - p.x, q.y - p.y
        n = math.hypot(dx, dy)
        ux, uy = dx / n, dy / n
        if ux < -EPS_REL or (abs(ux) <= EPS_REL and uy < 0):
            ux, uy = -ux, -uy
        return cls(ux, uy, -uy * p.x + ux * p.y)

    def param(self, pt: Point) -> float:
        return self.ux * pt.x + self.uy * pt.y

    def distance(self, pt: Point) -> float:
        return abs(-self.uy * pt.x + self.ux * pt.y - self.offset)

    def parallel(self, other: "Carrier") -> bool:
        return abs(self.ux * other.uy - self.uy * other.ux) <= EPS_REL

    def holds(self, seg: Segment) -> bool:
        tol = _tol(seg.p, seg.q)
        return self.distance(seg.p) <= tol and self.distance(seg.q) <= tol

    def same(self, other: "Carrier") -> bool:
        if not self.parallel(other):
            return False
        # compare via the foot point of the other line
        foot = Point(-other.uy * other.offset, other.ux * other.offset)
        return self.distance(foot) <= _tol(foot)

    def meet(self, other: "Carrier") -> Point | None:
        det = self.ux * other.uy - self.uy * other.ux
        if abs(det) <= EPS_REL:
            return None
        # solve n1·p = c1, n2·p = c2 with n = (-uy, ux)
        a1, b1, c1 = -self.uy, self.ux, self.offset
        a2, b2, c2 = -other.uy, other.ux, other.offset
        d = a1 * b2 - a2 * b1
        return Point((c1 * b2 - c2 * b1) / d, (a1 * c2 - a2 * c1) / d)


@dataclass(frozen=True, order=True)
class LabelledPoint:
    at: Point
    label: str = "dot"

    def __post_init__(self):
        object.__setattr__(self, "at", _point(self.at))
        if not isinstance(self.label, str) or not _LABEL_RE.match(self.label):
            raise ShapeError(f"invalid label {self.label!r}")

    def key(self) -> tuple:
        return (self.label, _q(self.at.x), _q(self.at.y))


class _Interval(NamedTuple):
    t0: float
    p0: Point
    t1: float
    p1: Point


def _interval(c: Carrier, seg: Segment) -> _Interval:
    a, b = c.param(seg.p), c.param(seg.q)
    if a <= b:
        return _Interval(a, seg.p, b, seg.q)
    return _Interval(b, seg.q, a, seg.p)


def _group(*seg_lists: Iterable[Segment]) -> list[tuple[Carrier, list[list[_Interval]]]]:
    """Bucket segments of several shapes by shared carrier."""
    groups: list[tuple[Carrier, list[list[_Interval]]]] = []
    n = len(seg_lists)
    for i, segs in enumerate(seg_lists):
        for s in segs:
            for c, buckets in groups:
                if c.holds(s):
                    buckets[i].append(_interval(c, s))
                    break
            else:
                c = Carrier.through(s.p, s.q)
                buckets = [[] for _ in range(n)]
                buckets[i].append(_interval(c, s))
                groups.append((c, buckets))
    return groups


def _merge(ivs: list[_Interval]) -> list[_Interval]:
    out: list[_Interval] = []
    for iv in sorted(ivs, key=lambda v: (v.t0, v.t1)):
        if out:
            cur = out[-1]
            if iv.t0 <= cur.t1 + _tol(cur.p1, iv.p0):
                if iv.t1 > cur.t1:
                    out[-1] = _Interval(cur.t0, cur.p0, iv.t1, iv.p1)
                continue
        out.append(iv)
    return out


def _segment_or_none(p: Point, q: Point) -> Segment | None:
    if math.hypot(q.x - p.x, q.y - p.y) <= _tol(p, q):
        return None
    return Segment(p, q)


def _unique_labels(labels: Iterable[LabelledPoint]) -> tuple[LabelledPoint, ...]:
    out: list[LabelledPoint] = []
    for lp in labels:
        if not any(o.label == lp.label and coincident(o.at, lp.at) for o in out):
            out.append(lp)
    return tuple(sorted(out, key=LabelledPoint.key))


def _has_label(labels: Iterable[LabelledPoint], lp: LabelledPoint) -> bool:
    return any(o.label == lp.label and coincident(o.at, lp.at) for o in labels)


class Shape:
    """Immutable maximal-form shape.  Build with :func:`canonicalize` or :meth:`of`."""

    __slots__ = ("segments", "labels", "_key")

    def __init__(self, segments: Sequence[Segment] = (), labels: Sequence[LabelledPoint] = (), *, _canonical=False):
        if not _canonical:
            c = canonicalize(segments, labels)
            segments, labels = c.segments, c.labels
        object.__setattr__(self, "segments", tuple(segments))
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("Shape is immutable")

    @classmethod
    def of(cls, segments=(), labels=()) -> "Shape":
        """Build from raw coordinate tuples: ``[((x1, y1), (x2, y2)), ...]`` and ``[((x, y), "dot")]``."""
        segs = [s if isinstance(s, Segment) else Segment(s[0], s[1]) for s in segments]
        labs = [lp if isinstance(lp, LabelledPoint) else LabelledPoint(lp[0], lp[1]) for lp in labels]
        return canonicalize(segs, labs)

    @classmethod
    def polygon(cls, *vertices, labels=()) -> "Shape":
        n = len(vertices)
        return cls.of([(vertices[i], vertices[(i + 1) % n]) for i in range(n)], labels)

    @classmethod
    def rectangle(cls, x0, y0, x1, y1, labels=()) -> "Shape":
        return cls.polygon((x0, y0), (x1, y0), (x1, y1), (x0, y1), labels=labels)

    def is_empty(self) -> bool:
        return not self.segments and not self.labels

    def key(self) -> tuple:
        if self._key is None:
            k = (tuple(s.key() for s in self.segments), tuple(lp.key() for lp in self.labels))
            object.__setattr__(self, "_key", k)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Shape):
            return NotImplemented
        return equal(self, other)

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other: "Shape") -> "Shape":
        return shape_sum(self, other)

    def __sub__(self, other: "Shape") -> "Shape":
        return difference(self, other)

    def __mul__(self, other: "Shape") -> "Shape":
        return product(self, other)

    def __le__(self, other: "Shape") -> bool:
        return subshape(self, other)

    def __repr__(self):
        segs = ", ".join(f"({s.p.x:g},{s.p.y:g})-({s.q.x:g},{s.q.y:g})" for s in self.segments)
        labs = ", ".join(f"{lp.label}@({lp.at.x:g},{lp.at.y:g})" for lp in self.labels)
        return f"Shape([{segs}]" + (f", labels=[{labs}])" if labs else ")")

    def bounds(self) -> tuple[float, float, float, float] | None:
        pts = [p for s in self.segments for p in (s.p, s.q)] + [lp.at for lp in self.labels]
        if not pts:
            return None
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        return min(xs), min(ys), max(xs), max(ys)


EMPTY = Shape((), (), _canonical=True)


def canonicalize(segments: Iterable[Segment], labels: Iterable[LabelledPoint] = ()) -> Shape:
    """Merge collinear overlapping/abutting segments into maximal ones."""
    out: list[Segment] = []
    for _, (ivs,) in _group(list(segments)):
        for iv in _merge(ivs):
            out.append(Segment(iv.p0, iv.p1))
    out.sort(key=Segment.key)
    return Shape(out, _unique_labels(labels), _canonical=True)


def shape_sum(a: Shape, b: Shape) -> Shape:
    return canonicalize(a.segments + b.segments, a.labels + b.labels)


def product(a: Shape, b: Shape) -> Shape:
    """Common one-dimensional part of ``a`` and ``b``."""
    segs = []
    for _, (ia, ib) in _group(a.segments, b.segments):
        for u in ia:
            for v in ib:
                lo = u if u.t0 >= v.t0 else v
                hi = u if u.t1 <= v.t1 else v
                if hi.t1 > lo.t0:
                    s = _segment_or_none(lo.p0, hi.p1)
                    if s is not None:
                        segs.append(s)
    labels = [lp for lp in a.labels if _has_label(b.labels, lp)]
    return canonicalize(segs, labels)


def difference(a: Shape, b: Shape) -> Shape:
    segs = []
    for _, (ia, ib) in _group(a.segments, b.segments):
        cuts = sorted(ib, key=lambda v: v.t0)
        for u in ia:
            pieces = [u]
            for v in cuts:
                nxt = []
                for w in pieces:
                    tol = _tol(w.p0, w.p1, v.p0, v.p1)
                    if v.t1 <= w.t0 + tol or v.t0 >= w.t1 - tol:
                        nxt.append(w)
                        continue
                    if v.t0 > w.t0 + tol:
                        nxt.append(_Interval(w.t0, w.p0, v.t0, v.p0))
                    if v.t1 < w.t1 - tol:
                        nxt.append(_Interval(v.t1, v.p1, w.t1, w.p1))
                pieces = nxt
            for w in pieces:
                s = _segment_or_none(w.p0, w.p1)
                if s is not None:
                    segs.append(s)
    labels = [lp for lp in a.labels if not _has_label(b.labels, lp)]
    return canonicalize(segs, labels)


def _covered(seg: Segment, by: Sequence[Segment]) -> bool:
    for s in by:
        c = Carrier.through(s.p, s.q)
        if not c.holds(seg):
            continue
        iv, jv = _interval(c, s), _interval(c, seg)
        tol = _tol(s.p, s.q, seg.p, seg.q)
        if iv.t0 <= jv.t0 + tol and jv.t1 <= iv.t1 + tol:
            return True
    return False


def subshape(a: Shape, s: Shape) -> bool:
    """True iff ``a`` is embedded in ``s`` (segments covered, labels present)."""
    return all(_covered(seg, s.segments) for seg in a.segments) and all(
        _has_label(s.labels, lp) for lp in a.labels
    )


def _seg_close(s: Segment, t: Segment) -> bool:
    return coincident(s.p, t.p) and coincident(s.q, t.q)


def _lab_close(u: LabelledPoint, v: LabelledPoint) -> bool:
    return u.label == v.label and coincident(u.at, v.at)


def _match_all(xs, ys, close) -> bool:
    if len(xs) != len(ys):
        return False
    if all(close(x, y) for x, y in zip(xs, ys)):
        return True
    rest = list(ys)
    for x in xs:
        for i, y in enumerate(rest):
            if close(x, y):
                del rest[i]
                break
        else:
            return False
    return True


def equal(a: Shape, b: Shape) -> bool:
    return _match_all(a.segments, b.segments, _seg_close) and _match_all(a.labels, b.labels, _lab_close)


# -- transforms ---------------------------------------------------------------


@dataclass(frozen=True)
class Transform:
    """Plane similarity ``x' = a*x + b*y + tx``, ``y' = c*x + d*y + ty``."""

    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    tx: float = 0.0
    ty: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "tx", "ty"):
            object.__setattr__(self, name, float(getattr(self, name)) + 0.0)
        vals = self.as_tuple()
        if not all(math.isfinite(v) for v in vals):
            raise ShapeError("non-finite transform")
        det = abs(self.a * self.d - self.b * self.c)
        s2 = self.a * self.a + self.c * self.c
        if math.sqrt(det) <= EPS_ABS:
            raise ShapeError("degenerate transform (scale ~ 0)")
        tol = 1e-9 * max(1.0, s2)
        if (
            abs(s2 - det) > tol
            or abs(self.b * self.b + self.d * self.d - det) > tol
            or abs(self.a * self.b + self.c * self.d) > tol
        ):
            raise ShapeError("linear part is not a similarity")

    @classmethod
    def identity(cls) -> "Transform":
        return cls()

    @classmethod
    def translation(cls, dx: float, dy: float) -> "Transform":
        return cls(tx=dx, ty=dy)

    @classmethod
    def rotation(cls, angle: float, about=(0.0, 0.0)) -> "Transform":
        cs, sn = math.cos(angle), math.sin(angle)
        return cls.about(cls(cs, -sn, sn, cs), about)

    @classmethod
    def scaling(cls, s: float, about=(0.0, 0.0)) -> "Transform":
        return cls.about(cls(s, 0.0, 0.0, s), about)

    @classmethod
    def reflection(cls, angle: float = 0.0, about=(0.0, 0.0)) -> "Transform":
        """Mirror in the line through ``about`` at ``angle`` radians."""
        cs, sn = math.cos(2 * angle), math.sin(2 * angle)
        return cls.about(cls(cs, sn, sn, -cs), about)

    @classmethod
    def about(cls, lin: "Transform", center) -> "Transform":
        cx, cy = center
        return cls.translation(cx, cy) @ lin @ cls.translation(-cx, -cy)

    @classmethod
    def from_points(cls, p1, p2, q1, q2, reflect: bool = False) -> "Transform":
        """The similarity taking p1->q1 and p2->q2 (with a mirror if ``reflect``)."""
        zp1, zp2 = complex(*p1), complex(*p2)
        zq1, zq2 = complex(*q1), complex(*q2)
        if reflect:
            zp1, zp2 = zp1.conjugate(), zp2.conjugate()
        alpha = (zq2 - zq1) / (zp2 - zp1)
        beta = zq1 - alpha * zp1
        if reflect:
            # z -> alpha * conj(z) + beta
            return cls(alpha.real, alpha.imag, alpha.imag, -alpha.real, beta.real, beta.imag)
        return cls(alpha.real, -alpha.imag, alpha.imag, alpha.real, beta.real, beta.imag)

    def __matmul__(self, other: "Transform") -> "Transform":
        """``(self @ other)(p) == self(other(p))``."""
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        tx = self.a * other.tx + self.b * other.ty + self.tx
        ty = self.c * other.tx + self.d * other.ty + self.ty
        return Transform(a, b, c, d, tx, ty)

    def inverse(self) -> "Transform":
        det = self.a * self.d - self.b * self.c
        a, b, c, d = self.d / det, -self.b / det, -self.c / det, self.a / det
        return Transform(a, b, c, d, -(a * self.tx + b * self.ty), -(c * self.tx + d * self.ty))

    @property
    def scale(self) -> float:
        return math.sqrt(abs(self.a * self.d - self.b * self.c))

    @property
    def is_reflection(self) -> bool:
        return self.a * self.d - self.b * self.c < 0

    def point(self, p) -> Point:
        x, y = p
        return Point(self.a * x + self.b * y + self.tx, self.c * x + self.d * y + self.ty)

    def __call__(self, shape: Shape) -> Shape:
        return apply_transform(self, shape)

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.tx, self.ty)

    def key(self) -> tuple:
        return tuple(_q(v) + 0 for v in self.as_tuple())

    def close(self, other: "Transform") -> bool:
        return all(
            abs(u - v) <= EPS_ABS * 10 + EPS_REL * 10 * max(abs(u), abs(v))
            for u, v in zip(self.as_tuple(), other.as_tuple())
        )


def apply_transform(t: Transform, shape: Shape) -> Shape:
    segs = [Segment(t.point(s.p), t.point(s.q)) for s in shape.segments]
    labs = [LabelledPoint(t.point(lp.at), lp.label) for lp in shape.labels]
    return canonicalize(segs, labs)


# -- matching -------------------------------------------------------------------


@dataclass(frozen=True)
class MatchOptions:
    allow_reflection: bool = True


def carriers(shape: Shape) -> list[Carrier]:
    out: list[Carrier] = []
    for s in shape.segments:
        c = Carrier.through(s.p, s.q)
        if not any(o.same(c) for o in out):
            out.append(c)
    return out


def _dedup_points(pts: Iterable[Point]) -> list[Point]:
    out: list[Point] = []
    for p in pts:
        if not any(coincident(p, o) for o in out):
            out.append(p)
    out.sort(key=lambda p: (_q(p.x), _q(p.y)))
    return out


def intersection_points(shape: Shape) -> list[Point]:
    """Pairwise meeting points of the shape's non-parallel carrier lines."""
    cs = carriers(shape)
    return _dedup_points(p for c1, c2 in combinations(cs, 2) if (p := c1.meet(c2)) is not None)


def check_matchable(a: Shape) -> None:
    """Raise :class:`UnderdeterminedMatch` unless ``a`` pins down a finite match set."""
    cs = carriers(a)
    if not any(not c1.parallel(c2) for c1, c2 in combinations(cs, 2)):
        raise UnderdeterminedMatch("pattern needs at least two non-parallel carriers")
    pts = _dedup_points(list(intersection_points(a)) + [lp.at for lp in a.labels])
    if len(pts) < 2:
        raise UnderdeterminedMatch("pattern needs at least two distinguishable points")


def find_matches(a: Shape, s: Shape, opts: MatchOptions | None = None) -> list[Transform]:
    """All similarities ``t`` with ``t(a)`` a subshape of ``s``, sorted by encoding."""
    opts = opts or MatchOptions()
    check_matchable(a)

    inter_a = intersection_points(a)
    anchors: list[tuple[Point, str | None]] = [(lp.at, lp.label) for lp in a.labels]
    for p in inter_a:
        if not any(coincident(p, q) for q, _ in anchors):
            anchors.append((p, None))
    # a labelled anchor first (fewest images), then the point farthest from it
    p1, lab1 = anchors[0]
    p2, lab2 = max(
        (x for x in anchors if not coincident(x[0], p1)),
        key=lambda x: (math.hypot(x[0].x - p1.x, x[0].y - p1.y), -_q(x[0].x), -_q(x[0].y)),
    )

    inter_s = intersection_points(s)

    def images(label):
        if label is None:
            return inter_s
        return _dedup_points(lp.at for lp in s.labels if lp.label == label)

    found: list[Transform] = []
    mirrors = (False, True) if opts.allow_reflection else (False,)
    for q1 in images(lab1):
        for q2 in images(lab2):
            if coincident(q1, q2):
                continue
            for refl in mirrors:
                try:
                    t = Transform.from_points(p1, p2, q1, q2, reflect=refl)
                except ShapeError:
                    continue
                if any(t.close(f) for f in found):
                    continue
                if subshape(apply_transform(t, a), s):
                    found.append(t)
    found.sort(key=Transform.key)
    return found


# -- file format ----------------------------------------------------------------


def _num(v: float) -> float:
    return round(v, 9) + 0.0


def shape_to_dict(shape: Shape) -> dict:
    return {
        "segments": [[[_num(s.p.x), _num(s.p.y)], [_num(s.q.x), _num(s.q.y)]] for s in shape.segments],
        "labels": [{"point": [_num(lp.at.x), _num(lp.at.y)], "label": lp.label} for lp in shape.labels],
    }


def shape_from_dict(doc: dict) -> Shape:
    try:
        segs = [Segment(tuple(p), tuple(q)) for p, q in doc.get("segments", [])]
        labs = [LabelledPoint(tuple(d["point"]), d.get("label", "dot")) for d in doc.get("labels", [])]
    except (TypeError, KeyError, IndexError) as exc:
        raise ShapeError(f"malformed shape document: {exc}") from exc
    return canonicalize(segs, labs)


def dumps_shape(shape: Shape) -> str:
    return json.dumps(shape_to_dict(shape), sort_keys=True)


def loads_shape(text: str) -> Shape:
    return shape_from_dict(json.loads(text))


def load_shape(path) -> Shape:
    with open(path, encoding="utf-8") as fh:
        return loads_shape(fh.read())


def save_shape(shape: Shape, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_shape(shape) + "\n")
