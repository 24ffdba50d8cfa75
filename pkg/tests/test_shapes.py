import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_lattice_segments, step_set
from verba.shapes import (
    EMPTY, LabelledPoint, Point, Segment, Shape, ShapeError, Transform, apply_transform,
    canonicalize, difference, dumps_shape, equal, load_shape, loads_shape, product, save_shape,
    shape_sum, subshape,
)


def seg(x0, y0, x1, y1):
    return Segment((x0, y0), (x1, y1))


# -- canonical form ---------------------------------------------------------------


def test_collinear_overlap_merges():
    s = Shape.of([seg(0, 0, 2, 0), seg(1, 0, 3, 0)])
    assert s.segments == (seg(0, 0, 3, 0),)


def test_touching_collinear_segments_merge():
    s = Shape.of([seg(0, 0, 1, 0), seg(1, 0, 2, 0)])
    assert len(s.segments) == 1


def test_segment_endpoint_order_is_canonical():
    assert seg(2, 0, 0, 0) == seg(0, 0, 2, 0)


def test_zero_length_segment_rejected():
    with pytest.raises(ShapeError):
        seg(1, 1, 1, 1)


def test_bad_label_rejected():
    with pytest.raises(ShapeError):
        LabelledPoint((0, 0), "no spaces")


def test_rectangle_has_four_sides():
    assert len(Shape.rectangle(0, 0, 1, 1).segments) == 4


def test_empty_shape():
    assert EMPTY.is_empty()
    assert Shape.of([]) == EMPTY
    assert EMPTY.bounds() is None


def test_canonical_form_independent_of_order_and_splitting():
    rng = random.Random(7)
    for _ in range(100):
        segs = random_lattice_segments(rng, 5)
        shuffled = segs[:]
        rng.shuffle(shuffled)
        split = []
        for s in shuffled:
            m = Point((s.p.x + s.q.x) / 2, (s.p.y + s.q.y) / 2)
            split += [Segment(s.p, m), Segment(m, s.q)]
        assert canonicalize(segs).key() == canonicalize(split).key()


# -- operations against the lattice oracle --------------------------------------------


@pytest.mark.parametrize("seed", range(40))
def test_operations_match_unit_step_oracle(seed):
    rng = random.Random(seed)
    a = Shape.of(random_lattice_segments(rng, rng.randint(0, 6)))
    b = Shape.of(random_lattice_segments(rng, rng.randint(0, 6)))
    A, B = step_set(a), step_set(b)
    assert step_set(a + b) == A | B
    assert step_set(a * b) == A & B
    assert step_set(a - b) == A - B
    assert (a <= b) == (A <= B)


def test_product_of_crossing_segments_is_empty():
    assert (Shape.of([seg(0, 0, 2, 2)]) * Shape.of([seg(0, 2, 2, 0)])).is_empty()


def test_labels_follow_set_semantics():
    la = LabelledPoint((0, 0), "p")
    lb = LabelledPoint((1, 1), "p")
    a = Shape.of([seg(0, 0, 1, 0)], [la])
    b = Shape.of([seg(0, 0, 1, 0)], [lb])
    assert set((a + b).labels) == {la, lb}
    assert (a * b).labels == ()
    assert (a - b).labels == (la,)
    assert not subshape(a, b)


# -- algebraic laws ---------------------------------------------------------------------

lattice = st.integers(0, 2**31 - 1).map(lambda s: Shape.of(random_lattice_segments(random.Random(s), random.Random(s).randint(0, 6))))


@settings(max_examples=60, deadline=None)
@given(lattice, lattice, lattice)
def test_boolean_laws(a, b, c):
    assert equal(a + b, b + a)
    assert equal(a * b, b * a)
    assert equal((a + b) + c, a + (b + c))
    assert equal((a * b) * c, a * (b * c))
    assert equal(a + a, a) and equal(a * a, a)
    assert (a - a).is_empty()
    assert equal(a + (a * b), a)
    assert equal(a * (a + b), a)
    assert equal((a - b) + (a * b), a)
    assert equal(a - b, a - (a * b))
    assert subshape(a, b) == equal(a + b, b) == equal(a * b, a)


@settings(max_examples=40, deadline=None)
@given(lattice, lattice, st.floats(-math.pi, math.pi), st.floats(0.25, 4), st.floats(-5, 5), st.floats(-5, 5), st.booleans())
def test_similarity_is_a_homomorphism(a, b, angle, k, dx, dy, mirror):
    t = Transform.translation(dx, dy) @ Transform.rotation(angle) @ Transform.scaling(k)
    if mirror:
        t = t @ Transform.reflection(0.3)
    assert equal(apply_transform(t, a + b), apply_transform(t, a) + apply_transform(t, b))
    assert equal(apply_transform(t, a * b), apply_transform(t, a) * apply_transform(t, b))
    assert equal(apply_transform(t, a - b), apply_transform(t, a) - apply_transform(t, b))


# -- transforms -------------------------------------------------------------------------


def test_transform_compose_and_inverse():
    t = Transform.translation(1, 2) @ Transform.rotation(0.7) @ Transform.scaling(3)
    assert (t @ t.inverse()).close(Transform.identity())
    assert t.scale == pytest.approx(3)
    assert not t.is_reflection
    assert Transform.reflection(0.2).is_reflection


def test_transform_rejects_non_similarity():
    with pytest.raises(ShapeError):
        Transform(1, 0, 0, 2, 0, 0)


def test_from_points_maps_anchor_pair():
    t = Transform.from_points(Point(0, 0), Point(1, 0), Point(2, 2), Point(2, 4))
    assert t.point((0, 0)) == pytest.approx((2, 2))
    assert t.point((1, 0)) == pytest.approx((2, 4))


# -- serialization --------------------------------------------------------------------------


def test_json_round_trip(tmp_path):
    s = Shape.rectangle(0, 0, 2, 1, labels=[LabelledPoint((1, 1), "dot")])
    assert equal(loads_shape(dumps_shape(s)), s)
    path = tmp_path / "s.json"
    save_shape(s, path)
    assert equal(load_shape(path), s)
    assert dumps_shape(s) == dumps_shape(loads_shape(dumps_shape(s)))


def test_operations_do_not_mutate_inputs():
    a = Shape.rectangle(0, 0, 1, 1)
    before = a.key()
    _ = (a + Shape.rectangle(1, 0, 2, 1), a - a, a * a)
    assert a.key() == before
    with pytest.raises(AttributeError):
        a.segments = ()


def test_shape_sum_and_difference_functions():
    a = Shape.rectangle(0, 0, 1, 1)
    b = Shape.of([seg(0, 0, 1, 0)])
    assert equal(shape_sum(a, b), a)
    assert len(difference(a, b).segments) == 3
    assert equal(product(a, b), b)
