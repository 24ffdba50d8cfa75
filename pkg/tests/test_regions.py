import random

import pytest

from oracles import random_rect, raster_rcc, rect_shape
from verba.regions import (
    PREPOSITION_MAP, REGION_STRINGS, Region, RegionError, RegionRelation as R, check_preposition,
    classify, connect, extract_regions, overlap, part, relations_of, shape_relation,
)
from verba.shapes import Segment, Shape


def regions(*rect):
    return extract_regions(Shape.rectangle(*rect))


def test_square_gives_one_region():
    (r,) = regions(0, 0, 1, 1)
    assert r.area == pytest.approx(1)


def test_grid_gives_four_cells():
    s = Shape.rectangle(0, 0, 2, 2) + Shape.of([Segment((1, 0), (1, 2)), Segment((0, 1), (2, 1))])
    rs = extract_regions(s)
    assert len(rs) == 4
    assert sum(r.area for r in rs) == pytest.approx(4)


def test_nested_squares_give_two_regions():
    assert len(extract_regions(Shape.rectangle(0, 0, 4, 4) + Shape.rectangle(1, 1, 2, 2))) == 2


def test_open_shape_has_no_region():
    assert extract_regions(Shape.of([Segment((0, 0), (1, 0)), Segment((1, 0), (1, 1))])) == []
    assert shape_relation(Shape.of([Segment((0, 0), (1, 0))]), Shape.rectangle(0, 0, 1, 1)) is None


def test_region_rejects_degenerate_boundary():
    with pytest.raises(RegionError):
        Region.from_polygon((0, 0), (1, 0), (2, 0))


@pytest.mark.parametrize("a,b,rel", [
    ((1, 1, 2, 2), (0, 0, 4, 4), R.NTPP),
    ((0, 0, 1, 1), (0, 0, 4, 4), R.TPP),
    ((0, 0, 1, 1), (1, 0, 2, 1), R.EC),
    ((0, 0, 1, 1), (1, 1, 2, 2), R.EC),
    ((0, 0, 2, 2), (1, 1, 3, 3), R.PO),
    ((0, 0, 1, 1), (3, 3, 4, 4), R.DC),
    ((0, 0, 1, 1), (0, 0, 1, 1), R.EQ),
    ((0, 0, 4, 4), (0, 0, 1, 1), R.TPPi),
])
def test_classify_examples(a, b, rel):
    assert classify(regions(*a), regions(*b)) == rel


def test_relations_are_exhaustive_and_inverse():
    rng = random.Random(3)
    for _ in range(300):
        a, b = random_rect(rng, 6), random_rect(rng, 6)
        ra, rb = extract_regions(rect_shape(a)), extract_regions(rect_shape(b))
        r = classify(ra, rb)
        assert r in set(R)
        assert classify(rb, ra) == r.inverse()
        # definitional consistency with the primitive predicates
        assert connect(ra, rb) == (r != R.DC)
        assert overlap(ra, rb) == (r not in (R.DC, R.EC))
        assert part(ra, rb) == (r in (R.TPP, R.NTPP, R.EQ))


def test_classify_matches_raster_oracle():
    rng = random.Random(11)
    for _ in range(500):
        a, b = random_rect(rng, 6), random_rect(rng, 6)
        assert classify(extract_regions(rect_shape(a)), extract_regions(rect_shape(b))) == raster_rcc(a, b)


def test_preposition_map():
    assert PREPOSITION_MAP["at"] == {R.TPP, R.NTPP}
    assert PREPOSITION_MAP["on"] == {R.EC, R.TPP}
    assert PREPOSITION_MAP["in"] == {R.EC, R.TPP, R.NTPP}
    for prep, region in REGION_STRINGS.items():
        assert relations_of(region) == PREPOSITION_MAP[prep]


def test_check_preposition():
    inner, outer = regions(1, 1, 2, 2), regions(0, 0, 4, 4)
    assert check_preposition("in", inner, outer)
    assert check_preposition("at", inner, outer)
    assert not check_preposition("on", inner, outer)
    with pytest.raises(RegionError):
        check_preposition("under", inner, outer)


def test_multi_region_shapes_use_union():
    two = Shape.rectangle(0, 0, 1, 1) + Shape.rectangle(2, 0, 3, 1)
    assert shape_relation(Shape.rectangle(0.2, 0.2, 0.8, 0.8), two) == R.NTPP
