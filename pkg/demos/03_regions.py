# # Regions and what prepositions claim about them
#
# Closed loops of lines bound regions. Two regions stand in exactly one of
# the eight RCC8 relations, and each preposition accepts a few of them:
# "at" wants a (tangential) proper part, "on" also takes external contact,
# and "in" takes all three.

from verba.regions import PREPOSITION_MAP, classify, extract_regions
from verba.shapes import Segment, Shape

outer = extract_regions(Shape.rectangle(0, 0, 4, 4))
cases = {
    "inside, not touching": Shape.rectangle(1, 1, 2, 2),
    "inside, touching the edge": Shape.rectangle(0, 1, 1, 2),
    "outside, sharing an edge": Shape.rectangle(4, 0, 5, 1),
    "crossing the edge": Shape.rectangle(3, 3, 5, 5),
}
for name, shape in cases.items():
    rel = classify(extract_regions(shape), outer)
    ok = [p for p, allowed in sorted(PREPOSITION_MAP.items()) if rel in allowed]
    print("%-26s %-5s fits: %s" % (name, rel.value, ", ".join(ok) or "none"))

# Lines that cross split the plane into several regions; a grid of 2x2
# cells gives four.

grid = Shape.of([Segment((0, i), (2, i)) for i in range(3)] + [Segment((i, 0), (i, 2)) for i in range(3)])
print(len(extract_regions(grid)), "regions in the grid")

# An open polyline bounds nothing.

print(extract_regions(Shape.of([Segment((0, 0), (1, 0)), Segment((1, 0), (1, 1))])))
