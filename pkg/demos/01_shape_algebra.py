# # Shapes made of maximal lines
#
# A shape here is a finite set of straight line segments, kept in a canonical
# form: collinear pieces that touch or overlap are fused into one maximal line.
# Shapes add, multiply (common part) and subtract like sets of points.

from verba.shapes import LabelledPoint, Segment, Shape, Transform, apply_transform, find_matches

# Two overlapping pieces on the same line collapse into a single segment.

s = Shape.of([Segment((0, 0), (2, 0)), Segment((1, 0), (3, 0))])
print(s.segments)

# Two squares sharing an edge. Their sum has the shared edge once, and their
# product is exactly that edge.

a = Shape.rectangle(0, 0, 1, 1)
b = Shape.rectangle(1, 0, 2, 1)
print(len((a + b).segments), "maximal lines in a + b")
print("a * b =", (a * b).segments)
print("a - b keeps", len((a - b).segments), "sides of a")

# The sum fused the top and bottom sides into lines of length 2. So the
# unit square appears in a + b in places nobody drew directly: emergent parts.

print("a <= a + b:", a <= a + b)

# # Finding a shape inside another
#
# find_matches lists every similarity (move, turn, scale, mirror) that puts
# the pattern inside the host. A 2x2 grid holds four small squares and one
# big one, each in eight orientations.

grid = Shape.of([Segment((0, i), (2, i)) for i in range(3)] + [Segment((i, 0), (i, 2)) for i in range(3)])
ts = find_matches(a, grid)
print(len(ts), "ways to see a square in the grid")
print(sorted({round(t.scale, 6) for t in ts}), "distinct scales")

# Labels pin things down. With a dot in one corner only the two
# transformations that keep the dot in place survive.

dotted = Shape.rectangle(0, 0, 1, 1, labels=[LabelledPoint((1, 1))])
host = apply_transform(Transform.rotation(0.5) @ Transform.scaling(3), dotted)
for t in find_matches(dotted, host):
    print("scale %.3f  mirror %s" % (t.scale, t.is_reflection))
