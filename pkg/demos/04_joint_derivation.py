# # Shape rules and verbal rules applied together
#
# A shape rule a -> b finds a copy of a in the current shape and swaps it
# for b. Its verbal rule describes what happened. After each step the new
# part t(b) is bound to <shape2> and the rest of the drawing to <shape1>,
# and every from-above sentence is checked against the geometry.

import tempfile

from verba.render import write_report
from verba.rules import RulePair, ShapeRule, VerbalRule, derive
from verba.shapes import LabelledPoint, Shape

lhs = Shape.rectangle(0, 0, 1, 1, labels=[LabelledPoint((1, 1))])
rhs = Shape.rectangle(0, 0, 1, 1) + Shape.rectangle(1, 1, 1.5, 1.5, labels=[LabelledPoint((1.5, 1.5))])
rule = RulePair(
    ShapeRule("grow", lhs, rhs),
    VerbalRule("add <shape2> to <shape1>.", ("<shape2> is in <shape1>.", "<shape2> is on <shape1>.")),
)

# Start from the rule's own left side inside a frame, so that <shape1>
# always encloses a region.

start = Shape.rectangle(-1, -1, 3, 3) + lhs
d = derive([rule], start, strategy="random", seed=1, max_steps=3)

for st in d.steps:
    print("step", st.index, "scale %.3f" % st.transform.scale)
    for desc in st.descriptions:
        v = desc.verification
        print("   %-28s %s %s" % (desc.text, v.status, v.relation.value if v.relation else ""))
print("stopped:", d.termination)

# "is on" fails: the new square sits strictly inside the frame, which is a
# non-tangential proper part, and "on" only accepts contact or a
# tangential part.
#
# The whole run can be written out as a trace, pictures and an HTML page.

out = tempfile.mkdtemp(prefix="verba-")
write_report(d, out)
print("report written to", out)
