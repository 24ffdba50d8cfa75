# # From a sentence to its spatial meaning
#
# Descriptions of shapes use a small fragment of English: 24 words in all.
# A chart parser builds the parse tree and lambda forms attached to the
# grammar rules turn it into a nested attribute-value structure.

from verba.grammar import Parser, lexicon, render_tree
from verba.semantics import convert_style, interpret, paper_style

print(lexicon())

parser = Parser()
tree = parser.parse_sentence("shape1 is at shape2")[0]
print(render_tree(tree))

# The meaning names the trajector (what is being located), the landmark
# (what it is located against), the preposition and the region relations
# the preposition allows.

meaning = interpret(tree)
print(meaning)
print(paper_style(meaning))

# Sentences that start with a verb are constructive: they say what to do.

print(paper_style(interpret(parser.parse_sentence("add shape1 to shape2")[0])))

# Attributes of shapes nest. "the upper left corner of shape2" becomes a
# DIRECTION wrapped around the corner of shape2.

sentence = "The upper left corner of shape2 is at the midpoint of the right edge of shape1."
meaning = interpret(parser.parse_sentence(sentence)[0])
print(meaning["trajector"])
print(meaning["landmark"])

# A from-above description can be turned into a constructive one and back.

constructive = convert_style(sentence, "constructive")
print(constructive)
print(convert_style(constructive, "from-above"))
