"""Shapes and language about shapes.

Shape rules rewrite line-segment arrangements, paired verbal rules describe
each rewrite in a 24-word fragment of English, the descriptions are parsed
into spatial-semantic structures, and the spatial relations they assert are
checked against the geometry with RCC8 region relations.
"""

from .grammar import (
    Grammar, GrammarError, LexicalError, ParseError, Parser, ParseTree, Token,
    detokenize, lexicon, parse, read_tree, render_tree, tokenize,
)
from .regions import (
    PREPOSITION_MAP, REGION_STRINGS, Region, RegionRelation, check_preposition,
    classify, connect, extract_regions, overlap, part,
)
from .rules import (
    Derivation, DerivationStep, RuleError, RulePair, ShapeRule, VerbalRule, Verification,
    applicable, apply, derive, load_rules, step, verify_sentence,
)
from .semantics import (
    C, CompositionError, RealizationError, SemStructure, convert_style, deserialize,
    interpret, interpret_sentence, paper_style, realize, serialize,
)
from .shapes import (
    EMPTY, LabelledPoint, MatchOptions, Point, Segment, Shape, ShapeError, Transform,
    UnderdeterminedMatch, apply_transform, canonicalize, difference, equal, find_matches,
    load_shape, product, save_shape, shape_sum, subshape,
)

__version__ = "0.1.0"
