import itertools

import pytest

from verba.grammar import Generator, Grammar, Parser
from verba.semantics import (
    C, CONSTRUCTIVE, FROM_ABOVE, RealizationError, SemanticError, convert_style, deserialize,
    dumps, from_json, interpret, interpret_sentence, paper_style, realize, serialize, to_json,
)

GOLDEN_PAPER_STYLE = (
    "SPATIAL_RELATION['at', \"SHAPE['shape1']\", 'ttp-nttp', "
    "\"SHAPE['shape2']\", \"ACTION['is', 'present']\"]"
)
COMPLEX = "The upper left corner of shape2 is at the midpoint of the right edge of shape1."


@pytest.fixture(scope="module")
def parser():
    return Parser()


def test_simple_spatial_relation(parser):
    s = interpret_sentence("shape1 is at shape2", parser)
    assert s == C(
        "SPATIAL_RELATION", relation="at", region="ttp-nttp",
        action=C("ACTION", action="is", tense="present"),
        trajector=C("SHAPE", shape="shape1"), landmark=C("SHAPE", shape="shape2"),
    )
    assert paper_style(s) == GOLDEN_PAPER_STYLE


def test_action_structure(parser):
    s = interpret_sentence("add shape1 to shape2", parser)
    assert s.category == "ACTION"
    assert (s["action"], s["trajector"], s["landmark"]) == ("add", C("SHAPE", shape="shape1"), C("SHAPE", shape="shape2"))
    assert paper_style(s) == "ACTION['add', \"SHAPE['shape1']\", \"SHAPE['shape2']\"]"


def test_complex_sentence(parser):
    s = interpret_sentence(COMPLEX, parser)
    assert (s["relation"], s["region"]) == ("at", "ttp-nttp")
    assert s["landmark"] == C(
        "ATTRIBUTE", select="midpoint", shape=C("SHAPE", shape="shape1"),
        attribute=C("ATTRIBUTE", attribute="edge"), direction=C("DIRECTION", direction="right"),
    )
    assert s["trajector"] == C(
        "DIRECTION", shape=C("SHAPE", shape="shape2"), attribute=C("ATTRIBUTE", attribute="corner"),
        direction=C("DIRECTION", direction="left"), comparative="upper",
    )


@pytest.mark.parametrize("prep,region", [("at", "ttp-nttp"), ("on", "ec-ttp"), ("in", "ec-ttp-nttp")])
def test_region_follows_preposition(parser, prep, region):
    assert interpret_sentence(f"the left edge of shape1 is {prep} shape2", parser)["region"] == region
    assert interpret_sentence(f"draw shape1 {prep} the top corner of shape2", parser)["region"] == region


@pytest.mark.parametrize("verb,prep", [("add", "to"), ("subtract", "from"), ("replace", "with"), ("draw", "to")])
def test_constructive_verbs(parser, verb, prep):
    s = interpret_sentence(f"{verb} shape2 {prep} shape1", parser)
    assert s["action"] == verb
    assert s["trajector"] == C("SHAPE", shape="shape2")
    assert s["landmark"] == C("SHAPE", shape="shape1")


def test_unknown_category_and_slot_rejected():
    with pytest.raises(SemanticError):
        C("EVENT")
    with pytest.raises(SemanticError):
        C("SHAPE", colour="red")


def test_serialization_round_trips_over_generated_sentences(parser):
    gen = Generator()
    for n in range(3, 16):
        for tree in itertools.islice(gen.iter_trees("Start", n), 40):
            s = interpret(tree, parser.grammar)
            assert deserialize(serialize(s)) == s
            assert from_json(to_json(s)) == s
            assert dumps(s) == dumps(from_json(to_json(s)))


def test_interpretation_is_deterministic(parser):
    assert serialize(interpret_sentence(COMPLEX, parser)) == serialize(interpret_sentence(COMPLEX, Parser()))


def test_realize_round_trip(parser):
    for sentence in [COMPLEX, "shape2 is on the right edge of shape1", "the top edge of shape1 is in shape2"]:
        s = interpret_sentence(sentence, parser)
        assert interpret_sentence(realize(s, FROM_ABOVE), parser) == s
        constructive = interpret_sentence(realize(s, CONSTRUCTIVE), parser)
        assert constructive.replace(action=s["action"]) == s


def test_realize_action_from_above_is_an_error(parser):
    with pytest.raises(RealizationError):
        realize(interpret_sentence("add shape1 to shape2", parser), FROM_ABOVE)
    assert realize(interpret_sentence("add shape1 to shape2", parser), CONSTRUCTIVE) == "add shape1 to shape2"


def test_convert_corner_example(parser):
    out = convert_style(COMPLEX, CONSTRUCTIVE, parser=parser)
    assert out == "draw the upper left corner of shape2 at the midpoint of the right edge of shape1"
    assert convert_style(out, FROM_ABOVE, parser=parser) == COMPLEX.lower().rstrip(".")


def test_convert_keeps_determiners(parser):
    s = "the the shape1 is at the shape2"
    assert convert_style(convert_style(s, CONSTRUCTIVE, parser=parser), FROM_ABOVE, parser=parser) == s


def test_convert_rejects_plain_action(parser):
    with pytest.raises(RealizationError):
        convert_style("add shape1 to shape2", FROM_ABOVE, parser=parser)


def test_custom_grammar_file(tmp_path):
    text = Grammar.builtin().to_text()
    path = tmp_path / "g.cfg"
    path.write_text(text)
    p = Parser(Grammar.load(path))
    assert paper_style(interpret_sentence("shape1 is at shape2", p)) == GOLDEN_PAPER_STYLE
