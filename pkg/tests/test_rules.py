import json

import pytest

from scenarios import additive_square_rule, framed_initial
from verba.regions import RegionRelation as R
from verba.rules import (
    MAX_STEPS, NO_LABEL, NO_MATCH, REFUTED, UNVERIFIABLE, VERIFIED, RuleError, RulePair,
    ShapeRule, StepInvariantError, VerbalRule, applicable, apply, check_step, derive,
    dumps_derivation, load_rules, rule_from_dict, rule_to_dict, step, verify_sentence,
)
from verba.shapes import LabelledPoint, Segment, Shape, Transform, apply_transform, equal


def test_underdetermined_rule_rejected():
    with pytest.raises(RuleError):
        ShapeRule("line", Shape.of([Segment((0, 0), (1, 0))]), Shape.of([]))


def test_bad_template_rejected():
    with pytest.raises(RuleError):
        VerbalRule("paint <shape2> blue")


def test_apply_rewrites_the_match():
    pair = additive_square_rule()
    s = framed_initial()
    ts = applicable(pair.shape_rule, s)
    assert len(ts) == 2  # identity and the mirror in the square's diagonal
    t = ts[0]
    out = apply(pair.shape_rule, s, t)
    assert equal(out, (s - apply_transform(t, pair.shape_rule.lhs)) + apply_transform(t, pair.shape_rule.rhs))
    assert out.labels == (LabelledPoint((1.5, 1.5)),)


def test_apply_with_foreign_transform_fails():
    pair = additive_square_rule()
    with pytest.raises(RuleError):
        apply(pair.shape_rule, framed_initial(), Transform.translation(10, 10))


def test_step_binds_and_verifies():
    pair = additive_square_rule()
    s = framed_initial()
    t = applicable(pair.shape_rule, s)[0]
    st = step(pair, s, t)
    assert equal(st.binding["shape2"], apply_transform(t, pair.shape_rule.rhs))
    assert equal(st.binding["shape1"] + st.binding["shape2"], st.shape_after)
    statuses = [(d.style, d.verification.status) for d in st.descriptions]
    assert statuses == [("constructive", UNVERIFIABLE), ("from-above", VERIFIED), ("from-above", VERIFIED)]
    assert st.descriptions[1].verification.relation == R.NTPP


def test_check_step_detects_tampering():
    pair = additive_square_rule()
    s = framed_initial()
    st = step(pair, s, applicable(pair.shape_rule, s)[0])
    from dataclasses import replace
    bad = replace(st, shape_after=st.shape_after - Shape.rectangle(-1, -1, 3, 3))
    with pytest.raises(StepInvariantError):
        check_step(bad)


def test_derive_three_steps():
    d = derive([additive_square_rule()], framed_initial(), max_steps=3)
    assert len(d.steps) == 3 and d.termination == MAX_STEPS
    for st in d.steps:
        for desc in st.descriptions:
            assert desc.verification.status != REFUTED


def test_derive_stops_when_labels_run_out():
    lhs = Shape.rectangle(0, 0, 1, 1, labels=[LabelledPoint((1, 1))])
    pair = RulePair(ShapeRule("erase", lhs, Shape.rectangle(0, 0, 1, 1)), VerbalRule("draw <shape2> to <shape1>."))
    d = derive([pair], lhs, max_steps=5)
    assert len(d.steps) == 1 and d.termination == NO_LABEL


def test_derive_stops_without_match():
    s = Shape.rectangle(0, 0, 1, 1, labels=[LabelledPoint((1, 1), "other")])
    d = derive([additive_square_rule()], s, max_steps=5)
    assert d.steps == [] and d.termination == NO_MATCH


def test_random_strategy_is_seeded():
    s = framed_initial()
    a = dumps_derivation(derive([additive_square_rule()], s, strategy="random", seed=5, max_steps=3))
    b = dumps_derivation(derive([additive_square_rule()], s, strategy="random", seed=5, max_steps=3))
    assert a == b


def test_script_strategy():
    d = derive([additive_square_rule()], framed_initial(), strategy="interactive-script", script=[("grow", 0)] * 2)
    assert len(d.steps) == 2 and d.termination == MAX_STEPS
    with pytest.raises(RuleError):
        derive([additive_square_rule()], framed_initial(), strategy="script", script=[("nope", 0)])


def test_duplicate_rule_names_rejected():
    with pytest.raises(RuleError):
        derive([additive_square_rule(), additive_square_rule()], framed_initial())


@pytest.mark.parametrize("t", [
    Transform.identity(),
    Transform.translation(3, -2) @ Transform.rotation(0.9) @ Transform.scaling(2.5),
    Transform.reflection(0.4, about=(1, 1)),
])
def test_verification_is_similarity_invariant(t):
    inner, outer = Shape.rectangle(1, 1, 2, 2), Shape.rectangle(0, 0, 4, 4)
    edge = Shape.rectangle(4, 0, 5, 1)
    for sentence, s1, s2, status in [
        ("<shape1> is in <shape2>.", inner, outer, VERIFIED),
        ("<shape1> is on <shape2>.", inner, outer, REFUTED),
        ("<shape1> is on <shape2>.", edge, outer, VERIFIED),
        ("<shape1> is at <shape2>.", edge, outer, REFUTED),
    ]:
        b = {"shape1": apply_transform(t, s1), "shape2": apply_transform(t, s2)}
        assert verify_sentence(sentence, b).status == status


def test_attribute_references_are_coarse():
    b = {"shape1": Shape.rectangle(1, 1, 2, 2), "shape2": Shape.rectangle(0, 0, 4, 4)}
    v = verify_sentence("the left edge of <shape1> is in <shape2>.", b)
    assert v.status == VERIFIED and v.coarse


def test_rule_file_round_trip(tmp_path):
    pair = additive_square_rule()
    path = tmp_path / "rules.json"
    path.write_text(json.dumps([rule_to_dict(pair)]))
    (loaded,) = load_rules(path)
    assert loaded.name == "grow"
    assert equal(loaded.shape_rule.rhs, pair.shape_rule.rhs)
    assert loaded.verbal_rule == pair.verbal_rule
    with pytest.raises(RuleError):
        rule_from_dict({"name": "x"})
