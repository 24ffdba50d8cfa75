"""Joint application of shape rules and verbal rules.

A step applies ``a -> b`` under a similarity ``t`` to the current shape ``S``
giving ``S' = (S - t(a)) + t(b)``, binds ``shape1`` to ``S' - t(b)`` and
``shape2`` to ``t(b)``, emits the verbal rule's sentences and checks every
spatial-relation sentence against the bound shapes' regions.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .grammar import GrammarError, Parser
from .regions import RegionRelation, classify, extract_regions, relations_of
from .semantics import (
    CONSTRUCTIVE, FROM_ABOVE, SemanticError, SemStructure, interpret, serialize,
)
from .shapes import (
    MatchOptions, Shape, ShapeError, Transform, apply_transform, check_matchable,
    difference, equal, find_matches, shape_from_dict, shape_sum, shape_to_dict, subshape,
)

VERIFIED = "verified"
REFUTED = "refuted"
UNVERIFIABLE = "unverifiable"

NO_MATCH = "no-match"
NO_LABEL = "no-label"
MAX_STEPS = "max-steps"

STRATEGY_ALIASES = {"interactive-script": "script"}


class RuleError(ValueError):
    """Bad rule configuration or a transform that does not apply."""


class StepInvariantError(RuntimeError):
    pass


@dataclass(frozen=True)
class ShapeRule:
    name: str
    lhs: Shape
    rhs: Shape

    def __post_init__(self):
        try:
            check_matchable(self.lhs)
        except ShapeError as exc:
            raise RuleError(f"rule {self.name!r}: left-hand side rejected: {exc}") from exc


@dataclass(frozen=True)
class VerbalRule:
    constructive: str
    from_above: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "from_above", tuple(self.from_above))
        for text in self.templates():
            try:
                interpret_template(text)
            except (GrammarError, SemanticError) as exc:
                raise RuleError(f"verbal template {text!r} does not parse: {exc}") from exc

    def templates(self) -> list[str]:
        return ([self.constructive] if self.constructive else []) + list(self.from_above)

    def styled(self) -> list[tuple[str, str]]:
        out = [(CONSTRUCTIVE, self.constructive)] if self.constructive else []
        return out + [(FROM_ABOVE, t) for t in self.from_above]


@dataclass(frozen=True)
class RulePair:
    shape_rule: ShapeRule
    verbal_rule: VerbalRule

    @property
    def name(self) -> str:
        return self.shape_rule.name


@dataclass(frozen=True)
class Verification:
    status: str
    relation: RegionRelation | None = None
    coarse: bool = False
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "relation": None if self.relation is None else self.relation.value,
            "coarse": self.coarse,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Description:
    text: str
    style: str
    semantics: SemStructure
    verification: Verification


@dataclass(frozen=True)
class DerivationStep:
    index: int
    rule: str
    transform: Transform
    shape_before: Shape
    shape_after: Shape
    binding: dict = field(hash=False)
    descriptions: tuple[Description, ...] = ()
    matched: Shape | None = None  # t(lhs)
    placed: Shape | None = None  # t(rhs)


@dataclass
class Derivation:
    initial: Shape
    steps: list[DerivationStep]
    termination: str

    @property
    def final(self) -> Shape:
        return self.steps[-1].shape_after if self.steps else self.initial


_PARSER: Parser | None = None


def _parser() -> Parser:
    global _PARSER
    if _PARSER is None:
        _PARSER = Parser()
    return _PARSER


def interpret_template(text: str) -> SemStructure:
    p = _parser()
    return interpret(p.parse(p.tokenize(text))[0], p.grammar)


def applicable(rule: ShapeRule, shape: Shape, opts: MatchOptions | None = None) -> list[Transform]:
    return find_matches(rule.lhs, shape, opts)


def apply(rule: ShapeRule, shape: Shape, t: Transform) -> Shape:
    matched = apply_transform(t, rule.lhs)
    if not subshape(matched, shape):
        raise RuleError(f"transform does not embed the left-hand side of {rule.name!r}")
    return shape_sum(difference(shape, matched), apply_transform(t, rule.rhs))


# -- verification -----------------------------------------------------------------


def _shape_name(v) -> tuple[str | None, bool]:
    """Shape reference inside a role filler, plus whether attributes qualify it."""
    if isinstance(v, SemStructure):
        if v.category == "SHAPE":
            return v["shape"], False
        name, _ = _shape_name(v.get("shape"))
        return name, True
    return None, False


def verify_structure(sem: SemStructure, binding: dict) -> Verification:
    if sem.category != "SPATIAL_RELATION":
        return Verification(UNVERIFIABLE, detail="no spatial relation")
    tname, tcoarse = _shape_name(sem["trajector"])
    lname, lcoarse = _shape_name(sem["landmark"])
    coarse = tcoarse or lcoarse
    if tname not in binding or lname not in binding:
        return Verification(UNVERIFIABLE, coarse=coarse, detail="unbound shape reference")
    traj, land = extract_regions(binding[tname]), extract_regions(binding[lname])
    if not traj or not land:
        open_ = tname if not traj else lname
        return Verification(UNVERIFIABLE, coarse=coarse, detail=f"{open_} encloses no region")
    rel = classify(traj, land)
    allowed = relations_of(sem["region"])
    status = VERIFIED if rel in allowed else REFUTED
    want = "/".join(sorted(r.value for r in allowed))
    return Verification(status, rel, coarse, f"{tname} {rel.value} {lname}; '{sem['relation']}' needs {want}")


def verify_sentence(sentence: str, binding: dict) -> Verification:
    return verify_structure(interpret_template(sentence), binding)


# -- steps and derivations -------------------------------------------------------


def step(pair: RulePair, shape: Shape, t: Transform, styles: Iterable[str] = (CONSTRUCTIVE, FROM_ABOVE),
         index: int = 1) -> DerivationStep:
    rule = pair.shape_rule
    after = apply(rule, shape, t)
    matched = apply_transform(t, rule.lhs)
    placed = apply_transform(t, rule.rhs)
    binding = {"shape1": difference(after, placed), "shape2": placed}
    styles = set(styles)
    descs = []
    for style, text in pair.verbal_rule.styled():
        if style not in styles:
            continue
        sem = interpret_template(text)
        descs.append(Description(text, style, sem, verify_structure(sem, binding)))
    st = DerivationStep(index, rule.name, t, shape, after, binding, tuple(descs), matched, placed)
    check_step(st)
    return st


def check_step(st: DerivationStep) -> None:
    """Recompute the rewrite and binding identities; raise on any mismatch."""
    if not subshape(st.matched, st.shape_before):
        raise StepInvariantError(f"step {st.index}: t(lhs) is not a subshape of S")
    if not equal(st.shape_after, shape_sum(difference(st.shape_before, st.matched), st.placed)):
        raise StepInvariantError(f"step {st.index}: S' != (S - t(a)) + t(b)")
    if not equal(st.binding["shape1"], difference(st.shape_after, st.placed)):
        raise StepInvariantError(f"step {st.index}: shape1 binding mismatch")
    if not equal(shape_sum(st.binding["shape1"], st.binding["shape2"]), st.shape_after):
        raise StepInvariantError(f"step {st.index}: binding does not partition S'")


def _uses_labels(pairs: Sequence[RulePair]) -> bool:
    return any(p.shape_rule.lhs.labels for p in pairs)


def derive(pairs: Sequence[RulePair], initial: Shape, strategy: str = "first", max_steps: int = 10,
           seed: int | None = None, script: Sequence[tuple[str, int]] | None = None,
           opts: MatchOptions | None = None, styles: Iterable[str] = (CONSTRUCTIVE, FROM_ABOVE)) -> Derivation:
    """Run rules until none applies, no label is left, or ``max_steps`` is hit.

    ``strategy`` is ``"first"`` (first rule in order, first match),
    ``"random"`` (uniform over all rule/match pairs, seeded) or
    ``"interactive-script"`` (alias ``"script"``:
    ``script`` lists ``(rule name, match index)`` choices standing in for a
    person choosing; running out of choices ends the run as ``max-steps``).
    """
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    strategy = STRATEGY_ALIASES.get(strategy, strategy)
    if strategy not in ("first", "random", "script"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "script" and script is None:
        raise ValueError("script strategy needs a script")
    names = [p.name for p in pairs]
    if len(set(names)) != len(names):
        raise RuleError("rule names must be unique")
    by_name = {p.name: p for p in pairs}
    rng = random.Random(seed)
    labelled = _uses_labels(pairs)
    styles = tuple(styles)

    shape = initial
    steps: list[DerivationStep] = []
    while True:
        if len(steps) >= max_steps or (strategy == "script" and len(steps) >= len(script)):
            reason = MAX_STEPS
            break
        if labelled and not shape.labels:
            reason = NO_LABEL
            break
        choice = None
        if strategy == "script":
            name, k = script[len(steps)]
            if name not in by_name:
                raise RuleError(f"script names unknown rule {name!r}")
            ts = applicable(by_name[name].shape_rule, shape, opts)
            if 0 <= k < len(ts):
                choice = (by_name[name], ts[k])
        elif strategy == "first":
            for p in pairs:
                ts = applicable(p.shape_rule, shape, opts)
                if ts:
                    choice = (p, ts[0])
                    break
        else:
            cands = [(p, t) for p in pairs for t in applicable(p.shape_rule, shape, opts)]
            if cands:
                choice = cands[rng.randrange(len(cands))]
        if choice is None:
            reason = NO_MATCH
            break
        st = step(choice[0], shape, choice[1], styles, index=len(steps) + 1)
        steps.append(st)
        shape = st.shape_after
    return Derivation(initial, steps, reason)


# -- file formats ---------------------------------------------------------------------


def _num(v: float) -> float:
    return round(v, 9) + 0.0


def rule_from_dict(doc: dict) -> RulePair:
    try:
        verbal = doc.get("verbal", {})
        return RulePair(
            ShapeRule(doc["name"], shape_from_dict(doc["lhs"]), shape_from_dict(doc["rhs"])),
            VerbalRule(verbal.get("constructive", ""), tuple(verbal.get("from_above", ()))),
        )
    except KeyError as exc:
        raise RuleError(f"rule document missing {exc}") from exc


def rule_to_dict(pair: RulePair) -> dict:
    return {
        "name": pair.name,
        "lhs": shape_to_dict(pair.shape_rule.lhs),
        "rhs": shape_to_dict(pair.shape_rule.rhs),
        "verbal": {"constructive": pair.verbal_rule.constructive, "from_above": list(pair.verbal_rule.from_above)},
    }


def load_rules(path) -> list[RulePair]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    docs = doc if isinstance(doc, list) else [doc]
    pairs = [rule_from_dict(d) for d in docs]
    names = [p.name for p in pairs]
    if len(set(names)) != len(names):
        raise RuleError("rule names must be unique")
    return pairs


def step_to_dict(st: DerivationStep) -> dict:
    return {
        "index": st.index,
        "rule": st.rule,
        "transform": [_num(v) for v in st.transform.as_tuple()],
        "shape_before": shape_to_dict(st.shape_before),
        "shape_after": shape_to_dict(st.shape_after),
        "binding": {k: shape_to_dict(v) for k, v in sorted(st.binding.items())},
        "descriptions": [
            {
                "text": d.text,
                "style": d.style,
                "semantics": serialize(d.semantics),
                "verification": d.verification.to_dict(),
            }
            for d in st.descriptions
        ],
    }


def derivation_to_dict(d: Derivation) -> dict:
    return {
        "initial": shape_to_dict(d.initial),
        "termination": d.termination,
        "steps": [step_to_dict(s) for s in d.steps],
    }


def dumps_derivation(d: Derivation) -> str:
    return json.dumps(derivation_to_dict(d), indent=2, sort_keys=True)
