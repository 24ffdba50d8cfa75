"""Compositional spatial semantics over parse trees.

Every grammar rule carries a semantic tag naming a curried procedure; the
interpreter evaluates the tree bottom-up and the root procedure
(:func:`process_sentence`) puts the slots in order:

* in a spatial relation reached through ``S -> VACT NPP`` the literal
  composition threads the noun phrase into ``action`` and the verb into
  ``trajector``; the two are swapped back by category;
* constructive verbs take their arguments as ``(landmark, trajector)``;
  in "V X to/from/with Y" the moved entity X is the trajector, so the
  pair is swapped.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Iterable

from .grammar import Grammar, ParseTree, Parser, Token, detokenize
from .regions import REGION_STRINGS

SLOT_ORDER = (
    "relation", "region", "action", "trajector", "landmark",
    "select", "shape", "attribute", "direction", "comparative", "tense",
)
CATEGORIES = ("SHAPE", "ATTRIBUTE", "DIRECTION", "ACTION", "SPATIAL_RELATION")

SHAPES = {"shape1", "shape2"}
ATTRIBUTES = {"edge", "corner", "midpoint"}
DIRECTIONS = {"right", "left", "top", "bottom"}
COMPARATIVES = {"top", "bottom", "upper", "lower"}
ACTIONS = {"is", "draw", "add", "subtract", "replace"}
RELATIONS = set(REGION_STRINGS)

CONSTRUCTIVE = "constructive"
FROM_ABOVE = "from-above"
STYLES = (CONSTRUCTIVE, FROM_ABOVE)

# preposition used when realizing "V X <prep> Y"
VERB_PREPOSITION = {"add": "to", "draw": "to", "subtract": "from", "replace": "with"}


class SemanticError(ValueError):
    pass


class CompositionError(SemanticError):
    pass


class RealizationError(SemanticError):
    pass


@dataclass(frozen=True)
class SemStructure:
    category: str
    slots: tuple  # ((name, value), ...) in SLOT_ORDER

    def __getitem__(self, name: str):
        for k, v in self.slots:
            if k == name:
                return v
        raise KeyError(name)

    def get(self, name: str, default=None):
        for k, v in self.slots:
            if k == name:
                return v
        return default

    def keys(self) -> list[str]:
        return [k for k, _ in self.slots]

    def replace(self, **changes) -> "SemStructure":
        d = dict(self.slots)
        d.update(changes)
        return C(self.category, **d)

    def __str__(self):
        return serialize(self)


def C(category: str, **slots) -> SemStructure:
    """Structure constructor; ``None`` slots are omitted."""
    if category not in CATEGORIES:
        raise SemanticError(f"unknown category {category!r}")
    unknown = set(slots) - set(SLOT_ORDER)
    if unknown:
        raise SemanticError(f"unknown slots {sorted(unknown)}")
    ordered = tuple((k, slots[k]) for k in SLOT_ORDER if slots.get(k) is not None)
    return SemStructure(category, ordered)


# -- composition procedures, keyed by the grammar's semantic tags ------------------

COMPOSE = {
    "start": lambda s: process_sentence(s),
    "np_vp": lambda np, vp: vp(np),
    "vact_npp": lambda vp, npp: npp(vp),
    "constructive": lambda vp, np1, np2: vp(np1, np2),
    "identity": lambda x: x,
    "det_np": lambda det, np: np,
    "np_pp": lambda np, pp: pp(np),
    "marker_np": lambda t, np: np,
    "prop_of_shape": lambda pr, of, s: pr(s),
    "dir_attr": lambda d, a: d(a),
    "comp_dir_attr": lambda c, d, a: c(d, a),
    "attr_of_dir_attr": lambda atr1, o, t, d, atr2: atr1(d, atr2),
    "vp": lambda v, pp: pp(v),
    "pp": lambda p, np: p(np),
}

LEXICAL = {
    "dir": lambda word: lambda attr: lambda shape: C(
        "DIRECTION", shape=shape, attribute=attr, direction=word),
    "attr_plain": lambda attribute: C("ATTRIBUTE", attribute=attribute),
    "dir_plain": lambda word: C("DIRECTION", direction=word),
    "comp": lambda word: lambda direct, attr: lambda shape: C(
        "DIRECTION", shape=shape, attribute=attr, direction=direct, comparative=word),
    "attr_select": lambda word: lambda direct, attr: lambda shape: C(
        "ATTRIBUTE", select=word, shape=shape, attribute=attr, direction=direct),
    "exist_verb": lambda action: C("ACTION", action=action, tense="present"),
    "action_verb": lambda action: C("ACTION", action=action, tense="present"),
    "constructive_verb": lambda word: lambda landmark, trajector: C(
        "ACTION", action=word, trajector=trajector, landmark=landmark),
    "shape": lambda shape: C("SHAPE", shape=shape),
    "locator": lambda word: lambda landmark: lambda action: lambda trajector: C(
        "SPATIAL_RELATION", relation=word, region=REGION_STRINGS[word],
        action=action, trajector=trajector, landmark=landmark),
    "null": lambda word: lambda: None,
}


def process_sentence(s: Any) -> SemStructure:
    if not isinstance(s, SemStructure):
        raise CompositionError(f"unsaturated meaning at sentence root: {s!r}")
    if s.category == "SPATIAL_RELATION":
        act, traj = s.get("action"), s.get("trajector")
        if isinstance(traj, SemStructure) and traj.category == "ACTION" and not (
            isinstance(act, SemStructure) and act.category == "ACTION"
        ):
            s = s.replace(action=traj, trajector=act)
    elif s.category == "ACTION" and s.get("trajector") is not None:
        s = s.replace(trajector=s.get("landmark"), landmark=s.get("trajector"))
    if s.category == "ACTION" and s.get("tense") is None:
        s = s.replace(tense="present")
    validate(s)
    return s


def _is(v, category: str) -> bool:
    return isinstance(v, SemStructure) and v.category == category


def validate(s: SemStructure) -> None:
    """Raise :class:`CompositionError` if ``s`` breaks its category's slot rules."""

    def bad(msg):
        raise CompositionError(f"{s.category}: {msg}")

    slots = dict(s.slots)
    cat = s.category
    if cat == "SHAPE":
        if set(slots) != {"shape"} or slots["shape"] not in SHAPES:
            bad("needs exactly a shape1/shape2 slot")
    elif cat == "ATTRIBUTE":
        allowed = {"attribute", "select", "shape", "direction"}
        a = slots.get("attribute")
        if not (a in ATTRIBUTES or _is(a, "ATTRIBUTE")) or set(slots) - allowed:
            bad("attribute must be edge/corner/midpoint")
        if "select" in slots and slots["select"] not in ATTRIBUTES:
            bad("select must be edge/corner/midpoint")
    elif cat == "DIRECTION":
        allowed = {"direction", "attribute", "shape", "comparative"}
        d = slots.get("direction")
        if set(slots) - allowed or ("direction" not in slots and "attribute" not in slots):
            bad("needs a direction or attribute")
        if d is not None and not (d in DIRECTIONS or _is(d, "DIRECTION")):
            bad(f"bad direction {d!r}")
        if "comparative" in slots and slots["comparative"] not in COMPARATIVES:
            bad("bad comparative")
    elif cat == "ACTION":
        if slots.get("action") not in ACTIONS or slots.get("tense") != "present":
            bad("needs action verb and present tense")
        if set(slots) - {"action", "tense", "trajector", "landmark"}:
            bad("unexpected slots")
    elif cat == "SPATIAL_RELATION":
        need = {"relation", "region", "trajector", "landmark", "action"}
        if set(slots) != need:
            bad(f"slots must be {sorted(need)}")
        if slots["relation"] not in RELATIONS or slots["region"] != REGION_STRINGS[slots["relation"]]:
            bad("relation/region mismatch")
        if not _is(slots["action"], "ACTION"):
            bad("action slot must hold an ACTION")
    for k, v in s.slots:
        if isinstance(v, SemStructure):
            validate(v)
        elif cat == "SPATIAL_RELATION" and k in ("trajector", "landmark"):
            bad(f"{k} must be a structure")


def interpret(tree: ParseTree, grammar: Grammar | None = None) -> SemStructure:
    grammar = grammar or Grammar.builtin()

    def meaning(node: ParseTree):
        rule = node.rule
        if rule is None:
            raise CompositionError(f"tree node {node.label} carries no grammar rule")
        if rule.lexical:
            proc = LEXICAL.get(rule.tag)
            if proc is None:
                raise CompositionError(f"no lexical procedure for tag @{rule.tag}")
            return proc(node.children[0])
        proc = COMPOSE.get(rule.tag)
        if proc is None:
            raise CompositionError(f"no composition procedure for tag @{rule.tag}")
        try:
            return proc(*(meaning(c) for c in node.children))
        except TypeError as exc:
            raise CompositionError(f"ill-typed composition at {node.label}: {exc}") from exc

    result = meaning(tree)
    if not isinstance(result, SemStructure):
        raise CompositionError("unsaturated meaning at root")
    return result


def interpret_sentence(sentence: str, parser: Parser | None = None) -> SemStructure:
    parser = parser or _default_parser()
    return interpret(parser.parse_sentence(sentence)[0], parser.grammar)


_PARSER: Parser | None = None


def _default_parser() -> Parser:
    global _PARSER
    if _PARSER is None:
        _PARSER = Parser()
    return _PARSER


# -- serialization --------------------------------------------------------------


def serialize(s: SemStructure) -> str:
    body = ", ".join(f"{k}={serialize(v) if isinstance(v, SemStructure) else v}" for k, v in s.slots)
    return f"{s.category}[{body}]"


_SER_TOKEN = re.compile(r"\s*([A-Z_]+\[|\]|,|=|[^\s\[\],=]+)")


def deserialize(text: str) -> SemStructure:
    toks = _SER_TOKEN.findall(text)
    pos = 0

    def struct() -> SemStructure:
        nonlocal pos
        head = toks[pos]
        if not head.endswith("["):
            raise SemanticError(f"expected CATEGORY[ at token {pos}")
        pos += 1
        slots = {}
        while toks[pos] != "]":
            name = toks[pos]
            if toks[pos + 1] != "=":
                raise SemanticError(f"expected '=' after {name}")
            pos += 2
            if toks[pos].endswith("["):
                slots[name] = struct()
            else:
                slots[name] = toks[pos]
                pos += 1
            if toks[pos] == ",":
                pos += 1
        pos += 1
        return C(head[:-1], **slots)

    try:
        out = struct()
    except IndexError:
        raise SemanticError("truncated structure text") from None
    if pos != len(toks):
        raise SemanticError("trailing text after structure")
    return out


_POSITIONAL_ORDER = {
    "SHAPE": ("shape",),
    "SPATIAL_RELATION": ("relation", "trajector", "region", "landmark", "action"),
    "ATTRIBUTE": ("select", "attribute", "comparative", "direction", "shape"),
    "DIRECTION": ("select", "attribute", "comparative", "direction", "shape"),
}


def paper_style(s: SemStructure) -> str:
    """Positional bracket rendering, e.g. ``SHAPE['shape1']``."""
    if s.category == "ACTION":
        order = ("action", "trajector", "landmark") if s.get("trajector") is not None else ("action", "tense")
    else:
        order = _POSITIONAL_ORDER[s.category]
    vals = [paper_style(v) if isinstance(v, SemStructure) else v for k in order if (v := s.get(k)) is not None]
    return f"{s.category}{vals!r}"


def to_json(s: SemStructure) -> dict:
    return {
        "category": s.category,
        "attributes": {k: to_json(v) if isinstance(v, SemStructure) else v for k, v in s.slots},
    }


def from_json(doc: dict) -> SemStructure:
    return C(doc["category"], **{
        k: from_json(v) if isinstance(v, dict) else v for k, v in doc["attributes"].items()
    })


def dumps(s: SemStructure) -> str:
    return json.dumps(to_json(s), sort_keys=True)


# -- realization and style conversion ----------------------------------------------


def _word(v, category: str, slot: str) -> str:
    if _is(v, category):
        return v[slot]
    if isinstance(v, str):
        return v
    raise RealizationError(f"cannot realize {v!r} as a word")


def realize_np(v: SemStructure) -> str:
    if _is(v, "SHAPE"):
        return v["shape"]
    if not isinstance(v, SemStructure) or not _is(v.get("shape"), "SHAPE"):
        raise RealizationError(f"cannot realize {v!r} as a noun phrase")
    shape = v["shape"]["shape"]
    attr = _word(v.get("attribute"), "ATTRIBUTE", "attribute")
    if v.category == "DIRECTION":
        direction = _word(v.get("direction"), "DIRECTION", "direction")
        if v.get("comparative") is not None:
            return f"the {v['comparative']} {direction} {attr} of {shape}"
        return f"the {direction} {attr} of {shape}"
    if v.category == "ATTRIBUTE" and v.get("select") is not None:
        direction = _word(v.get("direction"), "DIRECTION", "direction")
        return f"the {v['select']} of the {direction} {attr} of {shape}"
    raise RealizationError(f"cannot realize {v!r} as a noun phrase")


def realize(s: SemStructure, style: str, verb: str = "draw") -> str:
    """Generate a sentence for ``s`` in the given description style."""
    if style not in STYLES:
        raise RealizationError(f"unknown style {style!r}")
    traj, land = s.get("trajector"), s.get("landmark")
    if traj is None or land is None:
        raise RealizationError(f"{s.category} lacks trajector or landmark")
    if s.category == "SPATIAL_RELATION":
        rel = s["relation"]
        if style == FROM_ABOVE:
            return f"{realize_np(traj)} is {rel} {realize_np(land)}"
        action = s["action"]["action"]
        v = verb if action == "is" else action
        if v not in VERB_PREPOSITION:
            raise RealizationError(f"{v!r} is not an action verb")
        return f"{v} {realize_np(traj)} {rel} {realize_np(land)}"
    if s.category == "ACTION":
        if style == FROM_ABOVE:
            raise RealizationError("an action structure asserts no spatial relation")
        a = s["action"]
        return f"{a} {realize_np(traj)} {VERB_PREPOSITION[a]} {realize_np(land)}"
    raise RealizationError(f"cannot realize a {s.category} as a sentence")


def sentence_style(tree: ParseTree) -> str:
    s = tree.children[0]
    return FROM_ABOVE if s.rule is not None and s.rule.tag == "np_vp" else CONSTRUCTIVE


def convert_style(sentence: str, target: str, verb: str = "draw", parser: Parser | None = None) -> str:
    """Rewrite between from-above ("X is at Y") and constructive ("draw X at Y").

    The sentence is parsed and interpreted first (errors propagate); the
    existential verb is then swapped for an action verb or back, keeping
    both noun phrases word for word.
    """
    if target not in STYLES:
        raise RealizationError(f"unknown style {target!r}")
    parser = parser or _default_parser()
    tokens = parser.tokenize(sentence)
    tree = parser.parse(tokens)[0]
    meaning = interpret(tree, parser.grammar)
    s_node = tree.children[0]
    tag = s_node.rule.tag
    if sentence_style(tree) == target:
        return detokenize(tokens)
    if target == CONSTRUCTIVE:
        if verb not in VERB_PREPOSITION:
            raise RealizationError(f"{verb!r} is not an action verb")
        np, vp = s_node.children
        n = len(np.leaves())
        out = [Token(verb, 0)] + tokens[:n] + tokens[n + 1:]
    else:
        if tag != "vact_npp" or meaning.category != "SPATIAL_RELATION":
            raise RealizationError("only 'V X <preposition> Y' sentences have a from-above form")
        vact, npp = s_node.children
        k = len(vact.leaves())
        n = len(npp.children[0].leaves())
        out = tokens[k:k + n] + [Token("is", 0)] + tokens[k + n:]
    return detokenize(out)


def iter_interpretations(sentences: Iterable[str], parser: Parser | None = None):
    parser = parser or _default_parser()
    for s in sentences:
        yield s, interpret_sentence(s, parser)
