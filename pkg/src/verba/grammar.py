"""Tokenizer and chart parser for shape-description sentences.

The grammar is context free and deliberately ambiguous at the word level
('add' is both ACTION_VERB and ADD; 'top' is DIR, DIR_ and COMP), so parsing
is done with an Earley chart that keeps every complete analysis.  Parses come
back ordered by rule priority (the order rules appear in the grammar text).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterator, Sequence

LEXICON = (
    "right", "left", "top", "bottom", "upper", "lower",
    "edge", "corner", "midpoint", "shape1", "shape2",
    "is", "draw", "add", "subtract", "replace",
    "at", "on", "in", "to", "from", "with", "of", "the",
)
SHAPE_WORDS = ("shape1", "shape2")

# cosmetic feature slots and display names used by render_tree
FEATURES = {"NP": "[-pro, -wh]"}
DISPLAY = {"IN": "SP"}


class GrammarError(ValueError):
    pass


class LexicalError(GrammarError):
    """Word outside the lexicon; ``position`` counts words from 1."""

    def __init__(self, word: str, position: int):
        self.word, self.position = word, position
        super().__init__(f"unknown word {word!r} at position {position}")


class ParseError(GrammarError):
    """No parse; ``position`` (from 1) is the first word the grammar cannot take."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(message)


@dataclass(frozen=True)
class Token:
    surface: str
    position: int  # 0-based word index
    reference: bool = False  # written as <shapeN>


def lexicon() -> list[str]:
    return list(LEXICON)


_WORD_RE = re.compile(r"<[^>]*>|[^\s<]+")


def tokenize(sentence: str, vocabulary: Sequence[str] = LEXICON) -> list[Token]:
    text = sentence.strip().lower()
    text = re.sub(r"[.\s]+$", "", text)
    vocab = set(vocabulary)
    tokens = []
    for i, m in enumerate(_WORD_RE.finditer(text)):
        raw = m.group()
        ref = raw.startswith("<")
        word = raw[1:-1].strip() if ref else raw
        if word not in vocab or (ref and word not in SHAPE_WORDS):
            raise LexicalError(raw, i + 1)
        tokens.append(Token(word, i, ref))
    return tokens


def detokenize(tokens: Sequence[Token]) -> str:
    return " ".join(f"<{t.surface}>" if t.reference else t.surface for t in tokens)


# -- grammar ---------------------------------------------------------------------


@dataclass(frozen=True)
class Word:
    text: str


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: tuple  # of str (nonterminal) or Word
    tag: str
    priority: int

    def __str__(self):
        items = " ".join(f"'{x.text}'" if isinstance(x, Word) else x for x in self.rhs)
        return f"{self.lhs} -> {items} @{self.tag}"

    @property
    def lexical(self) -> bool:
        return len(self.rhs) == 1 and isinstance(self.rhs[0], Word)


_ITEM_RE = re.compile(r"'[^']*'|\"[^\"]*\"|\||[^\s|]+")


class Grammar:
    def __init__(self, rules: Sequence[Rule], start: str = "Start"):
        self.rules = tuple(rules)
        self.start = start
        self.by_lhs: dict[str, list[Rule]] = {}
        for r in self.rules:
            self.by_lhs.setdefault(r.lhs, []).append(r)
        if start not in self.by_lhs:
            raise GrammarError(f"no rule for start symbol {start!r}")
        for r in self.rules:
            for x in r.rhs:
                if not isinstance(x, Word) and x not in self.by_lhs:
                    raise GrammarError(f"undefined symbol {x!r} in rule {r}")
        self.words = tuple(sorted({x.text for r in self.rules for x in r.rhs if isinstance(x, Word)}))

    @classmethod
    def from_text(cls, text: str, start: str = "Start") -> "Grammar":
        rules: list[Rule] = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "->" not in line or "@" not in line:
                raise GrammarError(f"line {lineno}: expected 'LHS -> RHS ... @tag'")
            body, tag = line.rsplit("@", 1)
            lhs, rhs = body.split("->", 1)
            lhs, tag = lhs.strip(), tag.strip()
            alts: list[list] = [[]]
            for item in _ITEM_RE.findall(rhs):
                if item == "|":
                    alts.append([])
                elif item[0] in "'\"":
                    alts[-1].append(Word(item[1:-1]))
                else:
                    alts[-1].append(item)
            for alt in alts:
                if not alt:
                    raise GrammarError(f"line {lineno}: empty right-hand side")
                rules.append(Rule(lhs, tuple(alt), tag, len(rules)))
        return cls(rules, start)

    @classmethod
    def load(cls, path) -> "Grammar":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    @classmethod
    def builtin(cls) -> "Grammar":
        return _builtin()

    def to_text(self) -> str:
        return "\n".join(str(r) for r in self.rules) + "\n"


@lru_cache(maxsize=None)
def _builtin() -> Grammar:
    text = resources.files("verba").joinpath("grammar.cfg").read_text(encoding="utf-8")
    return Grammar.from_text(text)


# -- trees -----------------------------------------------------------------------


@dataclass(frozen=True)
class ParseTree:
    label: str
    children: tuple  # ParseTree | str
    rule: Rule | None = field(default=None, compare=False, repr=False)

    def leaves(self) -> list[str]:
        out = []
        for c in self.children:
            out.extend(c.leaves() if isinstance(c, ParseTree) else [c])
        return out

    def _head(self) -> str:
        return DISPLAY.get(self.label, self.label) + FEATURES.get(self.label, "[]")

    def flat(self) -> str:
        parts = [c.flat() if isinstance(c, ParseTree) else c for c in self.children]
        return f"({self._head()} {' '.join(parts)})"

    def _priority(self) -> tuple:
        own = (self.rule.priority if self.rule else -1, -len(self.leaves()))
        return (own,) + tuple(x for c in self.children if isinstance(c, ParseTree) for x in c._priority())


def render_tree(tree: ParseTree, margin: int = 70, indent: int = 0) -> str:
    flat = tree.flat()
    if len(flat) + indent < margin:
        return flat
    pad = "\n" + " " * (indent + 2)
    body = "".join(
        pad + (render_tree(c, margin, indent + 2) if isinstance(c, ParseTree) else c) for c in tree.children
    )
    return f"({tree._head()}{body})"


_UNDISPLAY = {v: k for k, v in DISPLAY.items()}


def read_tree(text: str, grammar: Grammar | None = None) -> ParseTree:
    """Inverse of :func:`render_tree`; feature slots are dropped."""
    grammar = grammar or Grammar.builtin()
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node() -> ParseTree:
        nonlocal pos
        skip()
        if text[pos] != "(":
            raise GrammarError(f"expected '(' at offset {pos}")
        pos += 1
        m = re.compile(r"([^\s\[\]()]+)(\[[^\]]*\])?").match(text, pos)
        if not m:
            raise GrammarError(f"bad node label at offset {pos}")
        label = _UNDISPLAY.get(m.group(1), m.group(1))
        pos = m.end()
        kids: list = []
        while True:
            skip()
            if pos >= len(text):
                raise GrammarError("unbalanced parentheses")
            if text[pos] == ")":
                pos += 1
                break
            if text[pos] == "(":
                kids.append(node())
            else:
                m = re.compile(r"[^\s()]+").match(text, pos)
                kids.append(m.group())
                pos = m.end()
        return ParseTree(label, tuple(kids), _find_rule(grammar, label, kids))

    tree = node()
    skip()
    if pos != len(text):
        raise GrammarError("trailing text after tree")
    return tree


def _find_rule(grammar: Grammar, label: str, kids) -> Rule | None:
    sig = tuple(Word(k) if isinstance(k, str) else k.label for k in kids)
    for r in grammar.by_lhs.get(label, ()):
        if r.rhs == sig:
            return r
    return None


# -- parsing -----------------------------------------------------------------------


class Parser:
    """Earley chart parser returning all complete parses in priority order."""

    def __init__(self, grammar: Grammar | None = None):
        self.grammar = grammar or Grammar.builtin()

    def tokenize(self, sentence: str) -> list[Token]:
        return tokenize(sentence, self.grammar.words)

    def parse_sentence(self, sentence: str) -> list[ParseTree]:
        return self.parse(self.tokenize(sentence))

    def parse(self, tokens: Sequence[Token | str]) -> list[ParseTree]:
        words = [t.surface if isinstance(t, Token) else t for t in tokens]
        if not words:
            raise ParseError("empty sentence", 0)
        complete = self._chart(words)
        g = self.grammar
        if (g.start, 0, len(words)) not in complete:
            raise ParseError(f"incomplete sentence: no parse ends at position {len(words) + 1}", len(words) + 1)
        trees = _Builder(g, words, complete).build(g.start, 0, len(words))
        return sorted(trees, key=ParseTree._priority)

    def _chart(self, words: list[str]) -> set:
        g = self.grammar
        n = len(words)
        # state: (rule, dot, origin)
        chart: list[dict] = [dict() for _ in range(n + 1)]
        complete: set = set()

        def add(k, st):
            if st not in chart[k]:
                chart[k][st] = None
                return True
            return False

        for r in g.by_lhs[g.start]:
            add(0, (r, 0, 0))
        for k in range(n + 1):
            agenda = list(chart[k])
            i = 0
            while i < len(agenda):
                r, dot, org = agenda[i]
                i += 1
                if dot == len(r.rhs):
                    complete.add((r.lhs, org, k))
                    complete.add((r, org, k))
                    for r2, d2, o2 in list(chart[org]):
                        if d2 < len(r2.rhs) and r2.rhs[d2] == r.lhs:
                            st = (r2, d2 + 1, o2)
                            if add(k, st):
                                agenda.append(st)
                    continue
                nxt = r.rhs[dot]
                if isinstance(nxt, Word):
                    if k < n and words[k] == nxt.text:
                        add(k + 1, (r, dot + 1, org))
                    continue
                for r2 in g.by_lhs[nxt]:
                    st = (r2, 0, k)
                    if add(k, st):
                        agenda.append(st)
                if (nxt, k, k) in complete:  # no empty rules, kept for safety
                    st = (r, dot + 1, org)
                    if add(k, st):
                        agenda.append(st)
            if k < n and not chart[k + 1]:
                raise ParseError(f"unexpected word {words[k]!r} at position {k + 1}", k + 1)
        return complete


class _Builder:
    def __init__(self, grammar: Grammar, words: list[str], complete: set):
        self.g, self.words, self.complete = grammar, words, complete
        self.memo: dict = {}

    def build(self, sym: str, i: int, j: int) -> list[ParseTree]:
        key = (sym, i, j)
        if key in self.memo:
            return self.memo[key]
        out = []
        for r in self.g.by_lhs.get(sym, ()):
            if (r, i, j) not in self.complete:
                continue
            for kids in self._seq(r.rhs, 0, i, j):
                out.append(ParseTree(sym, tuple(kids), r))
        self.memo[key] = out
        return out

    def _seq(self, rhs: tuple, idx: int, i: int, j: int) -> Iterator[list]:
        if idx == len(rhs):
            if i == j:
                yield []
            return
        x = rhs[idx]
        if isinstance(x, Word):
            if i < j and self.words[i] == x.text:
                for rest in self._seq(rhs, idx + 1, i + 1, j):
                    yield [x.text] + rest
            return
        remaining = len(rhs) - idx - 1
        for m in range(j - remaining, i, -1):  # longest first
            if (x, i, m) not in self.complete:
                continue
            for sub in self.build(x, i, m):
                for rest in self._seq(rhs, idx + 1, m, j):
                    yield [sub] + rest


def parse(tokens: Sequence[Token | str], grammar: Grammar | None = None) -> list[ParseTree]:
    return Parser(grammar).parse(tokens)


# -- generation --------------------------------------------------------------------


class Generator:
    """Enumerates the language of a grammar by sentence length (shortest first).

    Trees are produced lazily; only small per-(symbol, length) tree lists
    are memoized, so the full language of long sentences can be streamed.
    """

    CACHE_LIMIT = 4096

    def __init__(self, grammar: Grammar | None = None):
        self.grammar = grammar or Grammar.builtin()
        self._trees: dict = {}
        self._counts: dict = {}

    def count(self, sym: str, n: int, rules: Sequence[Rule] | None = None) -> int:
        """Number of derivation trees of ``sym`` with exactly ``n`` words."""
        if rules is None:
            key = (sym, n)
            if key not in self._counts:
                self._counts[key] = sum(self._count_rhs(r.rhs, n) for r in self.grammar.by_lhs.get(sym, ()))
            return self._counts[key]
        return sum(self._count_rhs(r.rhs, n) for r in rules)

    def _count_rhs(self, rhs: tuple, n: int) -> int:
        if not rhs:
            return 1 if n == 0 else 0
        x, rest = rhs[0], rhs[1:]
        if isinstance(x, Word):
            return self._count_rhs(rest, n - 1) if n >= 1 else 0
        return sum(self.count(x, m) * self._count_rhs(rest, n - m) for m in range(1, n - len(rest) + 1))

    def trees(self, sym: str, n: int) -> list[ParseTree]:
        """All derivation trees of ``sym`` yielding exactly ``n`` words, as a list."""
        return list(self.iter_trees(sym, n))

    def iter_trees(self, sym: str, n: int, rules: Sequence[Rule] | None = None) -> Iterator[ParseTree]:
        """Stream the trees of ``sym`` with ``n`` words, optionally restricted to ``rules``."""
        if rules is None:
            key = (sym, n)
            if key in self._trees:
                yield from self._trees[key]
                return
            if self.count(sym, n) <= self.CACHE_LIMIT:
                self._trees[key] = [ParseTree(sym, tuple(k), r) for r in self.grammar.by_lhs.get(sym, ())
                                    for k in self._split(r.rhs, n)]
                yield from self._trees[key]
                return
            rules = self.grammar.by_lhs.get(sym, ())
        for r in rules:
            for kids in self._split(r.rhs, n):
                yield ParseTree(sym, tuple(kids), r)

    def _split(self, rhs: tuple, n: int) -> Iterator[list]:
        if not rhs:
            if n == 0:
                yield []
            return
        x, rest = rhs[0], rhs[1:]
        if isinstance(x, Word):
            if n >= 1:
                for tail in self._split(rest, n - 1):
                    yield [x.text] + tail
            return
        for m in range(1, n - len(rest) + 1):
            if not self.count(x, m) or not self._count_rhs(rest, n - m):
                continue
            for h in self.iter_trees(x, m):
                for tail in self._split(rest, n - m):
                    yield [h] + tail

    def sentences(self, max_len: int, sym: str | None = None,
                  rules: Sequence[Rule] | None = None) -> Iterator[tuple[str, ...]]:
        """Distinct word sequences up to ``max_len`` words, shortest first."""
        sym = sym or self.grammar.start
        for n in range(1, max_len + 1):
            seen = set()
            for t in self.iter_trees(sym, n, rules):
                words = tuple(t.leaves())
                if words not in seen:
                    seen.add(words)
                    yield words
