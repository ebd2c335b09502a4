"""Finite presentations: parsing, printing and evaluation.

Grammar (``#`` starts a comment that runs to the end of the line)::

    text      := 'gens' ':' NAME (',' NAME)* ';' stmt*
    stmt      := 'rel' ':' equation (',' equation)* ';'
    equation  := word ('=' word)+
    word      := factor ('*' factor)*
    factor    := atom ('^' INT)?
    atom      := NAME | '1' | '(' word ')' | '[' word ',' word ']'

``[u, v]`` is ``u v u^-1 v^-1``.  A chain ``a = b = c`` yields the relators
``a b^-1`` and ``b c^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import PresentationSyntaxError

Letter = tuple[int, int]  # (generator index, +1 or -1)
Word = tuple[Letter, ...]


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        for rel in self.relators:
            for g, s in rel:
                if not 0 <= g < len(self.generators) or s not in (1, -1):
                    raise ValueError(f"bad letter {(g, s)}")


def free_reduce(word: Sequence[Letter]) -> Word:
    out: list[Letter] = []
    for g, s in word:
        if out and out[-1] == (g, -s):
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


def invert(word: Sequence[Letter]) -> Word:
    return tuple((g, -s) for g, s in reversed(word))


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[:;,=*^()\[\]])"
)


class _Lexer:
    def __init__(self, text: str):
        self.tokens: list[tuple[str, str, int, int]] = []
        line, col, pos = 1, 1, 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise PresentationSyntaxError(f"unexpected character {text[pos]!r}", line, col)
            kind = m.lastgroup
            val = m.group()
            if kind == "nl":
                line, col = line + 1, 1
            else:
                if kind not in ("ws", "comment"):
                    self.tokens.append((kind, val, line, col))
                col += len(val)
            pos = m.end()
        self.tokens.append(("eof", "", line, col))
        self.i = 0

    def peek(self) -> tuple[str, str, int, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, val, line, col = self.next()
        if val != value:
            raise PresentationSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", line, col)

    def fail(self, message: str):
        _, _, line, col = self.peek()
        raise PresentationSyntaxError(message, line, col)


class _Parser:
    def __init__(self, text: str):
        self.lx = _Lexer(text)
        self.names: dict[str, int] = {}

    def parse(self) -> Presentation:
        lx = self.lx
        kind, val, line, col = lx.next()
        if val != "gens":
            raise PresentationSyntaxError("expected 'gens:' header", line, col)
        lx.expect(":")
        gens: list[str] = []
        if lx.peek()[1] == ";":
            lx.fail("empty generator list")
        while True:
            kind, val, line, col = lx.next()
            if kind != "name" or val in ("gens", "rel"):
                raise PresentationSyntaxError(f"expected generator name, found {val!r}", line, col)
            if val in self.names:
                raise PresentationSyntaxError(f"duplicate generator {val!r}", line, col)
            self.names[val] = len(gens)
            gens.append(val)
            if lx.peek()[1] == ",":
                lx.next()
                continue
            lx.expect(";")
            break
        relators: list[Word] = []
        while lx.peek()[0] != "eof":
            kind, val, line, col = lx.next()
            if val != "rel":
                raise PresentationSyntaxError(f"expected 'rel:', found {val!r}", line, col)
            lx.expect(":")
            while True:
                sides = [self.word()]
                while lx.peek()[1] == "=":
                    lx.next()
                    sides.append(self.word())
                if len(sides) < 2:
                    lx.fail("expected '='")
                for left, right in zip(sides, sides[1:]):
                    rel = free_reduce(left + invert(right))
                    if rel:
                        relators.append(rel)
                if lx.peek()[1] == ",":
                    lx.next()
                    continue
                lx.expect(";")
                break
        return Presentation(tuple(gens), tuple(relators))

    def word(self) -> Word:
        out = list(self.factor())
        while self.lx.peek()[1] == "*":
            self.lx.next()
            out.extend(self.factor())
        return free_reduce(out)

    def factor(self) -> Word:
        base = self.atom()
        if self.lx.peek()[1] == "^":
            self.lx.next()
            kind, val, line, col = self.lx.next()
            if kind != "int":
                raise PresentationSyntaxError(f"expected integer exponent, found {val!r}", line, col)
            e = int(val)
            unit = base if e >= 0 else invert(base)
            return tuple(unit) * abs(e)
        return base

    def atom(self) -> Word:
        kind, val, line, col = self.lx.next()
        if kind == "name":
            if val not in self.names:
                raise PresentationSyntaxError(f"unknown generator {val!r}", line, col)
            return ((self.names[val], 1),)
        if kind == "int" and val == "1":
            return ()
        if val == "(":
            w = self.word()
            self.lx.expect(")")
            return w
        if val == "[":
            u = self.word()
            self.lx.expect(",")
            v = self.word()
            self.lx.expect("]")
            return u + v + invert(u) + invert(v)
        raise PresentationSyntaxError(f"unexpected {val or 'end of input'!r}", line, col)


def parse_presentation(text: str) -> Presentation:
    return _Parser(text).parse()


def format_word(word: Sequence[Letter], names: Sequence[str]) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        g, s = word[i]
        e = (j - i) * s
        parts.append(names[g] if e == 1 else f"{names[g]}^{e}")
        i = j
    return "*".join(parts)


def format_presentation(p: Presentation) -> str:
    lines = [f"gens: {', '.join(p.generators)};"]
    for rel in p.relators:
        lines.append(f"rel: {format_word(rel, p.generators)} = 1;")
    return "\n".join(lines) + "\n"


def evaluate_word(G, gen_elements: Sequence[int], word: Sequence[Letter]) -> int:
    """Value of ``word`` in the table ``G`` with generator ``k`` sent to ``gen_elements[k]``."""
    x = G.identity
    for g, s in word:
        e = gen_elements[g]
        x = G.rows[x][e if s > 0 else G.inv_list[e]]
    return x


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse a single word over the given generator names."""
    p = _Parser(text)
    p.names = {n: i for i, n in enumerate(names)}
    w = p.word()
    if p.lx.peek()[0] != "eof":
        p.lx.fail("trailing input after word")
    return w


def presentation_from_file(path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


def relator_holds(G, gen_elements: Sequence[int], p: Presentation, rel: Optional[Word] = None) -> bool:
    rels = p.relators if rel is None else (rel,)
    return all(evaluate_word(G, gen_elements, r) == G.identity for r in rels)
