"""Finite presentations and a small parser for relator strings.

Relator syntax: ``*``-separated factors, each factor a generator name or a
parenthesised sub-expression, optionally followed by ``^k`` with ``k`` a
(possibly negative) integer.  ``[x,y]`` is accepted as the commutator
``x*y*x^-1*y^-1`` and ``lhs = rhs`` as the relator ``lhs*rhs^-1``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

# A word is a tuple of (generator index, exponent) pairs.
Word = tuple[tuple[int, int], ...]


class PresentationError(ValueError):
    pass


def word_inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def word_power(w: Word, k: int) -> Word:
    if k < 0:
        w, k = word_inverse(w), -k
    return tuple(w) * k


def commutator_word(x: Word, y: Word) -> Word:
    return tuple(x) + tuple(y) + word_inverse(x) + word_inverse(y)


def reduce_word(w: Iterable[tuple[int, int]]) -> Word:
    """Merge adjacent powers of the same generator and drop zero exponents."""
    out: list[list[int]] = []
    for g, e in w:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


def letters(w: Word) -> list[tuple[int, int]]:
    """Expand into single letters ``(generator, +1 | -1)``."""
    out = []
    for g, e in w:
        s = 1 if e > 0 else -1
        out.extend([(g, s)] * abs(e))
    return out


_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[\^\*\(\)\[\],=]))")


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.index = {n: i for i, n in enumerate(names)}
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text):
        tokens, pos = [], 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PresentationError(f"cannot parse {text!r} at offset {pos}")
            kind = m.lastgroup
            tokens.append((kind, m.group(kind)))
            pos = m.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise PresentationError(f"malformed relator {self.text!r}: expected {value or 'token'}")
        self.pos += 1
        return tok

    def relation(self) -> Word:
        lhs = self.expr()
        if self.peek()[1] == "=":
            self.take("=")
            lhs = lhs + word_inverse(self.expr())
        if self.pos != len(self.tokens):
            raise PresentationError(f"malformed relator {self.text!r}: trailing input")
        return reduce_word(lhs)

    def expr(self) -> Word:
        w = self.factor()
        while self.peek()[1] == "*":
            self.take("*")
            w = w + self.factor()
        return w

    def factor(self) -> Word:
        kind, val = self.peek()
        if kind == "name":
            self.take()
            if val not in self.index:
                raise PresentationError(f"unknown generator {val!r} in {self.text!r}")
            w: Word = ((self.index[val], 1),)
        elif val == "(":
            self.take("(")
            w = self.expr()
            self.take(")")
        elif val == "[":
            self.take("[")
            x = self.expr()
            self.take(",")
            y = self.expr()
            self.take("]")
            w = commutator_word(x, y)
        elif kind == "int" and val == "1":
            self.take()
            w = ()
        else:
            raise PresentationError(f"malformed relator {self.text!r}")
        if self.peek()[1] == "^":
            self.take("^")
            kind, val = self.take()
            if kind != "int":
                raise PresentationError(f"exponent must be an integer in {self.text!r}")
            w = word_power(w, int(val))
        return w


def parse_word(text: str, generators: Sequence[str]) -> Word:
    return _Parser(text, generators).relation()


def format_word(w: Word, generators: Sequence[str]) -> str:
    if not w:
        return "1"
    return "*".join(generators[g] if e == 1 else f"{generators[g]}^{e}" for g, e in w)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    central: tuple[int, ...] = ()
    name: str = ""

    def __post_init__(self):
        k = len(self.generators)
        if len(set(self.generators)) != k:
            raise PresentationError("duplicate generator names")
        for w in self.relators:
            for g, _ in w:
                if not 0 <= g < k:
                    raise PresentationError(f"generator index {g} out of range")
        for c in self.central:
            if not 0 <= c < k:
                raise PresentationError(f"central generator index {c} out of range")

    @classmethod
    def parse(cls, generators: Sequence[str], relators: Sequence[Union[str, Word]],
              central: Sequence[Union[str, int]] = (), name: str = "") -> "Presentation":
        gens = tuple(generators)
        rels = tuple(parse_word(r, gens) if isinstance(r, str) else reduce_word(r)
                     for r in relators)
        cent = []
        for c in central:
            if isinstance(c, str):
                if c not in gens:
                    raise PresentationError(f"unknown central generator {c!r}")
                c = gens.index(c)
            cent.append(int(c))
        return cls(gens, rels, tuple(cent), name)

    def expanded_relators(self) -> list[Word]:
        """Relators with each declared-central generator's commutators added."""
        rels = [w for w in self.relators if w]
        for z in self.central:
            for g in range(len(self.generators)):
                if g != z:
                    rels.append(commutator_word(((z, 1),), ((g, 1),)))
        return rels

    def to_json(self) -> dict:
        return {"generators": list(self.generators),
                "relators": [format_word(w, self.generators) for w in self.relators],
                "central": [self.generators[c] for c in self.central]}

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        try:
            return cls.parse(data["generators"], data["relators"], data.get("central", []),
                             name=data.get("name", ""))
        except KeyError as exc:
            raise PresentationError(f"presentation JSON missing field {exc}") from None

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Presentation":
        return cls.from_json(json.loads(Path(path).read_text()))
