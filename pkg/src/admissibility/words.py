"""Free-group words with commutator structure, and finite presentations.

Words are immutable trees over generator symbols; a commutator node [u, v]
stands for u^-1 v^-1 u v.  Evaluation happens either structurally (here) or
through the flat postfix programs consumed by the scan kernels.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

# postfix opcodes shared with the kernels
OP_GEN = 0
OP_MUL = 1
OP_INV = 2
OP_POW = 3
OP_COMM = 4


class Word:
    """A word in the free group on numbered generators."""

    __slots__ = ("kind", "gen", "exp", "parts")

    def __init__(self, kind: str, gen: int = -1, exp: int = 0, parts: tuple = ()):
        self.kind = kind
        self.gen = gen
        self.exp = exp
        self.parts = parts

    # -- constructors --------------------------------------------------------

    @staticmethod
    def one() -> "Word":
        return Word("one")

    @staticmethod
    def generator(index: int, exp: int = 1) -> "Word":
        if index < 0:
            raise ValueError("generator index must be nonnegative")
        if exp == 0:
            return Word.one()
        return Word("gen", gen=index, exp=exp)

    @staticmethod
    def product(*parts: "Word") -> "Word":
        flat = [p for p in parts if p.kind != "one"]
        if not flat:
            return Word.one()
        if len(flat) == 1:
            return flat[0]
        return Word("prod", parts=tuple(flat))

    @staticmethod
    def commutator(u: "Word", v: "Word") -> "Word":
        return Word("comm", parts=(u, v))

    @staticmethod
    def power(base: "Word", exp: int) -> "Word":
        if exp == 0:
            return Word.one()
        if exp == 1:
            return base
        if base.kind == "gen":
            return Word.generator(base.gen, base.exp * exp)
        return Word("pow", exp=exp, parts=(base,))

    def inverse(self) -> "Word":
        if self.kind == "one":
            return self
        if self.kind == "gen":
            return Word.generator(self.gen, -self.exp)
        if self.kind == "prod":
            return Word.product(*[p.inverse() for p in reversed(self.parts)])
        if self.kind == "comm":
            return Word.commutator(self.parts[1], self.parts[0])
        return Word.power(self.parts[0].inverse(), self.exp)

    def conjugated_by(self, v: "Word") -> "Word":
        """v^-1 * self * v."""
        return Word.product(v.inverse(), self, v)

    # -- queries ---------------------------------------------------------------

    def max_generator(self) -> int:
        if self.kind == "one":
            return -1
        if self.kind == "gen":
            return self.gen
        return max(p.max_generator() for p in self.parts)

    def referenced_generators(self) -> set[int]:
        if self.kind == "one":
            return set()
        if self.kind == "gen":
            return {self.gen}
        out: set[int] = set()
        for p in self.parts:
            out |= p.referenced_generators()
        return out

    def exponent_sums(self, ngen: int) -> list[int]:
        """Per-generator exponent sums; commutator nodes contribute zero."""
        sums = [0] * ngen
        self._accumulate(sums, 1)
        return sums

    def _accumulate(self, sums: list[int], scale: int) -> None:
        if self.kind == "one":
            return
        if self.kind == "gen":
            sums[self.gen] += scale * self.exp
            return
        if self.kind == "prod":
            for p in self.parts:
                p._accumulate(sums, scale)
            return
        if self.kind == "comm":
            return
        self.parts[0]._accumulate(sums, scale * self.exp)

    # -- evaluation ---------------------------------------------------------------

    def evaluate(self, assignment: Sequence[int], group) -> int:
        """Structural evaluation at an assignment of group elements."""
        if self.kind == "one":
            return group.identity
        if self.kind == "gen":
            return group.power(assignment[self.gen], self.exp)
        if self.kind == "prod":
            acc = group.identity
            for p in self.parts:
                acc = group.mul(acc, p.evaluate(assignment, group))
            return acc
        if self.kind == "comm":
            u = self.parts[0].evaluate(assignment, group)
            v = self.parts[1].evaluate(assignment, group)
            return group.commutator(u, v)
        return group.power(self.parts[0].evaluate(assignment, group), self.exp)

    def postfix(self) -> list[int]:
        """Flat (op, arg) program for the scan kernels."""
        code: list[int] = []
        self._emit(code)
        return code

    def _emit(self, code: list[int]) -> None:
        if self.kind == "one":
            # encode as g0^0 via POW 0 on an arbitrary pushed element
            code.extend([OP_GEN, 0, OP_POW, 0])
            return
        if self.kind == "gen":
            code.extend([OP_GEN, self.gen])
            if self.exp != 1:
                code.extend([OP_POW, self.exp])
            return
        if self.kind == "prod":
            self.parts[0]._emit(code)
            for p in self.parts[1:]:
                p._emit(code)
                code.append(OP_MUL)
                code.append(0)
            return
        if self.kind == "comm":
            self.parts[0]._emit(code)
            self.parts[1]._emit(code)
            code.extend([OP_COMM, 0])
            return
        self.parts[0]._emit(code)
        code.extend([OP_POW, self.exp])

    def stack_need(self) -> int:
        if self.kind in ("one", "gen"):
            return 1
        if self.kind == "prod":
            return max(p.stack_need() + (1 if i else 0) for i, p in enumerate(self.parts))
        if self.kind == "comm":
            return max(self.parts[0].stack_need(), self.parts[1].stack_need() + 1)
        return self.parts[0].stack_need()

    def relabeled(self, perm: Sequence[int]) -> "Word":
        """Same word with generator i replaced by perm[i]."""
        if self.kind == "one":
            return self
        if self.kind == "gen":
            return Word.generator(perm[self.gen], self.exp)
        if self.kind == "prod":
            return Word.product(*[p.relabeled(perm) for p in self.parts])
        if self.kind == "comm":
            return Word.commutator(self.parts[0].relabeled(perm), self.parts[1].relabeled(perm))
        return Word.power(self.parts[0].relabeled(perm), self.exp)

    def to_str(self, names: Sequence[str]) -> str:
        if self.kind == "one":
            return "1"
        if self.kind == "gen":
            return names[self.gen] + (f"^{self.exp}" if self.exp != 1 else "")
        if self.kind == "prod":
            return " ".join(p.to_str(names) if p.kind != "prod" else f"({p.to_str(names)})"
                            for p in self.parts)
        if self.kind == "comm":
            return f"[{self.parts[0].to_str(names)},{self.parts[1].to_str(names)}]"
        inner = self.parts[0].to_str(names)
        return f"({inner})^{self.exp}"

    def __repr__(self) -> str:
        return f"Word<{self.kind}>"


def evaluate_word(word: Word, assignment: Sequence[int], group) -> int:
    if word.max_generator() >= len(assignment):
        raise ValueError("assignment shorter than the word's generator range")
    return word.evaluate(assignment, group)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\^|-?\d+|[\[\](),])")


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.index = {name: i for i, name in enumerate(names)}

    @staticmethod
    def _tokenize(text: str) -> list[str]:
        tokens = []
        pos = 0
        length = len(text)
        while pos < length:
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot tokenize word at: {text[pos:]!r}")
            tokens.append(m.group(1))
            pos = m.end()
        return tokens

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of word")
        self.pos += 1
        return tok

    def parse_word(self, stop: tuple[str, ...] = ()) -> Word:
        parts = []
        while True:
            tok = self.peek()
            if tok is None or tok in stop:
                break
            parts.append(self.parse_term())
        if not parts:
            return Word.one()
        return Word.product(*parts)

    def parse_term(self) -> Word:
        atom = self.parse_atom()
        while self.peek() == "^":
            self.next()
            tok = self.next()
            if re.fullmatch(r"-?\d+", tok):
                atom = Word.power(atom, int(tok))
            elif tok in self.index:
                atom = atom.conjugated_by(Word.generator(self.index[tok]))
            else:
                raise ValueError(f"exponent must be an integer or a generator, got {tok!r}")
        return atom

    def parse_atom(self) -> Word:
        tok = self.next()
        if tok == "(":
            inner = self.parse_word(stop=(")",))
            if self.next() != ")":
                raise ValueError("unbalanced parenthesis")
            return inner
        if tok == "[":
            u = self.parse_word(stop=(",",))
            if self.next() != ",":
                raise ValueError("commutator needs two components")
            v = self.parse_word(stop=("]",))
            if self.next() != "]":
                raise ValueError("unbalanced bracket")
            return Word.commutator(u, v)
        if tok == "1":
            return Word.one()
        if tok in self.index:
            return Word.generator(self.index[tok])
        raise ValueError(f"unknown generator {tok!r}")


def parse_word(text: str, names: Sequence[str]) -> Word:
    parser = _Parser(text, names)
    word = parser.parse_word()
    if parser.peek() is not None:
        raise ValueError(f"trailing input after word: {parser.tokens[parser.pos:]}")
    return word


def parse_relation(text: str, names: Sequence[str]) -> Word:
    """Parse a relator, either as a bare word or as an equation lhs = rhs."""
    if "=" in text:
        lhs_text, rhs_text = text.split("=", 1)
        lhs = parse_word(lhs_text, names)
        rhs = parse_word(rhs_text, names)
        return Word.product(lhs, rhs.inverse())
    return parse_word(text, names)


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

MODES = ("finite", "pro-p", "pro-prime-to-2")


@dataclass(frozen=True)
class Presentation:
    """Generators plus relators, tagged with an evaluation mode.

    ``torsion`` optionally bounds the order of each generator's image (the
    image's order must divide the bound); this is interchangeable with a
    single-generator power relator and exists so reduced presentations can
    state their torsion directly.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    mode: str = "finite"
    p: Optional[int] = None
    torsion: tuple[Optional[int], ...] = ()

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "pro-p":
            if self.p is None or self.p < 2:
                raise ValueError("pro-p mode requires a prime p")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        if not self.torsion:
            object.__setattr__(self, "torsion", tuple(None for _ in self.generators))
        if len(self.torsion) != len(self.generators):
            raise ValueError("torsion bounds must match generator count")
        for rel in self.relators:
            if rel.max_generator() >= len(self.generators):
                raise ValueError("relator references an undeclared generator")

    @property
    def ngen(self) -> int:
        return len(self.generators)

    @property
    def is_free(self) -> bool:
        return not self.relators and all(b is None for b in self.torsion)

    @staticmethod
    def from_strings(generators: Sequence[str] | str, relations: Iterable[str] = (),
                     mode: str = "finite", p: Optional[int] = None) -> "Presentation":
        if isinstance(generators, str):
            generators = [g for g in re.split(r"[,\s]+", generators.strip()) if g]
        names = tuple(generators)
        relators = tuple(parse_relation(text, names) for text in relations)
        return Presentation(names, relators, mode=mode, p=p)

    def describe(self) -> str:
        gens = ",".join(self.generators)
        rels = "; ".join(r.to_str(self.generators) for r in self.relators) or "(free)"
        tag = self.mode if self.mode != "pro-p" else f"pro-{self.p}"
        return f"<{gens} | {rels}> [{tag}]"
