"""Braid words over the Artin generators and the defining relations of B_n.

A word is a tuple of nonzero integers: ``i`` stands for the generator tau_i and
``-i`` for its inverse.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .errors import GeneratorOutOfRange, MalformedToken


@dataclass(frozen=True)
class BraidWord:
    letters: tuple[int, ...]
    strand_count: int

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.strand_count < 2:
            raise ValueError("strand_count must be at least 2")
        for x in self.letters:
            if x == 0:
                raise MalformedToken("generator index 0 is not allowed")
            if abs(x) > self.strand_count - 1:
                raise GeneratorOutOfRange(
                    f"generator {x} out of range for B_{self.strand_count}"
                )

    @classmethod
    def identity(cls, n: int) -> BraidWord:
        return cls((), n)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: BraidWord) -> BraidWord:
        if other.strand_count != self.strand_count:
            raise ValueError("cannot concatenate words on different strand counts")
        return BraidWord(self.letters + other.letters, self.strand_count)

    def inverse(self) -> BraidWord:
        return BraidWord(tuple(-x for x in reversed(self.letters)), self.strand_count)

    def uses(self, generator: int) -> bool:
        return any(abs(x) == generator for x in self.letters)

    def format(self) -> str:
        return format_word(self)

    def __str__(self) -> str:
        return self.format() or "e"


def parse_word(text: str, n: int) -> BraidWord:
    letters = []
    for tok in text.split():
        try:
            value = int(tok)
        except ValueError:
            raise MalformedToken(f"not an integer: {tok!r}") from None
        if value == 0:
            raise MalformedToken("generator index 0 is not allowed")
        if abs(value) >= n:
            raise GeneratorOutOfRange(f"generator {value} out of range for B_{n}")
        letters.append(value)
    return BraidWord(tuple(letters), n)


def format_word(w: BraidWord) -> str:
    return " ".join(str(x) for x in w.letters)


def free_reduce(w: BraidWord) -> BraidWord:
    stack: list[int] = []
    for x in w.letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return BraidWord(tuple(stack), w.strand_count)


class RelationKind(enum.Enum):
    FAR_COMMUTATION = "FarCommutation"
    YANG_BAXTER = "YangBaxter"


@dataclass(frozen=True)
class RelationInstance:
    lhs: BraidWord
    rhs: BraidWord
    kind: RelationKind

    @property
    def generators(self) -> tuple[int, ...]:
        return tuple(sorted({abs(x) for x in self.lhs.letters}))

    def __str__(self) -> str:
        return f"{self.lhs.format()} = {self.rhs.format()}"


def relation_instances(n: int) -> list[RelationInstance]:
    """All defining relations of B_n: Yang-Baxter for neighbours, commutation otherwise."""
    if n < 2:
        raise ValueError("n must be at least 2")
    out = []
    for i in range(1, n - 1):
        out.append(
            RelationInstance(
                BraidWord((i, i + 1, i), n), BraidWord((i + 1, i, i + 1), n), RelationKind.YANG_BAXTER
            )
        )
    for i in range(1, n):
        for j in range(i + 2, n):
            out.append(
                RelationInstance(BraidWord((i, j), n), BraidWord((j, i), n), RelationKind.FAR_COMMUTATION)
            )
    return out


def relations_involving(n: int, generator: int) -> list[RelationInstance]:
    return [r for r in relation_instances(n) if generator in r.generators]


def words_up_to(n: int, max_len: int, alphabet: Iterable[int] | None = None):
    """Yield every freely reduced word of length <= max_len, shortest first."""
    letters = list(alphabet) if alphabet is not None else [
        s * i for i in range(1, n) for s in (1, -1)
    ]
    frontier = [()]
    yield BraidWord((), n)
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nw = w + (x,)
                nxt.append(nw)
                yield BraidWord(nw, n)
        frontier = nxt
