"""Free-group words and the commutator calculus used throughout the package.

Elements of the free group F_n on generators a1..an are represented by
:class:`Word`: a run-length-compressed sequence of (generator, signed
multiplicity) pairs, always kept freely reduced (adjacent runs carry distinct
generators, multiplicities are nonzero).  Run-length compression matters
because iterated conjugation, the bread and butter of longitude computations,
produces long repetitive words.

Every word carries its ambient rank and all binary operations check it;
silent rank coercion hides diagram bugs downstream.

Conventions (fixed once, used everywhere):

* inverse of x is written x̄,
* conjugation  x^y = ȳ x y,
* commutator  [x, y] = x ȳ x̄ y.

The usual commutator identities (inverse of a bracket, bracket-conjugate
interchangeling, expansion of brackets of products, and the Jacobi-type
rewriting of [[a,b],c]) all hold for these conventions as equalities of
reduced words; the test suite checks them on randomized inputs.

Text form: a word is whitespace-separated tokens ``a3`` (generator) and
``A3`` (inverse generator), e.g. ``a1 A2 a1``.  The empty word is the empty
token sequence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Word",
    "WordError",
    "empty",
    "generator",
    "word_from_letters",
    "reduce",
    "multiply",
    "invert",
    "power",
    "conjugate",
    "commutator",
    "linear_commutator",
    "exponent_sum",
    "parse_word",
    "format_word",
]


class WordError(ValueError):
    """Raised on malformed word input or rank mismatch."""


def _merge_runs(runs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    # Stack-based free reduction on run-length pairs.
    stack: list[tuple[int, int]] = []
    for gen, mult in runs:
        if mult == 0:
            continue
        if stack and stack[-1][0] == gen:
            total = stack[-1][1] + mult
            stack.pop()
            if total:
                stack.append((gen, total))
        else:
            stack.append((gen, mult))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in F_rank, stored as runs of equal letters.

    ``runs`` is a tuple of (generator index, signed multiplicity); generator
    indices are 1-based.  Instances are immutable and hashable; construct
    them through the module-level helpers rather than directly when the runs
    are not known to be reduced.
    """

    rank: int
    runs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise WordError(f"rank must be positive, got {self.rank}")
        for gen, mult in self.runs:
            if not 1 <= gen <= self.rank:
                raise WordError(f"generator a{gen} out of range for rank {self.rank}")
            if mult == 0:
                raise WordError("zero-multiplicity run in word")

    def letters(self) -> Iterator[int]:
        """Yield single letters as signed generator indices (+g / -g)."""
        for gen, mult in self.runs:
            step = 1 if mult > 0 else -1
            for _ in range(abs(mult)):
                yield step * gen

    def __len__(self) -> int:
        return sum(abs(m) for _, m in self.runs)

    def is_identity(self) -> bool:
        return not self.runs

    def __repr__(self) -> str:
        return f"Word({self.rank}, {format_word(self)!r})"


def empty(rank: int) -> Word:
    """The identity of F_rank."""
    return Word(rank, ())


def generator(rank: int, index: int) -> Word:
    """The generator a_index as a word."""
    if not 1 <= index <= rank:
        raise WordError(f"generator a{index} out of range for rank {rank}")
    return Word(rank, ((index, 1),))


def word_from_letters(rank: int, letters: Iterable[int]) -> Word:
    """Build a reduced word from signed letters (+g for a_g, -g for its inverse)."""
    runs = []
    for letter in letters:
        if letter == 0:
            raise WordError("letter 0 is not a generator")
        runs.append((abs(letter), 1 if letter > 0 else -1))
    return Word(rank, _merge_runs(runs))


def reduce(w: Word) -> Word:
    """Free reduction. Words are reduced on construction, so this is a retraction."""
    return Word(w.rank, _merge_runs(w.runs))


def _check_ranks(*ws: Word) -> int:
    rank = ws[0].rank
    for w in ws[1:]:
        if w.rank != rank:
            raise WordError(f"rank mismatch: {rank} vs {w.rank}")
    return rank


def multiply(*ws: Word) -> Word:
    """Reduced product of one or more words, left to right."""
    if not ws:
        raise WordError("multiply needs at least one word")
    rank = _check_ranks(*ws)
    runs: list[tuple[int, int]] = []
    for w in ws:
        runs.extend(w.runs)
    return Word(rank, _merge_runs(runs))


def invert(w: Word) -> Word:
    """Group inverse: reversed runs with negated multiplicities."""
    return Word(w.rank, tuple((g, -m) for g, m in reversed(w.runs)))


def power(w: Word, e: int) -> Word:
    """w**e for any integer e."""
    if e == 0 or not w.runs:
        return empty(w.rank)
    if len(w.runs) == 1:
        g, m = w.runs[0]
        return Word(w.rank, ((g, m * e),))
    base = w if e > 0 else invert(w)
    out = empty(w.rank)
    sq, m = base, abs(e)
    while m:
        if m & 1:
            out = multiply(out, sq)
        m >>= 1
        if m:
            sq = multiply(sq, sq)
    return out


def conjugate(x: Word, y: Word) -> Word:
    """x^y = ȳ x y."""
    _check_ranks(x, y)
    return multiply(invert(y), x, y)


def commutator(x: Word, y: Word) -> Word:
    """[x, y] = x ȳ x̄ y."""
    _check_ranks(x, y)
    return multiply(x, invert(y), invert(x), y)


def linear_commutator(entries: Sequence[Word]) -> Word:
    """Right-nested bracket [x1, [x2, [..., [x_{m-1}, x_m]...]]].

    A single entry is returned as is.
    """
    if not entries:
        raise WordError("linear_commutator needs at least one entry")
    out = entries[-1]
    for x in reversed(entries[:-1]):
        out = commutator(x, out)
    return out


def exponent_sum(w: Word, gen: int) -> int:
    """Signed number of occurrences of a_gen in w (image under F_n -> Z)."""
    if not 1 <= gen <= w.rank:
        raise WordError(f"generator a{gen} out of range for rank {w.rank}")
    return sum(m for g, m in w.runs if g == gen)


_TOKEN = re.compile(r"([aA])([0-9]+)$")


def parse_word(text: str, rank: int) -> Word:
    """Parse whitespace-separated ``a1`` / ``A1`` tokens into a reduced word.

    Capital letters denote inverses.  Raises :class:`WordError` naming the
    first offending token.
    """
    letters = []
    for token in text.split():
        m = _TOKEN.match(token)
        if not m:
            raise WordError(f"bad word token {token!r}")
        idx = int(m.group(2))
        if not 1 <= idx <= rank:
            raise WordError(f"bad word token {token!r}: index out of range for rank {rank}")
        letters.append(idx if m.group(1) == "a" else -idx)
    return word_from_letters(rank, letters)


def format_word(w: Word) -> str:
    """Inverse of :func:`parse_word`; the empty word formats as ''."""
    return " ".join(f"a{l}" if l > 0 else f"A{-l}" for l in w.letters())
