"""Basic commutators, unique Hall factorization, and principal parts.

This module is the structural counterweight to the series engine: it knows
the free group's lower central series through an ordered family of basic
commutators and can factor any word as an ordered product of their powers
times a certified high-degree remainder.  The series engine and this module
check each other in the test suite.

Basic commutators over generators a1..an, in the bracket convention
[x, y] = x ȳ x̄ y of :mod:`weldmag.words`:

* every generator is basic of length 1, ordered a1 < a2 < ...;
* [C, D] is basic when C and D are basic with C < D in the global order,
  lengths adding, and, when D = [E, F], additionally E <= C;
* commutators of length m follow all commutators of shorter length; inside
  one length the order is lexicographic on (left ordinal, right ordinal).

The per-length counts match the Witt necklace numbers, and the lowest
(principal) homogeneous parts of the Magnus expansions of the length-d
basic commutators are linearly independent, which is what makes the
degree-by-degree factorization below well posed with integer exponents.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import words
from .magnus import TruncationPolicy, TruncatedSeries, expand, lcs_lower_bound, series_from_terms
from .words import Word

__all__ = [
    "HallError",
    "BasicCommutator",
    "generate_basic",
    "principal_part",
    "hall_factorize",
]


class HallError(ValueError):
    """Raised when a factorization solve is inconsistent or non-integral.

    Reaching this means the bracket conventions or the basis order have been
    broken somewhere; it cannot happen for valid inputs.
    """


@dataclass(frozen=True)
class BasicCommutator:
    """One member of the ordered basic-commutator family.

    Leaves have ``generator`` set; inner nodes carry ``left``/``right``.
    ``entries`` counts how many times each generator occurs, which bounds
    which quotients the commutator can see.
    """

    ordinal: int
    length: int
    generator: int | None
    left: "BasicCommutator | None"
    right: "BasicCommutator | None"
    word: Word
    entries: tuple[int, ...]

    def is_leaf(self) -> bool:
        return self.generator is not None

    def bracket(self) -> str:
        """Nested bracket string, e.g. ``[[a1,a2],a2]``."""
        if self.generator is not None:
            return f"a{self.generator}"
        return f"[{self.left.bracket()},{self.right.bracket()}]"

    def __repr__(self) -> str:
        return f"BasicCommutator({self.ordinal}: {self.bracket()})"


@lru_cache(maxsize=None)
def generate_basic(n: int, max_len: int) -> tuple[BasicCommutator, ...]:
    """All basic commutators of length <= max_len over a1..an, in order."""
    if n < 1:
        raise HallError(f"rank must be positive, got {n}")
    if max_len < 1:
        raise HallError(f"max_len must be at least 1, got {max_len}")
    out: list[BasicCommutator] = []
    by_len: list[list[BasicCommutator]] = [[]]
    for g in range(1, n + 1):
        entries = tuple(1 if j == g else 0 for j in range(1, n + 1))
        out.append(BasicCommutator(len(out), 1, g, None, None, words.generator(n, g), entries))
    by_len.append(list(out))
    for length in range(2, max_len + 1):
        candidates: list[tuple[int, int, BasicCommutator, BasicCommutator]] = []
        for llen in range(1, length):
            for c in by_len[llen]:
                for d in by_len[length - llen]:
                    if c.ordinal >= d.ordinal:
                        continue
                    if d.left is not None and d.left.ordinal > c.ordinal:
                        continue
                    candidates.append((c.ordinal, d.ordinal, c, d))
        candidates.sort(key=lambda t: (t[0], t[1]))
        layer = []
        for _, _, c, d in candidates:
            word = words.commutator(c.word, d.word)
            entries = tuple(a + b for a, b in zip(c.entries, d.entries))
            bc = BasicCommutator(len(out), length, None, c, d, word, entries)
            out.append(bc)
            layer.append(bc)
        by_len.append(layer)
    return tuple(out)


def principal_part(c: BasicCommutator, policy: TruncationPolicy) -> TruncatedSeries:
    """The homogeneous degree-length(c) part of expand(word of c).

    This is the lowest nonvanishing part of the expansion; every one of its
    monomials uses each variable exactly entries[v] times.
    """
    if policy.max_total_degree < c.length:
        raise HallError(
            f"policy degree {policy.max_total_degree} below commutator length {c.length}"
        )
    s = expand(c.word, policy)
    terms = {m: v for m, v in s.items() if len(m) == c.length}
    return series_from_terms(policy, terms)


def _degree_monomials(n: int, d: int) -> list[tuple[int, ...]]:
    return [tuple(m) for m in itertools.product(range(1, n + 1), repeat=d)]


@lru_cache(maxsize=None)
def _degree_solver(n: int, d: int):
    """Exact solver for the degree-d principal-part system.

    Returns a callable taking the degree-d coefficient vector (in lex
    monomial order) and producing the integer exponent vector over the
    length-d basic commutators, verifying the solution against every row.
    """
    basis = [c for c in generate_basic(n, d) if c.length == d]
    monos = _degree_monomials(n, d)
    policy = TruncationPolicy.total_degree(n, d)
    cols = []
    for c in basis:
        pp = principal_part(c, policy)
        cols.append([pp.coefficient(m) for m in monos])
    nrows, ncols = len(monos), len(basis)

    # Greedily pick ncols rows forming an invertible square system.
    pivot_rows: list[int] = []
    rref: list[list[Fraction]] = []
    for r in range(nrows):
        row = [Fraction(cols[j][r]) for j in range(ncols)]
        for prow in rref:
            lead = next(i for i, x in enumerate(prow) if x)
            if row[lead]:
                f = row[lead] / prow[lead]
                row = [a - f * b for a, b in zip(row, prow)]
        if any(row):
            rref.append(row)
            pivot_rows.append(r)
            if len(pivot_rows) == ncols:
                break
    if len(pivot_rows) != ncols:
        raise HallError(f"principal parts of length {d} are not independent (rank {n})")

    # Exact inverse of the square pivot submatrix.
    a = [[Fraction(cols[j][r]) for j in range(ncols)] for r in pivot_rows]
    inv = [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    for col in range(ncols):
        p = next(r for r in range(col, ncols) if a[r][col])
        a[col], a[p] = a[p], a[col]
        inv[col], inv[p] = inv[p], inv[col]
        f = a[col][col]
        a[col] = [x / f for x in a[col]]
        inv[col] = [x / f for x in inv[col]]
        for r in range(ncols):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]

    def solve(b: list[int]) -> list[int]:
        x = []
        for i in range(ncols):
            acc = Fraction(0)
            for j in range(ncols):
                acc += inv[i][j] * b[pivot_rows[j]]
            if acc.denominator != 1:
                raise HallError(f"non-integral exponent at degree {d}: {acc}")
            x.append(int(acc))
        for r in range(nrows):
            if sum(cols[j][r] * x[j] for j in range(ncols)) != b[r]:
                raise HallError(f"degree-{d} system inconsistent at row {r}")
        return x

    return basis, solve


def hall_factorize(w: Word, k: int) -> tuple[list[int], bool]:
    """Factor w as an ordered product of basic-commutator powers.

    Returns (exponents, certified): exponents are aligned with
    ``generate_basic(w.rank, k)`` and satisfy
    w = C_1^{e_1} ... C_N^{e_N} * h, and ``certified`` is True when the
    remainder h provably has no Magnus terms in degrees 1..k (so it lies in
    the (k+1)-st lower central subgroup).

    The exponents are extracted degree by degree: at degree d the remaining
    word's degree-d coefficients are written in the principal-part basis of
    the length-d basic commutators by an exact, verified linear solve.
    """
    if k < 1:
        raise HallError(f"k must be at least 1, got {k}")
    n = w.rank
    policy = TruncationPolicy.total_degree(n, k)
    exps: list[int] = []
    cur = w
    for d in range(1, k + 1):
        e = expand(cur, policy)
        b = [e.coefficient(m) for m in _degree_monomials(n, d)]
        basis_d, solve = _degree_solver(n, d)
        x = solve(b)
        exps.extend(x)
        if any(x):
            partial = words.empty(n)
            for c, exp in zip(basis_d, x):
                if exp:
                    partial = words.multiply(partial, words.power(c.word, exp))
            cur = words.multiply(words.invert(partial), cur)
    certified = lcs_lower_bound(cur, k) is None
    return exps, certified
