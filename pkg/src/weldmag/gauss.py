"""Gauss codes of welded (string) link diagrams and everything diagrammatic.

A diagram is stored purely combinatorially: each component is a sequence of
crossing passages (crossing id, Over/Under role, sign), read from the bottom
endpoint to the top endpoint for string links and cyclically for closed
links.  Virtual crossings are never represented; a Gauss code already
determines the welded object, and every quantity computed here is a welded
invariant, so virtual-crossing bookkeeping would be pure noise.

Text grammar (whitespace between tokens is free):

    file    := line+
    line    := INT ":" passage*
    passage := ("O" | "U") INT ("+" | "-")

Components are numbered 1..n, one line each; ``/`` may replace a newline in
inline arguments.  Example: ``1: U1+ / 2: O1+`` is a 2-component string link
with a single positive crossing in which component 2 passes over component 1.

From a code the module derives:

* the Wirtinger presentation: arcs are maximal runs between Under passages,
  and the j-th Under passage of component i with over-arc generator g and
  sign e contributes the relation a_{i,j+1} = (g^e)^{-1} a_{i,j} (g^e);
* the preferred longitudes: the word b_{i,1} b_{i,2} ... of conjugating
  generators met along component i, normalized by the self-writhe prefix
  meridian^{-f_i}, evaluated in the truncated series ring by an iteration
  that rewrites arcs into meridians one degree at a time and certifies its
  own stabilization;
* the diagram moves R1, R2 and OC used by the invariance test suite, the
  stacking product, and cutting closed links open at chosen basepoints.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .magnus import (
    TruncationPolicy,
    TruncatedSeries,
    expand,
    series_inverse,
    series_mul,
    series_one,
)
from .words import Word

__all__ = [
    "GaussCodeError",
    "StabilizationError",
    "Passage",
    "StringLinkCode",
    "LinkCode",
    "WirtingerRelation",
    "WirtingerPresentation",
    "parse",
    "serialize",
    "wirtinger",
    "self_writhe",
    "longitude_series",
    "MOVE_KINDS",
    "applicable_sites",
    "apply_move",
    "stack",
    "closure",
    "cut",
]


class GaussCodeError(ValueError):
    """Malformed Gauss-code text or an invalid diagram."""


class StabilizationError(RuntimeError):
    """The longitude iteration failed its stabilization certificate.

    This signals an implementation bug, not bad input; valid codes always
    stabilize within the truncation degree.
    """


@dataclass(frozen=True)
class Passage:
    """One strand passage through a classical crossing."""

    cid: int
    role: str  # "O" or "U"
    sign: int  # +1 or -1

    def token(self) -> str:
        return f"{self.role}{self.cid}{'+' if self.sign > 0 else '-'}"


def _validate_components(components: tuple[tuple[Passage, ...], ...]) -> None:
    seen: dict[int, list[Passage]] = {}
    for comp in components:
        for p in comp:
            if p.role not in ("O", "U"):
                raise GaussCodeError(f"bad role {p.role!r} on crossing {p.cid}")
            if p.sign not in (1, -1):
                raise GaussCodeError(f"bad sign {p.sign!r} on crossing {p.cid}")
            seen.setdefault(p.cid, []).append(p)
    for cid, ps in seen.items():
        if len(ps) != 2:
            raise GaussCodeError(f"crossing {cid} appears {len(ps)} times, expected 2")
        roles = sorted(p.role for p in ps)
        if roles != ["O", "U"]:
            raise GaussCodeError(f"crossing {cid} needs one Over and one Under passage")
        if ps[0].sign != ps[1].sign:
            raise GaussCodeError(f"crossing {cid} has mismatched signs")


@dataclass(frozen=True)
class StringLinkCode:
    """Gauss code of a welded string link; components read bottom to top."""

    components: tuple[tuple[Passage, ...], ...]

    def __post_init__(self) -> None:
        _validate_components(self.components)

    @property
    def n(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class LinkCode:
    """Gauss code of a closed welded link; component sequences are cyclic."""

    components: tuple[tuple[Passage, ...], ...]

    def __post_init__(self) -> None:
        _validate_components(self.components)

    @property
    def n(self) -> int:
        return len(self.components)


_LINE = re.compile(r"^\s*([0-9]+)\s*:(.*)$")
_PASSAGE = re.compile(r"\s*([OU])\s*([0-9]+)\s*([+-])")


def parse(text: str, closed: bool = False) -> StringLinkCode | LinkCode:
    """Parse the grammar above; ``closed`` selects :class:`LinkCode`."""
    chunks = [c for part in text.splitlines() for c in part.split("/")]
    rows: dict[int, tuple[Passage, ...]] = {}
    for chunk in chunks:
        if not chunk.strip():
            continue
        m = _LINE.match(chunk)
        if not m:
            raise GaussCodeError(f"bad component line {chunk.strip()!r}")
        comp_no = int(m.group(1))
        if comp_no in rows:
            raise GaussCodeError(f"component {comp_no} listed twice")
        rest = m.group(2)
        passages = []
        pos = 0
        while pos < len(rest):
            pm = _PASSAGE.match(rest, pos)
            if pm is None:
                if rest[pos:].strip():
                    raise GaussCodeError(f"bad passage token {rest[pos:].strip().split()[0]!r}")
                break
            passages.append(Passage(int(pm.group(2)), pm.group(1), 1 if pm.group(3) == "+" else -1))
            pos = pm.end()
        rows[comp_no] = tuple(passages)
    if not rows:
        raise GaussCodeError("empty Gauss code")
    n = len(rows)
    if sorted(rows) != list(range(1, n + 1)):
        raise GaussCodeError(f"component numbers {sorted(rows)} are not 1..{n}")
    components = tuple(rows[i] for i in range(1, n + 1))
    return LinkCode(components) if closed else StringLinkCode(components)


def serialize(code: StringLinkCode | LinkCode) -> str:
    """Canonical text form; parse(serialize(c)) reproduces c."""
    lines = []
    for i, comp in enumerate(code.components, start=1):
        lines.append(f"{i}: " + " ".join(p.token() for p in comp) if comp else f"{i}:")
    return "\n".join(lines)


# -- Wirtinger presentation ------------------------------------------------------


@dataclass(frozen=True)
class WirtingerRelation:
    """a_{component, under_index+1} = conjugate(a_{component, under_index}, g^sign)
    where g is the arc generator ``over`` = (component, arc index)."""

    component: int
    under_index: int  # 1-based position among the component's Under passages
    over: tuple[int, int]
    sign: int


@dataclass(frozen=True)
class WirtingerPresentation:
    """Arc generators a_{i,j} (j = 1..arc_counts[i-1]) with one conjugation
    relation per Under passage; the meridian of component i is a_{i,1}."""

    arc_counts: tuple[int, ...]
    relations: tuple[WirtingerRelation, ...]


def _over_positions(code: StringLinkCode) -> dict[int, tuple[int, int]]:
    out: dict[int, tuple[int, int]] = {}
    for i, comp in enumerate(code.components, start=1):
        for pos, p in enumerate(comp):
            if p.role == "O":
                out[p.cid] = (i, pos)
    return out


def _arc_of_position(code: StringLinkCode) -> list[list[int]]:
    """arc[i-1][pos] = 1-based arc index containing position pos of component i."""
    arcs = []
    for comp in code.components:
        unders = 0
        row = []
        for p in comp:
            row.append(unders + 1)
            if p.role == "U":
                unders += 1
        arcs.append(row)
    return arcs


def _relations_by_component(code: StringLinkCode) -> list[list[tuple[int, int, int]]]:
    """Per component: list of (over component, over arc index, sign), one per
    Under passage in order."""
    over_pos = _over_positions(code)
    arc_at = _arc_of_position(code)
    rels: list[list[tuple[int, int, int]]] = []
    for comp in code.components:
        row = []
        for p in comp:
            if p.role == "U":
                pc, ppos = over_pos[p.cid]
                row.append((pc, arc_at[pc - 1][ppos], p.sign))
        rels.append(row)
    return rels


def wirtinger(code: StringLinkCode) -> WirtingerPresentation:
    """The Wirtinger presentation read off the code."""
    rels = _relations_by_component(code)
    relations = []
    for i, row in enumerate(rels, start=1):
        for j, (pc, parc, sign) in enumerate(row, start=1):
            relations.append(WirtingerRelation(i, j, (pc, parc), sign))
    return WirtingerPresentation(
        arc_counts=tuple(len(row) + 1 for row in rels),
        relations=tuple(relations),
    )


def self_writhe(code: StringLinkCode | LinkCode, i: int) -> int:
    """Sum of signs over crossings whose two passages both lie on component i."""
    comps: dict[int, list[int]] = {}
    for ci, comp in enumerate(code.components, start=1):
        for p in comp:
            comps.setdefault(p.cid, []).append(ci)
    total = 0
    for p in code.components[i - 1]:
        if p.role == "U" and comps[p.cid] == [i, i]:
            total += p.sign
    return total


# -- preferred longitudes ----------------------------------------------------------


def longitude_series(
    code: StringLinkCode,
    q: int | None = None,
    policy: TruncationPolicy | None = None,
) -> tuple[TruncatedSeries, ...]:
    """Magnus expansions of the preferred longitudes, one series per component.

    The arcs' expansions are computed by a fixed-point iteration that starts
    from the meridian series 1 + X_i and rewrites each arc through the
    conjugation relations; iteration t is exact in all degrees <= t, which
    the loop asserts, and the loop only terminates on a witnessed fixed
    point (one further iteration changing nothing).  The longitude of
    component i is the product of its relation factors (over-arc series to
    the crossing sign) times the prefix (1+X_i)^(-f_i) for self-writhe f_i.
    """
    if isinstance(code, LinkCode):
        raise GaussCodeError("longitudes need a string link; cut the closed link open first")
    n = code.n
    if policy is None:
        if q is None or q < 1:
            raise GaussCodeError("longitude_series needs q >= 1 or an explicit policy")
        policy = TruncationPolicy.total_degree(n, q)
    elif policy.rank != n:
        raise GaussCodeError(f"policy rank {policy.rank} does not match {n} components")

    qeff = policy.max_total_degree
    rels = _relations_by_component(code)
    meridians = [expand(Word(n, ((i, 1),)), policy) for i in range(1, n + 1)]

    arcs: dict[tuple[int, int], TruncatedSeries] = {}
    for i in range(1, n + 1):
        for j in range(len(rels[i - 1]) + 1):
            arcs[(i, j)] = meridians[i - 1]

    def factors(table, p, arc_1based, sign, inv_cache):
        over = table[(p, arc_1based - 1)]
        key = (p, arc_1based - 1)
        if key not in inv_cache:
            inv_cache[key] = series_inverse(over)
        inv = inv_cache[key]
        return (over, inv) if sign > 0 else (inv, over)

    converged = False
    for t in range(1, qeff + 2):
        inv_cache: dict[tuple[int, int], TruncatedSeries] = {}
        new: dict[tuple[int, int], TruncatedSeries] = {}
        for i in range(1, n + 1):
            new[(i, 0)] = meridians[i - 1]
            for j, (pc, parc, sign) in enumerate(rels[i - 1]):
                b, inv_b = factors(arcs, pc, parc, sign, inv_cache)
                new[(i, j + 1)] = series_mul(series_mul(inv_b, new[(i, j)]), b)
        for key, old_series in arcs.items():
            if not new[key].agrees_through_degree(old_series, min(t - 1, qeff)):
                raise StabilizationError(
                    f"arc {key} changed in a degree below iteration {t}"
                )
        if all(new[key] == arcs[key] for key in arcs):
            converged = True
            break
        arcs = new
    if not converged:
        raise StabilizationError(f"no fixed point within {qeff + 1} iterations")

    out = []
    inv_cache = {}
    for i in range(1, n + 1):
        f_i = self_writhe(code, i)
        lam = expand(Word(n, ((i, -f_i),) if f_i else ()), policy)
        for pc, parc, sign in rels[i - 1]:
            b, _ = factors(arcs, pc, parc, sign, inv_cache)
            lam = series_mul(lam, b)
        out.append(lam)
    return tuple(out)


# -- moves -------------------------------------------------------------------------


MOVE_KINDS = ("R1insert", "R1delete", "R2insert", "R2delete", "OCswap")


def _fresh_cid(code: StringLinkCode | LinkCode, count: int) -> list[int]:
    top = 0
    for comp in code.components:
        for p in comp:
            top = max(top, p.cid)
    return [top + 1 + i for i in range(count)]


def _with_component(code, i: int, comp: Sequence[Passage]):
    comps = list(code.components)
    comps[i - 1] = tuple(comp)
    return type(code)(tuple(comps))


def _insert(seq: tuple[Passage, ...], pos: int, items: Sequence[Passage]) -> tuple[Passage, ...]:
    return seq[:pos] + tuple(items) + seq[pos:]


def applicable_sites(code: StringLinkCode, kind: str) -> list[tuple]:
    """Every site at which ``kind`` applies, in a fixed deterministic order.

    Site shapes: R1insert (i, pos, sign, order) with order "OU" or "UO";
    R1delete (i, pos); R2insert (a, pos_a, b, pos_b, sign, swap_u);
    R2delete (a, pos_a, b, pos_b); OCswap (i, pos).
    """
    comps = code.components
    n = len(comps)
    sites: list[tuple] = []
    if kind == "R1insert":
        for i in range(1, n + 1):
            for pos in range(len(comps[i - 1]) + 1):
                for sign in (1, -1):
                    for order in ("OU", "UO"):
                        sites.append((i, pos, sign, order))
    elif kind == "R1delete":
        for i in range(1, n + 1):
            comp = comps[i - 1]
            for pos in range(len(comp) - 1):
                if comp[pos].cid == comp[pos + 1].cid:
                    sites.append((i, pos))
    elif kind == "R2insert":
        for a in range(1, n + 1):
            for pos_a in range(len(comps[a - 1]) + 1):
                for b in range(1, n + 1):
                    for pos_b in range(len(comps[b - 1]) + 1):
                        if a == b and pos_a == pos_b:
                            continue
                        for sign in (1, -1):
                            for swap_u in (False, True):
                                sites.append((a, pos_a, b, pos_b, sign, swap_u))
    elif kind == "R2delete":
        for a in range(1, n + 1):
            ca = comps[a - 1]
            for pos_a in range(len(ca) - 1):
                p1, p2 = ca[pos_a], ca[pos_a + 1]
                if not (p1.role == "O" and p2.role == "O" and p1.sign == -p2.sign):
                    continue
                pair = {p1.cid, p2.cid}
                if len(pair) != 2:
                    continue
                for b in range(1, n + 1):
                    cb = comps[b - 1]
                    for pos_b in range(len(cb) - 1):
                        if a == b and abs(pos_a - pos_b) < 2:
                            continue
                        q1, q2 = cb[pos_b], cb[pos_b + 1]
                        if q1.role == "U" and q2.role == "U" and {q1.cid, q2.cid} == pair:
                            sites.append((a, pos_a, b, pos_b))
    elif kind == "OCswap":
        for i in range(1, n + 1):
            comp = comps[i - 1]
            for pos in range(len(comp) - 1):
                if comp[pos].role == "O" and comp[pos + 1].role == "O":
                    sites.append((i, pos))
    else:
        raise GaussCodeError(f"unknown move kind {kind!r}")
    return sites


def apply_move(code: StringLinkCode, kind: str, site: tuple) -> StringLinkCode:
    """Apply one R1/R2/OC move at a site from :func:`applicable_sites`."""
    comps = list(code.components)
    if kind == "R1insert":
        i, pos, sign, order = site
        (cid,) = _fresh_cid(code, 1)
        pair = [Passage(cid, order[0], sign), Passage(cid, order[1], sign)]
        return _with_component(code, i, _insert(comps[i - 1], pos, pair))
    if kind == "R1delete":
        i, pos = site
        comp = comps[i - 1]
        if pos + 1 >= len(comp) or comp[pos].cid != comp[pos + 1].cid:
            raise GaussCodeError(f"no R1 pair at component {i} position {pos}")
        return _with_component(code, i, comp[:pos] + comp[pos + 2 :])
    if kind == "R2insert":
        a, pos_a, b, pos_b, sign, swap_u = site
        c, d = _fresh_cid(code, 2)
        overs = [Passage(c, "O", sign), Passage(d, "O", -sign)]
        unders = [Passage(c, "U", sign), Passage(d, "U", -sign)]
        if swap_u:
            unders.reverse()
        if a == b:
            if pos_a == pos_b:
                raise GaussCodeError("overlapping R2 insertion site")
            comp = comps[a - 1]
            first, second = sorted(
                [(pos_a, overs), (pos_b, unders)], key=lambda t: t[0], reverse=True
            )
            comp = _insert(comp, first[0], first[1])
            comp = _insert(comp, second[0], second[1])
            return _with_component(code, a, comp)
        comps[a - 1] = _insert(comps[a - 1], pos_a, overs)
        comps[b - 1] = _insert(comps[b - 1], pos_b, unders)
        return type(code)(tuple(comps))
    if kind == "R2delete":
        a, pos_a, b, pos_b = site
        ca, cb = comps[a - 1], comps[b - 1]
        try:
            p1, p2 = ca[pos_a], ca[pos_a + 1]
            q1, q2 = cb[pos_b], cb[pos_b + 1]
        except IndexError:
            raise GaussCodeError("R2delete site out of range") from None
        if not (
            p1.role == p2.role == "O"
            and q1.role == q2.role == "U"
            and p1.sign == -p2.sign
            and {p1.cid, p2.cid} == {q1.cid, q2.cid}
            and p1.cid != p2.cid
        ):
            raise GaussCodeError("site does not carry a cancelling R2 pair")
        if a == b:
            lo, hi = sorted([pos_a, pos_b])
            if hi - lo < 2:
                raise GaussCodeError("overlapping R2 deletion site")
            comp = ca[:lo] + ca[lo + 2 : hi] + ca[hi + 2 :]
            return _with_component(code, a, comp)
        comps[a - 1] = ca[:pos_a] + ca[pos_a + 2 :]
        comps[b - 1] = cb[:pos_b] + cb[pos_b + 2 :]
        return type(code)(tuple(comps))
    if kind == "OCswap":
        i, pos = site
        comp = comps[i - 1]
        if pos + 1 >= len(comp) or comp[pos].role != "O" or comp[pos + 1].role != "O":
            raise GaussCodeError(f"no adjacent Over pair at component {i} position {pos}")
        comp = comp[:pos] + (comp[pos + 1], comp[pos]) + comp[pos + 2 :]
        return _with_component(code, i, comp)
    raise GaussCodeError(f"unknown move kind {kind!r}")


# -- stacking and closing ------------------------------------------------------------


def stack(first: StringLinkCode, second: StringLinkCode) -> StringLinkCode:
    """Stacking product: ``first`` at the bottom, ``second`` on top."""
    if first.n != second.n:
        raise GaussCodeError(f"component counts differ: {first.n} vs {second.n}")
    shift = max([p.cid for comp in first.components for p in comp], default=0)
    renamed = tuple(
        tuple(Passage(p.cid + shift, p.role, p.sign) for p in comp)
        for comp in second.components
    )
    return StringLinkCode(tuple(a + b for a, b in zip(first.components, renamed)))


def closure(code: StringLinkCode) -> LinkCode:
    """Close a string link by joining each component's endpoints."""
    return LinkCode(code.components)


def cut(link: LinkCode, basepoints: Sequence[int] | None = None) -> StringLinkCode:
    """Cut a closed link open at one basepoint arc per component.

    ``basepoints[i-1]`` is a rotation offset: component i is read linearly
    starting at that passage index.  Offsets default to 0 and must satisfy
    0 <= b < max(1, length).
    """
    if basepoints is None:
        basepoints = [0] * link.n
    if len(basepoints) != link.n:
        raise GaussCodeError("need one basepoint per component")
    comps = []
    for comp, b in zip(link.components, basepoints):
        limit = max(1, len(comp))
        if not 0 <= b < limit:
            raise GaussCodeError(f"basepoint {b} out of range for component of length {len(comp)}")
        comps.append(comp[b:] + comp[:b])
    return StringLinkCode(tuple(comps))
