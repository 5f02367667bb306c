"""Command line interface.

Subcommands: milnor, table, compare, action, realize, hall, moves,
link-vanishing.  Results go to stdout, diagnostics to stderr.  Exit codes:
0 for success (and for `equal` / `vanishing` verdicts), 1 for a negative
verdict (`distinct` / `non-vanishing`), 2 for any input or usage error.

Positional CODE and WORDS arguments name a file when one exists at that
path and are otherwise taken as inline text, with `/` standing for a line
break.  All output is deterministic; JSON output carries "schema": 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import arrows, gauss, hall, invariants, magnus, words

__all__ = ["RunConfig", "main"]


@dataclass(frozen=True)
class RunConfig:
    """Per-invocation settings shared by the subcommand handlers."""

    k: int = 1
    degree: int | None = None
    max_len: int | None = None
    json_out: bool = False
    paths: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.degree is not None and self.degree < 1:
            raise ValueError(f"degree must be >= 1, got {self.degree}")

    @classmethod
    def from_args(cls, args: argparse.Namespace, paths: tuple[str, ...] = ()) -> "RunConfig":
        return cls(
            k=getattr(args, "k", 1),
            degree=getattr(args, "degree", None),
            max_len=getattr(args, "max_len", None),
            json_out=getattr(args, "json", False),
            paths=paths,
        )


def _read_source(arg: str) -> str:
    if os.path.exists(arg):
        with open(arg, "r", encoding="utf-8") as fh:
            return fh.read()
    return arg


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _series_pairs(s: magnus.TruncatedSeries) -> list[list]:
    return [[magnus.format_monomial(m), int(c)] for m, c in s.items()]


def _parse_index(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise ValueError(f"bad index list {text!r}; expected comma-separated integers") from None


# -- handlers ----------------------------------------------------------------------


def _cmd_milnor(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args, paths=(args.code,))
    code = gauss.parse(_read_source(args.code))
    if args.index:
        I = _parse_index(args.index)
        invariants.r_index(I)
        for j in I:
            if not 1 <= j <= code.n:
                raise ValueError(f"index {j} out of range 1..{code.n}")
        if len(I) == 1:
            value = 0
        else:
            q = max(len(I) - 1, cfg.degree or 1)
            lam = gauss.longitude_series(code, q=q)
            value = magnus.coefficient(lam[I[-1] - 1], I[:-1])
        if cfg.json_out:
            print(json.dumps({"schema": 1, "I": list(I), "mu": value}, sort_keys=True))
        else:
            print(f"mu({','.join(map(str, I))}) = {value}")
        return 0
    return _print_table(code, cfg)


def _print_table(code: gauss.StringLinkCode, cfg: RunConfig) -> int:
    table = invariants.milnor_table(code, cfg.k, cfg.max_len, degree=cfg.degree)
    if cfg.json_out:
        print(json.dumps({"schema": 1, "k": table.k, "max_len": table.max_len,
                          "entries": table.to_json_obj()}, sort_keys=True))
    else:
        for line in table.format_lines():
            print(line)
    return 0


def _cmd_table(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args, paths=(args.code,))
    return _print_table(gauss.parse(_read_source(args.code)), cfg)


def _cmd_compare(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args, paths=(args.left, args.right))
    a = gauss.parse(_read_source(args.left))
    b = gauss.parse(_read_source(args.right))
    equal = invariants.k_equal(a, b, cfg.k, mode=args.mode)
    witness = None if equal else invariants.k_equal_witness(a, b, cfg.k)
    if cfg.json_out:
        obj = {"schema": 1, "k": cfg.k, "mode": args.mode,
               "result": "equal" if equal else "distinct"}
        if witness is not None:
            obj["witness"] = {"I": list(witness),
                              "left": invariants.milnor(a, witness),
                              "right": invariants.milnor(b, witness)}
        print(json.dumps(obj, sort_keys=True))
    else:
        print("equal" if equal else "distinct")
        if witness is not None:
            va, vb = invariants.milnor(a, witness), invariants.milnor(b, witness)
            print(f"witness: mu({','.join(map(str, witness))}) = {va} vs {vb}")
    return 0 if equal else 1


def _cmd_action(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args, paths=(args.code,))
    code = gauss.parse(_read_source(args.code))
    phi = invariants.action(code, cfg.k)
    if cfg.json_out:
        obj = {
            "schema": 1,
            "rank": phi.rank,
            "k": phi.k,
            "conjugators": [
                {"component": i, "series": _series_pairs(r)}
                for i, r in enumerate(phi.residues, start=1)
            ],
            "images": [
                {"component": i, "series": _series_pairs(s)}
                for i, s in enumerate(phi.images, start=1)
            ],
        }
        print(json.dumps(obj, sort_keys=True))
    else:
        print(f"action rank={phi.rank} k={phi.k}")
        for i, r in enumerate(phi.residues, start=1):
            print(f"conjugator {i}:")
            for line in magnus.format_series(r).splitlines():
                print(f"  {line}")
    return 0


def _cmd_realize(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args, paths=(args.words,))
    ws = arrows.parse_realizer(_read_source(args.words))
    code = arrows.realize_sorted(ws)
    if cfg.json_out:
        print(json.dumps({"schema": 1, "code": gauss.serialize(code).splitlines()},
                         sort_keys=True))
        return 0
    _emit(gauss.serialize(code), args.output)
    return 0


def _cmd_hall(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args)
    if args.rank < 1 or args.max_len < 1:
        raise ValueError("rank and max-len must be >= 1")
    basis = hall.generate_basic(args.rank, args.max_len)
    if args.factor is None:
        if cfg.json_out:
            print(json.dumps({"schema": 1, "rank": args.rank, "max_len": args.max_len,
                              "basis": [c.bracket() for c in basis]}, sort_keys=True))
        else:
            for c in basis:
                print(c.bracket())
        return 0
    w = words.parse_word(args.factor, args.rank)
    exps, certified = hall.hall_factorize(w, args.max_len)
    if cfg.json_out:
        obj = {"schema": 1, "rank": args.rank, "max_len": args.max_len,
               "certified": certified,
               "factors": [{"bracket": c.bracket(), "exp": e}
                           for c, e in zip(basis, exps) if e]}
        print(json.dumps(obj, sort_keys=True))
    else:
        for c, e in zip(basis, exps):
            if e:
                print(f"{c.bracket()} ^ {e}")
        print("certified" if certified else "uncertified")
    return 0


def _cmd_moves(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args, paths=(args.code,))
    code = gauss.parse(_read_source(args.code))
    sites = gauss.applicable_sites(code, args.kind)
    if args.apply is None:
        if cfg.json_out:
            print(json.dumps({"schema": 1, "kind": args.kind,
                              "sites": [list(s) for s in sites]}, sort_keys=True))
        else:
            for idx, s in enumerate(sites):
                print(f"{idx}: {s}")
        return 0
    if not 0 <= args.apply < len(sites):
        raise ValueError(f"site number {args.apply} out of range 0..{len(sites) - 1}")
    moved = gauss.apply_move(code, args.kind, sites[args.apply])
    if cfg.json_out:
        print(json.dumps({"schema": 1, "kind": args.kind, "site": list(sites[args.apply]),
                          "code": gauss.serialize(moved).splitlines()}, sort_keys=True))
        return 0
    _emit(gauss.serialize(moved), args.output)
    return 0


def _cmd_link_vanishing(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args, paths=(args.code,))
    link = gauss.parse(_read_source(args.code), closed=True)
    basepoints = None
    if args.basepoints:
        basepoints = [int(t) for t in args.basepoints.split(",")]
    vanishing = invariants.link_vanishing(link, cfg.k, basepoints)
    if cfg.json_out:
        print(json.dumps({"schema": 1, "k": cfg.k,
                          "result": "vanishing" if vanishing else "non-vanishing"},
                         sort_keys=True))
    else:
        print("vanishing" if vanishing else "non-vanishing")
    return 0 if vanishing else 1


# -- parser ------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weldmag",
                                description="Milnor invariants of welded string links")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, k=True, degree=False, max_len=False):
        if k:
            sp.add_argument("--k", type=int, default=1, help="filter level k >= 1")
        if degree:
            sp.add_argument("--degree", type=int, default=None,
                            help="truncation degree override (headroom only)")
        if max_len:
            sp.add_argument("--max-len", type=int, default=None, dest="max_len",
                            help="largest index length to report")
        sp.add_argument("--json", action="store_true", help="JSON output")

    sp = sub.add_parser("milnor", help="invariant table, or one mu(I) with --index")
    sp.add_argument("code", help="Gauss-code file or inline text")
    sp.add_argument("--index", default=None, help="comma-separated index, e.g. 2,1")
    add_common(sp, degree=True, max_len=True)
    sp.set_defaults(func=_cmd_milnor)

    sp = sub.add_parser("table", help="nonzero mu(I) with r(I) <= k")
    sp.add_argument("code", help="Gauss-code file or inline text")
    add_common(sp, degree=True, max_len=True)
    sp.set_defaults(func=_cmd_table)

    sp = sub.add_parser("compare", help="decide the level-k equivalence of two codes")
    sp.add_argument("left", help="Gauss-code file or inline text")
    sp.add_argument("right", help="Gauss-code file or inline text")
    sp.add_argument("--mode", choices=("table", "longitude", "action"), default="table")
    add_common(sp)
    sp.set_defaults(func=_cmd_compare)

    sp = sub.add_parser("action", help="conjugator residues and generator images")
    sp.add_argument("code", help="Gauss-code file or inline text")
    add_common(sp)
    sp.set_defaults(func=_cmd_action)

    sp = sub.add_parser("realize", help="string link with prescribed longitude words")
    sp.add_argument("words", help="realizer file or inline text (i: WORD, - = empty)")
    sp.add_argument("-o", "--output", default=None, help="write the code to a file")
    sp.add_argument("--json", action="store_true", help="JSON output")
    sp.set_defaults(func=_cmd_realize)

    sp = sub.add_parser("hall", help="basic commutator basis, or factor a word")
    sp.add_argument("--rank", type=int, required=True)
    sp.add_argument("--max-len", type=int, required=True, dest="max_len")
    sp.add_argument("--factor", default=None, help="word to factor, e.g. 'a1 a2 A1 A2'")
    sp.add_argument("--json", action="store_true", help="JSON output")
    sp.set_defaults(func=_cmd_hall)

    sp = sub.add_parser("moves", help="list or apply diagram moves")
    sp.add_argument("code", help="Gauss-code file or inline text")
    sp.add_argument("--kind", choices=gauss.MOVE_KINDS, required=True)
    sp.add_argument("--apply", type=int, default=None, metavar="N",
                    help="apply the N-th listed site")
    sp.add_argument("-o", "--output", default=None, help="write the moved code to a file")
    sp.add_argument("--json", action="store_true", help="JSON output")
    sp.set_defaults(func=_cmd_moves)

    sp = sub.add_parser("link-vanishing", help="vanishing of all mu(I), r(I) <= k, closed link")
    sp.add_argument("code", help="closed Gauss-code file or inline text")
    sp.add_argument("--basepoints", default=None, help="comma-separated rotation offsets")
    add_common(sp)
    sp.set_defaults(func=_cmd_link_vanishing)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
