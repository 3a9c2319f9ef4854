"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 a checked property is violated,
3 a size limit is exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import harness
from .boycott import BoycottSpec, boycott
from .exceptions import GameError, InstanceTooLargeError, SizeLimitExceededError
from .game import (
    Game,
    disjoint_productivity_witness,
    is_invariant_player,
    members,
    supermodularity_witness,
)
from .generators import ScenarioSpec, myerson_restriction
from .io import dump_document, game_to_document, load_game, load_graph
from .values import impact, shapley_exact, shapley_sampled

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2
EXIT_SIZE = 3


class InputError(GameError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_coalition(text: str | None, g: Game) -> int:
    """``"0,2"`` or player names ``"I0,J1"`` to a bitmask; empty means no one.

    Tokens made only of digits are read as 0-based indices.
    """
    if not text:
        return 0
    mask = 0
    names = list(g.names) if g.names else []
    for tok in text.split(","):
        tok = tok.strip()
        # all-digit tokens are always indices, even when names look numeric
        if tok.isdigit():
            p = int(tok)
        elif tok in names:
            p = names.index(tok)
        else:
            raise InputError(f"unknown player {tok!r}")
        if not 0 <= p < g.n:
            raise InputError(f"player {p} outside 0..{g.n - 1}")
        mask |= 1 << p
    return mask


def _spec(args, g: Game) -> BoycottSpec:
    A = parse_coalition(args.A, g)
    B = parse_coalition(args.B, g)
    if A & B:
        raise InputError(f"A and B overlap in players {members(A & B)}")
    return BoycottSpec(A, B)


def _load(args) -> Game:
    if args.family:
        params = {k: v for k, v in (("n", args.n), ("x", args.x), ("seed", args.seed_game)) if v is not None}
        return ScenarioSpec(args.family, params).build()
    if not args.game:
        raise InputError("give a game document path (or '-') or --family")
    return load_game(args.game)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _table(header: list[str], rows: list[list], fmt: str) -> str:
    rows = [[str(c) for c in r] for r in rows]
    if fmt == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    widths = [max(len(h), *(len(r[k]) for r in rows)) if rows else len(h) for k, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def cmd_shapley(args) -> int:
    g = _load(args)
    if args.sample is not None:
        est = shapley_sampled(g, args.sample, args.seed, n_jobs=args.jobs)
        rows = [
            [p, g.player_name(p), repr(float(est.values[p])), repr(float(est.stderr[p]))]
            for p in range(g.n)
        ]
        _write(_table(["player", "name", "estimate", "stderr"], rows, args.format), args.output)
    else:
        phi = shapley_exact(g)
        rows = [[p, g.player_name(p), phi[p]] for p in range(g.n)]
        _write(_table(["player", "name", "shapley"], rows, args.format), args.output)
    return EXIT_OK


def cmd_boycott(args) -> int:
    g = _load(args)
    result = boycott(g, _spec(args, g))
    _write(dump_document(game_to_document(result)), args.output)
    return EXIT_OK


def cmd_impact(args) -> int:
    g = _load(args)
    spec = _spec(args, g)
    before = shapley_exact(g)
    after = shapley_exact(boycott(g, spec))
    imp = impact(g, spec)
    rows = [
        [p, g.player_name(p), imp.roles[p], before[p], after[p], imp[p]]
        for p in range(g.n)
    ]
    header = ["player", "name", "role", "before", "after", "impact"]
    _write(_table(header, rows, args.format), args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    g = _load(args)
    if args.property == "convex":
        w = supermodularity_witness(g)
        if w is None:
            print("convex: yes")
            return EXIT_OK
        print(f"convex: no (i={w.i}, j={w.j}, S={members(w.S)})")
        return EXIT_VIOLATION
    spec = _spec(args, g)
    if args.property == "disjoint":
        w = disjoint_productivity_witness(g, spec.A, spec.B)
        if w is None:
            print("disjointly productive: yes")
            return EXIT_OK
        print(f"disjointly productive: no (i={w.i}, j={w.j}, S={members(w.S)})")
        return EXIT_VIOLATION
    if args.player is None:
        raise InputError("invariant check needs --player")
    mask = parse_coalition(str(args.player), g)
    if mask.bit_count() != 1:
        raise InputError("--player takes exactly one player")
    k = mask.bit_length() - 1
    if is_invariant_player(g, boycott(g, spec), k):
        print(f"player {k} invariant: yes")
        return EXIT_OK
    print(f"player {k} invariant: no")
    return EXIT_VIOLATION


def _report_text(rep: harness.TheoremReport) -> str:
    line = f"{rep.theorem:<20} {rep.verdict.upper():<9} instances={rep.instances}"
    mode = rep.details.get("mode")
    if mode:
        line += f" ({mode})"
    if rep.theorem == "convexity":
        line += f" supermodular={rep.details['supermodular']} biconditional={rep.details['biconditional']}"
    if rep.witness:
        line += f"\n    witness: {json.dumps(rep.witness)}"
    return line


def cmd_verify(args) -> int:
    g = _load(args)
    theorem = args.theorem
    if theorem == "all":
        reports = harness.verify_all(g, trials=args.trials, seed=args.seed)
    elif theorem == "convexity":
        reports = [harness.verify_convexity_theorem(g)]
    elif theorem == "nested":
        reports = [harness.verify_nested_monotonicity(g, trials=args.trials, seed=args.seed)]
    elif theorem == "many_on_one":
        reports = [harness.verify_many_on_one(g, trials=args.trials, seed=args.seed)]
    elif theorem == "sign":
        reports = [harness.verify_sign_theorem(g, trials=args.trials, seed=args.seed)]
    else:
        spec = _spec(args, g)
        reports = [harness.verify_lemma1(g, spec.A, spec.B)]
    if args.format == "json":
        _write(json.dumps([r.to_dict() for r in reports], indent=2) + "\n", args.output)
    else:
        _write("\n".join(_report_text(r) for r in reports) + "\n", args.output)
    # the convexity statement may legitimately fail on a non-convex game;
    # what must hold is its agreement with supermodularity
    broken = [
        r for r in reports
        if (not r.details["biconditional"] if r.theorem == "convexity" else not r.holds)
    ]
    return EXIT_VIOLATION if broken else EXIT_OK


def _fmt(x: Fraction | None) -> str:
    return "" if x is None else str(x)


def cmd_scenario(args) -> int:
    spec, bs, sid = harness.named_scenario(args.name, n=args.n, a=args.a, b=args.b, variant=args.variant)
    rep = harness.run_scenario(spec, bs, sid)
    if args.format == "json":
        _write(json.dumps(rep.to_dict(), indent=2) + "\n", args.output)
        return EXIT_OK if rep.match else EXIT_VIOLATION
    header = ["player", "name", "role", "before", "after", "impact", "expected_before", "expected_after", "verdict"]
    rows = []
    for r in rep.rows:
        verdict = {True: "MATCH", False: "MISMATCH", None: "-"}[r.match]
        rows.append([r.player, r.name, r.role, r.before, r.after, r.impact,
                     _fmt(r.expected_before), _fmt(r.expected_after), verdict])
    grand_ok = all(
        want is None or got == want
        for got, want in ((rep.grand_before, rep.expected_grand_before), (rep.grand_after, rep.expected_grand_after))
    )
    has_grand = rep.expected_grand_before is not None or rep.expected_grand_after is not None
    rows.append(["N", "v(N)", "", rep.grand_before, rep.grand_after, rep.grand_before - rep.grand_after,
                 _fmt(rep.expected_grand_before), _fmt(rep.expected_grand_after),
                 ("MATCH" if grand_ok else "MISMATCH") if has_grand else "-"])
    text = f"scenario {rep.scenario}\n" + _table(header, rows, args.format)
    if args.format == "text":
        for claim, ok in rep.claims.items():
            text += f"claim: {claim}: {'MATCH' if ok else 'MISMATCH'}\n"
        for key, value in rep.findings.items():
            text += f"finding: {key} = {value}\n"
        text += f"overall: {'MATCH' if rep.match else 'MISMATCH'}\n"
    _write(text, args.output)
    return EXIT_OK if rep.match else EXIT_VIOLATION


def cmd_myerson(args) -> int:
    base = load_game(args.game)
    graph = load_graph(args.graph)
    _write(dump_document(game_to_document(myerson_restriction(base, graph))), args.output)
    return EXIT_OK


def _add_game_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("game", nargs="?", help="game document (JSON), '-' for stdin")
    p.add_argument("--family", choices=["homogeneous", "heterogeneous", "three_block",
                                        "triangle", "random_convex", "random_any"],
                   help="generate the game instead of reading a document")
    p.add_argument("--n", type=int, help="family size parameter")
    p.add_argument("--x", type=int, help="special player of the heterogeneous block")
    p.add_argument("--game-seed", dest="seed_game", type=int, help="seed for random families")


def _add_boycott_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--A", required=required, help="boycotting players, comma separated")
    p.add_argument("--B", required=required, help="boycotted players, comma separated")


def _add_output(p: argparse.ArgumentParser, formats=("text", "csv", "json")) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("-o", "--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boycottgames", description="Boycotts in cooperative TU games.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shapley", help="Shapley value, exact or sampled")
    _add_game_input(p)
    p.add_argument("--sample", type=int, metavar="M", help="estimate from M random orderings")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    _add_output(p)
    p.set_defaults(func=cmd_shapley)

    p = sub.add_parser("boycott", help="emit the A,B-boycott game")
    _add_game_input(p)
    _add_boycott_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_boycott)

    p = sub.add_parser("impact", help="per-player impact of a boycott")
    _add_game_input(p)
    _add_boycott_args(p)
    _add_output(p)
    p.set_defaults(func=cmd_impact)

    p = sub.add_parser("check", help="convexity, disjoint productivity or invariance")
    p.add_argument("property", choices=["convex", "disjoint", "invariant"])
    _add_game_input(p)
    _add_boycott_args(p, required=False)
    p.add_argument("--player", help="player for the invariance check")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="check the boycott theorems on a game")
    _add_game_input(p)
    p.add_argument("--theorem", default="all", choices=["all", *harness.THEOREMS])
    p.add_argument("--trials", type=int, default=100, help="random specs above the exhaustive limits")
    p.add_argument("--seed", type=int, default=0)
    _add_boycott_args(p, required=False)
    _add_output(p, formats=("text", "json"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scenario", help="reproduce a worked scenario")
    p.add_argument("name", choices=["triangle", "homogeneous", "heterogeneous", "three-block"])
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--variant", choices=["blocks", "dropout"], default="blocks")
    _add_output(p)
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("myerson", help="graph-restricted game")
    p.add_argument("game", help="base game document")
    p.add_argument("graph", help="graph document")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_myerson)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SizeLimitExceededError, InstanceTooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (GameError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
