"""JSON game and graph documents.

A game document holds either an explicit table::

    {"format_version": 1, "players": ["a", "b"], "values": ["0", "1", "1/2", "3"]}

where ``values[S]`` is the worth of the coalition with bitmask ``S`` (bit
``t`` = player ``t``), or a generator clause::

    {"format_version": 1, "generator": {"family": "three_block", "n": 2}}

Values are integers or ``"p/q"`` strings; they round-trip exactly.
"""

from __future__ import annotations

import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from .exceptions import GameError, SizeLimitExceededError
from .game import MAX_PLAYERS, Game
from .generators import Graph, ScenarioSpec

FORMAT_VERSION = 1

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class DocumentError(GameError):
    """Malformed game or graph document."""


def parse_rational(text: Any) -> Fraction:
    if isinstance(text, bool):
        raise DocumentError(f"not a rational value: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.match(text.strip()):
        raise DocumentError(f"not an integer or p/q string: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise DocumentError(f"zero denominator in {text!r}") from None


def format_rational(x: Fraction) -> str:
    return str(x)


def game_to_document(g: Game) -> dict:
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION}
    if g.names is not None:
        doc["players"] = list(g.names)
    doc["values"] = [format_rational(v) for v in g.values]
    return doc


def _check_version(doc: Any) -> None:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {version!r}")


def game_from_document(doc: dict) -> Game:
    _check_version(doc)
    has_values = "values" in doc
    has_gen = "generator" in doc
    if has_values == has_gen:
        raise DocumentError("game document needs exactly one of 'values' or 'generator'")
    if has_gen:
        gen = doc["generator"]
        if not isinstance(gen, dict) or "family" not in gen:
            raise DocumentError("generator clause needs a 'family'")
        params = {k: v for k, v in gen.items() if k != "family"}
        if gen["family"] == "myerson":
            raise DocumentError("myerson games are built with the 'myerson' command")
        return ScenarioSpec(gen["family"], params).build()
    values = doc["values"]
    if not isinstance(values, list) or len(values) < 2:
        raise DocumentError("'values' must list at least the two coalitions of one player")
    size = len(values)
    n = size.bit_length() - 1
    if size != 1 << n:
        raise DocumentError(f"'values' has {size} entries, not a power of two")
    if n > MAX_PLAYERS:
        raise SizeLimitExceededError(f"{n} players exceeds the limit of {MAX_PLAYERS}")
    names = doc.get("players")
    if names is not None and (not isinstance(names, list) or len(names) != n):
        raise DocumentError(f"'players' must list {n} names")
    return Game(n, [parse_rational(v) for v in values], names)


def graph_to_document(graph: Graph) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "vertices": graph.n,
        "edges": sorted([a, b] for a, b in graph.edges),
    }


def graph_from_document(doc: dict) -> Graph:
    _check_version(doc)
    try:
        n = int(doc["vertices"])
        edges = [tuple(e) for e in doc.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed graph document: {exc}") from None
    if any(len(e) != 2 for e in edges):
        raise DocumentError("every edge must be a pair of vertex indices")
    return Graph(n, frozenset(edges))


def _load_json(source: str | Path) -> Any:
    text = Path(source).read_text(encoding="utf-8") if str(source) != "-" else sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None


def load_game(source: str | Path) -> Game:
    return game_from_document(_load_json(source))


def load_graph(source: str | Path) -> Graph:
    return graph_from_document(_load_json(source))


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"
