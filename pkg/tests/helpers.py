"""Shared, cached builders for the test suite."""

from __future__ import annotations

import json
import random
from functools import lru_cache
from pathlib import Path

from chipfire.firing import random_sink_graph
from chipfire.line import LINE, endgame_config, origin_config
from chipfire.notation import parse_config
from chipfire.posets import FiringMove, build_config_poset, build_move_poset

DATA = Path(__file__).parent / "data"

RANDOM_SEEDS = range(50)


def cfg(text: str):
    return parse_config(text)


@lru_cache(maxsize=None)
def figures() -> dict:
    return json.loads((DATA / "figures.json").read_text())


@lru_cache(maxsize=None)
def line_poset(n: int):
    return build_config_poset(LINE, origin_config(n))


@lru_cache(maxsize=None)
def line_move_poset(n: int):
    return build_move_poset(LINE, origin_config(n), line_poset(n))


@lru_cache(maxsize=None)
def endgame_poset(m: int):
    return build_config_poset(LINE, endgame_config(2 * m))


@lru_cache(maxsize=None)
def random_game(seed: int):
    return random_sink_graph(random.Random(seed))


@lru_cache(maxsize=None)
def random_poset(seed: int):
    system, c = random_game(seed)
    return build_config_poset(system, c)


def random_suite():
    return [(seed, *random_game(seed)) for seed in RANDOM_SEEDS]


def move(pair) -> FiringMove:
    return FiringMove(int(pair[0]), int(pair[1]))


# acceptance results, printed by the terminal summary hook in conftest
ACCEPTANCE: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> str:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return line
