"""Golden comparisons against hand-transcribed Hasse diagrams in data/figures.json."""

import pytest

from chipfire.line import LINE, endgame_config
from chipfire.notation import compact
from chipfire.order import join_irreducibles
from chipfire.posets import build_move_poset

from helpers import endgame_poset, figures, line_move_poset, line_poset, move


def config_covers(cp):
    return {(compact(a), compact(b)) for a, b in cp.poset.covers}


@pytest.mark.parametrize("n", [5, 6])
def test_config_poset_figure(n):
    fig = figures()[f"config_poset_n{n}"]
    cp = line_poset(n)
    assert {compact(x) for x in cp.poset.elements} == set(fig["elements"])
    assert config_covers(cp) == {tuple(e) for e in fig["covers"]}
    assert {compact(x) for x in join_irreducibles(cp.poset)} == set(fig["bold"])


@pytest.mark.parametrize("n", [5, 6, 8])
def test_move_poset_figure(n):
    fig = figures()[f"move_poset_n{n}"]
    mp = line_move_poset(n)
    assert set(mp.poset.elements) == {move(m) for m in fig["moves"]}
    assert set(mp.poset.covers) == {(move(a), move(b)) for a, b in fig["covers"]}
    for m, label in fig.get("labels", []):
        assert compact(mp.configs[move(m)]) == label


def test_endgame_figure_m5():
    fig = figures()["endgame_move_poset_m5"]
    mp = build_move_poset(LINE, endgame_config(10), endgame_poset(5))
    assert set(mp.poset.elements) == {move(m) for m in fig["moves"]}
    assert set(mp.poset.covers) == {(move(a), move(b)) for a, b in fig["covers"]}


def test_endgame_figure_m10():
    fig = figures()["endgame_move_poset_m10"]
    mp = build_move_poset(LINE, endgame_config(20), reach="search")
    assert len(mp) == 100
    assert set(mp.poset.elements) == {move(m) for m in fig["moves"]}
    assert set(mp.poset.covers) == {(move(a), move(b)) for a, b in fig["covers"]}
