import pytest

from chipfire.errors import ConfigNotFound, IllegalAt, OddN
from chipfire.firing import ChipConfig, MoveVector, replay, stabilize
from chipfire.line import (
    LINE,
    check_endgame,
    count_firing_sequences,
    endgame_config,
    invalid_extension_demo,
    labeled_fire_run,
    moves_at_each_site,
    origin_config,
    pending_moves,
    reproduce_counterexample,
)
from chipfire.order import is_distributive, is_linear_extension, is_uld
from chipfire.posets import FiringMove, build_config_poset, complete_sequences, label_moves

from helpers import cfg, endgame_poset, figures, line_move_poset, line_poset


def test_origin_config():
    assert origin_config(5) == ChipConfig({0: 5})
    assert origin_config(6) == ChipConfig({0: 6})
    assert stabilize(LINE, origin_config(1))[1] == MoveVector()
    with pytest.raises(ValueError):
        origin_config(0)


def test_endgame_config():
    assert endgame_config(10) == ChipConfig({**{s: 1 for s in range(-4, 5) if s}, 0: 2})
    assert endgame_config(2) == ChipConfig({0: 2})
    with pytest.raises(OddN):
        endgame_config(7)


# endgame ---------------------------------------------------------------------


@pytest.mark.parametrize("m", range(1, 7))
def test_endgame_checks(m):
    report = check_endgame(m)
    assert report.lattice and report.mv_bounds and report.distributive and report.ideal_isomorphism
    assert report.ideals == report.configs


def test_endgame_sizes_are_central_binomials():
    # the endgame poset turns out to be the lattice of paths in an m x m box
    from math import comb
    for m in range(1, 7):
        assert len(endgame_poset(m)) == comb(2 * m, m)


def test_endgame_m5_move_poset():
    report = check_endgame(5)
    assert report.moves == 25
    expected = {0: 5, **{s: 5 - abs(s) for s in range(-4, 5) if s}}
    assert report.odometer == MoveVector(expected)


def test_endgame_m1_is_a_chain():
    cp = endgame_poset(1)
    assert len(cp) == 2
    assert is_distributive(cp.poset)


def test_pending_moves_form_ideals():
    odo = MoveVector({0: 2, 1: 1})
    assert pending_moves(odo, MoveVector({0: 1})) == {FiringMove(0, 2), FiringMove(1, 1)}
    assert pending_moves(odo, odo) == frozenset()


# distributivity ------------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(2, True), (3, True), (4, True), (6, True),
                                        (5, False), (7, False), (8, False)])
def test_distributivity_verdicts(n, expected):
    assert bool(is_distributive(line_poset(n).poset)) is expected


@pytest.mark.parametrize("n", range(1, 10))
def test_config_posets_are_uld(n):
    assert is_uld(line_poset(n).poset)


def test_counterexample_five_chips():
    t = reproduce_counterexample(5, line_poset(5))
    assert t.row("y ∨ z") == "2_1_2"
    assert t.row("x ∧ (y ∨ z)") == "10_3_01"
    assert t.row("x ∧ y") == "11_1_11"
    assert t.row("x ∧ z") == "11_1_11"
    assert t.row("(x ∧ y) ∨ (x ∧ z)") == "11_1_11"
    assert t.fails_distributivity
    assert t.lines()[-1].endswith("!= (x ∧ y) ∨ (x ∧ z)")


def test_counterexample_eight_chips():
    t = reproduce_counterexample(8, line_poset(8))
    assert t.row("y ∨ z") == "12_1_4"
    assert t.row("x ∧ (y ∨ z)") == "20_3_21"
    assert t.row("x ∧ y") == "21_1_31"
    assert t.row("x ∧ z") == "21_1_31"
    assert t.row("(x ∧ y) ∨ (x ∧ z)") == "21_1_31"
    assert t.fails_distributivity


def test_counterexample_errors():
    with pytest.raises(ValueError):
        reproduce_counterexample(6)
    with pytest.raises(ConfigNotFound):
        reproduce_counterexample(5, line_poset(6))


def test_six_chips_has_no_counterexample():
    assert is_distributive(line_poset(6).poset).witness is None


# linear extensions versus firing sequences ------------------------------------------


def test_invalid_extension_five_chips():
    t = invalid_extension_demo(5)
    assert t.enumerated
    assert t.witness == (0, 0, 0, 1, -1)
    assert t.failure_index == 2
    with pytest.raises(IllegalAt) as info:
        replay(LINE, origin_config(5), t.witness)
    assert info.value.index == 2
    assert (t.extensions, t.valid) == (6, 4)


@pytest.mark.slow
def test_invalid_extension_eight_chips():
    t = invalid_extension_demo(8)
    assert t.witness[:5] == (0,) * 5
    assert t.failure_index is not None and t.failure_index <= 4
    assert t.valid < t.extensions
    assert t.passed


def test_invalid_extension_three_chips():
    t = invalid_extension_demo(3)
    assert t.extensions == t.valid == 1 and t.witness is None


def test_six_chips_every_extension_is_legal():
    t = invalid_extension_demo(6)
    assert t.extensions == t.valid and t.witness is None


@pytest.mark.parametrize("n", range(1, 7))
def test_firing_sequences_are_linear_extensions(n):
    p = line_move_poset(n).poset
    count = 0
    for seq in complete_sequences(LINE, origin_config(n)):
        assert is_linear_extension(p, label_moves(seq))
        count += 1
    assert count == count_firing_sequences(line_poset(n))


# odd and even games -------------------------------------------------------------------


@pytest.mark.parametrize("m", range(1, 7))
def test_odd_and_even_share_odometer(m):
    assert moves_at_each_site(2 * m) == moves_at_each_site(2 * m + 1)


def test_figure_move_counts():
    assert moves_at_each_site(5).moves == 5
    assert moves_at_each_site(6).moves == 14
    assert moves_at_each_site(8).moves == len(figures()["move_poset_n8"]["moves"])


# labeled chips -------------------------------------------------------------------------


def test_labeled_two_chips():
    run = labeled_fire_run(2, seed=0)
    assert run.sites == {-1: (1,), 1: (2,)}


@pytest.mark.parametrize("n", range(2, 13, 2))
def test_labeled_runs_sorted(n):
    final = stabilize(LINE, origin_config(n))[0]
    for seed in range(100):
        run = labeled_fire_run(n, seed)
        assert run.is_sorted()
        assert run.labels() == list(range(1, n + 1))
        assert run.unlabeled() == final
        assert MoveVector.of_sequence(run.history) == moves_at_each_site(n)


def test_labeled_history_replays():
    run = labeled_fire_run(10, seed=4)
    assert replay(LINE, origin_config(10), run.history) == run.unlabeled()


def test_labeled_odd_rejected():
    with pytest.raises(OddN):
        labeled_fire_run(5, seed=0)


def test_config_poset_of_endgame_matches_builder():
    c = endgame_config(6)
    assert len(build_config_poset(LINE, c)) == len(endgame_poset(3))
    assert cfg("1_2_1") == endgame_config(4)
