"""Chip-firing on the integer line: generators, endgame checks, counterexamples.

Everything here works with ``FiringSystem.line()`` and configurations written
in compact notation (see :mod:`chipfire.notation`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigNotFound, IllegalAt, OddN
from .firing import ChipConfig, FiringSystem, MoveVector, replay, stabilize
from .notation import compact, parse_config
from .order import (
    count_linear_extensions,
    embed_check,
    is_distributive,
    is_lattice,
    linear_extensions,
    order_ideals,
)
from .posets import FiringMove, build_config_poset, build_move_poset

LINE = FiringSystem.line()

# the configurations behind the two published distributivity failures
COUNTEREXAMPLES = {
    5: ("10_3_01", "11_0_3", "3_0_11"),
    8: ("20_3_21", "21_0_5", "13_0_31"),
}


def origin_config(n: int) -> ChipConfig:
    if n < 1:
        raise ValueError("n must be at least 1")
    return ChipConfig({0: n})


def endgame_config(n: int) -> ChipConfig:
    """One chip on each of ``±1..±(m-1)`` and two at the origin, for ``n = 2m``."""
    if n % 2 or n < 2:
        raise OddN(n)
    m = n // 2
    counts = {s: 1 for s in range(-(m - 1), m) if s}
    counts[0] = 2
    return ChipConfig(counts)


def _report_mark(flag):
    return "pass" if flag else "FAIL"


@dataclass
class EndgameReport:
    m: int
    configs: int
    moves: int
    ideals: int
    odometer: MoveVector
    lattice: bool
    mv_bounds: bool
    distributive: bool
    ideal_isomorphism: bool

    @property
    def passed(self) -> bool:
        return self.lattice and self.mv_bounds and self.distributive and self.ideal_isomorphism

    def lines(self) -> list[str]:
        return [
            f"m={self.m} (n={2 * self.m}): {self.configs} configurations, {self.moves} moves, {self.ideals} ideals",
            f"  lattice: {_report_mark(self.lattice)}",
            f"  join=min / meet=max of move vectors: {_report_mark(self.mv_bounds)}",
            f"  distributive: {_report_mark(self.distributive)}",
            f"  order-ideal isomorphism: {_report_mark(self.ideal_isomorphism)}",
        ]


def mv_matrix(cp, sites=None) -> tuple[np.ndarray, list[int]]:
    """Move vectors of every element of a configuration poset, as rows."""
    if sites is None:
        sites = sorted(cp.odometer)
    col = {s: i for i, s in enumerate(sites)}
    arr = np.zeros((len(cp.poset), len(sites)), dtype=np.int64)
    for r, x in enumerate(cp.poset.elements):
        for s, c in cp.mv[x].items():
            arr[r, col[s]] = c
    return arr, sites


def check_mv_bounds(cp) -> bool:
    """Joins are componentwise minima and meets componentwise maxima of move vectors."""
    arr, _ = mv_matrix(cp)
    meet_t, join_t = cp.poset.meet_table(), cp.poset.join_table()
    lo = np.minimum(arr[:, None, :], arr[None, :, :])
    hi = np.maximum(arr[:, None, :], arr[None, :, :])
    return bool(np.array_equal(arr[join_t], lo) and np.array_equal(arr[meet_t], hi))


def pending_moves(odometer: MoveVector, done: MoveVector) -> frozenset:
    """Moves of the full game not yet performed: an order ideal of the move poset."""
    return frozenset(FiringMove(s, j) for s, total in odometer.items()
                     for j in range(done[s] + 1, total + 1))


def check_endgame(m: int) -> EndgameReport:
    c = endgame_config(2 * m)
    cp = build_config_poset(LINE, c)
    lattice = bool(is_lattice(cp.poset))
    mv_ok = distributive = iso = False
    ideals = []
    mp = build_move_poset(LINE, c, cp)
    if lattice:
        mv_ok = check_mv_bounds(cp)
        distributive = bool(is_distributive(cp.poset))
        ideals, ideal_lattice = order_ideals(mp.poset)
        if len(ideals) == len(cp):
            image = {x: pending_moves(cp.odometer, cp.mv[x]) for x in cp.poset.elements}
            iso = set(image.values()) == set(ideals) and embed_check(cp.poset, ideal_lattice, image)
    return EndgameReport(m, len(cp), len(mp), len(ideals), cp.odometer, lattice, mv_ok, distributive, iso)


def verify_endgame_lattice(m_max: int) -> list[EndgameReport]:
    return [check_endgame(m) for m in range(1, m_max + 1)]


@dataclass
class CounterexampleTranscript:
    n: int
    rows: list  # (expression, compact config)
    lhs: ChipConfig
    rhs: ChipConfig

    @property
    def fails_distributivity(self) -> bool:
        return self.lhs != self.rhs

    def row(self, expr: str) -> str:
        return dict(self.rows)[expr]

    def lines(self) -> list[str]:
        width = max(len(e) for e, _ in self.rows)
        out = [f"n={self.n}"]
        out += [f"  {e.rjust(width)} = {v}" for e, v in self.rows]
        rel = "!=" if self.fails_distributivity else "=="
        out.append(f"  x ∧ (y ∨ z) {rel} (x ∧ y) ∨ (x ∧ z)")
        return out


def reproduce_counterexample(n: int, config_poset=None) -> CounterexampleTranscript:
    if n not in COUNTEREXAMPLES:
        raise ValueError(f"no recorded counterexample for n={n}; choose from {sorted(COUNTEREXAMPLES)}")
    cp = config_poset if config_poset is not None else build_config_poset(LINE, origin_config(n))
    x, y, z = (parse_config(t) for t in COUNTEREXAMPLES[n])
    for name, cfg in zip("xyz", (x, y, z)):
        if cfg not in cp:
            raise ConfigNotFound(f"{name} = {compact(cfg)} is not reachable from {n} chips at the origin")
    p = cp.poset
    y_or_z = p.join(y, z)
    lhs = p.meet(x, y_or_z)
    x_and_y = p.meet(x, y)
    x_and_z = p.meet(x, z)
    rhs = p.join(x_and_y, x_and_z)
    rows = [
        ("x", compact(x)),
        ("y", compact(y)),
        ("z", compact(z)),
        ("y ∨ z", compact(y_or_z)),
        ("x ∧ (y ∨ z)", compact(lhs)),
        ("x ∧ y", compact(x_and_y)),
        ("x ∧ z", compact(x_and_z)),
        ("(x ∧ y) ∨ (x ∧ z)", compact(rhs)),
    ]
    return CounterexampleTranscript(n, rows, lhs, rhs)


def count_firing_sequences(cp) -> int:
    """Complete firing sequences = maximal chains of the configuration poset."""
    ways = {}
    for x in reversed(cp.poset.elements):  # breadth-first order, so successors come later
        nxt = cp.successors[x]
        ways[x] = sum(ways[y] for y in nxt.values()) if nxt else 1
    return ways[cp.root]


def _origin_first(move: FiringMove):
    return (move.site != 0, -move.site, move.index)


@dataclass
class ExtensionTranscript:
    n: int
    extensions: int
    valid: int
    enumerated: bool
    witness: tuple | None = None  # site sequence of an invalid extension
    failure_index: int | None = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if self.n == 5:
            return self.witness == (0, 0, 0, 1, -1) and self.failure_index == 2
        if self.n == 8:
            return (self.witness is not None and self.witness[:5] == (0,) * 5
                    and self.failure_index is not None and self.failure_index <= 4)
        return self.valid <= self.extensions

    def lines(self) -> list[str]:
        out = [f"n={self.n}",
               f"  linear extensions of the move poset: {self.extensions}",
               f"  replay-valid firing sequences: {self.valid}"]
        if self.witness is None:
            out.append("  every linear extension is a legal firing sequence")
        else:
            sites = ",".join(str(s) for s in self.witness)
            out.append(f"  invalid extension: ({sites}) fails at index {self.failure_index}")
        out += [f"  {note}" for note in self.notes]
        return out


def _replay_failure(c, seq):
    try:
        replay(LINE, c, seq)
    except IllegalAt as exc:
        return exc.index
    return None


def invalid_extension_demo(n: int, enumerate_cap: int = 10**5) -> ExtensionTranscript:
    """Compare linear extensions of the move poset with legal firing sequences.

    Linear extensions are counted by dynamic programming and, when there
    are at most ``enumerate_cap`` of them, also enumerated and replayed one by
    one. The reported witness is the first invalid extension in origin-first
    order (origin moves, then sites from right to left).
    """
    c = origin_config(n)
    cp = build_config_poset(LINE, c)
    mp = build_move_poset(LINE, c, cp)
    total = count_linear_extensions(mp.poset)
    legal = count_firing_sequences(cp)
    enumerated = total <= enumerate_cap
    transcript = ExtensionTranscript(n, total, legal, enumerated)
    if enumerated:
        replay_ok = 0
        for ext in linear_extensions(mp.poset, key=_origin_first):
            sites = tuple(m.site for m in ext)
            fail = _replay_failure(c, sites)
            if fail is None:
                replay_ok += 1
            elif transcript.witness is None:
                transcript.witness, transcript.failure_index = sites, fail
        if replay_ok != legal:
            raise AssertionError(f"replay found {replay_ok} legal extensions, poset count says {legal}")
    else:
        transcript.notes.append(f"enumeration skipped above {enumerate_cap} extensions")
        for ext in linear_extensions(mp.poset, key=_origin_first):
            sites = tuple(m.site for m in ext)
            fail = _replay_failure(c, sites)
            if fail is not None:
                transcript.witness, transcript.failure_index = sites, fail
                break
    return transcript


# labeled chip-firing -----------------------------------------------------


@dataclass
class LabeledConfig:
    sites: dict  # site -> sorted tuple of labels
    history: list = field(default_factory=list)

    def unlabeled(self) -> ChipConfig:
        return ChipConfig({s: len(ls) for s, ls in self.sites.items()})

    def labels(self) -> list[int]:
        return sorted(label for ls in self.sites.values() for label in ls)

    def reading(self) -> list[int]:
        """Labels read left to right (ties within a site in increasing order)."""
        return [label for s in sorted(self.sites) for label in self.sites[s]]

    def is_sorted(self) -> bool:
        return self.reading() == sorted(self.reading())


def labeled_fire_run(n: int, seed) -> LabeledConfig:
    """Fire labeled chips from the origin until stable.

    Each step picks a random site holding two or more chips and a random pair
    of labels there; the smaller label moves left, the larger right.
    """
    if n % 2:
        raise OddN(n)
    rng = random.Random(seed)
    where: dict[int, list[int]] = {0: list(range(1, n + 1))}
    history = []
    while True:
        ready = sorted(s for s, ls in where.items() if len(ls) >= 2)
        if not ready:
            break
        s = rng.choice(ready)
        a, b = rng.sample(where[s], 2)
        lo, hi = min(a, b), max(a, b)
        where[s].remove(lo)
        where[s].remove(hi)
        where.setdefault(s - 1, []).append(lo)
        where.setdefault(s + 1, []).append(hi)
        history.append(s)
    sites = {s: tuple(sorted(ls)) for s, ls in where.items() if ls}
    return LabeledConfig(dict(sorted(sites.items())), history)


def moves_at_each_site(n: int) -> MoveVector:
    return stabilize(LINE, origin_config(n))[1]

