"""Configuration posets, move posets and the join-irreducible correspondence.

A configuration poset is built by breadth-first closure over single firings.
The move poset is built from the configurations ``c(k^j)`` in which ``k^j``
is the only available move, ordered by reachability between them. An
independent brute-force oracle enumerates every complete firing sequence.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import (
    IndexTooLarge,
    NonTerminating,
    SeqCapExceeded,
    StateCapExceeded,
    StepCapExceeded,
)
from .firing import (
    DEFAULT_STEP_CAP,
    ChipConfig,
    FiringSystem,
    MoveVector,
    available_sites,
    fire,
    make_policy,
    run,
    stabilize,
)
from .order import FinitePoset, embed_check, is_lattice, join_irreducibles

log = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 10**6
DEFAULT_SEQ_CAP = 2 * 10**5


class FiringMove(NamedTuple):
    """The ``index``-th firing at ``site`` (written ``site^index``)."""

    site: int
    index: int

    def __str__(self):
        return f"{self.site}^{self.index}"


@dataclass
class ConfigPoset:
    system: FiringSystem
    root: ChipConfig
    poset: FinitePoset
    mv: dict  # config -> MoveVector from the root
    successors: dict  # config -> {site: config}
    odometer: MoveVector = field(default_factory=MoveVector)

    def __len__(self):
        return len(self.poset)

    def __contains__(self, cfg):
        return cfg in self.poset

    @property
    def bottom(self) -> ChipConfig:
        (b,) = self.poset.minimal()
        return b

    def edge_site(self, upper: ChipConfig, lower: ChipConfig) -> int:
        for s, nxt in self.successors[upper].items():
            if nxt == lower:
                return s
        raise KeyError((upper, lower))

    def reachable(self, src: ChipConfig, dst: ChipConfig) -> bool:
        return self.poset.leq(dst, src)

    def depth(self, cfg: ChipConfig) -> int:
        return self.mv[cfg].moves


@dataclass
class MovePoset:
    poset: FinitePoset
    configs: dict  # FiringMove -> c(k^j)

    def __len__(self):
        return len(self.poset)


def _check_terminates(system, c, step_cap):
    try:
        return stabilize(system, c, step_cap=step_cap)
    except StepCapExceeded as exc:
        raise NonTerminating(exc.cap) from None


def build_config_poset(system: FiringSystem, c: ChipConfig, state_cap: int = DEFAULT_STATE_CAP,
                       step_cap: int = DEFAULT_STEP_CAP) -> ConfigPoset:
    system.validate(c)
    _, odo = _check_terminates(system, c, step_cap)
    mv = {c: MoveVector()}
    succ: dict[ChipConfig, dict[int, ChipConfig]] = {}
    order = [c]
    queue = deque([c])
    covers = []
    while queue:
        cur = queue.popleft()
        here = {}
        base = mv[cur]
        for s in sorted(available_sites(system, cur)):
            nxt = fire(system, cur, s)
            here[s] = nxt
            covers.append((cur, nxt))
            step = dict(base.items())
            step[s] = step.get(s, 0) + 1
            vec = MoveVector(step)
            known = mv.get(nxt)
            if known is None:
                if len(order) >= state_cap:
                    raise StateCapExceeded(state_cap)
                mv[nxt] = vec
                order.append(nxt)
                queue.append(nxt)
            elif known != vec:
                raise AssertionError(f"configuration {nxt!r} reached with two move vectors")
        if len(set(here.values())) != len(here):
            raise AssertionError(f"two firings from {cur!r} reach the same configuration")
        succ[cur] = here
    poset = FinitePoset(order, covers)
    return ConfigPoset(system, c, poset, mv, succ, odo)


def only_move_config(system: FiringSystem, c: ChipConfig, k: int, j: int, policy="lowest",
                     seed=None, step_cap: int = DEFAULT_STEP_CAP) -> ChipConfig:
    """The configuration in which the ``j``-th firing at ``k`` is the only move.

    Follow a complete firing sequence until ``k`` has fired ``j - 1`` times,
    then fire every site other than ``k`` until none can.
    """
    _, odo = _check_terminates(system, c, step_cap)
    if j < 1 or j > odo[k]:
        raise IndexTooLarge(f"site {k} fires {odo[k]} times; move {k}^{j} does not exist")
    return _only_move_run(system, c, k, j, make_policy(policy, seed), step_cap)[0]


def _only_move_run(system, c, k, j, pick=None, step_cap=DEFAULT_STEP_CAP):
    pick = pick or make_policy("lowest")
    cfg, first = c, []
    if j > 1:
        cfg, first = run(system, cfg, pick, step_cap, until=lambda s, counts: counts.get(k, 0) == j - 1)
    cfg, rest = run(system, cfg, pick, step_cap, exclude=frozenset([k]))
    return cfg, MoveVector.of_sequence(first + rest)


def augmented_system(system: FiringSystem, c: ChipConfig, k: int, j: int) -> tuple[FiringSystem, ChipConfig, int]:
    """Attach the two-vertex gadget that halts ``k`` just before its ``j``-th firing.

    Two vertices ``v1 = n`` and ``v2 = n + 1`` are added, with ``N`` edges
    ``k``–``v1`` and ``N*j`` edges ``v1``–``v2``, where ``N = total + 1``.
    ``N*(j - 1)`` extra chips go on ``k``. Returns ``(system', c', N)``.
    """
    if system.is_line:
        raise ValueError("augmentation needs a finite multigraph; embed the line first")
    if j < 1:
        raise ValueError("j must be positive")
    big = c.total_chips + 1
    n = system.vertex_count
    edges = system.edges() + [(k, n, big), (n, n + 1, big * j)]
    augmented = FiringSystem.multigraph(n + 2, edges, system.sinks)
    counts = dict(c.items())
    extra = big * (j - 1)
    if extra:
        counts[k] = counts.get(k, 0) + extra
    return augmented, ChipConfig(counts), big


@dataclass(frozen=True)
class LineEmbedding:
    """A finite path standing in for the line; site ``s`` is vertex ``s + offset``.

    Both end vertices are sinks, so a chip reaching them stays put and is
    detected by :meth:`check_untouched`.
    """

    system: FiringSystem
    offset: int

    def to_graph(self, cfg: ChipConfig) -> ChipConfig:
        return ChipConfig({s + self.offset: n for s, n in cfg.items()})

    def to_line(self, cfg: ChipConfig) -> ChipConfig:
        return ChipConfig({v - self.offset: n for v, n in cfg.items()})

    def boundary(self) -> tuple[int, int]:
        return 0, 2 * self.offset

    def check_untouched(self, cfg: ChipConfig) -> None:
        for b in self.boundary():
            if cfg[b]:
                raise AssertionError(f"line embedding too short: boundary vertex {b} received chips")


def embed_line(c: ChipConfig, margin: int = 2, step_cap: int = DEFAULT_STEP_CAP) -> LineEmbedding:
    """Path long enough that a line game from ``c`` never reaches its ends.

    The extreme occupied sites only move outward, so the stable
    configuration bounds the support of every reachable configuration.
    """
    final, _ = stabilize(FiringSystem.line(), c, step_cap=step_cap)
    sites = list(final.support()) + list(c.support()) + [0]
    bound = max(abs(s) for s in sites)
    half = bound + margin + 1
    size = 2 * half + 1
    path = FiringSystem.multigraph(size, [(v, v + 1, 1) for v in range(size - 1)], sinks=(0, size - 1))
    return LineEmbedding(path, half)


def augmented_only_move_config(system: FiringSystem, c: ChipConfig, k: int, j: int,
                               step_cap: int = DEFAULT_STEP_CAP) -> ChipConfig:
    """``c(k^j)`` obtained by stabilizing the augmented system.

    Line games are run on a path embedding and mapped back.
    """
    embedding = None
    if system.is_line:
        embedding = embed_line(c, step_cap=step_cap)
        system, c, k = embedding.system, embedding.to_graph(c), k + embedding.offset
    augmented, c_aug, _ = augmented_system(system, c, k, j)
    final, _ = stabilize(augmented, c_aug, step_cap=step_cap)
    restricted = final.restrict(range(system.vertex_count))
    if embedding is None:
        return restricted
    embedding.check_untouched(restricted)
    return embedding.to_line(restricted)


def all_moves(odometer: MoveVector) -> list[FiringMove]:
    return [FiringMove(s, j) for s, count in odometer.items() for j in range(1, count + 1)]


def reachable_within(system: FiringSystem, src: ChipConfig, dst: ChipConfig, budget: MoveVector) -> bool:
    """Can ``dst`` be reached from ``src`` by firings with odometer exactly ``budget``?

    Fires any available site with budget left until stuck. Legal firings
    commute, so this greedy run succeeds whenever some legal sequence does.
    """
    left = dict(budget.items())
    cfg = src
    while left:
        avail = [s for s in available_sites(system, cfg) if left.get(s, 0) > 0]
        if not avail:
            return False
        s = min(avail)
        cfg = fire(system, cfg, s)
        left[s] -= 1
        if not left[s]:
            del left[s]
    return cfg == dst


def build_move_poset(system: FiringSystem, c: ChipConfig, config_poset: ConfigPoset | None = None,
                     state_cap: int = DEFAULT_STATE_CAP, reach: str = "poset") -> MovePoset:
    """Order moves by reachability between their only-move configurations.

    ``reach="poset"`` reads reachability off the configuration poset.
    ``reach="search"`` never builds it: for each pair it replays the firing
    budget separating the two configurations (see :func:`reachable_within`),
    which keeps games with very large configuration posets tractable.
    """
    if reach == "poset":
        cp = config_poset if config_poset is not None else build_config_poset(system, c, state_cap)
        moves = all_moves(cp.odometer)
        configs = {m: only_move_config(system, c, m.site, m.index) for m in moves}
        pairs = [(a, b) for a in moves for b in moves
                 if a != b and cp.reachable(configs[a], configs[b])]
        return MovePoset(FinitePoset.from_relation(moves, pairs), configs)
    if reach != "search":
        raise ValueError(f"unknown reachability method {reach!r}")
    _, odo = _check_terminates(system, c, DEFAULT_STEP_CAP)
    moves = all_moves(odo)
    configs, done = {}, {}
    for m in moves:
        configs[m], done[m] = _only_move_run(system, c, m.site, m.index)
    pairs = []
    for a in moves:
        for b in moves:
            if a == b or not done[a] <= done[b]:
                continue
            budget = MoveVector({s: done[b][s] - done[a][s] for s in done[b]})
            if reachable_within(system, configs[a], configs[b], budget):
                pairs.append((a, b))
    return MovePoset(FinitePoset.from_relation(moves, pairs), configs)


def complete_sequences(system: FiringSystem, c: ChipConfig, seq_cap: int = DEFAULT_SEQ_CAP):
    """Yield every complete firing sequence from ``c`` as a tuple of sites."""
    produced = 0
    seq: list[int] = []

    def rec(cfg):
        nonlocal produced
        avail = sorted(available_sites(system, cfg))
        if not avail:
            produced += 1
            if produced > seq_cap:
                raise SeqCapExceeded(seq_cap)
            yield tuple(seq)
            return
        for s in avail:
            seq.append(s)
            yield from rec(fire(system, cfg, s))
            seq.pop()

    yield from rec(c)


def label_moves(seq) -> list[FiringMove]:
    seen: dict[int, int] = {}
    out = []
    for s in seq:
        seen[s] = seen.get(s, 0) + 1
        out.append(FiringMove(s, seen[s]))
    return out


def brute_force_move_order(system: FiringSystem, c: ChipConfig, seq_cap: int = DEFAULT_SEQ_CAP) -> set[tuple]:
    """Strict order on moves straight from the definition.

    ``(a, b)`` is in the result when no complete firing sequence performs
    ``b`` before ``a``.
    """
    _check_terminates(system, c, DEFAULT_STEP_CAP)
    moves = None
    possible_before: set[tuple] = set()  # (b, a): b seen before a somewhere
    for seq in complete_sequences(system, c, seq_cap):
        labelled = label_moves(seq)
        if moves is None:
            moves = labelled
        for i, b in enumerate(labelled):
            for a in labelled[i + 1:]:
                possible_before.add((b, a))
    moves = moves or []
    return {(a, b) for a in moves for b in moves if a != b and (b, a) not in possible_before}


def strict_order(p: FinitePoset) -> set[tuple]:
    return {(a, b) for a in p.elements for b in p.elements if a != b and p.leq(b, a)}


@dataclass
class JoinTheoremReport:
    configs: int
    join_irreducibles: int
    moves: int
    lattice: bool
    bijection: bool
    order_isomorphic: bool
    mismatches: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.lattice and self.bijection and self.order_isomorphic

    def lines(self) -> list[str]:
        def mark(flag):
            return "pass" if flag else "FAIL"
        out = [
            f"configurations: {self.configs}",
            f"join-irreducibles: {self.join_irreducibles}",
            f"moves: {self.moves}",
            f"lattice: {mark(self.lattice)}",
            f"only-move bijection: {mark(self.bijection)}",
            f"order isomorphism: {mark(self.order_isomorphic)}",
        ]
        out.extend(f"  mismatch: {m}" for m in self.mismatches)
        out.append(f"join-theorem: {mark(self.passed)}")
        return out


def verify_join_theorem(system: FiringSystem, c: ChipConfig, state_cap: int = DEFAULT_STATE_CAP,
                        config_poset: ConfigPoset | None = None) -> JoinTheoremReport:
    cp = config_poset if config_poset is not None else build_config_poset(system, c, state_cap)
    lattice = bool(is_lattice(cp.poset))
    if not lattice:
        return JoinTheoremReport(len(cp), 0, cp.odometer.moves, False, False, False)
    irreducibles = join_irreducibles(cp.poset)
    mp = build_move_poset(system, c, cp)

    to_move = {}
    mismatches = []
    for x in irreducibles:
        (k,) = available_sites(system, x)
        move = FiringMove(k, cp.mv[x][k] + 1)
        to_move[x] = move
        expected = mp.configs.get(move)
        if expected != x:
            mismatches.append(f"{move}: join-irreducible {x!r} vs only-move config {expected!r}")
    bijection = (not mismatches and len(set(to_move.values())) == len(to_move) == len(mp))
    iso = False
    if bijection:
        iso = embed_check(cp.poset.subposet(irreducibles), mp.poset, to_move)
    return JoinTheoremReport(len(cp), len(irreducibles), len(mp), lattice, bijection, iso, mismatches)
