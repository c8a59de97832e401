"""Firing systems, chip configurations and the basic firing dynamics.

Two kinds of firing system are supported: a finite multigraph with optional
sink vertices, and the infinite integer line where every site has the two
neighbours ``k - 1`` and ``k + 1``. Sites are plain integers in both cases.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import IllegalAt, NotFireable, StepCapExceeded, Unreachable

DEFAULT_STEP_CAP = 10**6


class _SparseCounts(Mapping):
    """Immutable finite-support map from sites to nonnegative integers.

    Zero entries are dropped and keys kept sorted, so equality and hashing are
    structural. Missing sites read as 0.
    """

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, data=()):
        if isinstance(data, Mapping):
            data = data.items()
        merged: dict[int, int] = {}
        for site, count in data:
            if not isinstance(count, int) or count < 0:
                raise ValueError(f"negative or non-integer count {count!r} at site {site}")
            if count:
                merged[site] = merged.get(site, 0) + count
        self._items = tuple(sorted(merged.items()))
        self._map = dict(self._items)
        self._hash = hash((type(self).__name__, self._items))

    @classmethod
    def _trusted(cls, mapping: dict):
        # mapping already validated and zero-free
        obj = cls.__new__(cls)
        obj._items = tuple(sorted(mapping.items()))
        obj._map = dict(obj._items)
        obj._hash = hash((cls.__name__, obj._items))
        return obj

    def __getitem__(self, site):
        return self._map.get(site, 0)

    def __contains__(self, site):
        return site in self._map

    def __iter__(self):
        return (site for site, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if type(other) is type(self):
            return self._items == other._items
        return NotImplemented

    def __repr__(self):
        body = ", ".join(f"{s}: {c}" for s, c in self._items)
        return f"{type(self).__name__}({{{body}}})"

    def items(self):
        return self._items

    def support(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self._items)

    def total(self) -> int:
        return sum(c for _, c in self._items)


class ChipConfig(_SparseCounts):
    __slots__ = ()

    @property
    def total_chips(self) -> int:
        return self.total()

    def restrict(self, sites: Iterable[int]) -> "ChipConfig":
        keep = set(sites)
        return ChipConfig._trusted({s: c for s, c in self._items if s in keep})


class MoveVector(_SparseCounts):
    """Per-site firing counts (an odometer reading).

    Moves at one site are totally ordered, so the componentwise order on move
    vectors is exactly containment of the underlying move sets.
    """

    __slots__ = ()

    def __le__(self, other: "MoveVector") -> bool:
        return all(other[s] >= c for s, c in self._items)

    def __ge__(self, other: "MoveVector") -> bool:
        return other <= self

    def __lt__(self, other):
        return self <= other and self != other

    def __gt__(self, other):
        return other < self

    @property
    def moves(self) -> int:
        return self.total()

    def meet(self, other: "MoveVector") -> "MoveVector":
        """Componentwise minimum (intersection of move sets)."""
        return MoveVector({s: min(c, other[s]) for s, c in self._items})

    def union(self, other: "MoveVector") -> "MoveVector":
        """Componentwise maximum (union of move sets)."""
        sites = set(self) | set(other)
        return MoveVector({s: max(self[s], other[s]) for s in sites})

    @classmethod
    def of_sequence(cls, seq: Iterable[int]) -> "MoveVector":
        counts: dict[int, int] = {}
        for s in seq:
            counts[s] = counts.get(s, 0) + 1
        return cls(counts)


@dataclass(frozen=True)
class FiringSystem:
    """Where chips live and how a firing disperses them.

    Build with :meth:`line` or :meth:`multigraph` rather than directly.
    """

    kind: str
    vertex_count: int = 0
    # adjacency[v] = ((u, m(v, u)), ...) sorted by u
    adjacency: tuple = ()
    sinks: frozenset = frozenset()
    _degree: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def line(cls) -> "FiringSystem":
        return cls(kind="line")

    @classmethod
    def multigraph(cls, vertex_count: int, edges: Iterable[tuple[int, int, int]] = (), sinks: Iterable[int] = ()) -> "FiringSystem":
        """Edges are ``(u, v, multiplicity)``; repeated pairs add up."""
        if vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        mult: dict[tuple[int, int], int] = {}
        for u, v, m in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if m < 0:
                raise ValueError("edge multiplicity must be nonnegative")
            if m == 0:
                continue
            key = (min(u, v), max(u, v))
            mult[key] = mult.get(key, 0) + m
        adj: list[dict[int, int]] = [{} for _ in range(vertex_count)]
        for (u, v), m in mult.items():
            adj[u][v] = m
            adj[v][u] = m
        sink_set = frozenset(sinks)
        for s in sink_set:
            if not 0 <= s < vertex_count:
                raise ValueError(f"sink {s} out of range")
        adjacency = tuple(tuple(sorted(a.items())) for a in adj)
        degree = tuple(sum(m for _, m in a) for a in adjacency)
        return cls(kind="multigraph", vertex_count=vertex_count, adjacency=adjacency,
                   sinks=sink_set, _degree=degree)

    @property
    def is_line(self) -> bool:
        return self.kind == "line"

    def edges(self) -> list[tuple[int, int, int]]:
        return [(u, v, m) for u, nbrs in enumerate(self.adjacency) for v, m in nbrs if u < v]

    def multiplicity(self, u: int, v: int) -> int:
        if self.is_line:
            return 1 if abs(u - v) == 1 else 0
        return dict(self.adjacency[u]).get(v, 0)

    def neighbors(self, site: int):
        if self.is_line:
            return ((site - 1, 1), (site + 1, 1))
        return self.adjacency[site]

    def threshold(self, site: int) -> int:
        return 2 if self.is_line else self._degree[site]

    def can_fire_site(self, site: int) -> bool:
        """Whether ``site`` is ever eligible to fire (ignores chip counts)."""
        if self.is_line:
            return True
        # isolated vertices would fire with zero chips forever; treat as inert
        return site not in self.sinks and self._degree[site] > 0

    def sites(self) -> range:
        if self.is_line:
            raise ValueError("the line has infinitely many sites")
        return range(self.vertex_count)

    def validate(self, cfg: ChipConfig) -> None:
        if not self.is_line:
            for s in cfg:
                if not 0 <= s < self.vertex_count:
                    raise ValueError(f"site {s} is not a vertex of this graph")


def available_sites(system: FiringSystem, cfg: ChipConfig) -> frozenset[int]:
    """Sites that may fire in ``cfg``; empty exactly when ``cfg`` is stable."""
    # only occupied sites can reach a positive threshold
    return frozenset(s for s, c in cfg.items()
                     if system.can_fire_site(s) and c >= system.threshold(s))


def is_stable(system: FiringSystem, cfg: ChipConfig) -> bool:
    return not available_sites(system, cfg)


def fire(system: FiringSystem, cfg: ChipConfig, k: int) -> ChipConfig:
    if not system.can_fire_site(k):
        raise NotFireable(k, "site never fires (sink or isolated)")
    have = cfg[k]
    need = system.threshold(k)
    if have < need:
        raise NotFireable(k, f"has {have} chips, needs {need}")
    new = dict(cfg.items())
    left = have - need
    if left:
        new[k] = left
    else:
        del new[k]
    for u, m in system.neighbors(k):
        new[u] = new.get(u, 0) + m
    return ChipConfig._trusted(new)


def replay(system: FiringSystem, cfg: ChipConfig, seq: Sequence[int]) -> ChipConfig:
    for i, site in enumerate(seq):
        try:
            cfg = fire(system, cfg, site)
        except NotFireable:
            raise IllegalAt(i, site) from None
    return cfg


# firing-order policies: choose one site from a sorted tuple of available sites

Policy = Callable[[tuple], int]


def lowest_first(available: tuple) -> int:
    return available[0]


def highest_first(available: tuple) -> int:
    return available[-1]


def seeded_random(seed) -> Policy:
    rng = random.Random(seed)

    def choose(available: tuple) -> int:
        return rng.choice(available)

    return choose


def make_policy(policy="lowest", seed=None) -> Policy:
    """Resolve ``"lowest"``, ``"highest"`` or ``"random"`` (with ``seed``) to a policy.

    A callable is passed through untouched.
    """
    if callable(policy):
        return policy
    if policy == "lowest":
        return lowest_first
    if policy == "highest":
        return highest_first
    if policy == "random":
        return seeded_random(seed)
    raise ValueError(f"unknown policy {policy!r}")


def run(system: FiringSystem, cfg: ChipConfig, policy: Policy, step_cap: int = DEFAULT_STEP_CAP,
        until: Callable[[int, dict], bool] | None = None, exclude: frozenset = frozenset()):
    """Fire policy-chosen sites, returning ``(config, sequence)``.

    Stops when nothing outside ``exclude`` can fire, or as soon as
    ``until(site, counts)`` returns true after a firing.
    """
    seq: list[int] = []
    counts: dict[int, int] = {}
    while True:
        avail = tuple(sorted(available_sites(system, cfg) - exclude))
        if not avail:
            return cfg, seq
        if len(seq) >= step_cap:
            raise StepCapExceeded(step_cap)
        site = policy(avail)
        cfg = fire(system, cfg, site)
        seq.append(site)
        counts[site] = counts.get(site, 0) + 1
        if until is not None and until(site, counts):
            return cfg, seq


def stabilize(system: FiringSystem, cfg: ChipConfig, policy="lowest", step_cap: int = DEFAULT_STEP_CAP,
              seed=None) -> tuple[ChipConfig, MoveVector]:
    """Fire to exhaustion; returns the stable configuration and the odometer."""
    system.validate(cfg)
    final, seq = run(system, cfg, make_policy(policy, seed), step_cap)
    return final, MoveVector.of_sequence(seq)


def odometer(system: FiringSystem, cfg: ChipConfig, step_cap: int = DEFAULT_STEP_CAP) -> MoveVector:
    return stabilize(system, cfg, step_cap=step_cap)[1]


def _successor_map(system, c0, poset):
    if poset is not None:
        return poset.successors
    # local exploration when no poset is supplied
    succ: dict[ChipConfig, dict[int, ChipConfig]] = {}
    queue = deque([c0])
    succ[c0] = {}
    while queue:
        cur = queue.popleft()
        for s in sorted(available_sites(system, cur)):
            nxt = fire(system, cur, s)
            succ[cur][s] = nxt
            if nxt not in succ:
                succ[nxt] = {}
                queue.append(nxt)
        if len(succ) > DEFAULT_STEP_CAP:
            raise StepCapExceeded(DEFAULT_STEP_CAP)
    return succ


def mv_vector(system: FiringSystem, c0: ChipConfig, c1: ChipConfig, poset=None) -> MoveVector:
    """Firing counts along any path from ``c0`` to ``c1``.

    ``poset`` may be a :class:`~chipfire.posets.ConfigPoset` containing both
    configurations; without one, reachability from ``c0`` is explored here.
    Two paths (lowest-site-first and highest-site-first greedy walks) are
    compared and must agree.
    """
    succ = _successor_map(system, c0, poset)
    if c0 not in succ:
        raise Unreachable(f"{c0!r} is not in the supplied poset")

    forward = {c0}
    queue = deque([c0])
    while queue:
        cur = queue.popleft()
        for nxt in succ[cur].values():
            if nxt not in forward:
                forward.add(nxt)
                queue.append(nxt)
    if c1 not in forward:
        raise Unreachable(f"{c1!r} is not reachable from {c0!r}")

    pred: dict[ChipConfig, list[ChipConfig]] = {}
    for cur in forward:
        for nxt in succ[cur].values():
            pred.setdefault(nxt, []).append(cur)
    leads = {c1}
    queue = deque([c1])
    while queue:
        cur = queue.popleft()
        for p in pred.get(cur, ()):
            if p not in leads:
                leads.add(p)
                queue.append(p)

    def walk(pick):
        cur, seq = c0, []
        while cur != c1:
            options = sorted(s for s, nxt in succ[cur].items() if nxt in leads)
            site = pick(options)
            seq.append(site)
            cur = succ[cur][site]
        return MoveVector.of_sequence(seq)

    low, high = walk(lowest_first), walk(highest_first)
    if low != high:
        raise AssertionError(f"path-dependent move vector: {low!r} vs {high!r}")
    return low


def random_sink_graph(rng: random.Random, max_vertices: int = 5, max_chips: int = 8,
                      min_vertices: int = 2, max_multiplicity: int = 2) -> tuple[FiringSystem, ChipConfig]:
    """A connected multigraph with at least one sink and a chip configuration.

    Connectivity to a sink guarantees the game terminates. Multiplicities lean
    toward 1 and chips go on non-sink vertices so that games are not trivial.
    """
    n = rng.randint(min_vertices, max_vertices)
    weights = [1] * 3 + list(range(2, max_multiplicity + 1))
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v, rng.choice(weights)))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.25:
                edges.append((u, v, rng.choice(weights)))
    sinks = rng.sample(range(n), 1 if n < 4 or rng.random() < 0.7 else 2)
    system = FiringSystem.multigraph(n, edges, sinks)
    total = rng.randint(max(1, max_chips // 2), max_chips)
    active = [v for v in range(n) if v not in system.sinks]
    counts: dict[int, int] = {}
    for _ in range(total):
        v = rng.choice(active)
        counts[v] = counts.get(v, 0) + 1
    return system, ChipConfig(counts)
