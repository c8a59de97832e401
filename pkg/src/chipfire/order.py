"""Finite posets and lattices.

Orientation follows the firing convention used throughout the package:
"greater" means "earlier". A configuration poset has the initial
configuration as its maximum and covers point downward along firings.

Internally every poset indexes its elements in a topological order with
maxima first and keeps, for each element, bitmasks (Python ints) of its
down-set and up-set. Meets and joins then reduce to a couple of integer
operations.
"""

from __future__ import annotations

from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import (
    CapExceeded,
    NoLowerBound,
    NotALattice,
    NotBijective,
    NoUpperBound,
    SizeCapExceeded,
)

DEFAULT_IDEAL_CAP = 10**6


class Verdict(NamedTuple):
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """A finite poset given by its elements and cover pairs ``(upper, lower)``.

    The cover relation must be acyclic and transitively reduced; use
    :meth:`from_relation` to start from an arbitrary order relation.
    """

    def __init__(self, elements: Iterable[Hashable], covers: Iterable[tuple] = ()):
        self.elements: tuple = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate poset elements")
        n = len(self.elements)
        lower = [set() for _ in range(n)]
        upper = [set() for _ in range(n)]
        for a, b in covers:
            i, j = self.index[a], self.index[b]
            if i == j:
                raise ValueError(f"reflexive cover pair at {a!r}")
            lower[i].add(j)
            upper[j].add(i)
        self._lower = [tuple(sorted(s)) for s in lower]
        self._upper = [tuple(sorted(s)) for s in upper]

        # Kahn's algorithm from the maxima downward
        indeg = [len(u) for u in self._upper]
        stack = [i for i in range(n) if indeg[i] == 0]
        stack.reverse()
        topo: list[int] = []
        while stack:
            i = stack.pop()
            topo.append(i)
            for j in reversed(self._lower[i]):
                indeg[j] -= 1
                if indeg[j] == 0:
                    stack.append(j)
        if len(topo) != n:
            raise ValueError("cover relation has a cycle")
        self._topo = topo
        self._pos = [0] * n
        for p, i in enumerate(topo):
            self._pos[i] = p

        # bit p of a mask refers to element topo[p]
        down = [0] * n
        for i in reversed(topo):
            m = 1 << self._pos[i]
            for j in self._lower[i]:
                m |= down[j]
            down[i] = m
        up = [0] * n
        for i in topo:
            m = 1 << self._pos[i]
            for j in self._upper[i]:
                m |= up[j]
            up[i] = m
        self._down = down
        self._up = up

        for i in range(n):
            for j in self._lower[i]:
                for k in self._lower[i]:
                    if k != j and (down[k] >> self._pos[j]) & 1:
                        raise ValueError(
                            f"cover ({self.elements[i]!r}, {self.elements[j]!r}) is implied transitively")

    @classmethod
    def from_relation(cls, elements: Iterable[Hashable], greater_pairs: Iterable[tuple]) -> "FinitePoset":
        """Build from any set of pairs ``(x, y)`` meaning ``x > y``.

        The pairs are closed transitively and then reduced to covers.
        """
        elements = tuple(elements)
        index = {x: i for i, x in enumerate(elements)}
        n = len(elements)
        succ = [0] * n
        for a, b in greater_pairs:
            i, j = index[a], index[b]
            if i != j:
                succ[i] |= 1 << j
        # transitive closure by repeated propagation over a topological order
        order = _toposort_masks(succ)
        closure = [0] * n
        for i in reversed(order):
            m = succ[i]
            for j in _bits(succ[i]):
                m |= closure[j]
            closure[i] = m
        covers = []
        for i in range(n):
            strict = closure[i]
            implied = 0
            for j in _bits(strict):
                implied |= closure[j]
            for j in _bits(strict & ~implied):
                covers.append((elements[i], elements[j]))
        return cls(elements, covers)

    @classmethod
    def from_leq(cls, elements: Iterable[Hashable], leq: Callable[[object, object], bool]) -> "FinitePoset":
        elements = tuple(elements)
        pairs = [(x, y) for x in elements for y in elements if x != y and leq(y, x)]
        return cls.from_relation(elements, pairs)

    # basic queries -----------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"FinitePoset({len(self)} elements, {len(self.covers)} covers)"

    @cached_property
    def covers(self) -> tuple:
        return tuple((self.elements[i], self.elements[j])
                     for i in range(len(self)) for j in self._lower[i])

    def lower_covers(self, x) -> tuple:
        return tuple(self.elements[j] for j in self._lower[self.index[x]])

    def upper_covers(self, x) -> tuple:
        return tuple(self.elements[j] for j in self._upper[self.index[x]])

    def leq(self, x, y) -> bool:
        """``x <= y`` (``x`` is reachable from ``y``)."""
        return bool((self._down[self.index[y]] >> self._pos[self.index[x]]) & 1)

    def leq_matrix(self) -> np.ndarray:
        """Boolean matrix ``M[i, j] = elements[i] <= elements[j]``."""
        n = len(self)
        nbytes = max(1, (n + 7) // 8)
        rows = np.zeros((n, n), dtype=bool)
        for j in range(n):
            raw = np.frombuffer(self._down[j].to_bytes(nbytes, "little"), dtype=np.uint8)
            rows[j] = np.unpackbits(raw, bitorder="little")[:n]
        # rows[j, pos] is set when the element at topological position pos lies below j
        return rows[:, self._pos].T

    def geq(self, x, y) -> bool:
        return self.leq(y, x)

    def _mask_elements(self, mask: int) -> list:
        return [self.elements[self._topo[p]] for p in _bits(mask)]

    def down_set(self, x) -> list:
        return self._mask_elements(self._down[self.index[x]])

    def up_set(self, x) -> list:
        return self._mask_elements(self._up[self.index[x]])

    def maximal(self) -> list:
        return [x for i, x in enumerate(self.elements) if not self._upper[i]]

    def minimal(self) -> list:
        return [x for i, x in enumerate(self.elements) if not self._lower[i]]

    @cached_property
    def depth(self) -> dict:
        """Longest chain length from a maximal element down to each element."""
        d = [0] * len(self)
        for i in self._topo:
            for j in self._lower[i]:
                d[j] = max(d[j], d[i] + 1)
        return {self.elements[i]: d[i] for i in range(len(self))}

    def subposet(self, subset: Iterable) -> "FinitePoset":
        """Induced order on ``subset`` (kept in the poset's element order)."""
        keep = set(subset)
        elems = [x for x in self.elements if x in keep]
        pairs = [(x, y) for x in elems for y in elems if x != y and self.leq(y, x)]
        return FinitePoset.from_relation(elems, pairs)

    # meets and joins on indices ------------------------------------------

    def _meet_idx(self, i: int, j: int) -> int | None:
        lb = self._down[i] & self._down[j]
        if not lb:
            raise NoLowerBound(f"{self.elements[i]!r} and {self.elements[j]!r} have no common lower bound")
        # the greatest lower bound, if any, comes first in the topological order
        g = self._topo[(lb & -lb).bit_length() - 1]
        return g if self._down[g] == lb else None

    def _join_idx(self, i: int, j: int) -> int | None:
        ub = self._up[i] & self._up[j]
        if not ub:
            raise NoUpperBound(f"{self.elements[i]!r} and {self.elements[j]!r} have no common upper bound")
        g = self._topo[ub.bit_length() - 1]
        return g if self._up[g] == ub else None

    def meet(self, x, y):
        """Greatest lower bound, ``None`` if lower bounds exist but none is greatest."""
        g = self._meet_idx(self.index[x], self.index[y])
        return None if g is None else self.elements[g]

    def join(self, x, y):
        """Least upper bound, ``None`` if upper bounds exist but none is least."""
        g = self._join_idx(self.index[x], self.index[y])
        return None if g is None else self.elements[g]

    @cached_property
    def _tables(self):
        n = len(self)
        meet = np.full((n, n), -1, dtype=np.int64)
        join = np.full((n, n), -1, dtype=np.int64)
        bad = None
        for i in range(n):
            meet[i, i] = join[i, i] = i
            for j in range(i + 1, n):
                try:
                    m = self._meet_idx(i, j)
                except NoLowerBound:
                    m = None
                try:
                    jn = self._join_idx(i, j)
                except NoUpperBound:
                    jn = None
                if m is None or jn is None:
                    if bad is None:
                        bad = (self.elements[i], self.elements[j])
                    continue
                meet[i, j] = meet[j, i] = m
                join[i, j] = join[j, i] = jn
        return meet, join, bad

    def meet_table(self) -> np.ndarray:
        """Index table of meets; requires a lattice."""
        meet, _, bad = self._tables
        if bad is not None:
            raise NotALattice(bad)
        return meet

    def join_table(self) -> np.ndarray:
        _, join, bad = self._tables
        if bad is not None:
            raise NotALattice(bad)
        return join


def _toposort_masks(succ: list[int]) -> list[int]:
    n = len(succ)
    indeg = [0] * n
    for i in range(n):
        for j in _bits(succ[i]):
            indeg[j] += 1
    stack = [i for i in range(n) if indeg[i] == 0]
    order = []
    while stack:
        i = stack.pop()
        order.append(i)
        for j in _bits(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                stack.append(j)
    if len(order) != n:
        raise ValueError("relation has a cycle")
    return order


def meet(p: FinitePoset, x, y):
    return p.meet(x, y)


def join(p: FinitePoset, x, y):
    return p.join(x, y)


def is_lattice(p: FinitePoset) -> Verdict:
    """Every pair has a meet and a join. The witness is the first failing pair."""
    *_, bad = p._tables
    return Verdict(bad is None, bad)


def _require_lattice(p: FinitePoset) -> None:
    ok, pair = is_lattice(p)
    if not ok:
        raise NotALattice(pair)


def join_irreducibles(p: FinitePoset) -> list:
    """Elements with exactly one lower cover, in element order."""
    _require_lattice(p)
    return [x for i, x in enumerate(p.elements) if len(p._lower[i]) == 1]


def meet_irreducibles(p: FinitePoset) -> list:
    _require_lattice(p)
    return [x for i, x in enumerate(p.elements) if len(p._upper[i]) == 1]


def is_distributive(p: FinitePoset, birkhoff: bool = True) -> Verdict:
    """Check ``x ∧ (y ∨ z) == (x ∧ y) ∨ (x ∧ z)`` for every triple.

    On failure the witness is the lexicographically first ``(x, y, z)`` by
    element order. A positive verdict is cross-checked against the ideal
    lattice of the join-irreducibles unless ``birkhoff`` is false.
    """
    _require_lattice(p)
    meet_t = p.meet_table().astype(np.int32)
    join_t = p.join_table().astype(np.int32)
    for x in range(len(p)):
        mx = meet_t[x]
        lhs = mx[join_t]
        rhs = join_t[mx[:, None], mx[None, :]]
        bad = lhs != rhs
        if bad.any():
            y, z = np.argwhere(bad)[0]
            return Verdict(False, (p.elements[x], p.elements[int(y)], p.elements[int(z)]))
    if birkhoff and not birkhoff_check(p):
        raise AssertionError("distributive lattice failed the join-irreducible ideal cross-check")
    return Verdict(True, None)


def birkhoff_check(p: FinitePoset) -> bool:
    """Whether ``x ↦ {join-irreducibles below x}`` is an isomorphism onto the
    ideal lattice of the join-irreducible subposet."""
    irr = join_irreducibles(p)
    sub = p.subposet(irr)
    ideals, ideal_lattice = order_ideals(sub)
    if len(ideals) != len(p):
        return False
    image = {x: frozenset(j for j in irr if p.leq(j, x)) for x in p.elements}
    if set(image.values()) != set(ideals):
        return False
    return embed_check(p, ideal_lattice, image)


def _is_boolean_interval(p: FinitePoset, top: int, atoms: Sequence[int], bottom: int, dual: bool) -> bool:
    """Is ``[bottom, top]`` the Boolean lattice generated by ``atoms``?

    ``atoms`` are the covers of ``top`` (lower covers normally, upper covers
    when ``dual``); ``bottom`` is their meet (join when ``dual``).
    """
    down, up, pos = p._down, p._up, p._pos
    if dual:
        top, bottom = bottom, top
    interval = down[top] & up[bottom]
    members = [p._topo[q] for q in _bits(interval)]
    k = len(atoms)
    if len(members) != 1 << k:
        return False
    # signature of i: the atoms it lies below (or above, when dual)
    if dual:
        sig = {i: frozenset(a for a in atoms if (down[i] >> pos[a]) & 1) for i in members}
    else:
        sig = {i: frozenset(a for a in atoms if (down[a] >> pos[i]) & 1) for i in members}
    if len(set(sig.values())) != len(members):
        return False
    for i in members:
        for j in members:
            le = bool((down[j] >> pos[i]) & 1)  # i <= j
            if le != (sig[i] <= sig[j] if dual else sig[i] >= sig[j]):
                return False
    return True


def is_uld(p: FinitePoset, orientation: str = "lower") -> Verdict:
    """Local distributivity check.

    With ``orientation="lower"`` (the default, matching the firing order where
    simultaneous firings lie below a configuration) every element with lower
    covers ``D`` must have ``[meet(D), x]`` Boolean on ``|D|`` atoms.
    ``orientation="upper"`` checks the dual statement with upper covers and
    their join. The witness is the first failing element.
    """
    if orientation not in ("lower", "upper"):
        raise ValueError("orientation must be 'lower' or 'upper'")
    _require_lattice(p)
    dual = orientation == "upper"
    for i, x in enumerate(p.elements):
        atoms = p._upper[i] if dual else p._lower[i]
        if not atoms:
            continue
        bound = atoms[0]
        for a in atoms[1:]:
            bound = p._join_idx(bound, a) if dual else p._meet_idx(bound, a)
        if not _is_boolean_interval(p, i, atoms, bound, dual):
            return Verdict(False, x)
    return Verdict(True, None)


def order_ideals(p: FinitePoset, cap: int = DEFAULT_IDEAL_CAP) -> tuple[list[frozenset], FinitePoset]:
    """All down-closed subsets of ``p`` and their containment lattice.

    Ideals are listed largest first (breadth-first from the whole poset), and
    the returned lattice has larger ideals above smaller ones.
    """
    full = (1 << len(p)) - 1
    seen = {full: 0}
    order = [full]
    cover_pairs = []
    head = 0
    while head < len(order):
        ideal = order[head]
        head += 1
        # removable = maximal elements of the ideal
        for q in _bits(ideal):
            above = p._up[p._topo[q]] & ~(1 << q)
            if above & ideal:
                continue
            smaller = ideal & ~(1 << q)
            if smaller not in seen:
                if len(order) >= cap:
                    raise SizeCapExceeded(cap)
                seen[smaller] = len(order)
                order.append(smaller)
            cover_pairs.append((ideal, smaller))
    as_set = {m: frozenset(p._mask_elements(m)) for m in order}
    ideals = [as_set[m] for m in order]
    lattice = FinitePoset(ideals, [(as_set[a], as_set[b]) for a, b in cover_pairs])
    return ideals, lattice


def count_order_ideals(p: FinitePoset) -> int:
    return len(order_ideals(p)[0])


def linear_extensions(p: FinitePoset, cap: int | None = None, key: Callable | None = None) -> Iterator[tuple]:
    """Yield every linear extension, greatest elements first.

    Candidates at each step are tried in element order, or sorted by ``key``
    when given, so enumeration is deterministic. Raises ``CapExceeded`` when
    more than ``cap`` extensions would be produced.
    """
    n = len(p)
    rank = list(range(n)) if key is None else sorted(range(n), key=lambda i: key(p.elements[i]))
    # strict up-set of each element, as index bitmasks
    need = [0] * n
    for i in range(n):
        for j in p._upper[i]:
            need[i] |= 1 << j
    placed = 0
    seq: list = []
    produced = 0

    def rec():
        nonlocal placed, produced
        if len(seq) == n:
            produced += 1
            if cap is not None and produced > cap:
                raise CapExceeded(cap)
            yield tuple(seq)
            return
        for i in rank:
            bit = 1 << i
            if placed & bit or (need[i] & ~placed):
                continue
            placed |= bit
            seq.append(p.elements[i])
            yield from rec()
            seq.pop()
            placed &= ~bit

    yield from rec()


def count_linear_extensions(p: FinitePoset) -> int:
    """Number of linear extensions, by dynamic programming over up-sets."""
    n = len(p)
    need = [0] * n
    for i in range(n):
        for j in p._upper[i]:
            need[i] |= 1 << j
    full = (1 << n) - 1
    memo = {full: 1}

    stack = [(0, False)]
    while stack:
        placed, expanded = stack.pop()
        if placed in memo:
            continue
        nxt = [placed | (1 << i) for i in range(n)
               if not placed >> i & 1 and not need[i] & ~placed]
        if expanded:
            memo[placed] = sum(memo[m] for m in nxt)
        else:
            stack.append((placed, True))
            stack.extend((m, False) for m in nxt if m not in memo)
    return memo[0]


def is_linear_extension(p: FinitePoset, seq: Sequence) -> bool:
    if len(seq) != len(p) or set(seq) != set(p.elements):
        return False
    where = {x: i for i, x in enumerate(seq)}
    return all(where[a] < where[b] for a, b in p.covers)


def embed_check(p: FinitePoset, q: FinitePoset, bijection) -> bool:
    """``x >= y`` in ``p`` iff ``f(x) >= f(y)`` in ``q``, for the given map.

    ``bijection`` is a mapping or a callable from elements of ``p`` to
    elements of ``q``.
    """
    f = bijection if callable(bijection) else bijection.__getitem__
    try:
        image = [f(x) for x in p.elements]
    except KeyError as exc:
        raise NotBijective(f"no image for {exc.args[0]!r}") from None
    if len(set(image)) != len(image) or len(image) != len(q) or any(y not in q for y in image):
        raise NotBijective("map is not a bijection between the two element sets")
    perm = np.fromiter((q.index[y] for y in image), dtype=np.int64, count=len(image))
    return bool(np.array_equal(p.leq_matrix(), q.leq_matrix()[np.ix_(perm, perm)]))


def chain(k: int) -> FinitePoset:
    """``k``-element chain ``k-1 > ... > 0``."""
    return FinitePoset(range(k), [(i + 1, i) for i in range(k - 1)])


def antichain(k: int) -> FinitePoset:
    return FinitePoset(range(k))


def boolean_lattice(atoms: int) -> FinitePoset:
    """Subsets of ``range(atoms)`` ordered by containment, as frozensets."""
    elems = [frozenset(i for i in range(atoms) if m >> i & 1) for m in range(1 << atoms)]
    covers = [(s, s - {i}) for s in elems for i in s]
    return FinitePoset(elems, covers)
