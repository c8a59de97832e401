"""Text formats: configurations, graph files and poset diagrams.

Compact line notation writes the chip counts of consecutive sites as digits
with the origin fenced by underscores, so ``10_3_01`` is one chip at -2,
three at 0 and one at 2. Sparse notation is ``site:count`` tokens.
"""

from __future__ import annotations

import re
from typing import Callable

from .errors import ParseError
from .firing import ChipConfig, FiringSystem
from .order import FinitePoset

_COMPACT = re.compile(r"^(\d*)_(\d)_(\d*)$")
_SPARSE_TOKEN = re.compile(r"^(-?\d+):(-?\d+)$")


def parse_config(text: str, kind: str = "line") -> ChipConfig:
    """Parse compact (line only) or sparse notation into a canonical config."""
    stripped = text.strip()
    if kind not in ("line", "graph"):
        raise ValueError(f"unknown kind {kind!r}")
    m = _COMPACT.match(stripped)
    if m:
        if kind != "line":
            raise ParseError("compact notation is only defined on the line", 1, 1)
        left, mid, right = m.groups()
        counts = {}
        for i, ch in enumerate(left):
            counts[i - len(left)] = int(ch)
        counts[0] = int(mid)
        for i, ch in enumerate(right, 1):
            counts[i] = int(ch)
        return ChipConfig(counts)
    counts: dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines() or [""], 1):
        for tok in re.finditer(r"\S+", line):
            col = tok.start() + 1
            tm = _SPARSE_TOKEN.match(tok.group())
            if not tm:
                raise ParseError(f"expected site:count, got {tok.group()!r}", lineno, col)
            site, count = int(tm.group(1)), int(tm.group(2))
            if count < 0:
                raise ParseError(f"negative chip count {count}", lineno, col + len(tm.group(1)) + 1)
            if kind == "graph" and site < 0:
                raise ParseError(f"negative vertex id {site}", lineno, col)
            counts[site] = counts.get(site, 0) + count
    return ChipConfig(counts)


def compact(cfg: ChipConfig) -> str:
    """Compact notation; raises ``ValueError`` for counts above 9."""
    if any(c > 9 for _, c in cfg.items()):
        raise ValueError("compact notation needs single-digit counts")
    support = cfg.support()
    lo = min(support + (0,))
    hi = max(support + (0,))
    left = "".join(str(cfg[s]) for s in range(lo, 0))
    right = "".join(str(cfg[s]) for s in range(1, hi + 1))
    return f"{left}_{cfg[0]}_{right}"


def sparse(cfg: ChipConfig) -> str:
    return " ".join(f"{s}:{c}" for s, c in cfg.items())


def format_config(cfg: ChipConfig, system: FiringSystem | None = None) -> str:
    """Compact on the line when possible, sparse otherwise."""
    if (system is None or system.is_line) and all(c <= 9 for _, c in cfg.items()):
        return compact(cfg)
    return sparse(cfg)


def format_moves(vec) -> str:
    return " ".join(f"{s}:{c}" for s, c in vec.items())


# graph files -----------------------------------------------------------


def parse_graph(text: str) -> FiringSystem:
    """Read the ``graph``/``edge``/``sink`` line format.

    >>> parse_graph("graph 3\\nedge 0 1 2\\nsink 2").edges()
    [(0, 1, 2)]
    """
    vertex_count = None
    edges = []
    sinks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        words = line.split()
        if not words:
            continue
        col = line.index(words[0]) + 1
        head = words[0]
        try:
            nums = [int(w) for w in words[1:]]
        except ValueError:
            raise ParseError(f"non-integer argument in {line.strip()!r}", lineno, col) from None
        if head == "graph":
            if vertex_count is not None:
                raise ParseError("duplicate graph header", lineno, col)
            if len(nums) != 1 or nums[0] < 0:
                raise ParseError("expected 'graph <vertex_count>'", lineno, col)
            vertex_count = nums[0]
            continue
        if vertex_count is None:
            raise ParseError("missing 'graph <vertex_count>' header", lineno, col)
        if head == "edge":
            if len(nums) != 3:
                raise ParseError("expected 'edge <u> <v> <multiplicity>'", lineno, col)
            u, v, m = nums
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ParseError(f"vertex out of range in edge {u} {v}", lineno, col)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno, col)
            if m < 1:
                raise ParseError("edge multiplicity must be at least 1", lineno, col)
            edges.append((u, v, m))
        elif head == "sink":
            if len(nums) != 1 or not 0 <= nums[0] < vertex_count:
                raise ParseError("expected 'sink <v>' with v in range", lineno, col)
            sinks.append(nums[0])
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)
    if vertex_count is None:
        raise ParseError("missing 'graph <vertex_count>' header", 1, 1)
    return FiringSystem.multigraph(vertex_count, edges, sinks)


def format_graph(system: FiringSystem) -> str:
    lines = [f"graph {system.vertex_count}"]
    lines += [f"edge {u} {v} {m}" for u, v, m in system.edges()]
    lines += [f"sink {s}" for s in sorted(system.sinks)]
    return "\n".join(lines) + "\n"


# poset diagrams ----------------------------------------------------------


def _levels(p: FinitePoset, label: Callable, rank: Callable | None):
    rank_of = rank if rank is not None else p.depth.__getitem__
    names = {x: label(x) for x in p.elements}
    ranks = {x: rank_of(x) for x in p.elements}
    ordered = sorted(p.elements, key=lambda x: (ranks[x], names[x]))
    covers = sorted(((names[a], names[b]) for a, b in p.covers),
                    key=lambda e: (e[0], e[1]))
    return ordered, names, ranks, covers


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_poset(p: FinitePoset, fmt: str = "text", label: Callable = str, rank: Callable | None = None,
               name: str = "poset") -> str:
    """Render a Hasse diagram as ``text``, ``dot`` or ``tikz``.

    Elements are levelled by ``rank`` (default: depth below the maxima) and
    sorted by label within a level, so output is deterministic.
    """
    ordered, names, ranks, covers = _levels(p, label, rank)
    if fmt == "text":
        out = [f"# {name}: {len(ordered)} elements, {len(covers)} covers", "elements:"]
        out += [f"  {ranks[x]} {names[x]}" for x in ordered]
        out.append("covers:")
        out += [f"  {a} > {b}" for a, b in covers]
        return "\n".join(out) + "\n"
    if fmt == "dot":
        out = [f"digraph {_quote(name)} {{", "  rankdir=TB;", "  node [shape=plaintext];"]
        levels: dict[int, list] = {}
        for x in ordered:
            levels.setdefault(ranks[x], []).append(names[x])
        for r in sorted(levels):
            members = " ".join(_quote(n) + ";" for n in levels[r])
            out.append(f"  {{ rank=same; {members} }}")
        out += [f"  {_quote(a)} -> {_quote(b)};" for a, b in covers]
        out.append("}")
        return "\n".join(out) + "\n"
    if fmt == "tikz":
        coords = {}
        levels = {}
        for x in ordered:
            levels.setdefault(ranks[x], []).append(x)
        for r, xs in levels.items():
            for i, x in enumerate(xs):
                coords[names[x]] = (2 * i - (len(xs) - 1), -r)
        out = ["\\begin{tikzpicture}"]
        for x in ordered:
            cx, cy = coords[names[x]]
            out.append(f"\\filldraw[black]({cx},{cy}) circle(2 pt) node[right] {{{_tikz_label(names[x])}}};")
        for a, b in covers:
            (ax, ay), (bx, by) = coords[a], coords[b]
            out.append(f"\\draw[black]({ax},{ay}) -- ({bx},{by});")
        out.append("\\end{tikzpicture}")
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _tikz_label(text: str) -> str:
    m = _COMPACT.match(text)
    if m:
        left, mid, right = m.groups()
        return f"{left}\\underline{{{mid}}}{right}"
    m = re.match(r"^(-?\d+)\^(\d+)$", text)
    if m:
        return f"${m.group(1)}^{{{m.group(2)}}}$"
    return text
