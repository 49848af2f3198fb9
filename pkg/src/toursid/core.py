"""Pattern-side objects: oriented paths, cycles, trees, and small digraphs.

Edge directions are stored as +1 (forward, '>') or -1 (backward, '<')
relative to the left-to-right reference on paths and the clockwise reference
on cycles.  With this encoding the sign of a directed-subpath window is just
the product of its entries, which the signed-counting module leans on.

All values are immutable and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    EmptyInput,
    InvalidCharacter,
    OddLength,
    TooShort,
)

FORWARD = 1
BACKWARD = -1

_CHAR_TO_DIR = {">": FORWARD, "R": FORWARD, "<": BACKWARD, "L": BACKWARD}
_DIR_TO_CHAR = {FORWARD: ">", BACKWARD: "<"}


@dataclass(frozen=True)
class Orientation:
    """A sequence of edge directions, length >= 1."""

    dirs: tuple[int, ...]

    def __post_init__(self):
        if len(self.dirs) < 1:
            raise EmptyInput("orientation needs at least one edge")
        if any(d not in (FORWARD, BACKWARD) for d in self.dirs):
            raise ValueError("directions must be +1 or -1")

    @property
    def e(self) -> int:
        return len(self.dirs)

    @property
    def v(self) -> int:
        return len(self.dirs) + 1

    def flipped(self) -> "Orientation":
        """Reverse every arrow (digraph reversal)."""
        return Orientation(tuple(-d for d in self.dirs))

    def reversed_path(self) -> "Orientation":
        """Read the same oriented path from the other end (same digraph)."""
        return Orientation(tuple(-d for d in reversed(self.dirs)))

    def __str__(self) -> str:
        return "".join(_DIR_TO_CHAR[d] for d in self.dirs)


def parse_orientation(text: str) -> Orientation:
    """Parse '>'/'<' (aliases 'R'/'L') into an Orientation."""
    if not text:
        raise EmptyInput("orientation string is empty")
    dirs = []
    for pos, ch in enumerate(text):
        if ch not in _CHAR_TO_DIR:
            raise InvalidCharacter(pos, ch)
        dirs.append(_CHAR_TO_DIR[ch])
    return Orientation(tuple(dirs))


def format_orientation(o: Orientation) -> str:
    return str(o)


def as_orientation(o) -> Orientation:
    """Coerce a str or Orientation to Orientation."""
    if isinstance(o, Orientation):
        return o
    return parse_orientation(o)


@dataclass(frozen=True)
class OrientedPath:
    """An oriented path on vertices 0..e with the given edge directions."""

    orientation: Orientation

    @property
    def e(self) -> int:
        return self.orientation.e

    @property
    def v(self) -> int:
        return self.orientation.v


@dataclass(frozen=True)
class OrientedCycle:
    """An oriented cycle: edge i joins vertices i and i+1 (mod length).

    Directions are recorded relative to the clockwise reference cycle, so
    the flip count t (number of backward entries) is intrinsic.
    """

    orientation: Orientation

    def __post_init__(self):
        if self.orientation.e < 3:
            raise TooShort("a cycle needs length >= 3")

    @property
    def length(self) -> int:
        return self.orientation.e

    @property
    def flips(self) -> int:
        return sum(1 for d in self.orientation.dirs if d == BACKWARD)

    def subdivided(self, k: int) -> "OrientedCycle":
        """Replace each edge by k edges in the same direction."""
        if k < 1:
            raise ValueError("k must be >= 1")
        dirs = tuple(d for d in self.orientation.dirs for _ in range(k))
        return OrientedCycle(Orientation(dirs))


def as_cycle(c) -> OrientedCycle:
    if isinstance(c, OrientedCycle):
        return c
    return OrientedCycle(as_orientation(c))


@dataclass(frozen=True)
class Digraph:
    """An oriented graph: no loops, no digons."""

    v: int
    arcs: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.v < 1:
            raise ValueError("need at least one vertex")
        for u, w in self.arcs:
            if u == w:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.v and 0 <= w < self.v):
                raise ValueError(f"arc ({u},{w}) out of range")
            if (w, u) in self.arcs:
                raise ValueError(f"digon between {u} and {w}")

    @property
    def e(self) -> int:
        return len(self.arcs)

    def underlying_edges(self) -> set[frozenset[int]]:
        return {frozenset(a) for a in self.arcs}


def digraph(v: int, arcs) -> Digraph:
    return Digraph(v, frozenset(tuple(a) for a in arcs))


def path_digraph(o) -> Digraph:
    """The oriented path as a digraph on vertices 0..e."""
    o = as_orientation(o)
    arcs = []
    for i, d in enumerate(o.dirs):
        arcs.append((i, i + 1) if d == FORWARD else (i + 1, i))
    return digraph(o.v, arcs)


def cycle_digraph(c) -> Digraph:
    c = as_cycle(c)
    ell = c.length
    arcs = []
    for i, d in enumerate(c.orientation.dirs):
        j = (i + 1) % ell
        arcs.append((i, j) if d == FORWARD else (j, i))
    return digraph(ell, arcs)


def directed_path_digraph(edges: int) -> Digraph:
    """The all-forward path with the given number of edges."""
    return path_digraph(Orientation(tuple([FORWARD] * edges)))


def subdivide(d: Digraph, k: int) -> Digraph:
    """Replace each arc by a k-edge directed path through k-1 fresh vertices."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return d
    arcs = []
    nxt = d.v
    for u, w in sorted(d.arcs):
        chain = [u] + list(range(nxt, nxt + k - 1)) + [w]
        nxt += k - 1
        arcs.extend((chain[i], chain[i + 1]) for i in range(k))
    return digraph(nxt, arcs)


def alternating_cycle(two_ell: int) -> OrientedCycle:
    """The cycle of even length with alternating edge directions."""
    if two_ell % 2 != 0:
        raise OddLength("alternating cycle needs even length")
    if two_ell < 4:
        raise TooShort("alternating cycle needs length >= 4")
    dirs = tuple(FORWARD if i % 2 == 0 else BACKWARD for i in range(two_ell))
    return OrientedCycle(Orientation(dirs))


def disjoint_union(a: Digraph, b: Digraph) -> Digraph:
    arcs = set(a.arcs)
    arcs.update((u + a.v, w + a.v) for u, w in b.arcs)
    return digraph(a.v + b.v, arcs)


@dataclass(frozen=True)
class Tree:
    """An undirected tree on vertices 0..v-1."""

    v: int
    edges: frozenset[frozenset[int]]

    def __post_init__(self):
        if self.v < 1:
            raise ValueError("need at least one vertex")
        if len(self.edges) != self.v - 1:
            raise ValueError("a tree on v vertices has v-1 edges")
        for e in self.edges:
            if len(e) != 2:
                raise ValueError("edges join two distinct vertices")
            if any(not (0 <= x < self.v) for x in e):
                raise ValueError("edge endpoint out of range")
        if self.v > 1 and not self._connected():
            raise ValueError("tree must be connected")

    def _connected(self) -> bool:
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.v

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.v)]
        for e in self.edges:
            a, b = sorted(e)
            adj[a].append(b)
            adj[b].append(a)
        for row in adj:
            row.sort()
        return adj

    def degree(self, x: int) -> int:
        return sum(1 for e in self.edges if x in e)


def tree(v: int, edges) -> Tree:
    return Tree(v, frozenset(frozenset(e) for e in edges))


# --- text formats -----------------------------------------------------------
#
# digraph v=<n> / tree v=<n> header, then one "u w" pair per line.


def format_digraph_text(d: Digraph) -> str:
    lines = [f"digraph v={d.v}"]
    lines.extend(f"{u} {w}" for u, w in sorted(d.arcs))
    return "\n".join(lines) + "\n"


def parse_digraph_text(text: str) -> Digraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("digraph v="):
        raise ValueError("expected 'digraph v=<n>' header")
    v = int(lines[0].split("=", 1)[1])
    arcs = []
    for ln in lines[1:]:
        u, w = ln.split()
        arcs.append((int(u), int(w)))
    return digraph(v, arcs)


def format_tree_text(t: Tree) -> str:
    lines = [f"tree v={t.v}"]
    lines.extend(f"{a} {b}" for a, b in sorted(tuple(sorted(e)) for e in t.edges))
    return "\n".join(lines) + "\n"


def parse_tree_text(text: str) -> Tree:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("tree v="):
        raise ValueError("expected 'tree v=<n>' header")
    v = int(lines[0].split("=", 1)[1])
    edges = []
    for ln in lines[1:]:
        a, b = ln.split()
        edges.append((int(a), int(b)))
    return tree(v, edges)
