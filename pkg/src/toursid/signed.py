"""Signed subgraph counts C(Q, D) = C_even - C_odd.

Copies are counted as edge subsets (unlabeled), which matches the worked
closed forms C(P3, P_l) = l - 2 and C(2P3, .) used downstream; the injective
convention would overcount by |Aut(Q)|.  A copy's sign is (-1)^(number of
host arcs that disagree with the pattern under an underlying isomorphism);
for patterns whose components are paths with an even number of edges the
sign does not depend on the isomorphism chosen.

With directions encoded as +-1, the sign of a directed-window copy of
P_(2k+1) is simply the product of the 2k direction entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import Digraph, as_cycle, as_orientation
from .errors import CapExceeded, OddComponent

SIGNED_HOST_EDGE_CAP = 40


@dataclass(frozen=True)
class SignedCounts:
    c_p3: int
    c_p5: int
    c_2p3: int
    min_k: int | None = None
    c_min_k: int | None = None

    def triple(self) -> tuple[int, int, int]:
        return (self.c_p3, self.c_p5, self.c_2p3)


def _window_sums(dirs: tuple[int, ...], width: int) -> int:
    e = len(dirs)
    total = 0
    for i in range(e - width + 1):
        s = 1
        for d in dirs[i : i + width]:
            s *= d
        total += s
    return total


def path_counts(o) -> SignedCounts:
    """C(P3), C(P5), C(2P3) and the minimal k >= 3 with C(P_(2k+1)) != 0."""
    o = as_orientation(o)
    dirs = o.dirs
    e = o.e
    c_p3 = _window_sums(dirs, 2)
    c_p5 = _window_sums(dirs, 4)
    signs = [dirs[i] * dirs[i + 1] for i in range(e - 1)]
    c_2p3 = 0
    for i in range(len(signs)):
        for j in range(i + 3, len(signs)):
            c_2p3 += signs[i] * signs[j]
    min_k = None
    c_min_k = None
    for k in range(3, e // 2 + 1):
        ck = _window_sums(dirs, 2 * k)
        if ck != 0:
            min_k, c_min_k = k, ck
            break
    return SignedCounts(c_p3, c_p5, c_2p3, min_k, c_min_k)


def _cyclic_window_sum(dirs: tuple[int, ...], width: int) -> int:
    # a width-w window uses w+1 consecutive vertices, so it needs len > width
    ell = len(dirs)
    if ell < width + 1:
        return 0
    total = 0
    for i in range(ell):
        s = 1
        for t in range(width):
            s *= dirs[(i + t) % ell]
        total += s
    return total


def cycle_counts(c) -> SignedCounts:
    """Window counts with cyclic wraparound; 2P3 windows must be vertex-disjoint."""
    c = as_cycle(c)
    dirs = c.orientation.dirs
    ell = c.length
    c_p3 = _cyclic_window_sum(dirs, 2)
    c_p5 = _cyclic_window_sum(dirs, 4)
    signs = [dirs[i] * dirs[(i + 1) % ell] for i in range(ell)]
    c_2p3 = 0
    for i in range(ell):
        for j in range(i + 1, ell):
            gap = j - i
            if gap >= 3 and ell - gap >= 3:
                c_2p3 += signs[i] * signs[j]
    min_k = None
    c_min_k = None
    for k in range(3, (ell - 1) // 2 + 1):
        ck = _cyclic_window_sum(dirs, 2 * k)
        if ck != 0:
            min_k, c_min_k = k, ck
            break
    return SignedCounts(c_p3, c_p5, c_2p3, min_k, c_min_k)


def _pattern_components(q: Digraph) -> list[list[int]]:
    """Each component as a vertex sequence along its path; reject non-paths."""
    adj: list[list[int]] = [[] for _ in range(q.v)]
    for u, w in q.arcs:
        adj[u].append(w)
        adj[w].append(u)
    seen = [False] * q.v
    comps = []
    for s in range(q.v):
        if seen[s]:
            continue
        comp = {s}
        stack = [s]
        seen[s] = True
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.add(y)
                    stack.append(y)
        if any(len(adj[x]) > 2 for x in comp):
            raise ValueError("pattern components must be paths")
        ends = [x for x in comp if len(adj[x]) <= 1]
        if len(comp) == 1:
            comps.append([s])
            continue
        if len(ends) != 2:
            raise ValueError("pattern components must be paths (cycle found)")
        start = min(ends)
        seq = [start]
        prev = None
        cur = start
        while True:
            nxts = [y for y in adj[cur] if y != prev]
            if not nxts:
                break
            prev, cur = cur, nxts[0]
            seq.append(cur)
        comps.append(seq)
    return comps


def _seq_dirs(seq: list[int], arcs) -> tuple[int, ...]:
    return tuple(1 if (seq[i], seq[i + 1]) in arcs else -1 for i in range(len(seq) - 1))


def _host_paths(d: Digraph, edges: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All simple paths with `edges` edges in the underlying graph of d.

    Returns (vertex sequence, +-1 direction profile); each path appears once,
    canonicalized by start < end.
    """
    adj: list[list[int]] = [[] for _ in range(d.v)]
    for u, w in d.arcs:
        adj[u].append(w)
        adj[w].append(u)
    out = []

    def extend(seq):
        if len(seq) == edges + 1:
            if seq[0] < seq[-1]:
                out.append((tuple(seq), _seq_dirs(seq, d.arcs)))
            return
        for y in adj[seq[-1]]:
            if y not in seq:
                seq.append(y)
                extend(seq)
                seq.pop()

    for s in range(d.v):
        extend([s])
    return out


def signed_count(q: Digraph, d: Digraph) -> int:
    """Generic oracle: sum of copy signs over edge subsets isomorphic to q.

    Pattern components must be paths with an even number of arcs (the sign is
    ill-defined otherwise).
    """
    if d.e > SIGNED_HOST_EDGE_CAP:
        raise CapExceeded(f"host has {d.e} > {SIGNED_HOST_EDGE_CAP} edges")
    comps = _pattern_components(q)
    profiles = []
    for seq in comps:
        if len(seq) == 1:
            continue  # isolated pattern vertices do not constrain edges
        pdirs = _seq_dirs(seq, q.arcs)
        if len(pdirs) % 2 == 1:
            raise OddComponent("pattern component has an odd number of arcs")
        profiles.append(pdirs)
    if not profiles:
        return 1 if q.v <= d.v else 0
    # identical profiles are interchangeable: count ordered placements and
    # divide by the multiplicity factorials
    placements = {}
    for p in set(profiles):
        key = min(p, tuple(-x for x in reversed(p)))  # reversal gives the same copies
        if key not in placements:
            placements[key] = _host_paths(d, len(key))
    keys = [min(p, tuple(-x for x in reversed(p))) for p in profiles]
    mult: dict[tuple, int] = {}
    for k in keys:
        mult[k] = mult.get(k, 0) + 1
    denom = 1
    for m in mult.values():
        denom *= math.factorial(m)

    total = 0

    def place(idx: int, used: frozenset[int], sign: int):
        nonlocal total
        if idx == len(profiles):
            total += sign
            return
        pdirs = profiles[idx]
        key = keys[idx]
        for seq, hdirs in placements[key]:
            if used & set(seq):
                continue
            dis = sum(1 for a, b in zip(hdirs, pdirs) if a != b)
            place(idx + 1, used | set(seq), sign * (-1) ** (dis % 2))

    place(0, frozenset(), 1)
    assert total % denom == 0
    return total // denom


@dataclass(frozen=True)
class WalkFractions:
    """Endpoint distribution of an n-step fair +-1 walk."""

    p_zero: Fraction
    p_pos: Fraction
    p_neg: Fraction


def walk_fractions(steps: int) -> WalkFractions:
    """Probability an n-step walk ends at zero / positive / negative."""
    if steps < 1:
        raise ValueError("need at least one step")
    if steps % 2 == 1:
        p_zero = Fraction(0)
    else:
        p_zero = Fraction(math.comb(steps, steps // 2), 2**steps)
    rest = (1 - p_zero) / 2
    return WalkFractions(p_zero, rest, rest)
