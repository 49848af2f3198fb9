"""Homomorphism counts and densities.

h_D(A) sums the product of arc weights over all (not necessarily injective)
vertex maps; the density divides by n^v(D).  Hosts may be unweighted
tournaments (0/1, no loops), weighted tournaments, skew matrices, or raw
square matrices; exactness follows the entry type.

Specialized evaluators:

* hom_path    -- 1^T M_1 ... M_e 1 with M_i in {A, A^T}, linear in e.
* hom_cycle   -- trace of the oriented factor product.
* hom_forest  -- tree DP for forest patterns, used by the refutation search.
* t_kernel_*  -- signed densities of directed even paths / cycles in a skew
                 kernel; cycle densities normalize by n^length (the vertex
                 count), path densities by n^(edges+1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .core import Digraph, as_cycle, as_orientation
from .errors import CapExceeded, TooShort
from .tournament import SkewMatrix, Tournament, WeightedTournament

GENERIC_CAP = 10**9


def host_entries(host) -> tuple[int, list[list]]:
    """Normalize a host object to (n, row-major entries)."""
    if isinstance(host, Tournament):
        return host.n, [list(r) for r in host.adj]
    if isinstance(host, (WeightedTournament, SkewMatrix)):
        return host.n, host.rows()
    rows = [list(r) for r in host]
    return len(rows), rows


@dataclass(frozen=True)
class HomCount:
    """Raw weighted homomorphism count plus enough context to normalize."""

    raw: object
    host_n: int
    pattern_v: int

    @property
    def density(self):
        scale = self.host_n ** self.pattern_v
        if isinstance(self.raw, (Fraction, int)):
            return Fraction(self.raw, scale)
        return self.raw / scale


def hom_generic(d: Digraph, host) -> HomCount:
    """Brute-force sum over all |V(host)|^v(d) maps."""
    n, a = host_entries(host)
    if n ** d.v > GENERIC_CAP:
        raise CapExceeded(f"{n}^{d.v} maps exceed the generic cap")
    arcs = sorted(d.arcs)
    total = 0
    for phi in product(range(n), repeat=d.v):
        p = 1
        for u, w in arcs:
            p = p * a[phi[u]][phi[w]]
            if not p:
                break
        total += p
    return HomCount(total, n, d.v)


def hom_path(o, host) -> HomCount:
    """1^T M_1 ... M_e 1 where M_i = A for forward edges and A^T for backward."""
    o = as_orientation(o)
    n, a = host_entries(host)
    vec = [1] * n
    for d in o.dirs:
        if d > 0:
            vec = [sum(vec[i] * a[i][j] for i in range(n)) for j in range(n)]
        else:
            vec = [sum(vec[i] * a[j][i] for i in range(n)) for j in range(n)]
    return HomCount(sum(vec), n, o.v)


def _mat_mul(a, b, n):
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def hom_cycle(c, host) -> HomCount:
    """Trace of the oriented product of A / A^T factors around the cycle."""
    c = as_cycle(c)
    n, a = host_entries(host)
    at = [[a[j][i] for j in range(n)] for i in range(n)]
    m = None
    for d in c.orientation.dirs:
        f = a if d > 0 else at
        m = f if m is None else _mat_mul(m, f, n)
    return HomCount(sum(m[i][i] for i in range(n)), n, c.length)


def _components(d: Digraph) -> list[list[int]]:
    adj = [[] for _ in range(d.v)]
    for u, w in d.arcs:
        adj[u].append(w)
        adj[w].append(u)
    seen = [False] * d.v
    comps = []
    for s in range(d.v):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def is_forest(d: Digraph) -> bool:
    return all(
        sum(1 for u, w in d.arcs if u in c or w in c) == len(c) - 1
        for c in (set(comp) for comp in _components(d))
    )


def hom_forest(d: Digraph, host) -> HomCount:
    """Tree-DP evaluation of hom for forest patterns; O(v * n^2)."""
    if not is_forest(d):
        raise ValueError("pattern is not a forest")
    n, a = host_entries(host)
    nbrs: list[list[int]] = [[] for _ in range(d.v)]
    for u, w in d.arcs:
        nbrs[u].append(w)
        nbrs[w].append(u)
    total = 1
    for comp in _components(d):
        root = min(comp)
        # iterative post-order message passing
        order = []
        parent = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            order.append(x)
            for y in nbrs[x]:
                if y not in parent:
                    parent[y] = x
                    stack.append(y)
        msg: dict[int, list] = {}
        for x in reversed(order):
            vec = [1] * n
            for y in nbrs[x]:
                if parent.get(y) != x:
                    continue
                child = msg[y]
                if (x, y) in d.arcs:
                    vec = [vec[i] * sum(a[i][j] * child[j] for j in range(n)) for i in range(n)]
                else:
                    vec = [vec[i] * sum(a[j][i] * child[j] for j in range(n)) for i in range(n)]
            msg[x] = vec
        total = total * sum(msg[root])
    return HomCount(total, n, d.v)


def hom_auto(d: Digraph, host) -> HomCount:
    """Pick the fastest exact evaluator that applies."""
    if is_forest(d):
        return hom_forest(d, host)
    return hom_generic(d, host)


def s_moment(b: SkewMatrix, power: int):
    """Signed moment 1^T B^power 1 (no absolute value)."""
    return s_moments_up_to(b, power)[power]


def s_moments_up_to(b: SkewMatrix, top: int) -> dict[int, object]:
    """All signed moments 1^T B^k 1 for 0 <= k <= top, one vector pass."""
    n = b.n
    a = b.entries
    vec = [1] * n
    out = {0: n}
    for k in range(1, top + 1):
        vec = [sum(vec[i] * a[i][j] for i in range(n)) for j in range(n)]
        out[k] = sum(vec)
    return out


def t_kernel_path(b: SkewMatrix, edges: int):
    """Signed density 1^T B^edges 1 / n^(edges+1); exactly 0 for odd edges."""
    if edges < 1:
        raise ValueError("need at least one edge")
    zero = Fraction(0) if b.is_exact else 0.0
    if edges % 2 == 1:
        return zero
    s = s_moment(b, edges)
    if b.is_exact:
        return Fraction(s, b.n ** (edges + 1))
    return s / float(b.n) ** (edges + 1)


def t_kernel_cycle(b: SkewMatrix, length: int):
    """Signed density tr(B^length) / n^length; exactly 0 for odd length."""
    if length < 3:
        raise TooShort("cycle length must be >= 3")
    zero = Fraction(0) if b.is_exact else 0.0
    if length % 2 == 1:
        return zero
    n = b.n
    m = [row[:] for row in b.rows()]
    for _ in range(length - 1):
        m = _mat_mul(m, b.rows(), n)
    tr = sum(m[i][i] for i in range(n))
    if b.is_exact:
        return Fraction(tr, n**length)
    return tr / float(n) ** length
