"""Host-side objects: tournaments, weighted tournaments, and skew matrices.

Two arithmetic backends coexist: exact `fractions.Fraction` entries for
certificates and refutation, and floats for spectral work.  A matrix is
"exact" when every entry is a Fraction or int; operations preserve the
backend of their input.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import CapExceeded, MissingHalfLoops, RangeViolated, SizeMismatch

ENUMERATION_CAP = 7
CUTNORM_CAP = 16

_FLOAT_TOL = 1e-12


def _freeze(rows) -> tuple[tuple, ...]:
    return tuple(tuple(row) for row in rows)


def _is_exact(rows) -> bool:
    return all(isinstance(x, (Fraction, int)) for row in rows for x in row)


@dataclass(frozen=True)
class Tournament:
    """Unweighted tournament; adj[i][j] == 1 iff arc i -> j."""

    n: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one vertex")
        for i in range(self.n):
            if self.adj[i][i] != 0:
                raise ValueError("no self-loops")
            for j in range(i + 1, self.n):
                if self.adj[i][j] + self.adj[j][i] != 1:
                    raise ValueError(f"pair ({i},{j}) must have exactly one arc")

    def has_arc(self, i: int, j: int) -> bool:
        return bool(self.adj[i][j])

    def arcs(self) -> set[tuple[int, int]]:
        return {(i, j) for i in range(self.n) for j in range(self.n) if self.adj[i][j]}


@dataclass(frozen=True)
class WeightedTournament:
    """Adjacency matrix with A(i,j) + A(j,i) = 1 off-diagonal, entries in [0,1]."""

    n: int
    entries: tuple[tuple, ...]
    loops_half: bool = True

    def __post_init__(self):
        exact = self.is_exact
        one = Fraction(1) if exact else 1.0
        for i in range(self.n):
            for j in range(self.n):
                x = self.entries[i][j]
                if x < 0 or x > 1:
                    raise ValueError(f"entry ({i},{j}) = {x} outside [0,1]")
                if i == j:
                    continue
                s = self.entries[i][j] + self.entries[j][i]
                if exact:
                    if s != one:
                        raise ValueError(f"A({i},{j}) + A({j},{i}) != 1")
                elif abs(s - 1.0) > _FLOAT_TOL:
                    raise ValueError(f"A({i},{j}) + A({j},{i}) != 1 (float)")
            if self.loops_half:
                half = Fraction(1, 2) if exact else 0.5
                if exact and self.entries[i][i] != half:
                    raise ValueError("half loops requested but diagonal != 1/2")
                if not exact and abs(self.entries[i][i] - 0.5) > _FLOAT_TOL:
                    raise ValueError("half loops requested but diagonal != 1/2")

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.entries)

    def entry(self, i: int, j: int):
        return self.entries[i][j]

    def rows(self) -> list[list]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class SkewMatrix:
    """Skew-symmetric matrix with entries in [-1, 1].

    Entries beyond [-1/2, 1/2] are legal for pure kernel computations;
    conversion to a weighted tournament (construct.w_eps) enforces the
    tournament range.
    """

    n: int
    entries: tuple[tuple, ...]

    def __post_init__(self):
        exact = self.is_exact
        for i in range(self.n):
            for j in range(self.n):
                x = self.entries[i][j]
                if x < -1 or x > 1:
                    raise ValueError(f"entry ({i},{j}) = {x} outside [-1,1]")
                s = self.entries[i][j] + self.entries[j][i]
                if exact:
                    if s != 0:
                        raise ValueError("matrix is not skew-symmetric")
                elif abs(s) > _FLOAT_TOL:
                    raise ValueError("matrix is not skew-symmetric (float)")

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.entries)

    def entry(self, i: int, j: int):
        return self.entries[i][j]

    def rows(self) -> list[list]:
        return [list(row) for row in self.entries]

    def scaled(self, c) -> "SkewMatrix":
        return SkewMatrix(self.n, _freeze([[c * x for x in row] for row in self.entries]))

    def max_abs(self):
        return max(abs(x) for row in self.entries for x in row)

    def to_float(self) -> "SkewMatrix":
        return SkewMatrix(self.n, _freeze([[float(x) for x in row] for row in self.entries]))


def skew(rows) -> SkewMatrix:
    rows = _freeze(rows)
    return SkewMatrix(len(rows), rows)


def enumerate_tournaments(n: int) -> Iterator[Tournament]:
    """All 2^(n(n-1)/2) tournaments, in lexicographic upper-triangle bit order."""
    if not (1 <= n <= ENUMERATION_CAP):
        raise CapExceeded(f"enumeration capped at n <= {ENUMERATION_CAP}")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    npairs = len(pairs)
    for mask in range(1 << npairs):
        adj = [[0] * n for _ in range(n)]
        for k, (i, j) in enumerate(pairs):
            if (mask >> (npairs - 1 - k)) & 1:
                adj[i][j] = 1
            else:
                adj[j][i] = 1
        yield Tournament(n, _freeze(adj))


def tournament_count(n: int) -> int:
    return 1 << (n * (n - 1) // 2)


def random_tournament(n: int, seed: int) -> Tournament:
    """Each pair oriented by an independent fair coin; deterministic in seed."""
    if n < 1:
        raise ValueError("need at least one vertex")
    rng = random.Random(seed)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                adj[i][j] = 1
            else:
                adj[j][i] = 1
    return Tournament(n, _freeze(adj))


def transitive(n: int) -> Tournament:
    if n < 1:
        raise ValueError("need at least one vertex")
    adj = [[1 if i < j else 0 for j in range(n)] for i in range(n)]
    return Tournament(n, _freeze(adj))


def with_half_loops(t: Tournament) -> WeightedTournament:
    """Exact-rational weighted tournament: arcs get weight 1, diagonal 1/2."""
    half = Fraction(1, 2)
    ent = [
        [half if i == j else Fraction(t.adj[i][j]) for j in range(t.n)]
        for i in range(t.n)
    ]
    return WeightedTournament(t.n, _freeze(ent), loops_half=True)


def skew_decompose(w: WeightedTournament) -> SkewMatrix:
    """B = A - J/2; exact on the diagonal only with half loops."""
    if not w.loops_half:
        raise MissingHalfLoops("skew decomposition needs half loops on the diagonal")
    half = Fraction(1, 2) if w.is_exact else 0.5
    ent = [[w.entries[i][j] - half for j in range(w.n)] for i in range(w.n)]
    return SkewMatrix(w.n, _freeze(ent))


def half_plus(b: SkewMatrix) -> WeightedTournament:
    """The weighted tournament J/2 + B; entries of B must lie in [-1/2, 1/2]."""
    half = Fraction(1, 2) if b.is_exact else 0.5
    if b.max_abs() > (Fraction(1, 2) if b.is_exact else 0.5 + _FLOAT_TOL):
        raise RangeViolated("entries of B exceed 1/2")
    ent = [[half + b.entries[i][j] for j in range(b.n)] for i in range(b.n)]
    return WeightedTournament(b.n, _freeze(ent), loops_half=True)


def blowup(t: Tournament, part_sizes, inner: str = "transitive", seed: int = 0) -> Tournament:
    """Replace vertex k of t by a part; arcs between parts follow t.

    inner rule "transitive" or "random" (seeded) orients within each part.
    """
    if len(part_sizes) != t.n:
        raise SizeMismatch(f"need {t.n} part sizes, got {len(part_sizes)}")
    if inner not in ("transitive", "random"):
        raise ValueError("inner rule must be 'transitive' or 'random'")
    if any(s < 1 for s in part_sizes):
        raise ValueError("part sizes must be positive")
    rng = random.Random(seed)
    offsets = [0]
    for s in part_sizes:
        offsets.append(offsets[-1] + s)
    n = offsets[-1]
    part_of = [k for k, s in enumerate(part_sizes) for _ in range(s)]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            pi, pj = part_of[i], part_of[j]
            if pi != pj:
                if t.adj[pi][pj]:
                    adj[i][j] = 1
                else:
                    adj[j][i] = 1
            elif inner == "transitive" or rng.random() < 0.5:
                adj[i][j] = 1
            else:
                adj[j][i] = 1
    return Tournament(n, _freeze(adj))


def cutnorm_bruteforce(b: SkewMatrix):
    """max over X,Y of |sum_{x in X, y in Y} B(x,y)| / n^2, exactly.

    For each X the optimal Y keeps one sign of the column sums, so the scan
    is 2^n * n instead of 4^n; X subsets are visited in Gray-code order with
    incremental column-sum updates.
    """
    n = b.n
    if n > CUTNORM_CAP:
        raise CapExceeded(f"cut norm brute force capped at n <= {CUTNORM_CAP}")
    zero = Fraction(0) if b.is_exact else 0.0
    colsums = [zero] * n
    best = zero
    prev_gray = 0
    for m in range(1, 1 << n):
        gray = m ^ (m >> 1)
        flipped = gray ^ prev_gray
        i = flipped.bit_length() - 1
        row = b.entries[i]
        if gray & flipped:  # row i entered X
            colsums = [c + x for c, x in zip(colsums, row)]
        else:
            colsums = [c - x for c, x in zip(colsums, row)]
        prev_gray = gray
        pos = sum(c for c in colsums if c > 0)
        neg = -sum(c for c in colsums if c < 0)
        cand = pos if pos > neg else neg
        if cand > best:
            best = cand
    return best / (n * n) if b.is_exact else best / float(n * n)


# --- text formats -----------------------------------------------------------


def format_tournament_text(t: Tournament) -> str:
    lines = [f"tournament n={t.n}"]
    lines.extend("".join(str(t.adj[i][j]) for j in range(t.n)) for i in range(t.n))
    return "\n".join(lines) + "\n"


def parse_tournament_text(text: str) -> Tournament:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("tournament n="):
        raise ValueError("expected 'tournament n=<n>' header")
    n = int(lines[0].split("=", 1)[1])
    adj = [[int(c) for c in lines[1 + i].strip()] for i in range(n)]
    return Tournament(n, _freeze(adj))


def _parse_scalar(tok: str) -> Fraction:
    return Fraction(tok)


def format_weighted_text(w: WeightedTournament) -> str:
    lines = [f"wtournament n={w.n}"]
    for i in range(w.n):
        lines.append(" ".join(_frac_str(x) for x in w.entries[i]))
    return "\n".join(lines) + "\n"


def _frac_str(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return f"{x}/1"
    return repr(x)


def parse_weighted_text(text: str) -> WeightedTournament:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("wtournament n="):
        raise ValueError("expected 'wtournament n=<n>' header")
    n = int(lines[0].split("=", 1)[1])
    ent = [[_parse_scalar(tok) for tok in lines[1 + i].split()] for i in range(n)]
    half = Fraction(1, 2)
    loops_half = all(ent[i][i] == half for i in range(n))
    return WeightedTournament(n, _freeze(ent), loops_half=loops_half)
