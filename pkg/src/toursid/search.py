"""Refutation and discovery of counting-bound violations.

Stage 1 checks the weighted half-loop form of every unweighted tournament up
to a size cap in exact arithmetic: h must stay >= n^v/2^e (TS) or
<= n^v/2^e (TAS), and the first strict violation becomes an exact
certificate after re-verification on an independent evaluator.  Stage 2
runs a projected-gradient ascent over the skew parametrization of weighted
hosts, rationalizes promising float hosts, and certifies them exactly.

Absence of a violation at desk scale is evidence, not proof.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .construct import Certificate, CertDirection, named_kernel, certificate as known_certificate
from .core import Digraph, Orientation, as_orientation, path_digraph
from .errors import CapExceeded, InternalAssertionFailed, InvalidHost
from .hom import hom_auto, hom_generic, hom_path, is_forest
from .tournament import (
    WeightedTournament,
    _freeze,
    enumerate_tournaments,
    skew_decompose,
    transitive,
    with_half_loops,
)

EXHAUSTIVE_CAP = 6
OPTIMIZER_N_CAP = 12
RATIONALIZE_MAX_DEN = 10**4

MODE_TAS = "TAS"
MODE_TS = "TS"


@dataclass(frozen=True)
class RefutationReport:
    pattern_text: str
    mode: str
    n_checked: int
    samples: int
    violation: Certificate | None
    margin_min: Fraction | None

    def to_json_dict(self) -> dict:
        d = {
            "pattern": self.pattern_text,
            "mode": self.mode,
            "n_checked": self.n_checked,
            "samples": self.samples,
            "violation": self.violation.to_json_dict() if self.violation else None,
        }
        if self.margin_min is not None:
            d["margin_min"] = f"{self.margin_min.numerator}/{self.margin_min.denominator}"
        return d


def _pattern_meta(pattern) -> tuple[object, str, int, int]:
    if isinstance(pattern, (str, Orientation)):
        o = as_orientation(pattern)
        return o, str(o), o.v, o.e
    if isinstance(pattern, Digraph):
        return pattern, f"digraph(v={pattern.v},e={pattern.e})", pattern.v, pattern.e
    raise TypeError("pattern must be an orientation or a digraph")


def _exact_count(pattern, host) -> Fraction:
    if isinstance(pattern, Orientation):
        return Fraction(hom_path(pattern, host).raw)
    return Fraction(hom_auto(pattern, host).raw)


def _independent_recheck(pattern, host, claimed: Fraction) -> None:
    """Certificates re-verify on the brute-force evaluator before being emitted."""
    d = path_digraph(pattern) if isinstance(pattern, Orientation) else pattern
    if Fraction(hom_generic(d, host).raw) != claimed:
        raise InternalAssertionFailed("certificate value failed independent re-verification")


def _violates(mode: str, value: Fraction, threshold: Fraction) -> bool:
    return value > threshold if mode == MODE_TAS else value < threshold


def certify(pattern, host: WeightedTournament, mode: str) -> Certificate | None:
    """Exact strict comparison against n^v/2^e; None when no violation."""
    if mode not in (MODE_TAS, MODE_TS):
        raise ValueError("mode must be 'TAS' or 'TS'")
    if not host.is_exact:
        raise InvalidHost("certification requires an exact-rational host")
    obj, _, v, e = _pattern_meta(pattern)
    value = _exact_count(obj, host)
    threshold = Fraction(host.n**v, 2**e)
    if not _violates(mode, value, threshold):
        return None
    _independent_recheck(obj, host, value)
    direction = CertDirection.VIOLATES_TAS if mode == MODE_TAS else CertDirection.VIOLATES_TS
    patt = obj if isinstance(obj, Orientation) else None
    return Certificate(host, patt, direction, threshold, value)


def rationalize_host(host: WeightedTournament, max_den: int = RATIONALIZE_MAX_DEN) -> WeightedTournament:
    """Round a float host to nearby small-denominator rationals.

    The upper triangle is rounded and the lower triangle rebuilt as 1 - A to
    keep the tournament constraint exact; the diagonal snaps to 1/2.
    """
    n = host.n
    ent = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        ent[i][i] = Fraction(1, 2)
        for j in range(i + 1, n):
            x = Fraction(float(host.entries[i][j])).limit_denominator(max_den)
            x = min(max(x, Fraction(0)), Fraction(1))
            ent[i][j] = x
            ent[j][i] = 1 - x
    return WeightedTournament(n, _freeze(ent), loops_half=True)


@dataclass(frozen=True)
class OptimizeResult:
    host: WeightedTournament
    value: float
    objective: str
    restarts: int
    iterations: int
    trajectories: tuple[tuple[float, ...], ...]  # accepted values per start


def _path_gradient(o: Orientation, a: list[list[float]], n: int) -> list[list[float]]:
    """d h / d b_ij (upper triangle) via prefix/suffix chain vectors."""
    e = o.e
    prefix = [[1.0] * n]
    for d in o.dirs:
        vec = prefix[-1]
        if d > 0:
            prefix.append([sum(vec[i] * a[i][j] for i in range(n)) for j in range(n)])
        else:
            prefix.append([sum(vec[i] * a[j][i] for i in range(n)) for j in range(n)])
    suffix = [[1.0] * n]
    for d in reversed(o.dirs):
        vec = suffix[-1]
        if d > 0:
            suffix.append([sum(a[i][j] * vec[j] for j in range(n)) for i in range(n)])
        else:
            suffix.append([sum(a[j][i] * vec[j] for j in range(n)) for i in range(n)])
    suffix.reverse()
    # dh/dA(u,v) summed over factor occurrences, then combined for b_uv = -b_vu
    dA = [[0.0] * n for _ in range(n)]
    for k, d in enumerate(o.dirs):
        p = prefix[k]
        s = suffix[k + 1]
        if d > 0:
            for u in range(n):
                pu = p[u]
                if pu:
                    row = dA[u]
                    for v in range(n):
                        row[v] += pu * s[v]
        else:
            for u in range(n):
                su = s[u]
                if su:
                    row = dA[u]
                    for v in range(n):
                        row[v] += p[v] * su
    grad = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            grad[i][j] = dA[i][j] - dA[j][i]
    return grad


def _generic_gradient(d: Digraph, a: list[list[float]], n: int) -> list[list[float]]:
    """Exact partial derivatives by pinning one arc at a time (brute force)."""
    from itertools import product as iproduct

    arcs = sorted(d.arcs)
    dA = [[0.0] * n for _ in range(n)]
    for phi in iproduct(range(n), repeat=d.v):
        weights = [a[phi[u]][phi[w]] for u, w in arcs]
        for k, (u, w) in enumerate(arcs):
            p = 1.0
            for kk, wt in enumerate(weights):
                if kk != k:
                    p *= wt
            dA[phi[u]][phi[w]] += p
    grad = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            grad[i][j] = dA[i][j] - dA[j][i]
    return grad


def _host_from_b(bvals: list[list[float]], n: int) -> list[list[float]]:
    a = [[0.5] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = 0.5 + bvals[i][j]
            a[j][i] = 0.5 - bvals[i][j]
    return a


def _objective_value(pattern, a: list[list[float]], n: int) -> float:
    if isinstance(pattern, Orientation):
        return float(hom_path(pattern, a).raw)
    return float(hom_auto(pattern, a).raw)


def _warm_starts(n: int) -> list[list[list[float]]]:
    starts = []
    tb = skew_decompose(with_half_loops(transitive(n)))
    starts.append([[float(x) for x in row] for row in tb.entries])
    if n == 3:
        pc = known_certificate("PerturbedCyclic").host
        sk = skew_decompose(pc)
        starts.append([[float(x) for x in row] for row in sk.entries])
        mb = named_kernel("MBalanced").matrix
        starts.append([[float(x) * 0.25 for x in row] for row in mb.entries])
    if n == 2:
        b1 = named_kernel("B1").matrix
        starts.append([[float(x) * 0.25 for x in row] for row in b1.entries])
    return starts


def optimize_density(
    pattern,
    n: int,
    objective: str = "maximize",
    restarts: int = 4,
    seed: int = 0,
    max_iters: int = 200,
    grad_tol: float = 1e-9,
) -> OptimizeResult:
    """Projected-gradient search for extremal weighted hosts.

    Parametrizes the host by the strict upper triangle of B in [-1/2, 1/2];
    gradients are exact partial derivatives of the counting polynomial.
    Warm starts include the transitive host and, where sizes match, the
    named kernels and the perturbed cyclic host.
    """
    if n > OPTIMIZER_N_CAP:
        raise CapExceeded(f"optimizer capped at n <= {OPTIMIZER_N_CAP}")
    if objective not in ("maximize", "minimize"):
        raise ValueError("objective must be 'maximize' or 'minimize'")
    obj, _, _, _ = _pattern_meta(pattern)
    sign = 1.0 if objective == "maximize" else -1.0
    rng = random.Random(seed)
    starts = _warm_starts(n)
    for _ in range(restarts):
        b = [[0.0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                b[i][j] = rng.uniform(-0.5, 0.5)
        starts.append(b)
    best_b = None
    best_val = None
    total_iters = 0
    trajectories = []
    for b in starts:
        bcur = [row[:] for row in b]
        a = _host_from_b(bcur, n)
        val = _objective_value(obj, a, n)
        accepted = [val]
        for _ in range(max_iters):
            total_iters += 1
            if isinstance(obj, Orientation):
                grad = _path_gradient(obj, a, n)
            else:
                grad = _generic_gradient(obj, a, n)
            gmax = max((abs(grad[i][j]) for i in range(n) for j in range(i + 1, n)), default=0.0)
            if gmax <= grad_tol:
                break
            step = 0.5 / max(gmax, 1.0)
            improved = False
            while step > 1e-13:
                cand = [row[:] for row in bcur]
                for i in range(n):
                    for j in range(i + 1, n):
                        x = bcur[i][j] + sign * step * grad[i][j]
                        cand[i][j] = min(0.5, max(-0.5, x))
                ca = _host_from_b(cand, n)
                cval = _objective_value(obj, ca, n)
                if sign * (cval - val) > 0:
                    bcur, a, val = cand, ca, cval
                    accepted.append(val)
                    improved = True
                    break
                step /= 2
            if not improved:
                break
        trajectories.append(tuple(accepted))
        if best_val is None or sign * (val - best_val) > 0:
            best_val = val
            best_b = bcur
    rows = _host_from_b(best_b, n)
    host = WeightedTournament(n, _freeze(rows), loops_half=True)
    return OptimizeResult(host, best_val, objective, len(starts), total_iters,
                          tuple(trajectories))


def _scan_hosts(obj, mode, hosts, threshold, use_fast_forest):
    """Scan a host chunk; returns (index of first violation or None, min gap)."""
    margin_min = None
    hit = None
    for idx, host in hosts:
        if isinstance(obj, Orientation):
            value = Fraction(hom_path(obj, host).raw)
        elif use_fast_forest:
            value = Fraction(hom_auto(obj, host).raw)
        else:
            value = Fraction(hom_generic(obj, host).raw)
        gap = abs(value - threshold)
        if margin_min is None or gap < margin_min:
            margin_min = gap
        if hit is None and _violates(mode, value, threshold):
            hit = (idx, host, value)
    return hit, margin_min


def refute(
    pattern,
    mode: str,
    n_max: int = 5,
    budget: int = 0,
    seed: int = 0,
    optimizer_n: int | None = None,
    threads: int = 1,
) -> RefutationReport:
    """Exhaustive small-host scan, then (budget permitting) optimizer probes.

    budget counts optimizer restarts; 0 skips stage 2.  The first exact
    strict violation short-circuits; with threads > 1 the scan fans out in
    chunks and the lowest-index violation wins, so reports are reproducible.
    """
    if mode not in (MODE_TAS, MODE_TS):
        raise ValueError("mode must be 'TAS' or 'TS'")
    if n_max > EXHAUSTIVE_CAP:
        raise CapExceeded(f"exhaustive stage capped at n <= {EXHAUSTIVE_CAP}")
    obj, text, v, e = _pattern_meta(pattern)
    use_fast_forest = isinstance(obj, Digraph) and is_forest(obj)
    margin_min: Fraction | None = None
    samples = 0
    for n in range(1, n_max + 1):
        threshold = Fraction(n**v, 2**e)
        hosts = [(i, with_half_loops(t)) for i, t in enumerate(enumerate_tournaments(n))]
        samples += len(hosts)
        if threads > 1 and len(hosts) >= 64:
            from concurrent.futures import ThreadPoolExecutor

            chunk = (len(hosts) + threads - 1) // threads
            parts = [hosts[i : i + chunk] for i in range(0, len(hosts), chunk)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(
                    pool.map(
                        lambda p: _scan_hosts(obj, mode, p, threshold, use_fast_forest),
                        parts,
                    )
                )
        else:
            results = [_scan_hosts(obj, mode, hosts, threshold, use_fast_forest)]
        hit = None
        for part_hit, part_margin in results:
            if part_margin is not None and (margin_min is None or part_margin < margin_min):
                margin_min = part_margin
            if part_hit is not None and (hit is None or part_hit[0] < hit[0]):
                hit = part_hit
        if hit is not None:
            _, host, value = hit
            _independent_recheck(obj, host, value)
            direction = (
                CertDirection.VIOLATES_TAS if mode == MODE_TAS else CertDirection.VIOLATES_TS
            )
            cert = Certificate(
                host,
                obj if isinstance(obj, Orientation) else None,
                direction,
                threshold,
                value,
            )
            return RefutationReport(text, mode, n, samples, cert, margin_min)
    n_checked = n_max
    if budget > 0:
        n_opt = optimizer_n or max(2, min(n_max, OPTIMIZER_N_CAP))
        objective = "maximize" if mode == MODE_TAS else "minimize"
        result = optimize_density(obj, n_opt, objective, restarts=budget, seed=seed)
        samples += result.restarts
        for max_den in (RATIONALIZE_MAX_DEN, 100):
            cert = certify(obj, rationalize_host(result.host, max_den), mode)
            if cert is not None:
                return RefutationReport(text, mode, n_checked, samples, cert, margin_min)
    return RefutationReport(text, mode, n_checked, samples, None, margin_min)
