"""Exact perturbation probes of classifier verdicts.

For a balanced kernel every path term of the cycle decomposition vanishes,
so t_C(J/2 + eps B) - 2^-l = (-1)^flips eps^l t_C_l(B) exactly, at any eps.
That isolates the parity gate: an LTS/LTAS verdict must survive the probe,
and a parity-caused Neither must be strictly violated by it.

For paths, rational rank-structured kernels exhibit the two-sided
violations behind a Neither verdict in exact arithmetic.
"""

from fractions import Fraction
from itertools import product

from toursid.classify import Verdict, classify_cycle, classify_path
from toursid.construct import named_kernel, tensor_power, w_eps
from toursid.core import Orientation
from toursid.hom import hom_cycle, hom_path
from toursid.tournament import skew

F = Fraction

MB = named_kernel("MBalanced").matrix


def _balanced_probe(o: Orientation, eps=F(1, 4)):
    host = w_eps(MB, eps)
    return hom_cycle(o, host).density - F(1, 2**o.e)


def test_cycle_verdicts_respect_balanced_probe():
    for ell in range(3, 9):
        for dirs in product((1, -1), repeat=ell):
            o = Orientation(dirs)
            res = classify_cycle(o, best_effort=True)
            gap = _balanced_probe(o)
            if res.verdict is Verdict.LTS:
                assert gap >= 0, (str(o), res.rule)
            elif res.verdict is Verdict.LTAS:
                assert gap <= 0, (str(o), res.rule)
            elif res.rule == "wedges-cycle:cycle-parity":
                # the gate failed precisely because this probe crosses the line
                if res.counts.c_p3 < 0:
                    assert gap < 0, str(o)
                else:
                    assert gap > 0, str(o)


def _exact_ab_kernel(b_value: F) -> "object":
    # the a = 1 member of the rank-2 family is rational whenever sqrt(b) is:
    # u = (1,1,1,1)/2, w = (1,-1,1,-1)/2, B = 4 sqrt(b) (u^T w - w^T u)
    num, den = b_value.numerator, b_value.denominator
    rn, rd = int(num**0.5 + 0.5), int(den**0.5 + 0.5)
    assert rn * rn == num and rd * rd == den
    root = F(rn, rd)
    u = [F(1, 2)] * 4
    w = [F(1, 2), F(-1, 2), F(1, 2), F(-1, 2)]
    c = 4 * root
    rows = [[c * (u[i] * w[j] - w[i] * u[j]) for j in range(4)] for i in range(4)]
    return skew(rows)


def test_exact_ab_kernel_moments():
    kb = _exact_ab_kernel(F(1, 256))
    from toursid.hom import t_kernel_path

    for k in range(1, 5):
        assert t_kernel_path(kb, 2 * k) == (-1) ** k * F(1, 256) ** k


def test_d1_is_strictly_neither_in_exact_arithmetic():
    # the nine-edge Neither example: the 2x2 rotation kernel pushes the count
    # below the benchmark, an odd tensor power of the 3x3 kernel pushes above
    o = Orientation(tuple(1 if c == ">" else -1 for c in ">>>>><><>"))
    assert classify_path(o).verdict is Verdict.NEITHER
    bench = F(1, 2**o.e)

    b1 = named_kernel("B1").matrix
    below = hom_path(o, w_eps(b1, F(1, 16))).density - bench
    assert below < 0  # not LTS

    bp3 = tensor_power(named_kernel("BPrime").matrix, 3)
    above = hom_path(o, w_eps(bp3, F(1, 8))).density - bench
    assert above > 0  # not LTAS


def test_2p3_branch_verdict_survives_probes():
    # (0, 0, -6) classifies LTAS; both probe kernels must stay at or below
    o = Orientation(tuple(1 if c == ">" else -1 for c in ">>>><><"))
    res = classify_path(o, best_effort=True)
    assert res.verdict is Verdict.LTAS
    bench = F(1, 2**o.e)
    for kernel, eps in (
        (named_kernel("B1").matrix, F(1, 16)),
        (_exact_ab_kernel(F(1, 256)), F(1, 4)),
        (MB, F(1, 4)),
    ):
        assert hom_path(o, w_eps(kernel, eps)).density <= bench, kernel


def test_wedge_verdicts_survive_probes_small():
    # every classified path with e <= 6 respects both named-kernel probes
    bench_probe_kernels = [
        (named_kernel("B1").matrix, F(1, 16)),
        (MB, F(1, 8)),
        (_exact_ab_kernel(F(1, 64)), F(1, 8)),
    ]
    for e in range(2, 7):
        for dirs in product((1, -1), repeat=e):
            o = Orientation(dirs)
            res = classify_path(o, best_effort=True)
            if res.verdict not in (Verdict.LTS, Verdict.LTAS):
                continue
            bench = F(1, 2**e)
            for kernel, eps in bench_probe_kernels:
                t = hom_path(o, w_eps(kernel, eps)).density
                if res.verdict is Verdict.LTS:
                    assert t >= bench, (str(o), res.rule)
                else:
                    assert t <= bench, (str(o), res.rule)
