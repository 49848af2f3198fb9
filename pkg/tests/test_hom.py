from fractions import Fraction
from itertools import product

import pytest

from toursid.core import (
    Orientation,
    cycle_digraph,
    digraph,
    directed_path_digraph,
    disjoint_union,
    parse_orientation,
    path_digraph,
)
from toursid.construct import named_kernel
from toursid.errors import CapExceeded
from toursid.hom import (
    hom_cycle,
    hom_forest,
    hom_generic,
    hom_path,
    t_kernel_cycle,
    t_kernel_path,
)
from toursid.tournament import (
    enumerate_tournaments,
    random_tournament,
    skew,
    skew_decompose,
    transitive,
    with_half_loops,
)

K2_HOST = with_half_loops(transitive(2))


def test_single_arc_into_k2():
    # 1/2 + 1/2 + 1 + 0 over the four maps
    assert hom_generic(digraph(2, [(0, 1)]), K2_HOST).raw == 2


def test_forward_path_unweighted_transitive():
    d = directed_path_digraph(2)
    assert hom_generic(d, transitive(3)).raw == 1  # only 0 -> 1 -> 2


def test_all_half_matrix_density():
    half = Fraction(1, 2)
    host = with_half_loops(transitive(1))
    d = digraph(1, [])
    assert hom_generic(d, host).density == 1
    rows = [[half] * 3 for _ in range(3)]
    from toursid.tournament import WeightedTournament, _freeze

    w = WeightedTournament(3, _freeze(rows), loops_half=True)
    patt = digraph(4, [(0, 1), (2, 1), (2, 3)])
    assert hom_generic(patt, w).density == Fraction(1, 2**3)


def test_generic_cap():
    with pytest.raises(CapExceeded):
        hom_generic(digraph(20, []), with_half_loops(transitive(3)))


def test_hom_path_forward_closed_form():
    # 1^T A^n 1 = (2n+2)/2^n for the two-vertex host with a unit arc
    for n in range(1, 9):
        o = Orientation(tuple([1] * n))
        assert hom_path(o, K2_HOST).raw == Fraction(2 * n + 2, 2**n)


def test_hom_path_matches_generic_exhaustive():
    hosts = [with_half_loops(t) for n in (2, 3) for t in enumerate_tournaments(n)]
    for e in range(1, 5):
        for dirs in product((1, -1), repeat=e):
            o = Orientation(dirs)
            d = path_digraph(o)
            for host in hosts[:16]:
                assert hom_path(o, host).raw == hom_generic(d, host).raw


def test_hom_cycle_matches_generic():
    host = with_half_loops(transitive(2))
    for ell in (3, 4):
        for dirs in product((1, -1), repeat=ell):
            o = Orientation(dirs)
            assert (
                hom_cycle(o, host).raw == hom_generic(cycle_digraph(o), host).raw
            )


def test_hom_cycle_c3_all_half():
    from toursid.tournament import WeightedTournament, _freeze

    half = Fraction(1, 2)
    w = WeightedTournament(2, _freeze([[half, half], [half, half]]), loops_half=True)
    assert hom_cycle(">>>", w).density == Fraction(1, 8)


def test_hom_cycle_c3_cyclic_triangle():
    from toursid.tournament import parse_tournament_text

    cyc = parse_tournament_text("tournament n=3\n010\n001\n100\n")
    assert hom_cycle(">>>", cyc).raw == 3  # three rotations of the one cyclic map


def test_hom_forest_matches_generic():
    t = with_half_loops(random_tournament(4, seed=6))
    patt = digraph(6, [(0, 1), (1, 2), (1, 3), (4, 5)])
    assert hom_forest(patt, t).raw == hom_generic(patt, t).raw


def test_t_kernel_path_b1():
    b1 = named_kernel("B1").matrix
    assert t_kernel_path(b1, 4) == Fraction(1, 16)
    assert t_kernel_path(b1, 2) == Fraction(-1, 4)
    assert t_kernel_path(b1, 3) == 0


def test_t_kernel_path_bprime():
    bp = named_kernel("BPrime").matrix
    # computed from the matrix: 1^T B^2 1 = -2, 1^T B^4 1 = 4
    assert t_kernel_path(bp, 2) == Fraction(-2, 27)
    assert t_kernel_path(bp, 4) == Fraction(4, 243)


def test_t_kernel_cycle_mbalanced():
    mb = named_kernel("MBalanced").matrix
    assert t_kernel_cycle(mb, 4) == Fraction(2, 9)
    assert t_kernel_cycle(mb, 6) == Fraction(-2, 27)
    assert t_kernel_cycle(mb, 5) == 0


def test_kernel_cycle_matches_generic():
    b1 = named_kernel("B1").matrix
    for ell in (4, 6):
        o = Orientation(tuple([1] * ell))
        d = cycle_digraph(o)
        assert t_kernel_cycle(b1, ell) == hom_generic(d, b1).density


def test_sign_lemma_random():
    # 1^T B^(2k) 1 <= 0 when 2k = 2 mod 4, >= 0 when 2k = 0 mod 4; same for traces
    for seed in range(20):
        b = skew_decompose(with_half_loops(random_tournament(7, seed)))
        for k in (1, 2, 3):
            tp = t_kernel_path(b, 2 * k)
            tc = t_kernel_cycle(b, 2 * k) if 2 * k >= 4 else None
            if k % 2 == 1:
                assert tp <= 0
                assert tc is None or tc <= 0
            else:
                assert tp >= 0
                assert tc is None or tc >= 0


def test_cauchy_schwarz_p5_vs_2p3():
    for seed in range(20):
        b = skew_decompose(with_half_loops(random_tournament(6, seed)))
        t5 = t_kernel_path(b, 4)
        t3 = t_kernel_path(b, 2)
        assert t5 >= t3 * t3 >= 0


def test_balancedness_iff_p3_zero():
    mb = named_kernel("MBalanced").matrix
    assert all(sum(row) == 0 for row in mb.entries)
    assert t_kernel_path(mb, 2) == 0
    b1 = named_kernel("B1").matrix
    assert t_kernel_path(b1, 2) != 0
    assert any(sum(row) != 0 for row in b1.entries)


def test_2p3_equals_p3_squared_generic():
    # density of the disjoint union is the product of densities
    b = skew_decompose(with_half_loops(random_tournament(4, seed=13)))
    p3 = directed_path_digraph(2)
    two_p3 = disjoint_union(p3, p3)
    assert hom_generic(two_p3, b).density == hom_generic(p3, b).density ** 2


def test_path_evaluators_agree_e6_n4():
    # hom_path (factor products) vs hom_forest (tree DP) are independent
    # exact routes; exhaustive agreement for e <= 6 over every host n <= 4,
    # with the brute-force map sum as a third route at n <= 3
    hosts_small = [with_half_loops(t) for n in (1, 2, 3) for t in enumerate_tournaments(n)]
    hosts_four = [with_half_loops(t) for t in enumerate_tournaments(4)]
    for e in range(1, 7):
        for dirs in product((1, -1), repeat=e):
            o = Orientation(dirs)
            d = path_digraph(o)
            for host in hosts_small:
                v1 = hom_path(o, host).raw
                assert v1 == hom_forest(d, host).raw
                assert v1 == hom_generic(d, host).raw
            for host in hosts_four:
                assert hom_path(o, host).raw == hom_forest(d, host).raw


def test_cycle_evaluator_agrees_with_bruteforce():
    hosts = [with_half_loops(t) for n in (2, 3) for t in enumerate_tournaments(n)]
    for ell in (3, 4, 5):
        for dirs in product((1, -1), repeat=ell):
            o = Orientation(dirs)
            d = cycle_digraph(o)
            for host in hosts:
                assert hom_cycle(o, host).raw == hom_generic(d, host).raw
