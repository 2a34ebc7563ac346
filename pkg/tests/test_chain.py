from itertools import combinations_with_replacement, permutations

import numpy as np
import pytest

from qdeform.chain import (CORE_TABLE, ChainShape, Interval, build_interval,
                           chain_miniversal, intervals, pair_gamma, reduce_to_core)
from qdeform.deformation import Verdict, parameter_count, select_gamma, verify_decomposition
from qdeform.exceptions import BadInterval, OrderViolation
from qdeform.quiver import ElementaryIndex as E, Quiver, direct_sum
from oracles import oracle_parameter_count


def shapes_up_to(t_max):
    for t in range(1, t_max + 1):
        yield from ChainShape.all(t)


def ordered_pairs(t):
    ivs = intervals(t)
    return [(a, b) for a in ivs for b in ivs if a <= b]


class TestChainShape:
    def test_from_string_and_quiver(self):
        shape = ChainShape.from_string("FB")
        q = shape.quiver
        assert [(a.source, a.target) for a in q.arrows] == [(1, 2), (3, 2)]
        assert ChainShape.from_quiver(q) == shape
        assert str(shape) == "FB"

    def test_aliases(self):
        assert ChainShape.from_string("><") == ChainShape.from_string("FB")

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            ChainShape(3, ("F",))

    def test_not_a_chain(self):
        with pytest.raises(ValueError):
            ChainShape.from_quiver(Quiver.from_edges(3, [(1, 3), (2, 3)]))

    def test_all_orientations(self):
        assert len(list(ChainShape.all(4))) == 8


class TestBuildInterval:
    def test_full_two_chain(self):
        L = build_interval(ChainShape.from_string("F"), (1, 2))
        np.testing.assert_array_equal(L[1], [[1]])

    def test_middle_vertex(self):
        L = build_interval(ChainShape.from_string("FF"), (2, 2))
        assert L.dims == (0, 1, 0)
        assert L[1].shape == (1, 0) and L[2].shape == (0, 1)

    def test_single_vertex(self):
        L = build_interval(ChainShape(1), (1, 1))
        assert L.dims == (1,) and L.matrices == ()

    @pytest.mark.parametrize("iv", [(0, 1), (2, 1), (1, 4)])
    def test_bad(self, iv):
        with pytest.raises(BadInterval):
            build_interval(ChainShape.from_string("FF"), iv)

    def test_indecomposables_are_rigid(self):
        for shape in shapes_up_to(4):
            for iv in intervals(shape.t):
                assert parameter_count(build_interval(shape, iv)) == 0


class TestPairGamma:
    def test_adjacent_points(self):
        assert pair_gamma(ChainShape.from_string("F"), (1, 1), (2, 2)) == (E(1, 1, 1),)

    def test_aligned_overlap(self):
        assert pair_gamma(ChainShape.from_string("FF"), (1, 2), (2, 3)) == (E(2, 1, 1),)

    def test_opposed_overlap(self):
        assert pair_gamma(ChainShape.from_string("FB"), (1, 2), (2, 3)) == ()

    def test_nested_opposed(self):
        # arrow 2 points 3 -> 2 and carries [1; lambda]
        assert pair_gamma(ChainShape.from_string("FB"), (1, 3), (2, 2)) == (E(2, 2, 1),)
        assert pair_gamma(ChainShape.from_string("BF"), (1, 3), (2, 2)) == (E(2, 1, 2),)

    def test_order_violation(self):
        with pytest.raises(OrderViolation):
            pair_gamma(ChainShape.from_string("F"), (2, 2), (1, 1))

    def test_bad_interval(self):
        with pytest.raises(BadInterval):
            pair_gamma(ChainShape.from_string("F"), (1, 1), (1, 3))

    def test_exhaustive_against_engine(self):
        for shape in shapes_up_to(4):
            for a, b in ordered_pairs(shape.t):
                A = direct_sum(build_interval(shape, a), build_interval(shape, b))
                g = pair_gamma(shape, a, b)
                assert len(g) <= 1
                assert verify_decomposition(A, g) is Verdict.MINIVERSAL, (shape, a, b)
                assert len(g) == parameter_count(A) == oracle_parameter_count(A)
                # the reverse greedy order reproduces the closed form exactly
                assert select_gamma(A) == g


class TestReduceToCore:
    def test_identical_points(self):
        core = reduce_to_core(ChainShape(1), (1, 1), (1, 1))
        assert core.label == "L11+L11" and core.gamma == ()
        assert core.representation.matrices == ()

    def test_long_forward_chain(self):
        shape = ChainShape.from_string("FFFF")
        core = reduce_to_core(shape, (1, 3), (4, 5))
        assert core.label == "L11+L22"
        assert core.gamma == (E(3, 1, 1),)
        A = direct_sum(build_interval(shape, (1, 3)), build_interval(shape, (4, 5)))
        assert select_gamma(A) == core.gamma

    def test_nested(self):
        for shape in ChainShape.all(4):
            core = reduce_to_core(shape, (1, 4), (2, 3))
            assert core.label == "L13+L22"

    def test_translation_matches_closed_form(self):
        labels = set()
        for shape in shapes_up_to(4):
            for a, b in ordered_pairs(shape.t):
                core = reduce_to_core(shape, a, b)
                labels.add(core.label)
                assert core.gamma == pair_gamma(shape, a, b), (shape, a, b)
        assert labels == {"L11+L11", "L11+L22", "L12+L22", "L11+L12",
                          "L12+L23", "L13+L22", "split"}

    def test_table_regenerates(self):
        for (label, orient), slots in CORE_TABLE.items():
            if label == "split":
                continue
            (i1, j1), (i2, j2) = (tuple(map(int, s[1:])) for s in label.split("+"))
            shape = ChainShape(len(orient) + 1, tuple(orient))
            A = direct_sum(build_interval(shape, (i1, j1)), build_interval(shape, (i2, j2)))
            assert select_gamma(A) == tuple(E(*s) for s in slots), (label, orient)


class TestChainMiniversal:
    def test_single_interval(self):
        T = chain_miniversal(ChainShape.from_string("FF"), [(1, 3)])
        assert T.parameter_count == 0 == oracle_parameter_count(T.base)

    def test_aligned_pair(self, chain_ff_pair):
        T = chain_miniversal(ChainShape.from_string("FF"), [(1, 2), (2, 3)])
        assert T.base == chain_ff_pair and T.gamma == (E(2, 1, 1),)

    def test_three_summands(self):
        T = chain_miniversal(ChainShape.from_string("F"), [(1, 1), (2, 2), (1, 2)])
        assert T.parameter_count == oracle_parameter_count(T.base)
        assert set(T.gamma) == set(select_gamma(T.base))

    def test_empty(self):
        with pytest.raises(ValueError):
            chain_miniversal(ChainShape(1), [])

    def test_order_robustness(self):
        for shape in ChainShape.all(3):
            ivs = intervals(3)
            for triple in combinations_with_replacement(ivs, 3):
                counts = set()
                for perm in set(permutations(triple)):
                    T = chain_miniversal(shape, perm)
                    counts.add(T.parameter_count)
                    assert set(T.gamma) == set(select_gamma(T.base))
                assert len(counts) == 1

    def test_matches_engine_on_multisets(self):
        for shape in shapes_up_to(3):
            ivs = [Interval(*iv) for iv in intervals(shape.t)]
            for size in (1, 2, 3):
                for multiset in combinations_with_replacement(ivs, size):
                    T = chain_miniversal(shape, multiset)
                    assert set(T.gamma) == set(select_gamma(T.base))
