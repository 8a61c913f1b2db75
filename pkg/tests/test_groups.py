from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import zerosum.groups as groups
from zerosum import (AbelianGroup, InvalidGroupError, UndefinedHeightError,
                     UnsupportedGroupError, element_add, element_height,
                     element_order, element_scale, normalize_group,
                     primary_decomposition, subgroup_elements)
from conftest import (height_by_brute_force, order_by_repeated_addition,
                      order_multiset_of_raw_product)

C24 = AbelianGroup((2, 4))


class TestConstruction:
    def test_chain_accepted(self):
        g = AbelianGroup((2, 4))
        assert g.invariant_factors == (2, 4)
        assert g.cardinality == 8
        assert g.exponent == 4
        assert g.rank == 2

    def test_broken_chain_rejected(self):
        with pytest.raises(InvalidGroupError):
            AbelianGroup((4, 6))

    def test_factor_below_two_rejected(self):
        with pytest.raises(InvalidGroupError):
            AbelianGroup((1,))
        with pytest.raises(InvalidGroupError):
            normalize_group([1])
        with pytest.raises(InvalidGroupError):
            normalize_group([])

    def test_cardinality_cap(self, monkeypatch):
        monkeypatch.setattr(groups, "CARDINALITY_CAP", 100)
        with pytest.raises(InvalidGroupError):
            AbelianGroup((101,))
        AbelianGroup((10,))  # under the cap

    def test_p_group_data(self):
        assert C24.is_p_group
        assert C24.p == 2
        assert C24.p_exponents == (1, 2)
        c6 = AbelianGroup((6,))
        assert not c6.is_p_group
        with pytest.raises(UnsupportedGroupError):
            c6.p


class TestNormalize:
    def test_already_chain(self):
        assert normalize_group([2, 4]).invariant_factors == (2, 4)

    def test_recombination(self):
        # frozen from the primary decomposition {4} u {2,3} -> (2, 12)
        assert normalize_group([4, 6]).invariant_factors == (2, 12)

    def test_recombination_order_statistics_oracle(self):
        # the normalized group must be isomorphic to the raw direct product:
        # compare the full multisets of element orders
        for raw in [(4, 6), (6, 4), (2, 3), (12, 2), (6, 10, 15)]:
            normalized = normalize_group(raw)
            assert (order_multiset_of_raw_product(raw)
                    == order_multiset_of_raw_product(normalized.invariant_factors))

    @given(st.lists(st.integers(2, 30), min_size=1, max_size=4))
    @settings(max_examples=60, deadline=None)
    def test_idempotent(self, factors):
        once = normalize_group(factors)
        again = normalize_group(once.invariant_factors)
        assert once == again


class TestElementArithmetic:
    def test_add(self):
        assert (C24.element((1, 3)) + C24.element((1, 2))).coords == (0, 1)
        assert (C24.zero + C24.element((1, 3))).coords == (1, 3)
        c3 = AbelianGroup((3,))
        assert (c3.element((2,)) + c3.element((2,))).coords == (1,)

    def test_add_dimension_mismatch(self):
        c3 = AbelianGroup((3,))
        with pytest.raises(ValueError):
            C24.element((1, 3)) + c3.element((2,))
        with pytest.raises(ValueError):
            element_add(C24, C24.element((1, 0)), c3.element((1,)))

    def test_scale(self):
        assert (2 * C24.element((1, 3))).coords == (0, 2)
        assert (-1 * C24.element((1, 3))).coords == (1, 1)
        c9 = AbelianGroup((9,))
        assert element_scale(c9, 3, c9.element((1,))).coords == (3,)

    def test_coords_reduced(self):
        assert C24.element((3, 7)).coords == (1, 3)

    def test_rank_round_trip(self):
        for rank in range(C24.cardinality):
            assert C24.element_of_rank(rank).rank == rank
        # ranks are the mixed-radix index with the first coordinate fastest
        assert C24.element((1, 0)).rank == 1
        assert C24.element((0, 1)).rank == 2


class TestOrder:
    def test_examples_against_oracle(self):
        for coords, expected in [((1, 1), 4), ((0, 0), 1), ((1, 2), 2)]:
            g = C24.element(coords)
            assert order_by_repeated_addition(g) == expected if not g.is_zero else True
            assert g.order() == expected
            assert element_order(C24, g) == expected

    @given(st.integers(0, 7))
    @settings(max_examples=20, deadline=None)
    def test_order_divides_exponent(self, rank):
        g = C24.element_of_rank(rank)
        assert C24.exponent % g.order() == 0
        assert (g.order() == 1) == g.is_zero

    def test_oracle_agreement_everywhere(self):
        for group in [C24, AbelianGroup((3, 9)), AbelianGroup((2, 2, 4))]:
            for g in group.elements():
                assert g.order() == order_by_repeated_addition(g)


class TestHeight:
    def test_examples_against_oracle(self):
        assert C24.element((0, 2)).height() == height_by_brute_force(C24, C24.element((0, 2))) == 2
        assert C24.element((1, 2)).height() == height_by_brute_force(C24, C24.element((1, 2))) == 1

    def test_zero_is_an_error(self):
        with pytest.raises(UndefinedHeightError):
            C24.zero.height()

    def test_non_p_group_is_an_error(self):
        c6 = AbelianGroup((6,))
        with pytest.raises(UnsupportedGroupError):
            element_height(c6, c6.element((1,)))

    def test_definitional_property(self):
        # g = alpha(g) * h has a solution, g = (p * alpha(g)) * h has none
        for group in [C24, AbelianGroup((9,)), AbelianGroup((2, 2, 4))]:
            p = group.p
            for g in group.elements():
                if g.is_zero:
                    continue
                alpha = g.height()
                assert any(alpha * h == g for h in group.elements())
                assert not any((p * alpha) * h == g for h in group.elements())

    def test_oracle_agreement_everywhere(self):
        for group in [C24, AbelianGroup((8,)), AbelianGroup((3, 9))]:
            for g in group.elements():
                if not g.is_zero:
                    assert g.height() == height_by_brute_force(group, g)


class TestSubgroup:
    def test_example_d2(self):
        got = [e.coords for e in subgroup_elements(C24, 2)]
        assert got == [(0, 0), (1, 0), (0, 2), (1, 2)]

    def test_trivial_and_full(self):
        assert [e.coords for e in C24.subgroup_elements(1)] == [(0, 0)]
        assert len(C24.subgroup_elements(C24.exponent)) == C24.cardinality

    def test_size_formula_and_membership(self):
        for group in [C24, AbelianGroup((2, 12)), AbelianGroup((3, 9))]:
            for d in range(1, group.exponent + 1):
                if group.exponent % d != 0:
                    continue
                sub = group.subgroup_elements(d)
                expected = math.prod(math.gcd(d, n) for n in group.invariant_factors)
                assert len(sub) == expected
                assert all((d * x).is_zero for x in sub)
                ranks = [x.rank for x in sub]
                assert ranks == sorted(ranks)

    def test_non_divisor_rejected(self):
        with pytest.raises(ValueError):
            C24.subgroup_elements(3)


class TestPrimaryDecomposition:
    def test_examples(self):
        assert primary_decomposition(AbelianGroup((2, 12))) == (2, 3, 4)
        assert primary_decomposition(AbelianGroup((9,))) == (9,)
        assert primary_decomposition(AbelianGroup((6,))) == (2, 3)

    def test_part_count_and_product(self):
        for factors in [(2, 12), (6,), (2, 2, 4), (30,), (2, 6)]:
            group = AbelianGroup(factors)
            parts = group.primary_decomposition()
            expected_parts = sum(len(groups._factorize(n)) for n in factors)
            assert len(parts) == expected_parts
            assert math.prod(parts) == group.cardinality

    def test_recombination_reproduces_group(self):
        for factors in [(2, 12), (2, 2, 4), (6,), (3, 9)]:
            group = AbelianGroup(factors)
            assert normalize_group(group.primary_decomposition()) == group
