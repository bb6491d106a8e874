from itertools import islice

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from untrusted_noma import (
    DecodingOrder,
    conventional_order,
    count_secure,
    enumerate_orders,
    favourable_orders,
    is_favourable,
    is_secure,
    order_from_id,
    order_id,
    policy_order,
    policy_order_lpsu,
    policy_order_lpwu,
    secure_orders,
    self_last_transform,
    total_orders,
)


def secure_by_before_sets(order: DecodingOrder) -> bool:
    """Independent reformulation of the security criterion: for every pair of
    users m < n, user n must be in the set user m has already decoded when
    user n reaches its own signal."""
    n_users = order.n_users
    for n in range(2, n_users + 1):
        own_stage = order.stage_of(n, n)
        for m in range(1, n):
            decoded_by_m = set(order.columns[m - 1][: own_stage - 1])
            if n not in decoded_by_m:
                return False
    return True


class TestDecodingOrder:
    def test_non_permutation_columns_rejected(self):
        with pytest.raises(ValueError):
            DecodingOrder(columns=((1, 1), (1, 2)))
        with pytest.raises(ValueError):
            DecodingOrder(columns=((1, 2, 3), (1, 2)))

    def test_stage_lookup(self):
        order = DecodingOrder(columns=((3, 1, 2), (2, 3, 1), (1, 2, 3)))
        assert order.stage_of(1, 3) == 1
        assert order.stage_of(2, 1) == 3
        assert order.stage_of(3, 3) == 3


class TestEnumeration:
    @pytest.mark.parametrize("n,expected", [(1, 1), (2, 4), (3, 216)])
    def test_counts(self, n, expected):
        orders = list(enumerate_orders(n))
        assert len(orders) == expected == total_orders(n)
        assert len({o.columns for o in orders}) == expected  # pairwise distinct

    def test_ascending_ids_and_bijection(self):
        ids = [order_id(o) for o in enumerate_orders(3)]
        assert ids == list(range(216))
        for i in (0, 1, 17, 215):
            assert order_id(order_from_id(3, i)) == i

    def test_cap_refused_without_override(self):
        with pytest.raises(ValueError, match="allow_large_n"):
            next(enumerate_orders(5))
        with pytest.raises(ValueError):
            count_secure(5)

    def test_override_streams_without_materializing(self):
        head = list(islice(enumerate_orders(5, allow_large_n=True), 3))
        assert [order_id(o) for o in head] == [0, 1, 2]

    def test_n_zero_rejected(self):
        with pytest.raises(ValueError):
            next(enumerate_orders(0))


class TestConventionalOrder:
    def test_columns_descend(self):
        assert conventional_order(3).columns == ((3, 2, 1),) * 3
        assert conventional_order(1).columns == ((1,),)

    def test_insecure_for_two_users(self):
        assert is_secure(conventional_order(2)) is False

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_insecure_beyond_one_user(self, n):
        assert not is_secure(conventional_order(n))


class TestSecurePredicate:
    def test_unique_two_user_secure_order(self):
        assert is_secure(DecodingOrder(columns=((2, 1), (1, 2))))
        assert not is_secure(DecodingOrder(columns=((1, 2), (1, 2))))

    @pytest.mark.parametrize("n,expected", [(1, 1), (2, 1), (3, 12)])
    def test_counts(self, n, expected):
        assert count_secure(n) == expected

    def test_survivors_match_independent_predicate(self):
        survivors = [o for o in enumerate_orders(3) if is_secure(o)]
        recheck = [o for o in enumerate_orders(3) if secure_by_before_sets(o)]
        assert len(survivors) == 12
        assert survivors == recheck


class TestFavourable:
    def test_counts_match_formula(self):
        assert len(favourable_orders(3)) == 8  # ((3-1)!)^3
        assert len([o for o in enumerate_orders(2) if is_favourable(o)]) == 1

    def test_favourable_is_secure_exhaustive_n3(self):
        assert all(is_secure(o) for o in favourable_orders(3))

    def test_self_first_not_favourable(self):
        assert not is_favourable(DecodingOrder(columns=((2, 1), (2, 1))))

    def test_remainder_set_is_mixed_not_none_last(self):
        # every secure-but-not-favourable order still has >= 1 receiver that
        # decodes itself last; the natural remainder set is S minus L
        remainder = [o for o in secure_orders(3) if not is_favourable(o)]
        assert len(remainder) == 12 - 8
        for order in remainder:
            assert any(col[-1] == m + 1 for m, col in enumerate(order.columns))


class TestSelfLastTransform:
    def test_moves_self_to_end(self):
        order = DecodingOrder(columns=((1, 3, 2), (2, 1, 3), (3, 1, 2)))
        got = self_last_transform(order)
        assert got.columns[0] == (3, 2, 1)
        assert got.columns[1] == (1, 3, 2)
        assert got.columns[2] == (1, 2, 3)
        assert is_favourable(got)

    @given(st.integers(min_value=0, max_value=216 * 216))
    @settings(max_examples=100, deadline=None)
    def test_output_favourable_and_favourable_fixpoint(self, seed):
        oid = seed % total_orders(3)
        order = order_from_id(3, oid)
        out = self_last_transform(order)
        assert is_favourable(out)
        assert self_last_transform(out) == out
        if is_favourable(order):
            assert out == order

    def test_secure_input_stays_secure(self):
        for order in secure_orders(3):
            assert is_secure(self_last_transform(order))


class TestPolicyOrder:
    def test_descending_branch(self):
        assert policy_order(3, -0.5).columns == ((3, 2, 1), (3, 1, 2), (2, 1, 3))

    def test_ascending_branch(self):
        assert policy_order(3, 0.5).columns == ((2, 3, 1), (1, 3, 2), (1, 2, 3))

    def test_two_user_branches_coincide(self):
        expected = ((2, 1), (1, 2))
        assert policy_order(2, -0.9).columns == expected
        assert policy_order(2, 0.9).columns == expected

    def test_zero_beta_defaults_to_ascending_and_is_overridable(self):
        assert policy_order(3, 0.0) == policy_order_lpsu(3)
        assert policy_order(3, 0.0, zero_beta_branch="lpwu") == policy_order_lpwu(3)
        with pytest.raises(ValueError):
            policy_order(3, 0.0, zero_beta_branch="middle")

    @given(st.integers(min_value=1, max_value=7), st.floats(min_value=-1, max_value=1))
    @settings(max_examples=100, deadline=None)
    def test_always_favourable_hence_secure(self, n, beta):
        order = policy_order(n, beta)
        assert is_favourable(order)
        assert is_secure(order)

    def test_out_of_range_beta_rejected(self):
        with pytest.raises(ValueError):
            policy_order(3, 1.5)


class TestOrderId:
    def test_id_zero_is_lexicographically_first(self):
        assert order_from_id(2, 0).columns == ((1, 2), (1, 2))

    def test_round_trip_all_n3(self):
        for oid in range(216):
            assert order_id(order_from_id(3, oid)) == oid

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            order_from_id(2, 4)  # (2!)^2
        with pytest.raises(ValueError):
            order_from_id(2, -1)

    @given(st.integers(min_value=0, max_value=331775))
    @settings(max_examples=200, deadline=None)
    def test_round_trip_n4(self, oid):
        assert order_id(order_from_id(4, oid)) == oid

    def test_conventional_has_max_column_rank_shape(self):
        # every column (N..1) is the lexicographically last permutation
        n = 3
        oid = order_id(conventional_order(n))
        assert oid == total_orders(n) - 1
