import pytest
from conftest import cond, rows
from errors import MalformedConditionError
from twins import (
    MarkedCondition,
    TwinCertificate,
    canonicalize,
    find_amalgamable_pair,
    is_twin_pair,
    order_iso,
    supports_ordered,
)


@pytest.mark.unit
class TestIsTwinPair:
    def test_pair_without_root(self, fix_pair):
        cert = is_twin_pair(*fix_pair)
        assert cert is not None
        assert cert.sigma == {0: 1}
        assert cert.root == frozenset()
        assert cert.smash == {0: 0, 1: 0}
        assert cert.exchange == {0: 1, 1: 0}

    def test_identity_twins(self, fix_t):
        cert = is_twin_pair(fix_t, fix_t)
        assert cert is not None
        assert cert.sigma == {0: 0}
        assert cert.root == frozenset({0})

    def test_depth_mismatch(self, fix_q, fix_pair):
        assert is_twin_pair(fix_q, fix_pair[0]) is None

    def test_rooted_pair(self, fix_root):
        cert = is_twin_pair(*fix_root)
        assert cert is not None
        assert cert.sigma == {0: 0, 1: 2}
        assert cert.root == frozenset({0})
        assert cert.exchange == {0: 0, 1: 2, 2: 1}

    def test_root_must_be_fixed(self):
        p0 = cond([0, 2], 1, {(0, 0): {0}, (2, 0): {2}})
        p1 = cond([1, 2], 1, {(1, 0): {1}, (2, 0): {2}})
        # shared point 2 is fixed by σ here, moved to 3 below
        assert is_twin_pair(p0, p1) is not None
        p2 = cond([2, 3], 1, {(2, 0): {2}, (3, 0): {3}})
        assert is_twin_pair(p0, p2) is None

    def test_tables_must_match(self):
        p0 = cond([0, 1], 1, {(0, 0): {0}, (1, 0): {0, 1}})
        p1 = cond([2, 3], 1, {(2, 0): {2}, (3, 0): {3}})
        assert is_twin_pair(p0, p1) is None

    def test_inverted_certificate(self, fix_pair):
        cert = is_twin_pair(*fix_pair)
        back = is_twin_pair(fix_pair[1], fix_pair[0])
        assert back is not None
        assert cert.inverted() == back
        assert TwinCertificate.from_sigma({1: 0}) == back


@pytest.mark.unit
class TestShapes:
    def test_order_iso(self):
        assert order_iso([5, 2], [7, 9]) == {2: 7, 5: 9}
        assert order_iso([1], [1, 2]) is None

    def test_twins_share_canonical_form(self, fix_pair):
        assert canonicalize(fix_pair[0]) == canonicalize(fix_pair[1])

    def test_canonical_form_of_singleton(self, fix_t):
        assert canonicalize(fix_t) == (1, 1, ((0,),))

    def test_different_sizes_differ(self, fix_t, fix_q):
        assert canonicalize(fix_t) != canonicalize(fix_q)

    @pytest.mark.parametrize(
        "A0, A1, expected",
        [
            ([0], [1], True),
            ([0, 1], [0, 2], True),
            ([0, 2], [0, 1], False),
            ([1], [0], False),
            ([3, 4], [3, 4], True),
        ],
    )
    def test_supports_ordered(self, A0, A1, expected):
        assert supports_ordered(A0, A1) is expected


@pytest.mark.unit
class TestFindAmalgamablePair:
    def test_least_pair(self, fix_pair):
        p0, p1 = fix_pair
        third = cond([2], 2, rows(2, 2, {2}))
        family = [
            MarkedCondition(p0, 0),
            MarkedCondition(p1, 1),
            MarkedCondition(third, 2),
        ]
        found = find_amalgamable_pair(family)
        assert found is not None
        assert found[0] == (0, 1)
        assert found[1].sigma == {0: 1}

    def test_single_member(self, fix_t):
        assert find_amalgamable_pair([MarkedCondition(fix_t, 0)]) is None

    def test_non_twins(self, fix_pair, fix_q):
        family = [MarkedCondition(fix_pair[0], 0), MarkedCondition(fix_q, 1)]
        assert find_amalgamable_pair(family) is None

    def test_marks_must_increase(self, fix_pair):
        p0, p1 = fix_pair
        family = [MarkedCondition(p1, 1), MarkedCondition(p0, 0)]
        assert find_amalgamable_pair(family) is None

    def test_identical_members_do_not_qualify(self, fix_t):
        # a condition is its own twin, but the marks must strictly increase
        family = [MarkedCondition(fix_t, 0), MarkedCondition(fix_t, 0)]
        assert is_twin_pair(fix_t, fix_t) is not None
        assert find_amalgamable_pair(family) is None

    def test_mark_outside_support(self, fix_t):
        with pytest.raises(MalformedConditionError):
            MarkedCondition(fix_t, 3)
