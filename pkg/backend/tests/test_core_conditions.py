"""Tests for conditions, membership in P and the extension order"""

import random

import pytest
from conftest import cond, rows
from core_conditions import (
    Condition,
    Violation,
    add_point,
    add_point_joining,
    cells_above,
    check_extension,
    check_structure,
    deepen,
    relabel,
    restrict,
    validate_condition,
)
from errors import DuplicatePointError, InvalidConditionError, MalformedConditionError
from hypothesis import given, settings
from hypothesis import strategies as st
from verifier import GenParams, gen_condition

SMALL = GenParams(max_points=4, max_depth=3, universe=16)


@pytest.mark.unit
class TestValidateCondition:
    def test_singleton_is_valid(self, fix_t):
        assert validate_condition(fix_t).ok

    def test_empty_condition_is_valid(self):
        assert validate_condition(Condition.empty()).ok

    def test_p3_violation_witness(self, fix_bad):
        verdict = validate_condition(fix_bad)
        assert not verdict.ok
        assert verdict.violations == [Violation("P3", (0, 1, 0))]

    def test_p2_missing_own_point(self):
        verdict = validate_condition(cond([0], 1, {(0, 0): set()}))
        assert verdict.first == Violation("P2", (0, 0))

    def test_p2_rows_must_decrease(self):
        c = cond([0, 1], 2, {(0, 0): {0}, (0, 1): {0, 1}, **rows(1, 2, {1})})
        assert Violation("P2", (0, 1)) in validate_condition(c).violations

    def test_strict_reading_accepts_equal_cells(self, fix_bad):
        assert validate_condition(fix_bad, strict=True).ok

    def test_strict_reading_rejects_constant_rows(self):
        c = cond([0], 2, rows(0, 2, {0}))
        assert validate_condition(c).ok
        assert validate_condition(c, strict=True).first == Violation("P2", (0, 1))


@pytest.mark.unit
class TestCheckStructure:
    def test_missing_cell(self):
        with pytest.raises(MalformedConditionError) as info:
            check_structure(cond([0], 2, {(0, 0): {0}}))
        assert info.value.field == "U"
        assert info.value.witness == (0, 1)

    def test_cell_outside_support(self):
        with pytest.raises(MalformedConditionError) as info:
            check_structure(cond([0], 1, {(0, 0): {0, 7}}))
        assert info.value.field == "U[0,0]"

    def test_cell_outside_domain(self):
        with pytest.raises(MalformedConditionError) as info:
            check_structure(cond([0], 1, {(0, 0): {0}, (0, 1): {0}}))
        assert info.value.witness == (0, 1)

    def test_negative_depth(self):
        with pytest.raises(MalformedConditionError) as info:
            check_structure(Condition(A=(), n=-1, U={}))
        assert info.value.field == "n"

    def test_validate_raises_on_structure(self):
        with pytest.raises(MalformedConditionError):
            validate_condition(cond([0], 1, {}))


@pytest.mark.unit
class TestCheckExtension:
    def test_extension_holds(self, fix_q, fix_t):
        assert check_extension(fix_q, fix_t).holds

    def test_reflexive(self, fix_t):
        assert check_extension(fix_t, fix_t).holds

    def test_clause_a(self, fix_t, fix_q):
        verdict = check_extension(fix_t, fix_q)
        assert (verdict.clause, verdict.witness) == ("a", (1,))

    def test_clause_b(self, fix_t):
        verdict = check_extension(fix_t, deepen(fix_t))
        assert (verdict.clause, verdict.witness) == ("b", (2, 1))

    def test_clause_c(self, fix_t):
        q = cond([0, 1], 1, {(0, 0): {0}, (1, 0): {1}})
        p = cond([0, 1], 1, {(0, 0): {0, 1}, (1, 0): {1}})
        verdict = check_extension(q, p)
        assert (verdict.clause, verdict.witness) == ("c", (0, 0))

    def test_clause_d1(self, fix_q):
        q = cond([0, 1, 2], 1, {(0, 0): {0, 2}, (1, 0): {1, 2}, (2, 0): {2}})
        verdict = check_extension(q, fix_q)
        assert not verdict.holds
        assert (verdict.clause, verdict.witness) == ("d1", ((0, 0), (1, 0)))

    def test_clause_d2(self):
        p = cond([0, 1], 1, {(0, 0): {0}, (1, 0): {0, 1}})
        q = cond([0, 1, 2], 1, {(0, 0): {0, 2}, (1, 0): {0, 1}, (2, 0): {2}})
        verdict = check_extension(q, p)
        assert (verdict.clause, verdict.witness) == ("d2", ((0, 0), (1, 0)))

    def test_invalid_input_raises(self, fix_bad, fix_t):
        with pytest.raises(InvalidConditionError):
            check_extension(fix_bad, fix_t)


@pytest.mark.unit
class TestExtensionSteps:
    def test_add_point(self, fix_t):
        q = add_point(fix_t, 5)
        assert q == cond([0, 5], 1, {(0, 0): {0}, (5, 0): {5}})
        assert check_extension(q, fix_t).holds

    def test_add_duplicate_point(self, fix_t):
        with pytest.raises(DuplicatePointError):
            add_point(fix_t, 0)

    def test_deepen(self, fix_t, fix_q):
        assert deepen(fix_t) == cond([0], 2, rows(0, 2, {0}))
        deeper = deepen(fix_q)
        assert deeper.n == 2
        assert deeper.U[(1, 1)] == frozenset({1})
        assert check_extension(deeper, fix_q).holds

    def test_add_point_joining(self, fix_t):
        q = add_point_joining(fix_t, 1, [(0, 0)])
        assert q.U[(0, 0)] == frozenset({0, 1})
        assert q.U[(1, 0)] == frozenset({1})
        assert check_extension(q, fix_t).holds

    def test_joining_disjoint_cells_is_rejected(self, fix_q):
        with pytest.raises(InvalidConditionError):
            add_point_joining(fix_q, 2, [(0, 0), (1, 0)])

    def test_cells_above(self):
        p = cond([0, 1], 1, {(0, 0): {0}, (1, 0): {0, 1}})
        assert cells_above(p, (0, 0)) == [(0, 0), (1, 0)]
        assert cells_above(p, (1, 0)) == [(1, 0)]


@pytest.mark.unit
class TestRelabelRestrict:
    def test_relabel(self, fix_root):
        p0, p1 = fix_root
        assert relabel(p0, {0: 0, 1: 2}) == p1

    def test_restrict_drops_point_everywhere(self, fix_root):
        p0, _ = fix_root
        assert restrict(p0, {0}) == cond([0], 2, rows(0, 2, {0}))


@pytest.mark.unit
class TestOrderLaws:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10**6))
    def test_generated_conditions_are_reflexive(self, seed):
        p = gen_condition(SMALL, random.Random(seed))
        assert validate_condition(p).ok
        assert check_extension(p, p).holds

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10**6))
    def test_steps_extend_and_compose(self, seed):
        p = gen_condition(SMALL, random.Random(seed))
        fresh = max(p.A, default=-1) + 1
        q = add_point(p, fresh)
        r = deepen(q)
        assert check_extension(q, p).holds
        assert check_extension(r, q).holds
        assert check_extension(r, p).holds
