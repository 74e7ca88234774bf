import pytest
from conftest import cond
from core_conditions import Violation, check_extension, deepen
from errors import (
    ConfigurationError,
    InvalidSpaceError,
    NoAmalgamablePairError,
    NotAChainError,
    SimulationBudgetExceeded,
)
from generic_sim import (
    LimitStructure,
    SimulationConfig,
    check_p2_global,
    check_p3_global,
    export_fragment,
    fresh_twin,
    kill_irreducibility_attempt,
    limit_structure,
    run_simulation,
    unmet_obligations,
)
from twins import MarkedCondition

S = frozenset


@pytest.fixture
def crossing():
    """Point 0 sits in U(1,0) and U(2,0) but its only row is larger than their meet"""
    return cond([0, 1, 2], 1, {(0, 0): {0, 1, 2}, (1, 0): {0, 1}, (2, 0): {0, 2}})


@pytest.mark.unit
class TestSimulationConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"universe": 0, "depth": 1},
            {"universe": 2, "depth": 0},
            {"universe": 2, "depth": 1, "grow_rate": 1.5},
            {"universe": 2, "depth": 1, "grow_rate": -0.1},
        ],
    )
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(ConfigurationError):
            SimulationConfig(seed=0, **kwargs)


@pytest.mark.unit
class TestLimitStructure:
    def test_union_of_chain(self, fix_t, fix_q):
        struct = limit_structure([fix_t, fix_q, deepen(fix_q)])
        assert struct.points == (0, 1)
        assert struct.depth == 2
        assert struct.U[(0, 0)] == {0}
        assert struct.U[(1, 1)] == {1}
        assert len(struct.chain) == 3

    def test_empty_chain(self):
        struct = limit_structure([])
        assert (struct.points, struct.depth, struct.U) == ((), 0, {})

    def test_rejects_ascending_chain(self, fix_t, fix_q):
        with pytest.raises(NotAChainError):
            limit_structure([fix_q, fix_t])

    def test_rejects_invalid_member(self, fix_bad):
        with pytest.raises(NotAChainError):
            limit_structure([fix_bad])

    def test_global_checks(self, fix_bad):
        struct = LimitStructure(points=(0, 1), depth=1, U=dict(fix_bad.U))
        assert check_p3_global(struct).violations == [Violation("P3", (0, 1, 0))]
        assert check_p2_global(struct).ok

    def test_amalgam_as_one_element_chain(self, fix_amalg):
        struct = limit_structure([fix_amalg])
        assert check_p2_global(struct).ok
        assert check_p3_global(struct).ok

    def test_as_condition(self, fix_q):
        assert limit_structure([fix_q]).as_condition() == fix_q


@pytest.mark.unit
class TestUnmetObligations:
    def test_open_intersections(self, crossing):
        unmet = unmet_obligations(crossing)
        assert (0, (1, 0), (2, 0)) in unmet
        assert {x for x, _, _ in unmet} == {0}

    def test_deepening_meets_them(self, crossing):
        assert unmet_obligations(deepen(crossing)) == []

    def test_singleton_rows(self, fix_q):
        assert unmet_obligations(fix_q) == []


@pytest.mark.integration
class TestRunSimulation:
    def test_two_points_one_level(self):
        struct = run_simulation(SimulationConfig(universe=2, depth=1, seed=0))
        assert struct.points == (0, 1)
        assert struct.U == {(0, 0): S({0}), (1, 0): S({1})}
        # empty, add, deepen, add
        assert len(struct.chain) == 4

    @pytest.mark.parametrize("seed", range(5))
    def test_limit_is_valid(self, seed):
        cfg = SimulationConfig(universe=6, depth=3, seed=seed, grow_rate=0.7)
        struct = run_simulation(cfg)
        assert struct.points == tuple(range(6))
        assert struct.depth == 3
        assert check_p2_global(struct).ok
        assert check_p3_global(struct).ok

    def test_deterministic(self):
        cfg = SimulationConfig(universe=5, depth=2, seed=11, grow_rate=0.5)
        assert run_simulation(cfg).U == run_simulation(cfg).U

    def test_amalgamation_round(self):
        cfg = SimulationConfig(universe=2, depth=2, seed=3, amalgamations=1)
        struct = run_simulation(cfg)
        # A* = {0,1,2,3} plus a fresh block of 4·2 points
        assert len(struct.points) == 12
        assert check_p3_global(struct).ok
        assert check_extension(struct.chain[-1], struct.chain[-2]).holds

    def test_amalgamation_needs_two_levels(self):
        cfg = SimulationConfig(universe=3, depth=1, seed=0, amalgamations=2)
        assert run_simulation(cfg).points == (0, 1, 2)

    def test_budget(self):
        cfg = SimulationConfig(universe=3, depth=1, seed=0, budget=2)
        with pytest.raises(SimulationBudgetExceeded) as info:
            run_simulation(cfg)
        partial = info.value.partial
        assert isinstance(partial, LimitStructure)
        assert len(partial.chain) == 3

    def test_base_repair(self):
        cfg = SimulationConfig(
            universe=6, depth=1, seed=2, grow_rate=1.0, base_repair=True
        )
        struct = run_simulation(cfg)
        assert struct.unmet == unmet_obligations(struct.chain[-1])


@pytest.mark.unit
class TestKillerMove:
    def test_pair_is_amalgamated(self, fix_pair, fix_amalg):
        p0, p1 = fix_pair
        trace = kill_irreducibility_attempt(
            [MarkedCondition(p0, 0), MarkedCondition(p1, 1)], k=0, m=1
        )
        assert trace.p == fix_amalg

    def test_no_pair(self, fix_t):
        with pytest.raises(NoAmalgamablePairError):
            kill_irreducibility_attempt([MarkedCondition(fix_t, 0)], k=0, m=1)

    def test_two_non_twins(self, fix_t, fix_q):
        family = [MarkedCondition(fix_t, 0), MarkedCondition(fix_q, 1)]
        with pytest.raises(NoAmalgamablePairError):
            kill_irreducibility_attempt(family, k=0, m=1)


@pytest.mark.unit
class TestFragments:
    def test_fresh_twin(self, fix_q):
        assert fresh_twin(fix_q, 5).A == (5, 6)
        assert fresh_twin(fix_q, 0).A == (2, 3)

    def test_export_fragment(self, fix_amalg):
        struct = limit_structure([fix_amalg])
        space, family = export_fragment(struct, {0, 1})
        assert space.opens == {S(), S({0, 1})}
        assert family == (S({0, 1}),)

    def test_subset_outside_points(self, fix_amalg):
        with pytest.raises(InvalidSpaceError):
            export_fragment(limit_structure([fix_amalg]), {0, 7})


@pytest.mark.integration
def test_thirty_two_point_run():
    struct = run_simulation(SimulationConfig(universe=32, depth=4, seed=17))
    assert struct.points == tuple(range(32))
    assert struct.depth == 4
    assert check_p2_global(struct).ok
    assert check_p3_global(struct).ok
    for p in struct.chain:
        for key in p.pairs():
            assert struct.U[key] & p.support == p.U[key]
