import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trustalloc import (
    AgentKind,
    DimensionMismatch,
    MissingAgent,
    RewardParams,
    ValidationError,
    agent_cost,
    allocate,
    expected_total_reward,
    reward_for_success,
)

H, R = AgentKind.HUMAN, AgentKind.ROBOT
unit = st.floats(min_value=0.0, max_value=1.0)


def flat_params(r_s, c_h, c_r, r_f=0.0):
    """Rewards and costs that do not depend on the requirements."""
    return RewardParams((0.0, 0.0), success_base=r_s, failure_value=r_f, cost_base={H: c_h, R: c_r})


class TestRewardParams:
    def test_cost_dominance_enforced(self):
        with pytest.raises(ValidationError):
            RewardParams((1.0, 1.0), cost_base={H: 1.0, R: 2.0})

    def test_equal_bases_rejected(self):
        with pytest.raises(ValidationError):
            RewardParams((1.0, 1.0), cost_base={H: 1.0, R: 1.0})

    def test_weight_dominance_enforced(self):
        with pytest.raises(ValidationError):
            RewardParams((1.0, 1.0), cost_base={H: 3, R: 1}, cost_weights={H: (0, 1), R: (1, 1)})

    def test_positive_failure_value_rejected(self):
        with pytest.raises(ValidationError):
            RewardParams((1.0,), failure_value=1.0, cost_base={H: 3, R: 1})


class TestRewardForSuccess:
    p = RewardParams((10.0, 10.0), cost_base={H: 3, R: 1})

    def test_zero_requirements(self):
        assert reward_for_success([0, 0], self.p) == 0.0

    def test_full_requirements(self):
        assert reward_for_success([1, 1], self.p) == 20.0

    def test_with_base(self):
        p = RewardParams((10.0, 10.0), success_base=2.0, cost_base={H: 3, R: 1})
        assert reward_for_success([0.5, 0.3], p) == pytest.approx(10.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            reward_for_success([0.5], self.p)

    @given(unit, unit, unit, unit)
    def test_monotone(self, a, b, da, db):
        lo = [a * (1 - da), b * (1 - db)]
        assert reward_for_success(lo, self.p) <= reward_for_success([a, b], self.p) + 1e-12


class TestAgentCost:
    p = RewardParams((1.0, 1.0), cost_base={H: 3.0, R: 1.0}, cost_weights={H: (2.0, 2.0), R: (0.0, 0.0)})

    def test_robot_constant(self):
        for lb in ([0, 0], [0.3, 0.9], [1, 1]):
            assert agent_cost(R, lb, self.p) == 1.0

    def test_human(self):
        assert agent_cost(H, [0.5, 0.5], self.p) == pytest.approx(5.0)

    def test_human_always_costlier(self):
        rng = np.random.default_rng(3)
        for lb in rng.random((500, 2)):
            assert agent_cost(H, lb, self.p) - agent_cost(R, lb, self.p) > 0


class TestExpectedTotalReward:
    def test_substitution(self):
        assert expected_total_reward(0.8, 10, 0, 2) == pytest.approx(6.0, abs=1e-12)
        assert expected_total_reward(0.8, 10, 0, 2) == pytest.approx(0.8 * 10 - 2, abs=1e-12)

    def test_certain_success(self):
        assert expected_total_reward(1.0, 7.5, -3.0, 1.25) == 7.5 - 1.25

    def test_equal_outcomes_cancel_trust(self):
        for tau in (0.0, 0.3, 0.5, 1.0):
            assert expected_total_reward(tau, 4, 4, 1) == pytest.approx(3.0)

    def test_bad_trust(self):
        with pytest.raises(ValueError):
            expected_total_reward(1.5, 1, 0, 0)

    @given(unit, unit, st.floats(0, 100), st.floats(-50, 0), st.floats(0, 50))
    def test_monotone_in_trust(self, t1, t2, r_s, r_f, c):
        lo, hi = sorted((t1, t2))
        assert expected_total_reward(lo, r_s, r_f, c) <= expected_total_reward(hi, r_s, r_f, c) + 1e-9


class TestAllocate:
    def test_equal_trust_cheaper_robot(self):
        d = allocate([0.5, 0.5], {H: 0.9, R: 0.9}, flat_params(10, 3, 1))
        assert d.chosen == R
        assert d.expected_rewards[R] == pytest.approx(8.0)
        assert d.expected_rewards[H] == pytest.approx(6.0)
        assert not d.tie_broken

    def test_trust_outweighs_cost(self):
        d = allocate([0.5, 0.5], {H: 0.9, R: 0.5}, flat_params(10, 3, 1))
        assert d.chosen == H
        assert d.expected_rewards[H] == pytest.approx(6.0)
        assert d.expected_rewards[R] == pytest.approx(4.0)

    def test_tie_goes_to_fewer_tasks(self):
        # E^H = 0.9*10 - 3 = 6 = 0.7*10 - 1 = E^R
        d = allocate([0, 0], {H: 0.9, R: 0.7}, flat_params(10, 3, 1), {H: 2, R: 5})
        assert d.chosen == H and d.tie_broken

    def test_tie_with_equal_counts_goes_to_robot(self):
        d = allocate([0, 0], {H: 0.9, R: 0.7}, flat_params(10, 3, 1), {H: 4, R: 4})
        assert d.chosen == R and d.tie_broken

    def test_final_tie_break_configurable(self):
        d = allocate([0, 0], {H: 0.9, R: 0.7}, flat_params(10, 3, 1), {H: 4, R: 4}, final_tie_break=H)
        assert d.chosen == H

    def test_missing_agent(self):
        with pytest.raises(MissingAgent):
            allocate([0, 0], {H: 0.5}, flat_params(10, 3, 1))

    @settings(max_examples=300)
    @given(unit, unit, st.floats(0, 50), st.floats(0, 20), st.sampled_from([0, 1, 2]))
    def test_shift_invariance(self, th, tr, r_s, k, h_count):
        # r_f = -k versus r_f = 0 with r_s + k: every expected reward moves by exactly k
        counts = {H: h_count, R: 1}
        d1 = allocate([0, 0], {H: th, R: tr}, flat_params(r_s, 3, 1, r_f=-k), counts)
        d2 = allocate([0, 0], {H: th, R: tr}, flat_params(r_s + k, 3, 1, r_f=0.0), counts)
        for kind in (H, R):
            assert d2.expected_rewards[kind] - d1.expected_rewards[kind] == pytest.approx(k, abs=1e-9)
        if abs(d1.expected_rewards[H] - d1.expected_rewards[R]) > 1e-6:
            assert d1.chosen == d2.chosen

    def test_dominance_property(self):
        rng = np.random.default_rng(11)
        for _ in range(2000):
            th = rng.random()
            tr = th + (1 - th) * rng.random()
            c_r = rng.random() * 5
            c_h = c_r + 1e-6 + rng.random() * 5
            d = allocate([0, 0], {H: th, R: tr}, flat_params(rng.random() * 20, c_h, c_r))
            assert d.chosen == R
