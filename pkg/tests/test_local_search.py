"""
지역 탐색 / MRLS 테스트
"""

import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.exceptions import ContractError
from core.generator import GenSpec, generate_instance
from core.local_search import (
    check_local_optimum,
    local_search_from,
    local_search_run,
    mrls_run,
    random_assignment,
)
from core.models import Assignment
from core.objective import total_cost
from core.prng import SplitMix64, derive_seed


def random_instances(count: int, seed: int = 4242):
    """n<=50, d<=8 랜덤 인스턴스"""
    rng = SplitMix64(seed)
    instances = []
    for _ in range(count):
        n = 2 + rng.next_below(49)
        d = 1 + rng.next_below(8)
        avg_degree = min(n - 1, 1 + rng.next_below(6))
        instances.append(
            generate_instance(GenSpec(n=n, d=d, avg_degree=avg_degree, seed=rng.next_u64()))
        )
    return instances


@pytest.mark.unit
class TestLocalSearch:
    """좌표 하강 지역 탐색 테스트"""

    def test_t2_from_worst_start(self, t2_instance):
        report = local_search_from(t2_instance, Assignment((1, 1)))
        assert report.solution == Assignment((0, 1))
        assert report.cost_trajectory[0] == pytest.approx(1.1)
        assert report.cost == pytest.approx(0.6, abs=1e-15)
        assert report.sweeps == 2

    def test_optimum_is_fixed_point(self, t2_instance):
        report = local_search_from(t2_instance, Assignment((0, 1)))
        assert report.solution == Assignment((0, 1))
        assert report.sweeps == 1
        assert report.cost_trajectory == [report.cost]

    def test_ties_keep_current_value(self, zero_instance):
        """모든 값이 동률이면 현재 값을 유지"""
        start = Assignment((1, 2, 1))
        report = local_search_from(zero_instance, start)
        assert report.solution == start
        assert report.sweeps == 1

    def test_invalid_start(self, t2_instance):
        with pytest.raises(ContractError):
            local_search_from(t2_instance, Assignment((0, 3)))

    def test_random_assignment_in_domain(self, small_generated):
        a = random_assignment(small_generated, 12)
        a.ensure_valid(small_generated)
        assert a == random_assignment(small_generated, 12)

    def test_local_optimum_postcondition(self):
        """50개 랜덤 인스턴스에서 결과는 1-변경 지역 최적, 비용은 엄격히 감소"""
        for k, inst in enumerate(random_instances(50)):
            report = local_search_run(inst, seed=k)
            assert check_local_optimum(inst, report.solution)
            assert report.cost == total_cost(inst, report.solution)
            trajectory = report.cost_trajectory
            assert all(b < a for a, b in zip(trajectory, trajectory[1:]))
            assert report.sweeps == len(trajectory)

    def test_check_local_optimum(self, t2_instance):
        assert check_local_optimum(t2_instance, Assignment((0, 1)))
        assert not check_local_optimum(t2_instance, Assignment((1, 0)))

    def test_deterministic(self, small_generated):
        a = local_search_run(small_generated, 99)
        b = local_search_run(small_generated, 99)
        assert a.solution == b.solution
        assert a.cost_trajectory == b.cost_trajectory


@pytest.mark.unit
class TestMrls:
    """다중 재시작 지역 탐색 테스트"""

    def test_best_of_restarts(self, small_generated):
        report = mrls_run(small_generated, restarts=12, seed=3)
        assert report.restarts_used == 12
        assert len(report.restart_costs) == 12
        assert report.cost == min(report.restart_costs)
        assert report.best_restart == report.restart_costs.index(report.cost)
        assert report.cost == total_cost(small_generated, report.solution)

    def test_restart_seeds(self, small_generated):
        """재시작 r은 derive_seed(seed, r)로 시작"""
        report = mrls_run(small_generated, restarts=4, seed=21)
        for r in range(4):
            single = local_search_run(small_generated, derive_seed(21, r))
            assert report.restart_costs[r] == single.cost

    def test_single_restart(self, t2_instance):
        report = mrls_run(t2_instance, restarts=1, seed=0)
        single = local_search_run(t2_instance, derive_seed(0, 0))
        assert report.solution == single.solution

    def test_more_restarts_never_worse(self, small_generated):
        """앞쪽 시드가 유지되므로 재시작을 늘리면 결과가 나빠지지 않는다"""
        few = mrls_run(small_generated, restarts=5, seed=8)
        many = mrls_run(small_generated, restarts=20, seed=8)
        assert many.cost <= few.cost
        assert many.restart_costs[:5] == few.restart_costs

    def test_parallel_identical(self, small_generated):
        sequential = mrls_run(small_generated, restarts=10, seed=6)
        parallel = mrls_run(small_generated, restarts=10, seed=6, workers=4)
        assert parallel.solution == sequential.solution
        assert parallel.restart_costs == sequential.restart_costs
        assert parallel.best_restart == sequential.best_restart

    def test_invalid_arguments(self, t2_instance):
        with pytest.raises(ContractError):
            mrls_run(t2_instance, restarts=0, seed=1)
        with pytest.raises(ContractError):
            mrls_run(t2_instance, restarts=2, seed=1, workers=0)
