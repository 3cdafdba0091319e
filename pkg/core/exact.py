"""
정확해 오라클

- brute_force_optimum: 상태 공간 전수 탐색 (작은 인스턴스, 테스트 오라클)
- cpsat_optimum: Google OR-Tools CP-SAT 0/1 모델 (전수 탐색이 불가능한 중간 규모)
"""

import itertools
import logging
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .exceptions import ContractError, GuardError
from .models import Assignment, CopInstance
from .objective import total_cost, total_cost_unchecked

logger = logging.getLogger(__name__)

DEFAULT_STATE_SPACE_CAP = 10 ** 7


def brute_force_optimum(
    inst: CopInstance, state_space_cap: int = DEFAULT_STATE_SPACE_CAP
) -> Tuple[Assignment, float]:
    """전역 최적 할당과 비용 - 동률이면 사전순으로 가장 작은 할당"""
    size = inst.state_space_size
    if size > state_space_cap:
        raise GuardError(
            f"state space {size} (product of domain sizes) exceeds cap {state_space_cap}",
            size=size,
        )

    logger.info(f"전수 탐색 시작: {size}개 상태")
    best_values: Optional[Tuple[int, ...]] = None
    best_cost = float("inf")

    # product()는 사전순으로 나열하므로 엄격히 작을 때만 교체하면 사전순 동률 처리가 된다
    for values in itertools.product(*(range(d) for d in inst.domain_sizes)):
        cost = total_cost_unchecked(inst, values)
        if cost < best_cost:
            best_cost = cost
            best_values = values

    assert best_values is not None
    return Assignment(best_values), best_cost


@dataclass
class CpSatConfig:
    """CP-SAT 설정"""
    max_solving_time_seconds: float = 30.0
    num_threads: int = 4
    enable_logging: bool = False
    cost_scale: float = 1e6  # 실수 비용 -> 정수 계수
    max_model_vars: int = 2_000_000

    def __post_init__(self):
        if self.max_solving_time_seconds <= 0:
            raise ContractError("max_solving_time_seconds must be > 0")
        if self.num_threads < 1:
            raise ContractError("num_threads must be >= 1")
        if self.cost_scale <= 0:
            raise ContractError("cost_scale must be > 0")


@dataclass
class ExactResult:
    """정확해 탐색 결과"""
    assignment: Assignment
    cost: float
    optimal: bool
    method: str
    wall_seconds: float = 0.0


def cpsat_model_size(inst: CopInstance) -> int:
    """0/1 변수 수 - Σ d_i + Σ d_i d_j"""
    return sum(inst.domain_sizes) + sum(edge.table.size for edge in inst.edges)


def cpsat_optimum(inst: CopInstance, config: Optional[CpSatConfig] = None) -> ExactResult:
    """CP-SAT으로 COP 풀기

    변수마다 one-hot 불리언, 간선마다 쌍 지시 변수를 두고 주변 합 등식으로 묶는다.
    계수는 cost_scale 배 후 반올림한 정수이므로 최적성은 스케일된 문제 기준이며,
    반환 비용은 원래 실수 목적으로 다시 계산한다.
    """
    from ortools.sat.python import cp_model

    config = config or CpSatConfig()
    size = cpsat_model_size(inst)
    if size > config.max_model_vars:
        raise GuardError(
            f"CP-SAT model needs {size} boolean variables, cap is {config.max_model_vars}",
            size=size,
        )

    start = time.perf_counter()
    model = cp_model.CpModel()
    scale = config.cost_scale

    objective_vars: List = []
    objective_coeffs: List[int] = []

    # 1. 변수별 값 선택 (정확히 하나)
    x = []
    for i, d in enumerate(inst.domain_sizes):
        row = [model.NewBoolVar(f"x_{i}_{a}") for a in range(d)]
        model.AddExactlyOne(row)
        x.append(row)
        for a in range(d):
            objective_vars.append(row[a])
            objective_coeffs.append(int(round(float(inst.unary[i][a]) * scale)))

    # 2. 간선별 쌍 지시 변수 - 행 합 = x_i, 열 합 = x_j
    for k, edge in enumerate(inst.edges):
        d_i, d_j = edge.table.shape
        y = [[model.NewBoolVar(f"y_{k}_{a}_{b}") for b in range(d_j)] for a in range(d_i)]
        for a in range(d_i):
            model.Add(sum(y[a]) == x[edge.i][a])
        for b in range(d_j):
            model.Add(sum(y[a][b] for a in range(d_i)) == x[edge.j][b])
        for a in range(d_i):
            for b in range(d_j):
                objective_vars.append(y[a][b])
                objective_coeffs.append(int(round(float(edge.table[a, b]) * scale)))

    model.Minimize(cp_model.LinearExpr.WeightedSum(objective_vars, objective_coeffs))

    solver = cp_model.CpSolver()
    solver.parameters.max_time_in_seconds = config.max_solving_time_seconds
    solver.parameters.num_search_workers = config.num_threads
    solver.parameters.log_search_progress = config.enable_logging

    logger.info(f"CP-SAT 시작: {size}개 불리언 변수")
    status = solver.Solve(model)

    if status not in (cp_model.OPTIMAL, cp_model.FEASIBLE):
        logger.error(f"CP-SAT 해결 실패: {solver.StatusName(status)}")
        raise GuardError(
            f"CP-SAT found no solution within {config.max_solving_time_seconds}s "
            f"({solver.StatusName(status)})",
            size=size,
        )

    values = []
    for row in x:
        values.append(next(a for a, var in enumerate(row) if solver.BooleanValue(var)))
    assignment = Assignment(tuple(values))
    cost = total_cost(inst, assignment)
    elapsed = time.perf_counter() - start

    optimal = status == cp_model.OPTIMAL
    logger.info(f"CP-SAT 완료: cost={cost:.6f} optimal={optimal} ({elapsed:.2f}초)")
    return ExactResult(
        assignment=assignment, cost=cost, optimal=optimal, method="cpsat", wall_seconds=elapsed
    )
