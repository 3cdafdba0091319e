"""
비교 기준 알고리즘: 좌표 하강 지역 탐색과 다중 재시작 지역 탐색(MRLS)

한 변수를 바꿀 때 그 변수에 의존하는 항은 E_i뿐이므로
argmin_{x_i} E(x_i, x̃_{-i}) = argmin_{x_i} E_i(x_i, x̃_{-i}) 로 평가합니다.
현재 값이 최소값 중 하나이면 유지하므로 순환하지 않습니다.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .exceptions import ContractError
from .models import Assignment, CopInstance
from .objective import local_cost_vector, total_cost
from .prng import SplitMix64, derive_seed

logger = logging.getLogger(__name__)


@dataclass
class LsReport:
    """지역 탐색 / MRLS 결과"""
    solution: Assignment
    cost: float
    sweeps: int
    wall_seconds: float = 0.0
    restarts_used: int = 1
    restart_costs: List[float] = field(default_factory=list)
    best_restart: int = 0
    cost_trajectory: List[float] = field(default_factory=list)  # 시작 비용 + 변경이 있던 스윕 후 비용


def local_search_from(inst: CopInstance, initial: Assignment) -> LsReport:
    """주어진 시작 해에서 1-변경 지역 최적해까지 스윕 반복"""
    initial.ensure_valid(inst)
    start = time.perf_counter()
    values = list(initial.values)
    trajectory = [total_cost(inst, initial)]
    sweeps = 0

    while True:
        sweeps += 1
        changed = False
        for i in range(inst.n):
            local = local_cost_vector(inst, i, values)
            if local[values[i]] > local.min():
                values[i] = int(np.argmin(local))  # 최소값 중 가장 작은 인덱스
                changed = True
        if not changed:
            break
        trajectory.append(total_cost(inst, Assignment(tuple(values))))

    solution = Assignment(tuple(values))
    return LsReport(
        solution=solution,
        cost=trajectory[-1],
        sweeps=sweeps,
        wall_seconds=time.perf_counter() - start,
        cost_trajectory=trajectory,
    )


def random_assignment(inst: CopInstance, seed: int) -> Assignment:
    """변수 오름차순으로 u64 mod d_i"""
    rng = SplitMix64(seed)
    return Assignment(tuple(rng.next_below(d) for d in inst.domain_sizes))


def local_search_run(inst: CopInstance, seed: int) -> LsReport:
    """균등 랜덤 시작 해에서 지역 탐색 한 번"""
    start = time.perf_counter()
    report = local_search_from(inst, random_assignment(inst, seed))
    report.wall_seconds = time.perf_counter() - start
    report.restart_costs = [report.cost]
    return report


def check_local_optimum(inst: CopInstance, a: Assignment) -> bool:
    """한 변수 값 변경으로 비용이 엄격히 줄어들 수 없으면 True"""
    a.ensure_valid(inst)
    for i in range(inst.n):
        local = local_cost_vector(inst, i, a.values)
        if local.min() < local[a[i]]:
            return False
    return True


def mrls_run(
    inst: CopInstance, restarts: int, seed: int, workers: int = 1
) -> LsReport:
    """재시작 r마다 derive_seed(seed, r)로 지역 탐색, 최소 비용(동률이면 작은 r) 선택

    결과는 실행 순서와 무관합니다.
    """
    if restarts < 1:
        raise ContractError(f"restarts must be >= 1, got {restarts}")
    if workers < 1:
        raise ContractError(f"workers must be >= 1, got {workers}")

    start = time.perf_counter()
    seeds = [derive_seed(seed, r) for r in range(restarts)]
    logger.info(f"MRLS 시작: {restarts}회 재시작, n={inst.n}")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            runs = list(executor.map(lambda s: local_search_run(inst, s), seeds))
    else:
        runs = [local_search_run(inst, s) for s in seeds]

    best_index: Optional[int] = None
    for r, run in enumerate(runs):
        if best_index is None or run.cost < runs[best_index].cost:
            best_index = r
    assert best_index is not None
    best = runs[best_index]

    elapsed = time.perf_counter() - start
    logger.info(f"MRLS 완료: best cost={best.cost:.6f} (재시작 {best_index}), {elapsed:.3f}초")
    return LsReport(
        solution=best.solution,
        cost=best.cost,
        sweeps=sum(run.sweeps for run in runs),
        wall_seconds=elapsed,
        restarts_used=restarts,
        restart_costs=[run.cost for run in runs],
        best_restart=best_index,
        cost_trajectory=best.cost_trajectory,
    )
