"""
목적 함수 평가와 에이전트별 분해

전역 목적 E(x)와 에이전트 i의 지역 목적
E_i(x) = f_i(x_i) + Σ_{j∈𝒩(i)} f_ij(x_i, x_j)
각 이진 비용은 양 끝점의 E_i에 한 번씩 들어가므로 Σ_i E_i = Σ f_i + 2 Σ f_ij 입니다.
x_i에 대한 E_i 최소화가 E 최소화와 같다는 성질만 성립합니다.
"""

import logging
from typing import Sequence, Set, Tuple

import numpy as np

from .exceptions import ContractError
from .models import Assignment, CopInstance, InstanceValidationResult

logger = logging.getLogger(__name__)


def validate_instance(inst: CopInstance) -> InstanceValidationResult:
    """CopInstance 불변식 검사 - 위반 목록 반환 (예외 없음)"""
    result = InstanceValidationResult()
    n = inst.n

    if n < 1:
        result.add_violation("instance has no variables")

    for i, d in enumerate(inst.domain_sizes):
        if d < 1:
            result.add_violation(f"empty domain at variable {i + 1}", variable=i)

    if len(inst.unary) != n:
        result.add_violation(f"expected {n} unary tables, found {len(inst.unary)}")
    for i, table in enumerate(inst.unary[:n]):
        expected = inst.domain_sizes[i]
        if table.ndim != 1 or table.shape[0] != expected:
            result.add_violation(
                f"dimension mismatch in unary table of variable {i + 1}: "
                f"{table.size} values, expected {expected}",
                variable=i,
            )
        elif not np.all(np.isfinite(table)):
            result.add_violation(f"non-finite cost at variable {i + 1}", variable=i)

    seen: Set[Tuple[int, int]] = set()
    for k, edge in enumerate(inst.edges):
        if not (0 <= edge.i < n and 0 <= edge.j < n):
            result.add_violation(
                f"endpoint out of range at edge {k}: ({edge.i + 1},{edge.j + 1})", edge_index=k
            )
            continue
        if edge.i == edge.j:
            result.add_violation(f"self-loop at edge {k}", edge_index=k, variable=edge.i)
            continue
        if edge.i > edge.j:
            result.add_violation(
                f"non-canonical endpoints at edge {k}: ({edge.i + 1},{edge.j + 1}) needs i<j",
                edge_index=k,
            )

        pair = (min(edge.i, edge.j), max(edge.i, edge.j))
        if pair in seen:
            result.add_violation(
                f"duplicate edge ({pair[0] + 1},{pair[1] + 1}) at edge {k}", edge_index=k
            )
        seen.add(pair)

        expected_shape = (inst.domain_sizes[edge.i], inst.domain_sizes[edge.j])
        if edge.table.shape != expected_shape:
            result.add_violation(
                f"dimension mismatch at edge {k}: {edge.table.size} values, "
                f"expected {expected_shape[0] * expected_shape[1]}",
                edge_index=k,
            )
        elif not np.all(np.isfinite(edge.table)):
            result.add_violation(f"non-finite cost at edge {k}", edge_index=k)

    # 인접 색인은 간선 목록에서 다시 만들어도 같아야 한다
    rebuilt = [[] for _ in range(n)]
    for k, edge in enumerate(inst.edges):
        for end in {edge.i, edge.j}:
            if 0 <= end < n:
                rebuilt[end].append(k)
    for i in range(n):
        if tuple(rebuilt[i]) != inst.adjacency[i]:
            result.add_violation(f"stale adjacency index at variable {i + 1}", variable=i)

    if not result.ok:
        logger.debug(f"인스턴스 검증 실패: {len(result.violations)}건")
    return result


def _check_variable(inst: CopInstance, i: int) -> None:
    if not 0 <= i < inst.n:
        raise ContractError(f"variable index {i} outside 0..{inst.n - 1}")


def total_cost(inst: CopInstance, a: Assignment) -> float:
    """E(x) - 변수 오름차순, 이어서 간선 (i, j) 오름차순으로 합산"""
    a.ensure_valid(inst)
    return total_cost_unchecked(inst, a.values)


def total_cost_unchecked(inst: CopInstance, values: Sequence[int]) -> float:
    """검증 없는 total_cost - 합산 순서는 동일 (전수 탐색 내부 루프용)"""
    total = 0.0
    for i, table in enumerate(inst.unary):
        total += float(table[values[i]])
    for k in inst.edge_order:
        edge = inst.edges[k]
        total += edge.cost(values[edge.i], values[edge.j])
    return total


def local_cost(inst: CopInstance, i: int, a: Assignment) -> float:
    """에이전트 i의 지역 목적 E_i(x)"""
    a.ensure_valid(inst)
    _check_variable(inst, i)
    values = a.values

    cost = float(inst.unary[i][values[i]])
    for k in inst.sorted_adjacency[i]:
        edge = inst.edges[k]
        cost += edge.cost(values[edge.i], values[edge.j])
    return cost


def local_cost_vector(inst: CopInstance, i: int, values: Sequence[int]) -> np.ndarray:
    """x_i의 모든 값에 대한 E_i(x_i, x̃_{-i}) - 다른 변수는 values로 고정

    검증 없는 내부 경로 (지역 탐색 내부 루프용).
    """
    vector = inst.unary[i].copy()
    for k in inst.sorted_adjacency[i]:
        edge = inst.edges[k]
        if edge.i == i:
            vector += edge.table[:, values[edge.j]]
        else:
            vector += edge.table[values[edge.i], :]
    return vector


def binary_cost_sum(inst: CopInstance, a: Assignment) -> float:
    """Σ_(i,j) f_ij(x_i, x_j) - 분해 항등식 확인용"""
    a.ensure_valid(inst)
    total = 0.0
    for k in inst.edge_order:
        edge = inst.edges[k]
        total += edge.cost(a[edge.i], a[edge.j])
    return total
