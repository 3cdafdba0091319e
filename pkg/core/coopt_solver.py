"""
협력 최적화 엔진 (QOA)

에이전트 i는 자기 값에 대한 소프트 결정 Ψ_i를 갖고, 이웃들의 할당 확률 p_j를
가중치로 e^{-E_i/ħ}를 주변화해 Ψ_i를 갱신합니다.

    Ψ_i(x_i) = e^{-f_i(x_i)/ħ} · Π_{j∈𝒩(i)} Σ_{x_j} e^{-f_ij(x_i,x_j)/ħ} p_j(x_j)
    p_i(x_i) = Ψ_i(x_i)^α / Σ Ψ_i^α

이웃이 아닌 변수는 Σ p = 1 이므로 1로 주변화됩니다. 갱신 직후 Σ Ψ_i² = 1로
정규화하고 x̃_i = argmax Ψ_i (동률이면 작은 인덱스)를 기록합니다.

연속 시간 진단:
    flow_step              ħ ∂ψ_i/∂t = -(1/Z_i) ψ_i · h_i 의 명시적 오일러 한 스텝
    closed_form_evolution  이웃 고정 시 ψ(x,t) ∝ ψ(x,0) e^{-h(x)t/ħ}
    stationary_residual    대각 연산자 h의 고유벡터 조건 잔차
"""

import itertools
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Union

import numpy as np

from .exceptions import ContractError, GuardError, NumericError
from .models import Assignment, CopInstance
from .objective import local_cost, total_cost
from .prng import MASK64, SplitMix64

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-9


class UpdateSchedule(Enum):
    """스윕 내 갱신 순서"""
    GAUSS_SEIDEL = "gauss_seidel"  # 같은 스윕에서 먼저 갱신된 이웃 사용
    JACOBI = "jacobi"              # 이전 반복의 상태만 사용


@dataclass
class SolverConfig:
    """QOA 설정 - 기본값은 ħ=1, α=2, 20회 반복"""
    hbar: float = 1.0
    alpha: float = 2.0
    max_iterations: int = 20
    seed: int = 0
    schedule: UpdateSchedule = UpdateSchedule.GAUSS_SEIDEL
    track_best: bool = False
    tolerance: Optional[float] = None  # 고정점 잔차 조기 종료 (기본 꺼짐)
    workers: int = 1                   # Jacobi 스윕 병렬 처리 스레드 수

    def __post_init__(self):
        if isinstance(self.schedule, str):
            try:
                self.schedule = UpdateSchedule(self.schedule.replace("-", "_"))
            except ValueError:
                raise ContractError(f"unknown schedule '{self.schedule}'") from None
        if not self.hbar > 0:
            raise ContractError(f"hbar must be > 0, got {self.hbar}")
        if not self.alpha > 0:
            raise ContractError(f"alpha must be > 0, got {self.alpha}")
        if self.max_iterations < 1:
            raise ContractError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not 0 <= self.seed <= MASK64:
            raise ContractError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.tolerance is not None and self.tolerance < 0:
            raise ContractError(f"tolerance must be >= 0, got {self.tolerance}")
        if self.workers < 1:
            raise ContractError(f"workers must be >= 1, got {self.workers}")


@dataclass
class AgentState:
    """에이전트별 할당 상태 함수 Ψ_i와 할당 확률 p_i"""
    psi: List[np.ndarray]
    prob: List[np.ndarray]
    iteration: int = 0

    def copy(self) -> "AgentState":
        return AgentState(
            psi=[p.copy() for p in self.psi],
            prob=[p.copy() for p in self.prob],
            iteration=self.iteration,
        )

    def norm_error(self) -> float:
        """max_i |Σ Ψ_i² - 1|"""
        return max(abs(float(np.dot(p, p)) - 1.0) for p in self.psi)

    def argmax_assignment(self) -> Assignment:
        """x̃_i = argmax Ψ_i - np.argmax는 첫 최댓값(작은 인덱스)을 돌려준다"""
        return Assignment(tuple(int(np.argmax(p)) for p in self.psi))


@dataclass
class SolverReport:
    """QOA 실행 결과"""
    solution: Assignment
    cost: float
    cost_trajectory: List[float] = field(default_factory=list)
    residual_trajectory: List[float] = field(default_factory=list)
    norm_error_trajectory: List[float] = field(default_factory=list)
    best_solution: Optional[Assignment] = None
    best_cost: Optional[float] = None
    stationary_residual: float = 0.0
    iterations: int = 0
    wall_seconds: float = 0.0
    final_state: Optional[AgentState] = None


def _normalize_l2(values: np.ndarray, what: str, advice: str) -> np.ndarray:
    norm = float(np.sqrt(np.dot(values, values)))
    if not np.isfinite(norm):
        raise NumericError(f"{what} is not finite; {advice}")
    if norm == 0.0:
        raise NumericError(f"{what} underflowed to zero; {advice}")
    return values / norm


def to_probability(psi_i: np.ndarray, alpha: float) -> np.ndarray:
    """p(x) = ψ(x)^α / Σ ψ(y)^α"""
    psi_i = np.asarray(psi_i, dtype=np.float64)
    if np.any(psi_i < 0):
        raise ContractError("assignment state must be non-negative")
    peak = float(np.max(psi_i)) if psi_i.size else 0.0
    if not peak > 0:
        raise NumericError("assignment state is all zero; probability undefined")
    # 최댓값으로 나눈 뒤 거듭제곱 - 큰 α에서도 오버플로 없음
    powered = (psi_i / peak) ** alpha
    return powered / powered.sum()


def init_state(inst: CopInstance, cfg: SolverConfig) -> AgentState:
    """Ψ_i를 [0,1) 균등 난수로 채우고 Σ Ψ² = 1로 정규화"""
    rng = SplitMix64(cfg.seed)
    psi: List[np.ndarray] = []
    prob: List[np.ndarray] = []
    for d in inst.domain_sizes:
        draw = rng.next_floats(d)
        while not np.any(draw > 0):
            draw = rng.next_floats(d)
        table = draw / np.sqrt(np.dot(draw, draw))
        psi.append(table)
        prob.append(to_probability(table, cfg.alpha))
    return AgentState(psi=psi, prob=prob, iteration=0)


def fixed_point_residual(prev: AgentState, next_state: AgentState) -> float:
    """max_i ||p_i(prev) - p_i(next)||_∞"""
    if len(prev.prob) != len(next_state.prob):
        raise ContractError(
            f"states cover {len(prev.prob)} and {len(next_state.prob)} variables"
        )
    residual = 0.0
    for i, (a, b) in enumerate(zip(prev.prob, next_state.prob)):
        if a.shape != b.shape:
            raise ContractError(f"probability table shape mismatch at variable {i + 1}")
        if a.size:
            residual = max(residual, float(np.max(np.abs(a - b))))
    return residual


def closed_form_evolution(
    h: np.ndarray, psi0: np.ndarray, t: float, hbar: float
) -> np.ndarray:
    """이웃 고정(대각 h) 상태의 닫힌 해 ψ(x,t) ∝ ψ(x,0) e^{-h(x)t/ħ}

    표준 기저가 고유벡터, h 값이 고유값이고 c_j = ψ(x_j, 0)인 경우입니다.
    """
    h = np.asarray(h, dtype=np.float64)
    psi0 = np.asarray(psi0, dtype=np.float64)
    if h.shape != psi0.shape:
        raise ContractError(f"h shape {h.shape} does not match state shape {psi0.shape}")
    if not (np.all(np.isfinite(h)) and np.all(np.isfinite(psi0))):
        raise NumericError("non-finite field or initial state")

    # min h 만큼 이동해도 정규화 후 결과는 같고 큰 t에서 언더플로를 막는다
    decay = np.exp(-(h - h.min()) * t / hbar)
    return _normalize_l2(psi0 * decay, "evolved state", "initial state has no weight left")


def stationary_residual(h: np.ndarray, psi: np.ndarray) -> float:
    """min_e ||h∘ψ - eψ||₂ (e* = Σ h|ψ|²) - ψ가 고유벡터이면 0"""
    h = np.asarray(h, dtype=np.float64)
    psi = np.asarray(psi, dtype=np.float64)
    weight = float(np.dot(psi, psi))
    if weight == 0.0:
        return 0.0
    energy = float(np.dot(h, psi * psi)) / weight
    return float(np.linalg.norm(h * psi - energy * psi))


class CooperativeOptimizer:
    """QOA 실행기 - 간선 커널 e^{-f_ij/ħ}를 한 번만 계산해 재사용"""

    def __init__(self, inst: CopInstance, cfg: Optional[SolverConfig] = None):
        self.inst = inst
        self.cfg = cfg or SolverConfig()
        self._unary_kernels: Dict[int, np.ndarray] = {}
        self._edge_kernels: Dict[int, np.ndarray] = {}

    def _unary_kernel(self, i: int) -> np.ndarray:
        kernel = self._unary_kernels.get(i)
        if kernel is None:
            kernel = np.exp(-self.inst.unary[i] / self.cfg.hbar)
            self._unary_kernels[i] = kernel
        return kernel

    def _edge_kernel(self, k: int) -> np.ndarray:
        kernel = self._edge_kernels.get(k)
        if kernel is None:
            kernel = np.exp(-self.inst.edges[k].table / self.cfg.hbar)
            self._edge_kernels[k] = kernel
        return kernel

    def raw_update(self, state: AgentState, i: int) -> np.ndarray:
        """정규화 전 Ψ_i - 인수분해 형태, 비용 O(Σ_{j∈𝒩(i)} d_i d_j)"""
        weights = self._unary_kernel(i).copy()
        for k in self.inst.sorted_adjacency[i]:
            edge = self.inst.edges[k]
            kernel = self._edge_kernel(k)
            oriented = kernel if edge.i == i else kernel.T
            weights *= oriented @ state.prob[edge.other(i)]
        return weights

    def update_agent(self, state: AgentState, i: int) -> np.ndarray:
        """Σ Ψ_i² = 1로 정규화된 새 Ψ_i"""
        return _normalize_l2(
            self.raw_update(state, i),
            f"assignment state of variable {i + 1}",
            f"increase hbar (currently {self.cfg.hbar:g})",
        )

    def _sweep(self, state: AgentState) -> None:
        alpha = self.cfg.alpha
        if self.cfg.schedule is UpdateSchedule.GAUSS_SEIDEL:
            for i in range(self.inst.n):
                psi_i = self.update_agent(state, i)
                state.psi[i] = psi_i
                state.prob[i] = to_probability(psi_i, alpha)
            return

        # Jacobi: 모든 에이전트가 스윕 시작 시점의 상태를 본다
        snapshot = state.copy()
        indices = range(self.inst.n)
        if self.cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=self.cfg.workers) as executor:
                tables = list(executor.map(lambda i: self.update_agent(snapshot, i), indices))
        else:
            tables = [self.update_agent(snapshot, i) for i in indices]
        for i, psi_i in enumerate(tables):
            state.psi[i] = psi_i
            state.prob[i] = to_probability(psi_i, alpha)

    def run(self) -> SolverReport:
        """메인 루프 - 반복마다 argmax 해, 비용, 잔차를 기록"""
        inst, cfg = self.inst, self.cfg
        start = time.perf_counter()
        logger.info(
            f"QOA 시작: n={inst.n}, m={inst.m}, ħ={cfg.hbar:g}, α={cfg.alpha:g}, "
            f"iters={cfg.max_iterations}, schedule={cfg.schedule.value}"
        )

        state = init_state(inst, cfg)
        report = SolverReport(solution=state.argmax_assignment(), cost=float("nan"))

        for k in range(1, cfg.max_iterations + 1):
            previous = state.copy()
            self._sweep(state)
            state.iteration = k

            solution = state.argmax_assignment()
            cost = total_cost(inst, solution)
            residual = fixed_point_residual(previous, state)

            report.cost_trajectory.append(cost)
            report.residual_trajectory.append(residual)
            report.norm_error_trajectory.append(state.norm_error())
            report.solution = solution
            report.cost = cost

            if cfg.track_best and (report.best_cost is None or cost < report.best_cost):
                report.best_cost = cost
                report.best_solution = solution

            logger.debug(f"반복 {k}: cost={cost:.6f} residual={residual:.3e}")

            if cfg.tolerance is not None and residual < cfg.tolerance:
                logger.info(f"고정점 잔차 {residual:.3e} < {cfg.tolerance:g}, 반복 {k}에서 종료")
                break

        report.iterations = state.iteration
        report.stationary_residual = max(
            stationary_residual(effective_field(inst, state, i), state.psi[i])
            for i in range(inst.n)
        )
        report.final_state = state
        report.wall_seconds = time.perf_counter() - start

        logger.info(
            f"QOA 완료: cost={report.cost:.6f}, 반복 {report.iterations}회 "
            f"({report.wall_seconds:.3f}초)"
        )
        return report


def update_agent(
    inst: CopInstance, state: AgentState, i: int, cfg: SolverConfig, normalize: bool = True
) -> np.ndarray:
    """에이전트 i의 새 Ψ_i (인수분해 갱신)"""
    optimizer = CooperativeOptimizer(inst, cfg)
    if normalize:
        return optimizer.update_agent(state, i)
    return optimizer.raw_update(state, i)


def naive_update_oracle(
    inst: CopInstance,
    state: AgentState,
    i: int,
    cfg: SolverConfig,
    state_space_cap: int = 10 ** 6,
    normalize: bool = True,
) -> np.ndarray:
    """Σ_{~x_i} e^{-E_i(x)/ħ} Π_{j≠i} p_j(x_j)를 전체 결합 공간에서 그대로 계산"""
    others = [j for j in range(inst.n) if j != i]
    space = 1
    for j in others:
        space *= inst.domain_sizes[j]
    if space > state_space_cap:
        raise GuardError(
            f"oracle needs {space} joint states of the other variables, cap is {state_space_cap}",
            size=space,
        )

    result = np.zeros(inst.domain_sizes[i], dtype=np.float64)
    values = [0] * inst.n
    for x_i in range(inst.domain_sizes[i]):
        values[i] = x_i
        total = 0.0
        for combo in itertools.product(*(range(inst.domain_sizes[j]) for j in others)):
            weight = 1.0
            for j, x_j in zip(others, combo):
                values[j] = x_j
                weight *= float(state.prob[j][x_j])
            energy = local_cost(inst, i, Assignment(tuple(values)))
            total += np.exp(-energy / cfg.hbar) * weight
        result[x_i] = total

    if not normalize:
        return result
    return _normalize_l2(
        result, f"assignment state of variable {i + 1}", f"increase hbar (currently {cfg.hbar:g})"
    )


def run_qoa(inst: CopInstance, cfg: Optional[SolverConfig] = None) -> SolverReport:
    """QOA 단일 시행"""
    return CooperativeOptimizer(inst, cfg).run()


def effective_field(inst: CopInstance, state: AgentState, i: int) -> np.ndarray:
    """대각 지역 에너지 h_i(x_i) = f_i(x_i) + Σ_{j∈𝒩(i)} Σ_{x_j} f_ij(x_i,x_j)|ψ_j(x_j)|²"""
    field_i = inst.unary[i].copy()
    for k in inst.sorted_adjacency[i]:
        edge = inst.edges[k]
        table = edge.table if edge.i == i else edge.table.T
        neighbour = state.psi[edge.other(i)]
        field_i += table @ (neighbour * neighbour)
    return field_i


def flow_step(
    inst: CopInstance,
    state: AgentState,
    dt: float,
    cfg: SolverConfig,
    agents: Optional[Iterable[int]] = None,
) -> AgentState:
    """명시적 오일러 한 스텝 후 Σ|ψ_i|² = 1 재정규화 (Z_i)

    모든 h_i는 스텝 시작 상태에서 계산합니다. agents가 주어지면 그 에이전트만
    움직이고 나머지는 고정합니다.
    """
    if not dt > 0:
        raise ContractError(f"dt must be > 0, got {dt}")

    targets = range(inst.n) if agents is None else sorted(set(agents))
    fields = {i: effective_field(inst, state, i) for i in targets}

    evolved = state.copy()
    for i, h_i in fields.items():
        psi_i = state.psi[i] - (dt / cfg.hbar) * state.psi[i] * h_i
        if not np.all(np.isfinite(psi_i)) or np.any(psi_i < 0):
            raise NumericError(
                f"flow step for variable {i + 1} left the valid range; use a smaller dt "
                f"(currently {dt:g})"
            )
        psi_i = _normalize_l2(
            psi_i, f"state of variable {i + 1}", f"use a smaller dt (currently {dt:g})"
        )
        evolved.psi[i] = psi_i
        evolved.prob[i] = to_probability(psi_i, cfg.alpha)
    return evolved


def state_from_tables(tables: List[Union[List[float], np.ndarray]], alpha: float = 2.0) -> AgentState:
    """주어진 Ψ 표로 상태 구성 (각 표는 Σ Ψ² = 1로 정규화)"""
    psi = [
        _normalize_l2(np.asarray(t, dtype=np.float64), f"state table {i + 1}", "supply a non-zero table")
        for i, t in enumerate(tables)
    ]
    return AgentState(psi=psi, prob=[to_probability(p, alpha) for p in psi])
