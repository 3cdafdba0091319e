"""
랜덤 COP 인스턴스 생성기

변수 수, 도메인 크기, 평균 노드 차수, 시드로 제어합니다.
하나의 SplitMix64 스트림을 정해진 순서로 소비합니다:
    1. 간선 거절 샘플링 (i, j를 각각 (u64 mod n)+1로 뽑고 자기 루프/중복은 버림)
    2. 단항 비용 (변수 오름차순, 값 오름차순)
    3. 이진 비용 (정렬된 간선 순서, 행 우선)
같은 GenSpec은 어떤 구현에서든 비트 단위로 같은 인스턴스를 만듭니다.
"""

import logging
from dataclasses import dataclass
from typing import List, Set, Tuple

from .exceptions import ContractError, GuardError
from .models import CopInstance, Edge
from .prng import MASK64, SplitMix64

logger = logging.getLogger(__name__)


def _round_half_up(value: float) -> int:
    return int(value + 0.5)


@dataclass(frozen=True)
class GenSpec:
    """인스턴스 생성 사양"""
    n: int
    d: int
    avg_degree: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ContractError(f"n must be >= 1, got {self.n}")
        if self.d < 1:
            raise ContractError(f"d must be >= 1, got {self.d}")
        if self.avg_degree < 0:
            raise ContractError(f"avg_degree must be >= 0, got {self.avg_degree}")
        if not 0 <= self.seed <= MASK64:
            raise ContractError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def edge_count(self) -> int:
        """m = round(n * avg_degree / 2) - .5는 올림"""
        return _round_half_up(self.n * self.avg_degree / 2.0)

    @property
    def max_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def label(self) -> str:
        return f"n{self.n}_d{self.d}_k{self.avg_degree:g}_s{self.seed}"


def _sample_edges(rng: SplitMix64, n: int, m: int) -> List[Tuple[int, int]]:
    """서로 다른 무방향 쌍 m개 - (i, j) 오름차순, 0부터"""
    chosen: Set[Tuple[int, int]] = set()
    while len(chosen) < m:
        i = rng.next_below(n) + 1
        j = rng.next_below(n) + 1
        if i == j:
            continue
        pair = (min(i, j) - 1, max(i, j) - 1)
        if pair in chosen:
            continue
        chosen.add(pair)
    return sorted(chosen)


def generate_instance(spec: GenSpec) -> CopInstance:
    """GenSpec -> CopInstance (비용은 [0, 1) 균등)"""
    m = spec.edge_count
    if m > spec.max_edges:
        raise GuardError(
            f"{m} edges requested but only {spec.max_edges} distinct pairs exist for n={spec.n}",
            size=m,
        )

    logger.info(f"인스턴스 생성: {spec.label}, m={m}")
    rng = SplitMix64(spec.seed)

    pairs = _sample_edges(rng, spec.n, m)
    unary = [rng.next_floats(spec.d) for _ in range(spec.n)]
    edges = [
        Edge(i, j, rng.next_floats(spec.d * spec.d).reshape(spec.d, spec.d)) for i, j in pairs
    ]

    return CopInstance(
        domain_sizes=(spec.d,) * spec.n, unary=tuple(unary), edges=tuple(edges)
    )
