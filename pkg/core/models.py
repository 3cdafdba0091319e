"""
도메인 모델 정의 - 이진 제약 최적화 문제(COP)의 핵심 엔티티들

E(x) = Σ_i f_i(x_i) + Σ_(i,j) f_ij(x_i, x_j)

변수 인덱스는 내부적으로 0부터 시작합니다 (파일 형식에서만 1부터).
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ContractError


def _frozen_array(values, ndim: Optional[int] = None) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    if ndim is not None and array.ndim != ndim and array.size == 0:
        array = array.reshape((0,) * ndim)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Edge:
    """이진 비용 함수 f_ij - i < j, table은 d_i x d_j 행 우선 행렬"""
    i: int
    j: int
    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "i", int(self.i))
        object.__setattr__(self, "j", int(self.j))
        object.__setattr__(self, "table", _frozen_array(self.table))

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.i, self.j)

    def other(self, k: int) -> int:
        """k의 반대편 끝점"""
        return self.j if k == self.i else self.i

    def cost(self, value_i: int, value_j: int) -> float:
        return float(self.table[value_i, value_j])


@dataclass(frozen=True, eq=False)
class CopInstance:
    """COP 인스턴스 - 생성 후 불변, 여러 실행이 공유해도 안전"""
    domain_sizes: Tuple[int, ...]
    unary: Tuple[np.ndarray, ...]
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        sizes = tuple(int(d) for d in self.domain_sizes)
        object.__setattr__(self, "domain_sizes", sizes)
        object.__setattr__(self, "unary", tuple(_frozen_array(u, 1) for u in self.unary))

        edges = []
        for edge in self.edges:
            if not isinstance(edge, Edge):
                edge = Edge(*edge)
            # 평탄한 행 우선 표는 크기가 맞을 때만 행렬로 펼친다 (불일치는 validate에서 보고)
            if edge.table.ndim == 1 and 0 <= edge.i < len(sizes) and 0 <= edge.j < len(sizes):
                shape = (sizes[edge.i], sizes[edge.j])
                if edge.table.size == shape[0] * shape[1]:
                    edge = Edge(edge.i, edge.j, edge.table.reshape(shape))
            edges.append(edge)
        object.__setattr__(self, "edges", tuple(edges))

    @classmethod
    def build(
        cls,
        domain_sizes: Sequence[int],
        unary: Sequence[Sequence[float]],
        edges: Sequence[Tuple[int, int, Sequence]] = (),
    ) -> "CopInstance":
        """리스트 기반 간편 생성자"""
        return cls(
            domain_sizes=tuple(domain_sizes),
            unary=tuple(unary),
            edges=tuple(Edge(i, j, table) for i, j, table in edges),
        )

    @property
    def n(self) -> int:
        """변수 수"""
        return len(self.domain_sizes)

    @property
    def m(self) -> int:
        """간선 수"""
        return len(self.edges)

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """변수별 인접 간선 인덱스 𝒩(i) - 저장 순서 유지"""
        incident: List[List[int]] = [[] for _ in range(self.n)]
        for k, edge in enumerate(self.edges):
            for end in {edge.i, edge.j}:
                if 0 <= end < self.n:
                    incident[end].append(k)
        return tuple(tuple(ks) for ks in incident)

    @cached_property
    def edge_order(self) -> Tuple[int, ...]:
        """(i, j) 오름차순 간선 인덱스 - 합산 순서 고정용"""
        return tuple(sorted(range(self.m), key=lambda k: self.edges[k].pair))

    @cached_property
    def sorted_adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """변수별 인접 간선을 (i, j) 오름차순으로"""
        return tuple(
            tuple(sorted(ks, key=lambda k: self.edges[k].pair)) for ks in self.adjacency
        )

    @property
    def state_space_size(self) -> int:
        """Π_i d_i (파이썬 정수, 오버플로 없음)"""
        size = 1
        for d in self.domain_sizes:
            size *= d
        return size

    def mean_degree(self) -> float:
        return 2.0 * self.m / self.n if self.n else 0.0

    def to_dict(self) -> Dict:
        """요약 정보 (로그/리포트용)"""
        return {
            "n": self.n,
            "m": self.m,
            "domain_sizes": list(self.domain_sizes),
            "mean_degree": self.mean_degree(),
            "state_space_size": self.state_space_size,
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, CopInstance):
            return NotImplemented
        if self.domain_sizes != other.domain_sizes or self.m != other.m:
            return False
        if not all(np.array_equal(a, b) for a, b in zip(self.unary, other.unary)):
            return False
        if len(self.unary) != len(other.unary):
            return False
        return all(
            a.pair == b.pair and np.array_equal(a.table, b.table)
            for a, b in zip(self.edges, other.edges)
        )


@dataclass(frozen=True)
class Assignment:
    """변수별 값 인덱스 (0부터) - 후보 해의 단위"""
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def with_value(self, i: int, value: int) -> "Assignment":
        values = list(self.values)
        values[i] = value
        return Assignment(tuple(values))

    def ensure_valid(self, inst: CopInstance) -> None:
        """길이와 도메인 범위 확인 - 위반 시 ContractError"""
        if len(self.values) != inst.n:
            raise ContractError(
                f"assignment length {len(self.values)} does not match n={inst.n}"
            )
        for i, (value, d) in enumerate(zip(self.values, inst.domain_sizes)):
            if not 0 <= value < d:
                raise ContractError(
                    f"value {value} of variable {i + 1} outside domain of size {d}"
                )


@dataclass(frozen=True)
class Violation:
    """인스턴스 불변식 위반 한 건"""
    message: str
    edge_index: Optional[int] = None
    variable: Optional[int] = None

    def __str__(self) -> str:
        return self.message


@dataclass
class InstanceValidationResult:
    """validate_instance 결과 - 위반은 예외가 아니라 데이터"""
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add_violation(
        self, message: str, edge_index: Optional[int] = None, variable: Optional[int] = None
    ):
        """위반 추가"""
        self.violations.append(Violation(message, edge_index=edge_index, variable=variable))

    @property
    def messages(self) -> List[str]:
        return [v.message for v in self.violations]
