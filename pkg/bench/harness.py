"""
QOA vs MRLS 비교 실험 하네스

인스턴스마다 MRLS(재시작 R회) 한 번과 QOA 단일 시행 한 번을 각각 벽시계로 재고,
개선율 100·(MRLS - QOA)/QOA 를 QOA 행에 기록합니다.
시간 측정은 알고리즘 실행만 포함합니다 (생성/파싱 제외).
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from core.coopt_solver import SolverConfig, run_qoa
from core.exceptions import ContractError, CopError
from core.generator import GenSpec, generate_instance
from core.instance_io import read_instance
from core.local_search import mrls_run
from core.models import CopInstance
from core.prng import derive_seed

logger = logging.getLogger(__name__)

BatchItem = Union[GenSpec, str, Path, Tuple[str, CopInstance]]

ALGORITHM_QOA = "qoa"
ALGORITHM_MRLS = "mrls"


@dataclass
class BenchRecord:
    """비교 표의 한 행"""
    instance_id: str
    algorithm: str
    trials: int
    cost: Optional[float]
    wall_seconds: float
    improvement_pct: Optional[float] = None  # QOA 행에만
    error: Optional[str] = None

    def __post_init__(self):
        if self.wall_seconds < 0:
            raise ContractError(f"wall_seconds must be >= 0, got {self.wall_seconds}")

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass
class BenchSummary:
    """배치 요약"""
    instances: int = 0
    qoa_wins: int = 0
    failures: int = 0
    mean_improvement: Optional[float] = None
    min_improvement: Optional[float] = None
    max_improvement: Optional[float] = None


def improvement_pct(mrls_cost: float, qoa_cost: float) -> float:
    """100·(mrls - qoa)/qoa (원시 값, 반올림 없음)"""
    if not qoa_cost > 0:
        raise ContractError(f"qoa_cost must be > 0, got {qoa_cost}")
    return 100.0 * (mrls_cost - qoa_cost) / qoa_cost


def round_half_up(value: float, places: int = 2) -> Decimal:
    """표시용 반올림 (사사오입)"""
    quantum = Decimal(1).scaleb(-places)
    rounded = Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP)
    # -0.001 -> -0.00 이 되지 않도록 부호 없는 0으로
    return rounded.copy_abs() if rounded.is_zero() else rounded


def format_improvement(value: float) -> str:
    return str(round_half_up(value, 2))


def _resolve(index: int, item: BatchItem) -> Tuple[str, CopInstance]:
    """배치 항목 -> (라벨, 인스턴스)"""
    if isinstance(item, GenSpec):
        return f"g{index + 1}", generate_instance(item)
    if isinstance(item, (str, Path)):
        path = Path(item)
        return path.stem, read_instance(path)
    label, inst = item
    return str(label), inst


def _timed(func, *args):
    start = time.perf_counter()
    result = func(*args)
    return result, time.perf_counter() - start


def compare_instance(
    label: str,
    inst: CopInstance,
    mrls_restarts: int,
    qoa_cfg: SolverConfig,
    mrls_seed: int,
    qoa_seed: int,
) -> List[BenchRecord]:
    """인스턴스 하나에 대한 mrls/qoa 두 행 - 솔버 오류는 행에 기록하고 계속"""
    try:
        mrls, seconds = _timed(mrls_run, inst, mrls_restarts, mrls_seed)
        mrls_record = BenchRecord(label, ALGORITHM_MRLS, mrls_restarts, mrls.cost, seconds)
    except CopError as exc:
        logger.warning(f"{label}: MRLS 실패 - {exc}")
        mrls_record = BenchRecord(label, ALGORITHM_MRLS, mrls_restarts, None, 0.0, error=str(exc))

    try:
        qoa, seconds = _timed(run_qoa, inst, replace(qoa_cfg, seed=qoa_seed))
        qoa_record = BenchRecord(label, ALGORITHM_QOA, 1, qoa.cost, seconds)
    except CopError as exc:
        logger.warning(f"{label}: QOA 실패 - {exc}")
        qoa_record = BenchRecord(label, ALGORITHM_QOA, 1, None, 0.0, error=str(exc))

    if mrls_record.cost is not None and qoa_record.cost is not None:
        if qoa_record.cost > 0:
            qoa_record.improvement_pct = improvement_pct(mrls_record.cost, qoa_record.cost)
        else:
            logger.warning(f"{label}: QOA 비용 {qoa_record.cost} <= 0, 개선율 생략")

    improvement = (
        f"{format_improvement(qoa_record.improvement_pct)}%"
        if qoa_record.improvement_pct is not None
        else "-"
    )
    logger.info(
        f"{label}: MRLS {mrls_record.cost} ({mrls_record.wall_seconds:.3f}s) | "
        f"QOA {qoa_record.cost} ({qoa_record.wall_seconds:.3f}s) | 개선 {improvement}"
    )
    return [mrls_record, qoa_record]


def run_comparison(
    batch: Sequence[BatchItem],
    mrls_restarts: int,
    qoa_cfg: SolverConfig,
    master_seed: int,
    jobs: int = 1,
) -> List[BenchRecord]:
    """배치 전체 비교 - 기록 순서는 완료 순서와 무관하게 배치 순서

    인스턴스 k의 시드: MRLS derive_seed(master, 2k), QOA derive_seed(master, 2k+1).
    타이밍이 중요하면 jobs=1 (경합 없는 순차 실행)로 돌립니다.
    """
    items = list(batch)
    if not items:
        raise ContractError("batch must not be empty")
    if mrls_restarts < 1:
        raise ContractError(f"mrls_restarts must be >= 1, got {mrls_restarts}")
    if jobs < 1:
        raise ContractError(f"jobs must be >= 1, got {jobs}")

    logger.info(f"비교 실험 시작: {len(items)}개 인스턴스, MRLS {mrls_restarts}회")

    def process(index: int) -> List[BenchRecord]:
        label, inst = _resolve(index, items[index])
        return compare_instance(
            label,
            inst,
            mrls_restarts,
            qoa_cfg,
            derive_seed(master_seed, 2 * index),
            derive_seed(master_seed, 2 * index + 1),
        )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            groups = list(executor.map(process, range(len(items))))
    else:
        groups = [process(index) for index in range(len(items))]

    records = [record for group in groups for record in group]
    summary = summarize(records)
    logger.info(
        f"비교 실험 완료: QOA 우세 {summary.qoa_wins}/{summary.instances}, 실패 {summary.failures}"
    )
    return records


def summarize(records: Sequence[BenchRecord]) -> BenchSummary:
    """인스턴스 수, QOA 우세 수, 개선율 통계"""
    summary = BenchSummary()
    instances = []
    improvements: List[float] = []
    for record in records:
        if record.instance_id not in instances:
            instances.append(record.instance_id)
        if record.failed:
            summary.failures += 1
        if record.algorithm == ALGORITHM_QOA and record.improvement_pct is not None:
            improvements.append(record.improvement_pct)
            if record.improvement_pct > 0:
                summary.qoa_wins += 1

    summary.instances = len(instances)
    if improvements:
        summary.mean_improvement = sum(improvements) / len(improvements)
        summary.min_improvement = min(improvements)
        summary.max_improvement = max(improvements)
    return summary
