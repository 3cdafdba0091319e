"""
pytest 설정 및 공통 픽스처
"""

import sys
from pathlib import Path

import pytest

# 프로젝트 루트를 Python 경로에 추가
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from core.generator import GenSpec, generate_instance
from core.models import CopInstance
from core.prng import SplitMix64


def make_t2() -> CopInstance:
    """2변수 예제 T2: f1=[0.2,0.8], f2=[0.5,0.1], f12=[[0.0,0.3],[0.4,0.2]]"""
    return CopInstance.build(
        domain_sizes=[2, 2],
        unary=[[0.2, 0.8], [0.5, 0.1]],
        edges=[(0, 1, [[0.0, 0.3], [0.4, 0.2]])],
    )


def random_tiny_instance(seed: int, max_n: int = 6, max_d: int = 3) -> CopInstance:
    """SplitMix64로 크기를 고른 작은 랜덤 인스턴스 (n<=max_n, d<=max_d)"""
    rng = SplitMix64(seed)
    n = 2 + rng.next_below(max_n - 1)
    d = 1 + rng.next_below(max_d)
    max_degree = n - 1
    avg_degree = min(max_degree, 1 + rng.next_below(max_degree))
    return generate_instance(GenSpec(n=n, d=d, avg_degree=avg_degree, seed=rng.next_u64()))


@pytest.fixture
def t2_instance():
    """T2 인스턴스 픽스처"""
    return make_t2()


@pytest.fixture
def zero_instance():
    """모든 비용이 0인 3변수 인스턴스"""
    return CopInstance.build(
        domain_sizes=[2, 3, 2],
        unary=[[0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0]],
        edges=[(0, 1, [[0.0] * 3] * 2), (1, 2, [[0.0] * 2] * 3)],
    )


@pytest.fixture
def isolated_instance():
    """간선이 없는 변수(3번)를 포함한 인스턴스"""
    return CopInstance.build(
        domain_sizes=[2, 2, 3],
        unary=[[0.1, 0.4], [0.3, 0.2], [0.7, 0.05, 0.9]],
        edges=[(0, 1, [[0.5, 0.1], [0.2, 0.6]])],
    )


@pytest.fixture
def tiny_instances():
    """시드 고정 작은 랜덤 인스턴스 팩토리"""
    def factory(count: int, base_seed: int = 2024, **kwargs):
        return [random_tiny_instance(base_seed + k, **kwargs) for k in range(count)]

    return factory


@pytest.fixture
def small_generated():
    """n=30, d=5, 평균 차수 4 생성 인스턴스"""
    return generate_instance(GenSpec(n=30, d=5, avg_degree=4, seed=11))


def pytest_runtest_setup(item):
    """테스트 실행 전 설정"""
    # 느린 테스트 건너뛰기
    if item.get_closest_marker("slow"):
        if item.config.getoption("--fast"):
            pytest.skip("Skipping slow test in fast mode")


def pytest_addoption(parser):
    """pytest 명령행 옵션 추가"""
    parser.addoption(
        "--fast",
        action="store_true",
        default=False,
        help="Run fast tests only, skip slow tests",
    )


# 테스트 결과 요약 출력
def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """테스트 완료 후 요약 정보 출력"""
    if hasattr(terminalreporter, "stats"):
        passed = len(terminalreporter.stats.get("passed", []))
        failed = len(terminalreporter.stats.get("failed", []))
        skipped = len(terminalreporter.stats.get("skipped", []))

        print(f"\n{'=' * 60}")
        print("협력 최적화 툴킷 테스트 결과 요약")
        print(f"{'=' * 60}")
        print(f"통과: {passed}개")
        print(f"실패: {failed}개")
        print(f"건너뜀: {skipped}개")
        print(f"종료 상태: {'성공' if exitstatus == 0 else '실패'}")
        print(f"{'=' * 60}")
