"""
SplitMix64 난수 스트림

인스턴스 생성, 초기 상태, 지역 탐색 시작점이 모두 이 스트림 하나로
만들어지므로 같은 시드는 어떤 구현에서든 비트 단위로 같은 결과를 냅니다.
스칼라 경로(파이썬 정수)와 블록 경로(numpy uint64)는 같은 상태를 공유합니다.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / 9007199254740992.0


def _mix(z: int) -> int:
    """SplitMix64 finalizer"""
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """64비트 SplitMix64 생성기"""

    def __init__(self, seed: int):
        self._state = int(seed) & MASK64

    @property
    def state(self) -> int:
        return self._state

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        return _mix(self._state)

    def next_float(self) -> float:
        """[0, 1) 균등 난수 - (u64 >> 11) * 2^-53"""
        return (self.next_u64() >> 11) * _INV_2_53

    def next_below(self, n: int) -> int:
        """u64 mod n"""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        return self.next_u64() % n

    def next_floats(self, count: int) -> np.ndarray:
        """next_float()를 count번 호출한 것과 동일한 블록"""
        if count <= 0:
            return np.empty(0, dtype=np.float64)

        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self._state) + steps * np.uint64(GOLDEN_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))

        self._state = (self._state + count * GOLDEN_GAMMA) & MASK64
        return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53


def derive_seed(seed: int, index: int) -> int:
    """seed 스트림의 index번째(0부터) 출력

    앞쪽 인덱스가 항상 같으므로 재시작 횟수를 늘려도 기존 시드는 유지됩니다.
    """
    if index < 0:
        raise ValueError(f"index must be >= 0, got {index}")
    state = (int(seed) + (index + 1) * GOLDEN_GAMMA) & MASK64
    return _mix(state)
