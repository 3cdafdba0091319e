"""
툴킷 공통 예외 계층

검증 위반(validate_instance)은 데이터로 반환하고, 여기 정의된 예외는
계약 위반, 파일 형식 오류, 상태 공간 가드, 수치 오류에만 사용합니다.
"""

from typing import Optional


class CopError(Exception):
    """모든 라이브러리 오류의 기반 클래스"""


class ContractError(CopError, ValueError):
    """사전 조건/계약 위반 (잘못된 설정, 도메인 밖 값, 형태 불일치 등)"""


class InstanceFormatError(CopError, ValueError):
    """.cop / SOL / CSV 파싱 오류 - 줄 번호 포함"""

    def __init__(self, reason: str, line_number: Optional[int] = None):
        self.reason = reason
        self.line_number = line_number
        if line_number is None:
            super().__init__(reason)
        else:
            super().__init__(f"line {line_number}: {reason}")


class GuardError(CopError):
    """상태 공간 또는 모델 크기 상한 초과"""

    def __init__(self, message: str, size: int):
        self.size = size
        super().__init__(message)


class NumericError(CopError, ArithmeticError):
    """언더플로/비유한 값 - 메시지에 해결 방법 포함"""
