"""
.cop 인스턴스 파일 / SOL 해 파일 입출력

형식 (UTF-8, 줄 단위):
    COP 1
    n <n>
    d <d_1> ... <d_n>
    u <i> <c_0> ... <c_{d_i-1}>          (i 오름차순, 1부터)
    e <i> <j> <d_i*d_j 행 우선 값>        ((i, j) 오름차순, i<j)
    end
'#'으로 시작하는 줄은 주석입니다. 실수는 유효숫자 17자리로 기록합니다.
"""

import logging
from pathlib import Path
from typing import Iterator, List, Optional, Set, Tuple, Union

import numpy as np

from .exceptions import ContractError, InstanceFormatError
from .models import Assignment, CopInstance, Edge
from .objective import validate_instance

logger = logging.getLogger(__name__)

MAGIC = "COP"
FORMAT_VERSION = "1"
SOLUTION_TAG = "SOL"


def format_float(value: float) -> str:
    """유효숫자 17자리 - 파싱하면 같은 비트로 돌아온다"""
    return format(float(value), ".17g")


def write_instance(inst: CopInstance) -> str:
    """CopInstance -> .cop 텍스트"""
    result = validate_instance(inst)
    if not result.ok:
        raise ContractError(f"cannot write invalid instance: {result.messages[0]}")

    lines = [
        f"{MAGIC} {FORMAT_VERSION}",
        f"n {inst.n}",
        "d " + " ".join(str(d) for d in inst.domain_sizes),
    ]
    for i, table in enumerate(inst.unary):
        lines.append(f"u {i + 1} " + " ".join(format_float(c) for c in table))
    for k in inst.edge_order:
        edge = inst.edges[k]
        values = " ".join(format_float(c) for c in edge.table.ravel())
        lines.append(f"e {edge.i + 1} {edge.j + 1} {values}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    """주석/빈 줄을 건너뛴 (줄 번호, 토큰) 목록"""
    for number, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield number, stripped.split()


def _parse_int(token: str, number: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceFormatError(f"malformed {what} '{token}'", number) from None


def _parse_floats(tokens: List[str], number: int) -> np.ndarray:
    try:
        values = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as exc:
        raise InstanceFormatError(f"malformed cost value ({exc})", number) from None
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise InstanceFormatError(f"non-finite cost value '{tokens[bad[0]]}'", number)
    return values


def parse_instance(text: str) -> CopInstance:
    """.cop 텍스트 -> CopInstance (오류는 줄 번호가 붙은 InstanceFormatError)"""
    lines = list(_content_lines(text))
    if not lines:
        raise InstanceFormatError("empty instance text")

    cursor = iter(lines)

    def expect(keyword: str) -> Tuple[int, List[str]]:
        try:
            number, tokens = next(cursor)
        except StopIteration:
            raise InstanceFormatError(f"unexpected end of input, expected '{keyword}'") from None
        if tokens[0] != keyword:
            raise InstanceFormatError(f"expected '{keyword}' line, found '{tokens[0]}'", number)
        return number, tokens

    number, tokens = expect(MAGIC)
    if len(tokens) != 2 or tokens[1] != FORMAT_VERSION:
        raise InstanceFormatError(f"unsupported format header '{' '.join(tokens)}'", number)

    number, tokens = expect("n")
    if len(tokens) != 2:
        raise InstanceFormatError("malformed 'n' line", number)
    n = _parse_int(tokens[1], number, "variable count")
    if n < 1:
        raise InstanceFormatError(f"variable count must be >= 1, got {n}", number)

    number, tokens = expect("d")
    if len(tokens) != n + 1:
        raise InstanceFormatError(
            f"dimension mismatch: 'd' line lists {len(tokens) - 1} sizes, expected {n}", number
        )
    domain_sizes = [_parse_int(t, number, "domain size") for t in tokens[1:]]
    for i, d in enumerate(domain_sizes):
        if d < 1:
            raise InstanceFormatError(f"domain size of variable {i + 1} must be >= 1", number)

    unary: List[np.ndarray] = []
    for i in range(n):
        number, tokens = expect("u")
        if len(tokens) < 2:
            raise InstanceFormatError("malformed 'u' line", number)
        index = _parse_int(tokens[1], number, "variable index")
        if index != i + 1:
            raise InstanceFormatError(f"expected unary line for variable {i + 1}, found {index}", number)
        values = tokens[2:]
        if len(values) != domain_sizes[i]:
            raise InstanceFormatError(
                f"dimension mismatch: {len(values)} unary values, expected {domain_sizes[i]}", number
            )
        unary.append(_parse_floats(values, number))

    edges: List[Edge] = []
    seen: Set[Tuple[int, int]] = set()
    previous: Optional[Tuple[int, int]] = None
    end_seen = False
    for number, tokens in cursor:
        keyword = tokens[0]
        if keyword == "end":
            if len(tokens) != 1:
                raise InstanceFormatError("malformed 'end' line", number)
            end_seen = True
            break
        if keyword != "e":
            raise InstanceFormatError(f"unexpected line type '{keyword}'", number)
        if len(tokens) < 3:
            raise InstanceFormatError("malformed 'e' line", number)

        i = _parse_int(tokens[1], number, "edge endpoint")
        j = _parse_int(tokens[2], number, "edge endpoint")
        if not (1 <= i < j <= n):
            raise InstanceFormatError(f"edge ({i},{j}) needs 1 <= i < j <= {n}", number)
        if (i, j) in seen:
            raise InstanceFormatError(f"duplicate edge ({i},{j})", number)
        if previous is not None and (i, j) < previous:
            raise InstanceFormatError(f"edge ({i},{j}) out of ascending order", number)

        expected = domain_sizes[i - 1] * domain_sizes[j - 1]
        values = tokens[3:]
        if len(values) != expected:
            raise InstanceFormatError(
                f"dimension mismatch: {len(values)} edge values, expected {expected}", number
            )
        table = _parse_floats(values, number).reshape(domain_sizes[i - 1], domain_sizes[j - 1])
        edges.append(Edge(i - 1, j - 1, table))
        seen.add((i, j))
        previous = (i, j)

    if not end_seen:
        raise InstanceFormatError("missing 'end' sentinel")
    trailing = next(cursor, None)
    if trailing is not None:
        raise InstanceFormatError("content after 'end' sentinel", trailing[0])

    return CopInstance(domain_sizes=tuple(domain_sizes), unary=tuple(unary), edges=tuple(edges))


def read_instance(path: Union[str, Path]) -> CopInstance:
    """파일에서 인스턴스 읽기"""
    path = Path(path)
    inst = parse_instance(path.read_text(encoding="utf-8"))
    logger.info(f"인스턴스 로드: {path} {inst.to_dict()}")
    return inst


def save_instance(inst: CopInstance, path: Union[str, Path]) -> Path:
    """파일로 인스턴스 저장"""
    path = Path(path)
    path.write_text(write_instance(inst), encoding="utf-8")
    logger.info(f"인스턴스 저장: {path}")
    return path


def write_solution(assignment: Assignment, cost: float) -> str:
    """SOL <cost> <v_1> ... <v_n>"""
    values = " ".join(str(v) for v in assignment.values)
    return f"{SOLUTION_TAG} {format_float(cost)} {values}\n"


def parse_solution(text: str) -> Tuple[Assignment, float]:
    """SOL 줄 -> (Assignment, cost)"""
    lines = list(_content_lines(text))
    if len(lines) != 1:
        raise InstanceFormatError(f"solution file must hold one line, found {len(lines)}")
    number, tokens = lines[0]
    if tokens[0] != SOLUTION_TAG or len(tokens) < 3:
        raise InstanceFormatError("malformed solution line", number)
    try:
        cost = float(tokens[1])
    except ValueError:
        raise InstanceFormatError(f"malformed cost '{tokens[1]}'", number) from None
    values = [_parse_int(t, number, "value index") for t in tokens[2:]]
    return Assignment(tuple(values)), cost
