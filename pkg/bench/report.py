"""
비교 결과 출력 - CSV 보고서와 엑셀 통합 문서

CSV 형식:
    instance,algorithm,trials,cost,seconds,improvement_pct
    cost 17 유효숫자, seconds 소수 3자리, improvement 소수 2자리, 해당 없으면 빈 칸
"""

import io
import logging
from pathlib import Path
from typing import Dict, List, Sequence, Union

import pandas as pd
from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, NamedStyle, PatternFill, Side

from core.exceptions import InstanceFormatError
from core.instance_io import format_float

from .harness import (
    ALGORITHM_MRLS,
    ALGORITHM_QOA,
    BenchRecord,
    format_improvement,
    improvement_pct,
    summarize,
)

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["instance", "algorithm", "trials", "cost", "seconds", "improvement_pct"]


def _record_row(record: BenchRecord) -> Dict[str, str]:
    return {
        "instance": record.instance_id,
        "algorithm": record.algorithm,
        "trials": str(record.trials),
        "cost": format_float(record.cost) if record.cost is not None else "",
        "seconds": f"{record.wall_seconds:.3f}",
        "improvement_pct": (
            format_improvement(record.improvement_pct)
            if record.improvement_pct is not None
            else ""
        ),
    }


def records_to_frame(records: Sequence[BenchRecord]) -> pd.DataFrame:
    """기록 -> 문자열 DataFrame (CSV 그대로의 표기)"""
    return pd.DataFrame([_record_row(r) for r in records], columns=REPORT_COLUMNS)


def write_report(records: Sequence[BenchRecord]) -> str:
    """CSV 텍스트 - 기록이 없으면 헤더만"""
    return records_to_frame(records).to_csv(index=False, lineterminator="\n")


def save_report(records: Sequence[BenchRecord], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(write_report(records), encoding="utf-8")
    logger.info(f"보고서 저장: {path} ({len(records)}행)")
    return path


def _optional_float(text: str, row: int, column: str):
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise InstanceFormatError(f"bad {column} value '{text}'", row) from None


def parse_report(text: str) -> List[BenchRecord]:
    """write_report의 역 - improvement 원시 값은 같은 인스턴스의 두 비용으로 다시 계산"""
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise InstanceFormatError("report is empty", 1) from None

    if list(frame.columns) != REPORT_COLUMNS:
        raise InstanceFormatError(
            f"expected header '{','.join(REPORT_COLUMNS)}', got '{','.join(frame.columns)}'", 1
        )

    records: List[BenchRecord] = []
    for offset, row in enumerate(frame.itertuples(index=False)):
        line = offset + 2  # 헤더 다음 줄부터
        if row.algorithm not in (ALGORITHM_QOA, ALGORITHM_MRLS):
            raise InstanceFormatError(f"unknown algorithm '{row.algorithm}'", line)
        try:
            trials = int(row.trials)
        except ValueError:
            raise InstanceFormatError(f"bad trials value '{row.trials}'", line) from None
        records.append(
            BenchRecord(
                instance_id=row.instance,
                algorithm=row.algorithm,
                trials=trials,
                cost=_optional_float(row.cost, line, "cost"),
                wall_seconds=_optional_float(row.seconds, line, "seconds") or 0.0,
                improvement_pct=_optional_float(row.improvement_pct, line, "improvement_pct"),
            )
        )

    mrls_costs = {
        r.instance_id: r.cost for r in records if r.algorithm == ALGORITHM_MRLS and r.cost is not None
    }
    for record in records:
        if record.algorithm != ALGORITHM_QOA or record.improvement_pct is None:
            continue
        mrls_cost = mrls_costs.get(record.instance_id)
        if mrls_cost is not None and record.cost is not None and record.cost > 0:
            record.improvement_pct = improvement_pct(mrls_cost, record.cost)
    return records


class ReportStyleManager:
    """엑셀 스타일 관리자"""

    def __init__(self):
        thin = Side(style="thin")
        border = Border(left=thin, right=thin, top=thin, bottom=thin)

        header = NamedStyle(name="header")
        header.font = Font(name="맑은 고딕", size=11, bold=True, color="FFFFFF")
        header.fill = PatternFill("solid", fgColor="366092")
        header.alignment = Alignment(horizontal="center", vertical="center")
        header.border = border

        data = NamedStyle(name="data")
        data.font = Font(name="맑은 고딕", size=10)
        data.alignment = Alignment(horizontal="left", vertical="center")
        data.border = border

        number = NamedStyle(name="number")
        number.font = Font(name="맑은 고딕", size=10)
        number.alignment = Alignment(horizontal="right", vertical="center")
        number.border = border

        self.styles = {"header": header, "data": data, "number": number}

    def register(self, wb: Workbook) -> None:
        for style in self.styles.values():
            wb.add_named_style(style)


NUMBER_FORMATS = {
    "cost": "0.000000",
    "seconds": "0.000",
    "improvement_pct": '0.00"%"',
}


def _write_header(ws, headers: Sequence[str]) -> None:
    for col, title in enumerate(headers, start=1):
        ws.cell(row=1, column=col, value=title).style = "header"
    ws.freeze_panes = "A2"


def write_report_xlsx(records: Sequence[BenchRecord], path: Union[str, Path]) -> Path:
    """"comparison" 시트(기록)와 "summary" 시트(요약)를 가진 엑셀 파일"""
    path = Path(path)
    wb = Workbook()
    ReportStyleManager().register(wb)

    ws = wb.active
    ws.title = "comparison"
    _write_header(ws, REPORT_COLUMNS)
    for row, record in enumerate(records, start=2):
        values = {
            "instance": record.instance_id,
            "algorithm": record.algorithm,
            "trials": record.trials,
            "cost": record.cost,
            "seconds": round(record.wall_seconds, 3),
            "improvement_pct": (
                float(format_improvement(record.improvement_pct))
                if record.improvement_pct is not None
                else None
            ),
        }
        for col, name in enumerate(REPORT_COLUMNS, start=1):
            cell = ws.cell(row=row, column=col, value=values[name])
            if name in ("instance", "algorithm"):
                cell.style = "data"
            else:
                cell.style = "number"
                if name in NUMBER_FORMATS:
                    cell.number_format = NUMBER_FORMATS[name]
    for col, width in zip("ABCDEF", (16, 10, 10, 16, 10, 16)):
        ws.column_dimensions[col].width = width

    summary = summarize(records)
    sheet = wb.create_sheet("summary")
    _write_header(sheet, ["항목", "값"])
    rows = [
        ("instances", summary.instances),
        ("qoa_wins", summary.qoa_wins),
        ("failures", summary.failures),
        ("mean_improvement_pct", summary.mean_improvement),
        ("min_improvement_pct", summary.min_improvement),
        ("max_improvement_pct", summary.max_improvement),
    ]
    for row, (key, value) in enumerate(rows, start=2):
        sheet.cell(row=row, column=1, value=key).style = "data"
        cell = sheet.cell(row=row, column=2, value=value)
        cell.style = "number"
        if key.endswith("_pct"):
            cell.number_format = NUMBER_FORMATS["improvement_pct"]
    sheet.column_dimensions["A"].width = 24
    sheet.column_dimensions["B"].width = 14

    wb.save(path)
    logger.info(f"엑셀 보고서 저장: {path}")
    return path
