#!/usr/bin/env python3
"""
협력 최적화 툴킷 명령행 인터페이스

사용법:
    python coopt_cli.py generate --vars 121 --vals 50 --avg-degree 6 --seed 1 --out g.cop
    python coopt_cli.py solve qoa --instance g.cop --hbar 1 --alpha 2 --iters 20 --out g.sol
    python coopt_cli.py solve mrls --instance g.cop --restarts 100 --seed 1
    python coopt_cli.py exact --instance t.cop [--cap 10000000] [--method brute|cpsat]
    python coopt_cli.py bench --vars 121 --vals 50 --avg-degree 6 --instances 10 \\
        --restarts 100 --hbar 1 --iters 20 --seed 1 --out r.csv [--jobs 1] [--xlsx r.xlsx]

표준 출력에는 key=value 요약 한 줄만, 로그는 표준 오류로 나갑니다 (-v INFO, -vv DEBUG).

종료 코드:
    0 성공, 1 사용법 오류, 2 파싱/형식 오류, 3 가드/수치/계약 오류
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, TypeVar

import colorlog

from bench.harness import format_improvement, run_comparison, summarize
from bench.report import save_report, write_report_xlsx
from core.coopt_solver import SolverConfig, run_qoa
from core.exact import DEFAULT_STATE_SPACE_CAP, CpSatConfig, brute_force_optimum, cpsat_optimum
from core.exceptions import ContractError, GuardError, InstanceFormatError, NumericError
from core.generator import GenSpec, generate_instance
from core.instance_io import format_float, read_instance, save_instance, write_solution
from core.local_search import mrls_run
from core.models import Assignment
from core.prng import MASK64, derive_seed

logger = logging.getLogger("coopt_cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_FAULT = 3

LOG_FORMAT = "%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s"

T = TypeVar("T")


class UsageError(Exception):
    """잘못된 명령행 사용"""


class CliArgumentParser(argparse.ArgumentParser):
    """argparse 오류를 예외로 바꿔 종료 코드를 main()에서 결정"""

    def error(self, message):
        raise UsageError(message)


def configure_logging(verbosity: int) -> None:
    """colorlog 핸들러 하나를 표준 오류에 설치"""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG

    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "coopt_cli", False):
            root.removeHandler(handler)

    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(colorlog.ColoredFormatter(LOG_FORMAT))
    handler.coopt_cli = True
    root.addHandler(handler)
    root.setLevel(level)


def positive_int(text: str) -> int:
    """1 이상의 정수 인자"""
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def seed_value(text: str) -> int:
    """64비트 부호 없는 정수 시드"""
    value = int(text)
    if not 0 <= value <= MASK64:
        raise argparse.ArgumentTypeError(f"seed must be in 0..{MASK64}, got {value}")
    return value


def _from_args(factory: Callable[..., T], **kwargs) -> T:
    """명령행 값으로 설정 객체 생성 - 계약 위반은 사용법 오류"""
    try:
        return factory(**kwargs)
    except ContractError as exc:
        raise UsageError(str(exc)) from None


def emit(**fields) -> None:
    """key=value 요약 한 줄"""
    print(" ".join(f"{key}={value}" for key, value in fields.items()))


def _save_solution(path: Optional[str], assignment: Assignment, cost: float) -> None:
    if path:
        Path(path).write_text(write_solution(assignment, cost), encoding="utf-8")
        logger.info(f"해 저장: {path}")


def _solver_config(args, seed: int) -> SolverConfig:
    return _from_args(
        SolverConfig,
        hbar=args.hbar,
        alpha=args.alpha,
        max_iterations=args.iters,
        seed=seed,
        schedule=args.schedule,
        track_best=getattr(args, "track_best", False),
        tolerance=getattr(args, "tolerance", None),
        workers=getattr(args, "workers", 1),
    )


def cmd_generate(args) -> int:
    spec = _from_args(
        GenSpec, n=args.vars, d=args.vals, avg_degree=args.avg_degree, seed=args.seed
    )
    inst = generate_instance(spec)
    save_instance(inst, args.out)
    emit(n=inst.n, d=args.vals, m=inst.m, out=args.out)
    return EXIT_OK


def cmd_solve_qoa(args) -> int:
    cfg = _solver_config(args, args.seed)
    inst = read_instance(args.instance)
    report = run_qoa(inst, cfg)

    solution, cost = report.solution, report.cost
    if args.track_best and report.best_solution is not None:
        solution, cost = report.best_solution, report.best_cost
    _save_solution(args.out, solution, cost)

    fields: Dict[str, object] = {
        "cost": format_float(cost),
        "seconds": f"{report.wall_seconds:.3f}",
        "iterations": report.iterations,
        "residual": f"{report.residual_trajectory[-1]:.3e}",
        "stationary_residual": f"{report.stationary_residual:.3e}",
    }
    if args.track_best:
        fields["final_cost"] = format_float(report.cost)
    emit(**fields)
    return EXIT_OK


def cmd_solve_mrls(args) -> int:
    inst = read_instance(args.instance)
    report = mrls_run(inst, args.restarts, args.seed, workers=args.workers)
    _save_solution(args.out, report.solution, report.cost)
    emit(
        cost=format_float(report.cost),
        seconds=f"{report.wall_seconds:.3f}",
        restarts=report.restarts_used,
        best_restart=report.best_restart,
    )
    return EXIT_OK


def cmd_exact(args) -> int:
    inst = read_instance(args.instance)
    if args.method == "cpsat":
        result = cpsat_optimum(
            inst, _from_args(CpSatConfig, max_solving_time_seconds=args.time_limit)
        )
        assignment, cost, optimal, seconds = (
            result.assignment, result.cost, result.optimal, result.wall_seconds
        )
    else:
        start = time.perf_counter()
        assignment, cost = brute_force_optimum(inst, args.cap)
        optimal, seconds = True, time.perf_counter() - start
    _save_solution(args.out, assignment, cost)
    emit(
        cost=format_float(cost),
        seconds=f"{seconds:.3f}",
        method=args.method,
        optimal=str(optimal).lower(),
    )
    return EXIT_OK


def _bench_batch(args) -> List:
    if args.instance:
        return [Path(p) for p in args.instance]
    missing = [
        flag
        for flag, value in (
            ("--vars", args.vars),
            ("--vals", args.vals),
            ("--avg-degree", args.avg_degree),
            ("--instances", args.instances),
        )
        if value is None
    ]
    if missing:
        raise UsageError(f"bench needs {', '.join(missing)} (or --instance files)")
    return [
        _from_args(
            GenSpec,
            n=args.vars,
            d=args.vals,
            avg_degree=args.avg_degree,
            seed=derive_seed(args.seed, k),
        )
        for k in range(args.instances)
    ]


def cmd_bench(args) -> int:
    batch = _bench_batch(args)
    qoa_cfg = _solver_config(args, 0)
    master_seed = derive_seed(args.seed, len(batch))
    records = run_comparison(batch, args.restarts, qoa_cfg, master_seed, jobs=args.jobs)
    save_report(records, args.out)
    if args.xlsx:
        write_report_xlsx(records, args.xlsx)

    summary = summarize(records)
    mean = summary.mean_improvement
    emit(
        instances=summary.instances,
        qoa_wins=summary.qoa_wins,
        failures=summary.failures,
        mean_improvement_pct="" if mean is None else format_improvement(mean),
        out=args.out,
    )
    return EXIT_OK


def _add_qoa_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--hbar", type=float, default=1.0, help="스무딩 상수 ħ (기본 1)")
    parser.add_argument("--alpha", type=float, default=2.0, help="확률 지수 α (기본 2)")
    parser.add_argument("--iters", type=positive_int, default=20, help="최대 반복 횟수 (기본 20)")
    parser.add_argument(
        "--schedule",
        choices=["gauss-seidel", "jacobi"],
        default="gauss-seidel",
        help="스윕 내 갱신 순서",
    )


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(
        prog="coopt",
        description="협력 최적화(QOA) / MRLS 비교 툴킷",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v INFO, -vv DEBUG")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    generate = commands.add_parser("generate", help="랜덤 인스턴스 생성")
    generate.add_argument("--vars", type=positive_int, required=True, help="변수 수 n")
    generate.add_argument("--vals", type=positive_int, required=True, help="도메인 크기 d")
    generate.add_argument("--avg-degree", type=float, required=True, help="평균 노드 차수")
    generate.add_argument("--seed", type=seed_value, default=0)
    generate.add_argument("--out", required=True, help=".cop 출력 경로")
    generate.set_defaults(handler=cmd_generate)

    solve = commands.add_parser("solve", help="QOA 또는 MRLS로 풀기")
    algorithms = solve.add_subparsers(dest="algorithm", metavar="algorithm")
    algorithms.required = True

    qoa = algorithms.add_parser("qoa", help="협력 최적화 단일 시행")
    qoa.add_argument("--instance", required=True)
    _add_qoa_options(qoa)
    qoa.add_argument("--seed", type=seed_value, default=0)
    qoa.add_argument("--track-best", action="store_true", help="반복 중 최저 비용 해를 출력")
    qoa.add_argument("--tolerance", type=float, default=None, help="고정점 잔차 조기 종료 기준")
    qoa.add_argument("--workers", type=positive_int, default=1, help="Jacobi 스윕 스레드 수")
    qoa.add_argument("--out", help="SOL 출력 경로")
    qoa.set_defaults(handler=cmd_solve_qoa)

    mrls = algorithms.add_parser("mrls", help="다중 재시작 지역 탐색")
    mrls.add_argument("--instance", required=True)
    mrls.add_argument("--restarts", type=positive_int, default=100)
    mrls.add_argument("--seed", type=seed_value, default=0)
    mrls.add_argument("--workers", type=positive_int, default=1, help="재시작 병렬 스레드 수")
    mrls.add_argument("--out", help="SOL 출력 경로")
    mrls.set_defaults(handler=cmd_solve_mrls)

    exact = commands.add_parser("exact", help="정확해 (전수 탐색 또는 CP-SAT)")
    exact.add_argument("--instance", required=True)
    exact.add_argument(
        "--cap", type=positive_int, default=DEFAULT_STATE_SPACE_CAP, help="상태 공간 상한"
    )
    exact.add_argument("--method", choices=["brute", "cpsat"], default="brute")
    exact.add_argument("--time-limit", type=float, default=30.0, help="CP-SAT 시간 제한 (초)")
    exact.add_argument("--out", help="SOL 출력 경로")
    exact.set_defaults(handler=cmd_exact)

    bench = commands.add_parser("bench", help="QOA vs MRLS 비교 실험")
    bench.add_argument("--vars", type=positive_int)
    bench.add_argument("--vals", type=positive_int)
    bench.add_argument("--avg-degree", type=float)
    bench.add_argument("--instances", type=positive_int)
    bench.add_argument("--instance", action="append", help="생성 대신 사용할 .cop 파일 (반복 가능)")
    bench.add_argument("--restarts", type=positive_int, default=100)
    _add_qoa_options(bench)
    bench.add_argument("--seed", type=seed_value, default=0)
    bench.add_argument("--jobs", type=positive_int, default=1, help="동시 처리 인스턴스 수 (기본 1)")
    bench.add_argument("--out", required=True, help="CSV 보고서 경로")
    bench.add_argument("--xlsx", help="엑셀 보고서 경로 (선택)")
    bench.set_defaults(handler=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """명령 실행 후 종료 코드 반환 - 오류는 표준 오류에 한 줄"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.verbose)
        handler: Callable[[argparse.Namespace], int] = args.handler
        return handler(args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        code, message = EXIT_USAGE, str(exc)
    except (InstanceFormatError, OSError) as exc:
        code, message = EXIT_FORMAT, str(exc)
    except (GuardError, NumericError, ContractError) as exc:
        code, message = EXIT_FAULT, str(exc)

    print(f"error: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
