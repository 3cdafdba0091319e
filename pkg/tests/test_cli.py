"""
명령행 인터페이스 테스트
"""

import logging
import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import coopt_cli
from coopt_cli import EXIT_FAULT, EXIT_FORMAT, EXIT_OK, EXIT_USAGE, main
from core.instance_io import parse_solution, read_instance, save_instance
from core.models import Assignment


def parse_summary(line: str) -> dict:
    """key=value 요약 한 줄 -> dict"""
    return dict(item.split("=", 1) for item in line.split())


@pytest.fixture(autouse=True)
def reset_cli_logging():
    """main()이 설치한 로그 핸들러 정리"""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "coopt_cli", False):
            root.removeHandler(handler)
    root.setLevel(logging.WARNING)


@pytest.fixture
def t2_file(tmp_path, t2_instance):
    return save_instance(t2_instance, tmp_path / "t2.cop")


@pytest.mark.smoke
class TestGenerateCommand:
    """generate 명령 테스트"""

    def test_generate(self, tmp_path, capsys):
        out = tmp_path / "t.cop"
        code = main(
            ["generate", "--vars", "2", "--vals", "2", "--avg-degree", "1", "--seed", "7",
             "--out", str(out)]
        )
        assert code == EXIT_OK
        inst = read_instance(out)
        assert inst.n == 2 and inst.m == 1
        summary = parse_summary(capsys.readouterr().out.strip())
        assert summary["n"] == "2"
        assert summary["m"] == "1"

    def test_generate_byte_identical(self, tmp_path):
        argv = ["generate", "--vars", "30", "--vals", "4", "--avg-degree", "3", "--seed", "11"]
        main(argv + ["--out", str(tmp_path / "a.cop")])
        main(argv + ["--out", str(tmp_path / "b.cop")])
        assert (tmp_path / "a.cop").read_bytes() == (tmp_path / "b.cop").read_bytes()

    @pytest.mark.parametrize(
        "shape",
        [
            ["--vars", "0", "--vals", "2", "--avg-degree", "1"],
            ["--vars", "3", "--vals", "0", "--avg-degree", "1"],
            ["--vars", "3", "--vals", "2", "--avg-degree", "-1"],
        ],
    )
    def test_invalid_shape_is_usage_error(self, tmp_path, shape):
        assert main(["generate"] + shape + ["--out", str(tmp_path / "x.cop")]) == EXIT_USAGE

    def test_too_many_edges(self, tmp_path, capsys):
        code = main(
            ["generate", "--vars", "3", "--vals", "2", "--avg-degree", "3",
             "--out", str(tmp_path / "x.cop")]
        )
        assert code == EXIT_FAULT
        err = capsys.readouterr().err.strip().splitlines()
        assert len(err) == 1
        assert err[0].startswith("error: ")


@pytest.mark.smoke
class TestSolveCommand:
    """solve 명령 테스트"""

    def test_solve_qoa(self, t2_file, tmp_path, capsys):
        sol = tmp_path / "t2.sol"
        code = main(["solve", "qoa", "--instance", str(t2_file), "--out", str(sol)])
        assert code == EXIT_OK
        summary = parse_summary(capsys.readouterr().out.strip())
        assert float(summary["cost"]) == pytest.approx(0.6, abs=1e-15)
        assert "seconds" in summary
        assert summary["iterations"] == "20"
        assignment, cost = parse_solution(sol.read_text(encoding="utf-8"))
        assert assignment == Assignment((0, 1))
        assert cost == float(summary["cost"])

    def test_solve_qoa_options(self, t2_file, capsys):
        code = main(
            ["solve", "qoa", "--instance", str(t2_file), "--hbar", "0.5", "--alpha", "3",
             "--iters", "4", "--seed", "9", "--schedule", "jacobi", "--track-best"]
        )
        assert code == EXIT_OK
        summary = parse_summary(capsys.readouterr().out.strip())
        assert summary["iterations"] == "4"
        assert "final_cost" in summary

    def test_solve_mrls(self, t2_file, tmp_path, capsys):
        sol = tmp_path / "mrls.sol"
        code = main(
            ["solve", "mrls", "--instance", str(t2_file), "--restarts", "5", "--seed", "3",
             "--out", str(sol)]
        )
        assert code == EXIT_OK
        summary = parse_summary(capsys.readouterr().out.strip())
        assert summary["restarts"] == "5"
        assignment, _ = parse_solution(sol.read_text(encoding="utf-8"))
        assert assignment == Assignment((0, 1))

    def test_invalid_hbar(self, t2_file, capsys):
        """잘못된 인자 값은 사용법 오류"""
        code = main(["solve", "qoa", "--instance", str(t2_file), "--hbar", "0"])
        assert code == EXIT_USAGE
        err = capsys.readouterr().err.strip().splitlines()
        assert len(err) == 1
        assert err[0].startswith("error: ") and "hbar" in err[0]

    @pytest.mark.parametrize(
        "extra",
        [
            ["--iters", "0"],
            ["--alpha", "-1"],
            ["--tolerance", "-0.5"],
            ["--workers", "0"],
            ["--seed", "-1"],
            ["--schedule", "red-black"],
        ],
    )
    def test_invalid_qoa_values(self, t2_file, extra):
        assert main(["solve", "qoa", "--instance", str(t2_file)] + extra) == EXIT_USAGE

    def test_invalid_values_before_reading(self, tmp_path):
        """인자 오류가 파일 오류보다 먼저 보고된다"""
        missing = str(tmp_path / "nope.cop")
        assert main(["solve", "qoa", "--instance", missing, "--hbar", "-1"]) == EXIT_USAGE

    def test_invalid_restarts(self, t2_file):
        assert main(["solve", "mrls", "--instance", str(t2_file), "--restarts", "0"]) == EXIT_USAGE

    def test_underflow(self, tmp_path, capsys):
        path = tmp_path / "big.cop"
        path.write_text("COP 1\nn 1\nd 2\nu 1 1000 1000\nend\n", encoding="utf-8")
        code = main(["solve", "qoa", "--instance", str(path), "--hbar", "0.001"])
        assert code == EXIT_FAULT
        assert "increase hbar" in capsys.readouterr().err


@pytest.mark.smoke
class TestExactCommand:
    """exact 명령 테스트"""

    def test_exact_t2(self, t2_file, tmp_path, capsys):
        sol = tmp_path / "exact.sol"
        code = main(["exact", "--instance", str(t2_file), "--out", str(sol)])
        assert code == EXIT_OK
        summary = parse_summary(capsys.readouterr().out.strip())
        assert summary["optimal"] == "true"
        assert summary["method"] == "brute"
        assert parse_solution(sol.read_text(encoding="utf-8"))[0] == Assignment((0, 1))

    def test_exact_guard(self, tmp_path, capsys):
        """50^121 > 상한 -> 종료 코드 3"""
        path = tmp_path / "t121.cop"
        assert main(
            ["generate", "--vars", "121", "--vals", "50", "--avg-degree", "6", "--seed", "1",
             "--out", str(path)]
        ) == EXIT_OK
        capsys.readouterr()
        code = main(["exact", "--instance", str(path)])
        assert code == EXIT_FAULT
        err = capsys.readouterr().err.strip().splitlines()
        assert len(err) == 1
        assert err[0].startswith("error: state space")

    def test_exact_cap(self, t2_file):
        assert main(["exact", "--instance", str(t2_file), "--cap", "3"]) == EXIT_FAULT

    def test_exact_cpsat(self, t2_file, capsys):
        pytest.importorskip("ortools")
        code = main(["exact", "--instance", str(t2_file), "--method", "cpsat"])
        assert code == EXIT_OK
        summary = parse_summary(capsys.readouterr().out.strip())
        assert float(summary["cost"]) == pytest.approx(0.6, abs=1e-15)


class TestErrorMapping:
    """종료 코드 매핑 테스트"""

    def test_no_command(self, capsys):
        assert main([]) == EXIT_USAGE
        assert capsys.readouterr().err.startswith("error: ")

    def test_unknown_flag(self, t2_file):
        assert main(["exact", "--instance", str(t2_file), "--bogus"]) == EXIT_USAGE

    def test_bad_number(self, tmp_path):
        assert main(
            ["generate", "--vars", "abc", "--vals", "2", "--avg-degree", "1",
             "--out", str(tmp_path / "x.cop")]
        ) == EXIT_USAGE

    def test_missing_algorithm(self, t2_file):
        assert main(["solve", "--instance", str(t2_file)]) == EXIT_USAGE

    def test_help(self, capsys):
        assert main(["--help"]) == EXIT_OK
        assert "generate" in capsys.readouterr().out

    def test_parse_error(self, tmp_path, capsys):
        path = tmp_path / "bad.cop"
        path.write_text("COP 1\nn 1\nd 2\nu 1 0.5 0.5\n", encoding="utf-8")
        assert main(["solve", "qoa", "--instance", str(path)]) == EXIT_FORMAT
        err = capsys.readouterr().err.strip().splitlines()
        assert err == ["error: missing 'end' sentinel"]

    def test_missing_file(self, tmp_path, capsys):
        assert main(["exact", "--instance", str(tmp_path / "nope.cop")]) == EXIT_FORMAT
        assert len(capsys.readouterr().err.strip().splitlines()) == 1

    def test_logging_goes_to_stderr(self, t2_file, capsys):
        assert main(["-v", "exact", "--instance", str(t2_file)]) == EXIT_OK
        captured = capsys.readouterr()
        assert len(captured.out.strip().splitlines()) == 1
        assert "전수 탐색" in captured.err

    def test_configure_logging_levels(self):
        coopt_cli.configure_logging(0)
        assert logging.getLogger().level == logging.WARNING
        coopt_cli.configure_logging(2)
        assert logging.getLogger().level == logging.DEBUG
        installed = [h for h in logging.getLogger().handlers if getattr(h, "coopt_cli", False)]
        assert len(installed) == 1


@pytest.mark.smoke
class TestBenchCommand:
    """bench 명령 테스트"""

    BENCH_ARGS = [
        "bench", "--vars", "10", "--vals", "3", "--avg-degree", "3", "--instances", "3",
        "--restarts", "4", "--hbar", "1", "--iters", "5", "--seed", "1",
    ]

    def test_bench(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        xlsx = tmp_path / "r.xlsx"
        code = main(self.BENCH_ARGS + ["--out", str(out), "--xlsx", str(xlsx)])
        assert code == EXIT_OK
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "instance,algorithm,trials,cost,seconds,improvement_pct"
        assert len(lines) == 1 + 6
        assert xlsx.exists()
        summary = parse_summary(capsys.readouterr().out.strip())
        assert summary["instances"] == "3"

    def test_bench_deterministic(self, tmp_path):
        """같은 인자면 시간 열을 뺀 보고서가 같다"""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(self.BENCH_ARGS + ["--out", str(first)]) == EXIT_OK
        assert main(self.BENCH_ARGS + ["--out", str(second), "--jobs", "2"]) == EXIT_OK

        def without_seconds(path):
            rows = [line.split(",") for line in path.read_text(encoding="utf-8").splitlines()]
            return [row[:4] + row[5:] for row in rows]

        assert without_seconds(first) == without_seconds(second)

    def test_bench_from_files(self, t2_file, tmp_path):
        out = tmp_path / "files.csv"
        code = main(
            ["bench", "--instance", str(t2_file), "--instance", str(t2_file), "--restarts", "2",
             "--out", str(out)]
        )
        assert code == EXIT_OK
        rows = out.read_text(encoding="utf-8").splitlines()[1:]
        assert [row.split(",")[0] for row in rows] == ["t2"] * 4

    @pytest.mark.parametrize(
        "flag,value", [("--instances", "0"), ("--jobs", "0"), ("--restarts", "0"), ("--hbar", "0")]
    )
    def test_bench_invalid_values(self, tmp_path, flag, value):
        args = list(self.BENCH_ARGS)
        if flag in args:
            args[args.index(flag) + 1] = value
        else:
            args += [flag, value]
        assert main(args + ["--out", str(tmp_path / "r.csv")]) == EXIT_USAGE
        assert not (tmp_path / "r.csv").exists()

    def test_bench_missing_shape(self, tmp_path, capsys):
        code = main(["bench", "--vars", "10", "--out", str(tmp_path / "r.csv")])
        assert code == EXIT_USAGE
        assert "--vals" in capsys.readouterr().err
