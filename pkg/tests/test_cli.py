import json

import pytest
import yaml

from compiler.emit import MAGIC
from lab.metrics import read_events
from main import main


@pytest.fixture
def workdir(tmp_path):
    config = {
        "oracle": {"bound": 5},
        "metrics": {"enabled": True, "file": str(tmp_path / "runs.jsonl"), "flush_interval": 1},
    }
    (tmp_path / "config.yaml").write_text(yaml.safe_dump(config), encoding="utf-8")
    return tmp_path


def _run(workdir, *argv) -> int:
    return main(["--config", str(workdir / "config.yaml"), *argv])


def _sentence(workdir, text: str):
    path = workdir / "sentence.h10"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_missing_config_exits(tmp_path, capsys) -> None:
    with pytest.raises(SystemExit) as info:
        main(["--config", str(tmp_path / "absent.yaml"), "oracle", "x"])
    assert info.value.code == 1
    assert "Config file not found" in capsys.readouterr().out


def test_oracle_reports_and_logs(workdir, capsys) -> None:
    assert _run(workdir, "oracle", _sentence(workdir, "exists x . x + x = 4")) == 0
    out = capsys.readouterr().out.splitlines()
    assert "true-within-bound" in out[0]
    assert json.loads(out[1]) == {"x": 2}
    events, _ = read_events(workdir / "runs.jsonl")
    assert events[-1]["event"] == "oracle"
    assert events[-1]["result"] == "true-within-bound"
    assert events[-1]["bound"] == 5


def test_oracle_on_a_later_stage(workdir, capsys) -> None:
    path = _sentence(workdir, "exists x . x * x = 2")
    assert _run(workdir, "--no-metrics", "oracle", path, "--stage", "stage1", "--bound", "3") == 0
    assert "false-within-bound" in capsys.readouterr().out
    assert not (workdir / "runs.jsonl").exists()


def test_malformed_sentence_is_an_error(workdir, capsys) -> None:
    assert _run(workdir, "oracle", _sentence(workdir, "exists x . x + = 3")) == 2
    assert "error:" in capsys.readouterr().out


def test_missing_sentence_file_is_an_error(workdir, capsys) -> None:
    assert _run(workdir, "compile", str(workdir / "absent.h10")) == 2
    assert "error:" in capsys.readouterr().out


def test_compile_emit_and_replay(workdir, capsys) -> None:
    target = workdir / "out.sys"
    path = _sentence(workdir, "exists x . x = 1")
    assert _run(workdir, "compile", path, "--emit", str(target), "--witness", "x=1") == 0
    out = capsys.readouterr().out
    assert "compiled" in out
    assert "satisfies every emitted equation" in out
    assert target.read_text(encoding="utf-8").startswith(MAGIC)


def test_compile_with_a_wrong_witness(workdir, capsys) -> None:
    path = _sentence(workdir, "exists x . x = 1")
    assert _run(workdir, "compile", path, "--witness", "x=2") == 1
    assert "witness replay failed" in capsys.readouterr().out


def test_bad_witness_syntax(workdir, capsys) -> None:
    path = _sentence(workdir, "exists x . x = 1")
    assert _run(workdir, "compile", path, "--witness", "x") == 2


def test_divcheck_refutes(workdir, capsys) -> None:
    assert _run(workdir, "divcheck", "1", "2", "1", "--refute", "--json") == 0
    out = capsys.readouterr().out
    assert '"verdict": "refuted"' in out
    assert "is not a square" in out


def test_divcheck_inconclusive_exit_code(workdir, capsys) -> None:
    assert _run(workdir, "divcheck", "3", "0", "0", "--certify") == 1
    assert "reason:" in capsys.readouterr().out


def test_conic_case(workdir, capsys) -> None:
    assert _run(workdir, "conic", "--case", "equal") == 0
    assert "solved by equal-coefficients" in capsys.readouterr().out


def test_divisor_json(workdir, capsys) -> None:
    assert _run(workdir, "divisor", "1", "0", "--json") == 0
    data = json.loads(capsys.readouterr().out)
    place, order = data["places"][0]
    assert place == "O" and int(order) == -2


def test_global_options_after_the_subcommand(workdir, capsys) -> None:
    path = _sentence(workdir, "exists x . x + x = 4")
    assert main(["oracle", path, "--config", str(workdir / "config.yaml")]) == 0
    events, _ = read_events(workdir / "runs.jsonl")
    assert events[-1]["bound"] == 5
    assert main(["oracle", path, "--config", str(workdir / "config.yaml"), "--no-metrics"]) == 0
    assert len(read_events(workdir / "runs.jsonl")[0]) == len(events)
