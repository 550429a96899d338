import json

import pytest

from thetatwist import __version__, cli
from thetatwist.verify import Check, VerifySummary


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_tau_table_csv(capsys):
    code, out, _ = run(capsys, "tau-table", "--N", "4")
    assert code == cli.EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "n,tau,lam"
    assert [line.split(",")[1] for line in lines[1:]] == ["1", "-24", "252", "-1472"]


def test_json_output_is_deterministic(capsys):
    argv = ("tau-table", "--N", "6", "--format", "json", "--no-timestamp")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "metadata" not in json.loads(first)


def test_out_file(tmp_path, capsys):
    path = tmp_path / "hua.csv"
    code, out, _ = run(capsys, "hua", "--xmin", "8", "--xmax", "128", "--out", str(path))
    assert code == cli.EXIT_OK
    assert out == ""
    lines = path.read_text().splitlines()
    assert lines[0] == "X,hua_count,quadrature,ratio"
    assert len(lines) == 1 + 5


def test_config_error_exit_code(capsys):
    code, _, err = run(capsys, "thm11", "--p", "9")
    assert code == cli.EXIT_CONFIG
    assert "odd prime" in err


def test_config_file(tmp_path, capsys):
    path = tmp_path / "thetatwist.conf"
    path.write_text("xmin = 8\nxmax = 32\n")
    code, out, _ = run(capsys, "hua", "--config", str(path))
    assert code == cli.EXIT_OK
    assert len(out.splitlines()) == 1 + 3
    path.write_text("max_table = 10\n")
    code, _, err = run(capsys, "tau-table", "--config", str(path), "--N", "100")
    assert code == cli.EXIT_FAILED
    assert "Resource limit exceeded" in err


def test_explicit_arcs(capsys):
    code, out, _ = run(
        capsys, "arcs", "--ell", "3", "--p", "5", "--xmin", "64", "--xmax", "128", "--P", "2", "--Q", "20"
    )
    assert code == cli.EXIT_OK
    rows = out.splitlines()[1:]
    assert len(rows) == 2
    header = out.splitlines()[0].split(",")
    assert all(row.split(",")[header.index("Q")] == "20.0" for row in rows)


def test_thm11_json(capsys):
    code, out, _ = run(
        capsys,
        "thm11",
        "--xmin", "64",
        "--xmax", "256",
        "--char-index", "2",
        "--format", "json",
        "--no-timestamp",
        "--threads", "2",
    )  # fmt: skip
    assert code == cli.EXIT_OK
    payload = json.loads(out)
    assert payload["name"] == "thm11"
    assert [row["X"] for row in payload["rows"]] == [64, 128, 256]


def test_charsum_check(capsys):
    code, out, _ = run(capsys, "charsum-check")
    assert code == cli.EXIT_OK
    assert out.startswith("p,j,q,max_error,gauss_error")


def test_verify_exit_codes(monkeypatch, capsys):
    monkeypatch.setattr(cli, "verify_all", lambda level: VerifySummary(level, [Check("x", True)]))
    code, out, _ = run(capsys, "verify", "--no-timestamp")
    assert code == cli.EXIT_OK
    assert json.loads(out)["passed"] is True
    monkeypatch.setattr(cli, "verify_all", lambda level: VerifySummary(level, [Check("x", False)]))
    code, out, _ = run(capsys, "verify", "--no-timestamp")
    assert code == cli.EXIT_FAILED
    assert json.loads(out)["failed"] == 1


def test_logger_handler_removed(capsys):
    before = list(cli.logger.handlers)
    run(capsys, "tau-table", "--N", "2")
    assert cli.logger.handlers == before
