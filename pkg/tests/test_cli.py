import json
import subprocess
import sys

import pytest

from affine_brylinski import brylinski, cli, graded


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "cache"))
    monkeypatch.setattr(graded, "MAX_BASIS", graded.MAX_BASIS)


def run_json(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    assert code == cli.EXIT_OK, out
    data = json.loads(out)
    assert data["command"] == argv[0]
    return data["result"], out


def test_roots(capsys):
    res, _ = run_json(capsys, "roots", "--family", "A", "--rank", "2")
    assert res["coxeter_number"] == 3
    assert len(res["structure_constants"]) > 0


def test_hilb(capsys):
    res, _ = run_json(capsys, "hilb", "--family", "A", "--rank", "1", "--q", "2", "--t", "4")
    assert res["rows"]["2"] == {"2": "1", "4": "1"}


def test_wgens_and_cache(capsys, tmp_path):
    res, first = run_json(capsys, "wgens", "--family", "A", "--rank", "2")
    assert [g["degree"] for g in res["generators"]] == [2, 3]
    files = list((tmp_path / "cache").glob("wgens-*.json"))
    assert len(files) == 1
    _, second = run_json(capsys, "wgens", "--family", "A", "--rank", "2")
    assert first == second


def test_cache_dir_flag_wins(capsys, tmp_path):
    run_json(capsys, "wgens", "--family", "A", "--rank", "1", "--cache-dir", str(tmp_path / "x"))
    assert list((tmp_path / "x").glob("wgens-*.json"))
    assert not (tmp_path / "cache").exists()


def test_no_cache(capsys, tmp_path):
    run_json(capsys, "wgens", "--family", "A", "--rank", "1", "--no-cache")
    assert not (tmp_path / "cache").exists()


def test_corrupt_cache_is_recomputed(capsys, tmp_path):
    _, first = run_json(capsys, "wgens", "--family", "A", "--rank", "1")
    (f,) = (tmp_path / "cache").glob("wgens-*.json")
    f.write_text("{}")
    _, second = run_json(capsys, "wgens", "--family", "A", "--rank", "1")
    assert first == second


def test_brylinski(capsys):
    res, _ = run_json(capsys, "brylinski", "--family", "A", "--rank", "1", "--n", "3")
    assert res["ok"]
    assert res["jumps"][2]["computed"] == {"2": 1, "4": 1}


def test_verify_main_is_reproducible(capsys):
    argv = ("verify-main", "--family", "A", "--rank", "1", "--n", "3")
    res, first = run_json(capsys, *argv)
    _, second = run_json(capsys, *argv)
    assert res["ok"] and first == second
    assert "timing" not in res


def test_verify_main_timing_and_perturb(capsys):
    res, _ = run_json(capsys, "verify-main", "--family", "A", "--rank", "2", "--n", "2",
                      "--timing", "--perturb")
    assert "timing" in res and "perturbed_runs" in res


def test_verify_fock(capsys):
    res, _ = run_json(capsys, "verify-fock", "--family", "A", "--rank", "1", "--n", "3",
                      "--weight", "1/2")
    assert res["ok"] and res["params"]["lowest_eigenvalue"] == "1/16"
    res, _ = run_json(capsys, "verify-fock", "--family", "A", "--rank", "1", "--n", "2",
                      "--weight", "0")
    assert res["params"]["first_deficient_level"] == 1


def test_generic(capsys):
    res, _ = run_json(capsys, "generic", "--family", "A", "--rank", "1", "--k", "-1",
                      "--weight", "2/3")
    assert res["generic"] and res["shifted_by_rho"]
    res, _ = run_json(capsys, "generic", "--family", "A", "--rank", "1", "--k", "0",
                      "--weight", "0", "--raw")
    assert not res["generic"] and not res["shifted_by_rho"]


def test_table_format(capsys):
    assert cli.run(["brylinski", "--family", "A", "--rank", "1", "--n", "2",
                    "--format", "table"]) == 0
    assert "n=2" in capsys.readouterr().out


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.conf"
    cfg.write_text("# sample\nfamily = A\nrank = 1\nq = 1\nt = 2\n")
    res, _ = run_json(capsys, "hilb", "--config", str(cfg))
    assert set(res["rows"]) == {"0", "1"}
    res, _ = run_json(capsys, "hilb", "--config", str(cfg), "--q", "2")
    assert set(res["rows"]) == {"0", "1", "2"}


@pytest.mark.parametrize("argv", [
    ["roots"],
    ["roots", "--family", "B", "--rank", "2"],
    ["roots", "--family", "A", "--rank", "0"],
    ["generic", "--family", "A", "--rank", "1", "--k", "x", "--weight", "0"],
    ["generic", "--family", "A", "--rank", "1", "--weight", "0"],
    ["verify-fock", "--family", "A", "--rank", "2", "--weight", "1"],
    ["nonsense"],
])
def test_usage_errors(argv, capsys):
    assert cli.run(argv) == cli.EXIT_USAGE


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("colour = blue\n")
    assert cli.run(["roots", "--config", str(cfg)]) == cli.EXIT_USAGE
    assert cli.run(["roots", "--config", str(tmp_path / "missing")]) == cli.EXIT_USAGE


def test_resource_limit():
    assert cli.run(["brylinski", "--family", "A", "--rank", "2", "--n", "3",
                    "--max-basis", "3"]) == cli.EXIT_RESOURCE


def test_violation(monkeypatch, capsys):
    monkeypatch.setattr(brylinski, "expected_profile", lambda rs, n: {m: {} for m in range(n + 1)})
    assert cli.run(["brylinski", "--family", "A", "--rank", "1", "--n", "1"]) == \
        cli.EXIT_VIOLATION


def test_console_entry(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "affine_brylinski.cli", "roots",
                           "--family", "A", "--rank", "1", "--no-cache"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["rank"] == 1
