import csv
import json

import pytest

from hardy_moments.cli import cli_dispatch


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("HARDY_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.chdir(tmp_path)


def test_saddle_closed_form(capsys):
    assert cli_dispatch(["saddle", "--n", "1", "--u", "0"]) == 0
    out = capsys.readouterr().out
    assert "6.283185307" in out


def test_sieve_dump_squares(tmp_path, capsys):
    path = tmp_path / "sieve.csv"
    assert cli_dispatch(["sieve", "--n", "10", "--dump", str(path)]) == 0
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert sum(int(r["d3"]) ** 2 for r in rows) == 371
    manifest = json.loads((tmp_path / "sieve.csv.manifest.json").read_text())
    assert manifest["command"] == "sieve"
    assert str(path) in manifest["outputs"]


def test_z_eval_oracle_and_method_guard(capsys):
    assert cli_dispatch(["z-eval", "--t", "30", "--method", "oracle"]) == 0
    assert cli_dispatch(["z-eval", "--t", "30", "--method", "rs"]) == 2


def test_compare_csv(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code = cli_dispatch(["compare", "--t", "500", "--u", "0",
                         "--csv", str(path)])
    assert code == 0
    with open(path) as fh:
        row = next(csv.DictReader(fh))
    assert float(row["normalized"]) <= 5.0
    assert int(row["n_terms"]) > 0


def test_compare_deterministic(tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    cli_dispatch(["compare", "--t", "500", "--u", "0.5", "--csv", str(p1)])
    cli_dispatch(["compare", "--t", "500", "--u", "0.5", "--csv", str(p2)])
    assert p1.read_bytes() == p2.read_bytes()


def test_expsum_json(tmp_path):
    path = tmp_path / "s.json"
    assert cli_dispatch(["expsum", "--n", "50", "--alpha", "0",
                         "--json", str(path)]) == 0
    payload = json.loads(path.read_text())
    assert float(payload["S_im"]) == 0.0


def test_msq_find_point(tmp_path, capsys):
    path = tmp_path / "scan.json"
    code = cli_dispatch(["msq", "--n", "50", "--a", "1", "--b", "2",
                         "--find-point", "--json", str(path)])
    assert code == 0
    summary = json.loads(path.read_text())
    assert summary["abs_S_at_C"] <= summary["bound"]
    out = capsys.readouterr().out
    assert "good point" in out


def test_moment_runs(capsys):
    assert cli_dispatch(["moment", "--kind", "m1", "--t", "200"]) == 0
    assert "m1(T=200" in capsys.readouterr().out


def test_usage_errors(capsys):
    assert cli_dispatch(["moment", "--kind", "m9", "--t", "200"]) == 2
    assert cli_dispatch(["nonsense"]) == 2
    assert cli_dispatch(["moment", "--kind", "m1", "--t", "10"]) == 2
