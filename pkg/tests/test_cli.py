import io
import json
import os
from pathlib import Path

import pytest

from scidforge.cli import run

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
FANO = HERE / "data" / "fano.json"
UPDATE = os.environ.get("SCIDFORGE_UPDATE_GOLDEN") == "1"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def check_golden(name, text):
    path = GOLDEN / f"{name}.json"
    if UPDATE:
        path.write_text(text)
    assert path.exists(), f"missing golden file {path}; run with SCIDFORGE_UPDATE_GOLDEN=1"
    assert text == path.read_text()


GOLDEN_CASES = {
    "bounds_256_5": ["bounds", "--q", "2^8", "--k", "5"],
    "table1": ["table1"],
    "optimize_256_5": ["optimize", "--q", "256", "--k", "5"],
    "certify_onderwortel": ["certify", "--name", "onderwortel"],
    "enum_3_3_1": ["enum", "--q", "3", "--n", "3", "--k", "1"],
    "search_2_3_1": ["search", "--q", "2", "--n", "3", "--k", "1", "--jobs", "1"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_json(name):
    code, out, _ = call(*GOLDEN_CASES[name], "--format", "json", "--deterministic")
    assert code == 0
    check_golden(name, out)
    assert call(*GOLDEN_CASES[name], "--format", "json", "--deterministic")[1] == out


def test_golden_check(monkeypatch):
    monkeypatch.chdir(HERE)
    code, out, _ = call("check", "--file", "data/fano.json", "--c", "0.9", "--d", "0.9",
                        "--format", "json", "--deterministic")
    assert code == 0
    check_golden("check_fano", out)


def test_table1_csv():
    code, out, _ = call("table1", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# scidforge ")
    assert lines[1] == "q,F_q,asymptotic"
    assert len(lines) == 11
    assert lines[2].startswith("2^4,")
    assert lines[4] == "2^8,0.78319928,1.11116105"


def test_certify_exit_zero():
    code, out, _ = call("certify", "--name", "onderwortel")
    assert code == 0
    assert "onderwortel: certified" in out


def test_certify_all_to_file(tmp_path):
    path = tmp_path / "certs.json"
    code, _, _ = call("certify", "--out", str(path))
    assert code == 0
    certs = json.loads(path.read_text())
    assert [c["verdict"] for c in certs] == ["certified"] * 5


def test_check_fano_text():
    code, out, _ = call("check", "--file", str(FANO))
    assert code == 0
    assert "valid: true" in out and "sunflower: false" in out


def test_check_invalid_exit_one(tmp_path):
    doc = {"field": {"p": 2, "e": 1, "modulus": [0, 1]}, "n": 3, "k": 1,
           "blocks": [[[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [0, 0, 0, 1]]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = call("check", "--file", str(path), "--format", "json", "--deterministic")
    assert code == 1
    result = json.loads(out)["result"]
    assert not result["valid"] and result["meet_dim"] == -1


def test_search_writes_files(tmp_path):
    path = tmp_path / "best.json"
    code, _, _ = call("search", "--q", "2", "--n", "2", "--k", "1", "--out", str(path))
    assert code == 0
    scid = json.loads(path.read_text())
    assert set(scid) == {"field", "n", "k", "blocks"} and len(scid["blocks"]) == 7
    sidecar = json.loads(Path(str(path) + ".sidecar.json").read_text())
    assert sidecar["best_size"] == 7 and sidecar["exhaustive"] is True
    assert set(sidecar) == {"best_size", "exhaustive", "nodes"}
    # the written SCID passes check
    assert call("check", "--file", str(path))[0] == 0


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv("SCIDFORGE_JOBS", "2")
    code, out, _ = call("search", "--q", "2", "--n", "2", "--k", "1", "--format", "json",
                        "--deterministic")
    assert code == 0
    assert json.loads(out)["config"]["jobs"] == 2


def test_timestamp_only_without_deterministic():
    doc = json.loads(call("enum", "--q", "2", "--n", "2", "--k", "1", "--format", "json")[1])
    assert "timestamp" in doc
    doc = json.loads(call("enum", "--q", "2", "--n", "2", "--k", "1", "--format", "json",
                          "--deterministic")[1])
    assert "timestamp" not in doc


def test_text_floats_have_eight_decimals():
    _, out, _ = call("bounds", "--q", "64", "--k", "3")
    assert "c_q: 0.37500000" in out


@pytest.mark.parametrize("argv", [
    ["bounds", "--q", "6", "--k", "3"],
    ["bounds", "--q", "2^x", "--k", "3"],
    ["bounds", "--k", "3"],
    ["nope"],
    [],
    ["search", "--q", "2", "--n", "2", "--k", "1", "--format", "csv"],
    ["check", "--file", "x.json", "--c", "1.5", "--d", "0.5"],
])
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == 2
    assert err.startswith("usage error")


def test_usage_error_names_flag():
    _, _, err = call("bounds", "--q", "6", "--k", "3")
    assert "--q" in err


def test_module_error_exit_one():
    code, _, err = call("optimize", "--q", "5", "--k", "3")
    assert code == 1
    assert json.loads(err)["error"] == "ParamOutOfRange"


def test_c_without_d(monkeypatch):
    code, _, err = call("check", "--file", str(FANO), "--c", "0.5")
    assert code == 2 and "--d" in err
