from __future__ import annotations

import json
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

from dbexplain.cli import run

from conftest import data_path

SCHEMA = json.loads(
    (Path(__file__).parent.parent / "src/dbexplain/schemas/report.schema.json")
    .read_text())
VALIDATOR = Draft202012Validator(SCHEMA)


def invoke(capsys, *argv: str) -> tuple[int, dict, str]:
    code = run(list(argv))
    captured = capsys.readouterr()
    doc = json.loads(captured.out) if captured.out.strip().startswith("{") else None
    if doc is not None:
        VALIDATOR.validate(doc)
    return code, doc, captured.out


Q_SRS = "q :- S(x), R(x,y), S(y)."
Q_RT = "q :- R(x,y), T(y)."


def test_eval_command(capsys):
    code, doc, _ = invoke(capsys, "eval", "-i", str(data_path("srs_prime.json")),
                          "-q", Q_SRS)
    assert code == 0 and doc["result"]["satisfied"] is True


def test_eval_false_on_empty_instance(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"schema": {"R": 2, "S": 1, "T": 1}, "tuples": []}))
    code, doc, _ = invoke(capsys, "eval", "-i", str(empty), "-q", Q_RT)
    assert code == 0 and doc["result"]["satisfied"] is False


def test_degrees_command(capsys):
    code, doc, _ = invoke(capsys, "degrees", "-i", str(data_path("rt_small.json")),
                          "-q", Q_RT)
    assert code == 0
    assert doc["result"]["degrees"]["T:a3"]["eta"] == "1"
    assert doc["result"]["degrees"]["R:a1,a3"]["sigma"] == "1/2"


def test_core_methods_agree(capsys):
    code, lemma, _ = invoke(capsys, "core", "-i", str(data_path("srs_prime.json")),
                            "-q", Q_SRS, "--method=lemma1")
    assert code == 0
    assert lemma["result"]["core"] == ["R:a,d", "R:e,f", "S:a"]
    code, naive, _ = invoke(capsys, "core", "-i", str(data_path("srs_prime.json")),
                            "-q", Q_SRS, "--method=naive")
    assert code == 0
    assert naive["result"]["core"] == lemma["result"]["core"]
    assert naive["result"]["method"] == "naive-intersection"


def test_witnesses_command(capsys):
    code, doc, _ = invoke(capsys, "witnesses",
                          "-i", str(data_path("g_routes.json")),
                          "-q", "q :- path(E, a, b).")
    assert code == 0
    assert [w["tuples"] for w in doc["result"]["witnesses"]] == [
        ["t1"], ["t2", "t3"], ["t4", "t5", "t6"]]


def test_mss_oracle_with_filters(capsys):
    base = ["mss", "-i", str(data_path("srs_prime.json")), "-q", Q_SRS]
    code, doc, _ = invoke(capsys, *base)
    assert doc["result"]["sets"] == [["R:b,b", "S:b"], ["R:c,b", "S:b", "S:c"]]
    code, doc, _ = invoke(capsys, *base, "--min")
    assert doc["result"]["sets"] == [["R:b,b", "S:b"]]
    code, doc, _ = invoke(capsys, *base, "--tuple", "S:c")
    assert doc["result"]["sets"] == [["R:c,b", "S:b", "S:c"]]


def test_mss_chase_modes(capsys):
    base = ["mss", "-i", str(data_path("srs_prime.json")), "-q", Q_SRS, "--chase"]
    code, doc, _ = invoke(capsys, *base, "--tuple", "S:b")
    assert code == 0 and doc["result"]["set"] == ["R:b,b", "S:b"]
    code, doc, _ = invoke(capsys, "mss", "-i", str(data_path("rt_small.json")),
                          "-q", Q_RT, "--chase", "--min", "--tuple", "R:a3,a3")
    assert code == 0
    assert doc["result"]["set"] == ["R:a3,a3", "T:a3"]
    assert doc["result"]["sigma"] == "1/2"


def test_mns_command(capsys):
    code, doc, _ = invoke(capsys, "mns", "-i", str(data_path("rt_small.json")),
                          "-q", Q_RT)
    assert doc["result"]["sets"] == [["R:a1,a3", "R:a3,a3"], ["T:a3"]]


def test_causes_command(capsys):
    code, doc, _ = invoke(capsys, "causes", "-i", str(data_path("rt_small.json")),
                          "-q", Q_RT)
    assert doc["result"]["causes"]["T:a3"] == [[]]


def test_repairs_command(capsys):
    code, doc, _ = invoke(capsys, "repairs", "-i", str(data_path("srs_prime.json")),
                          "-q", Q_SRS)
    assert [r["removed"] for r in doc["result"]["repairs"]] == [
        ["S:b"], ["R:b,b", "R:c,b"], ["R:b,b", "S:c"]]
    code, doc, _ = invoke(capsys, "repairs", "-i", str(data_path("srs_prime.json")),
                          "-q", Q_SRS, "--cardinality")
    assert [r["removed"] for r in doc["result"]["repairs"]] == [["S:b"]]


def test_lineage_command(capsys):
    code, doc, _ = invoke(capsys, "lineage",
                          "-i", str(data_path("srs_prime_exoR.json")), "-q", Q_SRS)
    assert doc["result"]["clauses"] == [["R:b,b", "S:b"], ["R:c,b", "S:b", "S:c"]]
    code, doc, _ = invoke(capsys, "lineage",
                          "-i", str(data_path("srs_prime_exoR.json")), "-q", Q_SRS,
                          "--eliminate-exogenous")
    assert doc["result"]["clauses"] == [["S:b"]]


def test_check_commands(capsys):
    code, doc, _ = invoke(capsys, "check-duality",
                          "-i", str(data_path("rt_small.json")), "-q", Q_RT)
    assert code == 0 and doc["result"]["holds"] is True
    code, doc, _ = invoke(capsys, "check-correspondence",
                          "-i", str(data_path("srs_prime.json")), "-q", Q_SRS)
    assert code == 0 and doc["result"]["holds"] is True


def test_csv_manifest_input(capsys):
    code, doc, _ = invoke(capsys, "degrees",
                          "-i", str(data_path("rt_small_csv/manifest.json")),
                          "-q", Q_RT)
    assert code == 0 and doc["result"]["degrees"]["T:a3"]["eta"] == "1"


def test_semantic_error_exit_code(capsys):
    code, doc, _ = invoke(capsys, "mss", "-i", str(data_path("rt_small.json")),
                          "-q", "q :- R(x,y), T('zz').")
    assert code == 1
    assert doc["error"]["type"] == "QueryNotSatisfied"


def test_fastpath_refusal_is_semantic_error(capsys):
    code, doc, _ = invoke(capsys, "core", "-i", str(data_path("g_routes.json")),
                          "-q", "q :- path(E, a, b).")
    assert code == 1 and doc["error"]["type"] == "UnsupportedQuery"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["mss"])  # missing -i/-q
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate", "-i", "x", "-q", "y"])
    assert exc.value.code == 2


def test_byte_identical_reports(capsys):
    argv = ["degrees", "-i", str(data_path("srs_prime.json")), "-q", Q_SRS]
    _, _, first = invoke(capsys, *argv)
    _, _, second = invoke(capsys, *argv)
    assert first == second


def test_env_var_mirrors_max_endo(capsys, monkeypatch):
    monkeypatch.setenv("EXPLAIN_MAX_ENDO", "3")
    code, doc, _ = invoke(capsys, "mss", "-i", str(data_path("rt_small.json")),
                          "-q", Q_RT)
    assert code == 1 and doc["error"]["type"] == "OracleBoundExceeded"
    code, doc, _ = invoke(capsys, "mss", "-i", str(data_path("rt_small.json")),
                          "-q", Q_RT, "--max-endo", "10")
    assert code == 0


def test_table_format(capsys):
    code, _, out = invoke(capsys, "degrees", "-i", str(data_path("rt_small.json")),
                          "-q", Q_RT, "--format=table")
    assert code == 0
    assert "tid" in out and "T:a3" in out
    code, _, out = invoke(capsys, "core", "-i", str(data_path("srs_prime.json")),
                          "-q", Q_SRS, "--format=table")
    assert "core (lemma1):" in out


def test_jobs_flag(capsys):
    argv = ["mss", "-i", str(data_path("srs_prime.json")), "-q", Q_SRS]
    _, serial, _ = invoke(capsys, *argv)
    _, parallel, _ = invoke(capsys, *argv, "--jobs", "2")
    assert serial["result"] == parallel["result"]
