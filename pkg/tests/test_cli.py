"""Command-line surface: exit codes, schemas, and output determinism."""

import json

import pytest

from orbifold_voa.cli import EXIT_FAIL, EXIT_OK, SUITES, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fusion_query_text(capsys):
    code, out, _ = run(capsys, "fusion", "query", "--k", "2", "Vl1", "VT1+", "VT2+")
    assert code == EXIT_OK
    assert "value 1" in out
    assert "Ytilde[1]" in out


def test_fusion_query_identity_row(capsys):
    code, out, _ = run(capsys, "fusion", "query", "--k", "2", "V+", "V+", "V+")
    assert code == EXIT_OK
    assert "value 1" in out


def test_fusion_query_json_record(capsys):
    code, out, _ = run(
        capsys, "fusion", "query", "--k", "3", "V-", "Va+", "Va+", "--format", "json"
    )
    assert code == EXIT_OK
    rec = json.loads(out)
    assert rec["k"] == 3
    assert rec["triple"] == ["V-", "Va+", "Va+"]
    assert rec["value"] == 0
    assert rec["bound"] >= 1
    assert rec["witnesses"] == []


def test_fusion_query_bad_label(capsys):
    code, _, err = run(capsys, "fusion", "query", "--k", "2", "V?", "V+", "V+")
    assert code == EXIT_FAIL
    assert "unknown module label" in err


def test_fusion_query_rejects_boundary_coset(capsys):
    code, _, err = run(capsys, "fusion", "query", "--k", "2", "Vl2", "V+", "V+")
    assert code == EXIT_FAIL
    assert "Va+" in err  # descriptive redirect to the eigenspace labels


def test_fusion_table_csv_shape(capsys):
    code, out, _ = run(capsys, "fusion", "table", "--k", "1", "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "w1,w2,w3,value"
    assert len(lines) == 1 + 8**3


@pytest.mark.parametrize("suite", SUITES)
def test_verify_suites_pass_at_k2(capsys, suite):
    code, out, _ = run(capsys, "verify", suite, "--k", "2")
    assert code == EXIT_OK, out
    assert "FAIL" not in out


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "bogus", "--k", "2")
    assert code == EXIT_FAIL


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "p31", "--k", "2", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert list(payload) == ["k", "command", "results"]
    for item in payload["results"]:
        assert list(item) == ["name", "status", "detail"]
        assert item["status"] in ("pass", "fail", "skip")


def test_verify_skip_is_reported_distinctly(capsys):
    code, out, _ = run(capsys, "verify", "table1", "--k", "1", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    skips = [r for r in payload["results"] if r["status"] == "skip"]
    assert len(skips) == 3  # the two-dimensional top level at k=1
    assert all("V-" in r["name"] for r in skips)


def test_dump_delta_contains_low_order_value(capsys):
    code, out, _ = run(capsys, "dump", "delta", "--order", "4")
    assert code == EXIT_OK
    assert "1,1,1/16" in out
    assert out.splitlines()[0] == "m,n,c"


def test_dump_decompose_window(capsys):
    code, out, _ = run(
        capsys, "dump", "decompose", "--k", "2", "--module", "Va+", "--window", "2"
    )
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "constituent,lattice_index,norm"
    assert [l.split(",")[0] for l in lines[1:]] == ["M(2)", "M(6)", "M(10)"]


def test_dump_zhu_matches_computed_actions(capsys):
    code, out, _ = run(capsys, "dump", "zhu", "--k", "2", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    acts = payload["actions"]
    assert acts["VT1+"]["omega"] == "(1/16)*zeta^0*t^0"
    assert acts["VT1+"]["J"] == "(3/128)*zeta^0*t^0"
    assert acts["Va-"]["E"] == "(-1)*zeta^0*t^0"


def test_zhu_table_command(capsys):
    code, out, _ = run(capsys, "zhu", "table", "--k", "3", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["command"] == "zhu table"
    assert payload["actions"]["VT2-"]["omega"] == "(9/16)*zeta^0*t^0"
    code, out, _ = run(capsys, "zhu", "table", "--k", "2")
    assert code == EXIT_OK
    assert any(line.startswith("V+") for line in out.splitlines())


def test_witness_command(capsys):
    code, out, _ = run(capsys, "witness", "--type", "Vl1,VT1+,VT2+", "--k", "2", "--cutoff", "2")
    assert code == EXIT_OK
    assert "Ytilde[1]" in out
    code, out, _ = run(capsys, "witness", "--type", "VT1+,V+,VT1+", "--k", "2")
    assert code == EXIT_FAIL
    assert "NO-DIRECT-CONSTRUCTION" in out


def test_output_determinism(capsys):
    args = ("fusion", "table", "--k", "2", "--format", "json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    args = ("verify", "closure", "--k", "3", "--format", "json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
