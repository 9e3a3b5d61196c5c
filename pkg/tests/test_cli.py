import json

import pytest

from schurlab.cli import RingParseError, exit_code_for, main, parse_ring_expr
from schurlab.ring_core import analyze_local


def test_parse_examples():
    A = parse_ring_expr("GR(27,2)")
    assert A.order == 729 and A.characteristic == 27
    B = parse_ring_expr("QG(2,3)")
    assert B.order == 8 and analyze_local(B).nilpotency == 3
    P = parse_ring_expr("Z/4 * F(9)")
    assert P.order == 36 and not analyze_local(P).is_local
    assert parse_ring_expr("TM(5,2)").order == 125
    assert parse_ring_expr("GILMER_F").order == 8
    assert parse_ring_expr("PIR(2,2,1;2,0;1)").order == 8
    assert parse_ring_expr("(F(2)*F(3))*F(4)").order == 24


@pytest.mark.parametrize("text, pos", [
    ("GR(9,2", 6),
    ("F(6)", 0),
    ("Q(3)", 0),
    ("Z/4 * ", 6),
    ("F(4) F(5)", 5),
])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(RingParseError) as exc:
        parse_ring_expr(text)
    assert exc.value.pos == pos


def test_order_guard():
    with pytest.raises(RingParseError, match="exceeds"):
        parse_ring_expr("QG(2,30)")


def test_exit_codes():
    assert exit_code_for(["match", "match"]) == 0
    assert exit_code_for(["match", "mismatch", "refused"]) == 1
    assert exit_code_for(["match", "refused"]) == 3
    assert exit_code_for(["not_covered", "conjecture"]) == 2


def _run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_schur_json_is_deterministic(capsys):
    code1, out1 = _run(capsys, ["schur", "F(5)", "--json"])
    code2, out2 = _run(capsys, ["schur", "F(5)", "--json"])
    assert code1 == code2 == 0
    r1, r2 = json.loads(out1), json.loads(out2)
    assert r1["schema"] == 1
    for r in (r1, r2):
        for row in r["rows"]:
            row.pop("timings")
    assert r1 == r2
    assert r1["rows"][0]["h2"]["invariant_factors"] == []


def test_cache_roundtrip(tmp_path, capsys):
    argv = ["predict", "GR(9,2)", "--json", "--cache-dir", str(tmp_path)]
    _, fresh = _run(capsys, argv)
    assert list(tmp_path.rglob("*.json"))
    _, cached = _run(capsys, argv)
    a, b = json.loads(fresh), json.loads(cached)
    assert b.pop("cached") is True
    assert a == b


def test_cache_busting_agrees(tmp_path, capsys):
    argv = ["schur", "Z/4", "--json", "--cache-dir", str(tmp_path)]
    _, first = _run(capsys, argv)
    for f in tmp_path.rglob("*.json"):
        f.unlink()
    _, second = _run(capsys, argv)
    a, b = json.loads(first), json.loads(second)
    for r in (a, b):
        for row in r["rows"]:
            row.pop("timings")
    assert a == b


def test_refusal_exit_code(capsys):
    code, out = _run(capsys, ["schur", "QG(2,5)"])
    assert code == 3 and "refused" in out


def test_mismatch_free_suite(capsys):
    code, out = _run(capsys, ["verify", "h2b"])
    assert code == 0 and out.count("match") == 5


def test_predict_and_analyze(capsys):
    code, out = _run(capsys, ["predict", "QG(2,7)", "--json"])
    rep = json.loads(out)
    assert rep["predictions"]["h2_sl2"]["kind"] == "conjecture"
    code, out = _run(capsys, ["analyze", "GR(9,2)", "--json"])
    rep = json.loads(out)
    assert rep["units"]["invariant_factors"] == [3, 24]


def test_rp1_and_gw_commands(capsys):
    code, out = _run(capsys, ["rp1", "F(11)", "--json"])
    assert code == 0 and json.loads(out)["rp1"]["invariant_factors"] == [6]
    code, out = _run(capsys, ["gw", "F(7)", "--json"])
    assert json.loads(out)["gw"]["free_rank"] == 1


def test_parse_error_exit(capsys):
    assert main(["analyze", "GR(9,"]) == 2
