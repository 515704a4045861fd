import json

import pytest

from picard import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_chartab_a5(capsys):
    code, out, _ = run(capsys, "chartab", "--family", "A5")
    assert code == 0
    data = json.loads(out)
    table = data["block"]["table"]
    assert [c["degree"] for c in table["characters"]] == [1, 3, 3, 4, 5]
    assert data["outside_principal_block"] == ["4"]
    assert data["block"]["decomposition"] == [[1, 0, 0], [1, 1, 0], [1, 0, 1], [1, 1, 1]]


def test_chartab_a4_and_product(capsys):
    code, out, _ = run(capsys, "chartab", "--family", "A4")
    data = json.loads(out)
    assert data["family"] == "G(1)"
    assert [c["degree"] for c in data["block"]["table"]["characters"]] == [1, 1, 1, 3]
    code, out, _ = run(capsys, "chartab", "--family", "P(1)xG(1)")
    assert len(json.loads(out)["block"]["irr"]) == 8


def test_perf_a4(capsys):
    code, out, _ = run(capsys, "perf", "--family", "G(1)")
    assert code == 0
    assert json.loads(out)["order"] == 48


def test_verify_case_v(capsys):
    code, out, _ = run(capsys, "verify", "--case", "thm-main-v,n=1")
    assert code == 0
    data = json.loads(out)
    assert data["passed"]
    assert data["cases"][0]["order"] == 21


def test_verify_sl28(capsys):
    code, out, _ = run(capsys, "verify", "--case", "sl28")
    assert code == 0
    assert json.loads(out)["sl28"]["hom_part_order"] == 3


def test_outgrp(capsys):
    code, out, _ = run(capsys, "outgrp", "3", "1", "C7:C3")
    assert code == 0
    assert json.loads(out)["quotient_order"] == 1


def test_text_format_and_out_file(capsys, tmp_path):
    path = tmp_path / "r.txt"
    code, out, _ = run(capsys, "outgrp", "2", "2", "C3", "--format", "text", "--out", str(path))
    assert code == 0 and out == ""
    text = path.read_text()
    assert "quotient_order: 8" in text


@pytest.mark.parametrize("argv", [
    ["chartab", "--family", "Q(8)"],
    ["verify", "--case", "thm-main-ix,n=1"],
    ["outgrp", "3", "1", "C5"],
    ["nonsense"],
    ["perf"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_verification_failure_exit_code(capsys, monkeypatch):
    from picard import picassembly

    class Failing:
        def to_json(self):
            return {"case": "x", "passed": False}

        def failures(self):
            return ["forced"]

    monkeypatch.setattr(picassembly, "verify_case", lambda case: Failing())
    code, out, _ = run(capsys, "verify", "--case", "borel,n=2")
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_reports_are_byte_stable(capsys):
    outs = []
    for _ in range(2):
        _, out, _ = run(capsys, "verify", "--case", "thm-main-i,P=P(1),n=1")
        outs.append(out)
    assert outs[0] == outs[1]
    _, a, _ = run(capsys, "chartab", "--family", "E8:C7")
    _, b, _ = run(capsys, "chartab", "--family", "E8:C7")
    assert a == b
