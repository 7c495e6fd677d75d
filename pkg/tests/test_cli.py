from __future__ import annotations

import json
import os

from masseyq.cli import main
from masseyq.report import report_from_json

DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code = main(list(argv) + ["--format", "structured"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_cohomology_heisenberg(capsys):
    code, doc = run_json(capsys, "cohomology", "builtin:heisenberg")
    assert code == 0
    assert doc["status"] == "ok"
    assert doc["payload"]["betti"] == [1, 2, 2, 1]
    assert doc["payload"]["classes"]["2"] == ["[x*z]", "[y*z]"]


def test_cohomology_torus_human(capsys):
    code, out = run(capsys, "cohomology", "builtin:torus")
    assert code == 0
    assert "1" in out and "[x*y]" in out


def test_cohomology_max_degree_beyond_cap(capsys):
    code, doc = run_json(capsys, "cohomology", "builtin:torus", "--max-degree", "9")
    assert code == 4
    assert doc["status"] == "cap-too-small"
    assert doc["payload"]["required-cap"] == 10


def test_cohomology_recap_free_model(capsys):
    code, doc = run_json(
        capsys, "cohomology", "builtin:heisenberg", "--cap", "6", "--max-degree", "5"
    )
    assert code == 0
    assert doc["payload"]["betti"] == [1, 2, 2, 1, 0, 0]


def test_cohomology_recap_table_model_rejected(capsys):
    code, doc = run_json(capsys, "cohomology", "builtin:two-points", "--cap", "5")
    assert code == 3
    assert "free" in doc["payload"]["error"]


def test_cohomology_file_model(capsys):
    code, doc = run_json(
        capsys, "cohomology", os.path.join(DATA, "heisenberg.alg")
    )
    assert code == 0
    assert doc["payload"]["betti"] == [1, 2, 2, 1]


def test_cohomology_parse_error_has_line(capsys, tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("cap = 3\ngen x : 1\nnonsense\n")
    code, doc = run_json(capsys, "cohomology", str(bad))
    assert code == 2
    assert "line 3" in doc["payload"]["error"]


def test_massey_nonvanishing(capsys):
    code, doc = run_json(capsys, "massey", "builtin:heisenberg", "x", "x", "y")
    assert code == 0
    assert doc["payload"]["representative"] == "[x*z]"
    assert doc["payload"]["indeterminacy-dimension"] == 0
    assert doc["payload"]["verdict"] == "non-vanishing"


def test_massey_vanishing_exit_10(capsys):
    code, doc = run_json(capsys, "massey", "builtin:torus", "x", "x", "x")
    assert code == 10
    assert doc["payload"]["vanishes"] is True
    assert doc["payload"]["in-ideal"] is True


def test_massey_undefined_exit_11_reports_obstruction(capsys):
    code, doc = run_json(capsys, "massey", "builtin:torus", "x", "x", "y")
    assert code == 11
    assert doc["payload"]["defined"] is False
    assert doc["payload"]["right-product"] == "[x*y]"


def test_massey_non_cocycle_input_is_undefined(capsys):
    code, doc = run_json(capsys, "massey", "builtin:heisenberg", "x", "z", "y")
    assert code == 11
    assert "not a cocycle" in doc["payload"]["obstruction"]


def test_massey_degree_zero_rejected(capsys):
    code, doc = run_json(capsys, "massey", "builtin:two-points", "eN", "eS", "eN")
    assert code == 3
    assert doc["status"] == "invalid-input"


def test_euler_from_bundles(capsys):
    code, doc = run_json(
        capsys, "euler", "builtin:heisenberg",
        "--bundle", "c1 = x*z weight = 2", "--bundle", "weight = 1",
    )
    assert code == 0
    assert doc["payload"]["weights"] == [2, 1]
    assert doc["payload"]["degree"] == 4
    assert doc["payload"]["top-coefficient"] == "[2]"


def test_euler_from_polynomial(capsys):
    code, doc = run_json(
        capsys, "euler", "builtin:torus", "--chi", "x*y + h", "--m", "1"
    )
    assert code == 0
    assert doc["payload"]["h-components"] == {"0": "[x*y]", "1": "[1]"}


def test_euler_zero_weight_rejected(capsys):
    code, doc = run_json(
        capsys, "euler", "builtin:torus", "--bundle", "weight = 0"
    )
    assert code == 3


def test_euler_requires_data(capsys):
    code, doc = run_json(capsys, "euler", "builtin:torus")
    assert code == 2
    code, doc = run_json(
        capsys, "euler", "builtin:torus",
        "--bundle", "weight = 1", "--chi", "h", "--m", "1",
    )
    assert code == 2


def test_lemma32_full_witness_chain(capsys):
    code, doc = run_json(
        capsys, "lemma32", "builtin:heisenberg", "x", "x", "y",
        "--chi", "h", "--m", "1", "--cap", "12",
    )
    assert code == 0
    payload = doc["payload"]
    assert payload["verdict"] == "non-vanishing"
    assert payload["extension-cap"] == 12
    assert payload["machinery-fired"] is True
    assert payload["witness"] == "[x*z*h*h*h]"
    assert payload["witness-h-coefficients"] == {"3": "[x*z]"}
    assert payload["scaled-product"]["y-witness"] == "-z*h*h"
    assert [s["holds"] for s in payload["scaling-chain"]] == [True, True, True]


def test_lemma32_human_contains_witnesses(capsys):
    code, out = run(
        capsys, "lemma32", "builtin:heisenberg", "x", "x", "y",
        "--chi", "h", "--m", "1",
    )
    assert code == 0
    assert "x cochain:" in out
    assert "y cochain:" in out
    assert "chi^3 x = [x*z*h*h*h]" in out
    assert "h^3 : [x*z]" in out


def test_lemma32_cap_gate(capsys):
    code, doc = run_json(
        capsys, "lemma32", "builtin:heisenberg", "x", "x", "y",
        "--chi", "h", "--m", "1", "--cap", "5",
    )
    assert code == 4
    assert doc["status"] == "cap-too-small"
    assert doc["payload"]["required-cap"] == 9
    assert doc["payload"]["given-cap"] == 5


def test_lemma32_premise_failure(capsys):
    code, doc = run_json(
        capsys, "lemma32", "builtin:torus", "x", "x", "x",
        "--chi", "h", "--m", "1",
    )
    assert code == 12
    assert doc["status"] == "premise-failed"


def test_transfer_rotation_inconclusive(capsys):
    code, doc = run_json(capsys, "transfer", "builtin:rotation", "eN", "eS", "eN")
    assert code == 12
    assert doc["payload"]["verdict"] == "inconclusive"
    assert doc["payload"]["containment-holds"] is True


def test_transfer_datum_file_path(capsys):
    code, doc = run_json(
        capsys, "transfer", os.path.join(DATA, "rotation.datum"), "eN", "eS", "eN"
    )
    assert code == 12


def test_transfer_broken_datum_rejected(capsys):
    code, doc = run_json(
        capsys, "transfer", "builtin:rotation-broken-push", "eN", "eS", "eN"
    )
    assert code == 3
    assert any("projection formula" in f for f in doc["payload"]["findings"])


def test_transfer_undefined_triple(capsys):
    code, doc = run_json(capsys, "transfer", "builtin:rotation", "eN", "eN", "eN")
    assert code == 11


def test_theorem11_heisenberg_audit_trail(capsys):
    code, doc = run_json(
        capsys, "theorem11", "builtin:heisenberg", "x", "x", "y",
        "--chi", "h", "--m", "1",
    )
    assert code == 0
    payload = doc["payload"]
    assert payload["verdict"] == "non-vanishing"
    assert payload["pipeline-status"] == "ok"
    assert payload["euler"]["machinery-fired"] is True
    assert payload["gysin"]["verdict"] == "non-vanishing"
    assert payload["gysin"]["containment-holds"] is True


def test_theorem11_torus_premise_failure(capsys):
    code, doc = run_json(
        capsys, "theorem11", "builtin:torus", "x", "x", "y",
        "--chi", "h", "--m", "1",
    )
    assert code == 12
    assert doc["status"] == "premise-failed"
    assert "premise-error" in doc["payload"]


def test_theorem11_with_stored_datum(capsys):
    code, doc = run_json(
        capsys, "theorem11", "eN", "eS", "eN", "--datum", "builtin:rotation"
    )
    assert code == 12
    assert doc["payload"]["verdict"] == "inconclusive"


def test_theorem11_arg_count_errors(capsys):
    code, doc = run_json(capsys, "theorem11", "x", "y")
    assert code == 2
    code, doc = run_json(
        capsys, "theorem11", "builtin:heisenberg", "x", "x", "y",
        "--datum", "builtin:rotation",
    )
    assert code == 2
    code, doc = run_json(
        capsys, "theorem11", "eN", "eS", "eN",
        "--datum", "builtin:rotation", "--chi", "h",
    )
    assert code == 2


def test_scan_default_family_clean(capsys):
    code, doc = run_json(capsys, "scan", "builtin:default")
    assert code == 0
    payload = doc["payload"]
    assert payload["findings"] == []
    assert payload["total"] == 8
    assert payload["completed"] == 8
    assert payload["exhausted"] is False


def test_scan_corrupted_demo_flags_datum_not_counterexample(capsys):
    code, doc = run_json(capsys, "scan", "builtin:corrupted-demo")
    assert code == 0
    row = doc["payload"]["rows"][0]
    assert row["status"] == "invalid-datum"
    assert "projection formula" in row["note"]
    assert doc["payload"]["findings"] == []


def test_scan_family_file(capsys):
    code, doc = run_json(capsys, "scan", os.path.join(DATA, "demo.family"))
    assert code == 0
    assert doc["payload"]["total"] == 3


def test_scan_budget(capsys):
    code, doc = run_json(capsys, "scan", "builtin:default", "--budget", "2")
    assert code == 0
    assert doc["payload"]["completed"] == 2
    assert doc["payload"]["exhausted"] is True
    code, doc = run_json(capsys, "scan", "builtin:default", "--budget", "-1")
    assert code == 3


def test_scan_expectation_mismatch_exits_13(capsys, tmp_path):
    family = tmp_path / "wrong.family"
    family.write_text(
        "[config]\n"
        "name = wrong-expect\n"
        "model = builtin:heisenberg\n"
        "triple = x | x | y\n"
        "chi = h\n"
        "m = 1\n"
        "expect = vanishes\n"
    )
    code, doc = run_json(capsys, "scan", str(family))
    assert code == 13
    assert len(doc["payload"]["findings"]) == 1
    assert "wrong-expect" in doc["payload"]["findings"][0]


def test_scan_unknown_family(capsys):
    code, doc = run_json(capsys, "scan", "no-such-family")
    assert code == 2


def test_structured_output_is_deterministic(capsys):
    _, first = run(
        capsys, "theorem11", "builtin:heisenberg", "x", "x", "y",
        "--chi", "h", "--m", "1", "--format", "structured",
    )
    _, second = run(
        capsys, "theorem11", "builtin:heisenberg", "x", "x", "y",
        "--chi", "h", "--m", "1", "--format", "structured",
    )
    assert first == second


def test_structured_output_round_trips(capsys):
    _, out = run(capsys, "scan", "builtin:default", "--format", "structured")
    rep = report_from_json(out)
    assert rep.command == "scan"
    assert rep.exit_code == 0


def test_bad_arguments_exit_2(capsys):
    assert main([]) == 2
    capsys.readouterr()
    assert main(["no-such-command"]) == 2
    capsys.readouterr()
