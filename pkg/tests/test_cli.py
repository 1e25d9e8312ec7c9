import json
from pathlib import Path

import pytest

from grlin import cli
from grlin.hmat import identity, matrix_to_json
from grlin.ring import catalog_ring

FIX = Path(__file__).resolve().parents[1] / "fixtures"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out or err)


def test_rank_of_q2_example(capsys):
    code, d = run_json(capsys, "rank", FIX / "q2_rank_one.json")
    assert code == 0 and d["rank"] == 1 and d["schema"] == "grlin/1"


def test_rank_of_identity(capsys, tmp_path):
    Q2 = catalog_ring("Q2")
    p = tmp_path / "i3.json"
    p.write_text(json.dumps({"matrix": matrix_to_json(identity(Q2, (0, 1, 0)))}))
    code, d = run_json(capsys, "rank", p, "--certificate")
    assert code == 0 and d["rank"] == 3 and len(d["pivots"]) == 3


def test_bad_distribution_exit_code(capsys):
    code, d = run_json(capsys, "rank", FIX / "q2_bad_distribution.json")
    assert code == cli.EXIT_DIST and d["cell"] == [2, 1]


def test_parse_errors(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert run(capsys, "rank", p)[0] == cli.EXIT_PARSE
    assert run(capsys, "no-such-command")[0] == cli.EXIT_PARSE
    assert run(capsys, "verify", "nonsense")[0] == cli.EXIT_PARSE
    assert run(capsys, "rank", FIX / "q2_rank_one.json", "--ring", "NOPE")[0] == cli.EXIT_PARSE
    assert run(capsys, "check-cert", "malcolmson", "bundled:missing")[0] == cli.EXIT_PARSE


def test_verify_pm_suite(capsys):
    code, d = run_json(capsys, "verify", "pm", "--ring", "Q2", "--seed", "7")
    assert code == 0 and d["passed"] and d["seed"] == 7


@pytest.mark.parametrize("name", ["intro-c2", "exf-two-points", "tx-local", "ab-decomposition"])
def test_verify_examples(capsys, name):
    code, d = run_json(capsys, "verify", "examples", "--name", name)
    assert code == 0 and d["passed"]


@pytest.mark.parametrize("suite", ["matrf", "modrf", "maprf", "closure", "tuples", "malcolmson", "rank-triple"])
def test_other_suites_run(capsys, suite):
    ring = "QL" if suite in ("matrf", "modrf", "maprf", "rank-triple") else "Q2"
    code, d = run_json(capsys, "verify", suite, "--ring", ring, "--budget", "20")
    assert code == 0 and d["passed"]


def test_check_bundled_certificates(capsys):
    code, d = run_json(capsys, "check-cert", "malcolmson", "bundled:trivial-Q2")
    assert code == 0 and d["accepted"]
    code, d = run_json(capsys, "check-malcolmson", "bundled:exf-E")
    assert code == 0 and d["accepted"] and d["image_of_r"] == []
    code, d = run_json(capsys, "check-cert", "derivation", "bundled:ab-decomposition")
    assert code == 0 and d["accepted"] and d["depth"] == 1


def test_check_certificate_files(capsys):
    for name in ("malcolmson_trivial-Q2", "malcolmson_exf-E", "malcolmson_exf-F-roundtrip"):
        code, d = run_json(capsys, "check-cert", "malcolmson", FIX / f"{name}.json")
        assert code == 0 and d["accepted"], name
    code, d = run_json(capsys, "check-cert", "derivation", FIX / "derivation_ab.json")
    assert code == 0 and d["accepted"]


def test_flipped_certificate_rejected_with_cell(capsys):
    code, d = run_json(capsys, "check-cert", "malcolmson", FIX / "malcolmson_flipped.json")
    assert code == cli.EXIT_FAIL and not d["accepted"] and d["cell"] == [3, 3]


def test_schema_violation(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"ring": "Q2"}))
    assert run(capsys, "check-cert", "derivation", p)[0] == cli.EXIT_PARSE


def test_regrade_command(capsys):
    code, d = run_json(capsys, "regrade", FIX / "ql_regrade.json", "--ring", "QL", "--omega", "2")
    assert code == 0 and d["alpha"] == [0, 1] and d["beta"] == [0, 1]
    code, d = run_json(capsys, "regrade", FIX / "ql_regrade.json", "--ring", "QL")
    assert code == 0 and d["alpha"] == ["e", "e"] and d["beta"] == ["e", "e"]


def test_eval_tuple_and_cramer(capsys):
    code, d = run_json(capsys, "eval-tuple", FIX / "tuple_t_inverse.json")
    assert code == 0 and d["value"] == [{"coeffs": 1, "deg": -1}] and d["degree"] == -1
    code, d = run_json(capsys, "cramer", FIX / "cramer_t_inverse.json")
    assert code == 0 and d["x_invertible"] and d["numerator_invertible"]


def test_output_is_reproducible(capsys):
    first = run(capsys, "verify", "tuples", "--seed", "3", "--budget", "10", "--json")
    second = run(capsys, "verify", "tuples", "--seed", "3", "--budget", "10", "--json")
    assert first == second


def test_plain_text_output(capsys):
    code, out, _ = run(capsys, "rank", FIX / "q2_rank_one.json")
    assert code == 0 and "rank: 1" in out and "schema: grlin/1" in out
