import json

import jsonschema
import pytest

from strata import schemas
from strata.cli import main
from strata.relations import CertificateLibrary, printed_quartic_cubic_relation, solve_two_part_quartic_cubic


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_bounds_two_two(capsys):
    obj = run_json(capsys, "bounds", "2,2")
    assert obj["lower"] == 3 and obj["upper"] == 3
    assert obj["paper_stated_lower"] == 4
    assert obj["report"]["command"] == "bounds"


def test_bounds_single_part(capsys):
    obj = run_json(capsys, "bounds", "4")
    assert (obj["lower"], obj["upper"]) == (6, 6)


def test_bounds_canonicalises_partition(capsys):
    obj = run_json(capsys, "bounds", "2,3^2")
    assert obj["mu"] == [3, 3, 2]


def test_classify(capsys):
    obj = run_json(capsys, "classify", "3,2,2")
    assert obj["verdict"] == "Stabilising"
    assert len(obj["certificate"]["terms"]) == 3
    assert run_json(capsys, "classify", "5,3")["verdict"] == "Growing"


def test_text_output(capsys):
    code, out, _ = run(capsys, "bounds", "9,8,8", "--text")
    assert code == 0
    assert "lower: 3" in out and "upper: 3" in out


def test_invalid_partition_exit_1(capsys):
    code, _, err = run(capsys, "bounds", "2,x")
    assert code == 1
    assert "bad partition" in err
    assert '"lower_cert"' in err  # the schema of the command is printed


def test_missing_command_exit_1(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_orbit_rank(capsys):
    obj = run_json(capsys, "orbit-rank", "2,1,1", "--roots", "0,1,-1")
    assert obj["rank"] == 2 and obj["orbit_size"] == 3
    assert len(obj["relation"]["terms"]) == 3
    obj = run_json(capsys, "orbit-rank", "2,1", "--roots", "0,inf")
    assert obj["rank"] == 2 and "relation" not in obj


def test_orbit_rank_bad_roots(capsys):
    assert run(capsys, "orbit-rank", "2,1", "--roots", "0,0")[0] == 1
    assert run(capsys, "orbit-rank", "2,1", "--roots", "0,pi")[0] == 1
    assert run(capsys, "orbit-rank", "2,1", "--roots", "0,1,2")[0] == 1


def test_parking(capsys):
    obj = run_json(capsys, "parking", "3,2,2")
    assert obj["a"] == [2, 2, 2] and obj["bound"] == 3
    obj = run_json(capsys, "parking", "3,1")
    assert obj["a"] is None and obj["bound"] is None


def test_examples_list_and_run(capsys):
    obj = run_json(capsys, "examples")
    names = [e["name"] for e in obj["examples"]]
    assert "two-two" in names and "quintic-cubic" in names
    obj = run_json(capsys, "examples", "--run")
    for e in obj["examples"]:
        assert e["ok"] == e["expected"], e


def test_verify_round_trip(capsys, tmp_path):
    path = tmp_path / "rel.json"
    path.write_text(json.dumps(solve_two_part_quartic_cubic().to_json()))
    obj = run_json(capsys, "verify", str(path))
    assert obj["ok"] and obj["relations"][0]["length"] == 4


def test_verify_rejects_false_relation(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(printed_quartic_cubic_relation().to_json()))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1
    assert json.loads(out)["relations"][0]["diagnostic"] == "nonzero sum"


def test_verify_malformed_file(capsys, tmp_path):
    path = tmp_path / "junk.json"
    path.write_text('{"terms": 3}')
    assert run(capsys, "verify", str(path))[0] == 1
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 1


def test_numsearch_writes_verifiable_file(capsys, tmp_path):
    path = tmp_path / "found.json"
    obj = run_json(capsys, "numsearch", "2,2", "--len", "3", "--seed", "0", "--out", str(path))
    assert obj["found"] and obj["relation"] is not None
    assert obj["report"]["inputs"]["seed"] == 0
    again = run_json(capsys, "verify", str(path))
    assert again["ok"]


def test_certs_flag(capsys, tmp_path):
    path = tmp_path / "certs.json"
    CertificateLibrary([solve_two_part_quartic_cubic()]).save(path)
    obj = run_json(capsys, "bounds", "4,3,1", "--certs", str(path))
    assert obj["upper"] == 3  # mu_r = 1 already gives 3
    obj = run_json(capsys, "bounds", "4,3", "--certs", str(path))
    assert obj["upper"] == 4


def test_inconsistent_exit_2(capsys, monkeypatch):
    import strata.bounds as bounds

    monkeypatch.setattr(bounds, "lower_bound_index", lambda mu: (10, 10))
    assert run(capsys, "bounds", "3,3")[0] == 2


def test_table(capsys):
    obj = run_json(capsys, "table", "--max-degree", "5", "--min-parts", "2")
    assert len(obj["rows"]) == sum((1, 2, 4, 6))  # partitions of 2..5 with >= 2 parts
    for row in obj["rows"]:
        assert 3 <= row["lower"] <= row["upper"]


@pytest.mark.parametrize("argv", [["bounds", "5,3"], ["parking", "4,2,2,2"], ["examples"],
                                  ["orbit-rank", "3,2,2", "--roots", "0,1,-1"]])
def test_outputs_validate(capsys, argv):
    obj = run_json(capsys, *argv)
    jsonschema.validate(obj, schemas.OUTPUT[argv[0]])
