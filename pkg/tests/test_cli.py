"""CLI behavior: exit codes, golden outputs, determinism."""

import json

import pytest

from burnside.cli import main
from burnside.ratmat import matrix_from_csv, matrix_from_json

import goldens


def test_build_golden_value(tmp_path, capsys):
    out = tmp_path / "v32"
    assert main(["build", "--model", "value", "--k", "3", "--n", "2", "--out", str(out)]) == 0
    q, rows, cols = matrix_from_json(json.loads((out / "Q.json").read_text()))
    assert rows == cols == goldens.VALUE_32_DUALS
    payload = json.loads((out / "Q.json").read_text())
    assert payload["entries"] == goldens.VALUE_32_Q
    a_payload = json.loads((out / "A.json").read_text())
    assert a_payload["entries"] == goldens.VALUE_32_A
    k_csv, k_rows, _ = matrix_from_csv((out / "K.csv").read_text())
    assert k_rows == goldens.VALUE_32_WORDS
    pi = json.loads((out / "piQ.json").read_text())
    assert pi["entries"] == goldens.VALUE_32_PI_Q


def test_build_golden_coord(tmp_path):
    out = tmp_path / "c23"
    assert main(["build", "--model", "coord", "--k", "2", "--n", "3", "--out", str(out)]) == 0
    payload = json.loads((out / "Q.json").read_text())
    assert payload["entries"] == goldens.COORD_23_Q
    assert payload["row_labels"] == goldens.COORD_23_DUALS
    k_payload = json.loads((out / "K.json").read_text())
    assert k_payload["entries"] == goldens.COORD_23_K
    assert k_payload["row_labels"] == goldens.COORD_23_WORDS


def test_build_single_state_chain(tmp_path):
    out = tmp_path / "v25"
    assert main(["build", "--model", "value", "--k", "2", "--n", "5", "--out", str(out)]) == 0
    payload = json.loads((out / "Q.json").read_text())
    assert payload["entries"] == [["1"]]
    pi = json.loads((out / "piQ.json").read_text())
    assert pi["entries"] == ["1"]


def test_verify_pass(capsys):
    code = main(["verify", "--model", "value", "--k", "3", "--n", "2", "--tmax", "30"])
    out = capsys.readouterr().out
    assert code == 0
    assert "FAIL" not in out
    assert "PASS nonzero_spectrum_equal" in out


def test_verify_expected_lump_failure(capsys):
    code = main(
        ["verify", "--model", "coord", "--k", "2", "--n", "4", "--tmax", "20",
         "--expect-lump-failure", "cycle-count"]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "PASS expected_lump_failure" in out
    assert "17/48" in out and "19/48" in out


def test_verify_rejects_unexpected_lump_flag(capsys):
    code = main(
        ["verify", "--model", "value", "--k", "3", "--n", "2", "--tmax", "10",
         "--expect-lump-failure", "cycle-count"]
    )
    assert code == 1


def test_mix_csv_deterministic(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["mix", "--model", "coord", "--k", "2", "--n", "3", "--tmax", "8", "--eps", "1/4"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    header = out1.read_text().splitlines()[0]
    assert header == "t,d_fine,d_lumped,bound_name,bound_value,ok"


def test_mix_json_summary(tmp_path):
    out = tmp_path / "mix.json"
    assert main(
        ["mix", "--model", "value", "--k", "4", "--n", "3", "--tmax", "20",
         "--format", "json", "--out", str(out)]
    ) == 0
    payload = json.loads(out.read_text())
    names = {b["name"]: b for b in payload["summary"]["bounds"]}
    assert names["paguyo_K"]["verified"]
    tmix = payload["summary"]["mixing_times"]["1/4"]
    assert abs(tmix["Q"] - tmix["K"]) <= 1


def test_sample_deterministic_summary(tmp_path):
    out1 = tmp_path / "s1.json"
    out2 = tmp_path / "s2.json"
    args = ["sample", "--model", "coord", "--k", "2", "--n", "6", "--chain", "dual",
            "--steps", "2000", "--seed", "42"]
    assert main(args + ["--summary", str(out1)]) == 0
    assert main(args + ["--summary", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    assert payload["steps"] == 2000 and payload["start"] == "e"


def test_sample_primal_no_matrices(tmp_path):
    # the primal walk at k=5, n=4 never builds a kernel matrix
    out = tmp_path / "traj.txt"
    code = main(
        ["sample", "--model", "value", "--k", "5", "--n", "4", "--chain", "primal",
         "--start", "1111", "--steps", "500", "--seed", "7", "--out", str(out),
         "--summary", str(tmp_path / "s.json")]
    )
    assert code == 0
    assert len(out.read_text().splitlines()) == 501


def test_sample_rejects_derangement_start():
    code = main(
        ["sample", "--model", "value", "--k", "2", "--n", "2", "--chain", "dual",
         "--start", "(1 2)", "--steps", "10"]
    )
    assert code == 2


def test_closedform_all_equal(capsys):
    code = main(["closedform", "--model", "coord", "--k", "2", "--n", "3",
                 "--g", "e", "--h", "(1 2 3)"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["all_equal"]
    assert payload["Q(g,h)"]["brute_force"] == "1/24"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--model", "value", "--k", "3"])
    assert exc.value.code == 2


def test_cap_exceeded_exit_code(monkeypatch):
    monkeypatch.setenv("BURNSIDE_MAX_STATES", "10")
    code = main(["build", "--model", "coord", "--k", "2", "--n", "5", "--out", "/tmp/ignored"])
    assert code == 2


def test_mix_tmax_zero_emits_only_t0_rows(tmp_path):
    out = tmp_path / "mix0.csv"
    main(["mix", "--model", "value", "--k", "3", "--n", "2", "--tmax", "0",
          "--out", str(out)])
    rows = out.read_text().splitlines()
    assert rows[0].startswith("t,")
    assert all(line.split(",")[0] == "0" for line in rows[1:])


def test_sample_zero_steps_point_mass(tmp_path):
    out = tmp_path / "s.json"
    code = main(["sample", "--model", "value", "--k", "3", "--n", "2",
                 "--chain", "primal", "--start", "12", "--steps", "0",
                 "--seed", "5", "--summary", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["counts"] == {"12": 1}
    assert payload["final_state"] == "12"


def test_verify_pass_coord(capsys):
    code = main(["verify", "--model", "coord", "--k", "2", "--n", "3", "--tmax", "30"])
    out = capsys.readouterr().out
    assert code == 0
    assert "FAIL" not in out
    assert "PASS absolute_gaps_agree" in out
